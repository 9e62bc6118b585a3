//! Fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank of an integer matrix given as rows. All divisions are exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let Some(cols) = a.first().map(Vec::len) else {
        return 0;
    };
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let p = &pivot_row[col];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for c in col + 1..cols {
                let v = p * &row[c] - &lead * &pivot_row[c];
                row[c] = v / &prev;
            }
        }
        prev = head[rank][col].clone();
        rank += 1;
    }
    rank
}
