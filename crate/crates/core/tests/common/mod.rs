//! Reference computations written directly from the definitions, sharing no
//! code with the library's matrix builders or eliminators.

#![allow(dead_code, clippy::needless_range_loop)]

use fatcut::diagram::Diagram;
use fatcut::interp::LinearSystem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `a (a-1) ... (a-b+1)` by repeated multiplication.
pub fn falling(a: u32, b: u32) -> BigInt {
    (0..b).fold(BigInt::one(), |acc, i| {
        if i > a {
            BigInt::zero()
        } else {
            acc * BigInt::from(a as i64 - i as i64)
        }
    })
}

fn pow(q: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * q)
}

/// Row for the condition `∂^(i,j) f (a, b) = 0` over the monomials of `d`.
fn condition_row(d: &Diagram, a: &BigRational, b: &BigRational, i: u32, j: u32) -> Vec<BigRational> {
    d.iter()
        .map(|p| {
            let c = falling(p.x, i) * falling(p.y, j);
            if c.is_zero() {
                BigRational::zero()
            } else {
                BigRational::from_integer(c) * pow(a, p.x - i) * pow(b, p.y - j)
            }
        })
        .collect()
}

/// Plain Gauss-Jordan over Q.
pub fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for k in c..cols {
            m[r][k] = &m[r][k] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let v = &m[r][k] * &f;
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// `#D - rank - 1` at the given points.
pub fn reference_dimension(l: &LinearSystem, points: &[(BigRational, BigRational)]) -> i64 {
    let mut rows = Vec::new();
    for (&m, (a, b)) in l.mults.as_slice().iter().zip(points) {
        for total in 0..m {
            for i in 0..=total {
                rows.push(condition_row(&l.diagram, a, b, i, total - i));
            }
        }
    }
    let rank = if rows.is_empty() { 0 } else { rational_rank(rows) };
    l.diagram.len() as i64 - rank as i64 - 1
}

/// Random rationals with numerators below `num` and denominators below `den`.
pub fn random_points(count: usize, seed: u64, num: i64, den: i64) -> Vec<(BigRational, BigRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = || {
        BigRational::new(
            BigInt::from(rng.gen_range(1..=num)),
            BigInt::from(rng.gen_range(1..=den)),
        )
    };
    (0..count).map(|_| (q(), q())).collect()
}

pub fn binom2(m: u32) -> u64 {
    m as u64 * (m as u64 + 1) / 2
}

/// `#D - 1 - Σ (m+1 choose 2)`.
pub fn reference_vdim(l: &LinearSystem) -> i64 {
    l.diagram.len() as i64 - 1 - l.mults.as_slice().iter().map(|&m| binom2(m) as i64).sum::<i64>()
}
