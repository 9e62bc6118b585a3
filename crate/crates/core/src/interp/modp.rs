//! Arithmetic in a word-sized prime field and dense rank by elimination.

use rand::Rng;

/// `2^61 - 1`, the default modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Returns `None` unless `p` is prime.
    pub fn new(p: u64) -> Option<Self> {
        is_prime(p).then_some(Self { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        let z = a as u128 * b as u128;
        if self.p == MERSENNE_61 {
            let s = (z as u64 & MERSENNE_61) + (z >> 61) as u64;
            if s >= MERSENNE_61 {
                s - MERSENNE_61
            } else {
                s
            }
        } else {
            (z % self.p as u128) as u64
        }
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn reduce(self, a: u64) -> u64 {
        a % self.p
    }

    /// Uniform sample from `[1, p - 1]`.
    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Rank of a row-major `rows × cols` matrix of reduced entries. Consumes the data.
pub fn rank(field: PrimeField, mut data: Vec<u64>, rows: usize, cols: usize) -> usize {
    debug_assert_eq!(data.len(), rows * cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for c in col..cols {
                data.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = field.inv(data[rank * cols + col]);
        for c in col..cols {
            data[rank * cols + c] = field.mul(data[rank * cols + c], inv);
        }
        let (head, tail) = data.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols..];
        for row in tail.chunks_exact_mut(cols) {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                row[c] = field.sub(row[c], field.mul(factor, pivot_row[c]));
            }
        }
        rank += 1;
    }
    rank
}
