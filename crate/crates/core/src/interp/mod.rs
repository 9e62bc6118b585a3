//! Interpolation matrices of systems with fat base points and the rank
//! computations that give their dimension.
//!
//! For `L = L_D(m_1, ..., m_r)` the matrix has one row per condition
//! `(j, β)` with `|β| < m_j` and one column per monomial `α ∈ D`. The entry is
//! the `β`-th partial derivative of `X^α` evaluated at the `j`-th point, so
//! `dim L = #D - rank - 1` at points in general position.
//!
//! Two evaluation routes are provided: random points in a large prime field
//! (fast, one-sided) and exact rational points (fraction-free elimination).

pub mod exact;
pub mod modp;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::diagram::{Diagram, LatticePoint};
pub use modp::{PrimeField, MERSENNE_61};

/// Moduli below this are rejected: the error bound of the randomized test
/// is only meaningful for large fields.
pub const MIN_PRIME: u64 = 1 << 40;

/// Default column cap for the exact rational route.
pub const DEFAULT_EXACT_CAP: usize = 300;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("point {index} has a zero coordinate")]
    ZeroCoordinate { index: usize },
    #[error("expected {expected} points, got {got}")]
    PointCountMismatch { expected: usize, got: usize },
    #[error("modulus {modulus} is not prime")]
    NotPrime { modulus: u64 },
    #[error("modulus {modulus} is too small (needs > {bound})")]
    PrimeTooSmall { modulus: u64, bound: u64 },
    #[error("diagram has {cols} columns, exact cap is {cap}")]
    CapExceeded { cols: usize, cap: usize },
    #[error("diagram has {got} points, expected {expected}")]
    CardinalityMismatch { expected: usize, got: usize },
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// `a·(a-1)·…·(a-b+1)`; `1` for `b = 0` and `0` for `b > a`.
pub fn falling_factorial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    (a - b + 1..=a).fold(BigUint::one(), |acc, k| acc * k)
}

fn falling_factorial_mod(field: PrimeField, a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    (a - b + 1..=a).fold(1, |acc, k| field.mul(acc, field.reduce(k)))
}

fn binom2(m: u32) -> u64 {
    m as u64 * (m as u64 + 1) / 2
}

/// Base-point multiplicities `(m_1, ..., m_r)`, all positive.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityList(Vec<u32>);

impl MultiplicityList {
    pub fn new(entries: Vec<u32>) -> Result<Self, InterpError> {
        if entries.contains(&0) {
            return Err(InterpError::ZeroMultiplicity);
        }
        Ok(Self(entries))
    }

    /// `m^×k`.
    pub fn homogeneous(m: u32, k: usize) -> Self {
        assert!(m > 0, "multiplicity must be positive");
        Self(vec![m; k])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_mult(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `Σ (m_j + 1 choose 2)`.
    pub fn conditions(&self) -> u64 {
        self.0.iter().map(|&m| binom2(m)).sum()
    }

    /// Entries at `indices` (in the given order) and the complement (in list order).
    pub fn partition(&self, indices: &[usize]) -> (MultiplicityList, MultiplicityList) {
        let mut chosen = vec![false; self.0.len()];
        for &i in indices {
            chosen[i] = true;
        }
        let picked = indices.iter().map(|&i| self.0[i]).collect();
        let rest = self
            .0
            .iter()
            .zip(&chosen)
            .filter(|(_, &c)| !c)
            .map(|(&m, _)| m)
            .collect();
        (Self(rest), Self(picked))
    }

    pub fn sorted_desc(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self(v)
    }
}

impl fmt::Display for MultiplicityList {
    /// Compressed `mxk` notation, grouping consecutive equal entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let m = self.0[i];
            let run = self.0[i..].iter().take_while(|&&v| v == m).count();
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if run == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{m}x{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for MultiplicityList {
    type Err = InterpError;

    /// Comma-separated terms `m` or `mxk`, e.g. `7x6,6x4,1`. Empty input is the
    /// empty list.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        if s.trim().is_empty() {
            return Ok(Self(entries));
        }
        let mut pos = 0;
        for term in s.split(',') {
            let err = |msg: &str| InterpError::Parse {
                pos,
                msg: format!("{msg} in term '{}'", term.trim()),
            };
            let (m, k) = match term.trim().split_once(['x', 'X']) {
                Some((m, k)) => (m.trim(), k.trim()),
                None => (term.trim(), "1"),
            };
            let m: u32 = m.parse().map_err(|_| err("bad multiplicity"))?;
            let k: usize = k.parse().map_err(|_| err("bad repeat count"))?;
            if m == 0 {
                return Err(err("multiplicity must be positive"));
            }
            entries.extend(std::iter::repeat_n(m, k));
            pos += term.len() + 1;
        }
        Ok(Self(entries))
    }
}

impl Serialize for MultiplicityList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MultiplicityList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `L_D(m_1, ..., m_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearSystem {
    pub diagram: Diagram,
    pub mults: MultiplicityList,
}

impl LinearSystem {
    pub fn new(diagram: Diagram, mults: MultiplicityList) -> Self {
        Self { diagram, mults }
    }

    /// `L_d(m_1, ..., m_r)`: plane curves of degree `d`.
    pub fn plane(d: u32, mults: MultiplicityList) -> Self {
        Self::new(Diagram::triangle(d), mults)
    }

    pub fn conditions(&self) -> u64 {
        self.mults.conditions()
    }

    /// `#D - 1 - Σ (m_j + 1 choose 2)`.
    pub fn vdim(&self) -> i64 {
        self.diagram.len() as i64 - 1 - self.conditions() as i64
    }

    pub fn edim(&self) -> i64 {
        self.vdim().max(-1)
    }

    /// The degree `d` when the diagram is the full triangle of degree `d`.
    pub fn plane_degree(&self) -> Option<u32> {
        let n = self.diagram.len();
        let d = self.diagram.max_x()?;
        (n == (d as usize + 1) * (d as usize + 2) / 2 && self.diagram == Diagram::triangle(d)).then_some(d)
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.plane_degree() {
            Some(d) => write!(f, "L_{d}({})", self.mults),
            None => write!(f, "L_{{{}}}({})", self.diagram, self.mults),
        }
    }
}

/// A row label `(j, β)`: derivative `β` at base point `j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConditionIndex {
    pub point: usize,
    pub derivative: LatticePoint,
}

impl ConditionIndex {
    /// `|β|`, the amount subtracted from a column's bidegree.
    pub fn order(&self) -> u32 {
        self.derivative.degree()
    }
}

/// Rows of `M(L)` in a fixed order: by point, then by `|β|`, then by `β.x`.
pub fn condition_indices(mults: &MultiplicityList) -> Vec<ConditionIndex> {
    let mut rows = Vec::with_capacity(mults.conditions() as usize);
    for (point, &m) in mults.as_slice().iter().enumerate() {
        for total in 0..m {
            for bx in 0..=total {
                rows.push(ConditionIndex {
                    point,
                    derivative: LatticePoint::new(bx, total - bx),
                });
            }
        }
    }
    rows
}

/// The polynomial entry of `M(L)` at `(row, col)` as `coeff · P_X^ex · P_Y^ey`
/// in the row's point variables, or `None` when it vanishes.
pub fn symbolic_entry(row: &ConditionIndex, col: LatticePoint) -> Option<(BigUint, (u32, u32))> {
    let b = row.derivative;
    if col.x < b.x || col.y < b.y {
        return None;
    }
    let coeff = falling_factorial(col.x as u64, b.x as u64) * falling_factorial(col.y as u64, b.y as u64);
    Some((coeff, (col.x - b.x, col.y - b.y)))
}

/// Evaluation points for [`build_matrix`] and the field they live in.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSet {
    Modular { modulus: u64, coords: Vec<(u64, u64)> },
    Rational(Vec<(BigRational, BigRational)>),
}

impl PointSet {
    fn len(&self) -> usize {
        match self {
            PointSet::Modular { coords, .. } => coords.len(),
            PointSet::Rational(c) => c.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixEntries {
    /// Row-major residues.
    Modular {
        modulus: u64,
        data: Vec<u64>,
    },
    Rational(Vec<Vec<BigRational>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationMatrix {
    pub rows: Vec<ConditionIndex>,
    pub cols: Vec<LatticePoint>,
    pub entries: MatrixEntries,
    pub points: PointSet,
}

impl InterpolationMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn rank(&self) -> usize {
        match &self.entries {
            MatrixEntries::Modular { modulus, data } => {
                let field = PrimeField::new(*modulus).expect("validated at construction");
                modp::rank(field, data.clone(), self.nrows(), self.ncols())
            }
            MatrixEntries::Rational(rows) => exact::bareiss_rank(integer_rows(rows)),
        }
    }
}

/// Clears denominators row by row; row scaling does not change the rank.
fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    use num_integer::Integer;
    rows.iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect()
}

fn validate_modulus(modulus: u64, diagram: &Diagram) -> Result<PrimeField, InterpError> {
    let field = PrimeField::new(modulus).ok_or(InterpError::NotPrime { modulus })?;
    // A falling factorial of integers ≤ max coordinate is divisible by p only
    // when p ≤ max coordinate, so this bound keeps every coefficient non-zero.
    let bound = MIN_PRIME.max(diagram.max_coordinate() as u64);
    if modulus <= bound {
        return Err(InterpError::PrimeTooSmall { modulus, bound });
    }
    Ok(field)
}

fn modular_entries(field: PrimeField, system: &LinearSystem, coords: &[(u64, u64)]) -> Vec<u64> {
    let d = &system.diagram;
    let max_x = d.max_x().unwrap_or(0) as usize;
    let max_y = d.max_y().unwrap_or(0) as usize;
    let max_m = system.mults.max_mult() as usize;
    let ff: Vec<Vec<u64>> = (0..=max_x.max(max_y))
        .map(|a| {
            (0..max_m)
                .map(|b| falling_factorial_mod(field, a as u64, b as u64))
                .collect()
        })
        .collect();
    let rows = condition_indices(&system.mults);
    let cols = d.len();
    let mut data = vec![0u64; rows.len() * cols];
    let mut px_pow = vec![0u64; max_x + 1];
    let mut py_pow = vec![0u64; max_y + 1];
    let mut last_point = usize::MAX;
    for (r, row) in rows.iter().enumerate() {
        if row.point != last_point {
            last_point = row.point;
            let (px, py) = coords[row.point];
            let (px, py) = (field.reduce(px), field.reduce(py));
            px_pow[0] = 1;
            for e in 1..=max_x {
                px_pow[e] = field.mul(px_pow[e - 1], px);
            }
            py_pow[0] = 1;
            for e in 1..=max_y {
                py_pow[e] = field.mul(py_pow[e - 1], py);
            }
        }
        let (bx, by) = (row.derivative.x as usize, row.derivative.y as usize);
        let out = &mut data[r * cols..(r + 1) * cols];
        for (slot, a) in out.iter_mut().zip(d.iter()) {
            let (ax, ay) = (a.x as usize, a.y as usize);
            if ax < bx || ay < by {
                continue;
            }
            let c = field.mul(ff[ax][bx], ff[ay][by]);
            *slot = field.mul(c, field.mul(px_pow[ax - bx], py_pow[ay - by]));
        }
    }
    data
}

fn rational_pow(v: &BigRational, e: u32) -> BigRational {
    num_traits::pow(v.clone(), e as usize)
}

fn rational_entries(system: &LinearSystem, coords: &[(BigRational, BigRational)]) -> Vec<Vec<BigRational>> {
    let rows = condition_indices(&system.mults);
    rows.iter()
        .map(|row| {
            let (px, py) = &coords[row.point];
            system
                .diagram
                .iter()
                .map(|a| match symbolic_entry(row, a) {
                    None => BigRational::zero(),
                    Some((c, (ex, ey))) => {
                        BigRational::from_integer(BigInt::from(c)) * rational_pow(px, ex) * rational_pow(py, ey)
                    }
                })
                .collect()
        })
        .collect()
}

/// Builds `M(L)` evaluated at the given points.
pub fn build_matrix(system: &LinearSystem, points: &PointSet) -> Result<InterpolationMatrix, InterpError> {
    let r = system.mults.len();
    if points.len() != r {
        return Err(InterpError::PointCountMismatch {
            expected: r,
            got: points.len(),
        });
    }
    let entries = match points {
        PointSet::Modular { modulus, coords } => {
            let field = validate_modulus(*modulus, &system.diagram)?;
            if let Some(index) = coords
                .iter()
                .position(|&(x, y)| field.reduce(x) == 0 || field.reduce(y) == 0)
            {
                return Err(InterpError::ZeroCoordinate { index });
            }
            MatrixEntries::Modular {
                modulus: *modulus,
                data: modular_entries(field, system, coords),
            }
        }
        PointSet::Rational(coords) => {
            if let Some(index) = coords.iter().position(|(x, y)| x.is_zero() || y.is_zero()) {
                return Err(InterpError::ZeroCoordinate { index });
            }
            MatrixEntries::Rational(rational_entries(system, coords))
        }
    };
    Ok(InterpolationMatrix {
        rows: condition_indices(&system.mults),
        cols: system.diagram.points().to_vec(),
        entries,
        points: points.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Certainty {
    /// Rank at random points already reaches the expected value; sound.
    CertifiedNonSpecial,
    /// Every trial left a rank deficit; the system is special unless all
    /// trials hit the Schwartz-Zippel exceptional set.
    ProbablySpecial { trials: u32, error_bound: f64 },
    /// Rank over Q at the given points.
    ExactRational,
}

impl Certainty {
    pub fn name(&self) -> &'static str {
        match self {
            Certainty::CertifiedNonSpecial => "CertifiedNonSpecial",
            Certainty::ProbablySpecial { .. } => "ProbablySpecial",
            Certainty::ExactRational => "ExactRational",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub system: LinearSystem,
    pub value: i64,
    pub certainty: Certainty,
    pub vdim: i64,
    pub edim: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub trial_ranks: Vec<usize>,
}

impl DimensionResult {
    pub fn is_special(&self) -> bool {
        self.value > self.edim
    }

    /// Plain `key: value` record.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(&v);
            out.push('\n');
        };
        line("system", self.system.to_string());
        line("value", self.value.to_string());
        line("certainty", self.certainty.name().to_string());
        if let Certainty::ProbablySpecial { trials, error_bound } = &self.certainty {
            line("trials", trials.to_string());
            line("error_bound", format!("{error_bound:e}"));
        }
        line("vdim", self.vdim.to_string());
        line("edim", self.edim.to_string());
        if let Some(p) = self.modulus {
            line("modulus", p.to_string());
        }
        if let Some(s) = self.seed {
            line("seed", s.to_string());
        }
        let ranks: Vec<String> = self.trial_ranks.iter().map(|r| r.to_string()).collect();
        line("trial_ranks", ranks.join(","));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankConfig {
    pub modulus: u64,
    pub trials: u32,
    pub seed: u64,
}

impl Default for RankConfig {
    fn default() -> Self {
        Self {
            modulus: MERSENNE_61,
            trials: 3,
            seed: 0,
        }
    }
}

impl RankConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Random nonzero coordinates for trial `trial`; each trial uses its own
/// ChaCha stream so trials are independent and reproducible.
pub fn random_points(field: PrimeField, count: usize, seed: u64, trial: u32) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    (0..count)
        .map(|_| (field.random_nonzero(&mut rng), field.random_nonzero(&mut rng)))
        .collect()
}

/// Schwartz-Zippel bound on every trial missing a non-vanishing maximal minor.
fn error_bound(diagram: &Diagram, modulus: u64, trials: u32) -> f64 {
    let degree: f64 = diagram.iter().map(|p| p.degree() as f64).sum();
    (degree / (modulus - 1) as f64).min(1.0).powi(trials as i32)
}

/// Dimension from ranks at random points of `F_p`, minimized over trials.
///
/// Specializing points can only lower the rank, so every trial gives an upper
/// bound for the generic dimension; reaching `edim` certifies non-speciality.
pub fn generic_dimension(system: &LinearSystem, config: &RankConfig) -> Result<DimensionResult, InterpError> {
    assert!(config.trials >= 1, "at least one trial is required");
    let field = validate_modulus(config.modulus, &system.diagram)?;
    let (vdim, edim) = (system.vdim(), system.edim());
    let n = system.diagram.len() as i64;
    let rows = system.conditions() as usize;
    let mut best = i64::MAX;
    let mut ranks = Vec::new();
    for trial in 0..config.trials {
        let rank = if rows == 0 || n == 0 {
            0
        } else {
            let coords = random_points(field, system.mults.len(), config.seed, trial);
            let data = modular_entries(field, system, &coords);
            modp::rank(field, data, rows, n as usize)
        };
        ranks.push(rank);
        best = best.min(n - rank as i64 - 1);
        if best == edim {
            break;
        }
    }
    let certainty = if best == edim {
        Certainty::CertifiedNonSpecial
    } else {
        Certainty::ProbablySpecial {
            trials: ranks.len() as u32,
            error_bound: error_bound(&system.diagram, config.modulus, ranks.len() as u32),
        }
    };
    Ok(DimensionResult {
        system: system.clone(),
        value: best,
        certainty,
        vdim,
        edim,
        modulus: Some(config.modulus),
        seed: Some(config.seed),
        trial_ranks: ranks,
    })
}

/// Dimension at the given rational points by exact elimination.
pub fn exact_dimension(
    system: &LinearSystem,
    points: &[(BigRational, BigRational)],
) -> Result<DimensionResult, InterpError> {
    exact_dimension_capped(system, points, DEFAULT_EXACT_CAP)
}

pub fn exact_dimension_capped(
    system: &LinearSystem,
    points: &[(BigRational, BigRational)],
    cap: usize,
) -> Result<DimensionResult, InterpError> {
    if system.diagram.len() > cap {
        return Err(InterpError::CapExceeded {
            cols: system.diagram.len(),
            cap,
        });
    }
    let matrix = build_matrix(system, &PointSet::Rational(points.to_vec()))?;
    let rank = if matrix.nrows() == 0 { 0 } else { matrix.rank() };
    Ok(DimensionResult {
        system: system.clone(),
        value: system.diagram.len() as i64 - rank as i64 - 1,
        certainty: Certainty::ExactRational,
        vdim: system.vdim(),
        edim: system.edim(),
        modulus: None,
        seed: None,
        trial_ranks: vec![rank],
    })
}

/// Convenience wrapper for integer points.
pub fn integer_points(coords: &[(i64, i64)]) -> Vec<(BigRational, BigRational)> {
    coords
        .iter()
        .map(|&(x, y)| (BigRational::from_integer(x.into()), BigRational::from_integer(y.into())))
        .collect()
}

/// Whether `L_D(m)` is non-special for `#D = (m+1 choose 2)`: true iff the
/// points of `D` do not lie on a curve of degree `m - 1`, i.e. the matrix
/// `[α.x^β.x · α.y^β.y]_{|β|<m, α∈D}` (with `0^0 = 1`) has full rank.
pub fn onemult_check(diagram: &Diagram, m: u32) -> Result<bool, InterpError> {
    let expected = binom2(m) as usize;
    if diagram.len() != expected {
        return Err(InterpError::CardinalityMismatch {
            expected,
            got: diagram.len(),
        });
    }
    let rows: Vec<Vec<BigInt>> = condition_indices(&MultiplicityList(vec![m]))
        .iter()
        .map(|row| {
            diagram
                .iter()
                .map(|a| {
                    num_traits::pow(BigInt::from(a.x), row.derivative.x as usize)
                        * num_traits::pow(BigInt::from(a.y), row.derivative.y as usize)
                })
                .collect()
        })
        .collect();
    Ok(exact::bareiss_rank(rows) == expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ml(s: &str) -> MultiplicityList {
        s.parse().unwrap()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(2, 1), 2u32.into());
        assert_eq!(falling_factorial(5, 0), 1u32.into());
        assert_eq!(falling_factorial(3, 5), 0u32.into());
        assert_eq!(falling_factorial(7, 3), 210u32.into());
    }

    #[test]
    fn multiplicity_notation() {
        let m = ml("7x6,6x4,1");
        assert_eq!(m.len(), 11);
        assert_eq!(m.conditions(), 6 * 28 + 4 * 21 + 1);
        assert_eq!(m.to_string(), "7x6,6x4,1");
        assert_eq!(ml("").len(), 0);
        assert!(matches!(
            "3,0".parse::<MultiplicityList>(),
            Err(InterpError::Parse { .. })
        ));
        assert!(matches!(
            "3,ax2".parse::<MultiplicityList>(),
            Err(InterpError::Parse { pos: 2, .. })
        ));
        assert_eq!(MultiplicityList::new(vec![1, 0]), Err(InterpError::ZeroMultiplicity));
    }

    #[test]
    fn virtual_dimensions() {
        let l = LinearSystem::plane(21, ml("7x6,6x4,1"));
        assert_eq!(l.vdim(), 253 - 1 - (6 * 28 + 4 * 21 + 1));
        assert_eq!(l.vdim(), -1);
        let l = LinearSystem::plane(2, ml("2x2"));
        assert_eq!((l.vdim(), l.edim()), (-1, -1));
        let l = LinearSystem::plane(1, ml("1x7"));
        assert_eq!((l.vdim(), l.edim()), (-5, -1));
        assert_eq!(l.to_string(), "L_1(1x7)");
    }

    #[test]
    fn matrix_entries() {
        let l = LinearSystem::plane(1, ml("1"));
        let m = build_matrix(&l, &PointSet::Rational(vec![(q(3), q(5))])).unwrap();
        assert_eq!(m.entries, MatrixEntries::Rational(vec![vec![q(1), q(5), q(3)]]));

        let row = ConditionIndex {
            point: 0,
            derivative: LatticePoint::new(1, 0),
        };
        // d/dX (X^2 Y) = 2 X Y
        assert_eq!(
            symbolic_entry(&row, LatticePoint::new(2, 1)),
            Some((2u32.into(), (1, 1)))
        );
        let row = ConditionIndex {
            point: 0,
            derivative: LatticePoint::new(2, 0),
        };
        assert_eq!(symbolic_entry(&row, LatticePoint::new(1, 1)), None);
    }

    #[test]
    fn matrix_shape_and_errors() {
        let l = LinearSystem::plane(4, ml("3,2,1"));
        let pts = PointSet::Modular {
            modulus: MERSENNE_61,
            coords: vec![(2, 3), (4, 5), (6, 7)],
        };
        let m = build_matrix(&l, &pts).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (6 + 3 + 1, 15));

        let bad = PointSet::Modular {
            modulus: MERSENNE_61,
            coords: vec![(2, 3), (0, 5), (6, 7)],
        };
        assert_eq!(build_matrix(&l, &bad), Err(InterpError::ZeroCoordinate { index: 1 }));
        let small = PointSet::Modular {
            modulus: 101,
            coords: vec![(2, 3), (4, 5), (6, 7)],
        };
        assert!(matches!(
            build_matrix(&l, &small),
            Err(InterpError::PrimeTooSmall { .. })
        ));
        let composite = PointSet::Modular {
            modulus: MERSENNE_61 - 2,
            coords: vec![(2, 3), (4, 5), (6, 7)],
        };
        assert!(matches!(
            build_matrix(&l, &composite),
            Err(InterpError::NotPrime { .. })
        ));
        let short = PointSet::Rational(vec![(q(1), q(1))]);
        assert!(matches!(
            build_matrix(&l, &short),
            Err(InterpError::PointCountMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn generic_dimension_examples() {
        let cfg = RankConfig::default();
        let pencil = generic_dimension(&LinearSystem::plane(1, ml("1x2")), &cfg).unwrap();
        assert_eq!(pencil.value, 0);
        assert_eq!(pencil.certainty, Certainty::CertifiedNonSpecial);

        let double_line = generic_dimension(&LinearSystem::plane(2, ml("2x2")), &cfg).unwrap();
        assert_eq!(double_line.value, 0);
        assert!(matches!(
            double_line.certainty,
            Certainty::ProbablySpecial { trials: 3, .. }
        ));
        assert_eq!(double_line.trial_ranks, vec![5, 5, 5]);
    }

    #[test]
    fn exact_dimension_examples() {
        let l = LinearSystem::plane(2, ml("2x2"));
        let r = exact_dimension(&l, &integer_points(&[(1, 2), (3, 5)])).unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.trial_ranks, vec![5]);

        let l = LinearSystem::plane(0, ml("1"));
        assert_eq!(exact_dimension(&l, &integer_points(&[(1, 1)])).unwrap().value, -1);

        let l = LinearSystem::plane(4, ml("2x5"));
        let r = exact_dimension(&l, &integer_points(&[(1, 2), (3, 1), (2, 7), (5, 3), (4, 11)])).unwrap();
        assert_eq!((r.value, r.edim, r.trial_ranks[0]), (0, -1, 14));

        let big = LinearSystem::plane(30, ml("1"));
        assert!(matches!(
            exact_dimension(&big, &integer_points(&[(1, 1)])),
            Err(InterpError::CapExceeded { cols: 496, cap: 300 })
        ));
    }

    #[test]
    fn onemult_examples() {
        let line = Diagram::columns([(1, 0), (1, 0), (1, 0)]);
        assert!(!onemult_check(&line, 2).unwrap());
        assert!(onemult_check(&Diagram::triangle(1), 2).unwrap());
        let back = Diagram::columns([(1, 2), (2, 1), (3, 0)]);
        assert!(onemult_check(&back, 3).unwrap());
        assert_eq!(
            onemult_check(&back, 2),
            Err(InterpError::CardinalityMismatch { expected: 3, got: 6 })
        );
    }
}
