//! Lattice diagrams in N², column notation, translation equivalence and
//! affine cuts.
//!
//! A diagram is the monomial support of a system of curves: the point
//! `(x, y)` stands for `X^x Y^y`. Points are kept in ascending `(x, y)` order
//! so iteration, serialization and hashing are deterministic.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("translated point ({x}, {y}) leaves N²")]
    NegativeCoordinate { x: i64, y: i64 },
    #[error("point {0} lies on the cut line")]
    PointOnCutLine(LatticePoint),
    #[error("affine cut needs a non-zero linear part")]
    DegenerateCut,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: u32,
    pub y: u32,
}

impl LatticePoint {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    /// Total degree `x + y`.
    pub fn degree(self) -> u32 {
        self.x + self.y
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(u32, u32)> for LatticePoint {
    fn from((x, y): (u32, u32)) -> Self {
        Self { x, y }
    }
}

/// One column `a^u` of the column notation: `count` consecutive points
/// starting at height `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Column {
    pub count: u32,
    pub offset: u32,
}

/// Column notation `(a_1^u_1, ..., a_n^u_n)`; column `i` sits at `x = i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ColumnSpec {
    pub columns: Vec<Column>,
}

impl ColumnSpec {
    pub fn new(columns: impl IntoIterator<Item = (u32, u32)>) -> Self {
        Self {
            columns: columns
                .into_iter()
                .map(|(count, offset)| Column { count, offset })
                .collect(),
        }
    }

    pub fn total(&self) -> usize {
        self.columns.iter().map(|c| c.count as usize).sum()
    }
}

impl fmt::Display for ColumnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}^{}", c.count, c.offset)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    points: Vec<LatticePoint>,
}

impl Diagram {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_points(points: impl IntoIterator<Item = LatticePoint>) -> Self {
        let mut points: Vec<_> = points.into_iter().collect();
        points.sort_unstable();
        points.dedup();
        Self { points }
    }

    /// `⋃ {i} × {u_i, ..., u_i + a_i - 1}`.
    pub fn from_columns(spec: &ColumnSpec) -> Self {
        let mut points = Vec::with_capacity(spec.total());
        for (i, c) in spec.columns.iter().enumerate() {
            points.extend((c.offset..c.offset + c.count).map(|y| LatticePoint::new(i as u32, y)));
        }
        // already in canonical order: x ascending, then y ascending
        Self { points }
    }

    pub fn columns(columns: impl IntoIterator<Item = (u32, u32)>) -> Self {
        Self::from_columns(&ColumnSpec::new(columns))
    }

    /// All monomials of degree at most `d`.
    pub fn triangle(d: u32) -> Self {
        Self::columns((0..=d).map(|i| (d + 1 - i, 0)))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.points.iter().copied()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn max_x(&self) -> Option<u32> {
        self.points.last().map(|p| p.x)
    }

    pub fn max_y(&self) -> Option<u32> {
        self.points.iter().map(|p| p.y).max()
    }

    pub fn min_corner(&self) -> Option<(u32, u32)> {
        let mx = self.points.first()?.x;
        let my = self.points.iter().map(|p| p.y).min()?;
        Some((mx, my))
    }

    /// Largest coordinate appearing in the diagram (0 when empty).
    pub fn max_coordinate(&self) -> u32 {
        self.points.iter().map(|p| p.x.max(p.y)).max().unwrap_or(0)
    }

    /// Returns `self + v`, failing if any point leaves N².
    pub fn translate(&self, v: (i64, i64)) -> Result<Self, DiagramError> {
        let mut points = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let x = p.x as i64 + v.0;
            let y = p.y as i64 + v.1;
            if x < 0 || y < 0 || x > u32::MAX as i64 || y > u32::MAX as i64 {
                return Err(DiagramError::NegativeCoordinate { x, y });
            }
            points.push(LatticePoint::new(x as u32, y as u32));
        }
        // translation preserves lexicographic order
        Ok(Self { points })
    }

    /// The vector `v` with `self = other + v`, if the diagrams are translates.
    pub fn equivalent(&self, other: &Diagram) -> Option<(i64, i64)> {
        if self.len() != other.len() {
            return None;
        }
        let (Some(a), Some(b)) = (self.points.first(), other.points.first()) else {
            return Some((0, 0));
        };
        let v = (a.x as i64 - b.x as i64, a.y as i64 - b.y as i64);
        let same = self
            .points
            .iter()
            .zip(&other.points)
            .all(|(p, q)| p.x as i64 - q.x as i64 == v.0 && p.y as i64 - q.y as i64 == v.1);
        same.then_some(v)
    }

    /// Splits into `(D1, D2) = ({F < 0}, {F > 0})`.
    pub fn split(&self, cut: &AffineCut) -> Result<(Diagram, Diagram), DiagramError> {
        let mut below = Vec::new();
        let mut above = Vec::new();
        for &p in &self.points {
            match cut.sign_at(p) {
                std::cmp::Ordering::Less => below.push(p),
                std::cmp::Ordering::Greater => above.push(p),
                std::cmp::Ordering::Equal => return Err(DiagramError::PointOnCutLine(p)),
            }
        }
        Ok((Diagram { points: below }, Diagram { points: above }))
    }

    pub fn union(&self, other: &Diagram) -> Diagram {
        Diagram::from_points(self.iter().chain(other.iter()))
    }

    pub fn is_disjoint(&self, other: &Diagram) -> bool {
        self.iter().all(|p| !other.contains(p))
    }

    /// Column notation for the diagram when every column is a contiguous run.
    pub fn to_columns(&self) -> Option<ColumnSpec> {
        let Some(max_x) = self.max_x() else {
            return Some(ColumnSpec::default());
        };
        let mut columns = vec![Column { count: 0, offset: 0 }; max_x as usize + 1];
        let mut i = 0;
        while i < self.points.len() {
            let x = self.points[i].x;
            let start = self.points[i].y;
            let mut j = i;
            while j + 1 < self.points.len() && self.points[j + 1].x == x {
                if self.points[j + 1].y != self.points[j].y + 1 {
                    return None;
                }
                j += 1;
            }
            columns[x as usize] = Column {
                count: (j - i + 1) as u32,
                offset: start,
            };
            i = j + 1;
        }
        Some(ColumnSpec { columns })
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_columns() {
            Some(spec) if !spec.columns.is_empty() => write!(f, "{spec}"),
            _ => {
                f.write_str("[")?;
                for (i, p) in self.points.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
        }
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> DiagramError {
        DiagramError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), DiagramError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u32, DiagramError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a non-negative integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| DiagramError::Parse {
                pos: start,
                msg: "integer out of range".into(),
            })
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

impl FromStr for Diagram {
    type Err = DiagramError;

    /// Accepts column notation `2^3,1^0` or a point list `[(0,3),(0,4),(1,0)]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor {
            src: s.as_bytes(),
            pos: 0,
        };
        if cur.peek() == Some(b'[') {
            cur.pos += 1;
            let mut points = Vec::new();
            if cur.peek() == Some(b']') {
                cur.pos += 1;
            } else {
                loop {
                    cur.expect(b'(')?;
                    let x = cur.number()?;
                    cur.expect(b',')?;
                    let y = cur.number()?;
                    cur.expect(b')')?;
                    points.push(LatticePoint::new(x, y));
                    match cur.peek() {
                        Some(b',') => cur.pos += 1,
                        Some(b']') => {
                            cur.pos += 1;
                            break;
                        }
                        _ => return Err(cur.err("expected ',' or ']'")),
                    }
                }
            }
            if !cur.at_end() {
                return Err(cur.err("trailing input"));
            }
            return Ok(Diagram::from_points(points));
        }
        if cur.at_end() {
            return Ok(Diagram::empty());
        }
        let mut columns = Vec::new();
        loop {
            let count = cur.number()?;
            cur.expect(b'^')?;
            let offset = cur.number()?;
            columns.push((count, offset));
            if cur.at_end() {
                break;
            }
            cur.expect(b',')?;
        }
        Ok(Diagram::columns(columns))
    }
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The affine form `F(x, y) = r1·x + r2·y + r0` with rational coefficients,
/// stored as integers over a common positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineCut {
    x_coeff: i64,
    y_coeff: i64,
    constant: i64,
    denom: i64,
}

impl AffineCut {
    pub fn new(r1: Ratio<i64>, r2: Ratio<i64>, r0: Ratio<i64>) -> Result<Self, DiagramError> {
        if r1 == Ratio::from_integer(0) && r2 == Ratio::from_integer(0) {
            return Err(DiagramError::DegenerateCut);
        }
        let denom = r1.denom().lcm(r2.denom()).lcm(r0.denom());
        let scale = |r: Ratio<i64>| r.numer() * (denom / r.denom());
        Ok(Self::normalized(scale(r1), scale(r2), scale(r0), denom))
    }

    fn normalized(a: i64, b: i64, c: i64, den: i64) -> Self {
        let g = a.gcd(&b).gcd(&c).gcd(&den).max(1);
        Self {
            x_coeff: a / g,
            y_coeff: b / g,
            constant: c / g,
            denom: den / g,
        }
    }

    /// `a·x + b·y - c + 1/2`; the general shape of every cut in the lemmas.
    pub fn sloped(a: i64, b: i64, c: i64) -> Self {
        assert!(a != 0 || b != 0, "degenerate cut");
        Self::normalized(2 * a, 2 * b, 1 - 2 * c, 2)
    }

    /// `x - c + 1/2`: `D2` is everything with `x ≥ c`.
    pub fn vertical(c: i64) -> Self {
        Self::sloped(1, 0, c)
    }

    /// `y - c + 1/2`: `D2` is everything with `y ≥ c`.
    pub fn horizontal(c: i64) -> Self {
        Self::sloped(0, 1, c)
    }

    /// `x + y - c + 1/2`: `D2` is everything with `x + y ≥ c`.
    pub fn diagonal(c: i64) -> Self {
        Self::sloped(1, 1, c)
    }

    pub fn r1(&self) -> Ratio<i64> {
        Ratio::new(self.x_coeff, self.denom)
    }

    pub fn r2(&self) -> Ratio<i64> {
        Ratio::new(self.y_coeff, self.denom)
    }

    pub fn r0(&self) -> Ratio<i64> {
        Ratio::new(self.constant, self.denom)
    }

    /// Integer numerator `a·x + b·y + c` of `F` (the denominator is positive).
    pub fn scaled_value(&self, x: i64, y: i64) -> i128 {
        self.x_coeff as i128 * x as i128 + self.y_coeff as i128 * y as i128 + self.constant as i128
    }

    pub fn sign_at(&self, p: LatticePoint) -> std::cmp::Ordering {
        self.scaled_value(p.x as i64, p.y as i64).cmp(&0)
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        (self.x_coeff as f64 * x + self.y_coeff as f64 * y + self.constant as f64) / self.denom as f64
    }

    /// The same cut expressed in coordinates shifted by `v`, i.e. `G(p) = F(p - v)`.
    pub fn shifted(&self, v: (i64, i64)) -> Self {
        let c = self.constant - self.x_coeff * v.0 - self.y_coeff * v.1;
        Self::normalized(self.x_coeff, self.y_coeff, c, self.denom)
    }

    /// True when no point of `d` lies on `F = 0`.
    pub fn is_valid_for(&self, d: &Diagram) -> bool {
        d.iter().all(|p| self.sign_at(p) != std::cmp::Ordering::Equal)
    }
}

impl fmt::Display for AffineCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x + {}*y + {}", self.r1(), self.r2(), self.r0())
    }
}

#[derive(Serialize, Deserialize)]
struct CutRepr {
    r1: String,
    r2: String,
    r0: String,
}

impl Serialize for AffineCut {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CutRepr {
            r1: self.r1().to_string(),
            r2: self.r2().to_string(),
            r0: self.r0().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineCut {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CutRepr::deserialize(d)?;
        let parse = |s: &str| s.trim().parse::<Ratio<i64>>().map_err(D::Error::custom);
        AffineCut::new(parse(&repr.r1)?, parse(&repr.r2)?, parse(&repr.r0)?).map_err(D::Error::custom)
    }
}
