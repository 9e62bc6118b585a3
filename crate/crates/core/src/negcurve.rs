//! Divisor classes on the blow-up of P² at general points, quadratic Cremona
//! moves, (-1)-classes and speciality witnesses.
//!
//! A class `(d; m_1, ..., m_r)` stands for `dH - Σ m_i E_i`, so the
//! exceptional curve `E_i` is `(0; ..., -1, ...)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interp::LinearSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NegCurveError {
    #[error("system {0} is not a plane curve system (diagram is not a full triangle)")]
    NotProjectivePlaneSystem(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub degree: i64,
    pub mults: Vec<i64>,
}

impl DivisorClass {
    pub fn new(degree: i64, mults: Vec<i64>) -> Self {
        let mut c = Self { degree, mults };
        c.normalize();
        c
    }

    /// `E_i` (0-based index).
    pub fn exceptional(i: usize) -> Self {
        let mut mults = vec![0; i + 1];
        mults[i] = -1;
        Self::new(0, mults)
    }

    pub fn from_system(degree: u32, system: &LinearSystem) -> Self {
        Self::new(
            degree as i64,
            system.mults.as_slice().iter().map(|&m| m as i64).collect(),
        )
    }

    fn normalize(&mut self) {
        while self.mults.last() == Some(&0) {
            self.mults.pop();
        }
    }

    pub fn mult(&self, i: usize) -> i64 {
        self.mults.get(i).copied().unwrap_or(0)
    }

    fn padded(&self, len: usize) -> Vec<i64> {
        let mut v = self.mults.clone();
        if v.len() < len {
            v.resize(len, 0);
        }
        v
    }

    /// Intersection product `d·d' - Σ m_i·m_i'`.
    pub fn pairing(&self, other: &DivisorClass) -> i64 {
        let n = self.mults.len().max(other.mults.len());
        self.degree * other.degree - (0..n).map(|i| self.mult(i) * other.mult(i)).sum::<i64>()
    }

    pub fn self_intersection(&self) -> i64 {
        self.pairing(self)
    }

    /// `-K·C = 3d - Σ m_i`.
    pub fn anticanonical_degree(&self) -> i64 {
        3 * self.degree - self.mults.iter().sum::<i64>()
    }

    /// `(d+1 choose 2) + d - Σ (m_i+1 choose 2)`, the virtual dimension of the
    /// plane system with this class.
    pub fn vdim(&self) -> i64 {
        (self.degree + 1) * (self.degree + 2) / 2 - 1 - self.mults.iter().map(|m| m * (m + 1) / 2).sum::<i64>()
    }

    /// Quadratic transformation centred at three distinct indices.
    pub fn quadratic_move(&self, idx: [usize; 3]) -> DivisorClass {
        let [i, j, k] = idx;
        let len = self.mults.len().max(i + 1).max(j + 1).max(k + 1);
        let mut m = self.padded(len);
        let d = self.degree;
        let (a, b, c) = (m[i], m[j], m[k]);
        m[i] = d - b - c;
        m[j] = d - a - c;
        m[k] = d - a - b;
        DivisorClass::new(2 * d - a - b - c, m)
    }

    /// Indices of the three largest multiplicities; ties broken by lower index.
    fn top_three(&self) -> [usize; 3] {
        let mut order: Vec<usize> = (0..self.mults.len().max(3)).collect();
        let m = self.padded(order.len());
        order.sort_by(|&a, &b| m[b].cmp(&m[a]).then(a.cmp(&b)));
        [order[0], order[1], order[2]]
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.degree)?;
        for (i, m) in self.mults.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

/// One quadratic move in a reduction trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaMove {
    pub indices: [usize; 3],
    pub before: DivisorClass,
    pub after: DivisorClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaTrace {
    pub result: DivisorClass,
    pub moves: Vec<CremonaMove>,
}

/// Applies quadratic moves on the three largest multiplicities while
/// `d ≥ 0` and `m_1 + m_2 + m_3 > d`. Every move strictly lowers `d`.
pub fn cremona_reduce(class: &DivisorClass) -> CremonaTrace {
    let mut current = class.clone();
    let mut moves = Vec::new();
    loop {
        if current.degree < 0 {
            break;
        }
        let idx = current.top_three();
        let s: i64 = idx.iter().map(|&i| current.mult(i)).sum();
        if s <= current.degree {
            break;
        }
        let next = current.quadratic_move(idx);
        moves.push(CremonaMove {
            indices: idx,
            before: current,
            after: next.clone(),
        });
        current = next;
    }
    CremonaTrace { result: current, moves }
}

/// Numerical (-1)-class test: `C² = -1`, `-K·C = 1`, and the Cremona orbit
/// reaches an exceptional class.
pub fn is_minus_one_class(c: &DivisorClass) -> bool {
    if c.self_intersection() != -1 || c.anticanonical_degree() != 1 {
        return false;
    }
    let reduced = cremona_reduce(c).result;
    // C² and K·C are invariant, so d = 0 forces a single -1 entry
    reduced.degree == 0 && reduced.mults.iter().filter(|&&m| m != 0).count() == 1
}

/// Low-degree (-1)-classes, as `(degree, multiplicities)`. Together with the
/// exceptional curves these are all (-1)-curves through at most 8 points.
pub const TEMPLATES: &[(i64, &[i64])] = &[
    (1, &[1, 1]),
    (2, &[1, 1, 1, 1, 1]),
    (3, &[2, 1, 1, 1, 1, 1, 1]),
    (4, &[2, 2, 2, 1, 1, 1, 1, 1]),
    (5, &[2, 2, 2, 2, 2, 2, 1, 1]),
    (6, &[3, 2, 2, 2, 2, 2, 2, 2]),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Exceptional,
    Template,
    CremonaTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub class: DivisorClass,
    pub pairing: i64,
    pub source: WitnessSource,
    /// Moves of the system's own reduction up to the point the witness
    /// appeared; empty for template witnesses.
    pub moves: Vec<CremonaMove>,
}

fn plane_class(system: &LinearSystem) -> Result<DivisorClass, NegCurveError> {
    let d = system
        .plane_degree()
        .ok_or_else(|| NegCurveError::NotProjectivePlaneSystem(system.to_string()))?;
    Ok(DivisorClass::from_system(d, system))
}

/// Searches for a (-1)-class `C` with `L·C ≤ -2`: exceptional classes, the
/// templates placed on the largest multiplicities, then classes exposed by
/// the system's own Cremona reduction.
pub fn find_witness(system: &LinearSystem) -> Result<Option<Witness>, NegCurveError> {
    let class = plane_class(system)?;
    Ok(witness_for_class(&class))
}

pub fn witness_for_class(class: &DivisorClass) -> Option<Witness> {
    let r = class.mults.len();
    for i in 0..r {
        let e = DivisorClass::exceptional(i);
        let pairing = class.pairing(&e);
        if pairing <= -2 {
            return Some(Witness {
                class: e,
                pairing,
                source: WitnessSource::Exceptional,
                moves: Vec::new(),
            });
        }
    }

    // rearrangement: pairing is minimized by matching the largest entries
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| class.mults[b].cmp(&class.mults[a]).then(a.cmp(&b)));
    for &(deg, pattern) in TEMPLATES {
        if pattern.len() > r {
            continue;
        }
        let mut mults = vec![0; r];
        for (slot, &m) in order.iter().zip(pattern) {
            mults[*slot] = m;
        }
        let candidate = DivisorClass::new(deg, mults);
        let pairing = class.pairing(&candidate);
        if pairing <= -2 {
            return Some(Witness {
                class: candidate,
                pairing,
                source: WitnessSource::Template,
                moves: Vec::new(),
            });
        }
    }

    // L_n = Q_n…Q_1 L, so L_n·E_i = L·(Q_1…Q_n E_i) since each Q is an
    // isometric involution.
    let trace = cremona_reduce(class);
    for step in 0..trace.moves.len() {
        let after = &trace.moves[step].after;
        if let Some(i) = (0..r).find(|&i| after.mult(i) <= -2) {
            let mut c = DivisorClass::exceptional(i);
            for mv in trace.moves[..=step].iter().rev() {
                c = c.quadratic_move(mv.indices);
            }
            let pairing = class.pairing(&c);
            debug_assert_eq!(pairing, after.mult(i));
            return Some(Witness {
                class: c,
                pairing,
                source: WitnessSource::CremonaTrace,
                moves: trace.moves[..=step].to_vec(),
            });
        }
    }
    None
}

/// Dimension predicted by reducing the class to standard form: negative
/// multiplicities are fixed exceptional components and are dropped, empty
/// classes (`d < 0`) give -1, and a standard class is assumed non-special.
pub fn predicted_dimension(class: &DivisorClass) -> i64 {
    let mut c = class.clone();
    loop {
        for m in c.mults.iter_mut() {
            if *m < 0 {
                *m = 0;
            }
        }
        c.normalize();
        if c.degree < 0 {
            return -1;
        }
        let idx = c.top_three();
        let s: i64 = idx.iter().map(|&i| c.mult(i)).sum();
        if s <= c.degree {
            return c.vdim().max(-1);
        }
        c = c.quadratic_move(idx);
    }
}

pub fn predicted_system_dimension(system: &LinearSystem) -> Result<i64, NegCurveError> {
    Ok(predicted_dimension(&plane_class(system)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(d: i64, m: &[i64]) -> DivisorClass {
        DivisorClass::new(d, m.to_vec())
    }

    fn sys(d: u32, mults: &str) -> LinearSystem {
        LinearSystem::plane(d, mults.parse().unwrap())
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(c(2, &[2, 2]).pairing(&c(1, &[1, 1])), -2);
        let l = c(7, &[3, 5, 2]);
        assert_eq!(l.pairing(&DivisorClass::exceptional(1)), 5);
        assert_eq!(c(1, &[1, 1]).self_intersection(), -1);
    }

    #[test]
    fn minus_one_classes() {
        assert!(is_minus_one_class(&c(0, &[-1])));
        assert!(is_minus_one_class(&c(1, &[1, 1])));
        assert!(is_minus_one_class(&c(2, &[1, 1, 1, 1, 1])));
        for &(d, m) in TEMPLATES {
            assert!(is_minus_one_class(&c(d, m)), "{d} {m:?}");
        }
        assert!(!is_minus_one_class(&c(1, &[1])));
        assert!(!is_minus_one_class(&c(3, &[1; 9])));
        assert!(!is_minus_one_class(&c(0, &[1])));
    }

    #[test]
    fn cremona_examples() {
        let t = cremona_reduce(&c(2, &[2, 2, 0]));
        assert_eq!(t.result, c(0, &[0, 0, -2]));
        assert_eq!(t.moves.len(), 1);
        assert_eq!(t.moves[0].indices, [0, 1, 2]);

        let t = cremona_reduce(&c(1, &[1, 1]));
        assert_eq!(t.result, c(0, &[0, 0, -1]));

        let t = cremona_reduce(&c(3, &[1; 8]));
        assert_eq!(t.result, c(3, &[1; 8]));
        assert!(t.moves.is_empty());
    }

    #[test]
    fn witness_examples() {
        let w = find_witness(&sys(2, "2,2")).unwrap().unwrap();
        assert_eq!((w.class.clone(), w.pairing), (c(1, &[1, 1]), -2));
        let w = find_witness(&sys(4, "2x5")).unwrap().unwrap();
        assert_eq!((w.class.clone(), w.pairing), (c(2, &[1; 5]), -2));
        assert!(find_witness(&sys(21, "7x6,6x4,1")).unwrap().is_none());

        let not_plane = LinearSystem::new("2^0,1^0,1^0".parse().unwrap(), "1".parse().unwrap());
        assert!(matches!(
            find_witness(&not_plane),
            Err(NegCurveError::NotProjectivePlaneSystem(_))
        ));
    }

    #[test]
    fn trace_witness_beyond_templates() {
        // no template pairs to -2 with (6;3,2^8); its reduction exposes (7;4,3,2^6,1)
        let class = c(6, &[3, 2, 2, 2, 2, 2, 2, 2, 2]);
        let w = witness_for_class(&class).unwrap();
        assert_eq!(w.source, WitnessSource::CremonaTrace);
        assert_eq!(w.class, c(7, &[4, 3, 2, 2, 2, 2, 2, 2, 1]));
        assert!(is_minus_one_class(&w.class));
        assert_eq!(w.pairing, -2);
        assert!(!w.moves.is_empty());
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_dimension(&c(2, &[2, 2])), 0);
        assert_eq!(predicted_dimension(&c(4, &[2; 5])), 0);
        assert_eq!(predicted_dimension(&c(2, &[2, 2, 2])), -1);
        assert_eq!(predicted_dimension(&c(21, &[7, 7, 7, 7, 7, 7, 6, 6, 6, 6, 1])), -1);
        assert_eq!(predicted_dimension(&c(3, &[1; 9])), 0);
        // the double cubic through 9 points is the only member
        assert_eq!(predicted_dimension(&c(6, &[2; 9])), 0);
    }

    fn arb_class() -> impl Strategy<Value = DivisorClass> {
        (-3i64..12, prop::collection::vec(-3i64..6, 0..8)).prop_map(|(d, m)| DivisorClass::new(d, m))
    }

    proptest! {
        #[test]
        fn pairing_symmetric_bilinear(a in arb_class(), b in arb_class(), k in -4i64..5) {
            prop_assert_eq!(a.pairing(&b), b.pairing(&a));
            let scaled = DivisorClass::new(a.degree * k, a.mults.iter().map(|m| m * k).collect());
            prop_assert_eq!(scaled.pairing(&b), k * a.pairing(&b));
        }

        #[test]
        fn quadratic_move_is_isometric_involution(a in arb_class(), b in arb_class()) {
            let idx = [0, 1, 2];
            let qa = a.quadratic_move(idx);
            let qb = b.quadratic_move(idx);
            prop_assert_eq!(qa.pairing(&qb), a.pairing(&b));
            prop_assert_eq!(qa.anticanonical_degree(), a.anticanonical_degree());
            prop_assert_eq!(qa.quadratic_move(idx), a);
        }

        #[test]
        fn reduction_preserves_pairing(a in arb_class(), b in arb_class()) {
            let t = cremona_reduce(&a);
            let mut tb = b.clone();
            for mv in &t.moves {
                tb = tb.quadratic_move(mv.indices);
            }
            prop_assert_eq!(t.result.pairing(&tb), a.pairing(&b));
        }

        #[test]
        fn trace_witnesses_are_minus_one(a in arb_class()) {
            if let Some(w) = witness_for_class(&a) {
                prop_assert!(w.pairing <= -2);
                prop_assert_eq!(a.pairing(&w.class), w.pairing);
                prop_assert!(is_minus_one_class(&w.class), "{} for {}", w.class, a);
            }
        }

        #[test]
        fn minus_one_invariant_under_permutation(t in 0usize..TEMPLATES.len(), seed in any::<u64>()) {
            let (d, pattern) = TEMPLATES[t];
            let mut m: Vec<i64> = pattern.to_vec();
            m.resize(9, 0);
            // Fisher-Yates with a fixed LCG
            let mut s = seed;
            for i in (1..m.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                m.swap(i, (s >> 33) as usize % (i + 1));
            }
            let class = DivisorClass::new(d, m);
            prop_assert!(is_minus_one_class(&class));
            for mv in cremona_reduce(&class).moves {
                prop_assert!(is_minus_one_class(&mv.after));
            }
        }
    }
}
