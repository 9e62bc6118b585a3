//! Constructive certificates for the layer lemmas and the inductive step
//! for homogeneous plane systems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CutCertificate, CutError, LeafStrategy};
use crate::diagram::{AffineCut, Diagram};
use crate::interp::{LinearSystem, MultiplicityList, RankConfig};

/// `(1^↑m-1, 2^↑m-2, ..., m^↑0)`.
pub fn backtriangle_diagram(m: u32) -> Diagram {
    Diagram::columns((0..m).map(|i| (i + 1, m - 1 - i)))
}

/// `(m^↑0, (m-1)^↑0, ..., 1^↑0)`.
pub fn reversed_staircase(m: u32) -> Diagram {
    Diagram::columns((0..m).map(|i| (m - i, 0)))
}

/// `(m^↑m, m^↑m-1, ..., m^↑0)`.
pub fn twotriangles_diagram(m: u32) -> Diagram {
    Diagram::columns((0..=m).map(|i| (m, m - i)))
}

/// `(m^↑k-1, m^↑k-2, ..., m^↑0)`.
pub fn singlelayer_diagram(m: u32, k: u32) -> Diagram {
    fatlayer_diagram(k, m)
}

/// `(h^↑k-1, h^↑k-2, ..., h^↑0)`.
pub fn fatlayer_diagram(k: u32, h: u32) -> Diagram {
    Diagram::columns((0..k).map(|i| (h, k - 1 - i)))
}

/// `(h^↑k-1, ..., h^↑0, (h-1)^↑0, ..., 1^↑0)` with `h = m(m+1)`.
pub fn fulllayer_diagram(m: u32, k: u32) -> Diagram {
    let h = m * (m + 1);
    Diagram::columns((0..k).map(|i| (h, k - 1 - i)).chain((1..h).rev().map(|j| (j, 0))))
}

/// The end-of-layer system for `k`: full-layer diagram with `m^×(2k+h-1)`.
pub fn eols_system(m: u32, k: u32) -> LinearSystem {
    let h = m * (m + 1);
    LinearSystem::new(
        fulllayer_diagram(m, k),
        MultiplicityList::homogeneous(m, (2 * k + h - 1) as usize),
    )
}

/// `EoLS(m)`: the end-of-layer systems for `k = 1, ..., m+1`.
pub fn eols(m: u32) -> Vec<LinearSystem> {
    assert!(m >= 1, "m must be positive");
    (1..=m + 1).map(|k| eols_system(m, k)).collect()
}

fn homogeneous(m: u32, count: u32) -> MultiplicityList {
    MultiplicityList::homogeneous(m, count as usize)
}

/// `L_D(m)` on the back triangle, closed by the single-multiplicity criterion.
pub fn lemma_backtriangle(m: u32) -> CutCertificate {
    assert!(m >= 1, "m must be positive");
    CutCertificate::RankLeaf {
        system: LinearSystem::new(backtriangle_diagram(m), homogeneous(m, 1)),
        strategy: LeafStrategy::OneMult,
    }
}

/// `L_D(m^×2)` on the two-triangle diagram, cut along `y = m - 1/2`.
pub fn lemma_twotriangles(m: u32) -> CutCertificate {
    assert!(m >= 1, "m must be positive");
    let system = LinearSystem::new(twotriangles_diagram(m), homogeneous(m, 2));
    let upper = CutCertificate::RankLeaf {
        system: LinearSystem::new(reversed_staircase(m), homogeneous(m, 1)),
        strategy: LeafStrategy::OneMult,
    };
    let shift = |c, v| CutCertificate::translated(c, v).expect("translation stays in N²");
    CutCertificate::CutNode {
        system,
        cut: AffineCut::horizontal(m as i64),
        mult_split: vec![1],
        sub2: Box::new(shift(upper, (0, m as i64))),
        sub1: Box::new(shift(lemma_backtriangle(m), (1, 0))),
    }
}

/// `L_D(m^×2k/(m+1))` on `(m^↑k-1, ..., m^↑0)`, peeling `m+1` columns per cut.
pub fn lemma_singlelayer(m: u32, k: u32) -> Result<CutCertificate, CutError> {
    if m == 0 || k == 0 {
        return Err(CutError::InvalidParameter(format!(
            "singlelayer needs m, k ≥ 1 (m = {m}, k = {k})"
        )));
    }
    if !k.is_multiple_of(m + 1) {
        return Err(CutError::DivisibilityViolation(format!(
            "{} does not divide k = {k}",
            m + 1
        )));
    }
    if k == m + 1 {
        return Ok(lemma_twotriangles(m));
    }
    let n = 2 * k / (m + 1);
    let system = LinearSystem::new(singlelayer_diagram(m, k), homogeneous(m, n));
    let right = lemma_singlelayer(m, k - (m + 1))?;
    let left = lemma_twotriangles(m);
    Ok(CutCertificate::CutNode {
        system,
        cut: AffineCut::vertical((m + 1) as i64),
        mult_split: (2..n as usize).collect(),
        sub2: Box::new(CutCertificate::translated(right, ((m + 1) as i64, 0))?),
        sub1: Box::new(CutCertificate::translated(left, (0, (k - 1 - m) as i64))?),
    })
}

/// `L_D(m^×2kh/(m(m+1)))` on `(h^↑k-1, ..., h^↑0)`, peeling an `m`-thick
/// diagonal slab per cut.
pub fn lemma_fatlayer(m: u32, k: u32, h: u32) -> Result<CutCertificate, CutError> {
    if m == 0 || k == 0 || h == 0 {
        return Err(CutError::InvalidParameter(format!(
            "fatlayer needs m, k, h ≥ 1 (m = {m}, k = {k}, h = {h})"
        )));
    }
    if !k.is_multiple_of(m + 1) || !h.is_multiple_of(m) {
        return Err(CutError::DivisibilityViolation(format!(
            "need {} | k = {k} and {m} | h = {h}",
            m + 1
        )));
    }
    if h == m {
        return lemma_singlelayer(m, k);
    }
    let n = 2 * k * h / (m * (m + 1));
    let n1 = 2 * k / (m + 1);
    let system = LinearSystem::new(fatlayer_diagram(k, h), homogeneous(m, n));
    let upper = lemma_fatlayer(m, k, h - m)?;
    Ok(CutCertificate::CutNode {
        system,
        cut: AffineCut::diagonal((k - 1 + m) as i64),
        mult_split: (n1 as usize..n as usize).collect(),
        sub2: Box::new(CutCertificate::translated(upper, (0, m as i64))?),
        sub1: Box::new(lemma_singlelayer(m, k)?),
    })
}

/// Certificates for the members of `EoLS(m)`, keyed by `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EolsCertificates {
    pub m: u32,
    pub certs: BTreeMap<u32, CutCertificate>,
}

impl EolsCertificates {
    pub fn new(m: u32) -> Self {
        Self {
            m,
            certs: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, k: u32, cert: CutCertificate) {
        self.certs.insert(k, cert);
    }

    pub fn get(&self, k: u32) -> Option<&CutCertificate> {
        self.certs.get(&k)
    }
}

/// Modular-rank leaves for every member of `EoLS(m)`. They are checked only
/// when the enclosing certificate is verified.
pub fn default_eols_certificates(m: u32, rank: &RankConfig) -> EolsCertificates {
    let mut out = EolsCertificates::new(m);
    for k in 1..=m + 1 {
        out.insert(
            k,
            CutCertificate::RankLeaf {
                system: eols_system(m, k),
                strategy: LeafStrategy::ModularRank {
                    seed: rank.seed,
                    trials: rank.trials,
                    modulus: rank.modulus,
                },
            },
        );
    }
    out
}

fn eols_cert(eols: &EolsCertificates, m: u32, k: u32) -> Result<CutCertificate, CutError> {
    let cert = eols.get(k).ok_or(CutError::MissingEoLSCertificate(k))?;
    if eols.m != m || cert.system() != &eols_system(m, k) {
        return Err(CutError::InvalidParameter(format!(
            "certificate for k = {k} proves {}, not the end-of-layer system",
            cert.system()
        )));
    }
    Ok(cert.clone())
}

/// `L_D(m^×2k+h-1)` on the full-layer diagram: a fat layer of `k₁(m+1)`
/// columns on the left, an end-of-layer system on the right, where
/// `k = k₁(m+1) + k₂` with `1 ≤ k₂ ≤ m+1`.
pub fn lemma_fulllayer(m: u32, k: u32, eols: &EolsCertificates) -> Result<CutCertificate, CutError> {
    if m == 0 || k == 0 {
        return Err(CutError::InvalidParameter(format!(
            "fulllayer needs m, k ≥ 1 (m = {m}, k = {k})"
        )));
    }
    let h = m * (m + 1);
    let k1 = (k - 1) / (m + 1);
    let k2 = k - k1 * (m + 1);
    let right = eols_cert(eols, m, k2)?;
    if k1 == 0 {
        return Ok(right);
    }
    let width = k1 * (m + 1);
    let n1 = 2 * (k - k2);
    let n2 = 2 * k2 + h - 1;
    let system = LinearSystem::new(fulllayer_diagram(m, k), homogeneous(m, n1 + n2));
    let left = lemma_fatlayer(m, width, h)?;
    Ok(CutCertificate::CutNode {
        system,
        cut: AffineCut::vertical(width as i64),
        mult_split: (n1 as usize..(n1 + n2) as usize).collect(),
        sub2: Box::new(CutCertificate::translated(right, (width as i64, 0))?),
        sub1: Box::new(CutCertificate::translated(left, (0, k2 as i64))?),
    })
}

/// Verified certificates for homogeneous plane systems `L_d(m^×p)`, keyed by
/// `(d, p)`, for degrees starting at `d_low`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionTable {
    pub m: u32,
    pub d_low: u32,
    entries: BTreeMap<(u32, u32), CutCertificate>,
}

impl DimensionTable {
    pub fn new(m: u32, d_low: u32) -> Self {
        Self {
            m,
            d_low,
            entries: BTreeMap::new(),
        }
    }

    pub fn system(&self, d: u32, p: u32) -> LinearSystem {
        LinearSystem::plane(d, homogeneous(self.m, p))
    }

    pub fn insert(&mut self, d: u32, p: u32, cert: CutCertificate) -> Result<(), CutError> {
        let expected = self.system(d, p);
        if cert.system() != &expected {
            return Err(CutError::InvalidParameter(format!(
                "certificate proves {}, expected {expected}",
                cert.system()
            )));
        }
        self.entries.insert((d, p), cert);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &CutCertificate)> {
        self.entries.iter()
    }

    /// Certificate for `L_d(m^×p)`: a stored entry, or an entry with fewer
    /// points whose system is already empty (`vdim ≤ -1`) lifted by
    /// monotonicity.
    pub fn certificate(&self, d: u32, p: u32) -> Option<CutCertificate> {
        if let Some(c) = self.entries.get(&(d, p)) {
            return Some(c.clone());
        }
        let (&(_, q), base) = self.entries.range((d, 0)..(d, p)).next_back()?;
        (self.system(d, q).vdim() <= -1).then(|| CutCertificate::Monotone {
            system: self.system(d, p),
            inner: Box::new(base.clone()),
        })
    }
}

/// Inductive step for `L_d(m^×p)` with `d > d_low + m(m+1)`: the diagonal cut
/// `x + y = d - h + 1/2` leaves the triangle of degree `d - h` (taken from
/// `base`) and a full layer with `2d - h + 3` points of multiplicity `m`.
/// For fewer points the certificate for `p = 2d - h + 3` is restricted.
pub fn theorem_finitely_step(
    m: u32,
    d: u32,
    p: u32,
    base: &DimensionTable,
    eols: &EolsCertificates,
) -> Result<CutCertificate, CutError> {
    let h = m * (m + 1);
    if m != base.m || d <= base.d_low + h {
        return Err(CutError::BaseMissing {
            d: d.saturating_sub(h),
            m,
            p,
        });
    }
    let layer_points = 2 * d + 3 - h;
    let system = LinearSystem::plane(d, homogeneous(m, p));
    if p < layer_points {
        let full = theorem_finitely_step(m, d, layer_points, base, eols)?;
        return Ok(CutCertificate::Monotone {
            system,
            inner: Box::new(full),
        });
    }
    let below = base.certificate(d - h, p - layer_points).ok_or(CutError::BaseMissing {
        d: d - h,
        m,
        p: p - layer_points,
    })?;
    let layer = lemma_fulllayer(m, d + 2 - h, eols)?;
    let rest = (p - layer_points) as usize;
    Ok(CutCertificate::CutNode {
        system,
        cut: AffineCut::diagonal((d - h + 1) as i64),
        mult_split: (rest..p as usize).collect(),
        sub2: Box::new(layer),
        sub1: Box::new(below),
    })
}
