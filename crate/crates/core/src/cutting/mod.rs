//! Diagram cutting: proof certificates for non-speciality, an independent
//! checker, constructors for the layer lemmas and a bounded proof search.
//!
//! A cut `F` splits `D` into `D1 = {F < 0}` and `D2 = {F > 0}`. If the system
//! on `D2` with some of the multiplicities is non-special with virtual
//! dimension -1, then `dim L_D(all) ≤ dim L_D1(rest)`; since the virtual
//! dimensions agree, non-speciality of the `D1` part carries over to `L`.

mod lemmas;
mod search;
mod verify;

pub use lemmas::{
    backtriangle_diagram, default_eols_certificates, eols, eols_system, fatlayer_diagram, fulllayer_diagram,
    lemma_backtriangle, lemma_fatlayer, lemma_fulllayer, lemma_singlelayer, lemma_twotriangles, reversed_staircase,
    singlelayer_diagram, theorem_finitely_step, twotriangles_diagram, DimensionTable, EolsCertificates,
};
pub use search::{search_cut_proof, CutFamily, SearchConfig};
pub use verify::{verify, FailureReason, LeafStats, ProofReport, VerifyConfig};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{AffineCut, DiagramError, LatticePoint};
use crate::interp::LinearSystem;

/// Version written into every certificate file.
pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("point {0} lies on the cut line")]
    PointOnCutLine(LatticePoint),
    #[error("D2 has {d2_size} points but the assigned multiplicities impose {required} conditions")]
    VdimMismatch { d2_size: usize, required: u64 },
    #[error("invalid multiplicity split: {0}")]
    InvalidSplit(String),
    #[error("divisibility condition violated: {0}")]
    DivisibilityViolation(String),
    #[error("no end-of-layer certificate for k = {0}")]
    MissingEoLSCertificate(u32),
    #[error("base table has no entry for L_{d}({m}x{p})")]
    BaseMissing { d: u32, m: u32, p: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LeafStrategy {
    /// Single multiplicity `m` on `(m+1 choose 2)` points not on a curve of degree `m-1`.
    OneMult,
    /// Rank at random points of `F_p` reaching the expected dimension.
    ModularRank { seed: u64, trials: u32, modulus: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaName {
    Backtriangle,
    Twotriangles,
    Singlelayer,
    Fatlayer,
    Fulllayer,
}

/// A proof that `system` is non-special.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutCertificate {
    RankLeaf {
        system: LinearSystem,
        strategy: LeafStrategy,
    },
    /// `system.diagram = inner.system.diagram + translation`, same multiplicities.
    EquivLeaf {
        system: LinearSystem,
        translation: (i64, i64),
        inner: Box<CutCertificate>,
    },
    CutNode {
        system: LinearSystem,
        cut: AffineCut,
        /// Indices into `system.mults` assigned to `D2`, in the order used by `sub2`.
        mult_split: Vec<usize>,
        sub2: Box<CutCertificate>,
        sub1: Box<CutCertificate>,
    },
    /// Expanded by the checker with the matching lemma constructor.
    LemmaLeaf {
        system: LinearSystem,
        lemma: LemmaName,
        params: Vec<u32>,
    },
    /// No conditions: `dim = #D - 1 = vdim`.
    EmptyLeaf { system: LinearSystem },
    /// Same diagram, multiplicities a sub- or super-multiset of `inner`'s.
    /// Dropping conditions from an independent set (inner `vdim ≥ -1`) or
    /// adding conditions to an empty system (inner `vdim ≤ -1`) keeps
    /// non-speciality.
    Monotone {
        system: LinearSystem,
        inner: Box<CutCertificate>,
    },
}

impl CutCertificate {
    pub fn system(&self) -> &LinearSystem {
        match self {
            CutCertificate::RankLeaf { system, .. }
            | CutCertificate::EquivLeaf { system, .. }
            | CutCertificate::CutNode { system, .. }
            | CutCertificate::LemmaLeaf { system, .. }
            | CutCertificate::EmptyLeaf { system }
            | CutCertificate::Monotone { system, .. } => system,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CutCertificate::RankLeaf { .. } => "rank_leaf",
            CutCertificate::EquivLeaf { .. } => "equiv_leaf",
            CutCertificate::CutNode { .. } => "cut_node",
            CutCertificate::LemmaLeaf { .. } => "lemma_leaf",
            CutCertificate::EmptyLeaf { .. } => "empty_leaf",
            CutCertificate::Monotone { .. } => "monotone",
        }
    }

    pub fn node_count(&self) -> usize {
        1 + match self {
            CutCertificate::EquivLeaf { inner, .. } | CutCertificate::Monotone { inner, .. } => inner.node_count(),
            CutCertificate::CutNode { sub1, sub2, .. } => sub1.node_count() + sub2.node_count(),
            _ => 0,
        }
    }

    /// Number of cut nodes on the longest root-to-leaf path.
    pub fn cut_depth(&self) -> usize {
        match self {
            CutCertificate::EquivLeaf { inner, .. } | CutCertificate::Monotone { inner, .. } => inner.cut_depth(),
            CutCertificate::CutNode { sub1, sub2, .. } => 1 + sub1.cut_depth().max(sub2.cut_depth()),
            _ => 0,
        }
    }

    /// Wraps `inner` so that it proves the translate `inner.system + v`.
    pub fn translated(inner: CutCertificate, v: (i64, i64)) -> Result<CutCertificate, CutError> {
        if v == (0, 0) {
            return Ok(inner);
        }
        let sys = inner.system();
        let system = LinearSystem::new(sys.diagram.translate(v)?, sys.mults.clone());
        Ok(CutCertificate::EquivLeaf {
            system,
            translation: v,
            inner: Box::new(inner),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CertificateFile::new(self.clone())).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<CutCertificate, serde_json::Error> {
        // Layer certificates nest one node per peeled layer, well past
        // serde_json's default depth limit.
        let mut de = serde_json::Deserializer::from_str(s);
        de.disable_recursion_limit();
        let file = CertificateFile::deserialize(serde_stacker::Deserializer::new(&mut de))?;
        de.end()?;
        if file.version != CERTIFICATE_VERSION {
            return Err(serde::de::Error::custom(format!(
                "unsupported certificate version {}",
                file.version
            )));
        }
        Ok(file.root)
    }
}

/// On-disk certificate: a mandatory format version and the root node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub version: u32,
    pub root: CutCertificate,
}

impl CertificateFile {
    pub fn new(root: CutCertificate) -> Self {
        Self {
            version: CERTIFICATE_VERSION,
            root,
        }
    }
}

/// Splits `system` along `cut`, sending the multiplicities at `mult_split` to
/// `D2`. Returns `(L1, L2)`.
pub fn apply_cut(
    system: &LinearSystem,
    cut: &AffineCut,
    mult_split: &[usize],
) -> Result<(LinearSystem, LinearSystem), CutError> {
    let n = system.mults.len();
    let mut seen = vec![false; n];
    for &i in mult_split {
        if i >= n {
            return Err(CutError::InvalidSplit(format!("index {i} out of range (r = {n})")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(CutError::InvalidSplit(format!("index {i} repeated")));
        }
    }
    let (d1, d2) = system.diagram.split(cut).map_err(|e| match e {
        DiagramError::PointOnCutLine(p) => CutError::PointOnCutLine(p),
        other => CutError::Diagram(other),
    })?;
    let (rest, picked) = system.mults.partition(mult_split);
    let l2 = LinearSystem::new(d2, picked);
    if l2.vdim() != -1 {
        return Err(CutError::VdimMismatch {
            d2_size: l2.diagram.len(),
            required: l2.conditions(),
        });
    }
    Ok((LinearSystem::new(d1, rest), l2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Diagram;

    fn two_triangles_3() -> LinearSystem {
        LinearSystem::new(
            Diagram::columns([(3, 3), (3, 2), (3, 1), (3, 0)]),
            "3,3".parse().unwrap(),
        )
    }

    #[test]
    fn deep_certificates_round_trip() {
        let c = lemma_fatlayer(1, 2, 400).unwrap();
        assert!(c.cut_depth() >= 399);
        assert_eq!(CutCertificate::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn apply_cut_examples() {
        let l = two_triangles_3();
        let (l1, l2) = apply_cut(&l, &AffineCut::horizontal(3), &[1]).unwrap();
        assert_eq!(l2.diagram.len(), 6);
        assert_eq!(l2.vdim(), -1);
        assert_eq!(l1.mults.as_slice(), &[3]);
        assert_eq!(l1.diagram.len(), 6);

        let on_line = AffineCut::new(0.into(), 1.into(), (-3).into()).unwrap();
        assert!(matches!(
            apply_cut(&l, &on_line, &[1]),
            Err(CutError::PointOnCutLine(_))
        ));
        assert_eq!(
            apply_cut(&l, &AffineCut::horizontal(3), &[0, 1]),
            Err(CutError::VdimMismatch {
                d2_size: 6,
                required: 12
            })
        );
        assert!(matches!(
            apply_cut(&l, &AffineCut::horizontal(3), &[2]),
            Err(CutError::InvalidSplit(_))
        ));
        assert!(matches!(
            apply_cut(&l, &AffineCut::horizontal(3), &[1, 1]),
            Err(CutError::InvalidSplit(_))
        ));
    }

    #[test]
    fn certificate_json_has_version_and_tags() {
        let cert = lemma_twotriangles(2);
        let json = cert.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["version"], CERTIFICATE_VERSION);
        assert_eq!(value["root"]["kind"], "cut_node");
        assert_eq!(value["root"]["system"]["diagram"], "2^2,2^1,2^0");
        assert_eq!(value["root"]["cut"]["r0"], "-3/2");
        assert_eq!(CutCertificate::from_json(&json).unwrap(), cert);

        let missing_version = r#"{"root": {"kind": "empty_leaf", "system": {"diagram": "1^0", "mults": ""}}}"#;
        assert!(CutCertificate::from_json(missing_version).is_err());
    }
}
