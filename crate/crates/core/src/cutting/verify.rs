//! Independent checker for cut certificates.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{apply_cut, CutCertificate, CutError, LeafStrategy, LemmaName};
use crate::cutting::lemmas;
use crate::diagram::LatticePoint;
use crate::interp::{generic_dimension, onemult_check, LinearSystem, RankConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Check the two subtrees of a cut node on separate threads.
    pub parallel: bool,
    /// Leaves used when a full-layer lemma leaf needs end-of-layer certificates.
    pub eols_rank: RankConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            parallel: true,
            eols_rank: RankConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FailureReason {
    PointOnCutLine { point: LatticePoint },
    VdimMismatch { d2_size: usize, required: u64 },
    InvalidSplit { message: String },
    SystemMismatch { expected: String, found: String },
    TranslationMismatch { translation: (i64, i64) },
    OneMultFailed { message: String },
    RankCheckFailed { value: i64, edim: i64 },
    NotEmpty,
    LemmaExpansion { message: String },
    MonotoneInvalid { message: String },
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::PointOnCutLine { point } => write!(f, "point {point} lies on the cut line"),
            FailureReason::VdimMismatch { d2_size, required } => write!(
                f,
                "D2 has {d2_size} points but its multiplicities impose {required} conditions"
            ),
            FailureReason::InvalidSplit { message } => write!(f, "invalid split: {message}"),
            FailureReason::SystemMismatch { expected, found } => {
                write!(f, "child proves {found}, expected {expected}")
            }
            FailureReason::TranslationMismatch { translation } => write!(
                f,
                "inner diagram translated by ({}, {}) is not the node's diagram",
                translation.0, translation.1
            ),
            FailureReason::OneMultFailed { message } => write!(f, "single-multiplicity check failed: {message}"),
            FailureReason::RankCheckFailed { value, edim } => {
                write!(f, "rank check gave dimension {value}, expected {edim}")
            }
            FailureReason::NotEmpty => write!(f, "empty leaf carries multiplicities"),
            FailureReason::LemmaExpansion { message } => write!(f, "lemma expansion failed: {message}"),
            FailureReason::MonotoneInvalid { message } => write!(f, "monotone step invalid: {message}"),
        }
    }
}

impl From<CutError> for FailureReason {
    fn from(e: CutError) -> Self {
        match e {
            CutError::PointOnCutLine(point) => FailureReason::PointOnCutLine { point },
            CutError::VdimMismatch { d2_size, required } => FailureReason::VdimMismatch { d2_size, required },
            other => FailureReason::InvalidSplit {
                message: other.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafStats {
    pub cut_nodes: usize,
    pub one_mult: usize,
    pub modular_rank: usize,
    pub empty: usize,
    pub equiv: usize,
    pub lemma: usize,
    pub monotone: usize,
}

impl LeafStats {
    fn merge(&mut self, o: &LeafStats) {
        self.cut_nodes += o.cut_nodes;
        self.one_mult += o.one_mult;
        self.modular_rank += o.modular_rank;
        self.empty += o.empty;
        self.equiv += o.equiv;
        self.lemma += o.lemma;
        self.monotone += o.monotone;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub verified: bool,
    pub root: LinearSystem,
    pub node_count: usize,
    pub stats: LeafStats,
    /// Steps from the root (`sub1`, `sub2`, `inner`, `lemma`) to the first failing node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_path: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureReason>,
    /// `dim L` of the root when verified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<i64>,
}

impl ProofReport {
    pub fn failure_path_string(&self) -> String {
        match &self.failure_path {
            Some(p) if !p.is_empty() => format!("root/{}", p.join("/")),
            Some(_) => "root".to_string(),
            None => String::new(),
        }
    }
}

impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.verified {
            writeln!(f, "VERIFIED {}", self.root)?;
            writeln!(f, "dim: {}", self.conclusion.unwrap_or(self.root.edim()))?;
        } else {
            writeln!(f, "FAILED {}", self.root)?;
            writeln!(f, "at: {}", self.failure_path_string())?;
            if let Some(r) = &self.failure {
                writeln!(f, "reason: {r}")?;
            }
        }
        let s = &self.stats;
        write!(
            f,
            "nodes: {} (cuts {}, one-mult {}, rank {}, empty {}, translated {}, lemma {}, monotone {})",
            self.node_count, s.cut_nodes, s.one_mult, s.modular_rank, s.empty, s.equiv, s.lemma, s.monotone
        )
    }
}

struct Failure {
    path: Vec<&'static str>,
    reason: FailureReason,
}

struct Outcome {
    nodes: usize,
    stats: LeafStats,
    failure: Option<Failure>,
}

impl Outcome {
    fn leaf(stats: LeafStats) -> Self {
        Outcome {
            nodes: 1,
            stats,
            failure: None,
        }
    }

    fn fail(reason: FailureReason) -> Self {
        Outcome {
            nodes: 1,
            stats: LeafStats::default(),
            failure: Some(Failure {
                path: Vec::new(),
                reason,
            }),
        }
    }

    fn under(mut self, step: &'static str) -> Self {
        self.nodes += 1;
        if let Some(f) = &mut self.failure {
            f.path.insert(0, step);
        }
        self
    }
}

struct Checker {
    config: VerifyConfig,
    rank_cache: Mutex<HashMap<(LinearSystem, RankConfig), Result<i64, String>>>,
}

fn mismatch(expected: &LinearSystem, found: &LinearSystem) -> FailureReason {
    FailureReason::SystemMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

impl Checker {
    fn modular_dim(&self, system: &LinearSystem, rc: RankConfig) -> Result<i64, String> {
        let key = (system.clone(), rc);
        if let Some(v) = self.rank_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = generic_dimension(system, &rc)
            .map(|r| r.value)
            .map_err(|e| e.to_string());
        self.rank_cache.lock().unwrap().insert(key, v.clone());
        v
    }

    fn check(&self, cert: &CutCertificate) -> Outcome {
        match cert {
            CutCertificate::EmptyLeaf { system } => {
                if !system.mults.is_empty() {
                    return Outcome::fail(FailureReason::NotEmpty);
                }
                Outcome::leaf(LeafStats {
                    empty: 1,
                    ..Default::default()
                })
            }
            CutCertificate::RankLeaf { system, strategy } => self.check_rank_leaf(system, strategy),
            CutCertificate::EquivLeaf {
                system,
                translation,
                inner,
            } => {
                if inner.system().mults != system.mults {
                    return Outcome::fail(mismatch(system, inner.system()));
                }
                match inner.system().diagram.translate(*translation) {
                    Ok(d) if d == system.diagram => {}
                    _ => {
                        return Outcome::fail(FailureReason::TranslationMismatch {
                            translation: *translation,
                        })
                    }
                }
                let mut out = self.check(inner).under("inner");
                out.stats.equiv += 1;
                out
            }
            CutCertificate::CutNode {
                system,
                cut,
                mult_split,
                sub2,
                sub1,
            } => {
                let (l1, l2) = match apply_cut(system, cut, mult_split) {
                    Ok(v) => v,
                    Err(e) => return Outcome::fail(e.into()),
                };
                if sub2.system() != &l2 {
                    return Outcome::fail(mismatch(&l2, sub2.system()));
                }
                if sub1.system() != &l1 {
                    return Outcome::fail(mismatch(&l1, sub1.system()));
                }
                let (o2, o1) = if self.config.parallel {
                    rayon::join(|| self.check(sub2), || self.check(sub1))
                } else {
                    (self.check(sub2), self.check(sub1))
                };
                let o2 = o2.under("sub2");
                let o1 = o1.under("sub1");
                let mut stats = o2.stats;
                stats.merge(&o1.stats);
                stats.cut_nodes += 1;
                Outcome {
                    nodes: o2.nodes + o1.nodes - 1,
                    stats,
                    failure: o2.failure.or(o1.failure),
                }
            }
            CutCertificate::LemmaLeaf { system, lemma, params } => {
                let expanded = match self.expand(*lemma, params) {
                    Ok(c) => c,
                    Err(e) => return Outcome::fail(FailureReason::LemmaExpansion { message: e.to_string() }),
                };
                if expanded.system() != system {
                    return Outcome::fail(mismatch(system, expanded.system()));
                }
                let mut out = self.check(&expanded).under("lemma");
                out.stats.lemma += 1;
                out
            }
            CutCertificate::Monotone { system, inner } => {
                if let Err(message) = monotone_step(system, inner.system()) {
                    return Outcome::fail(FailureReason::MonotoneInvalid { message });
                }
                let mut out = self.check(inner).under("inner");
                out.stats.monotone += 1;
                out
            }
        }
    }

    fn check_rank_leaf(&self, system: &LinearSystem, strategy: &LeafStrategy) -> Outcome {
        match *strategy {
            LeafStrategy::OneMult => {
                let [m] = system.mults.as_slice() else {
                    return Outcome::fail(FailureReason::OneMultFailed {
                        message: format!("expected one multiplicity, found {}", system.mults.len()),
                    });
                };
                match onemult_check(&system.diagram, *m) {
                    Ok(true) => Outcome::leaf(LeafStats {
                        one_mult: 1,
                        ..Default::default()
                    }),
                    Ok(false) => Outcome::fail(FailureReason::OneMultFailed {
                        message: format!("points lie on a curve of degree {}", m - 1),
                    }),
                    Err(e) => Outcome::fail(FailureReason::OneMultFailed { message: e.to_string() }),
                }
            }
            LeafStrategy::ModularRank { seed, trials, modulus } => {
                if trials == 0 {
                    return Outcome::fail(FailureReason::RankCheckFailed {
                        value: system.diagram.len() as i64 - 1,
                        edim: system.edim(),
                    });
                }
                let rc = RankConfig { modulus, trials, seed };
                match self.modular_dim(system, rc) {
                    Ok(value) if value == system.edim() => Outcome::leaf(LeafStats {
                        modular_rank: 1,
                        ..Default::default()
                    }),
                    Ok(value) => Outcome::fail(FailureReason::RankCheckFailed {
                        value,
                        edim: system.edim(),
                    }),
                    Err(message) => Outcome::fail(FailureReason::InvalidSplit { message }),
                }
            }
        }
    }

    fn expand(&self, lemma: LemmaName, params: &[u32]) -> Result<CutCertificate, CutError> {
        let bad = || CutError::InvalidParameter(format!("wrong parameters {params:?} for {lemma:?}"));
        let m = *params.first().ok_or_else(bad)?;
        if m == 0 {
            return Err(bad());
        }
        match (lemma, params) {
            (LemmaName::Backtriangle, [_]) => Ok(lemmas::lemma_backtriangle(m)),
            (LemmaName::Twotriangles, [_]) => Ok(lemmas::lemma_twotriangles(m)),
            (LemmaName::Singlelayer, &[_, k]) => lemmas::lemma_singlelayer(m, k),
            (LemmaName::Fatlayer, &[_, k, h]) => lemmas::lemma_fatlayer(m, k, h),
            (LemmaName::Fulllayer, &[_, k]) => {
                let eols = lemmas::default_eols_certificates(m, &self.config.eols_rank);
                lemmas::lemma_fulllayer(m, k, &eols)
            }
            _ => Err(bad()),
        }
    }
}

/// Checks that `system` follows from `inner` by dropping or adding points.
fn monotone_step(system: &LinearSystem, inner: &LinearSystem) -> Result<(), String> {
    if system.diagram != inner.diagram {
        return Err("diagrams differ".into());
    }
    let outer = system.mults.sorted_desc();
    let inn = inner.mults.sorted_desc();
    if is_submultiset(outer.as_slice(), inn.as_slice()) && inner.vdim() >= -1 {
        return Ok(());
    }
    if is_submultiset(inn.as_slice(), outer.as_slice()) && inner.vdim() <= -1 {
        return Ok(());
    }
    Err(format!(
        "{} is neither a restriction of non-empty {inner} nor an extension of empty {inner}",
        system
    ))
}

/// Both slices sorted descending.
fn is_submultiset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.by_ref().any(|b| b == s))
}

/// Checks every node of `cert`. Cut nodes are checked against a fresh split of
/// their own system, so the root's conclusion never depends on what the
/// certificate claims about its children.
pub fn verify(cert: &CutCertificate, config: &VerifyConfig) -> ProofReport {
    let checker = Checker {
        config: *config,
        rank_cache: Mutex::new(HashMap::new()),
    };
    let out = checker.check(cert);
    let root = cert.system().clone();
    let verified = out.failure.is_none();
    let (failure_path, failure) = match out.failure {
        Some(f) => (Some(f.path.iter().map(|s| s.to_string()).collect()), Some(f.reason)),
        None => (None, None),
    };
    ProofReport {
        verified,
        conclusion: verified.then(|| root.edim()),
        root,
        node_count: out.nodes,
        stats: out.stats,
        failure_path,
        failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutting::{lemma_backtriangle, lemma_singlelayer, lemma_twotriangles};
    use crate::diagram::{AffineCut, Diagram};

    fn cfg() -> VerifyConfig {
        VerifyConfig {
            parallel: false,
            ..Default::default()
        }
    }

    #[test]
    fn lemma_certificates_verify() {
        for m in 1..=4 {
            let r = verify(&lemma_backtriangle(m), &cfg());
            assert!(r.verified, "{r}");
            let r = verify(&lemma_twotriangles(m), &cfg());
            assert!(r.verified, "{r}");
            assert_eq!(r.conclusion, Some(-1));
            assert_eq!(r.stats.cut_nodes, 1);
        }
        let c = lemma_singlelayer(2, 9).unwrap();
        let r = verify(&c, &cfg());
        assert!(r.verified, "{r}");
        assert_eq!(r.node_count, c.node_count());
    }

    #[test]
    fn tampered_cut_is_rejected() {
        let mut c = lemma_twotriangles(3);
        if let CutCertificate::CutNode { cut, .. } = &mut c {
            *cut = AffineCut::horizontal(2);
        }
        let r = verify(&c, &cfg());
        assert!(!r.verified);
        assert_eq!(r.failure_path_string(), "root");
        assert!(matches!(r.failure, Some(FailureReason::VdimMismatch { .. })));
    }

    #[test]
    fn failing_leaf_reports_path() {
        // Three collinear points cannot carry a double point with vdim -1.
        let bad = LinearSystem::new(Diagram::columns([(3, 0)]), "2".parse().unwrap());
        let leaf = CutCertificate::RankLeaf {
            system: bad.clone(),
            strategy: LeafStrategy::OneMult,
        };
        let c = CutCertificate::translated(leaf, (2, 1)).unwrap();
        let r = verify(&c, &cfg());
        assert!(!r.verified);
        assert_eq!(r.failure_path_string(), "root/inner");
        assert!(matches!(r.failure, Some(FailureReason::OneMultFailed { .. })));
    }

    #[test]
    fn special_modular_leaf_fails() {
        let l = LinearSystem::plane(2, "2,2".parse().unwrap());
        let c = CutCertificate::RankLeaf {
            system: l,
            strategy: LeafStrategy::ModularRank {
                seed: 1,
                trials: 3,
                modulus: crate::interp::modp::MERSENNE_61,
            },
        };
        let r = verify(&c, &cfg());
        assert_eq!(r.failure, Some(FailureReason::RankCheckFailed { value: 0, edim: -1 }));
    }

    #[test]
    fn lemma_leaf_and_monotone() {
        let inner = lemma_twotriangles(2);
        let leaf = CutCertificate::LemmaLeaf {
            system: inner.system().clone(),
            lemma: LemmaName::Twotriangles,
            params: vec![2],
        };
        assert!(verify(&leaf, &cfg()).verified);
        let wrong = CutCertificate::LemmaLeaf {
            system: inner.system().clone(),
            lemma: LemmaName::Twotriangles,
            params: vec![3],
        };
        assert!(matches!(
            verify(&wrong, &cfg()).failure,
            Some(FailureReason::SystemMismatch { .. })
        ));

        let bigger = LinearSystem::new(inner.system().diagram.clone(), "2,2,1".parse().unwrap());
        let up = CutCertificate::Monotone {
            system: bigger,
            inner: Box::new(inner.clone()),
        };
        assert!(verify(&up, &cfg()).verified);
        let smaller = LinearSystem::new(inner.system().diagram.clone(), "2".parse().unwrap());
        let down = CutCertificate::Monotone {
            system: smaller,
            inner: Box::new(inner),
        };
        assert!(verify(&down, &cfg()).verified);
    }

    #[test]
    fn submultiset() {
        assert!(is_submultiset(&[3, 1], &[3, 2, 1]));
        assert!(!is_submultiset(&[3, 3], &[3, 2, 1]));
        assert!(is_submultiset(&[], &[1]));
    }
}
