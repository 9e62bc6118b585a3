//! Bounded depth-first search for cut certificates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{apply_cut, CutCertificate, LeafStrategy};
use crate::diagram::AffineCut;
use crate::interp::{generic_dimension, onemult_check, Certainty, LinearSystem, RankConfig};

/// Families of cut lines `a·x + b·y = c - 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CutFamily {
    Vertical,
    Horizontal,
    Diagonal,
    Sloped { a: i64, b: i64 },
}

impl CutFamily {
    /// Vertical, horizontal and diagonal lines, then the slopes `1:2`, `2:1`
    /// and `1:-1`.
    pub fn standard() -> Vec<CutFamily> {
        vec![
            CutFamily::Vertical,
            CutFamily::Horizontal,
            CutFamily::Diagonal,
            CutFamily::Sloped { a: 1, b: 2 },
            CutFamily::Sloped { a: 2, b: 1 },
            CutFamily::Sloped { a: 1, b: -1 },
        ]
    }

    /// Only the three axis and diagonal classes.
    pub fn basic() -> Vec<CutFamily> {
        vec![CutFamily::Vertical, CutFamily::Horizontal, CutFamily::Diagonal]
    }

    fn coefficients(self) -> (i64, i64) {
        match self {
            CutFamily::Vertical => (1, 0),
            CutFamily::Horizontal => (0, 1),
            CutFamily::Diagonal => (1, 1),
            CutFamily::Sloped { a, b } => (a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Maximum number of cut nodes on any root-to-leaf path.
    pub max_depth: usize,
    /// Systems with at most this many points are closed by a rank leaf.
    pub leaf_threshold: usize,
    pub families: Vec<CutFamily>,
    pub rank: RankConfig,
    /// Maximum number of multiplicity splits tried per cut.
    pub max_splits: usize,
    /// Also try `D2` on the side of smaller `a·x + b·y`.
    pub both_sides: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_depth: 6,
            leaf_threshold: 60,
            families: CutFamily::standard(),
            rank: RankConfig::default(),
            max_splits: 64,
            both_sides: true,
        }
    }
}

#[derive(Default)]
struct Memo {
    found: Option<CutCertificate>,
    /// Largest depth budget already known to be insufficient.
    failed: Option<usize>,
    special: Option<bool>,
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    memo: HashMap<LinearSystem, Memo>,
}

impl Searcher<'_> {
    fn probably_special(&mut self, system: &LinearSystem) -> bool {
        if let Some(s) = self.memo.get(system).and_then(|m| m.special) {
            return s;
        }
        let special = match generic_dimension(system, &self.cfg.rank) {
            Ok(r) => r.certainty != Certainty::CertifiedNonSpecial,
            Err(_) => true,
        };
        self.memo.entry(system.clone()).or_default().special = Some(special);
        special
    }

    fn leaf(&mut self, system: &LinearSystem) -> Option<CutCertificate> {
        if let [m] = system.mults.as_slice() {
            if system.conditions() == system.diagram.len() as u64 && onemult_check(&system.diagram, *m).unwrap_or(false)
            {
                return Some(CutCertificate::RankLeaf {
                    system: system.clone(),
                    strategy: LeafStrategy::OneMult,
                });
            }
        }
        if self.probably_special(system) {
            return None;
        }
        let rc = self.cfg.rank;
        Some(CutCertificate::RankLeaf {
            system: system.clone(),
            strategy: LeafStrategy::ModularRank {
                seed: rc.seed,
                trials: rc.trials,
                modulus: rc.modulus,
            },
        })
    }

    fn search(&mut self, system: &LinearSystem, depth: usize) -> Option<CutCertificate> {
        if system.mults.is_empty() {
            return Some(CutCertificate::EmptyLeaf { system: system.clone() });
        }
        if system.diagram.len() <= self.cfg.leaf_threshold {
            return self.leaf(system);
        }
        if let Some(m) = self.memo.get(system) {
            if let Some(c) = &m.found {
                return Some(c.clone());
            }
            if m.failed.is_some_and(|f| f >= depth) || m.special == Some(true) {
                return None;
            }
        }
        let found = if depth == 0 || self.probably_special(system) {
            None
        } else {
            self.expand(system, depth)
        };
        let entry = self.memo.entry(system.clone()).or_default();
        match &found {
            Some(c) => entry.found = Some(c.clone()),
            None => entry.failed = Some(entry.failed.map_or(depth, |f| f.max(depth))),
        }
        found
    }

    fn expand(&mut self, system: &LinearSystem, depth: usize) -> Option<CutCertificate> {
        let mut directions = Vec::new();
        for family in &self.cfg.families {
            let (a, b) = family.coefficients();
            directions.push((a, b));
            if self.cfg.both_sides {
                directions.push((-a, -b));
            }
        }
        for (a, b) in directions {
            let mut values: Vec<i64> = system.diagram.iter().map(|p| a * p.x as i64 + b * p.y as i64).collect();
            values.sort_unstable();
            values.dedup();
            // Thresholds above the minimum keep both sides non-empty; the
            // largest comes first so that D2 starts small.
            for &c in values.iter().skip(1).rev() {
                let cut = AffineCut::sloped(a, b, c);
                let Ok((d1, d2)) = system.diagram.split(&cut) else {
                    continue;
                };
                debug_assert!(!d1.is_empty() && !d2.is_empty());
                for split in mult_splits(system, d2.len() as u64, self.cfg.max_splits) {
                    let Ok((l1, l2)) = apply_cut(system, &cut, &split) else {
                        continue;
                    };
                    let Some(c2) = self.search(&l2, depth - 1) else {
                        continue;
                    };
                    let Some(c1) = self.search(&l1, depth - 1) else {
                        continue;
                    };
                    return Some(CutCertificate::CutNode {
                        system: system.clone(),
                        cut,
                        mult_split: split,
                        sub2: Box::new(c2),
                        sub1: Box::new(c1),
                    });
                }
            }
        }
        None
    }
}

/// Index sets of distinct sub-multisets of `system.mults` imposing exactly
/// `target` conditions, trying the largest multiplicities in the greatest
/// number first. Within one multiplicity value the first indices are taken.
fn mult_splits(system: &LinearSystem, target: u64, limit: usize) -> Vec<Vec<usize>> {
    let mut groups: Vec<(u32, Vec<usize>)> = Vec::new();
    for (i, &m) in system.mults.as_slice().iter().enumerate() {
        match groups.iter_mut().find(|(v, _)| *v == m) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((m, vec![i])),
        }
    }
    groups.sort_by_key(|g| std::cmp::Reverse(g.0));
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    collect_splits(&groups, 0, target, &mut chosen, &mut out, limit);
    for s in &mut out {
        s.sort_unstable();
    }
    out
}

fn collect_splits(
    groups: &[(u32, Vec<usize>)],
    gi: usize,
    remaining: u64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if remaining == 0 {
        out.push(chosen.clone());
        return;
    }
    let Some((m, idx)) = groups.get(gi) else {
        return;
    };
    let cost = *m as u64 * (*m as u64 + 1) / 2;
    let max_k = (remaining / cost).min(idx.len() as u64) as usize;
    for k in (0..=max_k).rev() {
        let before = chosen.len();
        chosen.extend_from_slice(&idx[..k]);
        collect_splits(groups, gi + 1, remaining - k as u64 * cost, chosen, out, limit);
        chosen.truncate(before);
    }
}

/// Looks for a certificate with at most `max_depth` nested cuts. Returns
/// `None` when the budget is exhausted; that says nothing about the system.
pub fn search_cut_proof(system: &LinearSystem, config: &SearchConfig) -> Option<CutCertificate> {
    let mut s = Searcher {
        cfg: config,
        memo: HashMap::new(),
    };
    s.search(system, config.max_depth)
}
