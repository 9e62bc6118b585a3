//! Homogeneous plane systems `L_d(m^×r)`: the finite test set, the inductive
//! non-speciality table and a small Hirschowitz-Harbourne campaign.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cutting::{
    default_eols_certificates, eols, theorem_finitely_step, verify, CutCertificate, CutError, DimensionTable,
    LeafStrategy, VerifyConfig,
};
use crate::interp::{generic_dimension, Certainty, InterpError, LinearSystem, MultiplicityList, RankConfig};
use crate::negcurve::{find_witness, predicted_system_dimension, WitnessSource};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomogeneousError {
    #[error("base case fails: L_{d}({m}x{p}) is special")]
    BaseCaseFails { d: u32, m: u32, p: u32 },
    #[error("inductive certificate for L_{d}({m}x{p}) does not verify: {reason}")]
    StepFails { d: u32, m: u32, p: u32, reason: String },
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// `L_d(m^×r)` for explicit finite ranges of `d` and `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousFamily {
    pub m: u32,
    pub d_min: u32,
    pub d_max: u32,
    pub r_min: u32,
    pub r_max: u32,
}

impl HomogeneousFamily {
    pub fn systems(&self) -> impl Iterator<Item = LinearSystem> + '_ {
        (self.d_min..=self.d_max)
            .flat_map(move |d| (self.r_min..=self.r_max).map(move |r| homogeneous_system(d, self.m, r)))
    }
}

pub fn homogeneous_system(d: u32, m: u32, r: u32) -> LinearSystem {
    LinearSystem::plane(d, MultiplicityList::homogeneous(m, r as usize))
}

fn binom2(n: u32) -> u64 {
    n as u64 * (n as u64 + 1) / 2
}

/// `EoLS(m)` together with every `L_d(m^×r)`, `d0 ≤ d ≤ d0 + m(m+1)`,
/// `r ≥ 1`, with `vdim ≥ -2m²`.
pub fn s_set(m: u32, d0: u32) -> Vec<LinearSystem> {
    assert!(m >= 1 && d0 >= 1, "m and d0 must be positive");
    let floor = -2 * (m as i64).pow(2);
    let mut out = eols(m);
    for d in d0..=d0 + m * (m + 1) {
        for r in 1.. {
            let l = homogeneous_system(d, m, r);
            if l.vdim() < floor {
                break;
            }
            out.push(l);
        }
    }
    out
}

/// Default lower end of the window, `3m`.
pub fn default_d0(m: u32) -> u32 {
    3 * m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntrySource {
    /// Checked directly by rank.
    Base,
    /// Assembled by the inductive step and verified as a certificate.
    Inductive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitelyEntry {
    pub d: u32,
    pub p: u32,
    pub vdim: i64,
    pub source: EntrySource,
    pub nodes: usize,
}

/// Non-speciality of `L_d(m^×p)` for `d_low ≤ d ≤ max_d` and every `p`.
/// Only `p` up to the first empty system is listed; larger `p` follow by
/// adding points to an empty system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitelyTable {
    pub m: u32,
    pub d_low: u32,
    pub max_d: u32,
    pub entries: Vec<FinitelyEntry>,
    #[serde(skip)]
    pub certificates: Option<DimensionTable>,
}

/// Checks the base window `d_low ..= d_low + m(m+1)` by rank and extends to
/// `max_d` with verified inductive certificates.
pub fn verify_finitely(m: u32, d_low: u32, max_d: u32, rank: &RankConfig) -> Result<FinitelyTable, HomogeneousError> {
    if m == 0 {
        return Err(HomogeneousError::InvalidParameter("m must be positive".into()));
    }
    let h = m * (m + 1);
    let mut table = DimensionTable::new(m, d_low);
    let mut entries = Vec::new();
    let leaf = LeafStrategy::ModularRank {
        seed: rank.seed,
        trials: rank.trials,
        modulus: rank.modulus,
    };
    for d in d_low..=(d_low + h).min(max_d) {
        for p in 0.. {
            let system = homogeneous_system(d, m, p);
            let cert = if p == 0 {
                CutCertificate::EmptyLeaf { system: system.clone() }
            } else {
                let r = generic_dimension(&system, rank)?;
                if r.certainty != Certainty::CertifiedNonSpecial {
                    return Err(HomogeneousError::BaseCaseFails { d, m, p });
                }
                CutCertificate::RankLeaf {
                    system: system.clone(),
                    strategy: leaf,
                }
            };
            table.insert(d, p, cert)?;
            entries.push(FinitelyEntry {
                d,
                p,
                vdim: system.vdim(),
                source: EntrySource::Base,
                nodes: 1,
            });
            if system.vdim() <= -1 {
                break;
            }
        }
    }
    let eols_certs = default_eols_certificates(m, rank);
    let vcfg = VerifyConfig {
        parallel: true,
        eols_rank: *rank,
    };
    for d in d_low + h + 1..=max_d {
        for p in 0.. {
            let cert = theorem_finitely_step(m, d, p, &table, &eols_certs)?;
            let report = verify(&cert, &vcfg);
            if !report.verified {
                return Err(HomogeneousError::StepFails {
                    d,
                    m,
                    p,
                    reason: format!(
                        "{} at {}",
                        report.failure.as_ref().map(|f| f.to_string()).unwrap_or_default(),
                        report.failure_path_string()
                    ),
                });
            }
            let vdim = cert.system().vdim();
            entries.push(FinitelyEntry {
                d,
                p,
                vdim,
                source: EntrySource::Inductive,
                nodes: report.node_count,
            });
            table.insert(d, p, cert)?;
            if vdim <= -1 {
                break;
            }
        }
    }
    Ok(FinitelyTable {
        m,
        d_low,
        max_d,
        entries,
        certificates: Some(table),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SystemId {
    pub d: u32,
    pub m: u32,
    pub r: u32,
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{}({}x{})", self.d, self.m, self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Special,
    NonSpecial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub class: String,
    pub pairing: i64,
    pub source: WitnessSource,
}

/// Version written into every campaign record.
pub const RECORD_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignRecord {
    pub version: u32,
    pub id: SystemId,
    pub dim: i64,
    pub vdim: i64,
    pub edim: i64,
    pub verdict: Verdict,
    pub certainty: Certainty,
    /// Dimension predicted from the Cremona-reduced class.
    pub predicted_dim: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
}

impl CampaignRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub rank: RankConfig,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    /// Largest `m` accepted.
    pub m_cap: u32,
    /// Largest `d` accepted.
    pub d_cap: u32,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            rank: RankConfig::default(),
            jobs: 0,
            m_cap: 5,
            d_cap: 30,
        }
    }
}

/// Seed for one system, mixed from the campaign seed so that records do not
/// depend on scheduling.
pub fn system_seed(base: u64, id: SystemId) -> u64 {
    let mut z = base
        ^ (id.d as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (id.m as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
        ^ (id.r as u64).wrapping_mul(0x1656_67B1_9E37_79F9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// All ids with `1 ≤ m ≤ m_max`, `1 ≤ d ≤ d_max` and `r ≥ 1` imposing at
/// most `#D + 2m²` conditions.
pub fn campaign_ids(m_max: u32, d_max: u32) -> Vec<SystemId> {
    let mut ids = Vec::new();
    for m in 1..=m_max {
        for d in 1..=d_max {
            let points = binom2(d + 1);
            let r_max = (points + 2 * (m as u64).pow(2)) / binom2(m);
            ids.extend((1..=r_max as u32).map(|r| SystemId { d, m, r }));
        }
    }
    ids
}

pub fn campaign_record(id: SystemId, config: &CampaignConfig) -> Result<CampaignRecord, HomogeneousError> {
    let system = homogeneous_system(id.d, id.m, id.r);
    let seed = system_seed(config.rank.seed, id);
    let result = generic_dimension(&system, &config.rank.with_seed(seed))?;
    let special = result.is_special();
    let predicted_dim = predicted_system_dimension(&system).expect("plane system");
    let witness = find_witness(&system).expect("plane system");
    let mut issues = Vec::new();
    if predicted_dim != result.value {
        issues.push(format!("predicted dim {predicted_dim}, rank gives {}", result.value));
    }
    if special && witness.is_none() {
        issues.push("special without a (-1)-curve witness".to_string());
    }
    let show_witness = special || predicted_dim > result.edim;
    Ok(CampaignRecord {
        version: RECORD_VERSION,
        id,
        dim: result.value,
        vdim: result.vdim,
        edim: result.edim,
        verdict: if special { Verdict::Special } else { Verdict::NonSpecial },
        certainty: result.certainty,
        predicted_dim,
        witness: witness.filter(|_| show_witness).map(|w| WitnessRecord {
            class: w.class.to_string(),
            pairing: w.pairing,
            source: w.source,
        }),
        certificate: None,
        seed,
        discrepancy: (!issues.is_empty()).then(|| issues.join("; ")),
    })
}

/// Rank, prediction and witness for every system in range; sorted by id.
pub fn hh_campaign(m_max: u32, d_max: u32, config: &CampaignConfig) -> Result<Vec<CampaignRecord>, HomogeneousError> {
    if m_max > config.m_cap || d_max > config.d_cap {
        return Err(HomogeneousError::InvalidParameter(format!(
            "range m ≤ {m_max}, d ≤ {d_max} exceeds the caps m ≤ {}, d ≤ {}",
            config.m_cap, config.d_cap
        )));
    }
    let ids = campaign_ids(m_max, d_max);
    let run = || -> Result<Vec<CampaignRecord>, HomogeneousError> {
        ids.par_iter().map(|&id| campaign_record(id, config)).collect()
    };
    let mut records = if config.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| HomogeneousError::InvalidParameter(e.to_string()))?
            .install(run)?
    } else {
        run()?
    };
    records.sort_by_key(|r| r.id);
    Ok(records)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub m: u32,
    pub d: u32,
    pub systems: usize,
    pub special: usize,
    pub non_special: usize,
    pub discrepancies: usize,
}

/// Counts per `(m, d)`.
pub fn summarize(records: &[CampaignRecord]) -> Vec<SummaryRow> {
    let mut rows: BTreeMap<(u32, u32), SummaryRow> = BTreeMap::new();
    for r in records {
        let row = rows.entry((r.id.m, r.id.d)).or_insert(SummaryRow {
            m: r.id.m,
            d: r.id.d,
            ..Default::default()
        });
        row.systems += 1;
        match r.verdict {
            Verdict::Special => row.special += 1,
            Verdict::NonSpecial => row.non_special += 1,
        }
        row.discrepancies += r.discrepancy.is_some() as usize;
    }
    rows.into_values().collect()
}

pub fn summary_table(rows: &[SummaryRow]) -> String {
    let mut out = String::from("   m    d  systems  special  non-special  discrepancies\n");
    for r in rows {
        out.push_str(&format!(
            "{:>4} {:>4} {:>8} {:>8} {:>12} {:>14}\n",
            r.m, r.d, r.systems, r.special, r.non_special, r.discrepancies
        ));
    }
    out
}
