//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use fatcut::cutting::*;
use fatcut::diagram::{AffineCut, Diagram, LatticePoint};
use fatcut::homogeneous::*;
use fatcut::interp::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Everything produced along the way, rechecked by the soundness and
/// serialization criteria.
#[derive(Default)]
struct Corpus {
    systems: Vec<LinearSystem>,
    certificates: Vec<CutCertificate>,
    records: Vec<CampaignRecord>,
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verify_ok(c: &CutCertificate) -> Result<ProofReport, String> {
    let r = verify(c, &VerifyConfig::default());
    check(r.verified, || format!("certificate rejected: {r}"))?;
    Ok(r)
}

fn oracle(l: &LinearSystem) -> DimensionResult {
    generic_dimension(l, &RankConfig::default().with_seed(0xacce_97ed)).unwrap()
}

fn example_reproduction(corpus: &mut Corpus) -> Outcome {
    let l = LinearSystem::plane(21, "7x6,6x4,1".parse().unwrap());
    let t = Instant::now();
    let r = generic_dimension(
        &l,
        &RankConfig {
            trials: 1,
            ..Default::default()
        },
    )
    .unwrap();
    let rank_time = t.elapsed();
    check(r.value == -1 && r.certainty == Certainty::CertifiedNonSpecial, || {
        format!("dim gave {}", r.to_text())
    })?;
    check(r.trial_ranks == [253], || format!("rank {:?}", r.trial_ranks))?;
    check(rank_time < Duration::from_secs(2), || {
        format!("rank took {rank_time:?}")
    })?;
    let t = Instant::now();
    let cert = search_cut_proof(&l, &SearchConfig::default()).ok_or("no certificate within depth 6")?;
    let search_time = t.elapsed();
    check(cert.cut_depth() <= 6, || format!("depth {}", cert.cut_depth()))?;
    let report = verify_ok(&cert)?;
    corpus.systems.push(l);
    corpus.certificates.push(cert.clone());
    Ok(format!(
        "dim -1 certified, rank {:.2?}, proof with {} nodes at depth {} in {:.1?}, dim {:?}",
        rank_time,
        report.node_count,
        cert.cut_depth(),
        search_time,
        report.conclusion.unwrap()
    ))
}

fn lemma_ladder(corpus: &mut Corpus) -> Outcome {
    const MAX_POINTS: u32 = 400;
    let t = Instant::now();
    let mut certs = Vec::new();
    for m in 1..=5u32 {
        certs.push(lemma_backtriangle(m));
        certs.push(lemma_twotriangles(m));
        for k in (m + 1..=MAX_POINTS / m).step_by(m as usize + 1) {
            certs.push(lemma_singlelayer(m, k).map_err(|e| e.to_string())?);
            for h in (2 * m..=MAX_POINTS / k).step_by(m as usize) {
                certs.push(lemma_fatlayer(m, k, h).map_err(|e| e.to_string())?);
            }
        }
        let h = m * (m + 1);
        let eols = default_eols_certificates(m, &RankConfig::default());
        for k in (1..).take_while(|&k| fulllayer_diagram(m, k).len() as u32 <= MAX_POINTS) {
            certs.push(lemma_fulllayer(m, k, &eols).map_err(|e| e.to_string())?);
        }
        let _ = h;
    }
    let count = certs.len();
    for c in &certs {
        let l = c.system();
        check(l.diagram.len() as u32 <= MAX_POINTS, || format!("{l} too large"))?;
        verify_ok(c)?;
        let r = oracle(l);
        check(r.value == -1 && r.certainty == Certainty::CertifiedNonSpecial, || {
            format!("oracle: {}", r.to_text())
        })?;
        corpus.systems.push(l.clone());
    }
    corpus.certificates.extend(certs);
    let elapsed = t.elapsed();
    check(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{count} certificates verified, all root systems empty, {elapsed:.1?}"
    ))
}

/// Splits `total` conditions into random multiplicities, largest first.
fn random_mults_filling(rng: &mut ChaCha8Rng, mut total: u64) -> Vec<u32> {
    let mut out = Vec::new();
    while total > 0 {
        let top = (1..=6u32).filter(|&m| common::binom2(m) <= total).max().unwrap();
        let m = rng.gen_range(1..=top);
        out.push(m);
        total -= common::binom2(m);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn cut_bound_suite(corpus: &mut Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rank = RankConfig::default();
    let mut done = 0;
    let mut rejected = 0;
    let mut tight = 0;
    while done < 200 {
        let d = rng.gen_range(3..=12);
        let diagram = Diagram::triangle(d);
        let cut = match rng.gen_range(0..4) {
            0 => AffineCut::vertical(rng.gen_range(1..=d as i64)),
            1 => AffineCut::horizontal(rng.gen_range(1..=d as i64)),
            2 => AffineCut::diagonal(rng.gen_range(1..=d as i64)),
            _ => AffineCut::sloped(1, 2, rng.gen_range(1..=d as i64)),
        };
        let (d1, d2) = diagram.split(&cut).unwrap();
        if d2.is_empty() {
            continue;
        }
        let m2 = random_mults_filling(&mut rng, d2.len() as u64);
        let m1: Vec<u32> = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(1..=4)).collect();
        let l2 = LinearSystem::new(d2, MultiplicityList::new(m2.clone()).unwrap());
        let r2 = generic_dimension(&l2, &rank).unwrap();
        if l2.vdim() != -1 || r2.certainty != Certainty::CertifiedNonSpecial {
            rejected += 1;
            continue;
        }
        let l1 = LinearSystem::new(d1, MultiplicityList::new(m1.clone()).unwrap());
        let all: Vec<u32> = m1.iter().chain(&m2).copied().collect();
        let l = LinearSystem::new(diagram, MultiplicityList::new(all).unwrap());
        let split: Vec<usize> = (m1.len()..m1.len() + m2.len()).collect();
        let (c1, c2) = apply_cut(&l, &cut, &split).map_err(|e| e.to_string())?;
        check(c1 == l1 && c2 == l2, || format!("apply_cut disagrees on {l}"))?;
        let v = generic_dimension(&l, &rank).unwrap().value;
        let v1 = generic_dimension(&l1, &rank).unwrap().value;
        check(v <= v1, || format!("{l}: {v} > {v1} on {l1}"))?;
        tight += (v == v1) as usize;
        corpus.systems.extend([l, l1, l2]);
        done += 1;
    }
    Ok(format!(
        "200 instances, 0 violations ({tight} with equality, {rejected} draws rejected)"
    ))
}

fn campaign(corpus: &mut Corpus) -> Outcome {
    let t = Instant::now();
    let config = CampaignConfig {
        jobs: 4,
        ..Default::default()
    };
    let records = hh_campaign(4, 15, &config).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let bad: Vec<_> = records.iter().filter(|r| r.discrepancy.is_some()).collect();
    check(bad.is_empty(), || {
        format!("{} discrepancies, first {}", bad.len(), bad[0].id)
    })?;
    check(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    for (d, r) in [(2, 2), (4, 5)] {
        let rec = records
            .iter()
            .find(|x| x.id == SystemId { d, m: 2, r })
            .ok_or_else(|| format!("L_{d}(2x{r}) missing"))?;
        check(rec.verdict == Verdict::Special, || format!("{} not special", rec.id))?;
        let w = rec
            .witness
            .as_ref()
            .ok_or_else(|| format!("{} has no witness", rec.id))?;
        check(w.pairing == -2, || format!("{} pairing {}", rec.id, w.pairing))?;
    }
    let special: Vec<String> = records
        .iter()
        .filter(|r| r.verdict == Verdict::Special)
        .map(|r| r.id.to_string())
        .collect();
    corpus
        .systems
        .extend(records.iter().map(|r| homogeneous_system(r.id.d, r.id.m, r.id.r)));
    let n = records.len();
    corpus.records.extend(records);
    Ok(format!(
        "{n} systems, 0 discrepancies in {elapsed:.1?}; special: {}",
        special.join(" ")
    ))
}

fn random_system(rng: &mut ChaCha8Rng) -> LinearSystem {
    let size = rng.gen_range(1..=45);
    let mut pts = std::collections::BTreeSet::new();
    while pts.len() < size {
        pts.insert(LatticePoint::from((rng.gen_range(0..9u32), rng.gen_range(0..9u32))));
    }
    let mults: Vec<u32> = (0..rng.gen_range(0..=6)).map(|_| rng.gen_range(1..=4)).collect();
    LinearSystem::new(Diagram::from_points(pts), MultiplicityList::new(mults).unwrap())
}

fn oracle_cross_validation(corpus: &mut Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut special = 0;
    for i in 0..500u64 {
        // Half random subsets, half plane triangles where speciality is common.
        let l = if i % 2 == 0 {
            random_system(&mut rng)
        } else {
            let d = rng.gen_range(1..=8);
            let mults = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(1..=d)).collect();
            LinearSystem::plane(d, MultiplicityList::new(mults).unwrap())
        };
        let g = generic_dimension(&l, &RankConfig::default().with_seed(i)).unwrap();
        let pts = common::random_points(l.mults.len(), 10_000 + i, 1 << 20, 1 << 10);
        let e = exact_dimension(&l, &pts).unwrap();
        check(g.value == e.value, || {
            format!("{l}: generic {} exact {}", g.value, e.value)
        })?;
        special += g.is_special() as usize;
        corpus.systems.push(l);
    }
    Ok(format!("500 systems agree ({special} special)"))
}

fn soundness(corpus: &Corpus) -> Outcome {
    // Bareiss cost grows fast with the entry size, so larger systems are only
    // checked against edim here.
    const EXACT_LIMIT: usize = 55;
    let mut seen = std::collections::HashSet::new();
    let mut exact_checked = 0;
    for (i, l) in corpus.systems.iter().enumerate() {
        if !seen.insert(l.clone()) {
            continue;
        }
        let g = generic_dimension(l, &RankConfig::default().with_seed(i as u64)).unwrap();
        check(g.value >= g.edim, || format!("{l}: {} below edim {}", g.value, g.edim))?;
        if g.certainty == Certainty::CertifiedNonSpecial && l.diagram.len() <= EXACT_LIMIT {
            let pts = common::random_points(l.mults.len(), 77 + i as u64, 1 << 12, 1 << 6);
            let e = exact_dimension(l, &pts).unwrap();
            check(e.value >= e.edim, || format!("{l}: exact below edim"))?;
            check(e.value == g.value, || {
                format!("{l}: certified {} but exact {}", g.value, e.value)
            })?;
            exact_checked += 1;
        }
    }
    Ok(format!(
        "{} distinct systems, none below edim, {exact_checked} certified verdicts confirmed exactly",
        seen.len()
    ))
}

fn eols_arithmetic(corpus: &mut Corpus) -> Outcome {
    let mut count = 0;
    for m in 1..=6 {
        for l in eols(m) {
            check(l.vdim() == -1, || format!("{l}: vdim {}", l.vdim()))?;
            check(common::reference_vdim(&l) == -1, || format!("{l}: reference vdim"))?;
            if m <= 3 {
                let r = oracle(&l);
                check(r.certainty == Certainty::CertifiedNonSpecial, || {
                    format!("{l}: {}", r.to_text())
                })?;
                corpus.systems.push(l);
            }
            count += 1;
        }
    }
    Ok(format!("{count} systems with vdim -1, m <= 3 confirmed by rank"))
}

fn serialization(corpus: &Corpus) -> Outcome {
    for c in &corpus.certificates {
        let back = CutCertificate::from_json(&c.to_json()).map_err(|e| e.to_string())?;
        check(&back == c, || format!("certificate for {} changed", c.system()))?;
    }
    for r in &corpus.records {
        let back: CampaignRecord = serde_json::from_str(&r.to_json_line()).map_err(|e| e.to_string())?;
        check(&back == r, || format!("record {} changed", r.id))?;
    }
    for l in corpus.systems.iter().take(2000) {
        let back: LinearSystem = serde_json::from_str(&serde_json::to_string(l).unwrap()).map_err(|e| e.to_string())?;
        check(&back == l, || format!("{l} changed"))?;
    }
    Ok(format!(
        "{} certificates, {} campaign records and the system corpus round-trip",
        corpus.certificates.len(),
        corpus.records.len()
    ))
}

fn main() {
    let mut corpus = Corpus::default();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, outcome: Outcome| match outcome {
        Ok(msg) => println!("[PASS] {n} {name}: {msg}"),
        Err(msg) => {
            failed += 1;
            println!("[FAIL] {n} {name}: {msg}");
        }
    };
    report(1, "example reproduction", example_reproduction(&mut corpus));
    report(2, "lemma ladder", lemma_ladder(&mut corpus));
    report(3, "cut bound", cut_bound_suite(&mut corpus));
    report(4, "homogeneous campaign", campaign(&mut corpus));
    report(5, "oracle cross-validation", oracle_cross_validation(&mut corpus));
    report(7, "end-of-layer arithmetic", eols_arithmetic(&mut corpus));
    report(6, "one-sided soundness", soundness(&corpus));
    report(8, "serialization", serialization(&corpus));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
