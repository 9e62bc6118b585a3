//! Command-line front end. Exit status: 0 on success or a verified proof,
//! 1 when no proof is found or verification fails, 2 on usage or input errors.

pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::cutting::{search_cut_proof, verify, CutCertificate, CutFamily, SearchConfig, VerifyConfig};
use crate::diagram::Diagram;
use crate::homogeneous::{hh_campaign, summarize, summary_table, CampaignConfig, Verdict};
use crate::interp::{
    exact_dimension_capped, generic_dimension, LinearSystem, MultiplicityList, PrimeField, RankConfig,
    DEFAULT_EXACT_CAP, MERSENNE_61,
};

/// Version written into JSON outputs that are not certificates.
pub const OUTPUT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Style {
    Ascii,
    Svg,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Prime modulus for randomized rank computations.
    #[arg(long, global = true, env = "FATCUT_FIELD_PRIME", default_value_t = MERSENNE_61)]
    pub field_prime: u64,
    /// Independent random trials per rank computation.
    #[arg(long, global = true, env = "FATCUT_TRIALS", default_value_t = 3,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    #[arg(long, global = true, env = "FATCUT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest diagram accepted by exact rational elimination.
    #[arg(long, global = true, env = "FATCUT_EXACT_CAP", default_value_t = DEFAULT_EXACT_CAP)]
    pub exact_cap: usize,
    /// Maximum number of nested cuts when searching for a proof.
    #[arg(long, global = true, env = "FATCUT_DEPTH", default_value_t = 6)]
    pub depth: usize,
    /// Worker threads for the campaign (0: one per core).
    #[arg(long, global = true, env = "FATCUT_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, global = true, env = "FATCUT_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true, env = "FATCUT_OUT")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn rank(&self) -> RankConfig {
        RankConfig {
            modulus: self.field_prime,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fatcut",
    version,
    about = "Dimensions of plane curve systems with multiple base points"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Plane degree: the diagram is the triangle of degree D.
    #[arg(
        long = "d",
        value_name = "D",
        conflicts_with = "diagram",
        required_unless_present = "diagram"
    )]
    pub degree: Option<u32>,
    /// Diagram in column notation (`2^3,1^0`) or as a point list (`(0,0),(1,2)`).
    #[arg(long)]
    pub diagram: Option<String>,
    /// Multiplicities, e.g. `7x6,6x4,1`.
    #[arg(long, default_value = "")]
    pub mults: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of a system.
    Dim {
        #[command(flatten)]
        system: SystemArgs,
        /// Exact elimination over Q at seeded random rational points.
        #[arg(long)]
        exact: bool,
    },
    /// Search for a cut certificate of non-speciality.
    Prove {
        #[command(flatten)]
        system: SystemArgs,
        /// Systems with at most this many points become rank leaves.
        #[arg(long, default_value_t = 60)]
        leaf_threshold: usize,
        /// Only vertical, horizontal and diagonal cuts.
        #[arg(long)]
        basic_cuts: bool,
    },
    /// Check a certificate file.
    Verify {
        file: PathBuf,
        /// Check subtrees on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Rank and (-1)-curve comparison for homogeneous systems.
    Hh {
        #[arg(long, default_value_t = 4)]
        m_max: u32,
        #[arg(long, default_value_t = 15)]
        d_max: u32,
    },
    /// Draw a diagram or a certificate.
    Render {
        #[arg(long, conflicts_with = "certificate", required_unless_present = "certificate")]
        diagram: Option<String>,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Style::Svg)]
        style: Style,
    },
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

pub fn parse_system(args: &SystemArgs) -> Result<LinearSystem, String> {
    let mults: MultiplicityList = args.mults.parse().map_err(|e| format!("--mults: {e}"))?;
    match (&args.degree, &args.diagram) {
        (Some(d), _) => Ok(LinearSystem::plane(*d, mults)),
        (None, Some(spec)) => {
            let diagram: Diagram = spec.parse().map_err(|e| format!("--diagram: {e}"))?;
            Ok(LinearSystem::new(diagram, mults))
        }
        (None, None) => Err("either --d or --diagram is required".into()),
    }
}

/// Seeded random rationals with numerators up to 2^20 and denominators up to 2^10.
pub fn random_rational_points(count: usize, seed: u64) -> Vec<(BigRational, BigRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = || {
        BigRational::new(
            BigInt::from(rng.gen_range(1i64..=1 << 20)),
            BigInt::from(rng.gen_range(1i64..=1 << 10)),
        )
    };
    (0..count).map(|_| (q(), q())).collect()
}

fn emit(config: &RunConfig, stdout: &mut dyn Write, text: &str) -> Result<(), UsageError> {
    match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(Into::into),
    }
}

fn versioned(value: impl Serialize) -> String {
    let mut v = serde_json::to_value(value).expect("serializable");
    if let Some(obj) = v.as_object_mut() {
        obj.insert("version".into(), json!(OUTPUT_VERSION));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn read_certificate(path: &PathBuf) -> Result<CutCertificate, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    CutCertificate::from_json(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, UsageError> {
    let config = &cli.config;
    if PrimeField::new(config.field_prime).is_none() {
        return Err(UsageError(format!("--field-prime {} is not prime", config.field_prime)));
    }
    match &cli.command {
        Command::Dim { system, exact } => {
            let l = parse_system(system).map_err(UsageError)?;
            let result = if *exact {
                let points = random_rational_points(l.mults.len(), config.seed);
                exact_dimension_capped(&l, &points, config.exact_cap)?
            } else {
                generic_dimension(&l, &config.rank())?
            };
            let text = match config.format {
                Format::Text => result.to_text(),
                Format::Json => versioned(&result),
            };
            emit(config, stdout, &text)?;
            Ok(EXIT_OK)
        }
        Command::Prove {
            system,
            leaf_threshold,
            basic_cuts,
        } => {
            let l = parse_system(system).map_err(UsageError)?;
            let search = SearchConfig {
                max_depth: config.depth,
                leaf_threshold: *leaf_threshold,
                families: if *basic_cuts {
                    CutFamily::basic()
                } else {
                    CutFamily::standard()
                },
                rank: config.rank(),
                ..Default::default()
            };
            match search_cut_proof(&l, &search) {
                Some(cert) => {
                    emit(config, stdout, &(cert.to_json() + "\n"))?;
                    writeln!(
                        stderr,
                        "found certificate for {l}: {} nodes, {} nested cuts",
                        cert.node_count(),
                        cert.cut_depth()
                    )?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(stderr, "no certificate for {l} within depth {}", config.depth)?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Verify { file, sequential } => {
            let cert = read_certificate(file)?;
            let report = verify(
                &cert,
                &VerifyConfig {
                    parallel: !sequential,
                    eols_rank: config.rank(),
                },
            );
            let text = match config.format {
                Format::Text => format!("{report}\n"),
                Format::Json => versioned(&report),
            };
            emit(config, stdout, &text)?;
            Ok(if report.verified { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Hh { m_max, d_max } => {
            let cc = CampaignConfig {
                rank: config.rank(),
                jobs: config.jobs,
                ..Default::default()
            };
            let records = hh_campaign(*m_max, *d_max, &cc)?;
            let rows = summarize(&records);
            let mut log = String::new();
            for r in &records {
                match config.format {
                    Format::Json => log.push_str(&r.to_json_line()),
                    Format::Text => {
                        log.push_str(&format!(
                            "{} dim={} edim={} {}",
                            r.id,
                            r.dim,
                            r.edim,
                            match r.verdict {
                                Verdict::Special => "special",
                                Verdict::NonSpecial => "non-special",
                            }
                        ));
                        if let Some(w) = &r.witness {
                            log.push_str(&format!(" witness={} pairing={}", w.class, w.pairing));
                        }
                        if let Some(d) = &r.discrepancy {
                            log.push_str(&format!(" DISCREPANCY: {d}"));
                        }
                    }
                }
                log.push('\n');
            }
            let summary = match config.format {
                Format::Text => summary_table(&rows),
                Format::Json => {
                    serde_json::to_string(&json!({ "version": OUTPUT_VERSION, "summary": rows })).unwrap() + "\n"
                }
            };
            if config.out.is_some() {
                emit(config, stdout, &log)?;
                stdout.write_all(summary.as_bytes())?;
            } else {
                stdout.write_all(log.as_bytes())?;
                stdout.write_all(summary.as_bytes())?;
            }
            let discrepancies: usize = rows.iter().map(|r| r.discrepancies).sum();
            if discrepancies > 0 {
                writeln!(stderr, "{discrepancies} discrepancies")?;
                return Ok(EXIT_NEGATIVE);
            }
            Ok(EXIT_OK)
        }
        Command::Render {
            diagram,
            certificate,
            style,
        } => {
            let (d, cuts) = match (diagram, certificate) {
                (Some(spec), _) => (
                    spec.parse::<Diagram>()
                        .map_err(|e| UsageError(format!("--diagram: {e}")))?,
                    Vec::new(),
                ),
                (None, Some(path)) => {
                    let cert = read_certificate(path)?;
                    (cert.system().diagram.clone(), render::collect_cuts(&cert))
                }
                (None, None) => return Err(UsageError("either --diagram or --certificate is required".into())),
            };
            let text = match style {
                Style::Svg => render::svg(&d, &cuts),
                Style::Ascii => render::ascii(&d, cuts.first()),
            };
            emit(config, stdout, &text)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
