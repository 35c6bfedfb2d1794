use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use enriques_core::census::{hypersurface_census, omega_membership, verify_record, PeriodPoint, NONEMPTY_NOTE};
use enriques_core::enriques::{
    brauer_torsion_profile, enriques_surface_torsion_profile, EnriquesModel, PicardSpec, DEFAULT_SEED,
};
use enriques_core::intlinalg::FiniteAbelianGroup;
use enriques_core::lattice::{Lattice, LatticeDescriptor, Signature};
use enriques_core::report::{run_lemma_checks, CheckLine, Report, ReportHeader};

#[derive(Parser, Debug)]
#[command(name = "enriques", version, about = "Exact lattice computations for Enriques double covers")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Both,
    Picard,
    Form,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Standard {
    K3,
    E8,
    H,
    E,
    Anti,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, parity, signature and discriminant group of a lattice.
    LatticeInfo {
        /// Lattice JSON `{"name": ..., "gram": [[...]]}`.
        path: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "path")]
        standard: Option<Standard>,
    },
    /// Verify the lattice-level statements about the double cover.
    CheckLemmas {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Use a deliberately broken mod-2 surface model.
        #[arg(long, hide = true)]
        corrupt_model: bool,
    },
    /// Decide whether the pulled-back Brauer class vanishes.
    Brauer {
        /// Picard JSON `{"label": ..., "generators": [[...22]]}`.
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Hypersurfaces H_lambda with witness e - k f for odd k.
    Census {
        #[arg(long, default_value_t = 11, value_parser = parse_k_max)]
        k_max: u64,
    },
    /// Exact period-domain membership of a rational period point.
    Omega {
        /// Period JSON `{"re": ["p/q", ...12], "im": [...12]}`.
        path: PathBuf,
        /// Comma-separated L-vector (22 entries); reports whether omega lies on its hypersurface.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Size and structure of Br[n].
    Torsion {
        #[arg(long, default_value_t = 2)]
        n: u64,
        /// K3 Picard JSON; without it the Enriques surface itself is profiled.
        #[arg(long)]
        picard: Option<PathBuf>,
        /// Invariant factors of Tors H^3, comma separated.
        #[arg(long)]
        h3: Option<String>,
    },
}

fn parse_k_max(s: &str) -> Result<u64, String> {
    let k = u64::from_str(s).map_err(|e| e.to_string())?;
    if k < 3 || k % 2 == 0 {
        return Err(format!("k-max must be odd and at least 3, got {k}"));
    }
    Ok(k)
}

enum Failure {
    Verification(Report),
    Io(String),
    Validation(String),
}

impl From<enriques_core::Error> for Failure {
    fn from(e: enriques_core::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn parse_ints(s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',')
        .map(|t| BigInt::from_str(t.trim()).map_err(|e| Failure::Validation(format!("bad integer {t:?}: {e}"))))
        .collect()
}

#[derive(Serialize)]
struct LatticeInfo {
    name: String,
    rank: usize,
    even: bool,
    signature: Signature,
    determinant: String,
    unimodular: bool,
    discriminant_group: Option<String>,
}

fn lattice_info(lattice: &Lattice) -> LatticeInfo {
    let det = lattice.determinant();
    LatticeInfo {
        name: lattice.name().to_string(),
        rank: lattice.rank(),
        even: lattice.is_even(),
        signature: lattice.signature(),
        unimodular: det == BigInt::from(1) || det == BigInt::from(-1),
        determinant: det.to_string(),
        discriminant_group: lattice.discriminant_group().ok().map(|g| g.to_string()),
    }
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::LatticeInfo { path, standard } => {
            let mut header = ReportHeader::new("lattice-info");
            let lattice = match (path, standard) {
                (Some(p), _) => {
                    header.inputs.push(p.display().to_string());
                    let d: LatticeDescriptor = read_json(&p)?;
                    Lattice::try_from(d)?
                }
                (None, Some(s)) => {
                    let m = EnriquesModel::build();
                    header.inputs.push(format!("standard:{s:?}").to_lowercase());
                    match s {
                        Standard::K3 => m.k3_lattice().clone(),
                        Standard::E8 => Lattice::e8_negative(),
                        Standard::H => Lattice::hyperbolic(),
                        Standard::E => m.surface_lattice().clone(),
                        Standard::Anti => m.anti_invariant_lattice(),
                    }
                }
                (None, None) => return Err(Failure::Validation("give a lattice file or --standard".into())),
            };
            Ok(Report::new(header, Vec::new(), lattice_info(&lattice)))
        }
        Command::CheckLemmas {
            seed,
            samples,
            corrupt_model,
        } => {
            let mut header = ReportHeader::new("check-lemmas");
            header.seed = Some(seed);
            header.samples = Some(samples);
            if corrupt_model {
                header.inputs.push("corrupted surface model".into());
            }
            let model = EnriquesModel::build();
            let (checks, summary) = run_lemma_checks(&model, seed, samples, corrupt_model)?;
            let report = Report::new(header, checks, summary);
            if report.all_pass() {
                Ok(report)
            } else {
                Err(Failure::Verification(report))
            }
        }
        Command::Brauer { path, method } => {
            let mut header = ReportHeader::new("brauer");
            header.inputs.push(path.display().to_string());
            header.method = Some(format!("{method:?}").to_lowercase());
            let spec: PicardSpec = read_json(&path)?;
            let model = EnriquesModel::build();
            match method {
                MethodArg::Picard => {
                    let r = model.brauer_vanishes_by_picard(&spec)?;
                    Ok(Report::new(header, Vec::new(), vec![r]))
                }
                MethodArg::Form => {
                    let r = model.brauer_vanishes_by_form(&spec)?;
                    Ok(Report::new(header, Vec::new(), vec![r]))
                }
                MethodArg::Both => {
                    let (p, f) = model.brauer_decide_both(&spec)?;
                    let agree = p.vanishes == f.vanishes;
                    let checks = vec![CheckLine::new(
                        "cross-method",
                        "the Picard witness test and the transcendental form test agree",
                        agree,
                        format!("picard: {}, form: {}", p.vanishes, f.vanishes),
                    )];
                    let report = Report::new(header, checks, vec![p, f]);
                    if agree {
                        Ok(report)
                    } else {
                        Err(Failure::Verification(report))
                    }
                }
            }
        }
        Command::Census { k_max } => {
            let mut header = ReportHeader::new("census");
            header.k_max = Some(k_max);
            header.inputs.push(NONEMPTY_NOTE.into());
            let model = EnriquesModel::build();
            let records = hypersurface_census(&model, k_max)?;
            let mut bad = Vec::new();
            for r in &records {
                if !verify_record(&model, r)? {
                    bad.push(r.k.to_string());
                }
            }
            let checks = vec![CheckLine::new(
                "census-witnesses",
                "witnesses are primitive, anti-invariant, of square 2 mod 4, with divisibility dividing the norm",
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{} records", records.len())
                } else {
                    format!("failing k: {}", bad.join(","))
                },
            )];
            let report = Report::new(header, checks, records);
            if report.all_pass() {
                Ok(report)
            } else {
                Err(Failure::Verification(report))
            }
        }
        Command::Omega { path, lambda } => {
            let mut header = ReportHeader::new("omega");
            header.inputs.push(path.display().to_string());
            let point: PeriodPoint = read_json(&path)?;
            let lambda = lambda.as_deref().map(parse_ints).transpose()?;
            let model = EnriquesModel::build();
            let r = omega_membership(&model, &point, lambda.as_deref())?;
            Ok(Report::new(header, Vec::new(), r))
        }
        Command::Torsion { n, picard, h3 } => {
            let mut header = ReportHeader::new("torsion");
            let h3 = match h3 {
                Some(s) => FiniteAbelianGroup::from_cyclic_orders(&parse_ints(&s)?)?,
                None => FiniteAbelianGroup::trivial(),
            };
            let profile = match picard {
                None => {
                    header.inputs.push("enriques surface".into());
                    enriques_surface_torsion_profile(n)?
                }
                Some(p) => {
                    header.inputs.push(p.display().to_string());
                    let spec: PicardSpec = read_json(&p)?;
                    let model = EnriquesModel::build();
                    let t = model.k3_lattice().orthogonal_complement(&model.saturated_picard(&spec)?)?;
                    brauer_torsion_profile(t.rows(), n, &h3)?
                }
            };
            Ok(Report::new(header, Vec::new(), profile))
        }
    }
}

fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Table => report.to_table(),
    };
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.out.as_deref();
    let result = run(cli.command).and_then(|r| emit(&r, cli.format, out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(report)) => {
            if let Err(Failure::Io(msg)) = emit(&report, cli.format, out) {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
