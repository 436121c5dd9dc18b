//! `nilalg`: command-line front end.
//!
//! Exit codes: 0 when the expectation is met, 1 when the analysis finished
//! with a negative or mismatching result, 2 for input or construction errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nilalg::catalog::{self, Family, FamilySpec};
use nilalg::gradations::{self, DegreeAssignment, SearchOptions, DEFAULT_SEARCH_SAMPLES};
use nilalg::invariants::{self, DEFAULT_SAMPLES, DEFAULT_SEED};
use nilalg::pipeline::{run_pipeline, PipelineOptions, TheoremId};
use nilalg::{json, Algebra, Error};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "nilalg",
    version,
    about = "Invariants and gradations of nilpotent Leibniz algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or list the catalog families.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Series, nilindex, characteristic sequence and natural gradation of an algebra file.
    Invariants {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Random test vectors for the characteristic sequence.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Verify or search for gradations of maximum length.
    #[command(subcommand)]
    Grade(GradeCmd),
    /// Re-check a classification statement over its instance grid.
    Reproduce {
        #[arg(long, value_parser = ["thm31", "thm32", "thm33", "thm34"])]
        theorem: String,
        /// JSON list of family specs replacing the default grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Generic draws for the two-generator search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_SAMPLES)]
        samples: usize,
        #[arg(long)]
        kt_window: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for all random choices (overrides NILALG_SEED).
    #[arg(long, env = "NILALG_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, alias = "report")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Families and their parameter constraints.
    List,
    /// Emit the algebra JSON of one family member.
    Make {
        /// L, Q, TAU_NP1, TAU_NP2, M1, ..., M5 (omit when using --spec).
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        /// Comma-separated odd parameters, e.g. 3,5,7.
        #[arg(long, value_delimiter = ',')]
        r: Vec<usize>,
        #[arg(long)]
        alpha: Option<u8>,
        /// Family spec JSON file instead of the flags.
        #[arg(long, conflicts_with_all = ["family", "n", "p", "r", "alpha"])]
        spec: Option<PathBuf>,
        /// Also print the known maximum-length degree table, if any.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GradeCmd {
    /// Check a degree assignment.
    Verify {
        file: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Two-generator adapted-basis search.
    Search {
        file: PathBuf,
        #[arg(long)]
        kt_window: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive search over gradations diagonal in the given basis (dim <= 8).
    Diagonal {
        file: PathBuf,
        /// Degrees range over [-W, W]; defaults to 2n.
        #[arg(long, alias = "window")]
        kt_window: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotNilpotent(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read(path: &Path) -> Result<(String, String), Failure> {
    let bytes = fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let hash = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| input_error(format!("{}: not UTF-8", path.display())))?;
    Ok((text, hash))
}

fn load_algebra(path: &Path) -> Result<(Algebra, String), Failure> {
    let (text, hash) = read(path)?;
    let alg = json::algebra_from_json(&text)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok((alg, hash))
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn envelope(seed: u64, input: Value, result: Value) -> Value {
    json!({
        "tool": "nilalg",
        "version": nilalg::VERSION,
        "seed": seed,
        "input": input,
        "result": result,
    })
}

fn spec_from_flags(
    family: Option<String>,
    n: Option<usize>,
    p: Option<usize>,
    r: Vec<usize>,
    alpha: Option<u8>,
    spec: Option<PathBuf>,
) -> Result<FamilySpec, Failure> {
    if let Some(path) = spec {
        let (text, _) = read(&path)?;
        return serde_json::from_str(&text).map_err(|e| {
            input_error(format!(
                "{}: line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        });
    }
    let family = family.ok_or_else(|| input_error("a family name or --spec is required".into()))?;
    let family = Family::parse(&family)?;
    let n = n.ok_or_else(|| input_error("--n is required".into()))?;
    let p = p.ok_or_else(|| input_error("--p is required".into()))?;
    Ok(FamilySpec {
        family,
        n,
        p,
        r,
        alpha,
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Catalog(CatalogCmd::List) => {
            let list: Vec<Value> = Family::ALL
                .iter()
                .map(|f| json!({ "family": f.name(), "lie": f.is_lie(), "hypotheses": f.hypotheses() }))
                .collect();
            emit(&list, None)?;
            Ok(0)
        }
        Command::Catalog(CatalogCmd::Make {
            family,
            n,
            p,
            r,
            alpha,
            spec,
            witness,
            out,
        }) => {
            let spec = spec_from_flags(family, n, p, r, alpha, spec)?;
            let alg = catalog::make(&spec)?;
            if witness {
                let w = catalog::reference_witness(&spec)?;
                emit(
                    &json!({ "algebra": json::algebra_to_value(&alg), "witness": w }),
                    out.as_deref(),
                )?;
            } else {
                emit(&json::algebra_to_value(&alg), out.as_deref())?;
            }
            Ok(0)
        }
        Command::Invariants {
            file,
            common,
            samples,
        } => {
            let (alg, hash) = load_algebra(&file)?;
            let (result, code) = invariants_report(&alg, samples, common.seed);
            emit(
                &envelope(common.seed, json!({ "sha256": hash }), result),
                common.out.as_deref(),
            )?;
            Ok(code)
        }
        Command::Grade(cmd) => grade(cmd),
        Command::Reproduce {
            theorem,
            grid,
            samples,
            kt_window,
            common,
        } => {
            let id = TheoremId::parse(&theorem)?;
            let (grid, input) = match grid {
                Some(path) => {
                    let (text, hash) = read(&path)?;
                    let specs: Vec<FamilySpec> = serde_json::from_str(&text).map_err(|e| {
                        input_error(format!(
                            "{}: line {}, column {}: {e}",
                            path.display(),
                            e.line(),
                            e.column()
                        ))
                    })?;
                    (Some(specs), json!({ "grid_sha256": hash }))
                }
                None => {
                    let canonical =
                        serde_json::to_vec(&id.default_grid()).expect("specs serialize");
                    (
                        None,
                        json!({ "default_grid_sha256": hex::encode(Sha256::digest(canonical)) }),
                    )
                }
            };
            let opts = PipelineOptions {
                seed: common.seed,
                samples,
                kt_window,
            };
            let report = run_pipeline(id, grid, &opts);
            let code = report.exit_code as u8;
            let summary = report
                .instances
                .iter()
                .map(|i| {
                    format!(
                        "  {}: {:?} ({})",
                        i.spec,
                        i.status,
                        i.verdict.as_deref().unwrap_or("-")
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            eprintln!("{id}: exit {code}\n{summary}");
            let result = serde_json::to_value(&report).expect("report serializes");
            emit(&envelope(common.seed, input, result), common.out.as_deref())?;
            Ok(code)
        }
    }
}

fn invariants_report(alg: &Algebra, samples: usize, seed: u64) -> (Value, u8) {
    let leibniz = alg.check_leibniz();
    let mut report = json!({
        "dim": alg.dim(),
        "leibniz": leibniz.is_leibniz(),
        "leibniz_violation": leibniz.describe_first(alg),
        "is_lie": alg.is_lie(),
    });
    let rest = (|| -> nilalg::Result<Value> {
        let series = invariants::lower_central_series(alg)?;
        let seq = invariants::characteristic_sequence_seeded(alg, samples, seed)?;
        let natural = gradations::natural_gradation(alg)?;
        Ok(json!({
            "series_dims": series.dims(),
            "nilindex": series.nilindex(),
            "characteristic_sequence": seq,
            "natural_gradation_dims": natural.component_dims(),
            "square_ideal_dim": alg.square_ideal().dim(),
        }))
    })();
    let map = report.as_object_mut().expect("object");
    match rest {
        Ok(Value::Object(extra)) => {
            map.extend(extra);
            (report, 0)
        }
        Ok(_) => unreachable!(),
        Err(e) => {
            map.insert("error".into(), Value::String(e.to_string()));
            (report, 1)
        }
    }
}

fn grade(cmd: GradeCmd) -> Result<u8, Failure> {
    let (file, common) = match &cmd {
        GradeCmd::Verify { file, common, .. } | GradeCmd::Search { file, common, .. } => {
            (file, common)
        }
        GradeCmd::Diagonal { file, common, .. } => (file, common),
    };
    let (alg, hash) = load_algebra(file)?;
    let mut input = json!({ "sha256": hash });
    let report = match &cmd {
        GradeCmd::Verify { assignment, .. } => {
            let (text, a_hash) = read(assignment)?;
            input["assignment_sha256"] = Value::String(a_hash);
            let d = DegreeAssignment::from_json(&alg, &text)
                .map_err(|e| input_error(format!("{}: {e}", assignment.display())))?;
            gradations::verify_gradation(&alg, &d)?
        }
        GradeCmd::Search {
            kt_window,
            samples,
            common,
            ..
        } => {
            let opts = SearchOptions {
                kt_window: *kt_window,
                samples: *samples,
                seed: common.seed,
                generators: None,
            };
            gradations::two_generator_search_with(&alg, &opts)?
        }
        GradeCmd::Diagonal { kt_window, .. } => {
            let window = kt_window.unwrap_or(2 * alg.dim() as i64);
            gradations::diagonal_search(&alg, window)?
        }
    };
    let code = if report.is_maximum_length() { 0 } else { 1 };
    let result = serde_json::to_value(&report).expect("report serializes");
    emit(&envelope(common.seed, input, result), common.out.as_deref())?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("nilalg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
