use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use toriclab::area_measure::MeasureJson;
use toriclab::geometry::json::{polytope_from_value, HalfspaceJson};
use toriclab::lab::{self, BatchOptions, Manifest};
use toriclab::rat::{fmt_rat, parse_rat, to_f64};
use toriclab::report::CSV_HEADER;
use toriclab::toric::{self, NewtonBodyJson, ToricDataJson};
use toriclab::{GeometryError, Polytope, PolytopeTuple, Report};

#[derive(Parser)]
#[command(name = "toriclab", version, about = "Exact toric convex geometry and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of a polytope.
    Volume { polytope: PathBuf },
    /// Mixed volume of n polytopes in R^n.
    MixedVolume { polytopes: Vec<PathBuf> },
    /// Mixed area measure of n-1 polytopes in R^n.
    AreaMeasure { polytopes: Vec<PathBuf> },
    /// Exact check of the Minkowski formula V(P.., Q') - V(P.., Q) = (1/n) int (h_Q' - h_Q) dS(P..).
    MinkowskiCheck {
        #[arg(long)]
        q: PathBuf,
        #[arg(long = "q-prime")]
        q_prime: PathBuf,
        polytopes: Vec<PathBuf>,
    },
    /// Toric dictionary quantities.
    Toric {
        #[command(subcommand)]
        command: ToricCommand,
    },
    /// Seeded verification batch for a statement id.
    Verify {
        statement: Option<String>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "0..9")]
        seeds: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// JSON manifest of statements, dimensions and seed ranges.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 16)]
        height: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 20)]
        grid: usize,
    },
    /// Reproduce a worked example.
    Reproduce {
        #[command(subcommand)]
        command: ReproduceCommand,
    },
    /// Independent numerical oracles.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum ToricCommand {
    /// Lelong number of a Newton body along a ray.
    Lelong {
        body: PathBuf,
        #[arg(long)]
        ray: usize,
    },
    /// nu, nu_max and width of a toric class along a ray.
    Width {
        data: PathBuf,
        #[arg(long)]
        ray: usize,
    },
    /// Restricted volume of a Newton body at height t.
    RestrictedVolume {
        body: PathBuf,
        #[arg(long)]
        ray: usize,
        #[arg(long)]
        t: String,
    },
}

#[derive(Subcommand)]
enum ReproduceCommand {
    /// Truncations Q_t of the thin simplex.
    CountSu {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
        /// Heights, repeated or comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Monte-Carlo volume estimate compared with the exact volume.
    McVolume {
        polytope: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Geometry(GeometryError),
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Geometry(e)
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_json(path: &Path) -> CliResult<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_value(read_json(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Vertex form, or `{"dim", "halfspaces": [...]}`.
fn read_polytope(path: &Path) -> CliResult<Polytope> {
    let v = read_json(path)?;
    if let Some(hs) = v.get("halfspaces") {
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Failure::Usage("missing \"dim\"".into()))?;
        let hs: Vec<HalfspaceJson> =
            serde_json::from_value(hs.clone()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let hs = hs.iter().map(HalfspaceJson::to_halfspace).collect::<Result<Vec<_>, _>>()?;
        return Ok(Polytope::from_halfspaces(&hs, dim as usize)?);
    }
    Ok(polytope_from_value(&v)?)
}

fn read_tuple(paths: &[PathBuf]) -> CliResult<PolytopeTuple> {
    let bodies = paths.iter().map(|p| read_polytope(p)).collect::<CliResult<Vec<_>>>()?;
    Ok(PolytopeTuple::new(bodies)?)
}

fn print_value(v: &Value) {
    println!("{v}");
}

fn emit(reports: &[Report], format: Format) -> CliResult<()> {
    let stdout = io::stdout();
    match format {
        Format::Json => {
            let mut out = stdout.lock();
            for r in reports {
                writeln!(out, "{}", r.to_json()).map_err(|e| Failure::Usage(e.to_string()))?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(stdout.lock());
            let io_err = |e: csv::Error| Failure::Usage(e.to_string());
            w.write_record(CSV_HEADER).map_err(io_err)?;
            for r in reports {
                w.write_record(r.csv_record()).map_err(io_err)?;
            }
            w.flush().map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(())
}

/// Exit status 0 when every report holds, 1 otherwise.
fn summarize(label: &str, reports: &[Report]) -> ExitCode {
    let held = reports.iter().filter(|r| r.holds).count();
    eprintln!("{label}: {held} of {} reports hold", reports.len());
    if held == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Volume { polytope } => {
            let p = read_polytope(&polytope)?;
            print_value(&json!({"volume": fmt_rat(p.volume())}));
        }
        Command::MixedVolume { polytopes } => {
            let t = read_tuple(&polytopes)?;
            print_value(&json!({"mixed_volume": fmt_rat(&toriclab::mixed_volume(&t)?)}));
        }
        Command::AreaMeasure { polytopes } => {
            let t = if polytopes.is_empty() {
                return Err(Failure::Usage("expected n-1 polytope files".into()));
            } else {
                read_tuple(&polytopes)?
            };
            let m = toriclab::mixed_area_measure(&t)?;
            print_value(&serde_json::to_value(MeasureJson::from(&m)).expect("measure serializes"));
        }
        Command::MinkowskiCheck { q, q_prime, polytopes } => {
            let q = read_polytope(&q)?;
            let q_prime = read_polytope(&q_prime)?;
            let t = if polytopes.is_empty() { PolytopeTuple::empty(q.dim()) } else { read_tuple(&polytopes)? };
            let r = toriclab::minkowski_formula_check(&t, &q, &q_prime)?;
            emit(std::slice::from_ref(&r), Format::Json)?;
            return Ok(summarize("minkowski-check", &[r]));
        }
        Command::Toric { command } => match command {
            ToricCommand::Lelong { body, ray } => {
                let b = parse::<NewtonBodyJson>(&body)?.to_body()?;
                print_value(&json!({"lelong": fmt_rat(&toric::lelong_number(&b, ray)?)}));
            }
            ToricCommand::Width { data, ray } => {
                let d = parse::<ToricDataJson>(&data)?.to_data()?;
                let w = toric::nu_max_and_width(&d, ray)?;
                print_value(&json!({"nu": fmt_rat(&w.nu), "nu_max": fmt_rat(&w.nu_max), "width": fmt_rat(&w.width)}));
            }
            ToricCommand::RestrictedVolume { body, ray, t } => {
                let b = parse::<NewtonBodyJson>(&body)?.to_body()?;
                let r = toric::restricted_volume(&b, ray, &parse_rat(&t)?)?;
                print_value(&json!({"restricted_volume": fmt_rat(&r.value), "out_of_range": r.out_of_range}));
                if r.out_of_range {
                    eprintln!("t = {t} lies outside the Lelong range of the body");
                }
            }
        },
        Command::Verify { statement, dim, seeds, format, manifest, budget, height, samples, grid } => {
            let opts = BatchOptions { vertex_budget: budget, coordinate_height: height, samples, grid };
            let (label, reports) = match (manifest, statement) {
                (Some(path), _) => ("manifest".to_string(), lab::run_manifest(&parse::<Manifest>(&path)?, &opts)?),
                (None, Some(s)) => {
                    let range = lab::parse_seed_range(&seeds)?;
                    let r = lab::run_batch(&s, dim, range, &opts)?;
                    (format!("verify {s} --dim {dim} --seeds {seeds}"), r)
                }
                (None, None) => return Err(Failure::Usage("verify needs a statement id or --manifest".into())),
            };
            emit(&reports, format)?;
            return Ok(summarize(&label, &reports));
        }
        Command::Reproduce { command: ReproduceCommand::CountSu { n, eps, t, format } } => {
            let eps = parse_rat(&eps)?;
            let ts = t.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>()?;
            let reports = lab::reproduce_count_su(n, &eps, &ts)?;
            emit(&reports, format)?;
            return Ok(summarize("reproduce count-su", &reports));
        }
        Command::Oracle { command: OracleCommand::McVolume { polytope, samples, seed } } => {
            let p = read_polytope(&polytope)?;
            let mc = lab::monte_carlo_volume(&p, samples, seed)?;
            let exact = to_f64(p.volume());
            let within = (mc.estimate - exact).abs() <= lab::MC_SIGMAS * mc.stderr + 1e-12;
            print_value(&json!({
                "estimate": mc.estimate,
                "stderr": mc.stderr,
                "exact": fmt_rat(p.volume()),
                "within_4_sigma": within,
            }));
            eprintln!("mc-volume: estimate {} vs exact {} ({} samples)", mc.estimate, fmt_rat(p.volume()), samples);
            return Ok(if within { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Geometry(e)) => {
            eprintln!("infeasible geometry: {e}");
            ExitCode::from(3)
        }
    }
}
