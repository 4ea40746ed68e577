use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use interlab::gallery::{self, GalleryOptions};
use interlab::json::scalar_to_json;
use interlab::oracle::{self, OracleConfig};
use interlab::scenario::{run_rw_json, shapiro_from_json, Scenario};
use interlab::{verify_shapiro, Backing, Error, InterchangeOptions, VERSION};

#[derive(Parser)]
#[command(name = "interlab", version, about = "Check infimum/integral interchange on finite measure spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(clap::Args)]
struct Flags {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tolerance: Option<String>,
    /// Prefix length for generated sequences.
    #[arg(long, global = true)]
    prefix: Option<usize>,
    #[arg(long, global = true)]
    divergence_threshold: Option<String>,
    /// Largest family size scanned exhaustively.
    #[arg(long, global = true)]
    subset_budget: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a family scenario.
    Check { scenario: PathBuf },
    /// Run a built-in example.
    Gallery {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(gallery::NAMES))]
        name: String,
    },
    /// Randomized equivalence campaign.
    Oracle {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        max_atoms: usize,
        #[arg(long, default_value_t = 5)]
        max_family: usize,
    },
    /// Minimization over selections of an integrand table.
    RwCheck { scenario: PathBuf },
    /// Interchange for a functional on L^p along a minimizing sequence.
    ShapiroCheck { scenario: PathBuf },
}

/// A run that produced a report. `invariant` marks library invariant
/// failures, which set exit code 4 but still emit the report.
struct Outcome {
    report: Value,
    invariant: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Schema(_) | Error::Input(_) => 2,
        Error::Invariant(_) => 4,
        _ => 3,
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn apply_flags(opts: &mut InterchangeOptions, flags: &Flags, backing: Backing) -> Result<(), Error> {
    if let Some(s) = flags.seed {
        opts.seed = s;
    }
    if let Some(t) = &flags.tolerance {
        opts.tolerance = backing.parse_scalar(t)?;
        if opts.tolerance.is_negative() {
            return Err(Error::input("tolerance must be nonnegative"));
        }
    }
    if let Some(b) = flags.subset_budget {
        opts.subset_budget = b;
    }
    if let Some(t) = &flags.divergence_threshold {
        opts.divergence_threshold = Some(backing.parse_scalar(t)?);
    }
    Ok(())
}

fn invariant_list(report: &Value) -> bool {
    match report {
        Value::Object(m) => m.iter().any(|(k, v)| {
            (k == "invariant_failures" && v.as_array().is_some_and(|a| !a.is_empty())) || invariant_list(v)
        }),
        Value::Array(a) => a.iter().any(invariant_list),
        _ => false,
    }
}

fn execute(cmd: &Command, flags: &Flags, backing: Backing, opts: &mut InterchangeOptions) -> Result<Outcome, Error> {
    apply_flags(opts, flags, backing)?;
    let report = match cmd {
        Command::Check { scenario } => {
            let mut sc = Scenario::parse(&read(scenario)?, backing)?;
            // file values first, flags override
            apply_flags(&mut sc.options, flags, backing)?;
            if let Some(p) = flags.prefix {
                sc.set_prefix(p);
            }
            *opts = sc.options.clone();
            to_value(&sc.run()?)
        }
        Command::Gallery { name } => {
            let g = GalleryOptions {
                prefix: flags.prefix,
                interchange: opts.clone(),
            };
            to_value(&gallery::run(name, &g)?)
        }
        Command::Oracle {
            trials,
            max_atoms,
            max_family,
        } => {
            let cfg = OracleConfig {
                trials: *trials,
                seed: opts.seed,
                max_atoms: *max_atoms,
                max_family: *max_family,
                options: opts.clone(),
            };
            let summary = oracle::run(&cfg)?;
            let failed = !summary.passed();
            return Ok(Outcome {
                report: to_value(&summary),
                invariant: failed,
            });
        }
        Command::RwCheck { scenario } => to_value(&run_rw_json(&read(scenario)?, backing)?),
        Command::ShapiroCheck { scenario } => {
            let (sc, mut file_opts) = shapiro_from_json(&read(scenario)?, backing)?;
            apply_flags(&mut file_opts, flags, backing)?;
            *opts = file_opts.clone();
            to_value(&verify_shapiro(&sc, &file_opts)?)
        }
    };
    Ok(Outcome {
        invariant: invariant_list(&report),
        report,
    })
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Check { .. } => "check",
        Command::Gallery { .. } => "gallery",
        Command::Oracle { .. } => "oracle",
        Command::RwCheck { .. } => "rw-check",
        Command::ShapiroCheck { .. } => "shapiro-check",
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        other => out.push(format!("{prefix}: {other}")),
    }
}

fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", doc, &mut lines);
            lines.join("\n") + "\n"
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let backing = match Backing::from_env() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("interlab: {e}");
            return ExitCode::from(2);
        }
    };
    let mut opts = InterchangeOptions::for_backing(backing);
    let result = execute(&cli.command, &cli.flags, backing, &mut opts);
    let mut doc = Map::new();
    doc.insert("tool".into(), json!("interlab"));
    doc.insert("version".into(), json!(VERSION));
    doc.insert("command".into(), json!(command_name(&cli.command)));
    doc.insert("backing".into(), to_value(&backing));
    doc.insert("seed".into(), json!(opts.seed));
    doc.insert("tolerance".into(), scalar_to_json(&opts.tolerance));
    match result {
        Ok(outcome) => {
            doc.insert("report".into(), outcome.report);
            if let Err(e) = emit(&render(&Value::Object(doc), cli.flags.format), &cli.flags.out) {
                eprintln!("interlab: {e}");
                return ExitCode::from(2);
            }
            if outcome.invariant {
                eprintln!("interlab: library invariant violated, see the report");
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("interlab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
