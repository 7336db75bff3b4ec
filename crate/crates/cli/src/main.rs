mod config;

use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use dirichlet_forms::audit::{parse_checks, run_audit, AuditOptions};
use dirichlet_forms::bounds::{asymptotic_checks, dim_bound, optimize, large_a_schedule, GridSpec, RATE_PREC};
use dirichlet_forms::characters::enumerate_characters;
use dirichlet_forms::forms::{ball_json, lambda_table, lambda_value_via_zeta, LValueVector};
use dirichlet_forms::polylog::digits_to_bits;
use dirichlet_forms::siegel::{construct_fn, FnRepresentation, Parameters};
use dirichlet_forms::Error;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "dforms", version, about = "Linear forms in twisted polylogarithm values: construction, audit and bounds")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Run configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; falls back to the config's `output_dir`, then `./out`.
    #[arg(long, global = true, value_name = "DIR", env = "DFORMS_OUT")]
    out: Option<PathBuf>,
    /// Audit checks, e.g. `all` or `A1,A11,A12`.
    #[arg(long, global = true, value_name = "LIST")]
    checks: Option<String>,
    /// Decimal digits for ball evaluations.
    #[arg(long, global = true, value_name = "DIGITS")]
    precision: Option<u32>,
    /// Worker threads.
    #[arg(long, global = true, value_name = "K", env = "DFORMS_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Dirichlet characters modulo N.
    Chars { modulus: u64 },
    /// Solve the Siegel system for every configured n and write one file per n.
    Construct,
    /// Build the integer linear-form tables from constructed files.
    Forms,
    /// Run the audit checks and write the report.
    Audit,
    /// Rate report and large-`a` constant checks.
    Bounds(Schedule),
    /// Grid search over the parameters for a given `(a, N)`.
    Optimize(Schedule),
}

/// Either `--a/--modulus` (large-`a` schedule) or the parameters of `--config`.
#[derive(Args, Debug)]
struct Schedule {
    #[arg(long)]
    a: Option<u64>,
    #[arg(long, requires = "a")]
    modulus: Option<u64>,
}

enum Failure {
    Usage(String),
    Infeasible(String),
    AuditFailed,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::AuditFailed => 1,
            Failure::Usage(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InfeasibleShape(_) | Error::NoSolutionWithinBound(_) | Error::EmptyFeasibleSet(_) => {
                Failure::Infeasible(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: cannot configure {k} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Infeasible(m) => eprintln!("error: {m}"),
                Failure::AuditFailed => eprintln!("audit: at least one check failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Chars { modulus } => cmd_chars(*modulus),
        Command::Construct => cmd_construct(&load_config(g)?, g),
        Command::Forms => cmd_forms(&load_config(g)?, g),
        Command::Audit => cmd_audit(&load_config(g)?, g),
        Command::Bounds(s) => cmd_bounds(&schedule_params(s, g)?, s.a.is_some(), g),
        Command::Optimize(s) => {
            let (a, n) = match s.a {
                Some(a) => (a, s.modulus.unwrap_or(1)),
                None => {
                    let p = load_config(g)?.params;
                    (p.a, p.modulus)
                }
            };
            cmd_optimize(a, n, g)
        }
    }
}

fn load_config(g: &GlobalOpts) -> CliResult<RunConfig> {
    let path = g.config.as_ref().ok_or_else(|| Failure::Usage("--config is required for this command".into()))?;
    Ok(RunConfig::load(path)?)
}

fn out_dir(cfg: Option<&RunConfig>, g: &GlobalOpts) -> CliResult<PathBuf> {
    let dir = g
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn precision(cfg: Option<&RunConfig>, g: &GlobalOpts) -> u32 {
    g.precision.or(cfg.map(|c| c.precision_digits)).unwrap_or(200)
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_json(path: &Path, v: &Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    write(path, &s)
}

fn fn_path(dir: &Path, n: u64) -> PathBuf {
    dir.join(format!("fn_n{n}.json"))
}

fn load_fns(cfg: &RunConfig, dir: &Path) -> CliResult<Vec<FnRepresentation>> {
    cfg.n_values
        .iter()
        .map(|&n| {
            let path = fn_path(dir, n);
            let text = std::fs::read_to_string(&path).map_err(|_| {
                Failure::Usage(format!("missing input {} (run `dforms construct` first)", path.display()))
            })?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let f = FnRepresentation::from_json(&v)?;
            if f.params != cfg.params {
                return Err(Failure::Usage(format!("{} was built for different parameters", path.display())));
            }
            Ok(f)
        })
        .collect()
}

fn cmd_chars(modulus: u64) -> CliResult<()> {
    if modulus == 0 {
        return Err(Failure::Usage("N must be at least 1".into()));
    }
    println!("{:<8} {:>5} {:>9} {:>6} {:>9} {:>9}", "selector", "order", "conductor", "parity", "primitive", "pipeline");
    for chi in enumerate_characters(modulus) {
        let s = chi.summary();
        println!(
            "{:<8} {:>5} {:>9} {:>6} {:>9} {:>9}",
            s.selector,
            s.order,
            s.conductor,
            s.parity,
            if s.primitive { "yes" } else { "no" },
            if s.pipeline_supported { "ok" } else { "unsupported" }
        );
    }
    Ok(())
}

fn cmd_construct(cfg: &RunConfig, g: &GlobalOpts) -> CliResult<()> {
    let dir = out_dir(Some(cfg), g)?;
    for &n in &cfg.n_values {
        let f = construct_fn(&cfg.params, n)?;
        write_json(&fn_path(&dir, n), &f.to_json())?;
    }
    Ok(())
}

fn cmd_forms(cfg: &RunConfig, g: &GlobalOpts) -> CliResult<()> {
    let dir = out_dir(Some(cfg), g)?;
    let fns = load_fns(cfg, &dir)?;
    let digits = precision(Some(cfg), g);
    let width = (cfg.params.a + cfg.params.h) as usize;
    let lv = LValueVector::new(&cfg.character, width, digits_to_bits(digits + 20))?;
    for f in &fns {
        let table = lambda_table(f, &cfg.character)?;
        write_json(&dir.join(format!("forms_n{}.json", f.n)), &table.to_json())?;
        write(&dir.join(format!("forms_n{}.csv", f.n)), &table.to_csv())?;
        let mut values = Vec::new();
        for row in &table.rows {
            let v = lambda_value_via_zeta(&table, &lv, row.p, row.k)?;
            values.push(json!({"p": row.p, "k": row.k, "value": ball_json(&v, digits as usize)}));
        }
        let doc = json!({
            "schema_version": 1,
            "character": cfg.character.selector(),
            "n": f.n,
            "precision_digits": digits,
            "values": values,
        });
        write_json(&dir.join(format!("lambda_values_n{}.json", f.n)), &doc)?;
    }
    Ok(())
}

fn cmd_audit(cfg: &RunConfig, g: &GlobalOpts) -> CliResult<()> {
    let dir = out_dir(Some(cfg), g)?;
    let fns = load_fns(cfg, &dir)?;
    let checks = match &g.checks {
        Some(s) => parse_checks(s)?,
        None => cfg.checks.clone(),
    };
    let opts = AuditOptions {
        config_id: cfg.id.clone(),
        precision_digits: precision(Some(cfg), g),
        ..AuditOptions::default()
    };
    let report = run_audit(&fns, &cfg.character, &checks, &opts);
    print!("{}", report.render_table());
    write_json(&dir.join("audit.json"), &report.to_json())?;
    if report.has_fail() {
        Err(Failure::AuditFailed)
    } else {
        Ok(())
    }
}

fn schedule_params(s: &Schedule, g: &GlobalOpts) -> CliResult<Parameters> {
    match s.a {
        Some(a) => Ok(large_a_schedule(a, s.modulus.unwrap_or(1))?),
        None => Ok(load_config(g)?.params),
    }
}

fn cmd_bounds(p: &Parameters, schedule: bool, g: &GlobalOpts) -> CliResult<()> {
    let rep = dim_bound(p, RATE_PREC);
    let checks = if schedule {
        let cs = asymptotic_checks(p.a, p.modulus)?;
        for c in &cs {
            println!(
                "{:<24} {:>14.6} {} {:<14.6} {}",
                c.name,
                c.value,
                if c.upper { "<=" } else { ">=" },
                c.threshold,
                if c.pass() { "pass" } else { "fail" }
            );
        }
        Value::Array(cs.iter().map(|c| c.to_json()).collect())
    } else {
        Value::Null
    };
    println!("tau = {}  dim_bound = {}", rep.tau.mid_sci(12), rep.dim_bound.mid_sci(12));
    let doc = json!({
        "schema_version": 1,
        "kernel_property_ok": p.kernel_property_ok(),
        "rate_report": rep.to_json(),
        "asymptotic_checks": checks,
    });
    write_json(&out_dir(None, g)?.join("bounds.json"), &doc)
}

fn cmd_optimize(a: u64, modulus: u64, g: &GlobalOpts) -> CliResult<()> {
    let res = optimize(a, modulus, &GridSpec::coarse())?;
    let dir = out_dir(None, g)?;
    let mut doc = res.to_json();
    doc["schema_version"] = json!(1);
    println!("evaluated {} grid points, {} feasible, {} on the Pareto front", res.evaluated, res.feasible, res.pareto.len());
    write_json(&dir.join("optimize.json"), &doc)?;
    write(&dir.join("pareto.csv"), &res.pareto_csv())
}
