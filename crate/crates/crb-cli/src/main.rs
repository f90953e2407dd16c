//! `crb`: validate instances, run experiments, query oracles, print bound
//! reports, and export exploration heatmaps.
//!
//! Exit codes: 0 success, 1 domain failure, 2 usage error.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crb_core::harness::{
    exploration_heatmap, load_trace_csv, run_experiment, ExperimentConfig, InstanceSpec,
    RunTrace,
};
use crb_core::metrics::{
    bound_report, oracle_super_arm, BoundReport, IncrementSource, UpperBoundParams,
    DEFAULT_ENUM_CAP,
};
use crb_core::rising::{generator_catalog, validate_instance, BanditInstance};

#[derive(Parser)]
#[command(
    name = "crb",
    about = "Combinatorial rising bandit laboratory",
    version
)]
struct Cli {
    /// Machine-parseable output: one key=value pair per line.
    #[arg(long, global = true)]
    porcelain: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance (rising, concavity, range, family invariants).
    Validate(ValidateArgs),
    /// Execute an experiment config: (policy x seed) grid with CSV outputs.
    Run(RunArgs),
    /// Best constant super arm for a given horizon.
    Oracle(OracleArgs),
    /// Regret bound report (upper-bound terms, lower bounds, exponents).
    Bounds(BoundsArgs),
    /// Export per-arm, per-bucket pull-count matrices from saved traces.
    Heatmap(HeatmapArgs),
    /// List instance generators and their default parameters.
    ListInstances,
}

#[derive(Args)]
struct ValidateArgs {
    /// Experiment config, instance spec, or instance document (JSON).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to $CRB_OUT_DIR, then ./runs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parallel runs cap; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    config: PathBuf,
    /// Horizon to optimize for; defaults to the instance horizon.
    #[arg(long)]
    t: Option<u64>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Increment-constraint exponent (gamma(n) <= (n+1)^-c).
    #[arg(long)]
    c: Option<f64>,
    /// Instance to read the increment curve from, instead of --c.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 200_000)]
    t: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    l: u32,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Also write the report as JSON and two-column CSV under this stem.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeatmapArgs {
    /// Directory containing `*__trace.csv` files from `crb run`.
    #[arg(long)]
    trace_dir: PathBuf,
    /// Number of time buckets.
    #[arg(long, default_value_t = 50)]
    buckets: u64,
    /// Output directory; defaults to the trace directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Validate(args) => validate(args, cli.porcelain),
        Command::Run(args) => run(args, cli.porcelain),
        Command::Oracle(args) => oracle(args, cli.porcelain),
        Command::Bounds(args) => bounds(args, cli.porcelain),
        Command::Heatmap(args) => heatmap(args, cli.porcelain),
        Command::ListInstances => {
            list_instances(cli.porcelain);
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Six significant digits for human-readable numbers; CSVs keep full
/// precision.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..=9).contains(&mag) {
        format!("{x:.5e}")
    } else {
        let decimals = (5 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn load_instance(path: &PathBuf) -> anyhow::Result<BanditInstance> {
    let text = fs::read_to_string(path)?;
    let json: serde_json::Value = serde_json::from_str(&text)?;
    if json.get("policies").is_some() {
        let cfg = ExperimentConfig::from_json(&text)?;
        return Ok(cfg.instance.build()?);
    }
    if json.get("generator").is_some() || json.get("inline").is_some() || json.get("file").is_some()
    {
        let spec: InstanceSpec = serde_json::from_str(&text)?;
        return Ok(spec.build()?);
    }
    Ok(BanditInstance::from_json(&text)?)
}

fn validate(args: &ValidateArgs, porcelain: bool) -> anyhow::Result<ExitCode> {
    let inst = load_instance(&args.config)?;
    let report = validate_instance(&inst);
    if porcelain {
        println!("instance={}", inst.label);
        println!("valid={}", report.is_valid());
        println!("arm_findings={}", report.arm_findings.len());
        println!("family_findings={}", report.family_findings.len());
        for f in report.arm_findings.iter().take(50) {
            println!("finding=arm{}:{:?}:n{}", f.arm, f.kind, f.pull);
        }
    } else {
        println!("instance: {}", inst.label);
        if report.is_valid() {
            println!("valid: rising across all {} arms", inst.arm_count());
            if inst.concave_certified() {
                println!("concavity: certified and verified");
            }
        }
        for f in report.arm_findings.iter().take(50) {
            println!("violation: arm {} {:?} at pull {} ({})", f.arm, f.kind, f.pull, f.detail);
        }
        if report.arm_findings.len() > 50 {
            println!("... and {} more findings", report.arm_findings.len() - 50);
        }
        for f in &report.family_findings {
            println!("family violation: {f}");
        }
    }
    Ok(if report.is_valid() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(args: &RunArgs, porcelain: bool) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(&args.config)?;
    let cfg = ExperimentConfig::from_json(&text)?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| std::env::var_os("CRB_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"));
    let manifest = run_experiment(&cfg, &out_dir, args.threads)?;
    let failed: Vec<_> = manifest.runs.iter().filter(|r| r.status != "ok").collect();
    if porcelain {
        println!("out_dir={}", out_dir.display());
        println!("runs={}", manifest.runs.len());
        println!("failed={}", failed.len());
        println!("config_hash={}", manifest.config_hash);
        for r in &manifest.runs {
            println!(
                "run={}:seed{}:{}{}",
                r.policy,
                r.seed,
                r.status,
                r.final_regret
                    .map(|x| format!(":final_regret={x}"))
                    .unwrap_or_default()
            );
        }
    } else {
        println!(
            "{} runs on {:?} (horizon {}) -> {}",
            manifest.runs.len(),
            manifest.instance,
            manifest.horizon,
            out_dir.display()
        );
        for r in &manifest.runs {
            match r.final_regret {
                Some(fr) => println!(
                    "  {} seed {}: final regret {}",
                    r.policy,
                    r.seed,
                    sig6(fr)
                ),
                None => println!("  {} seed {}: {}", r.policy, r.seed, r.status),
            }
        }
    }
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn oracle(args: &OracleArgs, porcelain: bool) -> anyhow::Result<ExitCode> {
    let inst = load_instance(&args.config)?;
    let t = args.t.unwrap_or_else(|| inst.horizon());
    let (super_arm, value) = oracle_super_arm(&inst, t, DEFAULT_ENUM_CAP)?;
    let arms = super_arm
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join("|");
    if porcelain {
        println!("t={t}");
        println!("super_arm={arms}");
        println!("value={value}");
    } else {
        println!("horizon-{t} oracle super arm: {{{arms}}} value {}", sig6(value));
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds(args: &BoundsArgs, porcelain: bool) -> anyhow::Result<ExitCode> {
    let params = UpperBoundParams {
        horizon: args.t,
        arms: args.k,
        max_size: args.l,
        epsilon: args.eps,
        sigma: args.sigma,
    };
    let inst;
    let source = match (&args.config, args.c) {
        (Some(path), _) => {
            inst = load_instance(path)?;
            IncrementSource::Instance(&inst)
        }
        (None, Some(c)) => IncrementSource::PowerConstraint { exponent: c },
        (None, None) => anyhow::bail!("bounds needs --c or --config"),
    };
    let report = bound_report(&params, &source)?;
    print_bounds(&report, porcelain);
    if let Some(stem) = &args.out {
        fs::write(
            stem.with_extension("json"),
            serde_json::to_string_pretty(&report)?,
        )?;
        fs::write(stem.with_extension("csv"), report.to_csv())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_bounds(report: &BoundReport, porcelain: bool) {
    if porcelain {
        println!("term_const={}", report.term_const);
        println!("best_q={}", report.best.q);
        println!("term_rising={}", report.best.term_rising);
        println!("term_noise={}", report.best.term_noise);
        println!("upper_total={}", report.best.total);
        println!("lower_unconstrained={}", report.lower.unconstrained);
        if let Some(c) = report.lower.constrained {
            println!("lower_constrained={c}");
        }
        if let Some((lo, up)) = report.exponents {
            println!("lower_exponent={lo}");
            println!("upper_exponent={up}");
        }
    } else {
        println!(
            "upper bound at best q={}: const {} + rising {} + noise {} = {}",
            sig6(report.best.q),
            sig6(report.term_const),
            sig6(report.best.term_rising),
            sig6(report.best.term_noise),
            sig6(report.best.total),
        );
        println!(
            "lower bounds: unconstrained {}{}",
            sig6(report.lower.unconstrained),
            report
                .lower
                .constrained
                .map(|c| format!(", constrained {}", sig6(c)))
                .unwrap_or_default()
        );
        if let Some((lo, up)) = report.exponents {
            println!("growth exponents in T: lower {}, upper {}", sig6(lo), sig6(up));
        }
    }
}

fn heatmap(args: &HeatmapArgs, porcelain: bool) -> anyhow::Result<ExitCode> {
    let mut by_policy: BTreeMap<String, Vec<RunTrace>> = BTreeMap::new();
    for entry in fs::read_dir(&args.trace_dir)? {
        let path = entry?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if !name.ends_with("__trace.csv") {
            continue;
        }
        let trace = load_trace_csv(&path)?;
        by_policy.entry(trace.policy.clone()).or_default().push(trace);
    }
    if by_policy.is_empty() {
        anyhow::bail!("no *__trace.csv files under {}", args.trace_dir.display());
    }
    let out_dir = args.out.clone().unwrap_or_else(|| args.trace_dir.clone());
    fs::create_dir_all(&out_dir)?;
    for (policy, traces) in &by_policy {
        let horizon = traces.iter().map(|t| t.actions.len()).max().unwrap_or(0) as u64;
        let arms = traces.iter().map(|t| t.pulls.len()).max().unwrap_or(0);
        let bucket_size = horizon.div_ceil(args.buckets).max(1);
        let refs: Vec<&RunTrace> = traces.iter().collect();
        let matrix = exploration_heatmap(&refs, arms, horizon, bucket_size)?;
        let mut csv = String::from("arm");
        for b in 0..matrix.first().map_or(0, Vec::len) {
            csv.push_str(&format!(",bucket{b}"));
        }
        csv.push('\n');
        for (arm, row) in matrix.iter().enumerate() {
            csv.push_str(&arm.to_string());
            for v in row {
                csv.push_str(&format!(",{v}"));
            }
            csv.push('\n');
        }
        let file = out_dir.join(format!("heatmap__{policy}.csv"));
        fs::write(&file, csv)?;
        if porcelain {
            println!("heatmap={}:{}", policy, file.display());
        } else {
            println!("{policy}: {} runs -> {}", traces.len(), file.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn list_instances(porcelain: bool) {
    for (name, about, defaults) in generator_catalog() {
        if porcelain {
            println!("generator={name}");
        } else {
            println!("{name}: {about}");
            println!("  defaults: {defaults}");
        }
    }
}
