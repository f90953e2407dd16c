//! Reproducible experiment runner: (instance x policy x seed) grids, regret
//! and trace CSVs, per-policy aggregates, exploration heatmaps, and a JSON
//! manifest. Identical config and seeds produce byte-identical outputs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{regret_curve, step_value};
use crate::policies::{build_policy, PolicySpec};
use crate::rising::{env_step, make_by_name, BanditInstance, EnvState};
use crate::util::fnv1a;

/// Where the instance comes from: a named generator, a JSON file, or an
/// inline document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    Generator {
        generator: String,
        #[serde(default)]
        params: serde_json::Value,
    },
    File { file: PathBuf },
    Inline { inline: BanditInstance },
}

impl InstanceSpec {
    pub fn build(&self) -> Result<BanditInstance> {
        match self {
            InstanceSpec::Generator { generator, params } => make_by_name(generator, params),
            InstanceSpec::File { file } => {
                let json = fs::read_to_string(file)?;
                BanditInstance::from_json(&json)
            }
            InstanceSpec::Inline { inline } => Ok(inline.clone()),
        }
    }
}

/// One experiment: an instance, a list of policies, and the seed grid.
/// Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub policies: Vec<PolicySpec>,
    pub seeds: Vec<u64>,
    /// Steps to run; defaults to the instance horizon and may not exceed it.
    #[serde(default)]
    pub horizon: Option<u64>,
    #[serde(default)]
    pub record_heatmap: bool,
    /// Steps per heatmap bucket; defaults to `ceil(T / 50)`.
    #[serde(default)]
    pub heatmap_bucket_size: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(json).map_err(|e| Error::Config {
                path: "config".into(),
                reason: e.to_string(),
            })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config {
                path: "seeds".into(),
                reason: "need at least one seed".into(),
            });
        }
        if self.policies.is_empty() {
            return Err(Error::Config {
                path: "policies".into(),
                reason: "need at least one policy".into(),
            });
        }
        let mut labels: Vec<&str> = self.policies.iter().map(|p| p.label()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != self.policies.len() {
            return Err(Error::Config {
                path: "policies".into(),
                reason: "policy labels must be unique (set `label` to disambiguate)".into(),
            });
        }
        Ok(())
    }

    fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        format!("{:016x}", fnv1a(canonical.as_bytes()))
    }
}

/// Everything recorded about one run.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub policy: String,
    pub seed: u64,
    pub actions: Vec<Vec<u32>>,
    pub expected: Vec<f64>,
    pub sampled: Vec<f64>,
    pub pulls: Vec<u64>,
    pub rng_identity: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunStatus {
    pub policy: String,
    pub seed: u64,
    pub status: String,
    pub regret_csv: Option<String>,
    pub trace_csv: Option<String>,
    pub final_regret: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub instance: String,
    pub horizon: u64,
    pub config_hash: String,
    pub rng_identity: String,
    pub runs: Vec<RunStatus>,
    pub aggregates: Vec<String>,
    pub heatmaps: Vec<String>,
}

/// RNG stream for one (seed, policy) cell. ChaCha12 keyed by an FNV-1a fold
/// keeps streams independent of grid order and platform.
pub fn run_rng(seed: u64, policy_label: &str) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(fnv1a(format!("{seed}:{policy_label}").as_bytes()))
}

const RNG_IDENTITY: &str = "chacha12(fnv1a(seed:policy))";

/// Runs one policy for `horizon` steps against a fresh environment.
pub fn run_single(
    inst: &BanditInstance,
    spec: &PolicySpec,
    seed: u64,
    horizon: u64,
) -> Result<RunTrace> {
    let mut policy = build_policy(spec, inst)?;
    let mut rng = run_rng(seed, spec.label());
    let mut env = EnvState::new(inst.arm_count());
    let sense = inst.family().sense();
    let max_size = inst.family().max_size();

    let mut actions = Vec::with_capacity(horizon as usize);
    let mut expected = Vec::with_capacity(horizon as usize);
    let mut sampled = Vec::with_capacity(horizon as usize);
    for t in 1..=horizon {
        let super_arm = policy.select(t, &mut rng)?;
        let feedback = env_step(inst, &mut env, &super_arm, t, &mut rng)?;
        let mut mu_sum = 0.0;
        let mut x_sum = 0.0;
        for &(arm, x, n_after) in &feedback.outcomes {
            mu_sum += inst.mean(arm, n_after)?;
            x_sum += x;
        }
        expected.push(step_value(sense, max_size, super_arm.len(), mu_sum));
        sampled.push(step_value(sense, max_size, super_arm.len(), x_sum));
        actions.push(super_arm);
        policy.update(&feedback);
    }
    Ok(RunTrace {
        policy: spec.label().to_string(),
        seed,
        actions,
        expected,
        sampled,
        pulls: env.pulls,
        rng_identity: RNG_IDENTITY.into(),
    })
}

/// Pointwise mean and sample standard deviation of equal-length curves.
pub fn aggregate(curves: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    let Some(first) = curves.first() else {
        return Err(Error::parameter("curves", "need at least one curve"));
    };
    if curves.iter().any(|c| c.len() != first.len()) {
        return Err(Error::parameter("curves", "lengths differ"));
    }
    let n = curves.len() as f64;
    let len = first.len();
    let mut mean = vec![0.0; len];
    for c in curves {
        for (m, v) in mean.iter_mut().zip(c) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut std = vec![0.0; len];
    if curves.len() > 1 {
        for c in curves {
            for ((s, m), v) in std.iter_mut().zip(&mean).zip(c) {
                *s += (v - m) * (v - m);
            }
        }
        for s in &mut std {
            *s = (*s / (n - 1.0)).sqrt();
        }
    }
    Ok((mean, std))
}

/// Per-arm, per-bucket pull counts over a set of runs. Rows are base arms,
/// columns are consecutive time buckets of `bucket_size` steps.
pub fn exploration_heatmap(
    runs: &[&RunTrace],
    arms: usize,
    horizon: u64,
    bucket_size: u64,
) -> Result<Vec<Vec<u64>>> {
    if bucket_size < 1 {
        return Err(Error::parameter("bucket_size", "must be at least 1"));
    }
    let buckets = horizon.div_ceil(bucket_size) as usize;
    let mut matrix = vec![vec![0u64; buckets]; arms];
    for run in runs {
        for (step, set) in run.actions.iter().enumerate() {
            let bucket = step / bucket_size as usize;
            for &arm in set {
                matrix[arm as usize][bucket] += 1;
            }
        }
    }
    Ok(matrix)
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '-' })
        .collect()
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    f.write_all(content.as_bytes())?;
    Ok(())
}

fn regret_csv(trace: &RunTrace, curve: &crate::metrics::RegretCurve) -> String {
    let mut out = String::from("t,policy,seed,expected_reward,cum_reward,oracle_cum,regret\n");
    for i in 0..trace.actions.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            i + 1,
            trace.policy,
            trace.seed,
            curve.expected[i],
            curve.policy_cum[i],
            curve.oracle_cum[i],
            curve.regret[i]
        ));
    }
    out
}

fn trace_csv(trace: &RunTrace) -> String {
    let mut out = String::from("t,policy,seed,super_arm,expected_reward,sampled_reward\n");
    for i in 0..trace.actions.len() {
        let arm_list = trace.actions[i]
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join("|");
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            i + 1,
            trace.policy,
            trace.seed,
            arm_list,
            trace.expected[i],
            trace.sampled[i]
        ));
    }
    out
}

fn heatmap_csv(matrix: &[Vec<u64>]) -> String {
    let buckets = matrix.first().map_or(0, Vec::len);
    let mut out = String::from("arm");
    for b in 0..buckets {
        out.push_str(&format!(",bucket{b}"));
    }
    out.push('\n');
    for (arm, row) in matrix.iter().enumerate() {
        out.push_str(&arm.to_string());
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// Reads one `__trace.csv` back into a RunTrace (for post-hoc heatmaps).
pub fn load_trace_csv(path: &Path) -> Result<RunTrace> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "t,policy,seed,super_arm,expected_reward,sampled_reward" {
        return Err(Error::TraceMismatch(format!(
            "unexpected trace header in {}",
            path.display()
        )));
    }
    let mut trace = RunTrace {
        policy: String::new(),
        seed: 0,
        actions: Vec::new(),
        expected: Vec::new(),
        sampled: Vec::new(),
        pulls: Vec::new(),
        rng_identity: RNG_IDENTITY.into(),
    };
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::TraceMismatch(format!(
                "{}:{}: expected 6 fields",
                path.display(),
                lineno + 2
            )));
        }
        trace.policy = fields[1].to_string();
        trace.seed = fields[2].parse().map_err(|_| {
            Error::TraceMismatch(format!("{}:{}: bad seed", path.display(), lineno + 2))
        })?;
        let set: Vec<u32> = fields[3]
            .split('|')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| {
                Error::TraceMismatch(format!("{}:{}: bad arm list", path.display(), lineno + 2))
            })?;
        for &arm in &set {
            if trace.pulls.len() <= arm as usize {
                trace.pulls.resize(arm as usize + 1, 0);
            }
            trace.pulls[arm as usize] += 1;
        }
        trace.actions.push(set);
        trace.expected.push(fields[4].parse().unwrap_or(f64::NAN));
        trace.sampled.push(fields[5].parse().unwrap_or(f64::NAN));
    }
    Ok(trace)
}

/// Executes the full (policy x seed) grid. Runs are independent and execute
/// in parallel (capped by `threads`); a solver failure marks that run failed
/// in the manifest while the rest proceed.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    threads: Option<usize>,
) -> Result<Manifest> {
    cfg.validate()?;
    let inst = cfg.instance.build()?;
    let horizon = match cfg.horizon {
        Some(t) if t < 1 || t > inst.horizon() => {
            return Err(Error::Config {
                path: "horizon".into(),
                reason: format!("must lie in [1, {}]", inst.horizon()),
            });
        }
        Some(t) => t,
        None => inst.horizon(),
    };
    fs::create_dir_all(out_dir)?;
    let stem = sanitize(&inst.label);

    let grid: Vec<(&PolicySpec, u64)> = cfg
        .policies
        .iter()
        .flat_map(|p| cfg.seeds.iter().map(move |&s| (p, s)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config {
            path: "threads".into(),
            reason: e.to_string(),
        })?;

    struct RunOutcome {
        status: RunStatus,
        trace: Option<(RunTrace, Vec<f64>)>,
    }

    let outcomes: Vec<RunOutcome> = pool.install(|| {
        grid.par_iter()
            .map(|(spec, seed)| {
                let label = sanitize(spec.label());
                let base = format!("{stem}__{label}__seed{seed}");
                match run_single(&inst, spec, *seed, horizon) {
                    Ok(trace) => {
                        let curve = match regret_curve(&inst, &trace.actions) {
                            Ok(c) => c,
                            Err(e) => {
                                return RunOutcome {
                                    status: RunStatus {
                                        policy: spec.label().into(),
                                        seed: *seed,
                                        status: format!("failed: {e}"),
                                        regret_csv: None,
                                        trace_csv: None,
                                        final_regret: None,
                                    },
                                    trace: None,
                                }
                            }
                        };
                        let regret_name = format!("{base}.csv");
                        let trace_name = format!("{base}__trace.csv");
                        let write = write_file(
                            &out_dir.join(&regret_name),
                            &regret_csv(&trace, &curve),
                        )
                        .and_then(|_| {
                            write_file(&out_dir.join(&trace_name), &trace_csv(&trace))
                        });
                        match write {
                            Ok(()) => RunOutcome {
                                status: RunStatus {
                                    policy: spec.label().into(),
                                    seed: *seed,
                                    status: "ok".into(),
                                    regret_csv: Some(regret_name),
                                    trace_csv: Some(trace_name),
                                    final_regret: Some(curve.final_regret()),
                                },
                                trace: Some((trace, curve.regret)),
                            },
                            Err(e) => RunOutcome {
                                status: RunStatus {
                                    policy: spec.label().into(),
                                    seed: *seed,
                                    status: format!("failed: {e}"),
                                    regret_csv: None,
                                    trace_csv: None,
                                    final_regret: None,
                                },
                                trace: None,
                            },
                        }
                    }
                    Err(e) => RunOutcome {
                        status: RunStatus {
                            policy: spec.label().into(),
                            seed: *seed,
                            status: format!("failed: {e}"),
                            regret_csv: None,
                            trace_csv: None,
                            final_regret: None,
                        },
                        trace: None,
                    },
                }
            })
            .collect()
    });

    let mut aggregates = Vec::new();
    let mut heatmaps = Vec::new();
    let bucket_size = cfg
        .heatmap_bucket_size
        .unwrap_or_else(|| (horizon / 50).max(1));
    for spec in &cfg.policies {
        let label = spec.label();
        let done: Vec<&RunOutcome> = outcomes
            .iter()
            .filter(|o| o.status.policy == label && o.trace.is_some())
            .collect();
        if done.is_empty() {
            continue;
        }
        let regrets: Vec<Vec<f64>> = done
            .iter()
            .map(|o| o.trace.as_ref().unwrap().1.clone())
            .collect();
        let (mean, std) = aggregate(&regrets)?;
        let mut csv = String::from("t,policy,mean_regret,std_regret\n");
        for i in 0..mean.len() {
            csv.push_str(&format!("{},{},{},{}\n", i + 1, label, mean[i], std[i]));
        }
        let name = format!("{stem}__{}__aggregate.csv", sanitize(label));
        write_file(&out_dir.join(&name), &csv)?;
        aggregates.push(name);

        if cfg.record_heatmap {
            let traces: Vec<&RunTrace> = done
                .iter()
                .map(|o| &o.trace.as_ref().unwrap().0)
                .collect();
            let matrix =
                exploration_heatmap(&traces, inst.arm_count(), horizon, bucket_size)?;
            let name = format!("{stem}__{}__heatmap.csv", sanitize(label));
            write_file(&out_dir.join(&name), &heatmap_csv(&matrix))?;
            heatmaps.push(name);
        }
    }

    let manifest = Manifest {
        instance: inst.label.clone(),
        horizon,
        config_hash: cfg.hash(),
        rng_identity: RNG_IDENTITY.into(),
        runs: outcomes.into_iter().map(|o| o.status).collect(),
        aggregates,
        heatmaps,
    };
    write_file(
        &out_dir.join("manifest.json"),
        &serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(manifest)
}
