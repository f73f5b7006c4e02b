//! Command-line front end and the JSON Lines / CSV record format.
//!
//! Every run writes a manifest record first, then one record per result.
//! Exit status is 0 on success, 1 on usage or validation errors and 2 when
//! a verification check fails.

mod record;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

pub use record::{manifest, read_jsonl, write_records, Format, ResultRecord, SCHEMA_VERSION, TOOL_VERSION};

use crate::dynamics::{run_to_fixpoint, Configuration, Schedule};
use crate::error::{Error, Result};
use crate::montecarlo::{
    bisect_threshold, run_estimate_with_threads, scan_grid, trial_rng, uniform_below, verify_lemma,
    EstimateRecord, LemmaId, SizeRule, Target, TrialPlan, VerifyParams, DEFAULT_SIZE_FACTOR,
    SURROGATE_CAVEAT,
};
use crate::oracles::{
    binomial_tail, classify_block, enumerate_outcomes_with, enumerate_tr_with, hitting_bound,
    markov_hitting_expectation, mu_spreading_exact_with, mu_wall_exact, three_state_activation,
    tr_lower_bound, BlockWord, CostPolicy, ThreeStateParams,
};
use crate::topology::{Family, Rule, Topology, TopologySpec};

/// Process environment relevant to a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunEnv {
    /// `BOOTPERC_CI=1`: randomized commands require an explicit seed.
    pub ci: bool,
    /// `BOOTPERC_THREADS`: worker count; never changes results.
    pub threads: Option<usize>,
}

impl RunEnv {
    pub fn from_env() -> Result<Self> {
        let ci = std::env::var("BOOTPERC_CI").is_ok_and(|v| v == "1");
        let threads = match std::env::var("BOOTPERC_THREADS") {
            Ok(v) if !v.is_empty() => match v.parse::<usize>() {
                Ok(t) if t > 0 => Some(t),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "BOOTPERC_THREADS must be a positive integer (got `{v}`)"
                    )))
                }
            },
            _ => None,
        };
        Ok(RunEnv { ci, threads })
    }
}

#[derive(Debug, Parser)]
#[command(name = "bootperc", version, about = "Majority bootstrap percolation on rings and r-wheels")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "jsonl")]
    format: Format,
    /// Write records to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the dynamics once from a random or given configuration.
    Simulate(SimulateArgs),
    /// Monte Carlo estimate of an event probability.
    Estimate(EstimateArgs),
    /// Estimates over a grid of densities and radii.
    Scan(ScanArgs),
    /// Least density whose estimate reaches a target level.
    Bisect(BisectArgs),
    /// Exact and closed-form computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Check the percolation bounds on finite instances.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TopoArgs {
    #[arg(long, default_value = "ring")]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value = "strict")]
    rule: Rule,
}

impl TopoArgs {
    fn spec(&self) -> TopologySpec {
        TopologySpec::new(self.family, self.n, self.r)
    }
}

#[derive(Debug, Args)]
struct TargetArgs {
    /// pW (percolation), pR (ring majority), EX0 (vertex 0 active) or muS.
    #[arg(long, default_value = "pW")]
    target: String,
    /// Block length for target muS.
    #[arg(long)]
    len: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    topo: TopoArgs,
    /// Initial density; ignored with --config.
    #[arg(long)]
    p: Option<f64>,
    /// Explicit initial configuration such as `0110`.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// `synchronous` or `sequential` (vertices in index order).
    #[arg(long, default_value = "synchronous")]
    schedule: String,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    topo: TopoArgs,
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    target: TargetArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value = "ring")]
    family: Family,
    /// Fixed ring length; defaults to `size-factor * r` per cell.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SIZE_FACTOR)]
    size_factor: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    r_values: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    p_values: Vec<f64>,
    #[arg(long, default_value = "strict")]
    rule: Rule,
    #[command(flatten)]
    target: TargetArgs,
}

#[derive(Debug, Args)]
struct BisectArgs {
    #[command(flatten)]
    topo: TopoArgs,
    /// Success probability to reach.
    #[arg(long, default_value_t = 0.5)]
    level: f64,
    #[arg(long, default_value_t = 0.0)]
    p_lo: f64,
    #[arg(long, default_value_t = 1.0)]
    p_hi: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[command(flatten)]
    target: TargetArgs,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// List the words of T_r.
    EnumerateTr {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        accept_cost: bool,
    },
    /// Wall, spreading or empty.
    ClassifyBlock {
        #[arg(long)]
        word: String,
        #[arg(long)]
        r: usize,
    },
    /// Probability that a random block is a wall.
    MuWall {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: f64,
    },
    /// Probability that a random block is spreading.
    MuSpreading {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        accept_cost: bool,
    },
    /// Expected steps of the reset chain, and optionally its bound.
    Hitting {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        a: Option<usize>,
    },
    /// Three-state activation probability and its lower bound.
    ThreeState {
        #[arg(long)]
        pw: f64,
        #[arg(long)]
        ps: f64,
        #[arg(long)]
        pe: f64,
    },
    /// P(Bin(trials, p) >= threshold).
    BinomTail {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        threshold: u64,
    },
    /// Exact event probabilities by enumeration.
    ExactPerc {
        #[command(flatten)]
        topo: TopoArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        accept_cost: bool,
    },
    /// Catalan(k) C(4k,2k) 4^k for r = 4k+1.
    TrBound {
        #[arg(long)]
        r: usize,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Lemma id or `all`.
    #[arg(long, default_value = "all")]
    lemma: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, requires_all = ["ps", "pe"])]
    pw: Option<f64>,
    #[arg(long, requires_all = ["pw", "pe"])]
    ps: Option<f64>,
    #[arg(long, requires_all = ["pw", "ps"])]
    pe: Option<f64>,
    #[arg(long)]
    segment_len: Option<usize>,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    #[arg(long)]
    accept_cost: bool,
}

/// What a command produced.
struct Outcome {
    subcommand: &'static str,
    params: Map<String, Value>,
    records: Vec<ResultRecord>,
    guard_override: bool,
    failed: bool,
}

impl Outcome {
    fn single(subcommand: &'static str, record: ResultRecord) -> Self {
        Outcome {
            subcommand,
            params: record.params.clone(),
            records: vec![record],
            guard_override: false,
            failed: false,
        }
    }
}

/// Parses `argv` (program name first), runs the command and writes records
/// to `stdout` or `--out`. Returns the process exit status.
pub fn run_command<I, T>(argv: I, env: &RunEnv, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return 1;
        }
    };
    let outcome = match execute(&cli.command, env) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    if let Err(e) = emit(&cli, &outcome, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return 1;
    }
    if outcome.failed {
        let _ = writeln!(stderr, "verification FAILED");
        2
    } else {
        0
    }
}

fn emit(cli: &Cli, outcome: &Outcome, stdout: &mut dyn Write) -> Result<()> {
    let head = manifest(outcome.subcommand, &outcome.params, outcome.guard_override);
    let mut buf = Vec::new();
    match cli.format {
        Format::Jsonl => {
            write_records(&mut buf, std::slice::from_ref(&head), Format::Jsonl)?;
            write_records(&mut buf, &outcome.records, Format::Jsonl)?;
        }
        Format::Csv => {
            buf.extend_from_slice(b"# ");
            write_records(&mut buf, std::slice::from_ref(&head), Format::Jsonl)?;
            write_records(&mut buf, &outcome.records, Format::Csv)?;
        }
    }
    let io = |e: std::io::Error| Error::Record(e.to_string());
    match &cli.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(&buf)).map_err(io),
        None => stdout.write_all(&buf).map_err(io),
    }
}

fn resolve_seed(seed: Option<u64>, env: &RunEnv) -> Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None if env.ci => Err(Error::InvalidParameter("--seed is required when BOOTPERC_CI=1".into())),
        None => Ok(rand::random()),
    }
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn plan_params(plan: &TrialPlan) -> Map<String, Value> {
    let mut m = object(json!({
        "family": plan.topology.family,
        "n": plan.topology.n,
        "r": plan.topology.r,
        "p": plan.p,
        "rule": plan.rule,
        "target": plan.target.name(),
    }));
    if let Target::BlockSpreading { len } = plan.target {
        m.insert("len".into(), json!(len));
    }
    m.insert("trials".into(), json!(plan.trials));
    m.insert("confidence".into(), json!(plan.confidence));
    m.insert("master_seed".into(), json!(plan.master_seed));
    m
}

fn estimate_record(command: &str, rec: &EstimateRecord) -> ResultRecord {
    let results = object(json!({
        "successes": rec.successes,
        "estimate": rec.estimate,
        "ci_low": rec.ci_low,
        "ci_high": rec.ci_high,
    }));
    ResultRecord::new(command, plan_params(&rec.plan), results).with_elapsed(rec.elapsed_seconds)
}

fn template(spec: TopologySpec, rule: Rule, p: f64, t: &TargetArgs, env: &RunEnv) -> Result<TrialPlan> {
    let target = Target::parse(&t.target, t.len)?;
    let seed = resolve_seed(t.seed, env)?;
    Ok(TrialPlan::new(spec, rule, p, target, t.trials, seed).with_confidence(t.confidence))
}

fn policy(accept_cost: bool) -> CostPolicy {
    if accept_cost {
        CostPolicy::AcceptCost
    } else {
        CostPolicy::Guarded
    }
}

fn execute(command: &Command, env: &RunEnv) -> Result<Outcome> {
    match command {
        Command::Simulate(a) => simulate(a, env),
        Command::Estimate(a) => {
            let plan = template(a.topo.spec(), a.topo.rule, a.p, &a.target, env)?;
            let rec = run_estimate_with_threads(&plan, env.threads)?;
            Ok(Outcome::single("estimate", estimate_record("estimate", &rec)))
        }
        Command::Scan(a) => scan(a, env),
        Command::Bisect(a) => bisect(a, env),
        Command::Oracle(o) => oracle(o),
        Command::Verify(a) => verify(a, env),
    }
}

fn simulate(a: &SimulateArgs, env: &RunEnv) -> Result<Outcome> {
    let start = Instant::now();
    let topo = Topology::new(a.topo.spec())?;
    let schedule = match a.schedule.as_str() {
        "synchronous" | "sync" => Schedule::Synchronous,
        "sequential" | "seq" => Schedule::Sequential((0..topo.vertex_count()).collect()),
        other => return Err(Error::InvalidParameter(format!("unknown schedule `{other}`"))),
    };
    let mut params = object(json!({
        "family": topo.family(),
        "n": topo.n(),
        "r": topo.r(),
        "rule": a.topo.rule,
        "schedule": a.schedule,
    }));
    let config = match (&a.config, a.p) {
        (Some(text), _) => {
            params.insert("config".into(), json!(text));
            text.parse::<Configuration>()?
        }
        (None, Some(p)) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("p must lie in [0, 1] (got {p})")));
            }
            let seed = resolve_seed(a.seed, env)?;
            params.insert("p".into(), json!(p));
            params.insert("master_seed".into(), json!(seed));
            let mut rng = trial_rng(seed, 0);
            Configuration::from_bits((0..topo.vertex_count()).map(|_| uniform_below(&mut rng, p)))
        }
        (None, None) => return Err(Error::InvalidParameter("simulate needs --p or --config".into())),
    };
    let res = run_to_fixpoint(&topo, &config, a.topo.rule, &schedule)?;
    let ring_active = (0..topo.n()).filter(|&i| res.final_config.get(i)).count();
    let results = object(json!({
        "vertex_count": topo.vertex_count(),
        "initial_active": config.count_active(),
        "rounds": res.rounds,
        "active_count": res.active_count,
        "ring_active": ring_active,
        "percolated": res.percolated,
        "hub_active": res.hub_active,
    }));
    let rec = ResultRecord::new("simulate", params, results).with_elapsed(start.elapsed().as_secs_f64());
    Ok(Outcome::single("simulate", rec))
}

fn scan(a: &ScanArgs, env: &RunEnv) -> Result<Outcome> {
    let r0 = a.r_values[0];
    let (n, size) = match a.n {
        Some(n) => (n, SizeRule::Fixed),
        None => (a.size_factor * r0, SizeRule::PerRadius(a.size_factor)),
    };
    let p0 = a.p_values[0];
    let base = template(TopologySpec::new(a.family, n, r0), a.rule, p0, &a.target, env)?;
    let mut params = plan_params(&base);
    params.remove("p");
    params.remove("r");
    match a.n {
        Some(_) => {}
        None => {
            params.remove("n");
            params.insert("size_factor".into(), json!(a.size_factor));
        }
    }
    params.insert("p_values".into(), json!(a.p_values));
    params.insert("r_values".into(), json!(a.r_values));
    let cells = scan_grid(&base, &a.p_values, &a.r_values, size, env.threads)?;
    let records = cells
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let mut out = estimate_record("scan", rec);
            out.params.insert("cell".into(), json!(i));
            out
        })
        .collect();
    Ok(Outcome {
        subcommand: "scan",
        params,
        records,
        guard_override: false,
        failed: false,
    })
}

fn bisect(a: &BisectArgs, env: &RunEnv) -> Result<Outcome> {
    let start = Instant::now();
    let plan = template(a.topo.spec(), a.topo.rule, a.p_lo, &a.target, env)?;
    let mut params = plan_params(&plan);
    params.remove("p");
    params.insert("level".into(), json!(a.level));
    params.insert("p_lo".into(), json!(a.p_lo));
    params.insert("p_hi".into(), json!(a.p_hi));
    params.insert("tol".into(), json!(a.tol));
    let out = bisect_threshold(&plan, a.level, a.p_lo, a.p_hi, a.tol, env.threads)?;
    let results = object(json!({
        "p_hat": out.p_hat,
        "p_lo": out.p_lo,
        "p_hi": out.p_hi,
        "probes": out.probes,
        "caveat": SURROGATE_CAVEAT,
    }));
    let rec = ResultRecord::new("bisect", params, results).with_elapsed(start.elapsed().as_secs_f64());
    Ok(Outcome::single("bisect", rec))
}

fn oracle(o: &OracleCommand) -> Result<Outcome> {
    let start = Instant::now();
    let (name, params, results, accept) = match o {
        OracleCommand::EnumerateTr { r, accept_cost } => {
            let words = enumerate_tr_with(*r, policy(*accept_cost))?;
            let list: Vec<String> = words.iter().map(|w| w.to_bit_string()).collect();
            ("enumerate-tr", json!({"r": r}), json!({"size": list.len(), "words": list}), *accept_cost)
        }
        OracleCommand::ClassifyBlock { word, r } => {
            let block = BlockWord::parse(word, *r)?;
            let class = classify_block(&block);
            ("classify-block", json!({"word": word, "r": r}), json!({"class": class.to_string()}), false)
        }
        OracleCommand::MuWall { len, r, p } => {
            let mu = mu_wall_exact(*len, *r, *p)?;
            let bound = *len as f64 * (1.0 - p).powi(*r as i32 + 1);
            ("mu-wall", json!({"len": len, "r": r, "p": p}), json!({"mu_wall": mu, "bound": bound}), false)
        }
        OracleCommand::MuSpreading { len, r, p, accept_cost } => {
            let mu = mu_spreading_exact_with(*len, *r, *p, policy(*accept_cost))?;
            ("mu-spreading", json!({"len": len, "r": r, "p": p}), json!({"mu_spreading": mu}), *accept_cost)
        }
        OracleCommand::Hitting { r, p, a } => {
            let mut results = json!({"expectation": markov_hitting_expectation(*r, *p)?});
            let mut params = json!({"r": r, "p": p});
            if let Some(a) = a {
                params["a"] = json!(a);
                results["bound"] = json!(hitting_bound(*a, *r, *p)?);
            }
            ("hitting", params, results, false)
        }
        OracleCommand::ThreeState { pw, ps, pe } => {
            let act = three_state_activation(&ThreeStateParams::new(*pw, *ps, *pe)?)?;
            ("three-state", json!({"p_w": pw, "p_s": ps, "p_e": pe}), json!({"exact": act.exact, "bound": act.bound}), false)
        }
        OracleCommand::BinomTail { trials, p, threshold } => {
            let tail = binomial_tail(*trials, *p, *threshold)?;
            ("binom-tail", json!({"trials": trials, "p": p, "threshold": threshold}), json!({"tail": tail}), false)
        }
        OracleCommand::ExactPerc { topo, p, accept_cost } => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidParameter(format!("p must lie in [0, 1] (got {p})")));
            }
            let t = Topology::new(topo.spec())?;
            let out = enumerate_outcomes_with(&t, topo.rule, policy(*accept_cost))?;
            let mut results = json!({"pW": out.percolation.probability(*p)});
            if let (Some(maj), Some(x0)) = (&out.ring_majority, &out.vertex0) {
                results["pR"] = json!(maj.probability(*p));
                results["EX0"] = json!(x0.probability(*p));
            }
            let params = json!({"family": topo.family, "n": topo.n, "r": topo.r, "rule": topo.rule, "p": p});
            ("exact-perc", params, results, *accept_cost)
        }
        OracleCommand::TrBound { r } => {
            let bound = tr_lower_bound(*r)?;
            ("tr-bound", json!({"r": r}), json!({"bound": bound.to_string()}), false)
        }
    };
    let mut params = object(params);
    params.insert("oracle".into(), json!(name));
    let rec = ResultRecord::new("oracle", params, object(results)).with_elapsed(start.elapsed().as_secs_f64());
    let mut outcome = Outcome::single("oracle", rec);
    outcome.guard_override = accept;
    Ok(outcome)
}

fn verify(a: &VerifyArgs, env: &RunEnv) -> Result<Outcome> {
    let lemmas: Vec<LemmaId> = if a.lemma == "all" {
        LemmaId::ALL.to_vec()
    } else {
        vec![a.lemma.parse()?]
    };
    let three_state = match (a.pw, a.ps, a.pe) {
        (Some(w), Some(s), Some(e)) => Some(ThreeStateParams::new(w, s, e)?),
        _ => None,
    };
    let mut vp = VerifyParams {
        n: a.n,
        r: a.r,
        p: a.p,
        trials: a.trials,
        delta: a.delta,
        three_state,
        segment_len: a.segment_len,
        confidence: a.confidence,
        policy: policy(a.accept_cost),
        threads: env.threads,
        ..VerifyParams::default()
    };
    if let Some(seed) = a.seed {
        vp.master_seed = seed;
    }
    let params = object(json!({
        "lemma": a.lemma,
        "n": a.n,
        "r": a.r,
        "p": a.p,
        "trials": a.trials,
        "delta": a.delta,
        "segment_len": a.segment_len,
        "confidence": a.confidence,
        "master_seed": vp.master_seed,
    }));
    let mut records = Vec::with_capacity(lemmas.len());
    let mut failed = false;
    for lemma in lemmas {
        let start = Instant::now();
        let report = verify_lemma(lemma, &vp)?;
        failed |= !report.passed;
        let mut p = Map::new();
        p.insert("lemma".into(), json!(lemma));
        p.extend(report.params);
        let results = object(json!({
            "verdict": if report.passed { "PASS" } else { "FAIL" },
            "checks": report.checks,
            "notes": report.notes,
        }));
        records.push(ResultRecord::new("verify", p, results).with_elapsed(start.elapsed().as_secs_f64()));
    }
    Ok(Outcome {
        subcommand: "verify",
        params,
        records,
        guard_override: a.accept_cost,
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str], env: RunEnv) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("bootperc").chain(args.iter().copied());
        let code = run_command(argv, &env, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_are_single_line() {
        let (code, out, err) = run(&["estimate", "--bogus"], RunEnv::default());
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1, "{err}");
        let (code, _, err) = run(&["simulate", "--n", "5", "--r", "2", "--p", "0.5", "--seed", "1"], RunEnv::default());
        assert_eq!(code, 1);
        assert!(err.contains("n > 2r+1"), "{err}");
    }

    #[test]
    fn help_and_version_exit_zero() {
        assert_eq!(run(&["--help"], RunEnv::default()).0, 0);
        let (code, out, _) = run(&["--version"], RunEnv::default());
        assert_eq!(code, 0);
        assert!(out.contains(TOOL_VERSION));
    }

    #[test]
    fn ci_mode_needs_seed() {
        let env = RunEnv { ci: true, threads: None };
        let (code, _, err) = run(&["estimate", "--n", "20", "--r", "2", "--p", "0.3", "--trials", "10"], env);
        assert_eq!(code, 1);
        assert!(err.contains("--seed"));
    }

    #[test]
    fn manifest_then_record() {
        let (code, out, _) = run(&["oracle", "tr-bound", "--r", "9"], RunEnv::default());
        assert_eq!(code, 0);
        let recs = read_jsonl(&out).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].command, "manifest");
        assert_eq!(recs[1].results["bound"], json!("2240"));
    }
}
