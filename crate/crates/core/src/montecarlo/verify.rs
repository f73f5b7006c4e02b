//! Finite-instance checks of the percolation bounds.
//!
//! Each report instantiates one family of inequalities with exact oracle
//! values where enumeration is feasible and Monte Carlo estimates
//! otherwise. A Monte Carlo check fails only when the violation exceeds
//! twice the combined confidence half-widths; exact checks have zero
//! tolerance and compare rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::estimate::{run_estimate_with_threads, EstimateRecord, Target, TrialPlan};
use super::scan::DEFAULT_SIZE_FACTOR;
use super::sims::{markov_chain_estimate, ring_wall_events, three_state_segment_estimate};
use crate::error::{Error, Result};
use crate::oracles::{
    binomial_tail_exact, chernoff_bound, classify_block, enumerate_outcomes_with, enumerate_tr_with,
    hitting_bound, markov_hitting_expectation, mu_spreading_exact_with, mu_wall_exact,
    three_state_activation, to_rational, tr_lower_bound, BlockClass, CostPolicy, ThreeStateParams,
    MAX_EXACT_VERTICES, MAX_SPREADING_LEN, MAX_TR_RADIUS,
};
use crate::topology::{Rule, Topology, TopologySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaId {
    /// Ring majority versus wheel percolation.
    Lemma1,
    /// `2E[X_0] - 1 <= p_R <= 2E[X_0]`.
    Lemma2,
    /// Expected distance to the right wall.
    Lemma3,
    /// Far right wall and vertex 0 active.
    Corollary4,
    /// Near walls and vertex 0 active; binomial tail domination.
    Lemma5,
    /// `E[X_0] < 1/4` below density 1/4.
    Theorem6,
    /// Three-state line process.
    Lemma6,
    /// Wall block measure.
    Lemma7,
    /// `T_r` words are spreading blocks.
    Lemma8,
    /// Counting bound on `|T_r|`.
    Theorem9,
}

impl LemmaId {
    pub const ALL: [LemmaId; 10] = [
        LemmaId::Lemma1,
        LemmaId::Lemma2,
        LemmaId::Lemma3,
        LemmaId::Corollary4,
        LemmaId::Lemma5,
        LemmaId::Theorem6,
        LemmaId::Lemma6,
        LemmaId::Lemma7,
        LemmaId::Lemma8,
        LemmaId::Theorem9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Lemma1 => "lemma1",
            LemmaId::Lemma2 => "lemma2",
            LemmaId::Lemma3 => "lemma3",
            LemmaId::Corollary4 => "corollary4",
            LemmaId::Lemma5 => "lemma5",
            LemmaId::Theorem6 => "theorem6",
            LemmaId::Lemma6 => "lemma6",
            LemmaId::Lemma7 => "lemma7",
            LemmaId::Lemma8 => "lemma8",
            LemmaId::Theorem9 => "theorem9",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['-', '_', ' '], "");
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name() == key)
            .ok_or_else(|| Error::UnknownLemma(s.to_string()))
    }
}

/// Parameters for [`verify_lemma`]. Unset fields take per-lemma defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyParams {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub p: Option<f64>,
    pub trials: Option<u64>,
    pub master_seed: u64,
    pub confidence: f64,
    pub delta: Option<usize>,
    pub three_state: Option<ThreeStateParams>,
    pub segment_len: Option<usize>,
    pub policy: CostPolicy,
    pub threads: Option<usize>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            n: None,
            r: None,
            p: None,
            trials: None,
            master_seed: 0x5eed,
            confidence: 0.95,
            delta: None,
            three_state: None,
            segment_len: None,
            policy: CostPolicy::Guarded,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact integer or rational arithmetic.
    Exact,
    /// Floating-point evaluation of exact formulas.
    Numeric,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "==")]
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub method: Method,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn float(name: impl Into<String>, method: Method, relation: Relation, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let passed = match relation {
            Relation::Le => lhs - rhs <= tolerance,
            Relation::Lt => lhs - rhs < tolerance,
            Relation::Eq => (lhs - rhs).abs() <= tolerance,
        };
        Check {
            name: name.into(),
            method,
            relation,
            lhs,
            rhs,
            tolerance,
            passed,
        }
    }

    fn exact(name: impl Into<String>, relation: Relation, lhs: &BigRational, rhs: &BigRational) -> Self {
        let passed = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
        };
        Check {
            name: name.into(),
            method: Method::Exact,
            relation,
            lhs: lhs.to_f64().unwrap_or(f64::NAN),
            rhs: rhs.to_f64().unwrap_or(f64::NAN),
            tolerance: 0.0,
            passed,
        }
    }

    fn integer(name: impl Into<String>, relation: Relation, lhs: &BigUint, rhs: &BigUint) -> Self {
        let to = |x: &BigUint| BigRational::from_integer(x.clone().into());
        Self::exact(name, relation, &to(lhs), &to(rhs))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma: LemmaId,
    pub params: Map<String, Value>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub passed: bool,
}

struct Builder {
    lemma: LemmaId,
    params: Map<String, Value>,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Builder {
    fn new(lemma: LemmaId) -> Self {
        Builder {
            lemma,
            params: Map::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.into(), json!(value));
    }

    fn finish(self) -> VerificationReport {
        let passed = self.checks.iter().all(|c| c.passed);
        VerificationReport {
            lemma: self.lemma,
            params: self.params,
            checks: self.checks,
            notes: self.notes,
            passed,
        }
    }
}

/// Statistical tolerance: twice the root-sum-square of scaled half-widths.
fn stat_tol(parts: &[(f64, &EstimateRecord)]) -> f64 {
    2.0 * parts
        .iter()
        .map(|(scale, rec)| (scale * rec.half_width()).powi(2))
        .sum::<f64>()
        .sqrt()
}

const NUMERIC_TOL: f64 = 1e-12;

fn require_open(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must lie in (0, 1) (got {p})")))
    }
}

/// `C q^{-r}` with `C = 8r/(pq)`, rounded up.
fn default_delta(r: usize, p: f64) -> usize {
    let q = 1.0 - p;
    (8.0 * r as f64 / (p * q) * q.powi(-(r as i32))).ceil() as usize
}

pub fn verify_lemma(lemma: LemmaId, params: &VerifyParams) -> Result<VerificationReport> {
    if !(params.confidence > 0.0 && params.confidence < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence must lie in (0, 1) (got {})",
            params.confidence
        )));
    }
    let mut b = Builder::new(lemma);
    b.param("master_seed", params.master_seed);
    b.param("confidence", params.confidence);
    if params.policy.is_override() {
        b.param("guard_override", true);
    }
    let estimate = |spec: TopologySpec, p: f64, target: Target, trials: u64| {
        let plan = TrialPlan::new(spec, Rule::Strict, p, target, trials, params.master_seed)
            .with_confidence(params.confidence);
        run_estimate_with_threads(&plan, params.threads)
    };

    match lemma {
        LemmaId::Lemma1 => {
            let r = params.r.unwrap_or(4);
            let p = params.p.unwrap_or(0.3);
            let n = params.n.unwrap_or(10_000);
            let trials = params.trials.unwrap_or(2_000);
            require_open(p)?;
            b.param("n", n);
            b.param("r", r);
            b.param("p", p);
            b.param("trials", trials);
            let p_r = estimate(TopologySpec::ring(n, r), p, Target::RingMajority, trials)?;
            let p_w = estimate(TopologySpec::rwheel(n, r), p, Target::Percolation, trials)?;
            b.checks.push(Check::float(
                "p_R <= p_W",
                Method::MonteCarlo,
                Relation::Le,
                p_r.estimate,
                p_w.estimate,
                stat_tol(&[(1.0, &p_r), (1.0, &p_w)]),
            ));
            b.checks.push(Check::float(
                "p_W <= p + (1-p) p_R",
                Method::MonteCarlo,
                Relation::Le,
                p_w.estimate,
                p + (1.0 - p) * p_r.estimate,
                stat_tol(&[(1.0, &p_w), (1.0 - p, &p_r)]),
            ));
            b.notes.push("limits over n are replaced by a single large n".into());
        }
        LemmaId::Lemma2 => {
            let r = params.r.unwrap_or(2);
            let p = params.p.unwrap_or(0.3);
            let n = params.n.unwrap_or(12);
            require_open(p)?;
            b.param("n", n);
            b.param("r", r);
            b.param("p", p);
            let topo = Topology::new(TopologySpec::ring(n, r))?;
            if n <= MAX_EXACT_VERTICES || params.policy.is_override() {
                let out = enumerate_outcomes_with(&topo, Rule::Strict, params.policy)?;
                let pr = to_rational(p);
                let p_r = out.ring_majority.expect("ring").probability_exact(&pr);
                let ex0 = out.vertex0.expect("ring").probability_exact(&pr);
                let two = BigRational::from_integer(2.into());
                let lower = &two * &ex0 - BigRational::one();
                let upper = &two * &ex0;
                b.checks.push(Check::exact("2E[X_0] - 1 <= p_R", Relation::Le, &lower, &p_r));
                b.checks.push(Check::exact("p_R <= 2E[X_0]", Relation::Le, &p_r, &upper));
            } else {
                let trials = params.trials.unwrap_or(2_000);
                b.param("trials", trials);
                let p_r = estimate(TopologySpec::ring(n, r), p, Target::RingMajority, trials)?;
                let ex0 = estimate(TopologySpec::ring(n, r), p, Target::Vertex0Final, trials)?;
                let tol = stat_tol(&[(1.0, &p_r), (2.0, &ex0)]);
                b.checks.push(Check::float(
                    "2E[X_0] - 1 <= p_R",
                    Method::MonteCarlo,
                    Relation::Le,
                    2.0 * ex0.estimate - 1.0,
                    p_r.estimate,
                    tol,
                ));
                b.checks.push(Check::float(
                    "p_R <= 2E[X_0]",
                    Method::MonteCarlo,
                    Relation::Le,
                    p_r.estimate,
                    2.0 * ex0.estimate,
                    tol,
                ));
            }
        }
        LemmaId::Lemma3 => {
            let r = params.r.unwrap_or(4);
            let p = params.p.unwrap_or(0.3);
            let runs = params.trials.unwrap_or(100_000);
            require_open(p)?;
            b.param("r", r);
            b.param("p", p);
            b.param("trials", runs);
            let hitting = markov_hitting_expectation(r, p)?;
            for a in 1..=r {
                let rhs = hitting_bound(a, r, p)?;
                b.checks.push(Check::float(
                    format!("a + E[N_0] <= q^-r (a q^r + 1/(pq)), a = {a}"),
                    Method::Numeric,
                    Relation::Le,
                    a as f64 + hitting,
                    rhs,
                    NUMERIC_TOL * rhs.abs().max(1.0),
                ));
            }
            let chain = markov_chain_estimate(r, p, runs, params.master_seed, params.threads)?;
            b.checks.push(Check::float(
                "simulated E[N_0] == closed form",
                Method::MonteCarlo,
                Relation::Eq,
                chain.mean,
                hitting,
                3.0 * chain.std_error,
            ));
        }
        LemmaId::Corollary4 | LemmaId::Lemma5 => {
            let (def_r, def_p) = if lemma == LemmaId::Lemma5 { (12, 0.25) } else { (2, 0.2) };
            let r = params.r.unwrap_or(def_r);
            let p = params.p.unwrap_or(def_p);
            require_open(p)?;
            if lemma == LemmaId::Lemma5 && p >= 0.5 {
                return Err(Error::InvalidParameter(format!(
                    "the near-wall bound needs p < 1/2 (got {p})"
                )));
            }
            let delta = params.delta.unwrap_or_else(|| default_delta(r, p)).max(1);
            let n = params
                .n
                .unwrap_or_else(|| (DEFAULT_SIZE_FACTOR * r).max(4 * delta));
            let trials = params.trials.unwrap_or(2_000);
            b.param("n", n);
            b.param("r", r);
            b.param("p", p);
            b.param("delta", delta);
            b.param("trials", trials);
            let q = 1.0 - p;
            if lemma == LemmaId::Lemma5 {
                let pr = to_rational(p);
                let tail = binomial_tail_exact(2 * r as u64, &pr, r as u64 + 1);
                let four_pq = BigRational::from_integer(4.into()) * &pr * (BigRational::one() - &pr);
                let bound = num_traits::pow(four_pq, r);
                b.checks.push(Check::exact(
                    "P(Bin(2r, p) >= r+1) <= (4pq)^r",
                    Relation::Le,
                    &tail,
                    &bound,
                ));
            }
            let topo = Topology::new(TopologySpec::ring(n, r))?;
            let ev = ring_wall_events(&topo, Rule::Strict, p, delta, trials, params.master_seed, params.threads)?;
            b.checks.push(Check::float(
                "X_0 = 1 never starts inside r+1 passive cells",
                Method::MonteCarlo,
                Relation::Eq,
                ev.frozen_run_violations as f64,
                0.0,
                0.0,
            ));
            let (count, rhs, name) = if lemma == LemmaId::Corollary4 {
                let rhs = q.powi(-(r as i32)) * (r as f64 * q.powi(r as i32) + 1.0 / (p * q)) / delta as f64;
                (ev.active_far_right, rhs, "P(X_0=1, R >= delta | s_0=0) <= q^-r (r q^r + 1/(pq)) / delta")
            } else {
                (ev.active_walls_near, 2.0 * delta as f64 * chernoff_bound(r, p), "P(X_0=1, L,R < delta | s_0=0) <= 2 delta (4pq)^r")
            };
            let (lo, hi) = super::wilson::wilson_interval(count, trials, params.confidence)?;
            let est = count as f64 / trials as f64;
            b.checks.push(Check::float(
                name,
                Method::MonteCarlo,
                Relation::Le,
                est,
                rhs,
                (hi - lo).max(0.0),
            ));
        }
        LemmaId::Theorem6 => {
            let r = params.r.unwrap_or(16);
            let p = params.p.unwrap_or(0.2);
            require_open(p)?;
            if p >= 0.25 {
                return Err(Error::InvalidParameter(format!(
                    "the E[X_0] < 1/4 regime needs p < 1/4 (got {p})"
                )));
            }
            let n = params.n.unwrap_or(DEFAULT_SIZE_FACTOR * r);
            let trials = params.trials.unwrap_or(2_000);
            b.param("n", n);
            b.param("r", r);
            b.param("p", p);
            b.param("trials", trials);
            let ex0 = estimate(TopologySpec::ring(n, r), p, Target::Vertex0Final, trials)?;
            b.checks.push(Check::float(
                "E[X_0] < 1/4",
                Method::MonteCarlo,
                Relation::Lt,
                ex0.estimate,
                0.25,
                2.0 * ex0.half_width(),
            ));
            let q = 1.0 - p;
            if r as f64 * q.powi(r as i32) <= 1.0 / (p * q) {
                let c = 8.0 * r as f64 / (p * q);
                let bound = p + 1.0 / (2.0 * r as f64) + 2.0 * c * (4.0 * p).powi(r as i32);
                b.checks.push(Check::float(
                    "E[X_0] <= p + 1/(2r) + 2C(4p)^r",
                    Method::MonteCarlo,
                    Relation::Le,
                    ex0.estimate,
                    bound,
                    2.0 * ex0.half_width(),
                ));
            } else {
                b.notes.push("r q^r > 1/(pq): explicit bound not applicable at this radius".into());
            }
            b.notes.push(format!("n = {DEFAULT_SIZE_FACTOR} r by default; the statement concerns large r"));
        }
        LemmaId::Lemma6 => {
            let params3 = match params.three_state {
                Some(t) => t,
                None => ThreeStateParams::new(0.25, 0.25, 0.5)?,
            };
            let len = params.segment_len.unwrap_or(100_000);
            let trials = params.trials.unwrap_or(2_000);
            b.param("p_w", params3.p_wall);
            b.param("p_s", params3.p_spreading);
            b.param("p_e", params3.p_empty);
            b.param("segment_len", len);
            b.param("trials", trials);
            let act = three_state_activation(&params3)?;
            if params3.p_empty > 0.0 {
                b.checks.push(Check::float(
                    "1/(1 + p_w/p_s) < P(site 0 ends spreading)",
                    Method::Numeric,
                    Relation::Lt,
                    act.bound,
                    act.exact,
                    0.0,
                ));
            } else {
                b.checks.push(Check::float(
                    "P(site 0 ends spreading) == p_s when p_e = 0",
                    Method::Numeric,
                    Relation::Eq,
                    act.exact,
                    params3.p_spreading,
                    NUMERIC_TOL,
                ));
            }
            let sim = three_state_segment_estimate(&params3, len, trials, params.master_seed, params.threads)?;
            b.checks.push(Check::float(
                "segment simulation == closed form",
                Method::MonteCarlo,
                Relation::Eq,
                sim.mean,
                act.exact,
                3.0 * sim.std_error,
            ));
        }
        LemmaId::Lemma7 => {
            let r = params.r.unwrap_or(4);
            let p = params.p.unwrap_or(0.3);
            require_open(p)?;
            b.param("r", r);
            b.param("p", p);
            let q = 1.0 - p;
            for len in r + 1..=3 * r {
                let mu = mu_wall_exact(len, r, p)?;
                b.checks.push(Check::float(
                    format!("mu(W_{{{len},{r}}}) <= {len} q^(r+1)"),
                    Method::Numeric,
                    Relation::Le,
                    mu,
                    len as f64 * q.powi(r as i32 + 1),
                    NUMERIC_TOL,
                ));
            }
        }
        LemmaId::Lemma8 => {
            let r = params.r.unwrap_or(4);
            let p = params.p.unwrap_or(0.3);
            require_open(p)?;
            b.param("r", r);
            b.param("p", p);
            let words = enumerate_tr_with(r, params.policy)?;
            let spreading = words
                .iter()
                .filter(|w| classify_block(w) == BlockClass::Spreading)
                .count();
            b.param("tr_size", words.len());
            b.checks.push(Check::float(
                "every word of T_r is a spreading block",
                Method::Exact,
                Relation::Eq,
                spreading as f64,
                words.len() as f64,
                0.0,
            ));
            let len = 2 * r + 1;
            if len <= MAX_SPREADING_LEN || params.policy.is_override() {
                let mu_s = mu_spreading_exact_with(len, r, p, params.policy)?;
                let q = 1.0 - p;
                let lower = words.len() as f64 * p.powi(r as i32 + 1) * q.powi(r as i32);
                b.checks.push(Check::float(
                    "|T_r| p^(r+1) q^r <= mu(S_{2r+1,r})",
                    Method::Numeric,
                    Relation::Le,
                    lower,
                    mu_s,
                    NUMERIC_TOL,
                ));
            } else {
                b.notes.push(format!("mu(S) skipped: block length {len} exceeds {MAX_SPREADING_LEN}"));
            }
        }
        LemmaId::Theorem9 => {
            let r_max = params.r.unwrap_or(5).max(5);
            let limit = if params.policy.is_override() { r_max } else { r_max.min(MAX_TR_RADIUS) };
            b.param("r_max", limit);
            for r in (5..=limit).step_by(4) {
                let size = BigUint::from(enumerate_tr_with(r, params.policy)?.len());
                let bound = tr_lower_bound(r)?;
                b.checks.push(Check::integer(
                    format!("|T_{r}| >= Catalan(k) C(4k,2k) 4^k, r = {r}"),
                    Relation::Le,
                    &bound,
                    &size,
                ));
            }
        }
    }
    Ok(b.finish())
}
