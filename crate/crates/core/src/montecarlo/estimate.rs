use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::seed::{trial_rng, uniform_below};
use super::wilson::wilson_interval;
use super::with_threads;
use crate::dynamics::Kernel;
use crate::error::{Error, Result};
use crate::oracles::{classify_block, BlockClass, BlockWord};
use crate::topology::{Rule, Topology, TopologySpec};

/// The event scored by each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// Every vertex active at the fixed point.
    Percolation,
    /// Strictly more than half of the ring active (rings only).
    RingMajority,
    /// Vertex 0 active at the fixed point (rings only).
    Vertex0Final,
    /// A random block of length `len` is spreading for radius `r`.
    BlockSpreading { len: usize },
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::Percolation => "pW",
            Target::RingMajority => "pR",
            Target::Vertex0Final => "EX0",
            Target::BlockSpreading { .. } => "muS",
        }
    }

    /// Parses a target name; `len` is required for block spreading.
    pub fn parse(name: &str, len: Option<usize>) -> Result<Self> {
        match name {
            "pW" | "pw" | "percolation" => Ok(Target::Percolation),
            "pR" | "pr" | "ring-majority" => Ok(Target::RingMajority),
            "EX0" | "x0" | "X0" | "vertex0" => Ok(Target::Vertex0Final),
            "muS" | "mus" | "block-spreading" => len
                .map(|len| Target::BlockSpreading { len })
                .ok_or_else(|| Error::InvalidParameter("target muS needs --len".into())),
            other => Err(Error::InvalidParameter(format!("unknown target `{other}`"))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::parse(s, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub topology: TopologySpec,
    pub rule: Rule,
    pub p: f64,
    pub target: Target,
    pub trials: u64,
    pub master_seed: u64,
    pub confidence: f64,
}

impl TrialPlan {
    pub fn new(topology: TopologySpec, rule: Rule, p: f64, target: Target, trials: u64, master_seed: u64) -> Self {
        TrialPlan {
            topology,
            rule,
            p,
            target,
            trials,
            master_seed,
            confidence: 0.95,
        }
    }

    pub fn with_confidence(mut self, confidence: f64) -> Self {
        self.confidence = confidence;
        self
    }

    pub fn validate(&self) -> Result<Topology> {
        let topology = Topology::new(self.topology)?;
        if self.trials < 1 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("p must lie in [0, 1] (got {})", self.p)));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "confidence must lie in (0, 1) (got {})",
                self.confidence
            )));
        }
        match self.target {
            Target::RingMajority | Target::Vertex0Final if topology.has_hub() => {
                Err(Error::TargetMismatch {
                    target: self.target.to_string(),
                    family: topology.family().to_string(),
                })
            }
            Target::BlockSpreading { len } if len < 1 => {
                Err(Error::InvalidParameter("block length must be >= 1".into()))
            }
            _ => Ok(topology),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub plan: TrialPlan,
    pub successes: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub elapsed_seconds: f64,
}

impl EstimateRecord {
    /// Half of the confidence interval's width.
    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }

    pub fn width(&self) -> f64 {
        self.ci_high - self.ci_low
    }

    /// Equality on everything except the wall-clock time.
    pub fn same_payload(&self, other: &EstimateRecord) -> bool {
        EstimateRecord {
            elapsed_seconds: 0.0,
            ..self.clone()
        } == EstimateRecord {
            elapsed_seconds: 0.0,
            ..other.clone()
        }
    }
}

/// Per-worker scratch space.
#[derive(Default)]
struct Scratch {
    kernel: Kernel,
    block: Vec<u8>,
}

fn score_trial(plan: &TrialPlan, topology: &Topology, scratch: &mut Scratch, index: u64) -> bool {
    let mut rng = trial_rng(plan.master_seed, index);
    let p = plan.p;
    if let Target::BlockSpreading { len } = plan.target {
        scratch.block.clear();
        scratch
            .block
            .extend((0..len).map(|_| u8::from(uniform_below(&mut rng, p))));
        let word = BlockWord::new(std::mem::take(&mut scratch.block), topology.r());
        let spreading = classify_block(&word) == BlockClass::Spreading;
        scratch.block = word.bits;
        return spreading;
    }
    let states = scratch.kernel.reset(topology);
    for s in states.iter_mut() {
        *s = u8::from(uniform_below(&mut rng, p));
    }
    let out = scratch.kernel.run(topology, plan.rule);
    match plan.target {
        Target::Percolation => out.percolated(topology),
        Target::RingMajority => 2 * out.ring_active > topology.n(),
        Target::Vertex0Final => scratch.kernel.states()[0] == 1,
        Target::BlockSpreading { .. } => unreachable!(),
    }
}

/// Per-trial outcomes for trial indices `range`, in index order.
pub fn trial_outcomes(plan: &TrialPlan, range: std::ops::Range<u64>) -> Result<Vec<bool>> {
    let topology = plan.validate()?;
    let mut scratch = Scratch::default();
    Ok(range
        .map(|i| score_trial(plan, &topology, &mut scratch, i))
        .collect())
}

pub fn run_estimate(plan: &TrialPlan) -> Result<EstimateRecord> {
    run_estimate_with_threads(plan, None)
}

/// Like [`run_estimate`] on a dedicated pool of `threads` workers. The
/// result does not depend on `threads`.
pub fn run_estimate_with_threads(plan: &TrialPlan, threads: Option<usize>) -> Result<EstimateRecord> {
    let topology = plan.validate()?;
    let start = Instant::now();
    let successes: u64 = with_threads(threads, || {
        (0..plan.trials)
            .into_par_iter()
            .map_init(Scratch::default, |scratch, i| {
                u64::from(score_trial(plan, &topology, scratch, i))
            })
            .sum()
    });
    let (ci_low, ci_high) = wilson_interval(successes, plan.trials, plan.confidence)?;
    Ok(EstimateRecord {
        plan: *plan,
        successes,
        estimate: successes as f64 / plan.trials as f64,
        ci_low,
        ci_high,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}
