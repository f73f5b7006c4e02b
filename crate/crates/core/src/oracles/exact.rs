//! Exact event probabilities by enumerating every initial configuration.
//!
//! Outcomes are tallied by the number of initially active vertices, so an
//! event probability is the polynomial `sum_k counts[k] p^k q^(V-k)`. It is
//! evaluated either in floating point with compensated summation or
//! exactly over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::numeric::{check_probability, neumaier_sum};
use super::{CostPolicy, MAX_EXACT_VERTICES};
use crate::error::{Error, Result};
use crate::topology::{Rule, Topology};

/// `counts[k]` = number of configurations with `k` initially active
/// vertices for which an event holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightHistogram {
    counts: Vec<u64>,
}

impl WeightHistogram {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        WeightHistogram { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of vertices the configurations range over.
    pub fn size(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn probability(&self, p: f64) -> f64 {
        let size = self.size() as i32;
        let q = 1.0 - p;
        neumaier_sum(
            self.counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(k, &c)| c as f64 * p.powi(k as i32) * q.powi(size - k as i32)),
        )
    }

    pub fn probability_exact(&self, p: &BigRational) -> BigRational {
        let q = BigRational::one() - p;
        let size = self.size();
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold(BigRational::zero(), |acc, (k, &c)| {
                acc + BigRational::from_integer(BigInt::from(c))
                    * num_traits::pow(p.clone(), k)
                    * num_traits::pow(q.clone(), size - k)
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcomes {
    pub vertices: usize,
    pub percolation: WeightHistogram,
    /// Strictly more than half the ring active at the fixed point (rings only).
    pub ring_majority: Option<WeightHistogram>,
    /// Vertex 0 active at the fixed point (rings only).
    pub vertex0: Option<WeightHistogram>,
}

/// Neighbor bitmasks and thresholds of a topology with at most 64 vertices.
struct MaskGraph {
    masks: Vec<u64>,
    thresholds: Vec<u32>,
}

impl MaskGraph {
    fn new(topology: &Topology, rule: Rule) -> Result<Self> {
        let v = topology.vertex_count();
        if v > 64 {
            return Err(Error::GuardExceeded(format!(
                "bitmask enumeration supports at most 64 vertices (got {v})"
            )));
        }
        let mut masks = Vec::with_capacity(v);
        let mut thresholds = Vec::with_capacity(v);
        for i in 0..v {
            masks.push(
                topology
                    .neighbors(i)?
                    .into_iter()
                    .fold(0u64, |m, j| m | 1 << j),
            );
            thresholds.push(topology.activation_threshold(i, rule)? as u32);
        }
        Ok(MaskGraph { masks, thresholds })
    }

    fn fixpoint(&self, mut active: u64) -> u64 {
        let full = if self.masks.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.masks.len()) - 1
        };
        loop {
            let mut next = active;
            let mut passive = !active & full;
            while passive != 0 {
                let i = passive.trailing_zeros() as usize;
                passive &= passive - 1;
                if (active & self.masks[i]).count_ones() >= self.thresholds[i] {
                    next |= 1 << i;
                }
            }
            if next == active {
                return active;
            }
            active = next;
        }
    }
}

/// Synchronous fixed point computed on neighbor bitmasks; an independent
/// route to the same answer as [`crate::dynamics::run_to_fixpoint`].
pub fn mask_fixpoint(topology: &Topology, rule: Rule, initial: u64) -> Result<u64> {
    Ok(MaskGraph::new(topology, rule)?.fixpoint(initial))
}

pub fn enumerate_outcomes(topology: &Topology, rule: Rule) -> Result<ExactOutcomes> {
    enumerate_outcomes_with(topology, rule, CostPolicy::Guarded)
}

pub fn enumerate_outcomes_with(
    topology: &Topology,
    rule: Rule,
    policy: CostPolicy,
) -> Result<ExactOutcomes> {
    let v = topology.vertex_count();
    if v > MAX_EXACT_VERTICES && !policy.is_override() {
        return Err(Error::GuardExceeded(format!(
            "{v} vertices exceed the exact-enumeration limit of {MAX_EXACT_VERTICES}; use the Monte Carlo estimator or accept the cost"
        )));
    }
    if v > 40 {
        return Err(Error::GuardExceeded(format!(
            "{v} vertices are beyond exhaustive enumeration"
        )));
    }
    let graph = MaskGraph::new(topology, rule)?;
    let ring = !topology.has_hub();
    let n = topology.n();
    let full = (1u64 << v) - 1;
    let total = 1u64 << v;
    let chunk = 1u64 << v.min(10);

    let zero = || [vec![0u64; v + 1], vec![0u64; v + 1], vec![0u64; v + 1]];
    let hists = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut h = zero();
            for init in c * chunk..(c + 1) * chunk {
                let k = init.count_ones() as usize;
                let fin = graph.fixpoint(init);
                if fin == full {
                    h[0][k] += 1;
                }
                if ring {
                    if 2 * fin.count_ones() as usize > n {
                        h[1][k] += 1;
                    }
                    if fin & 1 == 1 {
                        h[2][k] += 1;
                    }
                }
            }
            h
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.iter_mut().zip(y).for_each(|(s, t)| *s += t);
            }
            a
        });
    let [perc, maj, x0] = hists;
    Ok(ExactOutcomes {
        vertices: v,
        percolation: WeightHistogram::from_counts(perc),
        ring_majority: ring.then(|| WeightHistogram::from_counts(maj)),
        vertex0: ring.then(|| WeightHistogram::from_counts(x0)),
    })
}

pub fn exact_percolation_probability(topology: &Topology, rule: Rule, p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(enumerate_outcomes(topology, rule)?.percolation.probability(p))
}
