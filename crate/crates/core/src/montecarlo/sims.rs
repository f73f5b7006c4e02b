//! Samplers for quantities that are not a single fixed-point event: the
//! three-state line process, the reset chain behind the wall-distance
//! bound, and wall events around vertex 0 of a ring.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::seed::{trial_rng, unit_draw, uniform_below};
use super::with_threads;
use crate::dynamics::Kernel;
use crate::error::{Error, Result};
use crate::oracles::{segment_fixpoint, wall_distances_in, SiteState, ThreeStateParams};
use crate::topology::{Rule, Topology};

/// Sample mean with its standard error. Sums are accumulated as integers,
/// so the result does not depend on scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub samples: u64,
    pub mean: f64,
    pub std_error: f64,
}

impl MeanEstimate {
    fn from_sums(samples: u64, sum: u128, sum_sq: u128) -> Self {
        let n = samples as f64;
        let mean = sum as f64 / n;
        let var = if samples > 1 {
            ((sum_sq as f64 - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        MeanEstimate {
            samples,
            mean,
            std_error: (var / n).sqrt(),
        }
    }

    /// `|mean - value|` measured in standard errors.
    pub fn z_distance(&self, value: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == value {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - value).abs() / self.std_error
        }
    }
}

fn check_runs(runs: u64) -> Result<()> {
    if runs == 0 {
        return Err(Error::InvalidParameter("need at least one run".into()));
    }
    Ok(())
}

/// Fraction of trials in which the middle site of a segment of `len` sites
/// ends in the spreading state.
pub fn three_state_segment_estimate(
    params: &ThreeStateParams,
    len: usize,
    trials: u64,
    master_seed: u64,
    threads: Option<usize>,
) -> Result<MeanEstimate> {
    params.validate()?;
    check_runs(trials)?;
    if len == 0 {
        return Err(Error::InvalidParameter("segment length must be >= 1".into()));
    }
    let (pw, pws) = (params.p_wall, params.p_wall + params.p_spreading);
    let hits: u64 = with_threads(threads, || {
        (0..trials)
            .into_par_iter()
            .map_init(Vec::new, |sites: &mut Vec<SiteState>, i| {
                let mut rng = trial_rng(master_seed, i);
                sites.clear();
                sites.extend((0..len).map(|_| {
                    let u = unit_draw(&mut rng);
                    if u < pw {
                        SiteState::Wall
                    } else if u < pws {
                        SiteState::Spreading
                    } else {
                        SiteState::Empty
                    }
                }));
                segment_fixpoint(sites);
                u64::from(sites[len / 2] == SiteState::Spreading)
            })
            .sum()
    });
    Ok(MeanEstimate::from_sums(trials, hits as u128, hits as u128))
}

/// Steps for the reset chain (advance with probability `1-p`, return to 0
/// with probability `p`) to climb from 0 to `r+1`.
pub fn markov_chain_estimate(
    r: usize,
    p: f64,
    runs: u64,
    master_seed: u64,
    threads: Option<usize>,
) -> Result<MeanEstimate> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1) (got {p})")));
    }
    check_runs(runs)?;
    let (sum, sum_sq) = with_threads(threads, || {
        (0..runs)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(master_seed, i);
                let (mut state, mut steps) = (0usize, 0u128);
                while state <= r {
                    steps += 1;
                    state = if uniform_below(&mut rng, p) { 0 } else { state + 1 };
                }
                (steps, steps * steps)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    });
    Ok(MeanEstimate::from_sums(runs, sum, sum_sq))
}

/// Event counts around vertex 0 of a ring, conditioned on vertex 0 starting
/// passive. A missing wall counts as distance `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallEventCounts {
    pub trials: u64,
    /// Vertex 0 ends active and the right wall is at distance `>= delta`.
    pub active_far_right: u64,
    /// Vertex 0 ends active and both walls are closer than `delta`.
    pub active_walls_near: u64,
    /// Vertex 0 ends active although it started inside a passive run of
    /// length `r+1` or more. Always zero.
    pub frozen_run_violations: u64,
}

pub fn ring_wall_events(
    topology: &Topology,
    rule: Rule,
    p: f64,
    delta: usize,
    trials: u64,
    master_seed: u64,
    threads: Option<usize>,
) -> Result<WallEventCounts> {
    if topology.has_hub() {
        return Err(Error::InvalidTopology("wall events are defined on rings only".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1] (got {p})")));
    }
    check_runs(trials)?;
    let (n, r) = (topology.n(), topology.r());
    let counts = with_threads(threads, || {
        (0..trials)
            .into_par_iter()
            .map_init(
                || (Kernel::new(), Vec::new()),
                |(kernel, initial): &mut (Kernel, Vec<u8>), i| {
                    let mut rng = trial_rng(master_seed, i);
                    let states = kernel.reset(topology);
                    for s in states.iter_mut() {
                        *s = u8::from(uniform_below(&mut rng, p));
                    }
                    states[0] = 0;
                    initial.clear();
                    initial.extend_from_slice(states);
                    kernel.run(topology, rule);
                    let x0 = kernel.states()[0] == 1;
                    if !x0 {
                        return [0u64; 3];
                    }
                    let walls = wall_distances_in(initial, r);
                    let left = walls.left.unwrap_or(n);
                    let right = walls.right.unwrap_or(n);
                    let run = zero_run_through_origin(initial);
                    [
                        u64::from(right >= delta),
                        u64::from(left < delta && right < delta),
                        u64::from(run > r),
                    ]
                },
            )
            .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    });
    Ok(WallEventCounts {
        trials,
        active_far_right: counts[0],
        active_walls_near: counts[1],
        frozen_run_violations: counts[2],
    })
}

/// Length of the maximal passive run containing position 0.
fn zero_run_through_origin(states: &[u8]) -> usize {
    let n = states.len();
    if states[0] == 1 {
        return 0;
    }
    if states.iter().all(|&s| s == 0) {
        return n;
    }
    let right = states.iter().take_while(|&&s| s == 0).count();
    let left = states.iter().rev().take_while(|&&s| s == 0).count();
    right + left
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{markov_hitting_expectation, three_state_activation};
    use crate::topology::{build_topology, TopologySpec};

    #[test]
    fn chain_matches_closed_form() {
        let est = markov_chain_estimate(1, 0.5, 50_000, 3, None).unwrap();
        let exact = markov_hitting_expectation(1, 0.5).unwrap();
        assert!(est.z_distance(exact) < 4.0, "{est:?} vs {exact}");
    }

    #[test]
    fn segment_matches_closed_form() {
        let params = ThreeStateParams::new(0.25, 0.25, 0.5).unwrap();
        let est = three_state_segment_estimate(&params, 1001, 20_000, 5, None).unwrap();
        let exact = three_state_activation(&params).unwrap().exact;
        assert!(est.z_distance(exact) < 4.0, "{est:?} vs {exact}");
    }

    #[test]
    fn zero_runs() {
        assert_eq!(zero_run_through_origin(&[1, 0, 0]), 0);
        assert_eq!(zero_run_through_origin(&[0, 0, 1, 1, 0]), 3);
        assert_eq!(zero_run_through_origin(&[0, 0, 0]), 3);
    }

    #[test]
    fn frozen_runs_stay_passive() {
        let t = build_topology(TopologySpec::ring(400, 3)).unwrap();
        let ev = ring_wall_events(&t, Rule::Strict, 0.4, 50, 2000, 8, None).unwrap();
        assert_eq!(ev.frozen_run_violations, 0);
        assert!(ev.active_far_right + ev.active_walls_near <= ev.trials);
    }
}
