//! Monotone freezing threshold dynamics.
//!
//! A passive vertex becomes active once the number of its active neighbors
//! reaches its threshold; active vertices never change again. The fixed
//! point does not depend on the update schedule, so synchronous rounds are
//! the canonical semantics and sequential sweeps exist for cross-checks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::topology::{Rule, Topology};

/// Bit-packed vertex states, `1` = active. For r-wheels the hub occupies
/// the last index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    words: Vec<u64>,
    len: usize,
}

impl Configuration {
    pub fn zeros(len: usize) -> Self {
        Configuration {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut c = Self::zeros(len);
        for i in 0..len {
            c.set(i, true);
        }
        c
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        Configuration { words, len }
    }

    pub fn from_bytes(states: &[u8]) -> Self {
        Self::from_bits(states.iter().map(|&s| s != 0))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, active: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        if active {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count_active(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Pointwise `self <= other`.
    pub fn is_subset_of(&self, other: &Configuration) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({self})")
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !matches!(c, ',' | ' ' | '_'))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "configuration may only contain 0/1, found `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    Synchronous,
    /// One sweep visits vertices in this order, updating in place.
    Sequential(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointResult {
    pub final_config: Configuration,
    /// Synchronous rounds (or sequential sweeps) that activated something.
    pub rounds: usize,
    pub active_count: usize,
    pub percolated: bool,
    pub hub_active: Option<bool>,
}

fn check_len(topology: &Topology, config: &Configuration) -> Result<()> {
    if config.len() != topology.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: topology.vertex_count(),
            got: config.len(),
        });
    }
    Ok(())
}

/// Active-neighbor counts for every vertex, via a sliding window over the
/// ring plus the hub term.
fn neighbor_counts(topology: &Topology, states: &[u8], counts: &mut Vec<u32>) {
    let (n, r) = (topology.n(), topology.r());
    counts.clear();
    counts.resize(topology.vertex_count(), 0);
    let hub_on = topology.hub().map_or(0, |h| u32::from(states[h]));

    let mut window: u32 = (0..=2 * r)
        .map(|k| u32::from(states[(k + n - r) % n]))
        .sum();
    let (mut out_idx, mut in_idx) = (n - r, (r + 1) % n);
    for v in 0..n {
        counts[v] = window - u32::from(states[v]) + hub_on;
        window -= u32::from(states[out_idx]);
        window += u32::from(states[in_idx]);
        out_idx = if out_idx + 1 == n { 0 } else { out_idx + 1 };
        in_idx = if in_idx + 1 == n { 0 } else { in_idx + 1 };
    }
    if let Some(h) = topology.hub() {
        counts[h] = states[..n].iter().map(|&s| u32::from(s)).sum();
    }
}

/// One synchronous round.
pub fn step_synchronous(
    topology: &Topology,
    config: &Configuration,
    rule: Rule,
) -> Result<Configuration> {
    check_len(topology, config)?;
    let states = config.to_bytes();
    let mut counts = Vec::new();
    neighbor_counts(topology, &states, &mut counts);
    let ring_th = topology.ring_threshold(rule) as u32;
    let mut next = config.clone();
    for v in 0..topology.vertex_count() {
        let th = if topology.is_hub(v) {
            topology.activation_threshold(v, rule)? as u32
        } else {
            ring_th
        };
        if states[v] == 0 && counts[v] >= th {
            next.set(v, true);
        }
    }
    Ok(next)
}

/// Summary of a kernel run; the final states stay in the kernel buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelOutcome {
    pub rounds: usize,
    pub active_count: usize,
    pub ring_active: usize,
    pub hub_active: Option<bool>,
}

impl KernelOutcome {
    pub fn percolated(&self, topology: &Topology) -> bool {
        self.active_count == topology.vertex_count()
    }
}

/// Reusable synchronous fixed-point engine.
///
/// Keeps one active-neighbor counter per vertex. Each newly activated ring
/// vertex bumps the counters of its `2r` ring neighbors, and a vertex joins
/// the next round exactly when its counter first reaches the threshold, so
/// a run costs `O(n + r * activations)` instead of `O(n * r)` per round. The
/// hub enters ring counters as a scalar bonus once it is active.
#[derive(Debug, Default, Clone)]
pub struct Kernel {
    states: Vec<u8>,
    counts: Vec<u32>,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl Kernel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Mutable initial states, resized to the topology and zeroed.
    pub fn reset(&mut self, topology: &Topology) -> &mut [u8] {
        self.states.clear();
        self.states.resize(topology.vertex_count(), 0);
        &mut self.states
    }

    pub fn states(&self) -> &[u8] {
        &self.states
    }

    pub fn load(&mut self, topology: &Topology, config: &Configuration) -> Result<()> {
        check_len(topology, config)?;
        let states = self.reset(topology);
        for (s, b) in states.iter_mut().zip(config.iter()) {
            *s = u8::from(b);
        }
        Ok(())
    }

    /// Runs the states currently loaded to their fixed point.
    pub fn run(&mut self, topology: &Topology, rule: Rule) -> KernelOutcome {
        let (n, r) = (topology.n(), topology.r());
        let hub = topology.hub();
        debug_assert_eq!(self.states.len(), topology.vertex_count());
        let ring_th = topology.ring_threshold(rule) as u32;
        let hub_th = hub.map_or(u32::MAX, |_| rule.threshold(n) as u32);

        let mut counts = std::mem::take(&mut self.counts);
        neighbor_counts(topology, &self.states, &mut counts);
        let states = &mut self.states;
        let mut hub_bonus = hub.map_or(0, |h| u32::from(states[h]));
        // Ring counters never include the hub; it is added through `hub_bonus`.
        if hub_bonus == 1 {
            for c in &mut counts[..n] {
                *c -= 1;
            }
        }
        let mut ring_active: u32 = states[..n].iter().map(|&s| u32::from(s)).sum();

        self.frontier.clear();
        for v in 0..n {
            if states[v] == 0 && counts[v] + hub_bonus >= ring_th {
                self.frontier.push(v as u32);
            }
        }
        if let Some(h) = hub {
            if states[h] == 0 && ring_active >= hub_th {
                self.frontier.push(h as u32);
            }
        }

        let mut rounds = 0;
        while !self.frontier.is_empty() {
            rounds += 1;
            self.next.clear();
            for &v in &self.frontier {
                states[v as usize] = 1;
            }
            if let Some(h) = hub {
                if hub_bonus == 0 && states[h] == 1 {
                    hub_bonus = 1;
                    for w in 0..n {
                        if states[w] == 0 && counts[w] + 1 == ring_th {
                            self.next.push(w as u32);
                        }
                    }
                }
            }
            for &v in &self.frontier {
                let v = v as usize;
                if Some(v) == hub {
                    continue;
                }
                ring_active += 1;
                if let Some(h) = hub {
                    if states[h] == 0 && ring_active == hub_th {
                        self.next.push(h as u32);
                    }
                }
                for d in 1..=r {
                    let left = if v >= d { v - d } else { v + n - d };
                    let right = if v + d < n { v + d } else { v + d - n };
                    for w in [left, right] {
                        counts[w] += 1;
                        if states[w] == 0 && counts[w] + hub_bonus == ring_th {
                            self.next.push(w as u32);
                        }
                    }
                }
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        self.counts = counts;

        let hub_active = hub.map(|h| self.states[h] == 1);
        let active_count = ring_active as usize + usize::from(hub_active == Some(true));
        KernelOutcome {
            rounds,
            active_count,
            ring_active: ring_active as usize,
            hub_active,
        }
    }
}

fn run_sequential(
    topology: &Topology,
    config: &Configuration,
    rule: Rule,
    order: &[usize],
) -> Result<FixpointResult> {
    let count = topology.vertex_count();
    let mut seen = vec![false; count];
    for &v in order {
        if v >= count {
            return Err(Error::InvalidVertex { vertex: v, count });
        }
        seen[v] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidParameter(format!(
            "sequential order never visits vertex {missing}"
        )));
    }
    let neighbors: Vec<Vec<usize>> = (0..count)
        .map(|v| topology.neighbors(v))
        .collect::<Result<_>>()?;
    let thresholds: Vec<usize> = (0..count)
        .map(|v| topology.activation_threshold(v, rule))
        .collect::<Result<_>>()?;

    let mut states = config.to_bytes();
    let mut sweeps = 0;
    loop {
        let mut changed = false;
        for &v in order {
            if states[v] == 0 {
                let active = neighbors[v].iter().filter(|&&u| states[u] == 1).count();
                if active >= thresholds[v] {
                    states[v] = 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        sweeps += 1;
    }
    Ok(summarize(topology, Configuration::from_bytes(&states), sweeps))
}

fn summarize(topology: &Topology, final_config: Configuration, rounds: usize) -> FixpointResult {
    let active_count = final_config.count_active();
    FixpointResult {
        percolated: active_count == topology.vertex_count(),
        hub_active: topology.hub().map(|h| final_config.get(h)),
        final_config,
        rounds,
        active_count,
    }
}

pub fn run_to_fixpoint(
    topology: &Topology,
    config: &Configuration,
    rule: Rule,
    schedule: &Schedule,
) -> Result<FixpointResult> {
    check_len(topology, config)?;
    match schedule {
        Schedule::Synchronous => {
            let mut kernel = Kernel::new();
            kernel.load(topology, config)?;
            let out = kernel.run(topology, rule);
            Ok(summarize(
                topology,
                Configuration::from_bytes(kernel.states()),
                out.rounds,
            ))
        }
        Schedule::Sequential(order) => run_sequential(topology, config, rule, order),
    }
}

/// State of `vertex` after stabilization.
pub fn final_state_of(
    topology: &Topology,
    config: &Configuration,
    rule: Rule,
    vertex: usize,
) -> Result<bool> {
    if vertex >= topology.vertex_count() {
        return Err(Error::InvalidVertex {
            vertex,
            count: topology.vertex_count(),
        });
    }
    let res = run_to_fixpoint(topology, config, rule, &Schedule::Synchronous)?;
    Ok(res.final_config.get(vertex))
}
