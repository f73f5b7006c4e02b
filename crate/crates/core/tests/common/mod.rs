//! Instance generators and property checks shared by the integration tests.
//! Reference closures here are written independently of the library kernel.

#![allow(dead_code)]

use bootperc::{run_to_fixpoint, step_synchronous, Configuration, Family, Rule, Schedule, Topology, TopologySpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type TestRng = Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> TestRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Random topology with `n <= max_n`, `r <= max_r`, random rule and a
/// configuration of random density.
pub fn random_instance(rng: &mut TestRng, max_n: usize, max_r: usize) -> (Topology, Configuration, Rule) {
    let r = rng.random_range(1..=max_r);
    let n = rng.random_range(2 * r + 2..=max_n.max(2 * r + 2));
    let family = if rng.random_bool(0.5) { Family::Ring } else { Family::RWheel };
    let rule = if rng.random_bool(0.5) { Rule::Strict } else { Rule::Simple };
    let topo = Topology::new(TopologySpec::new(family, n, r)).unwrap();
    let config = random_config(rng, topo.vertex_count());
    (topo, config, rule)
}

pub fn random_config(rng: &mut TestRng, len: usize) -> Configuration {
    let p: f64 = rng.random();
    Configuration::from_bits((0..len).map(|_| rng.random_bool(p)))
}

fn final_of(t: &Topology, c: &Configuration, rule: Rule) -> Configuration {
    run_to_fixpoint(t, c, rule, &Schedule::Synchronous).unwrap().final_config
}

/// Every synchronous round only adds active vertices.
pub fn check_monotone_freezing(t: &Topology, c: &Configuration, rule: Rule) -> Result<(), String> {
    let mut cur = c.clone();
    for round in 0..=t.vertex_count() {
        let next = step_synchronous(t, &cur, rule).unwrap();
        if !cur.is_subset_of(&next) {
            return Err(format!("round {round} deactivated a vertex"));
        }
        if next == cur {
            return Ok(());
        }
        cur = next;
    }
    Err("no fixed point within vertex-count rounds".into())
}

/// `A ⊆ A'` implies `final(A) ⊆ final(A')`; `A'` adds random vertices to `A`.
pub fn check_initial_monotonicity(rng: &mut TestRng, t: &Topology, c: &Configuration, rule: Rule) -> Result<(), String> {
    let mut bigger = c.clone();
    let extra: f64 = rng.random();
    for i in 0..c.len() {
        if rng.random_bool(extra) {
            bigger.set(i, true);
        }
    }
    if final_of(t, c, rule).is_subset_of(&final_of(t, &bigger, rule)) {
        Ok(())
    } else {
        Err(format!("final({c}) not within final({bigger})"))
    }
}

/// A random sequential order reaches the synchronous fixed point.
pub fn check_schedule_independence(rng: &mut TestRng, t: &Topology, c: &Configuration, rule: Rule) -> Result<(), String> {
    let mut order: Vec<usize> = (0..t.vertex_count()).collect();
    order.shuffle(rng);
    let seq = run_to_fixpoint(t, c, rule, &Schedule::Sequential(order)).unwrap().final_config;
    let sync = final_of(t, c, rule);
    if seq == sync {
        Ok(())
    } else {
        Err(format!("sequential {seq} != synchronous {sync}"))
    }
}

pub fn check_round_bound(t: &Topology, c: &Configuration, rule: Rule) -> Result<(), String> {
    let res = run_to_fixpoint(t, c, rule, &Schedule::Synchronous).unwrap();
    if res.rounds <= t.vertex_count() {
        Ok(())
    } else {
        Err(format!("{} rounds on {} vertices", res.rounds, t.vertex_count()))
    }
}

/// On a ring under the strict rule, initial runs of `r+1` passive vertices
/// stay passive.
pub fn check_wall_persistence(t: &Topology, c: &Configuration) -> Result<(), String> {
    assert!(!t.has_hub());
    let (n, r) = (t.n(), t.r());
    let fin = final_of(t, c, Rule::Strict);
    for start in 0..n {
        let run = || (0..=r).map(|k| (start + k) % n);
        if run().all(|i| !c.get(i)) && run().any(|i| fin.get(i)) {
            return Err(format!("passive run at {start} activated: {c} -> {fin}"));
        }
    }
    Ok(())
}

/// Fixed point of a ring with per-vertex threshold `th`, by naive rounds.
pub fn ring_closure(n: usize, r: usize, th: usize, init: &[bool]) -> Vec<bool> {
    let mut cur = init.to_vec();
    loop {
        let next: Vec<bool> = (0..n)
            .map(|v| {
                cur[v]
                    || (1..=r)
                        .map(|d| usize::from(cur[(v + d) % n]) + usize::from(cur[(v + n - d) % n]))
                        .sum::<usize>()
                        >= th
            })
            .collect();
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Wheel final ring state predicted from two ring-only phases: the strict
/// ring closure, then the simple ring closure once the hub is on.
pub fn check_two_phase_wheel(t: &Topology, c: &Configuration) -> Result<(), String> {
    assert!(t.has_hub());
    let (n, r) = (t.n(), t.r());
    let ring: Vec<bool> = (0..n).map(|i| c.get(i)).collect();
    let hub_start = c.get(n);
    let strict = ring_closure(n, r, r + 1, &ring);
    let hub_on = hub_start || 2 * strict.iter().filter(|&&b| b).count() > n;
    let expect_ring = if hub_on { ring_closure(n, r, r, &strict) } else { strict };
    let res = run_to_fixpoint(t, c, Rule::Strict, &Schedule::Synchronous).unwrap();
    let got: Vec<bool> = (0..n).map(|i| res.final_config.get(i)).collect();
    if got != expect_ring {
        return Err(format!("ring part differs from the two-phase prediction for {c}"));
    }
    if res.hub_active != Some(hub_on) {
        return Err(format!("hub state differs for {c}"));
    }
    Ok(())
}
