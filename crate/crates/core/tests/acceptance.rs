//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use bootperc::montecarlo::{
    markov_chain_estimate, run_estimate, scan_grid, three_state_segment_estimate, SizeRule, Target, TrialPlan,
};
use bootperc::oracles::{
    binomial_tail_exact, classify_block, enumerate_outcomes, enumerate_tr, hitting_bound, markov_hitting_expectation,
    mu_wall_exact, three_state_activation, tr_lower_bound, BlockClass, ThreeStateParams,
};
use bootperc::{Configuration, Family, Rule, Topology, TopologySpec};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

type Criterion = (u32, &'static str, fn() -> Verdict, Duration);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact-vs-MC calibration on small instances.
fn criterion_1() -> Verdict {
    let mut rng = common::rng(1);
    let densities = [0.2, 0.3, 0.5, 0.7];
    let mut inside = 0;
    let mut misses = Vec::new();
    for i in 0..50u64 {
        let family = if i % 2 == 0 { Family::Ring } else { Family::RWheel };
        let max_n = if family == Family::Ring { 14 } else { 13 };
        let r = rng.random_range(1..=3);
        let n = rng.random_range(2 * r + 2..=max_n);
        let p = densities[rng.random_range(0..densities.len())];
        let spec = TopologySpec::new(family, n, r);
        let exact = enumerate_outcomes(&Topology::new(spec).unwrap(), Rule::Strict)
            .unwrap()
            .percolation
            .probability(p);
        let plan = TrialPlan::new(spec, Rule::Strict, p, Target::Percolation, 100_000, 10_000 + i).with_confidence(0.99);
        let rec = run_estimate(&plan).unwrap();
        if rec.ci_low <= exact && exact <= rec.ci_high {
            inside += 1;
        } else {
            misses.push(format!("{family}({n},{r}) p={p}: exact {exact:.5}, estimate {:.5}", rec.estimate));
        }
    }
    verdict(inside >= 47, format!("{inside}/50 inside the 99% Wilson interval {misses:?}"))
}

/// Exact sandwich `2E[X_0]-1 <= p_R <= 2E[X_0]` on small rings.
fn criterion_2() -> Verdict {
    let two = BigRational::from_integer(2.into());
    let mut cases = 0;
    let mut bad = Vec::new();
    for r in 1..=3usize {
        for n in 2 * r + 2..=12 {
            let out = enumerate_outcomes(&Topology::new(TopologySpec::ring(n, r)).unwrap(), Rule::Strict).unwrap();
            for p in [ratio(2, 10), ratio(3, 10), ratio(4, 10)] {
                let p_r = out.ring_majority.as_ref().unwrap().probability_exact(&p);
                let ex0 = out.vertex0.as_ref().unwrap().probability_exact(&p);
                cases += 1;
                if !(&two * &ex0 - BigRational::one() <= p_r && p_r <= &two * &ex0) {
                    bad.push(format!("n={n} r={r} p={p}"));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{cases} instances, violations {bad:?}"))
}

/// Every word of `T_r` is spreading, `r <= 6`.
fn criterion_3() -> Verdict {
    let mut sizes = Vec::new();
    let mut bad = Vec::new();
    for r in 1..=6 {
        let words = enumerate_tr(r).unwrap();
        sizes.push(words.len());
        for w in &words {
            if w.len() != 2 * r + 1 || classify_block(w) != BlockClass::Spreading {
                bad.push(w.to_string());
            }
        }
    }
    let ok = bad.is_empty() && sizes[0] == 1 && sizes[1] == 2;
    verdict(ok, format!("|T_r| for r=1..6 = {sizes:?}, non-spreading {bad:?}"))
}

fn criterion_4() -> Verdict {
    let size = BigUint::from(enumerate_tr(5).unwrap().len());
    let bound = tr_lower_bound(5).unwrap();
    verdict(size >= bound && bound == BigUint::from(24u32), format!("|T_5| = {size} >= {bound}"))
}

/// Rational probability that a uniform-weight word contains `r+1` zeros in
/// a row, by listing all words.
fn wall_measure_brute(len: usize, r: usize, p: &BigRational) -> BigRational {
    let q = BigRational::one() - p;
    let mut by_weight = vec![0u64; len + 1];
    for w in 0u64..1 << len {
        let mut run = 0;
        let mut wall = false;
        for i in 0..len {
            if w >> i & 1 == 0 {
                run += 1;
                wall |= run > r;
            } else {
                run = 0;
            }
        }
        if wall {
            by_weight[w.count_ones() as usize] += 1;
        }
    }
    by_weight.iter().enumerate().fold(BigRational::zero(), |acc, (k, &c)| {
        acc + BigRational::from_integer(BigInt::from(c)) * num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), len - k)
    })
}

/// Wall measure bound `mu(W) <= l q^(r+1)`.
fn criterion_5() -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for r in 1..=6usize {
        for len in r + 1..=3 * r {
            for k in 1..=9i64 {
                let p = k as f64 / 10.0;
                let pr = ratio(k, 10);
                let q = BigRational::one() - &pr;
                let exact = wall_measure_brute(len, r, &pr);
                let bound = BigRational::from_integer(BigInt::from(len)) * num_traits::pow(q, r + 1);
                let fast = mu_wall_exact(len, r, p).unwrap();
                let exact_f = num_traits::ToPrimitive::to_f64(&exact).unwrap();
                let bound_f = len as f64 * (1.0 - p).powi(r as i32 + 1);
                checked += 1;
                if exact > bound || (fast - exact_f).abs() > 1e-12 || fast > bound_f + 1e-12 {
                    bad.push(format!("l={len} r={r} p={p}"));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} grid points, violations {bad:?}"))
}

/// `P(Bin(2r,p) >= r+1) <= (4pq)^r`, exact rationals.
fn criterion_6() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for r in 1..=64usize {
        for k in 1..=9i64 {
            let p = ratio(k, 20);
            let four_pq = BigRational::from_integer(4.into()) * &p * (BigRational::one() - &p);
            let tail = binomial_tail_exact(2 * r as u64, &p, r as u64 + 1);
            checked += 1;
            if tail > num_traits::pow(four_pq, r) {
                bad.push(format!("r={r} p={p}"));
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} (r, p) pairs, violations {bad:?}"))
}

/// Three-state process: exact value beats its bound; segment simulation
/// agrees with the exact value.
fn criterion_7() -> Verdict {
    let mut rng = common::rng(7);
    let mut bound_fail = 0;
    for _ in 0..1000 {
        let e: [f64; 3] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
        let s: f64 = e.iter().sum();
        let (pw, ps) = (e[0] / s, e[1] / s);
        let params = ThreeStateParams::new(pw, ps, 1.0 - pw - ps).unwrap();
        let act = three_state_activation(&params).unwrap();
        if act.exact <= act.bound || act.exact.is_nan() {
            bound_fail += 1;
        }
    }
    let points = [(0.25, 0.25, 0.5), (0.1, 0.3, 0.6), (0.3, 0.1, 0.6), (0.05, 0.05, 0.9), (0.4, 0.4, 0.2)];
    let mut sims = Vec::new();
    let mut sim_ok = true;
    for (i, (pw, ps, pe)) in points.into_iter().enumerate() {
        let params = ThreeStateParams::new(pw, ps, pe).unwrap();
        let exact = three_state_activation(&params).unwrap().exact;
        let est = three_state_segment_estimate(&params, 100_000, 10_000, 700 + i as u64, None).unwrap();
        let z = est.z_distance(exact);
        sim_ok &= z <= 3.0;
        sims.push(format!("{z:.2}"));
    }
    verdict(
        bound_fail == 0 && sim_ok,
        format!("bound violations {bound_fail}/1000; simulation z-scores {sims:?}"),
    )
}

/// Reset-chain expectation bound and simulation.
fn criterion_8() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for r in 1..=20usize {
        for k in 2..=9 {
            let p = k as f64 * 0.05;
            let e = markov_hitting_expectation(r, p).unwrap();
            for a in 1..=r {
                checked += 1;
                if a as f64 + e > hitting_bound(a, r, p).unwrap() {
                    bad.push(format!("a={a} r={r} p={p}"));
                }
            }
        }
    }
    let mut sims = Vec::new();
    let mut sim_ok = true;
    for (i, (r, p)) in [(4usize, 0.3), (8, 0.2), (12, 0.1)].into_iter().enumerate() {
        let est = markov_chain_estimate(r, p, 100_000, 800 + i as u64, None).unwrap();
        let z = est.z_distance(markov_hitting_expectation(r, p).unwrap());
        sim_ok &= z <= 3.0;
        sims.push(format!("{z:.2}"));
    }
    verdict(
        bad.is_empty() && sim_ok,
        format!("{checked} inequalities, violations {bad:?}; simulation z-scores {sims:?}"),
    )
}

/// Ring majority trend in `r` with `n = 2000 r`.
fn criterion_9() -> Verdict {
    let radii = [2, 4, 8, 16, 32];
    let base = TrialPlan::new(TopologySpec::ring(4000, 2), Rule::Strict, 0.3, Target::RingMajority, 10_000, 9);
    let high = scan_grid(&base, &[0.3], &radii, SizeRule::PerRadius(2000), None).unwrap();
    let low = scan_grid(&base, &[0.2], &[32], SizeRule::PerRadius(2000), None).unwrap();
    let trend_ok = high
        .windows(2)
        .all(|w| w[1].estimate >= w[0].estimate - 2.0 * w[0].width().max(w[1].width()));
    let last = high.last().unwrap();
    let low = &low[0];
    let ests: Vec<String> = high.iter().map(|c| format!("{:.4}", c.estimate)).collect();
    verdict(
        trend_ok && last.estimate > 0.9 && low.estimate < 0.5 + 2.0 * low.half_width(),
        format!(
            "p=0.3 estimates over r={radii:?}: {ests:?}; p=0.2, r=32: {:.4} (half-width {:.4})",
            low.estimate,
            low.half_width()
        ),
    )
}

/// Dynamics invariants over randomized instances.
fn criterion_10() -> Verdict {
    let mut rng = common::rng(10);
    let mut violations = [0usize; 5];
    let instances = 1000;
    for _ in 0..instances {
        let (t, c, rule) = common::random_instance(&mut rng, 200, 8);
        violations[0] += usize::from(common::check_monotone_freezing(&t, &c, rule).is_err());
        violations[1] += usize::from(common::check_initial_monotonicity(&mut rng, &t, &c, rule).is_err());
        violations[2] += usize::from(common::check_schedule_independence(&mut rng, &t, &c, rule).is_err());
        violations[4] += usize::from(common::check_round_bound(&t, &c, rule).is_err());

        let r = rng.random_range(1..=8);
        let n = rng.random_range(2 * r + 2..=200);
        let ring = Topology::new(TopologySpec::ring(n, r)).unwrap();
        let config: Configuration = common::random_config(&mut rng, n);
        violations[3] += usize::from(common::check_wall_persistence(&ring, &config).is_err());
    }
    verdict(
        violations.iter().all(|&v| v == 0),
        format!(
            "{instances} instances each; violations (freezing, initial-set, schedule, wall, rounds) = {violations:?}"
        ),
    )
}

/// The binary gives identical counts for every worker count.
fn criterion_11() -> Verdict {
    let invocations: [&[&str]; 2] = [
        &["estimate", "--target", "pW", "--family", "rwheel", "--n", "2000", "--r", "4", "--p", "0.3", "--trials", "5000", "--seed", "42"],
        &["estimate", "--target", "pR", "--family", "ring", "--n", "1000", "--r", "3", "--p", "0.35", "--trials", "5000", "--seed", "7"],
    ];
    let mut detail = Vec::new();
    let mut ok = true;
    for args in invocations {
        let counts: Vec<u64> = ["1", "4", "16"]
            .iter()
            .map(|t| {
                let out = Command::new(env!("CARGO_BIN_EXE_bootperc"))
                    .env("BOOTPERC_THREADS", t)
                    .env("BOOTPERC_CI", "1")
                    .args(args)
                    .output()
                    .unwrap();
                assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
                let text = String::from_utf8(out.stdout).unwrap();
                let rec: serde_json::Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
                rec["results"]["successes"].as_u64().unwrap()
            })
            .collect();
        ok &= counts.iter().all(|&c| c == counts[0]);
        detail.push(format!("{counts:?}"));
    }
    verdict(ok, format!("successes at 1/4/16 threads: {}", detail.join(", ")))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "exact-vs-MC calibration", criterion_1, Duration::from_secs(300)),
        (2, "ring sandwich, exact", criterion_2, Duration::from_secs(120)),
        (3, "T_r words are spreading", criterion_3, Duration::from_secs(60)),
        (4, "T_r counting bound", criterion_4, Duration::from_secs(60)),
        (5, "wall measure bound", criterion_5, Duration::from_secs(600)),
        (6, "binomial tail domination", criterion_6, Duration::from_secs(600)),
        (7, "three-state process", criterion_7, Duration::from_secs(1800)),
        (8, "reset-chain expectation", criterion_8, Duration::from_secs(600)),
        (9, "ring majority trend in r", criterion_9, Duration::from_secs(1800)),
        (10, "dynamics property suite", criterion_10, Duration::from_secs(600)),
        (11, "thread-count reproducibility", criterion_11, Duration::from_secs(600)),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failures = 0;
    for (id, name, run, limit) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let passed = v.passed && elapsed <= limit;
        failures += usize::from(!passed);
        println!(
            "criterion {id:>2} {} {name}: {} [{:.1}s]",
            if passed { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
