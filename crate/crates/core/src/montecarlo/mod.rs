//! Monte Carlo estimation with reproducible per-trial seeding.
//!
//! Trial `i` of a plan draws its random stream from
//! `derive_trial_seed(master_seed, i)` and nothing else, and results are
//! aggregated as integer counts. A plan therefore yields the same record
//! regardless of how many worker threads run it or in which order.

mod bisect;
mod estimate;
mod scan;
mod seed;
mod sims;
mod verify;
mod wilson;

pub use bisect::{bisect_response, bisect_threshold, BisectOutcome, SURROGATE_CAVEAT};
pub use estimate::{
    run_estimate, run_estimate_with_threads, trial_outcomes, EstimateRecord, Target, TrialPlan,
};
pub use scan::{scan_cell_plan, scan_grid, SizeRule, DEFAULT_SIZE_FACTOR};
pub use seed::{derive_trial_seed, trial_rng, uniform_below, unit_draw, TrialRng};
pub use sims::{
    markov_chain_estimate, ring_wall_events, three_state_segment_estimate, MeanEstimate,
    WallEventCounts,
};
pub use verify::{
    verify_lemma, Check, LemmaId, Method, Relation, VerificationReport, VerifyParams,
};
pub use wilson::{wilson_interval, z_score};

/// Runs `f` on a dedicated pool of `threads` workers, or on the global
/// pool when `threads` is `None`.
pub(crate) fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
