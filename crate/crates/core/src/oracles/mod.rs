//! Exact, enumerative and closed-form computations used to check the
//! dynamics and the Monte Carlo estimators at small scale.
//!
//! Every function here is pure. Enumerations are bounded by the guards
//! below; pass [`CostPolicy::AcceptCost`] to lift them.

mod analytic;
mod blocks;
mod dyck;
mod exact;
mod numeric;
mod three_state;
mod walls;

pub use analytic::{
    binomial_tail, binomial_tail_exact, chernoff_bound, hitting_bound, markov_hitting_expectation,
    three_state_activation, ThreeStateActivation, ThreeStateParams,
};
pub use blocks::{
    classify_block, has_zero_run, mu_spreading_exact, mu_spreading_exact_with, mu_wall_exact,
    spreading_histogram, BlockClass, BlockWord,
};
pub use dyck::{catalan, enumerate_tr, enumerate_tr_with, is_member_tr, tr_lower_bound};
pub use exact::{
    enumerate_outcomes, enumerate_outcomes_with, exact_percolation_probability, mask_fixpoint,
    ExactOutcomes, WeightHistogram,
};
pub use numeric::{neumaier_sum, to_rational};
pub use three_state::{segment_fixpoint, segment_step, SiteState};
pub use walls::{wall_distances, wall_distances_in, WallDistances};

/// Largest radius for which `T_r` is enumerated word by word.
pub const MAX_TR_RADIUS: usize = 12;
/// Longest block for which `mu(S)` is computed by enumeration.
pub const MAX_SPREADING_LEN: usize = 24;
/// Largest vertex count for exact percolation enumeration.
pub const MAX_EXACT_VERTICES: usize = 22;

/// Whether enumeration guards apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostPolicy {
    #[default]
    Guarded,
    AcceptCost,
}

impl CostPolicy {
    pub fn is_override(self) -> bool {
        self == CostPolicy::AcceptCost
    }
}
