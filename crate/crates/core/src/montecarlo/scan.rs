use super::estimate::{run_estimate_with_threads, EstimateRecord, TrialPlan};
use super::seed::derive_trial_seed;
use crate::error::{Error, Result};

/// Default ring length per unit radius in threshold scans (`n = 2000 r`).
pub const DEFAULT_SIZE_FACTOR: usize = 2000;

/// How the ring length of each scan cell is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeRule {
    /// Keep the base plan's `n`.
    Fixed,
    /// `n = factor * r`.
    PerRadius(usize),
}

const CELL_DOMAIN: u64 = 0x6a09_e667_f3bc_c909;

/// The plan run for cell `index` of a scan.
pub fn scan_cell_plan(base: &TrialPlan, p: f64, r: usize, index: usize, size: SizeRule) -> TrialPlan {
    let mut plan = *base;
    plan.p = p;
    plan.topology.r = r;
    if let SizeRule::PerRadius(factor) = size {
        plan.topology.n = factor * r;
    }
    plan.master_seed = derive_trial_seed(base.master_seed ^ CELL_DOMAIN, index as u64);
    plan
}

/// One record per `(p, r)` pair, `p`-major. Each cell's seed is derived
/// from the base seed and the cell index.
pub fn scan_grid(
    base: &TrialPlan,
    p_values: &[f64],
    r_values: &[usize],
    size: SizeRule,
    threads: Option<usize>,
) -> Result<Vec<EstimateRecord>> {
    let mut out = Vec::with_capacity(p_values.len() * r_values.len());
    for &p in p_values {
        for &r in r_values {
            let index = out.len();
            let plan = scan_cell_plan(base, p, r, index, size);
            let rec = run_estimate_with_threads(&plan, threads).map_err(|e| Error::Cell {
                index,
                p,
                r,
                source: Box::new(e),
            })?;
            out.push(rec);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{run_estimate, Target};
    use crate::topology::{Rule, TopologySpec};

    fn base(spec: TopologySpec, target: Target) -> TrialPlan {
        TrialPlan::new(spec, Rule::Strict, 0.3, target, 2000, 99)
    }

    #[test]
    fn single_cell_is_run_estimate() {
        let b = base(TopologySpec::ring(200, 2), Target::RingMajority);
        let grid = scan_grid(&b, &[0.4], &[3], SizeRule::Fixed, None).unwrap();
        assert_eq!(grid.len(), 1);
        let direct = run_estimate(&scan_cell_plan(&b, 0.4, 3, 0, SizeRule::Fixed)).unwrap();
        assert!(grid[0].same_payload(&direct));
        assert_eq!(grid[0].plan.topology.r, 3);
    }

    #[test]
    fn monotone_in_p_on_wheel() {
        let b = base(TopologySpec::rwheel(400, 2), Target::Percolation);
        let grid = scan_grid(&b, &[0.1, 0.9], &[2], SizeRule::Fixed, None).unwrap();
        assert!(grid[0].estimate < grid[1].estimate);
    }

    #[test]
    fn cell_errors_carry_identity() {
        let b = base(TopologySpec::ring(10, 2), Target::Percolation);
        let err = scan_grid(&b, &[0.5], &[2, 5], SizeRule::Fixed, None).unwrap_err();
        assert!(matches!(err, Error::Cell { index: 1, r: 5, .. }), "{err}");
    }

    #[test]
    fn per_radius_sizes() {
        let b = base(TopologySpec::ring(10, 1), Target::RingMajority);
        let plan = scan_cell_plan(&b, 0.3, 4, 2, SizeRule::PerRadius(DEFAULT_SIZE_FACTOR));
        assert_eq!(plan.topology.n, 8000);
        assert_ne!(plan.master_seed, b.master_seed);
    }
}
