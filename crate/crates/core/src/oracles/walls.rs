use crate::dynamics::Configuration;
use crate::error::{Error, Result};
use crate::topology::Topology;

/// Distance from vertex 0 to the nearest wall on each side; `None` when
/// no wall exists at any distance below `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WallDistances {
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// A wall at offset `l` to the right is `σ_l = 1` followed by `r+1`
/// passive cells `σ_{l+1..=l+r+1}`; to the left it is the mirror image.
pub fn wall_distances(topology: &Topology, config: &Configuration) -> Result<WallDistances> {
    if topology.has_hub() {
        return Err(Error::InvalidTopology(
            "wall distances are defined on rings only".into(),
        ));
    }
    let n = topology.n();
    if config.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: config.len(),
        });
    }
    Ok(wall_distances_in(&config.to_bytes(), topology.r()))
}

/// Wall distances for raw ring states (`1` = active) around position 0.
pub fn wall_distances_in(states: &[u8], r: usize) -> WallDistances {
    let n = states.len() as isize;
    let at = |i: isize| states[i.rem_euclid(n) as usize] == 1;
    let find = |dir: isize| {
        (1..n).find(|&l| at(dir * l) && (1..=r as isize + 1).all(|k| !at(dir * (l + k))))
    };
    WallDistances {
        left: find(-1).map(|l| l as usize),
        right: find(1).map(|l| l as usize),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_topology, TopologySpec};

    #[test]
    fn examples() {
        let t = build_topology(TopologySpec::ring(10, 1)).unwrap();
        let c: Configuration = "0100111100".parse().unwrap();
        let w = wall_distances(&t, &c).unwrap();
        assert_eq!(w.right, Some(1));
        assert_eq!(w.left, Some(6));

        let w = wall_distances(&t, &Configuration::ones(10)).unwrap();
        assert_eq!(w, WallDistances { left: None, right: None });
    }

    #[test]
    fn single_active_cell() {
        for r in 1..4 {
            let n = 12;
            let t = build_topology(TopologySpec::ring(n, r)).unwrap();
            for k in 1..=n - r - 2 {
                let mut c = Configuration::zeros(n);
                c.set(k, true);
                assert_eq!(wall_distances(&t, &c).unwrap().right, Some(k));
            }
        }
    }

    #[test]
    fn rejects_wheel() {
        let t = build_topology(TopologySpec::rwheel(10, 1)).unwrap();
        assert!(wall_distances(&t, &Configuration::zeros(11)).is_err());
    }
}
