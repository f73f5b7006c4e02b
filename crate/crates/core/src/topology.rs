//! Ring `C_n(r)` and r-wheel `u * C_n(r)` topologies.
//!
//! Ring positions are the dense ids `0..n` with modular arithmetic. The hub
//! of an r-wheel, when present, is the extra id `n`. Neighborhoods are
//! computed on demand; no edge list is ever stored.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ring,
    #[serde(rename = "rwheel")]
    RWheel,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Ring => f.write_str("ring"),
            Family::RWheel => f.write_str("rwheel"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ring" => Ok(Family::Ring),
            "rwheel" | "r-wheel" | "wheel" => Ok(Family::RWheel),
            other => Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
        }
    }
}

/// Activation rule: strict majority needs `ceil((deg+1)/2)` active
/// neighbors, simple majority needs `ceil(deg/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Strict,
    Simple,
}

impl Rule {
    pub fn threshold(self, degree: usize) -> usize {
        match self {
            Rule::Strict => (degree + 2) / 2,
            Rule::Simple => degree.div_ceil(2),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Strict => f.write_str("strict"),
            Rule::Simple => f.write_str("simple"),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(Rule::Strict),
            "simple" => Ok(Rule::Simple),
            other => Err(Error::InvalidParameter(format!("unknown rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TopologySpec {
    pub family: Family,
    pub n: usize,
    pub r: usize,
}

impl TopologySpec {
    pub fn new(family: Family, n: usize, r: usize) -> Self {
        TopologySpec { family, n, r }
    }

    pub fn ring(n: usize, r: usize) -> Self {
        Self::new(Family::Ring, n, r)
    }

    pub fn rwheel(n: usize, r: usize) -> Self {
        Self::new(Family::RWheel, n, r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 1 {
            return Err(Error::InvalidTopology(format!(
                "radius must satisfy r >= 1 (got r={})",
                self.r
            )));
        }
        if self.n <= 2 * self.r + 1 {
            return Err(Error::InvalidTopology(format!(
                "ring length must satisfy n > 2r+1 (got n={}, r={}, 2r+1={})",
                self.n,
                self.r,
                2 * self.r + 1
            )));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        match self.family {
            Family::Ring => self.n,
            Family::RWheel => self.n + 1,
        }
    }
}

/// A validated, immutable graph instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Topology {
    spec: TopologySpec,
}

pub fn build_topology(spec: TopologySpec) -> Result<Topology> {
    Topology::new(spec)
}

impl Topology {
    pub fn new(spec: TopologySpec) -> Result<Self> {
        spec.validate()?;
        Ok(Topology { spec })
    }

    pub fn spec(&self) -> TopologySpec {
        self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    /// Number of ring positions.
    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn r(&self) -> usize {
        self.spec.r
    }

    pub fn has_hub(&self) -> bool {
        self.spec.family == Family::RWheel
    }

    /// Id of the universal vertex, if present.
    pub fn hub(&self) -> Option<usize> {
        self.has_hub().then_some(self.spec.n)
    }

    pub fn vertex_count(&self) -> usize {
        self.spec.vertex_count()
    }

    pub fn is_hub(&self, v: usize) -> bool {
        self.hub() == Some(v)
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                count: self.vertex_count(),
            })
        }
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        Ok(if self.is_hub(v) {
            self.spec.n
        } else if self.has_hub() {
            2 * self.spec.r + 1
        } else {
            2 * self.spec.r
        })
    }

    /// Neighbors in ascending offset order (`-r..-1, +1..+r`), hub last.
    /// The hub's neighbors are the ring positions in increasing order.
    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>> {
        self.check(v)?;
        if self.is_hub(v) {
            return Ok((0..self.spec.n).collect());
        }
        let (n, r) = (self.spec.n, self.spec.r);
        let mut out = Vec::with_capacity(2 * r + 1);
        out.extend((1..=r).rev().map(|d| (v + n - d) % n));
        out.extend((1..=r).map(|d| (v + d) % n));
        out.extend(self.hub());
        Ok(out)
    }

    pub fn activation_threshold(&self, v: usize, rule: Rule) -> Result<usize> {
        Ok(rule.threshold(self.degree(v)?))
    }

    /// Threshold shared by every ring position.
    pub fn ring_threshold(&self, rule: Rule) -> usize {
        let deg = if self.has_hub() {
            2 * self.spec.r + 1
        } else {
            2 * self.spec.r
        };
        rule.threshold(deg)
    }
}
