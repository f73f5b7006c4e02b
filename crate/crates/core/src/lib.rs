//! Strict and simple majority bootstrap percolation on rings `C_n(r)` and
//! r-wheels `u * C_n(r)`.
//!
//! * [`topology`] builds the graph families.
//! * [`dynamics`] runs the freezing threshold dynamics to its fixed point.
//! * [`oracles`] holds exact, enumerative and closed-form computations.
//! * [`montecarlo`] estimates probabilities with reproducible seeding.
//! * [`cli_io`] is the command-line front end and record format.

pub mod cli_io;
pub mod dynamics;
pub mod error;
pub mod montecarlo;
pub mod oracles;
pub mod topology;

pub use dynamics::{
    final_state_of, run_to_fixpoint, step_synchronous, Configuration, FixpointResult, Kernel,
    Schedule,
};
pub use error::{Error, Result};
pub use topology::{build_topology, Family, Rule, Topology, TopologySpec};
