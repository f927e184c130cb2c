//! Capacity, scheduling, and secure-rate analysis for full-duplex 1-2-1
//! mmWave relay networks.
//!
//! A 1-2-1 network models millimeter-wave communication between a source
//! (node `0`) and a destination (node `N+1`) assisted by `N` full-duplex
//! relays. A link carries data only while transmitter and receiver point
//! their beams at each other, so at any instant each relay transmits on at
//! most one link and receives on at most one link; the source and
//! destination may use up to `M` beams.
//!
//! The crate computes, for such networks:
//!
//! * the approximate capacity and its optimal link-activation schedule,
//!   via a linear program over link flows and activation times
//!   ([`builders`], [`simplex`]);
//! * the passive capacity: the best rate when every link activation time
//!   is capped by a per-link threshold, so passive (non-transmitting)
//!   users get a guaranteed fraction of interference-free time;
//! * closed-form lower bounds on the passive capacity with feasible
//!   activation certificates ([`bounds`]);
//! * explicit beam schedules realizing LP activation profiles, and
//!   constructive schedules built from edge- or vertex-disjoint path
//!   families ([`schedule`], [`disjoint`]);
//! * secure-rate reductions between the passive-user problem and
//!   wiretap-style secure communication ([`security`]);
//! * seeded Monte-Carlo sweeps over random networks ([`montecarlo`]).
//!
//! With the `parallel` feature (default) Monte-Carlo trials run on a
//! rayon pool; disabling it falls back to a sequential loop with
//! identical output.

pub mod bounds;
pub mod builders;
pub mod checker;
pub mod disjoint;
pub mod io;
pub mod lp;
pub mod model;
pub mod montecarlo;
pub mod paths;
pub mod schedule;
pub mod security;
pub mod simplex;
pub mod topology;

#[cfg(test)]
pub(crate) mod testnet;

pub use bounds::{bound_report, path_count_check, BoundReport, PathCountReport};
pub use builders::{approx_capacity, build_p1, build_p2, passive_capacity, P1Solution, P2Solution};
pub use disjoint::{count_edge_disjoint, count_vertex_disjoint, DisjointPathCertificate};
pub use lp::{LpProblem, LpSolution, LpStatus, Relation, VarLabel};
pub use model::{Link, Network, NodeId, Path, ThresholdMap};
pub use montecarlo::{run_trials, summarize, TrialConfig, TrialRecord, TrialSummary};
pub use paths::{decompose_flow, enumerate_paths, PathSet};
pub use schedule::{schedule_from_activations, BeamSchedule, NetworkState};
pub use security::{passive_to_secure, secure_to_passive, ReductionReport};
pub use simplex::solve;
pub use topology::{generate_random, generate_topology, CapacityDist, TopologySpec};

/// Feasibility tolerance: a point satisfies a constraint when the violation
/// is below this.
pub const FEAS_EPS: f64 = 1e-7;

/// Relative optimality tolerance of the LP solver.
pub const OPT_EPS: f64 = 1e-7;

/// Activation mass below this is treated as numerical dust and discarded.
pub const RESIDUE_EPS: f64 = 1e-9;
