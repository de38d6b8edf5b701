//! Rainbow greedy matchings on randomly colored sparse random graphs.
//!
//! * [`colored_graph`]: G(n, m) with uniform edge colors and O(1) deletion
//!   and sampling.
//! * [`engines`]: GREEDY and MODIFIED GREEDY, plus result verification.
//! * [`ode`]: fluid-limit ODEs, their closed forms and stopping times.
//! * [`asymptotics`]: regime brackets for the GREEDY stopping time.
//! * [`experiment`]: Monte Carlo grids, the comparison table, conjecture
//!   checks and report writers.
//!
//! Theory code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the simulation side uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons also reject NaN

pub mod asymptotics;
pub mod colored_graph;
pub mod engines;
pub mod experiment;
pub mod ode;
pub mod rng;
pub mod scalar;
pub mod sparse_set;

pub use colored_graph::{Color, ColoredGraph, Edge, EdgeId, GraphError, VertexId};
pub use engines::{run, run_greedy, run_modified_greedy, verify_result, Algorithm, MatchingResult, TrajectoryPoint};
pub use scalar::Scalar;

pub type TheoryParams = ode::TheoryParams<f64>;
pub type OdeTrajectory = ode::OdeTrajectory<f64>;
pub type ModifiedSolution = ode::ModifiedSolution<f64>;
pub type RootLocation = ode::RootLocation<f64>;
pub type Bracket = asymptotics::Bracket<f64>;
pub type Theorem1Prediction = asymptotics::Theorem1Prediction<f64>;

pub type TheoryParams32 = ode::TheoryParams<f32>;
pub type OdeTrajectory32 = ode::OdeTrajectory<f32>;
pub type Bracket32 = asymptotics::Bracket<f32>;
