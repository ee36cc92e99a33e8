//! Simulation and verification toolkit for directed linear preferential
//! attachment graphs.
//!
//! The crate covers the discrete graph generator ([`pa_graph`]), the
//! continuous-time embedding into switched birth-immigration processes
//! ([`bi_sbi`], [`embedding`]), closed-form and quadrature limit laws
//! ([`limits`]), Hill and tail-empirical-measure estimators ([`estimators`])
//! and the statistical test kernels used to check them ([`stats_tests`]).

pub mod bi_sbi;
pub mod census;
pub mod embedding;
pub mod error;
pub mod estimators;
pub mod exact_law;
pub mod limits;
pub mod pa_graph;
pub mod params;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod stats_tests;

pub use census::DegreeCensus;
pub use error::{Error, Result};
pub use pa_graph::{generate, new_graph, GraphState};
pub use params::{ModelParams, Side};
