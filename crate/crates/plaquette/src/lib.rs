//! Discrete path-integral machinery on oriented graphs, together with the
//! cosmological distance models and supernova fitting built on top of it.
//!
//! The library is organized around a small pipeline:
//!
//! 1. [`chain_complex`] represents an oriented graph with plaquettes as a
//!    two-dimensional chain complex and builds the integer boundary
//!    operators of the complex.
//! 2. [`scc`] assembles the quadratic-action ingredients from the boundary
//!    operators: the difference matrix `K = beta * d1 * d1^T` (a graph
//!    Laplacian), the relational source vector `J = alpha * d1 * e`, and the
//!    self-consistency residual `K v - (beta/alpha) J`.
//! 3. [`gaussian`] evaluates the Euclidean partition function restricted to
//!    the row space of `K`, per-mode outcome densities, the most-probable
//!    (classical) field, and a Monte-Carlo oracle for cross-checking.
//! 4. [`oscillator`] builds the discrete action matrix of two coupled
//!    oscillators on a time lattice and the ladder complexes whose
//!    Laplacians it reproduces.
//! 5. [`cosmology`] and [`supernova`] compute luminosity distances for the
//!    EdS, flat LCDM, and MORC-approx models and fit them to distance-modulus
//!    catalogs such as the Union2 compilation.
//!
//! With the default `parallel` feature the Monte-Carlo oracle and the
//! sum-of-squares objective fan out over rayon; every parallel entry point
//! has a sequential sibling that produces bit-identical results, so the
//! feature only affects wall-clock time.

pub mod chain_complex;
pub mod cosmology;
pub mod gaussian;
pub mod optimize;
pub mod oscillator;
pub mod scc;
pub mod supernova;

mod sum;

pub use chain_complex::{parse_graph, ChainComplex, GraphError, Link, Plaquette, SignedLink};
pub use cosmology::{
    distance_modulus, luminosity_distance, proper_distance, proper_distance_eds,
    regge_vacuum_action, CosmologyError, CosmologyModel, ModelKind,
};
pub use gaussian::{
    euclidean_action, mc_oracle_partition, mc_oracle_partition_seq, most_probable_field,
    outcome_probability, partition_function, partition_function_unrestricted, spectrum,
    ClassicalField, McEstimate, PartitionError, PartitionResult, Spectrum,
};
pub use oscillator::{
    ladder_complex, oscillator_k, oscillator_potential, OscillatorError, OscillatorParams,
};
pub use scc::{
    build_j, build_k, gauge_null_space, link_values_from_vertices, parse_link_values,
    parse_vertex_values, verify_scc, Actional, SccError,
};
pub use supernova::{
    default_bounds, fit_model, log_distance, log_spaced_redshifts, loglog_regression, model_sse,
    model_sse_seq, parse_union2, synthetic_records, FitConfig, FitError, FitResult, RegressionFit,
    SupernovaRecord, Union2Data,
};

/// Relative threshold below which an eigenvalue of a difference matrix is
/// classified as an exact zero (a gauge mode): `|lambda| < RTOL * lambda_max`.
///
/// The gauge/row-space split is analytically exact for Laplacians built from
/// integer boundary operators; the threshold only absorbs floating-point
/// round-off from the eigensolver.
pub const ZERO_EIGENVALUE_RTOL: f64 = 1e-10;
