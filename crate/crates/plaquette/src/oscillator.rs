//! Discrete action matrix for two coupled oscillators on a time lattice,
//! and the ladder complexes whose Laplacians it reproduces.
//!
//! Each oscillator occupies one chain of `n_time` vertices; the two chains
//! are joined by one rung per time vertex. The kinetic term is the
//! forward-difference square summed over chain links, the potential acts at
//! every time vertex with full weight (free temporal endpoints, no periodic
//! wrap), and the cross coupling connects equal-time vertices. At
//! `m/dt = k*dt = -k12*dt = 1` the matrix equals the ladder-complex
//! Laplacian entry for entry, for any number of time vertices.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::chain_complex::{ChainComplex, Link, Plaquette, SignedLink};

#[derive(Debug, Error)]
pub enum OscillatorError {
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("self-coupling k must be positive, got {0}")]
    NonPositiveSpring(f64),
    #[error("cross-coupling k12 must be negative, got {0}")]
    NonNegativeCross(f64),
    #[error("time step must be positive, got {0}")]
    NonPositiveTimeStep(f64),
    #[error("need at least 2 time vertices, got {0}")]
    TooFewTimeVertices(usize),
    #[error("self-coupling k = {k} must exceed |k12| = {k12_abs} for a physical spring layout")]
    CouplingTooStrong { k: f64, k12_abs: f64 },
}

/// Parameters of the two-oscillator lattice.
///
/// The constraint `k > |k12|` keeps the three-spring decomposition
/// `k = k1 + k3`, `k12 = -k3` realizable with positive spring constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub mass: f64,
    pub spring_k: f64,
    pub cross_k: f64,
    pub dt: f64,
    pub n_time: usize,
}

impl OscillatorParams {
    pub fn new(
        mass: f64,
        spring_k: f64,
        cross_k: f64,
        dt: f64,
        n_time: usize,
    ) -> Result<Self, OscillatorError> {
        if !(mass > 0.0) {
            return Err(OscillatorError::NonPositiveMass(mass));
        }
        if !(spring_k > 0.0) {
            return Err(OscillatorError::NonPositiveSpring(spring_k));
        }
        if !(cross_k < 0.0) {
            return Err(OscillatorError::NonNegativeCross(cross_k));
        }
        if !(dt > 0.0) {
            return Err(OscillatorError::NonPositiveTimeStep(dt));
        }
        if n_time < 2 {
            return Err(OscillatorError::TooFewTimeVertices(n_time));
        }
        if spring_k <= cross_k.abs() {
            return Err(OscillatorError::CouplingTooStrong {
                k: spring_k,
                k12_abs: cross_k.abs(),
            });
        }
        Ok(Self {
            mass,
            spring_k,
            cross_k,
            dt,
            n_time,
        })
    }
}

/// Coupled-oscillator potential `k/2 q1^2 + k/2 q2^2 + k12 q1 q2`.
pub fn oscillator_potential(q1: f64, q2: f64, params: &OscillatorParams) -> f64 {
    0.5 * params.spring_k * q1 * q1 + 0.5 * params.spring_k * q2 * q2
        + params.cross_k * q1 * q2
}

/// The `2 n_time x 2 n_time` difference matrix of the discretized Euclidean
/// action. Temporal blocks are tridiagonal with `-m/dt` off the diagonal and
/// `m/dt + k dt` (endpoints) or `2m/dt + k dt` (interior) on it; equal-time
/// cross-oscillator entries are `k12 dt`.
pub fn oscillator_k(params: &OscillatorParams) -> DMatrix<f64> {
    let n = params.n_time;
    let kinetic = params.mass / params.dt;
    let potential = params.spring_k * params.dt;
    let cross = params.cross_k * params.dt;
    let mut k = DMatrix::zeros(2 * n, 2 * n);
    for osc in 0..2 {
        let base = osc * n;
        for t in 0..n {
            let endpoints = if t == 0 || t == n - 1 { 1.0 } else { 2.0 };
            k[(base + t, base + t)] = endpoints * kinetic + potential;
            if t + 1 < n {
                k[(base + t, base + t + 1)] = -kinetic;
                k[(base + t + 1, base + t)] = -kinetic;
            }
        }
    }
    for t in 0..n {
        k[(t, n + t)] = cross;
        k[(n + t, t)] = cross;
    }
    k
}

/// Two parallel chains of `n_time` vertices with one rung per time vertex
/// and one square plaquette per time step.
///
/// Vertices `0..n_time` form the first chain, `n_time..2*n_time` the
/// second. Links are the first-chain links `a1..`, then the second-chain
/// links `b1..`, then the rungs `r1..`. Plaquette `p_i` is oriented
/// `+r_i +b_i -r_{i+1} -a_i`, matching the orientation of the six-vertex
/// example (which this construction reproduces, up to link ordering, at
/// `n_time = 3`).
pub fn ladder_complex(n_time: usize) -> Result<ChainComplex, OscillatorError> {
    if n_time < 2 {
        return Err(OscillatorError::TooFewTimeVertices(n_time));
    }
    let n = n_time;
    let mut links = Vec::with_capacity(3 * n - 2);
    for i in 0..n - 1 {
        links.push(Link {
            label: format!("a{}", i + 1),
            tail: i,
            head: i + 1,
        });
    }
    for i in 0..n - 1 {
        links.push(Link {
            label: format!("b{}", i + 1),
            tail: n + i,
            head: n + i + 1,
        });
    }
    for i in 0..n {
        links.push(Link {
            label: format!("r{}", i + 1),
            tail: i,
            head: n + i,
        });
    }
    let chain_a = |i: usize| i;
    let chain_b = |i: usize| (n - 1) + i;
    let rung = |i: usize| 2 * (n - 1) + i;
    let plaquettes = (0..n - 1)
        .map(|i| Plaquette {
            label: format!("p{}", i + 1),
            chain: vec![
                SignedLink {
                    link: rung(i),
                    sign: 1,
                },
                SignedLink {
                    link: chain_b(i),
                    sign: 1,
                },
                SignedLink {
                    link: rung(i + 1),
                    sign: -1,
                },
                SignedLink {
                    link: chain_a(i),
                    sign: -1,
                },
            ],
        })
        .collect();
    Ok(ChainComplex::new(2 * n, links, plaquettes).expect("ladder construction is valid"))
}
