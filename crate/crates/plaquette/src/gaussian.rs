//! Row-space-restricted Euclidean partition function, outcome densities,
//! and the most-probable (classical) field.
//!
//! A difference matrix built from a chain complex is singular: the all-ones
//! direction is a gauge mode, so the naive Gaussian integral with `det K`
//! in the denominator diverges. The integral is therefore restricted to the
//! row space of `K`. In the eigenbasis, with eigenvalues `a_j > 0` and
//! source components `jt_j`,
//!
//! ```text
//! Z = sqrt( (2 pi)^m / prod_j a_j ) * prod_j exp( jt_j^2 / (2 a_j) )
//! ```
//!
//! over the `m` row-space modes. [`partition_function`] evaluates both the
//! direct product and a pure log-space path (for overflow safety);
//! [`mc_oracle_partition`] estimates the same integral by importance
//! sampling so the closed form can be cross-checked; and
//! [`most_probable_field`] returns the minimum-norm solution of
//! `K Q0 = J`, the classical field equation, which is defined up to the
//! gauge family `Q0 + c * 1`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::scc::Actional;
use crate::ZERO_EIGENVALUE_RTOL;

/// Relative size of a source component along a gauge mode beyond which the
/// source is rejected as inconsistent (not in the row space of `K`).
const ROW_SPACE_RTOL: f64 = 1e-8;

/// Minimum sample count accepted by the Monte-Carlo oracle.
pub const MC_MIN_SAMPLES: u64 = 10_000;

/// Samples per deterministic RNG substream. Each chunk draws from its own
/// counter-indexed stream, so estimates do not depend on thread count.
const MC_CHUNK: u64 = 1 << 16;

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("matrix has a significant negative eigenvalue {eigenvalue:e}; not PSD")]
    NegativeEigenvalue { eigenvalue: f64 },
    #[error(
        "source has component {component:e} along a gauge mode (tolerance {tolerance:e}); \
         it does not lie in the row space of K"
    )]
    SourceOutsideRowSpace { component: f64, tolerance: f64 },
    #[error("dimension mismatch: K is {matrix}x{matrix} but J has length {source}")]
    DimensionMismatch { matrix: usize, source: usize },
    #[error("mode {mode} is a gauge (zero-eigenvalue) mode; its outcome density is undefined")]
    GaugeMode { mode: usize },
    #[error("mode {mode} out of range: the spectrum has {count} modes")]
    ModeOutOfRange { mode: usize, count: usize },
    #[error(
        "difference matrix is singular (gauge modes present); the unrestricted \
         Gaussian integral diverges, use the row-space-restricted form"
    )]
    SingularDifferenceMatrix,
    #[error("Monte-Carlo oracle needs at least {minimum} samples, got {samples}")]
    TooFewSamples { samples: u64, minimum: u64 },
}

/// Eigendecomposition of a difference matrix with the gauge (null) modes
/// separated from the row-space modes.
///
/// Eigenvalues are sorted descending, so gauge modes sit at the end.
/// `basis` holds the orthonormal eigenvectors as columns, aligned with
/// `eigenvalues`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub basis: DMatrix<f64>,
    pub row_modes: Vec<usize>,
    pub null_modes: Vec<usize>,
}

impl Spectrum {
    /// Coordinates of a vertex-space vector in the eigenbasis.
    pub fn mode_coordinates(&self, v: &DVector<f64>) -> DVector<f64> {
        self.basis.transpose() * v
    }

    /// Maps eigenbasis coordinates back to vertex space. The result depends
    /// on the eigenbasis sign/ordering conventions of the decomposition, so
    /// treat it as a convenience for reporting, not an invariant quantity.
    pub fn vertex_coordinates(&self, modes: &DVector<f64>) -> DVector<f64> {
        &self.basis * modes
    }
}

/// Full eigendecomposition of a symmetric PSD matrix with row-space/gauge
/// separation. Fails on non-finite entries, asymmetry, or a significant
/// negative eigenvalue.
pub fn spectrum(k: &DMatrix<f64>) -> Result<Spectrum, PartitionError> {
    if k.iter().any(|x| !x.is_finite()) {
        return Err(PartitionError::NonFinite);
    }
    let scale = k.amax();
    let deviation = (k - k.transpose()).amax();
    if deviation > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(PartitionError::NotSymmetric { deviation });
    }
    let eigen = k.clone().symmetric_eigen();
    let n = eigen.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eigen.eigenvalues[j]
            .partial_cmp(&eigen.eigenvalues[i])
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let basis = DMatrix::from_fn(n, n, |r, c| eigen.eigenvectors[(r, order[c])]);
    let lambda_max = eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let threshold = ZERO_EIGENVALUE_RTOL * lambda_max;
    let mut row_modes = Vec::new();
    let mut null_modes = Vec::new();
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        if lambda_max == 0.0 || lambda.abs() < threshold {
            null_modes.push(i);
        } else if lambda > 0.0 {
            row_modes.push(i);
        } else {
            return Err(PartitionError::NegativeEigenvalue { eigenvalue: lambda });
        }
    }
    Ok(Spectrum {
        eigenvalues,
        basis,
        row_modes,
        null_modes,
    })
}

/// One row-space mode's share of the partition function.
#[derive(Debug, Clone, Copy)]
pub struct ModeTerm {
    /// Mode index into the spectrum (descending eigenvalue order).
    pub mode: usize,
    pub eigenvalue: f64,
    /// Source component in the eigenbasis.
    pub source_component: f64,
    /// `ln` of this mode's factor: `0.5 ln(2 pi / a) + jt^2 / (2 a)`.
    pub log_weight: f64,
}

/// The partition function with its per-mode breakdown. `z` is computed by
/// direct multiplication, `log_z` purely in log space; the two agree to
/// round-off whenever `z` is representable.
#[derive(Debug, Clone)]
pub struct PartitionResult {
    pub z: f64,
    pub log_z: f64,
    pub modes: Vec<ModeTerm>,
}

struct RowSpaceView {
    spectrum: Spectrum,
    source_modes: DVector<f64>,
}

/// Decomposes the actional in the eigenbasis and enforces the actional
/// invariant that the source lies in the row space.
fn row_space_view(actional: &Actional) -> Result<RowSpaceView, PartitionError> {
    if actional.j.len() != actional.k.nrows() {
        return Err(PartitionError::DimensionMismatch {
            matrix: actional.k.nrows(),
            source: actional.j.len(),
        });
    }
    let spectrum = spectrum(&actional.k)?;
    let source_modes = spectrum.mode_coordinates(&actional.j);
    let tolerance = ROW_SPACE_RTOL * actional.j.norm();
    for &mode in &spectrum.null_modes {
        let component = source_modes[mode];
        if component.abs() > tolerance {
            return Err(PartitionError::SourceOutsideRowSpace {
                component,
                tolerance,
            });
        }
    }
    Ok(RowSpaceView {
        spectrum,
        source_modes,
    })
}

/// Evaluates the row-space-restricted Gaussian partition function.
pub fn partition_function(actional: &Actional) -> Result<PartitionResult, PartitionError> {
    let view = row_space_view(actional)?;
    let mut z = 1.0f64;
    let mut log_z = 0.0f64;
    let mut modes = Vec::with_capacity(view.spectrum.row_modes.len());
    for &mode in &view.spectrum.row_modes {
        let a = view.spectrum.eigenvalues[mode];
        let jt = view.source_modes[mode];
        let log_weight = 0.5 * (std::f64::consts::TAU / a).ln() + jt * jt / (2.0 * a);
        z *= (std::f64::consts::TAU / a).sqrt() * (jt * jt / (2.0 * a)).exp();
        log_z += log_weight;
        modes.push(ModeTerm {
            mode,
            eigenvalue: a,
            source_component: jt,
            log_weight,
        });
    }
    Ok(PartitionResult { z, log_z, modes })
}

/// The unrestricted Gaussian integral with `det K` in the denominator.
///
/// For difference matrices built from a chain complex this always fails
/// with [`PartitionError::SingularDifferenceMatrix`]: the gauge mode makes
/// `K` singular, which is exactly why the primary computation restricts to
/// the row space. Kept for nonsingular inputs and as the documented error
/// path.
pub fn partition_function_unrestricted(actional: &Actional) -> Result<f64, PartitionError> {
    let view = row_space_view(actional)?;
    if !view.spectrum.null_modes.is_empty() {
        return Err(PartitionError::SingularDifferenceMatrix);
    }
    let mut z = 1.0f64;
    for &mode in &view.spectrum.row_modes {
        let a = view.spectrum.eigenvalues[mode];
        let jt = view.source_modes[mode];
        z *= (std::f64::consts::TAU / a).sqrt() * (jt * jt / (2.0 * a)).exp();
    }
    Ok(z)
}

/// Density of the outcome `q0` for one row-space eigenmode:
/// a Gaussian with mean `jt/a` and variance `1/a`,
/// `sqrt(a/2pi) exp(-q0^2 a/2 + jt q0 - jt^2/(2a))`.
///
/// `mode` indexes the spectrum in descending eigenvalue order; asking for a
/// gauge mode is an error (the action is flat along it).
pub fn outcome_probability(
    actional: &Actional,
    mode: usize,
    q0: f64,
) -> Result<f64, PartitionError> {
    let view = row_space_view(actional)?;
    let count = view.spectrum.eigenvalues.len();
    if mode >= count {
        return Err(PartitionError::ModeOutOfRange { mode, count });
    }
    if view.spectrum.null_modes.contains(&mode) {
        return Err(PartitionError::GaugeMode { mode });
    }
    let a = view.spectrum.eigenvalues[mode];
    let jt = view.source_modes[mode];
    Ok((a / std::f64::consts::TAU).sqrt()
        * (-0.5 * q0 * q0 * a + jt * q0 - jt * jt / (2.0 * a)).exp())
}

/// The most-probable field: the minimum-norm solution of `K Q0 = J`.
#[derive(Debug, Clone)]
pub struct ClassicalField {
    /// Solution with zero component along every gauge mode.
    pub q0: DVector<f64>,
    /// Dimension of the gauge family: any `q0 + c1 n1 + c2 n2 + ...` over
    /// the null basis solves the same equation. One for a connected graph
    /// (the family `Q0 + c * 1`).
    pub gauge_dim: usize,
}

/// Solves the classical field equation mode-wise (`qt = jt / a` on the row
/// space, zero along the gauge modes).
pub fn most_probable_field(actional: &Actional) -> Result<ClassicalField, PartitionError> {
    let view = row_space_view(actional)?;
    let n = actional.k.nrows();
    let mut mode_solution = DVector::zeros(n);
    for &mode in &view.spectrum.row_modes {
        mode_solution[mode] = view.source_modes[mode] / view.spectrum.eigenvalues[mode];
    }
    Ok(ClassicalField {
        q0: view.spectrum.vertex_coordinates(&mode_solution),
        gauge_dim: view.spectrum.null_modes.len(),
    })
}

/// Euclidean action of a field configuration: `q.K.q/2 - j.q`.
pub fn euclidean_action(k: &DMatrix<f64>, j: &DVector<f64>, q: &DVector<f64>) -> f64 {
    0.5 * q.dot(&(k * q)) - j.dot(q)
}

/// Importance-sampled Monte-Carlo estimate of the row-space integral.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

struct McSetup {
    /// Per-row-mode proposal widths `1/sqrt(a)`.
    sigmas: Vec<f64>,
    /// Per-row-mode source components.
    source: Vec<f64>,
    /// `prod sqrt(2 pi / a)`: the proposal normalization.
    prefactor: f64,
}

fn mc_setup(actional: &Actional) -> Result<McSetup, PartitionError> {
    let view = row_space_view(actional)?;
    let mut sigmas = Vec::with_capacity(view.spectrum.row_modes.len());
    let mut source = Vec::with_capacity(view.spectrum.row_modes.len());
    let mut log_prefactor = 0.0f64;
    for &mode in &view.spectrum.row_modes {
        let a = view.spectrum.eigenvalues[mode];
        sigmas.push(1.0 / a.sqrt());
        source.push(view.source_modes[mode]);
        log_prefactor += 0.5 * (std::f64::consts::TAU / a).ln();
    }
    Ok(McSetup {
        sigmas,
        source,
        prefactor: log_prefactor.exp(),
    })
}

/// Accumulates one chunk's importance weights on its own RNG stream.
/// Sampling each mode from `N(0, 1/a)` leaves the weight `exp(sum jt q)`,
/// whose expectation is the product of `exp(jt^2/(2a))` factors.
fn mc_chunk(setup: &McSetup, seed: u64, chunk: u64, count: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..count {
        let mut exponent = 0.0f64;
        for (sigma, jt) in setup.sigmas.iter().zip(&setup.source) {
            let q: f64 = sigma * StandardNormal.sample(&mut rng);
            exponent += jt * q;
        }
        let w = exponent.exp();
        sum += w;
        sum_sq += w * w;
    }
    (sum, sum_sq)
}

fn mc_assemble(setup: &McSetup, partials: &[(f64, f64)], samples: u64) -> McEstimate {
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for &(s, ss) in partials {
        sum += s;
        sum_sq += ss;
    }
    let n = samples as f64;
    let mean = sum / n;
    let variance = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    McEstimate {
        estimate: setup.prefactor * mean,
        std_error: setup.prefactor * (variance / n).sqrt(),
        samples,
    }
}

fn mc_chunk_counts(samples: u64) -> impl Iterator<Item = (u64, u64)> {
    let chunks = samples.div_ceil(MC_CHUNK);
    (0..chunks).map(move |c| {
        let start = c * MC_CHUNK;
        (c, MC_CHUNK.min(samples - start))
    })
}

/// Monte-Carlo oracle for the partition function. Deterministic for a fixed
/// seed: samples are drawn from counter-indexed RNG substreams and reduced
/// in a fixed order, so the estimate is bit-identical whether it runs
/// sequentially or data-parallel.
///
/// With the `parallel` feature the chunks fan out over rayon; see
/// [`mc_oracle_partition_seq`] for the always-sequential reference path.
pub fn mc_oracle_partition(
    actional: &Actional,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, PartitionError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if samples < MC_MIN_SAMPLES {
            return Err(PartitionError::TooFewSamples {
                samples,
                minimum: MC_MIN_SAMPLES,
            });
        }
        let setup = mc_setup(actional)?;
        let chunks: Vec<(u64, u64)> = mc_chunk_counts(samples).collect();
        let partials: Vec<(f64, f64)> = chunks
            .par_iter()
            .map(|&(chunk, count)| mc_chunk(&setup, seed, chunk, count))
            .collect();
        Ok(mc_assemble(&setup, &partials, samples))
    }
    #[cfg(not(feature = "parallel"))]
    {
        mc_oracle_partition_seq(actional, samples, seed)
    }
}

/// Sequential reference implementation of [`mc_oracle_partition`]; produces
/// bit-identical estimates.
pub fn mc_oracle_partition_seq(
    actional: &Actional,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, PartitionError> {
    if samples < MC_MIN_SAMPLES {
        return Err(PartitionError::TooFewSamples {
            samples,
            minimum: MC_MIN_SAMPLES,
        });
    }
    let setup = mc_setup(actional)?;
    let partials: Vec<(f64, f64)> = mc_chunk_counts(samples)
        .map(|(chunk, count)| mc_chunk(&setup, seed, chunk, count))
        .collect();
    Ok(mc_assemble(&setup, &partials, samples))
}
