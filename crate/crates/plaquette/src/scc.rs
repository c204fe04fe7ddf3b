//! The difference matrix, relational source vector, and the
//! self-consistency criterion that ties them together.
//!
//! From a chain complex the quadratic-action ingredients are
//!
//! * `K = beta * d1 * d1^T` — a (scaled) graph Laplacian, symmetric and
//!   positive semidefinite, with the all-ones vector in its null space;
//! * `J = alpha * d1 * e` — the source built relationally from link values
//!   `e`; every link leaves one vertex and enters another, so `sum(J) = 0`
//!   identically and `J` lies in the row space of `K`.
//!
//! When the link values themselves are vertex differences, `e = d1^T v`,
//! the two constructions collapse into the self-consistency identity
//! `K v = (beta/alpha) J`. [`verify_scc`] evaluates both sides and returns
//! the residual, which is zero up to round-off by construction.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::chain_complex::ChainComplex;
use crate::ZERO_EIGENVALUE_RTOL;

#[derive(Debug, Error)]
pub enum SccError {
    #[error("scale beta must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("scale alpha must be nonzero")]
    ZeroAlpha,
    #[error("expected {expected} link values, got {got}")]
    LinkCountMismatch { expected: usize, got: usize },
    #[error("expected {expected} vertex values, got {got}")]
    VertexCountMismatch { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("line {line}: unknown label '{label}'")]
    UnknownCsvLabel { line: usize, label: String },
    #[error("line {line}: duplicate value for '{label}'")]
    DuplicateCsvValue { line: usize, label: String },
    #[error("no value given for '{label}'")]
    MissingCsvValue { label: String },
}

/// The pair `(K, J)` with its scale factors: the topological description of
/// an experiment from which the partition function is computed.
#[derive(Debug, Clone)]
pub struct Actional {
    pub k: DMatrix<f64>,
    pub j: DVector<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl Actional {
    /// Assembles `K` and `J` from a complex and per-link values. The
    /// resulting pair satisfies every actional invariant by construction.
    pub fn from_complex(
        cc: &ChainComplex,
        link_values: &DVector<f64>,
        alpha: f64,
        beta: f64,
    ) -> Result<Self, SccError> {
        Ok(Self {
            k: build_k(cc, beta)?,
            j: build_j(cc, link_values, alpha)?,
            alpha,
            beta,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.k.nrows()
    }
}

/// `K = beta * d1 * d1^T`: the weighted graph Laplacian of the link
/// structure. Requires `beta > 0`.
pub fn build_k(cc: &ChainComplex, beta: f64) -> Result<DMatrix<f64>, SccError> {
    if !(beta > 0.0) {
        return Err(SccError::NonPositiveBeta(beta));
    }
    let d1 = cc.boundary_1().map(|x| x as f64);
    Ok(beta * &d1 * d1.transpose())
}

/// `J = alpha * d1 * e`: the divergence-free source assembled from link
/// values. `sum(J) = 0` holds up to floating-point summation because each
/// link contributes `+alpha e_i` at its head and `-alpha e_i` at its tail.
pub fn build_j(
    cc: &ChainComplex,
    link_values: &DVector<f64>,
    alpha: f64,
) -> Result<DVector<f64>, SccError> {
    if link_values.len() != cc.link_count() {
        return Err(SccError::LinkCountMismatch {
            expected: cc.link_count(),
            got: link_values.len(),
        });
    }
    let mut j = DVector::zeros(cc.vertex_count());
    for (i, link) in cc.links().iter().enumerate() {
        let flow = alpha * link_values[i];
        j[link.head] += flow;
        j[link.tail] -= flow;
    }
    Ok(j)
}

/// `e = d1^T v`: each link value is the head-vertex value minus the
/// tail-vertex value. A constant `v` yields `e = 0` (pure gauge).
pub fn link_values_from_vertices(
    cc: &ChainComplex,
    vertex_values: &DVector<f64>,
) -> Result<DVector<f64>, SccError> {
    if vertex_values.len() != cc.vertex_count() {
        return Err(SccError::VertexCountMismatch {
            expected: cc.vertex_count(),
            got: vertex_values.len(),
        });
    }
    Ok(DVector::from_fn(cc.link_count(), |i, _| {
        let link = &cc.links()[i];
        vertex_values[link.head] - vertex_values[link.tail]
    }))
}

/// Evaluates the self-consistency residual
/// `max_i |(K v)_i - (beta/alpha) J_i|` with `J` built from `e = d1^T v`.
/// Analytically zero; numerically at machine-epsilon scale.
pub fn verify_scc(
    cc: &ChainComplex,
    vertex_values: &DVector<f64>,
    alpha: f64,
    beta: f64,
) -> Result<f64, SccError> {
    if alpha == 0.0 {
        return Err(SccError::ZeroAlpha);
    }
    let k = build_k(cc, beta)?;
    let e = link_values_from_vertices(cc, vertex_values)?;
    let j = build_j(cc, &e, alpha)?;
    let lhs = k * vertex_values;
    let rhs = (beta / alpha) * j;
    Ok((lhs - rhs).amax())
}

/// Orthonormal basis of the zero-eigenvalue subspace of a symmetric PSD
/// matrix. Eigenvalues with `|lambda| < ZERO_EIGENVALUE_RTOL * lambda_max`
/// count as zero. For a connected graph the basis is one-dimensional,
/// spanned by the normalized all-ones vector; a disconnected graph gets one
/// dimension per component.
pub fn gauge_null_space(k: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let eigen = k.clone().symmetric_eigen();
    let lambda_max = eigen.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let threshold = if lambda_max > 0.0 {
        ZERO_EIGENVALUE_RTOL * lambda_max
    } else {
        // All-zero matrix: every direction is a gauge direction.
        f64::INFINITY
    };
    let mut basis = Vec::new();
    for (i, &lambda) in eigen.eigenvalues.iter().enumerate() {
        if lambda.abs() < threshold || lambda_max == 0.0 {
            basis.push(eigen.eigenvectors.column(i).into_owned());
        }
    }
    basis
}

/// Parses a link-value CSV (`link,value` header, one row per link label).
/// Every link of the complex must receive exactly one value; the returned
/// vector follows the complex's link order.
pub fn parse_link_values(cc: &ChainComplex, text: &str) -> Result<DVector<f64>, SccError> {
    let labels: Vec<&str> = cc.links().iter().map(|l| l.label.as_str()).collect();
    parse_labeled_csv(text, "link", &labels)
}

/// Parses a vertex-value CSV (`vertex,value` header). Vertex labels are
/// `v1..vN` or bare 1-based indices.
pub fn parse_vertex_values(cc: &ChainComplex, text: &str) -> Result<DVector<f64>, SccError> {
    let labels: Vec<String> = (1..=cc.vertex_count()).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    parse_labeled_csv(text, "vertex", &refs)
}

fn parse_labeled_csv(
    text: &str,
    key_column: &str,
    labels: &[&str],
) -> Result<DVector<f64>, SccError> {
    let mut values = vec![None; labels.len()];
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(SccError::Csv {
        line: 1,
        message: "empty file".into(),
    })?;
    let header_fields: Vec<&str> = header.split(',').map(str::trim).collect();
    if header_fields.len() != 2 || header_fields[0] != key_column || header_fields[1] != "value" {
        return Err(SccError::Csv {
            line: 1,
            message: format!("expected header '{key_column},value'"),
        });
    }
    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, value) = line.split_once(',').ok_or_else(|| SccError::Csv {
            line: line_no,
            message: "expected '<label>,<value>'".into(),
        })?;
        let label = label.trim();
        let index = labels
            .iter()
            .position(|&l| l == label || (key_column == "vertex" && format!("v{}", label.trim()) == l))
            .ok_or_else(|| SccError::UnknownCsvLabel {
                line: line_no,
                label: label.to_string(),
            })?;
        if values[index].is_some() {
            return Err(SccError::DuplicateCsvValue {
                line: line_no,
                label: label.to_string(),
            });
        }
        let value: f64 = value.trim().parse().map_err(|_| SccError::Csv {
            line: line_no,
            message: format!("invalid number '{}'", value.trim()),
        })?;
        values[index] = Some(value);
    }
    let mut out = DVector::zeros(labels.len());
    for (i, v) in values.into_iter().enumerate() {
        out[i] = v.ok_or_else(|| SccError::MissingCsvValue {
            label: labels[i].to_string(),
        })?;
    }
    Ok(out)
}
