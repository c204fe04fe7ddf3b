//! Luminosity distances and distance moduli for the EdS, flat LCDM, and
//! MORC-approx cosmologies.
//!
//! All models share the kinematic pieces: redshift in, distances in Gpc
//! out, `H0` in km/s/Mpc. EdS has the closed-form matter-only proper
//! distance and the trivial inner product `D_L = (1+z) D_p`. Flat LCDM
//! integrates `1/E(z)` numerically. MORC-approx keeps the EdS background
//! but corrects the inner product used for the luminosity distance by
//! `h11 = D_p / a_inv`, giving `D_L = (1+z) sqrt(1 + h11) D_p`; the
//! correction scale `a_inv` is the fitted length where the deviation
//! becomes order one, so the trivial form is recovered for small `D_p`.

use thiserror::Error;

pub const SPEED_OF_LIGHT_KM_S: f64 = 299_792.458;

/// Giga-light-years per gigaparsec; used when reporting the MORC-approx
/// correction scale in the unit common for it.
pub const GLY_PER_GPC: f64 = 3.2616;

/// Relative tolerance of the LCDM comoving-distance quadrature.
const QUADRATURE_RTOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CosmologyError {
    #[error("Hubble constant must be positive, got {0}")]
    NonPositiveHubble(f64),
    #[error("Omega_M must lie in [0, 1] for a flat model, got {0}")]
    OmegaOutOfRange(f64),
    #[error("correction scale must be positive, got {0} Gpc")]
    NonPositiveCorrectionScale(f64),
    #[error("redshift must be nonnegative, got {0}")]
    NegativeRedshift(f64),
    #[error("distance must be positive, got {0} Gpc")]
    NonPositiveDistance(f64),
    #[error("quadrature failed to converge at z = {z}")]
    QuadratureDidNotConverge { z: f64 },
    #[error("hinge areas ({areas}) and deficit angles ({angles}) differ in length")]
    HingeLengthMismatch { areas: usize, angles: usize },
}

/// Model kind selector, used by the fitting layer to pick the free
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    EdS,
    Lcdm,
    MorcApprox,
}

/// A cosmological distance model with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CosmologyModel {
    /// Flat matter-only expansion; `h0` in km/s/Mpc.
    EdS { h0: f64 },
    /// Flat matter + cosmological constant; `omega_l = 1 - omega_m`.
    Lcdm { h0: f64, omega_m: f64 },
    /// EdS background kinematics with the modified inner product
    /// `h11 = D_p / a_inv_gpc`.
    MorcApprox { h0: f64, a_inv_gpc: f64 },
}

impl CosmologyModel {
    pub fn eds(h0: f64) -> Result<Self, CosmologyError> {
        let model = Self::EdS { h0 };
        model.validate()?;
        Ok(model)
    }

    pub fn lcdm(h0: f64, omega_m: f64) -> Result<Self, CosmologyError> {
        let model = Self::Lcdm { h0, omega_m };
        model.validate()?;
        Ok(model)
    }

    pub fn morc_approx(h0: f64, a_inv_gpc: f64) -> Result<Self, CosmologyError> {
        let model = Self::MorcApprox { h0, a_inv_gpc };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), CosmologyError> {
        let h0 = self.h0();
        if !(h0 > 0.0) || !h0.is_finite() {
            return Err(CosmologyError::NonPositiveHubble(h0));
        }
        match *self {
            Self::EdS { .. } => {}
            Self::Lcdm { omega_m, .. } => {
                if !(0.0..=1.0).contains(&omega_m) {
                    return Err(CosmologyError::OmegaOutOfRange(omega_m));
                }
            }
            Self::MorcApprox { a_inv_gpc, .. } => {
                if !(a_inv_gpc > 0.0) {
                    return Err(CosmologyError::NonPositiveCorrectionScale(a_inv_gpc));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Self::EdS { .. } => ModelKind::EdS,
            Self::Lcdm { .. } => ModelKind::Lcdm,
            Self::MorcApprox { .. } => ModelKind::MorcApprox,
        }
    }

    pub fn h0(&self) -> f64 {
        match *self {
            Self::EdS { h0 } | Self::Lcdm { h0, .. } | Self::MorcApprox { h0, .. } => h0,
        }
    }

    /// Dark-energy fraction of the flat LCDM variant.
    pub fn omega_l(&self) -> Option<f64> {
        match *self {
            Self::Lcdm { omega_m, .. } => Some(1.0 - omega_m),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::EdS { .. } => "EdS",
            Self::Lcdm { .. } => "LCDM",
            Self::MorcApprox { .. } => "MORC-approx",
        }
    }
}

/// Hubble distance `c / H0` in Gpc.
fn hubble_distance_gpc(h0: f64) -> f64 {
    SPEED_OF_LIGHT_KM_S / h0 / 1000.0
}

/// Matter-only proper distance `D_p = 2 (c/H0) (1 - 1/sqrt(1+z))` in Gpc.
pub fn proper_distance_eds(z: f64, h0: f64) -> Result<f64, CosmologyError> {
    if !(h0 > 0.0) {
        return Err(CosmologyError::NonPositiveHubble(h0));
    }
    if z < 0.0 {
        return Err(CosmologyError::NegativeRedshift(z));
    }
    Ok(2.0 * hubble_distance_gpc(h0) * (1.0 - 1.0 / (1.0 + z).sqrt()))
}

/// Luminosity distance in Gpc for any of the three models.
pub fn luminosity_distance(model: &CosmologyModel, z: f64) -> Result<f64, CosmologyError> {
    model.validate()?;
    if z < 0.0 {
        return Err(CosmologyError::NegativeRedshift(z));
    }
    match *model {
        CosmologyModel::EdS { h0 } => Ok((1.0 + z) * proper_distance_eds(z, h0)?),
        CosmologyModel::Lcdm { h0, omega_m } => {
            let omega_l = 1.0 - omega_m;
            let integrand =
                |zp: f64| 1.0 / (omega_m * (1.0 + zp).powi(3) + omega_l).sqrt();
            let comoving = adaptive_simpson(&integrand, 0.0, z, QUADRATURE_RTOL)
                .ok_or(CosmologyError::QuadratureDidNotConverge { z })?;
            Ok((1.0 + z) * hubble_distance_gpc(h0) * comoving)
        }
        CosmologyModel::MorcApprox { h0, a_inv_gpc } => {
            let d_p = proper_distance_eds(z, h0)?;
            let h11 = d_p / a_inv_gpc;
            Ok((1.0 + z) * (1.0 + h11).sqrt() * d_p)
        }
    }
}

/// Proper distance of the model's background in Gpc. For LCDM this is the
/// comoving distance from the same quadrature as the luminosity distance.
pub fn proper_distance(model: &CosmologyModel, z: f64) -> Result<f64, CosmologyError> {
    model.validate()?;
    match *model {
        CosmologyModel::EdS { h0 } | CosmologyModel::MorcApprox { h0, .. } => {
            proper_distance_eds(z, h0)
        }
        CosmologyModel::Lcdm { .. } => {
            let d_l = luminosity_distance(model, z)?;
            Ok(d_l / (1.0 + z))
        }
    }
}

/// Distance modulus `mu = 5 log10(D_L / 1 Mpc) + 25` for `D_L` in Gpc.
pub fn distance_modulus(d_l_gpc: f64) -> Result<f64, CosmologyError> {
    if !(d_l_gpc > 0.0) || !d_l_gpc.is_finite() {
        return Err(CosmologyError::NonPositiveDistance(d_l_gpc));
    }
    Ok(5.0 * (d_l_gpc * 1000.0).log10() + 25.0)
}

/// Vacuum lattice action `(1/8 pi) sum_i deficit_i * area_i`.
pub fn regge_vacuum_action(
    hinge_areas: &[f64],
    deficit_angles: &[f64],
) -> Result<f64, CosmologyError> {
    if hinge_areas.len() != deficit_angles.len() {
        return Err(CosmologyError::HingeLengthMismatch {
            areas: hinge_areas.len(),
            angles: deficit_angles.len(),
        });
    }
    let sum: f64 = hinge_areas
        .iter()
        .zip(deficit_angles)
        .map(|(a, eps)| a * eps)
        .sum();
    Ok(sum / (8.0 * std::f64::consts::PI))
}

/// Adaptive Simpson quadrature with Richardson acceptance: a panel is
/// accepted when its halved estimate moves by less than `15 * tol`.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Option<f64> {
    if a == b {
        return Some(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_rule(a, b, fa, fm, fb);
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    recurse(f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let half = 0.5 * tol;
    let l = recurse(f, a, m, fa, flm, fm, left, half, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, half, depth - 1)?;
    Some(l + r)
}
