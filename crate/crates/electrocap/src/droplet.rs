//! Equilibrium of a charged conducting spherical drop.
//!
//! Everything is posed in dimensionless form. Lengths are measured in units
//! of the uncharged constant-tension equilibrium radius, so the normalized
//! pressure balance reads `g(x)/x + w/x^2 = 1` with `g` the normalized
//! tension and `w >= 0` the electric strength. Two constants recovered from
//! published data close the problem: the electric coefficient
//! `kappa` (`w = kappa*U^2/4`, U in microvolts) and the normalized inverse
//! nucleation radius `rho_n`.

use crate::error::{Error, Result};
use crate::numerics::{bisect, ToleranceSpec};
use crate::tolman::{normalized_tension, TensionKind};

/// Default electric coefficient, per microvolt squared (see [`fit_kappa`]).
pub const KAPPA_DEFAULT: f64 = 22.481;
/// Default drop radius in units of the nucleation radius.
pub const RHO_N_DEFAULT: f64 = 3.0;

/// Normalized potential function `g(x)/x + w/x^2`.
///
/// `rho_n` is the base radius in units of the nucleation radius, so the
/// tension law sees `r0_hat = 1/rho_n`.
pub fn lc_hat(x: f64, w: f64, kind: TensionKind, rho_n: f64, alpha: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::DomainError(format!("radius must be > 0, got {x}")));
    }
    let g = normalized_tension(kind, x, 1.0 / rho_n, alpha)?;
    Ok(g / x + w / (x * x))
}

/// Exact equilibrium radius for constant tension: positive root of
/// `x^2 - x - w = 0`.
pub fn closed_form_radius(w: f64) -> f64 {
    0.5 + 0.5 * (1.0 + 4.0 * w).sqrt()
}

/// Equilibrium (and minimal) radius: the unique solution of `lc_hat(x) = 1`.
///
/// `lc_hat` is strictly decreasing in `x`, so bisection on
/// `[1e-6, 2*closed_form + 1]` finds the single root.
pub fn equilibrium_radius(w: f64, kind: TensionKind, rho_n: f64, alpha: f64) -> Result<f64> {
    if w < 0.0 {
        return Err(Error::DomainError(format!("w must be >= 0, got {w}")));
    }
    let x_hi = 2.0 * closed_form_radius(w) + 1.0;
    let f = |x: f64| lc_hat(x, w, kind, rho_n, alpha).unwrap_or(f64::NAN) - 1.0;
    if f(1e-6) < 0.0 {
        return Err(Error::NoBracket { lo: 1e-6, hi: x_hi });
    }
    bisect(f, 1e-6, x_hi, ToleranceSpec::with_abs_tol(1e-10))
}

/// Result of recovering the electric coefficient from a published column.
#[derive(Debug, Clone, Copy)]
pub struct KappaFit {
    /// Mean per-row coefficient, per microvolt squared.
    pub kappa: f64,
    /// Relative spread (max - min)/mean across rows.
    pub spread: f64,
}

/// Recover the electric coefficient `kappa` from constant-tension rows
/// `(U in microvolts, normalized radius x)`.
///
/// Each row inverts the closed form: `kappa = ((2x-1)^2 - 1)/U^2`. Rows with
/// `U = 0` carry no information and are skipped.
pub fn fit_kappa(rows: &[(f64, f64)]) -> Result<KappaFit> {
    let per_row: Vec<f64> = rows
        .iter()
        .filter(|(u, _)| *u > 0.0)
        .map(|&(u, x)| {
            let t = 2.0 * x - 1.0;
            (t * t - 1.0) / (u * u)
        })
        .collect();
    if per_row.is_empty() {
        return Err(Error::InconsistentTable(
            "no rows with U > 0 to fit kappa".into(),
        ));
    }
    let kappa = per_row.iter().sum::<f64>() / per_row.len() as f64;
    let (lo, hi) = per_row
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| {
            (lo.min(k), hi.max(k))
        });
    let spread = (hi - lo) / kappa;
    if spread > 0.01 {
        return Err(Error::InconsistentTable(format!(
            "per-row kappa spread {spread:.4} exceeds 1%"
        )));
    }
    Ok(KappaFit { kappa, spread })
}

/// One row of the minimal-radius table.
#[derive(Debug, Clone, Copy)]
pub struct RminRow {
    /// Drop potential in microvolts.
    pub u: f64,
    pub x_constant: f64,
    pub x_exponential: f64,
    pub x_tanh_increasing: f64,
}

/// Normalized minimal radii per potential for the three drop tension laws.
pub fn rmin_table(u_list: &[f64], kappa: f64, rho_n: f64, alpha: f64) -> Result<Vec<RminRow>> {
    if kappa <= 0.0 {
        return Err(Error::ConfigError(format!("kappa must be > 0, got {kappa}")));
    }
    u_list
        .iter()
        .map(|&u| {
            let w = kappa * u * u / 4.0;
            Ok(RminRow {
                u,
                x_constant: equilibrium_radius(w, TensionKind::Constant, rho_n, alpha)?,
                x_exponential: equilibrium_radius(w, TensionKind::Exponential, rho_n, alpha)?,
                x_tanh_increasing: equilibrium_radius(w, TensionKind::TanhIncreasing, rho_n, alpha)?,
            })
        })
        .collect()
}
