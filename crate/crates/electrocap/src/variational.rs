//! Independent cross-check of the shooting solver: parabolic trial shapes,
//! normalized free energy, and calibration of the effective radius that
//! corrects the infinite-conductor field energy for the finite apparatus.
//!
//! Energies are normalized by `pi * gamma0 * R^2`, which expresses all three
//! contributions through the dimensionless groups of the meniscus problem.
//! The trial profile is the tip-matched parabola `z_m (1 - r^2)`; the focus
//! offset `h` only re-embeds it as a parabolic coordinate curve for the
//! field calculation.

use crate::error::{Error, Result};
use crate::meniscus::MeniscusProblem;
use crate::numerics::{fit_scalar, minimize_scalar, ToleranceSpec};

/// Parabolic trial shape, parametrized by its tip height.
#[derive(Debug, Clone, Copy)]
pub struct ParabolicTrial {
    pub z_m: f64,
    /// Focus offset embedding the trial as a coordinate parabola.
    pub h: f64,
}

impl ParabolicTrial {
    pub fn new(z_m: f64) -> Result<Self> {
        Ok(ParabolicTrial {
            z_m,
            h: focus_offset(z_m)?,
        })
    }
}

/// Normalized energy contributions of a trial shape.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBreakdown {
    pub e_g: f64,
    pub e_gamma: f64,
    pub e_e: f64,
    pub total: f64,
}

/// Result of calibrating the effective radius against a shooting curve.
#[derive(Debug, Clone, Copy)]
pub struct CalibrationResult {
    /// Effective radius in units of the capillary radius.
    pub reff_hat: f64,
    /// RMS tip-height mismatch between variational and shooting curves.
    pub rms_error: f64,
}

/// Focus offset `h = 1/(4 z_m) - z_m` of the embedding parabola.
pub fn focus_offset(z_m: f64) -> Result<f64> {
    if z_m <= 0.0 {
        return Err(Error::DomainError(format!("z_m must be > 0, got {z_m}")));
    }
    Ok(0.25 / z_m - z_m)
}

/// Exact area of the trial parabola, in units of `pi R^2`:
/// `(1/(6 z_m^2)) [(1 + 4 z_m^2)^{3/2} - 1]`, with limit 1 (flat disc).
pub fn surface_energy(z_m: f64) -> f64 {
    if z_m < 1e-8 {
        return 1.0;
    }
    ((1.0 + 4.0 * z_m * z_m).powf(1.5) - 1.0) / (6.0 * z_m * z_m)
}

/// Gravitational energy of the parabolic cap, from the exact volume
/// integrals `V = pi z_m / 2` and `int z dV = pi z_m^2 / 6`.
pub fn gravity_energy(z_m: f64, k1: f64, k2: f64) -> f64 {
    -k1 * (0.5 * k2 * z_m + z_m * z_m / 6.0)
}

/// Electric (generator) energy at fixed potential drop:
/// `-2 k3 reff^2 z_m / ln[1 + 4 z_m (d - z_m)]`.
///
/// The limit `z_m -> 0` recovers the plane-capacitor value
/// `-k3 reff^2 / (2 d)`.
pub fn electric_energy(z_m: f64, k3: f64, d_hat: f64, reff_hat: f64) -> Result<f64> {
    if z_m <= 0.0 || z_m >= d_hat {
        return Err(Error::DomainError(format!(
            "need 0 < z_m < d_hat, got z_m={z_m}, d_hat={d_hat}"
        )));
    }
    Ok(-2.0 * k3 * reff_hat * reff_hat * z_m / (1.0 + 4.0 * z_m * (d_hat - z_m)).ln())
}

/// Total surface charge in units of `2 pi eps U0 R`:
/// `2 z_m reff^2 / ln[1 + 4 z_m (d - z_m)]`.
pub fn total_charge(z_m: f64, d_hat: f64, reff_hat: f64) -> Result<f64> {
    if z_m <= 0.0 || z_m >= d_hat {
        return Err(Error::DomainError(format!(
            "need 0 < z_m < d_hat, got z_m={z_m}, d_hat={d_hat}"
        )));
    }
    Ok(2.0 * z_m * reff_hat * reff_hat / (1.0 + 4.0 * z_m * (d_hat - z_m)).ln())
}

/// All three normalized energies of a trial shape.
///
/// The electric contribution is the constant-potential work term `-Q U0`,
/// i.e. twice [`electric_energy`]: at fixed potential drop the generator
/// supplies `Q U0` while the field stores `Q U0 / 2`, and it is the net work
/// term that drives the interface.
pub fn energy_breakdown(z_m: f64, problem: &MeniscusProblem, reff_hat: f64) -> Result<EnergyBreakdown> {
    let e_gamma = surface_energy(z_m);
    let e_g = gravity_energy(z_m, problem.k1, problem.k2);
    let e_e = if problem.k3 > 0.0 {
        2.0 * electric_energy(z_m, problem.k3, problem.d_hat, reff_hat)?
    } else {
        0.0
    };
    Ok(EnergyBreakdown {
        e_g,
        e_gamma,
        e_e,
        total: e_g + e_gamma + e_e,
    })
}

const ZM_MIN: f64 = 1e-6;
const ZM_MAX: f64 = 1.0;

/// Tip height minimizing the total energy over `(0, 1]`.
///
/// A coarse scan locates the minimum; the result is refined by
/// golden-section on the bracketing cells. A minimum pinned at `z_m = 1`
/// means the electric pull dominates everywhere: above the variational
/// limit potential.
pub fn minimize_energy(problem: &MeniscusProblem, reff_hat: f64) -> Result<f64> {
    let f = |zm: f64| {
        energy_breakdown(zm, problem, reff_hat)
            .map(|e| e.total)
            .unwrap_or(f64::INFINITY)
    };
    const N: usize = 400;
    let grid: Vec<f64> = (0..=N)
        .map(|i| ZM_MIN + (ZM_MAX - ZM_MIN) * i as f64 / N as f64)
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&z| f(z)).collect();
    let i_min = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    if i_min == N {
        return Err(Error::NoInteriorMinimum);
    }
    let lo = grid[i_min.saturating_sub(1)];
    let hi = grid[(i_min + 1).min(N)];
    minimize_scalar(f, lo, hi, ToleranceSpec::default())
}

/// Calibrate the effective radius against a shooting curve
/// `(U0 volts, z_m)` for the given material.
///
/// Least-squares over `reff_hat` in `[0.1, 0.9]`, minimizing the tip-height
/// mismatch of [`minimize_energy`] across the curve. Points above the
/// variational limit clamp to `z_m = 1`.
pub fn calibrate_reff(
    curve: &[(f64, f64)],
    derive: impl Fn(f64) -> Result<MeniscusProblem>,
) -> Result<CalibrationResult> {
    let charged = curve.iter().filter(|(u, _)| *u > 0.0).count();
    if curve.len() < 2 || charged == 0 {
        return Err(Error::DegenerateFit(
            "calibration needs at least two points including U > 0".into(),
        ));
    }
    let problems: Vec<MeniscusProblem> = curve
        .iter()
        .map(|&(u, _)| derive(u))
        .collect::<Result<_>>()?;
    let target: Vec<f64> = curve.iter().map(|&(_, zm)| zm).collect();
    let model = |reff: f64| -> Vec<f64> {
        problems
            .iter()
            .map(|p| minimize_energy(p, reff).unwrap_or(1.0))
            .collect()
    };
    let reff_hat = fit_scalar(&model, &target, 0.1, 0.9)?;
    let predicted = model(reff_hat);
    let rms_error = (predicted
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / target.len() as f64)
        .sqrt();
    Ok(CalibrationResult { reff_hat, rms_error })
}
