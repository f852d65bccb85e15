//! Closed-form electrostatics between homofocal parabolas.
//!
//! The meniscus and the grounded plate are modelled as two confocal
//! parabolic equipotentials; the field between them is known in closed form
//! in parabolic coordinates. All field quantities are returned as positive
//! magnitudes (only the square enters the force balance), with the potential
//! drop normalized to 1 and lengths in units of the capillary radius.

use crate::error::{Error, Result};

/// Point in parabolic coordinates, lengths in units of the capillary radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolicPoint {
    pub zeta: f64,
    pub eta: f64,
}

/// Meniscus/plate gap geometry, lengths in units of the capillary radius.
#[derive(Debug, Clone, Copy)]
pub struct FieldGeometry {
    /// Tip height of the meniscus parabola.
    pub z_m: f64,
    /// Plate distance.
    pub d_hat: f64,
}

impl FieldGeometry {
    pub fn new(z_m: f64, d_hat: f64) -> Result<Self> {
        if z_m <= 0.0 || z_m >= d_hat {
            return Err(Error::DomainError(format!(
                "need 0 < z_m < d_hat, got z_m={z_m}, d_hat={d_hat}"
            )));
        }
        Ok(FieldGeometry { z_m, d_hat })
    }

    /// Whether the plate is distant enough to be treated as a plane.
    pub fn far_plate(&self) -> bool {
        self.d_hat >= 10.0 * self.z_m
    }
}

/// Cylindrical coordinates `(z, r)` of a parabolic point.
pub fn to_cylindrical(p: ParabolicPoint) -> (f64, f64) {
    (
        0.5 * p.zeta * p.zeta - 0.5 * p.eta * p.eta,
        p.eta * p.zeta,
    )
}

/// The parabolic coordinate `eta^2 = sqrt(z^2 + r^2) - z`.
///
/// Clamped at zero against rounding on the axis.
pub fn eta_squared(z: f64, r: f64) -> f64 {
    ((z * z + r * r).sqrt() - z).max(0.0)
}

/// Field magnitude of the homofocal-parabola solution,
/// `E = k / (sqrt(zeta^2 + eta^2) * zeta)`.
pub fn homofocal_field(zeta: f64, eta: f64, k: f64) -> Result<f64> {
    if zeta <= 0.0 {
        return Err(Error::DomainError(
            "field is singular at the focus (zeta = 0)".into(),
        ));
    }
    Ok(k / ((zeta * zeta + eta * eta).sqrt() * zeta))
}

/// Normalized gap constant `k = 2 / ln(d_hat / z_m)` for unit potential drop.
pub fn gap_constant(z_m: f64, d_hat: f64) -> Result<f64> {
    let geom = FieldGeometry::new(z_m, d_hat)?;
    Ok(2.0 / (geom.d_hat / geom.z_m).ln())
}

/// Normalized field magnitude on the near-parabolic meniscus surface at
/// cylindrical `(r, z)`.
///
/// Exact on the parabola `zeta = sqrt(2 z_m)`; used as a local approximation
/// for profiles close to parabolic.
pub fn surface_field(r: f64, z: f64, z_m: f64, d_hat: f64) -> Result<f64> {
    let k = gap_constant(z_m, d_hat)?;
    let eta2 = eta_squared(z, r);
    Ok(k / ((2.0 * z_m + eta2).sqrt() * (2.0 * z_m).sqrt()))
}
