//! Surface-tension laws: the constant (flat-interface) law and three
//! curvature-dependent corrections that act when the mean curvature radius
//! approaches the minimal nucleation radius.

use crate::error::{Error, Result};

/// Which surface-tension law is in force.
///
/// In CLI flags these are numbered `g0`..`g3` in the same order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TensionKind {
    /// gamma = gamma0 independent of curvature.
    Constant,
    /// gamma0 * (1 - exp(-R_g/R0)); increasing in R_g, bounded by gamma0.
    Exponential,
    /// gamma0/2 * (1 + tanh((R_g - R0)/(alpha*R0))); increasing, bounded by gamma0.
    TanhIncreasing,
    /// gamma0/2 * (3 - tanh((R_g - R0)/R0)); decreasing, between gamma0 and 2*gamma0.
    TanhDecreasing,
}

impl TensionKind {
    pub const ALL: [TensionKind; 4] = [
        TensionKind::Constant,
        TensionKind::Exponential,
        TensionKind::TanhIncreasing,
        TensionKind::TanhDecreasing,
    ];

    /// Short label `g0`..`g3`.
    pub fn label(self) -> &'static str {
        match self {
            TensionKind::Constant => "g0",
            TensionKind::Exponential => "g1",
            TensionKind::TanhIncreasing => "g2",
            TensionKind::TanhDecreasing => "g3",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        match s {
            "g0" | "constant" => Ok(TensionKind::Constant),
            "g1" | "exponential" => Ok(TensionKind::Exponential),
            "g2" | "tanh_increasing" => Ok(TensionKind::TanhIncreasing),
            "g3" | "tanh_decreasing" => Ok(TensionKind::TanhDecreasing),
            other => Err(Error::ConfigError(format!("unknown tension kind `{other}`"))),
        }
    }
}

/// A surface-tension law with its material parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolmanModel {
    pub kind: TensionKind,
    /// Flat-interface surface tension, N/m.
    pub gamma0: f64,
    /// Minimal nucleation radius, m.
    pub r0: f64,
    /// Dimensionless width of the tanh-increasing law.
    pub alpha: f64,
}

impl TolmanModel {
    pub fn new(kind: TensionKind, gamma0: f64, r0: f64, alpha: f64) -> Result<Self> {
        if gamma0 <= 0.0 || r0 <= 0.0 || alpha <= 0.0 {
            return Err(Error::ConfigError(
                "TolmanModel requires gamma0 > 0, r0 > 0, alpha > 0".into(),
            ));
        }
        Ok(TolmanModel {
            kind,
            gamma0,
            r0,
            alpha,
        })
    }

    /// Dimensional surface tension at mean curvature radius `r_g` (m).
    pub fn surface_tension(&self, r_g: f64) -> Result<f64> {
        Ok(self.gamma0 * normalized_tension(self.kind, r_g, self.r0, self.alpha)?)
    }
}

/// The laws apply for radii above the nucleation radius; far below it the
/// non-local interface structure matters and the value is only formal.
pub fn in_validity_range(x: f64, r0_hat: f64) -> bool {
    x >= 1e-3 * r0_hat
}

/// Normalized tension `gamma/gamma0` at radius `x`, with `r0_hat` the
/// nucleation radius in the same length units.
///
/// The decreasing tanh law has unit width by definition; `alpha` is ignored
/// for it.
pub fn normalized_tension(kind: TensionKind, x: f64, r0_hat: f64, alpha: f64) -> Result<f64> {
    if r0_hat <= 0.0 {
        return Err(Error::DomainError(format!("r0_hat must be > 0, got {r0_hat}")));
    }
    if x <= 0.0 {
        return Err(Error::DomainError(format!(
            "curvature radius must be > 0, got {x}"
        )));
    }
    let s = x / r0_hat;
    Ok(match kind {
        TensionKind::Constant => 1.0,
        TensionKind::Exponential => 1.0 - (-s).exp(),
        TensionKind::TanhIncreasing => 0.5 * (1.0 + ((s - 1.0) / alpha).tanh()),
        TensionKind::TanhDecreasing => 0.5 * (3.0 - (s - 1.0).tanh()),
    })
}
