//! Shared numerical kernels: adaptive Runge–Kutta integration, bracketed
//! root-finding, golden-section minimization and small least-squares fits.
//!
//! Everything here is a pure function of its inputs.

use crate::error::{Error, Result};

/// Accuracy and iteration budget for the iterative kernels.
#[derive(Debug, Clone, Copy)]
pub struct ToleranceSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            max_iter: 200,
        }
    }
}

impl ToleranceSpec {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        ToleranceSpec {
            abs_tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.abs_tol <= 0.0 || self.rel_tol <= 0.0 || self.max_iter == 0 {
            return Err(Error::ConfigError(
                "tolerances must be positive and max_iter >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Sampled solution of an initial-value problem.
///
/// Stores the accepted integration nodes together with the state derivative
/// at each node, which makes cubic Hermite interpolation between nodes exact
/// to the order of the integrator. The maximum step is capped so that at
/// least 200 nodes span the interval.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub ts: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    pub dys: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.ys.last().expect("trajectory is never empty")
    }

    pub fn final_time(&self) -> f64 {
        *self.ts.last().expect("trajectory is never empty")
    }

    /// Cubic Hermite interpolation at `t`, which must lie within the span.
    pub fn sample(&self, t: f64) -> Vec<f64> {
        let n = self.ts.len();
        let forward = self.ts[n - 1] >= self.ts[0];
        // Locate the bracketing node pair.
        let mut i = 0;
        while i + 2 < n {
            let past = if forward {
                self.ts[i + 1] >= t
            } else {
                self.ts[i + 1] <= t
            };
            if past {
                break;
            }
            i += 1;
        }
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let h = t1 - t0;
        if h == 0.0 {
            return self.ys[i].clone();
        }
        let s = (t - t0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        (0..self.ys[i].len())
            .map(|k| {
                h00 * self.ys[i][k]
                    + h10 * h * self.dys[i][k]
                    + h01 * self.ys[i + 1][k]
                    + h11 * h * self.dys[i + 1][k]
            })
            .collect()
    }
}

/// Reason the adaptive integrator stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ReachedEnd,
    GuardTriggered,
}

// Dormand–Prince 5(4) coefficients.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive embedded Runge–Kutta 4/5 over `span`, either direction.
///
/// Local error per step is kept below `abs_tol + rel_tol * |y|`.
pub fn integrate_ivp<F>(rhs: F, span: (f64, f64), y0: &[f64], tol: ToleranceSpec) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let (traj, _) = integrate_ivp_guarded(rhs, span, y0, tol, |_, _| false)?;
    Ok(traj)
}

/// Like [`integrate_ivp`] but halts early when `guard` returns `true` at an
/// accepted node. The trajectory then ends at that node.
pub fn integrate_ivp_guarded<F, G>(
    rhs: F,
    span: (f64, f64),
    y0: &[f64],
    tol: ToleranceSpec,
    guard: G,
) -> Result<(Trajectory, StopReason)>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
    G: Fn(f64, &[f64]) -> bool,
{
    tol.validate()?;
    let (t0, t1) = span;
    if t0 == t1 {
        return Err(Error::DomainError("empty integration span".into()));
    }
    let dim = y0.len();
    let total = t1 - t0;
    let dir = total.signum();
    let h_min = 1e-14 * total.abs();
    // Cap the step so the span carries at least 200 nodes.
    let h_max = total.abs() / 200.0;

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut dy = rhs(t, &y);
    let mut h = h_max.min(total.abs() / 1000.0).max(h_min * 10.0);

    let mut traj = Trajectory {
        ts: vec![t],
        ys: vec![y.clone()],
        dys: vec![dy.clone()],
    };
    if guard(t, &y) {
        return Ok((traj, StopReason::GuardTriggered));
    }

    let mut k = vec![vec![0.0; dim]; 7];
    loop {
        if (t1 - t) * dir <= 0.0 {
            return Ok((traj, StopReason::ReachedEnd));
        }
        let remaining = (t1 - t).abs();
        if h > remaining {
            h = remaining;
        }
        let hs = h * dir;

        k[0].clone_from(&dy);
        for stage in 1..7 {
            let mut ys = y.clone();
            for j in 0..stage {
                let a = DP_A[stage][j];
                if a != 0.0 {
                    for m in 0..dim {
                        ys[m] += hs * a * k[j][m];
                    }
                }
            }
            k[stage] = rhs(t + DP_C[stage] * hs, &ys);
        }

        let mut y5 = y.clone();
        let mut err = 0.0f64;
        for m in 0..dim {
            let mut inc5 = 0.0;
            let mut inc4 = 0.0;
            for s in 0..7 {
                inc5 += DP_B5[s] * k[s][m];
                inc4 += DP_B4[s] * k[s][m];
            }
            y5[m] += hs * inc5;
            let scale = tol.abs_tol + tol.rel_tol * y[m].abs().max(y5[m].abs());
            err = err.max((hs * (inc5 - inc4)).abs() / scale);
        }

        if !err.is_finite() {
            // A stage blew up; retry with a much smaller step.
            h *= 0.1;
            if h < h_min {
                return Err(Error::StepFailure { t });
            }
            continue;
        }

        if err <= 1.0 {
            t += hs;
            y = y5;
            dy = rhs(t, &y);
            traj.ts.push(t);
            traj.ys.push(y.clone());
            traj.dys.push(dy.clone());
            if guard(t, &y) {
                return Ok((traj, StopReason::GuardTriggered));
            }
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).min(h_max);
        if h < h_min {
            return Err(Error::StepFailure { t });
        }
    }
}

/// Bisection on a bracketed root.
///
/// Returns `x` with `|f(x)| <= abs_tol` or bracket width `<= abs_tol`.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: ToleranceSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    tol.validate()?;
    let (mut lo, mut hi) = (lo, hi);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(Error::NoBracket { lo, hi });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..tol.max_iter {
        mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid.abs() <= tol.abs_tol || (hi - lo).abs() <= tol.abs_tol {
            return Ok(mid);
        }
        if flo * fmid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    Ok(mid)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the minimum of a unimodal function on `[lo, hi]`.
///
/// Unimodality is the caller's responsibility.
pub fn minimize_scalar<F>(f: F, lo: f64, hi: f64, tol: ToleranceSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    tol.validate()?;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..tol.max_iter {
        if (b - a).abs() <= tol.abs_tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    Ok(0.5 * (a + b))
}

/// One-parameter least squares: the `theta` minimizing the squared residual
/// between `model(theta)` and `target`, found by golden-section on the
/// residual norm. A residual that is flat across the range (no information
/// about `theta`) returns the midpoint.
pub fn fit_scalar<M>(model: M, target: &[f64], theta_lo: f64, theta_hi: f64) -> Result<f64>
where
    M: Fn(f64) -> Vec<f64>,
{
    let residual = |theta: f64| -> f64 {
        model(theta)
            .iter()
            .zip(target)
            .map(|(m, t)| (m - t) * (m - t))
            .sum()
    };
    // Degeneracy scan: constant residual means theta is unidentifiable.
    let probes: Vec<f64> = (0..9)
        .map(|i| theta_lo + (theta_hi - theta_lo) * i as f64 / 8.0)
        .map(&residual)
        .collect();
    let (rmin, rmax) = probes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if rmax - rmin <= 1e-14 * (1.0 + rmax.abs()) {
        return Ok(0.5 * (theta_lo + theta_hi));
    }
    minimize_scalar(residual, theta_lo, theta_hi, ToleranceSpec::default())
}

/// Closed-form linear least squares of `v ~ a + b*u^2`.
///
/// Returns `(a, b, rms_rel_residual)` where the residual is relative to
/// `max(|v|, 1e-12)` per point.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 3 {
        return Err(Error::SingularFit("need at least 3 points".into()));
    }
    let n = points.len() as f64;
    let (mut s1, mut s2, mut t0, mut t1) = (0.0, 0.0, 0.0, 0.0);
    for &(u, v) in points {
        let u2 = u * u;
        s1 += u2;
        s2 += u2 * u2;
        t0 += v;
        t1 += u2 * v;
    }
    let det = n * s2 - s1 * s1;
    let scale = n * s2 + s1 * s1;
    if det.abs() <= 1e-12 * scale.max(1.0) {
        return Err(Error::SingularFit("all abscissae identical".into()));
    }
    let a = (s2 * t0 - s1 * t1) / det;
    let b = (n * t1 - s1 * t0) / det;
    let mut ss = 0.0;
    for &(u, v) in points {
        let rel = (a + b * u * u - v) / v.abs().max(1e-12);
        ss += rel * rel;
    }
    Ok((a, b, (ss / n).sqrt()))
}
