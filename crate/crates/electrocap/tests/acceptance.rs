//! Acceptance gate: each test prints one pass/fail line for its criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines
//! on success as well.

use electrocap::droplet::{closed_form_radius, equilibrium_radius, fit_kappa};
use electrocap::meniscus::{
    back_integration_check, derive_problem, limit_potential, quadratic_check, shoot,
    shoot_reverse, shoot_seeded, solve_tolman_seeded, MaterialPreset,
};
use electrocap::tolman::normalized_tension;
use electrocap::variational::{
    calibrate_reff, gravity_energy, minimize_energy, surface_energy,
};
use electrocap::TensionKind;

fn check(n: usize, desc: &str, ok: bool) {
    println!(
        "criterion {n}: {} - {desc}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {desc}");
}

/// Published minimal-radius table (U in microvolts): constant, exponential
/// and increasing-tanh tension columns.
const TABLE1: [(f64, f64, f64, f64); 6] = [
    (0.0, 1.00000, 0.94048, 0.992946),
    (0.1, 1.05336, 1.00707, 1.048940),
    (0.3, 1.36939, 1.35593, 1.369050),
    (0.5, 1.78650, 1.78320, 1.786490),
    (1.0, 2.92288, 2.92278, 2.922880),
    (2.0, 5.26774, 5.26774, 5.267740),
];

/// Published tip heights for the millimetre capillary (U in volts).
const TABLE3A: [(f64, f64); 7] = [
    (0.0, 0.1834),
    (1000.0, 0.2436),
    (2000.0, 0.3542),
    (3000.0, 0.4848),
    (4000.0, 0.6412),
    (5000.0, 0.8488),
    (5500.0, 0.9958),
];

/// Published tip heights for the micrometre capillary: four tension laws.
const TABLE3B: [(f64, [f64; 4]); 4] = [
    (200.0, [0.26020, 0.26100, 0.26040, 0.26020]),
    (400.0, [0.47700, 0.48720, 0.48080, 0.46420]),
    (600.0, [0.69910, 0.72860, 0.71960, 0.61330]),
    (800.0, [0.94840, 1.00000, 0.99520, 0.67520]),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn criterion_01_droplet_constant_column() {
    let rows: Vec<(f64, f64)> = TABLE1.iter().map(|&(u, x0, _, _)| (u, x0)).collect();
    let fit = fit_kappa(&rows).unwrap();
    let mut ok = fit.spread < 0.001 && (fit.kappa - 22.481).abs() < 0.01;
    for &(u, x0, _, _) in &TABLE1 {
        let x = closed_form_radius(fit.kappa * u * u / 4.0);
        ok &= rel(x, x0) < 5e-4;
    }
    check(1, "droplet constant-tension column, kappa recovery", ok);
}

#[test]
fn criterion_02_droplet_exponential_column() {
    let mut ok = true;
    for &(u, _, x1, _) in &TABLE1 {
        let w = 22.481 * u * u / 4.0;
        let x = equilibrium_radius(w, TensionKind::Exponential, 3.0, 1.0).unwrap();
        ok &= rel(x, x1) < 1e-3;
    }
    check(2, "droplet exponential-tension column", ok);
}

#[test]
fn criterion_03_droplet_tanh_column() {
    let mut ok = true;
    for &(u, _, _, x2) in &TABLE1 {
        let w = 22.481 * u * u / 4.0;
        let x = equilibrium_radius(w, TensionKind::TanhIncreasing, 3.0, 1.0).unwrap();
        ok &= rel(x, x2) < 0.02;
    }
    // Independent fixed-point oracle for the uncharged cell:
    // x = (1 + tanh(3x - 1))/2.
    let mut oracle = 1.0_f64;
    for _ in 0..300 {
        oracle = 0.5 * (1.0 + (3.0 * oracle - 1.0).tanh());
    }
    let x0 = equilibrium_radius(0.0, TensionKind::TanhIncreasing, 3.0, 1.0).unwrap();
    ok &= (x0 - oracle).abs() < 1e-8;
    println!(
        "  note: uncharged tanh-increasing cell solves to {x0:.6} \
         (fixed-point oracle {oracle:.6}); the published 0.992946 differs \
         by {:.2}% and is reproduced only within that margin",
        rel(x0, 0.992946) * 100.0
    );
    check(3, "droplet tanh-tension column, oracle cross-check", ok);
}

#[test]
fn criterion_04_uncharged_menisci() {
    let large = derive_problem(&MaterialPreset::large(), 0.0, TensionKind::Constant).unwrap();
    let (p, _) = shoot(&large, &|_| 1.0).unwrap();
    let mut ok = rel(p.z_m, 0.1834) < 0.02;

    let small = derive_problem(&MaterialPreset::small(), 0.0, TensionKind::Constant).unwrap();
    let linearized = small.k1 * small.k2 / 4.0;
    let (q, _) = shoot(&small, &|_| 1.0).unwrap();
    ok &= rel(q.z_m, linearized) < 0.01;
    // Consistent with the published 0.00017 (5 decimals).
    ok &= (q.z_m * 1e5 - 17.0).abs() < 0.5;
    check(4, "uncharged tip heights, both presets", ok);
}

fn sweep_column(preset: &MaterialPreset, kind: TensionKind, us: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(us.len());
    let mut seed = None;
    for &u in us {
        let problem = derive_problem(preset, u, kind).unwrap();
        let (p, _) = solve_tolman_seeded(&problem, seed).unwrap();
        seed = Some(p.z_m);
        out.push(p.z_m);
    }
    out
}

#[test]
fn criterion_05_charged_large_column() {
    let us: Vec<f64> = TABLE3A.iter().map(|&(u, _)| u).collect();
    let col = sweep_column(&MaterialPreset::large(), TensionKind::Constant, &us);
    let mut ok = true;
    for (i, &(_, zm_ref)) in TABLE3A.iter().enumerate() {
        ok &= rel(col[i], zm_ref) < 0.10;
    }
    ok &= col.windows(2).all(|w| w[1] > w[0]);
    let pts: Vec<(f64, f64)> = us.iter().copied().zip(col.iter().copied()).collect();
    ok &= quadratic_check(&pts).unwrap() < 0.10;
    check(5, "charged large-capillary column, quadratic trend", ok);
}

#[test]
fn criterion_06_large_limit_potential() {
    let preset = MaterialPreset::large();
    let (u_lim, _) = limit_potential(&preset, TensionKind::Constant, 0.0, 8000.0).unwrap();
    let mut ok = (5200.0..=5800.0).contains(&u_lim);
    let problem = derive_problem(&preset, 5500.0, TensionKind::Constant).unwrap();
    let (p, _) = solve_tolman_seeded(&problem, Some(0.85)).unwrap();
    ok &= (0.90..=1.00).contains(&p.z_m);
    check(6, "large-capillary limit potential", ok);
}

#[test]
fn criterion_07_small_tolman_table() {
    let preset = MaterialPreset::small();
    let us: Vec<f64> = TABLE3B.iter().map(|&(u, _)| u).collect();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for kind in TensionKind::ALL {
        cols.push(sweep_column(&preset, kind, &us));
    }
    let mut ok = true;
    for (i, &(_, refs)) in TABLE3B.iter().enumerate() {
        for (j, &zm_ref) in refs.iter().enumerate() {
            ok &= rel(cols[j][i], zm_ref) < 0.10;
        }
        // Ordering per row: exponential >= tanh-increasing >= constant
        // >= tanh-decreasing.
        let (z0, z1, z2, z3) = (cols[0][i], cols[1][i], cols[2][i], cols[3][i]);
        let eps = 1e-9;
        ok &= z1 >= z2 - eps && z2 >= z0 - eps && z0 >= z3 - eps;
    }
    // The weakened-tension law at 800 V sits well below the constant one.
    let i800 = us.len() - 1;
    ok &= cols[3][i800] <= 0.75 * cols[0][i800];
    check(7, "small-capillary table, tension-law ordering", ok);
}

#[test]
fn criterion_08_small_limit_potentials() {
    let preset = MaterialPreset::small();
    let (u0, _) = limit_potential(&preset, TensionKind::Constant, 0.0, 2000.0).unwrap();
    let (u1, _) = limit_potential(&preset, TensionKind::Exponential, 0.0, 2000.0).unwrap();
    let mut ok = rel(u0, 840.0) < 0.10;
    let shift = u0 - u1;
    ok &= (20.0..=60.0).contains(&shift);
    check(
        8,
        &format!("small-capillary limit potentials (constant {u0:.0} V, shift {shift:.0} V)"),
        ok,
    );
}

#[test]
fn criterion_09_variational_calibration() {
    let preset = MaterialPreset::large();
    let derive = |u: f64| derive_problem(&preset, u, TensionKind::Constant);
    // Calibrate below the variational limit potential, where the parabolic
    // trial family still represents the interface.
    let us = [0.0, 1000.0, 2000.0, 3000.0];
    let col = sweep_column(&preset, TensionKind::Constant, &us);
    let curve: Vec<(f64, f64)> = us.iter().copied().zip(col.iter().copied()).collect();
    let cal = calibrate_reff(&curve, derive).unwrap();
    let mut ok = (0.25..=0.37).contains(&cal.reff_hat);
    for &(u, zm_shoot) in curve.iter().take(4) {
        let zm_var = minimize_energy(&derive(u).unwrap(), cal.reff_hat).unwrap();
        ok &= rel(zm_var, zm_shoot) < 0.15;
    }
    check(
        9,
        &format!("variational calibration (R_eff/R = {:.3})", cal.reff_hat),
        ok,
    );
}

#[test]
fn criterion_10_property_suite() {
    let mut ok = true;

    // Forward vs reverse shooting and back-integration, uncharged large case.
    let problem = derive_problem(&MaterialPreset::large(), 0.0, TensionKind::Constant).unwrap();
    let (fwd, _) = shoot(&problem, &|_| 1.0).unwrap();
    let rev = shoot_reverse(&problem, &|_| 1.0).unwrap();
    ok &= (fwd.z_m - rev.z_m).abs() < 1e-4;
    ok &= back_integration_check(&fwd, &problem, &|_| 1.0).unwrap() < 1e-6;

    // Surface charge maximal at the tip for charged solves.
    let mut seed = None;
    let mut prev_zm = 0.0;
    for u in [1000.0, 2000.0, 3000.0, 4000.0] {
        let problem = derive_problem(&MaterialPreset::large(), u, TensionKind::Constant).unwrap();
        let (p, _) = solve_tolman_seeded(&problem, seed).unwrap();
        seed = Some(p.z_m);
        let tip_sigma = p.samples[0].sigma_hat;
        ok &= p
            .samples
            .iter()
            .all(|s| s.sigma_hat <= tip_sigma + 1e-12);
        // Monotonic tip height in the potential.
        ok &= p.z_m > prev_zm;
        prev_zm = p.z_m;
    }

    // Frozen-tension outer iteration is nearly stationary: the final
    // corrected solve moves the tip by < 2% relative to the previous one.
    let problem = derive_problem(&MaterialPreset::small(), 600.0, TensionKind::Exponential).unwrap();
    let (_, report) = solve_tolman_seeded(&problem, None).unwrap();
    ok &= report.converged && report.delta_zm_last < 0.02;

    // Closed-form energies against Simpson quadrature.
    let quad = |f: &dyn Fn(f64) -> f64| -> f64 {
        let n = 4000;
        let h = 1.0 / n as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    };
    for zm in [0.1, 0.5, 0.9] {
        // Area of z = zm (1 - r^2) over the unit disc, per pi.
        let e_surf = quad(&|r: f64| {
            2.0 * r * (1.0 + 4.0 * zm * zm * r * r).sqrt()
        });
        ok &= (surface_energy(zm) - e_surf).abs() < 1e-10;
        let (k1, k2) = (0.25192, 2.68456);
        // -k1 * (k2 V + int z dV) with dV = 2 r z dr, per pi.
        let e_grav = -k1
            * quad(&|r: f64| {
                let z = zm * (1.0 - r * r);
                2.0 * r * z * (k2 + 0.5 * z)
            });
        ok &= (gravity_energy(zm, k1, k2) - e_grav).abs() < 1e-10;
    }

    // Logarithm identity between the two charge denominators.
    for zm in [0.1_f64, 0.5, 0.9] {
        let d_hat = 13.4228;
        let h = 0.25 / zm - zm;
        let lhs = ((d_hat + h) / (zm + h)).ln();
        let rhs = (1.0 + 4.0 * zm * (d_hat - zm)).ln();
        ok &= (lhs - rhs).abs() < 1e-12;
    }

    check(10, "property suite", ok);
}
