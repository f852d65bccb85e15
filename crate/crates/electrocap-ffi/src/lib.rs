//! C ABI for the electrocap solver.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `_free` function. All entry points return a status code and
//! never unwind across the boundary.

use std::panic::{catch_unwind, AssertUnwindSafe};

use electrocap::meniscus::{derive_problem, solve_tolman, MaterialPreset, MeniscusProfile};
use electrocap::{droplet, meniscus, Error, TensionKind};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcStatus {
    EcOk = 0,
    EcNullPointer = 1,
    EcNoConvergence = 2,
    EcAboveLimit = 3,
    EcBadConfig = 4,
    EcInternal = 5,
}

/// Opaque material-parameter handle.
pub struct EcMaterial(MaterialPreset);

/// Opaque solved-profile handle.
pub struct EcProfile(MeniscusProfile);

fn status_of(e: &Error) -> EcStatus {
    match e {
        Error::NoSolution | Error::NoInteriorMinimum => EcStatus::EcAboveLimit,
        Error::StepFailure { .. }
        | Error::Diverged { .. }
        | Error::NoBracket { .. }
        | Error::SingularTension { .. } => EcStatus::EcNoConvergence,
        _ => EcStatus::EcBadConfig,
    }
}

fn kind_of(code: i32) -> Option<TensionKind> {
    match code {
        0 => Some(TensionKind::Constant),
        1 => Some(TensionKind::Exponential),
        2 => Some(TensionKind::TanhIncreasing),
        3 => Some(TensionKind::TanhDecreasing),
        _ => None,
    }
}

fn guarded(f: impl FnOnce() -> EcStatus) -> EcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(EcStatus::EcInternal)
}

/// Preconfigured millimetre-scale capillary (R = 0.745 mm).
#[no_mangle]
pub extern "C" fn ec_material_large() -> *mut EcMaterial {
    Box::into_raw(Box::new(EcMaterial(MaterialPreset::large())))
}

/// Preconfigured micrometre-scale capillary (R = 0.745 um).
#[no_mangle]
pub extern "C" fn ec_material_small() -> *mut EcMaterial {
    Box::into_raw(Box::new(EcMaterial(MaterialPreset::small())))
}

/// Custom material parameters (SI units). Returns null when the parameters
/// are not physical.
#[no_mangle]
pub extern "C" fn ec_material_new(
    gamma0: f64,
    rho_l: f64,
    h_head: f64,
    d_plate: f64,
    r_cap: f64,
    r0: f64,
    epsilon: f64,
    g_accel: f64,
    alpha: f64,
) -> *mut EcMaterial {
    let preset = MaterialPreset {
        gamma0,
        rho_l,
        h_head,
        d_plate,
        r_cap,
        r0,
        epsilon,
        g_accel,
        alpha,
    };
    if preset.validate().is_err() {
        return std::ptr::null_mut();
    }
    Box::into_raw(Box::new(EcMaterial(preset)))
}

/// Release a material handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn ec_material_free(material: *mut EcMaterial) {
    if !material.is_null() {
        drop(unsafe { Box::from_raw(material) });
    }
}

/// Solve the meniscus at `u0_volts` for tension law `kind` (0..=3) and
/// write the tip height to `out_zm`.
#[no_mangle]
pub extern "C" fn ec_solve_tip(
    material: *const EcMaterial,
    u0_volts: f64,
    kind: i32,
    out_zm: *mut f64,
) -> EcStatus {
    if material.is_null() || out_zm.is_null() {
        return EcStatus::EcNullPointer;
    }
    guarded(|| {
        let preset = unsafe { &(*material).0 };
        let Some(kind) = kind_of(kind) else {
            return EcStatus::EcBadConfig;
        };
        let result = derive_problem(preset, u0_volts, kind).and_then(|p| solve_tolman(&p));
        match result {
            Ok((profile, _)) => {
                if profile.z_m > 1.0 + 1e-6 {
                    return EcStatus::EcAboveLimit;
                }
                unsafe { *out_zm = profile.z_m };
                EcStatus::EcOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Solve the meniscus and return a profile handle, or null on failure.
#[no_mangle]
pub extern "C" fn ec_solve_profile(
    material: *const EcMaterial,
    u0_volts: f64,
    kind: i32,
) -> *mut EcProfile {
    if material.is_null() {
        return std::ptr::null_mut();
    }
    catch_unwind(AssertUnwindSafe(|| {
        let preset = unsafe { &(*material).0 };
        let Some(kind) = kind_of(kind) else {
            return std::ptr::null_mut();
        };
        let result = derive_problem(preset, u0_volts, kind).and_then(|p| solve_tolman(&p));
        match result {
            Ok((profile, _)) if profile.z_m <= 1.0 + 1e-6 => {
                Box::into_raw(Box::new(EcProfile(profile)))
            }
            _ => std::ptr::null_mut(),
        }
    }))
    .unwrap_or(std::ptr::null_mut())
}

/// Number of samples in a profile.
#[no_mangle]
pub extern "C" fn ec_profile_len(profile: *const EcProfile) -> usize {
    if profile.is_null() {
        return 0;
    }
    unsafe { (*profile).0.samples.len() }
}

/// Tip height of a profile.
#[no_mangle]
pub extern "C" fn ec_profile_zm(profile: *const EcProfile) -> f64 {
    if profile.is_null() {
        return f64::NAN;
    }
    unsafe { (*profile).0.z_m }
}

/// Copy sample `index` of a profile into the output pointers. Any output
/// pointer may be null to skip that column.
#[no_mangle]
pub extern "C" fn ec_profile_row(
    profile: *const EcProfile,
    index: usize,
    out_r: *mut f64,
    out_z: *mut f64,
    out_dz_dr: *mut f64,
    out_sigma_hat: *mut f64,
    out_gamma_hat: *mut f64,
) -> EcStatus {
    if profile.is_null() {
        return EcStatus::EcNullPointer;
    }
    let samples = unsafe { &(*profile).0.samples };
    let Some(s) = samples.get(index) else {
        return EcStatus::EcBadConfig;
    };
    unsafe {
        if !out_r.is_null() {
            *out_r = s.r;
        }
        if !out_z.is_null() {
            *out_z = s.z;
        }
        if !out_dz_dr.is_null() {
            *out_dz_dr = s.dz_dr;
        }
        if !out_sigma_hat.is_null() {
            *out_sigma_hat = s.sigma_hat;
        }
        if !out_gamma_hat.is_null() {
            *out_gamma_hat = s.gamma_hat;
        }
    }
    EcStatus::EcOk
}

/// Release a profile handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn ec_profile_free(profile: *mut EcProfile) {
    if !profile.is_null() {
        drop(unsafe { Box::from_raw(profile) });
    }
}

/// Largest potential in `[u_lo, u_hi]` (volts) admitting an equilibrium
/// meniscus, resolved to 1 V. Writes the potential and the tip height there.
#[no_mangle]
pub extern "C" fn ec_limit_potential(
    material: *const EcMaterial,
    kind: i32,
    u_lo: f64,
    u_hi: f64,
    out_u_lim: *mut f64,
    out_zm: *mut f64,
) -> EcStatus {
    if material.is_null() || out_u_lim.is_null() || out_zm.is_null() {
        return EcStatus::EcNullPointer;
    }
    guarded(|| {
        let preset = unsafe { &(*material).0 };
        let Some(kind) = kind_of(kind) else {
            return EcStatus::EcBadConfig;
        };
        match meniscus::limit_potential(preset, kind, u_lo, u_hi) {
            Ok((u_lim, zm)) => {
                unsafe {
                    *out_u_lim = u_lim;
                    *out_zm = zm;
                }
                EcStatus::EcOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Normalized minimal radius of a charged drop at potential `u_microvolts`
/// for tension law `kind` (0..=2; the decreasing law has no stable branch).
#[no_mangle]
pub extern "C" fn ec_droplet_radius(
    u_microvolts: f64,
    kappa: f64,
    rho_n: f64,
    alpha: f64,
    kind: i32,
    out_x: *mut f64,
) -> EcStatus {
    if out_x.is_null() {
        return EcStatus::EcNullPointer;
    }
    guarded(|| {
        let Some(kind) = kind_of(kind) else {
            return EcStatus::EcBadConfig;
        };
        if u_microvolts < 0.0 || kappa <= 0.0 {
            return EcStatus::EcBadConfig;
        }
        let w = kappa * u_microvolts * u_microvolts / 4.0;
        match droplet::equilibrium_radius(w, kind, rho_n, alpha) {
            Ok(x) => {
                unsafe { *out_x = x };
                EcStatus::EcOk
            }
            Err(e) => status_of(&e),
        }
    })
}
