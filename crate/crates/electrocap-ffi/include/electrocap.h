#ifndef ELECTROCAP_H
#define ELECTROCAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum EcStatus {
  EC_OK = 0,
  EC_NULL_POINTER = 1,
  EC_NO_CONVERGENCE = 2,
  EC_ABOVE_LIMIT = 3,
  EC_BAD_CONFIG = 4,
  EC_INTERNAL = 5,
} EcStatus;

/**
 * Opaque material-parameter handle.
 */
typedef struct EcMaterial EcMaterial;

/**
 * Opaque solved-profile handle.
 */
typedef struct EcProfile EcProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Preconfigured millimetre-scale capillary (R = 0.745 mm).
 */
struct EcMaterial *ec_material_large(void);

/**
 * Preconfigured micrometre-scale capillary (R = 0.745 um).
 */
struct EcMaterial *ec_material_small(void);

/**
 * Custom material parameters (SI units). Returns null when the parameters
 * are not physical.
 */
struct EcMaterial *ec_material_new(double gamma0,
                                   double rho_l,
                                   double h_head,
                                   double d_plate,
                                   double r_cap,
                                   double r0,
                                   double epsilon,
                                   double g_accel,
                                   double alpha);

/**
 * Release a material handle. Null is a no-op.
 */
void ec_material_free(struct EcMaterial *material);

/**
 * Solve the meniscus at `u0_volts` for tension law `kind` (0..=3) and
 * write the tip height to `out_zm`.
 */
enum EcStatus ec_solve_tip(const struct EcMaterial *material,
                           double u0_volts,
                           int32_t kind,
                           double *out_zm);

/**
 * Solve the meniscus and return a profile handle, or null on failure.
 */
struct EcProfile *ec_solve_profile(const struct EcMaterial *material,
                                   double u0_volts,
                                   int32_t kind);

/**
 * Number of samples in a profile.
 */
uintptr_t ec_profile_len(const struct EcProfile *profile);

/**
 * Tip height of a profile.
 */
double ec_profile_zm(const struct EcProfile *profile);

/**
 * Copy sample `index` of a profile into the output pointers. Any output
 * pointer may be null to skip that column.
 */
enum EcStatus ec_profile_row(const struct EcProfile *profile,
                             uintptr_t index,
                             double *out_r,
                             double *out_z,
                             double *out_dz_dr,
                             double *out_sigma_hat,
                             double *out_gamma_hat);

/**
 * Release a profile handle. Null is a no-op.
 */
void ec_profile_free(struct EcProfile *profile);

/**
 * Largest potential in `[u_lo, u_hi]` (volts) admitting an equilibrium
 * meniscus, resolved to 1 V. Writes the potential and the tip height there.
 */
enum EcStatus ec_limit_potential(const struct EcMaterial *material,
                                 int32_t kind,
                                 double u_lo,
                                 double u_hi,
                                 double *out_u_lim,
                                 double *out_zm);

/**
 * Normalized minimal radius of a charged drop at potential `u_microvolts`
 * for tension law `kind` (0..=2; the decreasing law has no stable branch).
 */
enum EcStatus ec_droplet_radius(double u_microvolts,
                                double kappa,
                                double rho_n,
                                double alpha,
                                int32_t kind,
                                double *out_x);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ELECTROCAP_H */
