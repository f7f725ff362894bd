/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef QTRAJ_H
#define QTRAJ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QtKind {
  QT_KIND_MCWF = 0,
  QT_KIND_HOMODYNE = 1,
} QtKind;

typedef enum QtRateFlavor {
  QT_RATE_FLAVOR_LINEAR = 0,
  QT_RATE_FLAVOR_LOG = 1,
} QtRateFlavor;

typedef enum QtStatus {
  QT_STATUS_OK = 0,
  QT_STATUS_NULL_POINTER = 1,
  QT_STATUS_INVALID_PARAMETER = 2,
  QT_STATUS_OUT_OF_DOMAIN = 3,
  QT_STATUS_RESOLUTION = 4,
  QT_STATUS_GRID_MISMATCH = 5,
  QT_STATUS_INSTABILITY = 6,
  QT_STATUS_STEP_GUARD = 7,
  QT_STATUS_INDEX_OUT_OF_RANGE = 8,
  QT_STATUS_PANIC = 9,
} QtStatus;

typedef struct QtAmplitudeSeries QtAmplitudeSeries;

typedef struct QtEnsemble QtEnsemble;

typedef struct QtTrajectory QtTrajectory;

typedef struct QtComplex {
  double re;
  double im;
} QtComplex;

// Driven two-level atom under frequent null-result monitoring, in scaling variables.
typedef struct QtMonitoredAtom {
  // `lambda * tau`
  double x;
  // `E / lambda`
  double c;
  double gamma;
  double rabi;
  double delta;
  // Initial excited population and relative phase of the ground amplitude.
  double p_excited;
  double phase;
} QtMonitoredAtom;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into this library on the same thread.
const char *qt_last_error(void);

// NUL-terminated library version.
const char *qt_version(void);

// Survival amplitude for a Lorentzian environment.
//
// # Safety
// `out` must be valid for writing one `QtComplex`.
enum QtStatus qt_amplitude_lorentzian(double t,
                                      double lambda,
                                      double gamma,
                                      double e,
                                      struct QtComplex *out);

// Amplitude after `n` null measurements spaced by `tau`.
//
// # Safety
// `out` must be valid for writing one `QtComplex`.
enum QtStatus qt_survival_repeated(double tau,
                                   uint64_t n,
                                   double lambda,
                                   double gamma,
                                   double e,
                                   struct QtComplex *out);

// Scaling-form amplitude at time `t`.
//
// # Safety
// `out` must be valid for writing one `QtComplex`.
enum QtStatus qt_amplitude_scaled(double t,
                                  double x,
                                  double c,
                                  double gamma,
                                  struct QtComplex *out);

// # Safety
// `out` must be valid for writing one `double`.
enum QtStatus qt_effective_rate_scaled(double x, double c, double gamma, double *out);

// # Safety
// `out` must be valid for writing one `double`.
enum QtStatus qt_effective_rate_empirical(struct QtComplex abar,
                                          double dt,
                                          enum QtRateFlavor flavor,
                                          double *out);

// Probability of no click for the state `alpha0 |e> + beta0 |g>`.
//
// # Safety
// `out` must be valid for writing one `double`.
enum QtStatus qt_null_probability(struct QtComplex abar,
                                  struct QtComplex alpha0,
                                  struct QtComplex beta0,
                                  double *out);

// Solves the memory-kernel equation for a Lorentzian environment on the
// grid `k * spacing`, `k < len`, with kernel step `h`. Values are in the
// lab frame.
//
// # Safety
// `out` must be valid for writing one pointer.
enum QtStatus qt_volterra_lorentzian(double gamma,
                                     double omega0,
                                     double lambda,
                                     double e_g,
                                     double e_e,
                                     double h,
                                     double spacing,
                                     uintptr_t len,
                                     struct QtAmplitudeSeries **out);

// # Safety
// `series` must be null or a live handle.
uintptr_t qt_series_len(const struct QtAmplitudeSeries *series);

// # Safety
// `series` must be a live handle; `t` and `value` valid for writing.
enum QtStatus qt_series_get(const struct QtAmplitudeSeries *series,
                            uintptr_t k,
                            double *t,
                            struct QtComplex *value);

// # Safety
// `series` must be null or a handle not yet freed.
void qt_series_free(struct QtAmplitudeSeries *series);

// Jump trajectory with coarse step `dt`.
//
// # Safety
// `atom` must point to a valid `QtMonitoredAtom`; `out` valid for writing one pointer.
enum QtStatus qt_mcwf_trajectory(const struct QtMonitoredAtom *atom,
                                 double dt,
                                 double t_final,
                                 uint64_t seed,
                                 struct QtTrajectory **out);

// Diffusive (homodyne) trajectory with local-oscillator phase `phi`.
//
// # Safety
// `atom` must point to a valid `QtMonitoredAtom`; `out` valid for writing one pointer.
enum QtStatus qt_homodyne_trajectory(const struct QtMonitoredAtom *atom,
                                     double phi,
                                     double dt,
                                     double t_final,
                                     uint64_t seed,
                                     struct QtTrajectory **out);

// Number of recorded states (steps + 1).
//
// # Safety
// `traj` must be null or a live handle.
uintptr_t qt_trajectory_len(const struct QtTrajectory *traj);

// Time and excited population of state `k`, plus the event of the step
// ending there: `1`/`0` jump flag for MCWF, the current sample for homodyne,
// `NaN` at `k = 0`.
//
// # Safety
// `traj` must be a live handle; the out-pointers valid for writing.
enum QtStatus qt_trajectory_get(const struct QtTrajectory *traj,
                                uintptr_t k,
                                double *t,
                                double *p_excited,
                                double *event);

// # Safety
// `traj` must be null or a live handle.
uintptr_t qt_trajectory_clamp_count(const struct QtTrajectory *traj);

// # Safety
// `traj` must be null or a handle not yet freed.
void qt_trajectory_free(struct QtTrajectory *traj);

// Runs `n_traj` trajectories and the master equation, sampled at
// `samples` evenly spaced times over `(0, t_final]` rounded to the step grid.
//
// # Safety
// `atom` must point to a valid `QtMonitoredAtom`; `out` valid for writing one pointer.
enum QtStatus qt_ensemble_run(const struct QtMonitoredAtom *atom,
                              enum QtKind kind,
                              double phi,
                              double dt,
                              double t_final,
                              uintptr_t n_traj,
                              uintptr_t samples,
                              uint64_t seed,
                              bool parallel,
                              struct QtEnsemble **out);

// # Safety
// `ens` must be null or a live handle.
uintptr_t qt_ensemble_len(const struct QtEnsemble *ens);

// Sample `k`: time, ensemble-mean excited population, its standard error
// (`NaN` for a single trajectory) and the master-equation value.
//
// # Safety
// `ens` must be a live handle; the out-pointers valid for writing.
enum QtStatus qt_ensemble_get(const struct QtEnsemble *ens,
                              uintptr_t k,
                              double *t,
                              double *mean,
                              double *stderr,
                              double *master);

// # Safety
// `ens` must be null or a live handle.
uintptr_t qt_ensemble_clamp_count(const struct QtEnsemble *ens);

// # Safety
// `ens` must be null or a handle not yet freed.
void qt_ensemble_free(struct QtEnsemble *ens);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QTRAJ_H */
