#ifndef NCWITNESS_H
#define NCWITNESS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum NcwStatus {
  NCW_STATUS_OK = 0,
  NCW_STATUS_NULL_POINTER = 1,
  NCW_STATUS_INVALID_ARGUMENT = 2,
  NCW_STATUS_INVALID_STATE = 3,
  NCW_STATUS_DIMENSION_MISMATCH = 4,
  NCW_STATUS_NOT_CONVERGED = 5,
  NCW_STATUS_PARSE_ERROR = 6,
  NCW_STATUS_BUFFER_TOO_SMALL = 7,
  NCW_STATUS_PANIC = 8,
} NcwStatus;

// Which qubit a projective measurement acts on.
typedef enum NcwSubsystem {
  NCW_SUBSYSTEM_A = 0,
  NCW_SUBSYSTEM_B = 1,
} NcwSubsystem;

// Opaque tomography record.
typedef struct NcwRecord NcwRecord;

// Opaque density matrix.
typedef struct NcwState NcwState;

// Witness evaluation; polarizations are from the CH/CNOT readout.
typedef struct NcwWitnessReport {
  double map_value;
  double factor_00;
  double factor_1plus;
  double z1;
  double z2;
  double z2prime;
  double c_used;
  bool ncc_detected;
} NcwWitnessReport;

// Discord and the optimal measurement angles.
typedef struct NcwDiscordResult {
  double discord;
  double mutual_information;
  double classical_correlation;
  double conditional_entropy_min;
  double theta;
  double phi;
} NcwDiscordResult;

// Relaxation times in seconds and scalar coupling in Hz.
typedef struct NcwChannelSpec {
  double t1_q1;
  double t2_q1;
  double t1_q2;
  double t2_q2;
  double j_coupling;
  bool include_j;
} NcwChannelSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *ncw_status_message(enum NcwStatus status);

// Message of the last failed call on this thread, or "" after a success.
// The pointer stays valid until the next `ncw_*` call on this thread.
const char *ncw_last_error(void);

// Built-in state by name: "sigma", "bell", "mixed" or "zero".
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum NcwStatus ncw_state_builtin(const char *name, struct NcwState **out);

// Seeded random density matrix of dimension 2 or 4.
//
// # Safety
// `out` must be a valid pointer.
enum NcwStatus ncw_state_random(size_t dim, uint64_t seed, struct NcwState **out);

// State from row-major real and imaginary parts, each `dim * dim` long.
// `im` may be null for a real matrix. The input is validated.
//
// # Safety
// `re` (and `im` if non-null) must point to `dim * dim` doubles.
enum NcwStatus ncw_state_from_entries(size_t dim,
                                      const double *re,
                                      const double *im,
                                      struct NcwState **out);

// State from DensityMatrix JSON {"dim", "rows", "cols", "re", "im"}.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum NcwStatus ncw_state_from_json(const char *json, struct NcwState **out);

// Serializes a state as JSON into `buf` (NUL-terminated). `needed` receives
// the required size including the terminator; if `len` is too small the
// call returns `NCW_STATUS_BUFFER_TOO_SMALL` and writes nothing to `buf`.
//
// # Safety
// `buf` must have room for `len` bytes (it may be null when `len` is 0).
enum NcwStatus ncw_state_to_json(const struct NcwState *state,
                                 char *buf,
                                 size_t len,
                                 size_t *needed);

// Dimension of a state (2 or 4), or 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle.
size_t ncw_state_dim(const struct NcwState *state);

// Copies the row-major entries into `re` and `im` (each `dim * dim` long).
//
// # Safety
// `re` and `im` must each have room for `len` doubles.
enum NcwStatus ncw_state_entries(const struct NcwState *state, double *re, double *im, size_t len);

// Releases a state handle. Null is ignored.
//
// # Safety
// `state` must come from an `ncw_*` constructor and not be used afterwards.
void ncw_state_free(struct NcwState *state);

// Witness map c - Tr(rho|00><00|) Tr(rho|1+><1+|) of a two-qubit state.
//
// # Safety
// `state` must be a live handle and `out` a valid pointer.
enum NcwStatus ncw_witness(const struct NcwState *state, double c, struct NcwWitnessReport *out);

// Witness map from the three readout polarizations.
double ncw_map_value_polarization(double z1, double z2, double z2prime, double c);

// Quantum discord in bits with the measurement on `measured`.
//
// # Safety
// `state` must be a live handle and `out` a valid pointer.
enum NcwStatus ncw_discord(const struct NcwState *state,
                           enum NcwSubsystem measured,
                           struct NcwDiscordResult *out);

// Von Neumann entropy in bits.
//
// # Safety
// `state` must be a live handle and `out` a valid pointer.
enum NcwStatus ncw_entropy(const struct NcwState *state, double *out);

// Uhlmann-Jozsa fidelity of two states of equal dimension.
//
// # Safety
// `a` and `b` must be live handles and `out` a valid pointer.
enum NcwStatus ncw_fidelity(const struct NcwState *a, const struct NcwState *b, double *out);

// Evolves a two-qubit state for `t` seconds under the relaxation channel.
//
// # Safety
// `state` and `spec` must be valid and `out` a valid pointer.
enum NcwStatus ncw_evolve(const struct NcwState *state,
                          const struct NcwChannelSpec *spec,
                          double t,
                          struct NcwState **out);

// Simulated Pauli tomography with Gaussian noise of width `noise_sigma`.
//
// # Safety
// `state` must be a live handle and `out` a valid pointer.
enum NcwStatus ncw_tomo_measure(const struct NcwState *state,
                                double noise_sigma,
                                uint64_t seed,
                                struct NcwRecord **out);

// Expectation value stored in a record for a label such as "ZX".
//
// # Safety
// `record` must be a live handle, `label` a NUL-terminated string and `out` valid.
enum NcwStatus ncw_record_value(const struct NcwRecord *record, const char *label, double *out);

// Linear inversion followed by projection onto the density matrices.
//
// # Safety
// `record` must be a live handle and `out` a valid pointer.
enum NcwStatus ncw_tomo_reconstruct(const struct NcwRecord *record, struct NcwState **out);

// Releases a record handle. Null is ignored.
//
// # Safety
// `record` must come from `ncw_tomo_measure` and not be used afterwards.
void ncw_record_free(struct NcwRecord *record);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCWITNESS_H */
