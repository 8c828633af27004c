#ifndef STABMAGIC_H
#define STABMAGIC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SM_OK 0

#define SM_ERR_NULL_POINTER 1

#define SM_ERR_INVALID_ARGUMENT 2

#define SM_ERR_DIMENSION 3

#define SM_ERR_UNSUPPORTED 4

#define SM_ERR_NUMERICAL 5

#define SM_ERR_PANIC 6

// Opaque pure state.
typedef struct SmState SmState;

// Opaque unitary.
typedef struct SmUnitary SmUnitary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *sm_last_error_message(void);

// Builds a normalized state from `len = 2^n` real and imaginary parts.
//
// # Safety
// `re` and `im` must point to `len` doubles; `out` must be writable.
int sm_state_from_amplitudes(const double *re,
                             const double *im,
                             size_t len,
                             struct SmState **out_state);

// # Safety
// `state` must come from this library or be null.
void sm_state_free(struct SmState *state);

// Number of qubits, or 0 for a null handle.
//
// # Safety
// `state` must be a valid handle or null.
size_t sm_state_num_qubits(const struct SmState *state);

// Copies the `2^n` amplitudes into `re`/`im`, each of capacity `len`.
//
// # Safety
// `re` and `im` must be writable for `len` doubles.
int sm_state_amplitudes(const struct SmState *state, double *re, double *im, size_t len);

// Library gate by name (`t`, `h`, `rz`, `ccz`, `qft`, ...). `qubits` is
// only used by size-generic gates and may be 0 otherwise.
//
// # Safety
// `name` must be a NUL-terminated string; `params` must hold `num_params`
// doubles.
int sm_unitary_from_gate(const char *name,
                         const double *params,
                         size_t num_params,
                         size_t qubits,
                         struct SmUnitary **out_unitary);

// Dense unitary from `dim * dim` row-major entries; unitarity is checked.
//
// # Safety
// `re` and `im` must point to `dim * dim` doubles.
int sm_unitary_from_matrix(const double *re,
                           const double *im,
                           size_t dim,
                           struct SmUnitary **out_unitary);

// Unitary of a circuit in the text format (one gate per line). `qubits = 0`
// infers the register size.
//
// # Safety
// `text` must be a NUL-terminated string.
int sm_unitary_from_circuit(const char *text, size_t qubits, struct SmUnitary **out_unitary);

// # Safety
// `unitary` must come from this library or be null.
void sm_unitary_free(struct SmUnitary *unitary);

// # Safety
// `unitary` must be a valid handle or null.
size_t sm_unitary_num_qubits(const struct SmUnitary *unitary);

// `(U (x) I)|psi>`, acting on the leading qubits of `state`.
//
// # Safety
// Handles must be valid; `out_state` must be writable.
int sm_unitary_apply(const struct SmUnitary *unitary,
                     const struct SmState *state,
                     struct SmState **out_state);

// Stabilizer Rényi entropy `M_alpha` in bits.
//
// # Safety
// `state` must be valid; `out_value` must be writable.
int sm_sre(const struct SmState *state, double alpha, double *out_value);

// Writes the `4^n` Pauli expectations, indexed by `(x_mask << n) | z_mask`.
//
// # Safety
// `buf` must be writable for `len` doubles.
int sm_pauli_spectrum(const struct SmState *state, double *buf, size_t len);

// Stabilizer nullity of a state.
//
// # Safety
// `state` must be valid; `out_value` must be writable.
int sm_stabilizer_nullity(const struct SmState *state, size_t *out_value);

// T-count lower bounds for a unitary on at most 4 qubits: the Choi-state
// 2-SRE (bits), the bound derived from it, and the nullity bound.
//
// # Safety
// `unitary` must be valid; all out-pointers must be writable.
int sm_tcount_bound(const struct SmUnitary *unitary,
                    double *out_choi_sre,
                    uint64_t *out_sre_bound,
                    uint64_t *out_nullity_bound);

// Strict amortized `M_alpha`: maximum over stabilizer inputs with `n`
// ancillas. Two-qubit unitaries need `allow_large != 0`.
//
// # Safety
// `unitary` must be valid; `out_value` must be writable.
int sm_strict_amortized_sre(const struct SmUnitary *unitary,
                            double alpha,
                            int allow_large,
                            double *out_value);

// Variational lower bound on the amortized `M_alpha` with `ancillas`
// extra qubits; deterministic for a fixed `seed` and `restarts`.
//
// # Safety
// `unitary` must be valid; `out_value` must be writable.
int sm_amortized_sre_lower_bound(const struct SmUnitary *unitary,
                                 double alpha,
                                 size_t ancillas,
                                 size_t restarts,
                                 uint64_t seed,
                                 double *out_value);

// Robustness of magic (not its logarithm) for states on at most 3 qubits.
//
// # Safety
// `state` must be valid; `out_value` must be writable.
int sm_robustness_of_magic(const struct SmState *state, double *out_value);

// Stabilizer extent for states on at most 3 qubits.
//
// # Safety
// `state` must be valid; `out_value` must be writable.
int sm_stabilizer_extent(const struct SmState *state, double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STABMAGIC_H */
