/* Copyright qring contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the qring library. All functions return a qring_status; on failure a
 * thread-local message is available from qring_last_error(). Handles are opaque and must be
 * released with the matching *_free function.
 */
#ifndef QRING_QRING_H
#define QRING_QRING_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QRING_BUILDING_LIBRARY)
#define QRING_API __declspec(dllexport)
#else
#define QRING_API __declspec(dllimport)
#endif
#elif defined(QRING_BUILDING_LIBRARY)
#define QRING_API __attribute__((visibility("default")))
#else
#define QRING_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qring_status {
  QRING_OK = 0,
  QRING_INVALID_ARGUMENT,
  QRING_NON_UNITARY,
  QRING_NOT_UNITARY,
  QRING_SINGULAR_MAP,
  QRING_SCAN_EXHAUSTED,
  QRING_INTERNAL_INVARIANT,
  QRING_RANK_MISMATCH,
  QRING_NOT_SUSY_CASE,
  QRING_AMBIGUOUS,
  QRING_INCONSISTENT,
  QRING_DEGENERATE_TAIL,
  QRING_NOISY_TAIL,
  QRING_DIVISION_GUARD,
  QRING_OUT_OF_DOMAIN,
  QRING_NO_CONVERGENCE,
  QRING_NON_CONVERGENT,
  QRING_UNSUPPORTED,
  QRING_NOT_SPECIAL_UNITARY,
  QRING_UNKNOWN_ERROR = 100
} qring_status;

typedef struct qring_complex {
  double re;
  double im;
} qring_complex;

/* U = e^{i xi} [[alpha, beta], [-conj(beta), conj(alpha)]], xi in [0, pi). */
typedef struct qring_u2 {
  double xi;
  qring_complex alpha;
  qring_complex beta;
} qring_u2;

typedef struct qring_triple {
  double xi;
  double alpha_r;
  double beta_i;
} qring_triple;

typedef struct qring_geometry {
  double l;
  double l0;
} qring_geometry;

typedef enum qring_sector { QRING_NEGATIVE = 0, QRING_ZERO = 1, QRING_POSITIVE = 2 } qring_sector;

typedef struct qring_level {
  int sector;
  double wavenumber;
  double energy;
  int multiplicity;
  int near_double;
} qring_level;

/* Zero fields select the library defaults. */
typedef struct qring_options {
  double rank_tol;
  double merit_tol;
  int grid_per_pi;
} qring_options;

enum {
  QRING_FLAG_P = 1 << 0,
  QRING_FLAG_T = 1 << 1,
  QRING_FLAG_PT = 1 << 2,
  QRING_FLAG_F1 = 1 << 3,
  QRING_FLAG_F2 = 1 << 4,
  QRING_FLAG_F3 = 1 << 5,
  QRING_FLAG_F4 = 1 << 6,
  QRING_FLAG_F5 = 1 << 7,
  QRING_FLAG_SELF_DUAL = 1 << 8,
  QRING_FLAG_SUSY_PLUS = 1 << 9,
  QRING_FLAG_SUSY_MINUS = 1 << 10
};

typedef struct qring_classification {
  unsigned flags;
  int has_separated;
  double separated[2];
  int has_walls;
  double walls[2]; /* wall at x = 0, wall at x = l; +inf for Neumann */
} qring_classification;

typedef struct qring_spectrum qring_spectrum;
typedef struct qring_prefix qring_prefix;
typedef struct qring_kernel qring_kernel;

QRING_API const char* qring_version(void);
QRING_API const char* qring_status_string(qring_status s);
QRING_API const char* qring_last_error(void);

/* Matrices are row-major 2x2. */
QRING_API qring_status qring_u2_from_matrix(const qring_complex m[4], qring_u2* out);
QRING_API qring_status qring_u2_to_matrix(const qring_u2* u, qring_complex out[4]);
QRING_API qring_status qring_u2_triple(const qring_u2* u, qring_triple* out);
QRING_API qring_status qring_u2_canonical(const qring_triple* t, qring_u2* out);
QRING_API qring_status qring_u2_parity(const qring_u2* u, qring_u2* out);
QRING_API qring_status qring_u2_time_reversal(const qring_u2* u, qring_u2* out);
QRING_API qring_status qring_u2_pt(const qring_u2* u, qring_u2* out);
QRING_API qring_status qring_u2_p_theta(const qring_u2* u, double theta, qring_u2* out);
QRING_API qring_status qring_u2_classify(const qring_u2* u, const qring_geometry* g,
                                         qring_classification* out);
QRING_API qring_status qring_triple_distance(const qring_triple* a, const qring_triple* b,
                                             double* out);
/* Fills out[0..count) with Haar-distributed U(2) elements from a seeded stream. */
QRING_API qring_status qring_haar_u2(uint64_t seed, size_t count, qring_u2* out);

QRING_API qring_status qring_spectrum_compute(const qring_u2* u, const qring_geometry* g,
                                              int count, const qring_options* opt,
                                              qring_spectrum** out);
/* u1 at x = 0, u2 at x = l/2. */
QRING_API qring_status qring_spectrum_compute_two_point(const qring_u2* u1, const qring_u2* u2,
                                                        const qring_geometry* g, int count,
                                                        const qring_options* opt,
                                                        qring_spectrum** out);
QRING_API size_t qring_spectrum_size(const qring_spectrum* s);
QRING_API qring_status qring_spectrum_level(const qring_spectrum* s, size_t i, qring_level* out);
QRING_API void qring_spectrum_free(qring_spectrum* s);

/* v must lie in SU(2). */
QRING_API qring_status qring_conjugate_pair(const qring_u2* u1, const qring_u2* u2,
                                            const qring_complex v[4], qring_u2* out1,
                                            qring_u2* out2);
/* u = v^{-1} diag(e^{i theta_plus}, e^{i theta_minus}) v. */
QRING_API qring_status qring_diagonalize(const qring_u2* u, qring_complex v[4],
                                         double* theta_plus, double* theta_minus);

/* positive_k ascending, one entry per distinct level; 0..2 negative kappas. */
QRING_API qring_status qring_prefix_create(const qring_geometry* g, const double* positive_k,
                                           size_t n_positive, int has_zero_mode,
                                           const double* negative_kappa, size_t n_negative,
                                           qring_prefix** out);
QRING_API qring_status qring_prefix_from_spectrum(const qring_spectrum* s,
                                                  const qring_geometry* g, qring_prefix** out);
QRING_API void qring_prefix_free(qring_prefix* p);

typedef enum qring_case { QRING_CASE_I = 0, QRING_CASE_II, QRING_CASE_III, QRING_CASE_AMBIGUOUS } qring_case;
typedef enum qring_method { QRING_ASYMPTOTIC = 0, QRING_FIT, QRING_BOTH } qring_method;

typedef struct qring_inversion {
  qring_triple triple;
  int label;    /* qring_case from the tail statistics */
  int resolved; /* qring_case used for the answer */
  double max_abs_sin;
  double tail_cos_mean;
  double tail_cos_spread;
  int has_fit;
  qring_triple fit;
  double fit_residual;
  double disagreement;
  int n_warnings;
} qring_inversion;

/* Warnings of the most recent qring_invert call on this thread, by index. */
QRING_API const char* qring_invert_warning(int i);

QRING_API qring_status qring_invert(const qring_prefix* p, qring_method method, uint64_t seed,
                                    qring_inversion* out);

/* Closed forms need a scale-invariant U; AUTO picks box, smooth or the general image sum. */
typedef enum qring_kernel_family {
  QRING_KERNEL_AUTO = 0,
  QRING_KERNEL_BOX,
  QRING_KERNEL_SMOOTH,
  QRING_KERNEL_F2,
  QRING_KERNEL_SPECTRAL
} qring_kernel_family;

QRING_API qring_status qring_kernel_create(const qring_u2* u, const qring_geometry* g,
                                           qring_kernel_family family, int n_levels,
                                           qring_kernel** out);
/* time = -i tau is Euclidean; real time needs n_max > 0. */
QRING_API qring_status qring_kernel_eval(const qring_kernel* k, double a, double b,
                                         qring_complex time, double truncation_tol, int n_max,
                                         qring_complex* out);
/* The family actually used, after AUTO resolution. */
QRING_API qring_kernel_family qring_kernel_family_of(const qring_kernel* k);
QRING_API void qring_kernel_free(qring_kernel* k);

typedef struct qring_crosscheck {
  int family; /* QRING_KERNEL_BOX, QRING_KERNEL_SMOOTH or QRING_KERNEL_F2 */
  double max_deviation;
  int unimodular;
  int truncation_warning;
} qring_crosscheck;

/* Compares image and spectral sums at Euclidean time tau on an n x n grid of interior points. */
QRING_API qring_status qring_kernel_crosscheck(const qring_u2* u, const qring_geometry* g,
                                               double tau, int n, int n_levels,
                                               qring_crosscheck* out);

#ifdef __cplusplus
}
#endif

#endif /* QRING_QRING_H */
