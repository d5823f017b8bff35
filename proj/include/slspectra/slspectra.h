#ifndef SLSPECTRA_H
#define SLSPECTRA_H

/*
 * C interface to the slspectra library: eigenvalues of -y'' + q y = lambda y
 * on [0,1] under the boundary-condition families T1..T4, periodic and
 * antiperiodic, with trigonometric-polynomial potentials q.
 *
 * All objects are opaque handles created by *_create / *_compute / *_parse
 * and released by the matching *_destroy. Functions returning sl_status set
 * a thread-local message readable through sl_last_error() on failure.
 * Strings returned through char** are allocated by the library and must be
 * released with sl_string_free().
 */

#include <stddef.h>

#if defined(SLSPECTRA_BUILDING)
#define SLSPECTRA_API __attribute__((visibility("default")))
#else
#define SLSPECTRA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SL_OK = 0,
  SL_ERR_NUMERIC = 1, /* non-convergence, contour failure, integrator underflow */
  SL_ERR_CONFIG = 2   /* invalid argument, inadmissible parameter, bad input file */
} sl_status;

typedef enum {
  SL_FAMILY_T1 = 0,
  SL_FAMILY_T2 = 1,
  SL_FAMILY_T3 = 2,
  SL_FAMILY_T4 = 3,
  SL_FAMILY_PERIODIC = 4,
  SL_FAMILY_ANTIPERIODIC = 5
} sl_family;

typedef enum { SL_FORMAT_CSV = 0, SL_FORMAT_JSON = 1 } sl_format;

typedef enum { SL_EVIDENCE_PRESENT = 0, SL_EVIDENCE_ABSENT = 1, SL_EVIDENCE_INCONCLUSIVE = 2 } sl_evidence;

typedef struct sl_potential sl_potential;
typedef struct sl_operator sl_operator;
typedef struct sl_spectrum sl_spectrum;
typedef struct sl_comparison sl_comparison;
typedef struct sl_basis_profile sl_basis_profile;

typedef struct {
  double integration_tol; /* local error tolerance of the ODE integrator */
  double newton_tol;      /* |delta lambda| stopping tolerance */
  int max_newton_iter;
  int threads; /* worker cap; 0 = SL_SPECTRA_THREADS or hardware concurrency */
} sl_solver_options;

typedef struct {
  int n;
  int j; /* 1 or 2 for a labelled simple eigenvalue, 0 merged / unlabelled */
  double re, im;
  int multiplicity;
  double residual; /* |D(lambda)| */
} sl_eigen_record;

typedef struct {
  int n;
  int count;          /* argument-principle count */
  int expected_count; /* 2, or 1 for the simple ground state of T1/T3 */
  int flagged;        /* count != expected_count */
  double center_re, center_im, radius;
} sl_disk_info;

SLSPECTRA_API const char* sl_last_error(void);
SLSPECTRA_API const char* sl_version(void);
SLSPECTRA_API void sl_string_free(char* s);
SLSPECTRA_API void sl_solver_options_default(sl_solver_options* opts);

/* Potentials: coefficient k-1 multiplies cos(2 pi k x) / sin(2 pi k x). */
SLSPECTRA_API sl_status sl_potential_create(const double* cos_re, const double* cos_im, const double* sin_re,
                                            const double* sin_im, int degree, sl_potential** out);
SLSPECTRA_API sl_status sl_potential_from_json(const char* text, sl_potential** out);
SLSPECTRA_API sl_status sl_potential_from_file(const char* path, sl_potential** out);
SLSPECTRA_API void sl_potential_destroy(sl_potential* q);
SLSPECTRA_API sl_status sl_potential_eval(const sl_potential* q, double x, double* re, double* im);
SLSPECTRA_API int sl_potential_is_symmetric(const sl_potential* q);

/* Operators: "T1:beta=3+0i", "T3:alpha=0.5", "periodic", "antiperiodic". */
SLSPECTRA_API sl_status sl_operator_parse(const char* text, sl_operator** out);
SLSPECTRA_API sl_status sl_operator_create(sl_family family, double re, double im, sl_operator** out);
SLSPECTRA_API void sl_operator_destroy(sl_operator* op);
SLSPECTRA_API sl_family sl_operator_family(const sl_operator* op);
/* Parameter within 1e-6 of +-1. */
SLSPECTRA_API int sl_operator_near_degenerate(const sl_operator* op);
SLSPECTRA_API sl_status sl_operator_gamma(const sl_operator* op, double* re, double* im);
SLSPECTRA_API double sl_base_eigenvalue(sl_family family, int n);

SLSPECTRA_API sl_status sl_char_det(const sl_operator* op, const sl_potential* q, double re, double im, double tol,
                                    double* out_re, double* out_im);
SLSPECTRA_API sl_status sl_count_zeros(const sl_operator* op, const sl_potential* q, double center_re,
                                       double center_im, double radius, double tol, int* count);

/* Eigenvalues in the disks n_min..n_max. With allow_partial != 0 failing disks
 * are recorded (sl_spectrum_failure) instead of failing the call. */
SLSPECTRA_API sl_status sl_spectrum_compute(const sl_operator* op, const sl_potential* q, int n_min, int n_max,
                                            const sl_solver_options* opts, int allow_partial, sl_spectrum** out);
SLSPECTRA_API void sl_spectrum_destroy(sl_spectrum* s);
SLSPECTRA_API size_t sl_spectrum_size(const sl_spectrum* s);
SLSPECTRA_API sl_status sl_spectrum_record(const sl_spectrum* s, size_t i, sl_eigen_record* out);
SLSPECTRA_API size_t sl_spectrum_disk_count(const sl_spectrum* s);
SLSPECTRA_API sl_status sl_spectrum_disk(const sl_spectrum* s, size_t i, sl_disk_info* out);
SLSPECTRA_API size_t sl_spectrum_failure_count(const sl_spectrum* s);
SLSPECTRA_API const char* sl_spectrum_failure(const sl_spectrum* s, size_t i);
/* Per-disk Hausdorff distance (multiplicities expanded) between two spectra
 * over the same disk index n. */
SLSPECTRA_API sl_status sl_spectrum_deviation(const sl_spectrum* a, const sl_spectrum* b, int n, double* out);
/* reference may be NULL; otherwise a max_deviation column is added. */
SLSPECTRA_API sl_status sl_spectrum_write(const sl_spectrum* s, const sl_spectrum* reference, sl_format format,
                                          char** out);

/* Asymptotic estimates. */
SLSPECTRA_API sl_status sl_leading_estimate(const sl_operator* op, const sl_potential* q, int n, int j, double* re,
                                            double* im, int* applicable);
SLSPECTRA_API sl_status sl_fixed_point_refine(const sl_operator* op, const sl_potential* q, int n, int j, int order,
                                              int cutoff, double tol, int max_iter, double* re, double* im,
                                              int* iterations);

SLSPECTRA_API sl_status sl_comparison_compute(const sl_operator* op, const sl_potential* q, int n_min, int n_max,
                                              int order, int cutoff, double fp_tol, const sl_solver_options* opts,
                                              int allow_partial, sl_comparison** out);
SLSPECTRA_API void sl_comparison_destroy(sl_comparison* c);
SLSPECTRA_API size_t sl_comparison_rows(const sl_comparison* c);
SLSPECTRA_API sl_status sl_comparison_rate(const sl_comparison* c, double* slope, double* intercept, double* r2,
                                           int* points);
SLSPECTRA_API int sl_comparison_inapplicable_rows(const sl_comparison* c);
SLSPECTRA_API size_t sl_comparison_failure_count(const sl_comparison* c);
SLSPECTRA_API const char* sl_comparison_failure(const sl_comparison* c, size_t i);
SLSPECTRA_API sl_status sl_comparison_write(const sl_comparison* c, sl_format format, char** out);

SLSPECTRA_API sl_status sl_basis_profile_compute(const sl_operator* op, const sl_potential* q, int n_min, int n_max,
                                                 const sl_solver_options* opts, int allow_partial,
                                                 sl_basis_profile** out);
SLSPECTRA_API void sl_basis_profile_destroy(sl_basis_profile* p);
SLSPECTRA_API sl_evidence sl_basis_profile_evidence(const sl_basis_profile* p);
SLSPECTRA_API const char* sl_basis_profile_reason(const sl_basis_profile* p);
/* Effective index of the band, or -1 if none. */
SLSPECTRA_API int sl_basis_profile_effective_index(const sl_basis_profile* p);
SLSPECTRA_API int sl_basis_profile_merged_disks(const sl_basis_profile* p);
SLSPECTRA_API size_t sl_basis_profile_failure_count(const sl_basis_profile* p);
SLSPECTRA_API sl_status sl_basis_profile_write(const sl_basis_profile* p, sl_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* SLSPECTRA_H */
