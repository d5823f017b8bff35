#pragma once

// Ground-truth eigenvalue engine: fundamental system of -y'' + q y = lambda y,
// the characteristic determinant, argument-principle counting and Newton
// refinement of its zeros.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slspectra/boundary.hpp"
#include "slspectra/potential.hpp"

namespace slspectra {

/// Endpoint data of y1 (y1(0)=1, y1'(0)=0) and y2 (y2(0)=0, y2'(0)=1).
struct FundamentalData {
  cplx y1, dy1, y2, dy2;
  cplx wronskian() const { return y1 * dy2 - dy1 * y2; }
};

/// Above this |lambda| the integrator switches to the envelope formulation
/// y = a cos(kx) + b sin(kx)/k, k = sqrt(lambda).
inline constexpr double kEnvelopeThreshold = 100.0;

enum class Integrator {
  /// Local Taylor series of order <= 60 with steps scaled to 1/max(|k|, 2 pi K);
  /// the potential's Taylor coefficients are exact. Default.
  Taylor,
  /// Embedded Runge-Kutta-Fehlberg 7(8), direct for |lambda| <= 100 and on
  /// the envelope beyond. Kept as an independent cross-check.
  RungeKutta,
};

FundamentalData integrate_fundamental(const TrigPotential& q, cplx lambda, double tol,
                                      Integrator method = Integrator::Taylor);

/// Solution with y(0) = y0, y'(0) = dy0 sampled at x_i = i/grid, i = 0..grid.
std::vector<cplx> sample_solution(const TrigPotential& q, cplx lambda, cplx y0, cplx dy0, int grid,
                                  double tol, Integrator method = Integrator::Taylor);

/// det [U_i(y_j)] for the given boundary functionals.
cplx char_det(const BcFunctionals& bc, const FundamentalData& fd);
cplx char_det(const BcFunctionals& bc, const TrigPotential& q, cplx lambda, double tol);
cplx char_det(const OperatorSpec& spec, const TrigPotential& q, cplx lambda, double tol = 1e-12);

struct SolverOptions {
  double integration_tol = 1e-12;
  /// Newton stopping tolerance on |delta lambda|.
  double newton_tol = 1e-9;
  int max_newton_iter = 50;
  /// Extra Newton starting points (asymptotic predictions).
  std::vector<cplx> hints;
};

/// Zeros of D inside the circle, counted with multiplicity.
/// Retries with radius scaled by 1 +- 1%, ... when D vanishes on the contour.
int count_zeros(const BcFunctionals& bc, const TrigPotential& q, cplx center, double radius,
                double tol = 1e-12);
int count_zeros(const OperatorSpec& spec, const TrigPotential& q, cplx center, double radius,
                double tol = 1e-12);

struct EigenRecord {
  int disk_index = 0;
  /// 1 or 2 for a simple eigenvalue of a labelled pair; 0 = merged / unlabelled.
  int branch = 0;
  cplx lambda;
  int multiplicity = 1;
  double residual = 0.0;  ///< |D(lambda)|
};

struct DiskResult {
  int n = 0;
  cplx center;
  double radius = 0.0;
  int count = 0;           ///< argument-principle count
  int expected_count = 2;  ///< 2, or 1 for the simple ground state of T1/T3
  bool flagged = false;    ///< count != expected_count
  double scale = 0.0;      ///< max |D| on the contour
  std::vector<EigenRecord> records;
};

/// All zeros of D inside a circle.
DiskResult locate_in_disk(const BcFunctionals& bc, const TrigPotential& q, cplx center, double radius,
                          const SolverOptions& opts = {});

/// Disk radius n about base_eigenvalue(n); for n = 0, or if the disk count is
/// not the expected one at small n, falls back to an isolation circle of
/// radius half the distance to the neighbouring unperturbed eigenvalues.
DiskResult locate_eigenpair(const OperatorSpec& spec, const TrigPotential& q, int n,
                            const SolverOptions& opts = {});

/// Disk geometry used by locate_eigenpair.
double disk_radius(int n);
double isolation_radius(Family f, int n);

/// Locates disks n_min..n_max with up to `threads` workers. Result order is
/// ascending n regardless of completion order; failures carry an error string.
struct DiskOutcome {
  DiskResult result;
  std::string error;  ///< empty on success
};
std::vector<DiskOutcome> locate_range(const OperatorSpec& spec, const TrigPotential& q, int n_min,
                                      int n_max, const SolverOptions& opts, int threads);

/// Thread count from SL_SPECTRA_THREADS (default: hardware concurrency).
int thread_cap_from_env();

/// Smallest n in [n_min, n_max] such that every disk from n upward counts
/// exactly two zeros in U(n); nullopt if none.
std::optional<int> effective_index(const OperatorSpec& spec, const TrigPotential& q, int n_min,
                                   int n_max, double tol = 1e-12);

/// Eigenfunction at an eigenvalue: null vector of the boundary matrix, L2
/// normalized on the grid, phase fixed so that its pairing with the leading
/// harmonic of index n is real and nonnegative (n < 0: nearest index).
std::vector<cplx> eigenfunction(const OperatorSpec& spec, const TrigPotential& q, cplx lambda, int grid,
                                int n = -1, double tol = 1e-12);

/// Multiplies by a unit phase so that (psi, harmonic) is real and nonnegative.
void fix_phase(std::vector<cplx>& psi, const ExpPoly& harmonic);

/// Nearest unperturbed index for lambda.
int nearest_index(Family f, cplx lambda);

}  // namespace slspectra
