#pragma once

// Asymptotic eigenvalue machinery near a double unperturbed eigenvalue:
// the projections Q, P, P*, Q*, the truncated iteration series, the
// discriminant of the reduced 2x2 problem and its fixed-point refinement.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "slspectra/boundary.hpp"
#include "slspectra/potential.hpp"
#include "slspectra/solver.hpp"

namespace slspectra {

/// Projections of q onto the root-function pair at index n:
/// Q = (q phi_n, e*_n), P = (q e_n, e*_n), P* = (q e_n, phi*_n), Q* = (q phi_n, phi*_n).
struct PairQuantities {
  cplx Q, P, P_star, Q_star;
  cplx gamma;
  double base = 0.0;
  int n = 0;
};

/// T1 uses the closed forms in terms of the weighted Fourier functionals;
/// the other families fall back to the defining inner products.
PairQuantities pair_quantities(const OperatorSpec& spec, const TrigPotential& q, int n);
/// Always the defining inner products (exact trig-product integration).
PairQuantities pair_quantities_direct(const OperatorSpec& spec, const TrigPotential& q, int n);

inline constexpr int kMaxSeriesOrder = 3;

/// Default cutoff n + K + 8.
int default_cutoff(const TrigPotential& q, int n);

/// Partial sums of the iteration series at order k.
/// A, B enter the e*_n equation as the coefficients of u and v; B', A' enter
/// the phi*_n equation as the coefficients of u and v.
struct SeriesState {
  int order = 0;
  int cutoff = 0;
  cplx A, B, A_prime, B_prime;
  /// Per-order term magnitudes, index m-1 for m = 1..order:
  /// |alpha_m|, |beta_m|, |alpha'_m|, |beta'_m|.
  std::vector<std::array<double, 4>> terms;
  /// Largest term magnitude decreases with m.
  bool monotone = true;
};

/// Tables of q-weighted pairings over indices 0..cutoff; independent of lambda,
/// so one engine serves a whole fixed-point iteration.
class SeriesEngine {
 public:
  SeriesEngine(const OperatorSpec& spec, const TrigPotential& q, int n, int cutoff);
  SeriesState evaluate(cplx lambda, int order) const;
  const PairQuantities& quantities() const noexcept { return pq_; }
  int n() const noexcept { return n_; }
  int cutoff() const noexcept { return cutoff_; }
  Family family() const noexcept { return family_; }

 private:
  Family family_;
  int n_, cutoff_;
  PairQuantities pq_;
  std::vector<double> base_;
  std::vector<cplx> coupling_;
  // [a][b]: (q phi_a, e*_b), (q e_a, e*_b), (q phi_a, phi*_b), (q e_a, phi*_b)
  std::vector<std::vector<cplx>> phi_es_, e_es_, phi_phis_, e_phis_;
};

SeriesState series(const OperatorSpec& spec, const TrigPotential& q, int n, cplx lambda, int order,
                   int cutoff = -1);

/// (Q - P* + A - A')^2 + 4 (P + B)(gamma n' + Q* + B').
cplx discriminant(const PairQuantities& pq, const SeriesState& st, cplx coupling);
cplx discriminant(const OperatorSpec& spec, const TrigPotential& q, int n, cplx lambda, int order,
                  int cutoff = -1);

struct AsymptoticEstimate {
  int n = 0;
  int j = 0;
  int order = 0;
  cplx lambda_leading;
  std::optional<cplx> lambda_refined;
  /// Leading term is nondegenerate (n' s != 0).
  bool applicable = false;
  std::string reason;
  /// |n' s| > 4 ln(n' + 1), the finite-n reading of the simplicity condition.
  bool condition_met = false;
  /// |n' s| / (4 ln(n' + 1)).
  double condition_ratio = 0.0;
  /// |lambda_{m+1} - lambda_m| per iteration.
  std::vector<double> iterations;
};

/// The Fourier sine coefficient driving the splitting: s_{2n} or s_{2n+1}.
cplx splitting_coefficient(Family f, const TrigPotential& q, int n);

/// base + (-1)^j (sqrt(2 gamma)/2) sqrt(n' s), principal roots; j in {1, 2}.
AsymptoticEstimate leading_estimate(const OperatorSpec& spec, const TrigPotential& q, int n, int j);

/// Iterates lambda <- base + (S(lambda) -+ sqrt(Delta(lambda)))/2 from the
/// leading estimate, tracking the square-root branch continuously.
AsymptoticEstimate fixed_point_refine(const OperatorSpec& spec, const TrigPotential& q, int n, int j,
                                      int order, int cutoff = -1, double tol = 1e-10,
                                      int max_iter = 100);
AsymptoticEstimate fixed_point_refine(const SeriesEngine& engine, const OperatorSpec& spec,
                                      const TrigPotential& q, int j, int order, double tol = 1e-10,
                                      int max_iter = 100);

/// Both branches; throws NumericalError when they converge to the same point.
std::array<AsymptoticEstimate, 2> refine_pair(const OperatorSpec& spec, const TrigPotential& q, int n,
                                              int order, int cutoff = -1, double tol = 1e-10,
                                              int max_iter = 100);

struct BranchAssignment {
  /// branch[i] is the label (1 or 2) of records[i]; 0 when unlabelled.
  std::array<int, 2> branch{0, 0};
  bool merged = false;
  bool tie = false;
  /// Cost difference between the two bijections.
  double margin = 0.0;
};

/// Matches two simple located eigenvalues to the two branch estimates by the
/// bijection of least total distance; relabels the records in place.
BranchAssignment assign_branches(std::vector<EigenRecord>& records,
                                 const std::array<AsymptoticEstimate, 2>& estimates, double tol = 1e-9);

struct MomentIndicator {
  cplx moment;     ///< integral of x q(x)
  cplx indicator;  ///< s_{2n}/2 + B(base) at the given order
};

/// Only defined for T1.
MomentIndicator moment_indicator(const OperatorSpec& spec, const TrigPotential& q, int n, int order,
                                   int cutoff = -1);

}  // namespace slspectra
