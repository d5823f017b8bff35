#pragma once

// Basis-failure indicators built on located eigenpairs: expansion
// coefficients u, v, the normalization identity, pair overlaps and the
// distance of eigenfunctions to the leading harmonic.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slspectra/asymptotics.hpp"
#include "slspectra/solver.hpp"

namespace slspectra {

struct UV {
  cplx u;  ///< (psi, e*_n): coefficient along the associated direction
  cplx v;  ///< (psi, phi*_n): coefficient along the eigen direction
};

/// Trapezoid pairings of a normalized eigenfunction sampled on x_i = i/grid.
UV uv_coefficients(const OperatorSpec& spec, std::span<const cplx> eigfn, int n);

/// a |u|^2 + |v|^2 / 2 with a = normalization_constant(spec).
double norm_identity(const OperatorSpec& spec, const UV& uv);

/// (psi1, psi2) by trapezoid; ConfigError on grid mismatch.
cplx pair_overlap(std::span<const cplx> psi1, std::span<const cplx> psi2);

struct EigfnResidual {
  double sup = 0.0;     ///< sup |psi - sqrt(2) h_n| on the grid
  double scaled = 0.0;  ///< sup * sqrt(n)
};
EigfnResidual eigenfunction_residual(const OperatorSpec& spec, std::span<const cplx> eigfn, int n);

/// Uniform grid with at least 64 points per period of the fastest harmonic
/// in play (the eigenfunction's or the potential's).
int diagnostic_grid(Family f, const TrigPotential& q, int n);

struct BranchReport {
  int j = 0;
  cplx lambda;
  UV uv;
  double norm_identity = 0.0;
  EigfnResidual residual;
};

struct BasisPairReport {
  int n = 0;
  bool merged = false;        ///< double eigenvalue: no pair, overlap undefined
  std::vector<BranchReport> branches;
  std::optional<cplx> overlap;
  std::string error;          ///< non-empty if the disk failed
};

BasisPairReport basis_pair_report(const OperatorSpec& spec, const TrigPotential& q, const DiskResult& disk,
                                  double tol = 1e-12);

enum class Evidence { Present, Absent, Inconclusive };
std::string evidence_name(Evidence e);

/// Least squares y = intercept + slope * x.
struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  int points = 0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct RieszProfile {
  std::vector<BasisPairReport> reports;
  Evidence evidence = Evidence::Inconclusive;
  std::string reason;
  std::optional<int> n_effective;
  /// log(1 - |overlap|) against log n over the usable band.
  LineFit decay_fit;
  /// max (1 - |overlap|) sqrt(n) over the usable band.
  double bound_constant = 0.0;
  bool partial = false;  ///< some disks failed
};

/// Reports for n_min..n_max plus the fit-based evidence flag: present when
/// |overlap| is nondecreasing over the upper half of the usable band, the
/// log-log fit of 1 - |overlap| decays with R^2 >= 0.5, and the bound
/// constant is positive. Inconclusive when fewer than three simple pairs lie
/// at or above the effective index.
RieszProfile riesz_failure_profile(const OperatorSpec& spec, const TrigPotential& q, int n_min, int n_max,
                                   const SolverOptions& opts = {}, int threads = 1);

/// Relabels a simple pair by matching the two leading estimates (T1..T4, n >= 1,
/// nondegenerate leading term); otherwise leaves the ascending-real-part labels.
void label_branches(const OperatorSpec& spec, const TrigPotential& q, DiskResult& disk);

/// Eigenvalues of the records, each repeated by its multiplicity.
std::vector<cplx> expand_multiplicity(std::span<const EigenRecord> records);
/// Hausdorff distance between finite point sets; 0 if both are empty and
/// infinity if exactly one is.
double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b);

/// Solver eigenvalue against the asymptotic predictions for one (n, j).
struct ComparisonRow {
  int n = 0;
  int j = 0;  ///< 0 for a merged (double) record
  int multiplicity = 1;
  cplx solver;
  cplx leading;
  /// Fixed-point limits for orders 0..k; empty where refinement was not run or failed.
  std::vector<std::optional<cplx>> refined;
  double abs_gap = 0.0;      ///< |solver - leading|
  double rel_gap = 0.0;      ///< abs_gap / |split term|; NaN when the split term vanishes
  double split_ratio = 0.0;  ///< |solver - base| / |split term|; NaN when it vanishes
  double refined_gap = 0.0;  ///< |solver - refined at the highest order|; NaN if absent
  bool applicable = false;
  bool condition_met = false;
  std::string note;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  /// log abs_gap (leading) against log n over applicable rows.
  LineFit rate;
  bool partial = false;
  std::vector<std::string> failures;  ///< "n=<n>: <message>"
};

ComparisonReport compare_range(const OperatorSpec& spec, const TrigPotential& q, int n_min, int n_max, int order,
                               int cutoff, double fp_tol, const SolverOptions& opts = {}, int threads = 1);

}  // namespace slspectra
