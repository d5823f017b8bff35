#include "slspectra/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slspectra/error.hpp"

namespace slspectra {

namespace {

std::vector<cplx> sample(const ExpPoly& f, std::size_t size) {
  std::vector<cplx> out(size);
  const double grid = static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i) out[i] = f(double(i) / grid);
  return out;
}

}  // namespace

UV uv_coefficients(const OperatorSpec& spec, std::span<const cplx> eigfn, int n) {
  if (eigfn.size() < 3) throw ConfigError("eigenfunction grid too small");
  const UnperturbedSystem s = unperturbed_system(spec, n);
  UV out;
  out.u = inner_product(eigfn, sample(s.e_star, eigfn.size()));
  out.v = inner_product(eigfn, sample(s.phi_star, eigfn.size()));
  return out;
}

double norm_identity(const OperatorSpec& spec, const UV& uv) {
  return normalization_constant(spec) * std::norm(uv.u) + 0.5 * std::norm(uv.v);
}

cplx pair_overlap(std::span<const cplx> psi1, std::span<const cplx> psi2) { return inner_product(psi1, psi2); }

EigfnResidual eigenfunction_residual(const OperatorSpec& spec, std::span<const cplx> eigfn, int n) {
  const ExpPoly h = leading_harmonic(spec.family, n);
  const double grid = static_cast<double>(eigfn.size() - 1);
  EigfnResidual r;
  for (std::size_t i = 0; i < eigfn.size(); ++i)
    r.sup = std::max(r.sup, std::abs(eigfn[i] - std::sqrt(2.0) * h(double(i) / grid)));
  r.scaled = r.sup * std::sqrt(static_cast<double>(std::max(n, 1)));
  return r;
}

int diagnostic_grid(Family f, const TrigPotential& q, int n) {
  const int periods = std::max({(harmonic_index(f, n) + 1) / 2, q.degree(), 1});
  return 64 * periods;
}

BasisPairReport basis_pair_report(const OperatorSpec& spec, const TrigPotential& q, const DiskResult& disk,
                                  double tol) {
  BasisPairReport rep;
  rep.n = disk.n;
  const int grid = diagnostic_grid(spec.family, q, disk.n);
  std::vector<std::vector<cplx>> psis;
  for (const EigenRecord& rec : disk.records) {
    if (rec.multiplicity > 1) rep.merged = true;
    BranchReport br;
    br.j = rec.branch;
    br.lambda = rec.lambda;
    std::vector<cplx> psi = eigenfunction(spec, q, rec.lambda, grid, disk.n, tol);
    br.uv = uv_coefficients(spec, psi, disk.n);
    br.norm_identity = norm_identity(spec, br.uv);
    br.residual = eigenfunction_residual(spec, psi, disk.n);
    rep.branches.push_back(br);
    psis.push_back(std::move(psi));
  }
  if (!rep.merged && psis.size() == 2) {
    // Branch order 1, 2 when labelled.
    const bool swap = rep.branches[0].j == 2;
    rep.overlap = swap ? pair_overlap(psis[1], psis[0]) : pair_overlap(psis[0], psis[1]);
    if (swap) std::swap(rep.branches[0], rep.branches[1]);
  }
  return rep;
}

void label_branches(const OperatorSpec& spec, const TrigPotential& q, DiskResult& disk) {
  if (spec.family == Family::Periodic || spec.family == Family::Antiperiodic || disk.n < 1) return;
  if (disk.records.size() != 2 || disk.records[0].multiplicity != 1) return;
  const std::array<AsymptoticEstimate, 2> lead{leading_estimate(spec, q, disk.n, 1), leading_estimate(spec, q, disk.n, 2)};
  if (lead[0].applicable) assign_branches(disk.records, lead);
}

std::vector<cplx> expand_multiplicity(std::span<const EigenRecord> records) {
  std::vector<cplx> out;
  for (const auto& r : records)
    for (int i = 0; i < r.multiplicity; ++i) out.push_back(r.lambda);
  return out;
}

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](std::span<const cplx> from, std::span<const cplx> to) {
    double worst = 0.0;
    for (const cplx z : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx w : to) best = std::min(best, std::abs(z - w));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::string evidence_name(Evidence e) {
  switch (e) {
    case Evidence::Present: return "evidence";
    case Evidence::Absent: return "no-evidence";
    default: return "inconclusive";
  }
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("fit: length mismatch");
  LineFit f;
  f.points = static_cast<int>(x.size());
  if (x.size() < 2) return f;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

RieszProfile riesz_failure_profile(const OperatorSpec& spec, const TrigPotential& q, int n_min, int n_max,
                                   const SolverOptions& opts, int threads) {
  if (n_min < 1 || n_max < n_min) throw ConfigError("invalid n range for the basis profile");
  RieszProfile prof;
  const auto disks = locate_range(spec, q, n_min, n_max, opts, threads);
  for (const DiskOutcome& d : disks) {
    BasisPairReport rep;
    rep.n = d.result.n;
    if (!d.error.empty()) {
      rep.error = d.error;
      prof.partial = true;
    } else {
      try {
        DiskResult disk = d.result;
        label_branches(spec, q, disk);
        rep = basis_pair_report(spec, q, disk, opts.integration_tol);
      } catch (const std::exception& e) {
        rep.error = e.what();
        prof.partial = true;
      }
    }
    prof.reports.push_back(std::move(rep));
  }

  // Effective index from the disk counts already in hand.
  for (auto it = disks.rbegin(); it != disks.rend(); ++it) {
    const bool two = it->error.empty() && it->result.count == 2 && it->result.radius == disk_radius(it->result.n);
    if (!two) break;
    prof.n_effective = it->result.n;
  }

  std::vector<double> ns, ovs;
  for (const auto& rep : prof.reports) {
    if (!prof.n_effective || rep.n < *prof.n_effective) continue;
    if (rep.error.empty() && rep.overlap) {
      ns.push_back(rep.n);
      ovs.push_back(std::abs(*rep.overlap));
    }
  }
  const bool any_merged = std::any_of(prof.reports.begin(), prof.reports.end(), [](const auto& r) { return r.merged; });
  if (ns.size() < 3) {
    if (any_merged && prof.n_effective) {
      prof.evidence = Evidence::Absent;
      prof.reason = "merged (double) eigenvalues in the band";
    } else {
      prof.evidence = Evidence::Inconclusive;
      prof.reason = prof.n_effective ? "fewer than three simple pairs at or above the effective index"
                                     : "no effective index in range: disk counts are not all 2";
    }
    return prof;
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double gap = std::max(1.0 - ovs[i], 1e-300);
    lx.push_back(std::log(ns[i]));
    ly.push_back(std::log(gap));
    prof.bound_constant = std::max(prof.bound_constant, gap * std::sqrt(ns[i]));
  }
  prof.decay_fit = fit_line(lx, ly);

  const std::size_t half = ns.size() / 2;
  bool nondecreasing = true;
  for (std::size_t i = half + 1; i < ns.size(); ++i)
    if (ovs[i] + 1e-9 < ovs[i - 1]) nondecreasing = false;

  if (!nondecreasing) {
    prof.evidence = Evidence::Absent;
    prof.reason = "|overlap| not nondecreasing over the upper half of the band";
  } else if (prof.decay_fit.slope >= 0.0 || prof.decay_fit.r2 < 0.5) {
    prof.evidence = Evidence::Absent;
    prof.reason = "1 - |overlap| does not fit a decaying power law";
  } else if (!(prof.bound_constant > 0.0)) {
    prof.evidence = Evidence::Absent;
    prof.reason = "no positive bound constant";
  } else {
    prof.evidence = Evidence::Present;
    prof.reason = "overlaps approach 1 with a decaying power-law gap";
  }
  return prof;
}

ComparisonReport compare_range(const OperatorSpec& spec, const TrigPotential& q, int n_min, int n_max, int order,
                               int cutoff, double fp_tol, const SolverOptions& opts, int threads) {
  if (n_min < 1 || n_max < n_min) throw ConfigError("invalid n range for comparison");
  if (order < 0 || order > kMaxSeriesOrder) throw ConfigError("series order must be in 0..3");
  if (!(fp_tol > 0)) throw ConfigError("fixed-point tolerance must be positive");
  ComparisonReport rep;
  const auto disks = locate_range(spec, q, n_min, n_max, opts, threads);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const DiskOutcome& d : disks) {
    const int n = d.result.n;
    if (!d.error.empty()) {
      rep.partial = true;
      rep.failures.push_back("n=" + std::to_string(n) + ": " + d.error);
      continue;
    }
    std::array<AsymptoticEstimate, 2> lead{leading_estimate(spec, q, n, 1), leading_estimate(spec, q, n, 2)};
    // refined[branch][order]
    std::array<std::vector<std::optional<cplx>>, 2> refined;
    std::string note;
    if (lead[0].applicable || q.is_zero()) {
      const SeriesEngine engine(spec, q, n, cutoff < 0 ? default_cutoff(q, n) : cutoff);
      for (int b = 0; b < 2; ++b)
        for (int k = 0; k <= order; ++k) {
          try {
            refined[b].push_back(fixed_point_refine(engine, spec, q, b + 1, k, fp_tol).lambda_refined);
          } catch (const NumericalError& e) {
            refined[b].push_back(std::nullopt);
            note = e.what();
          }
        }
    } else {
      note = lead[0].reason;
    }
    DiskResult disk = d.result;
    if (disk.records.size() == 2 && disk.records[0].multiplicity == 1) {
      std::array<AsymptoticEstimate, 2> target = lead;
      for (int b = 0; b < 2; ++b)
        if (!refined[b].empty() && refined[b].back()) target[b].lambda_refined = refined[b].back();
      if (lead[0].applicable) assign_branches(disk.records, target);
    }
    const double split = std::abs(lead[1].lambda_leading - lead[0].lambda_leading) / 2.0;
    const double base = base_eigenvalue(spec.family, n);
    for (const EigenRecord& r : disk.records) {
      ComparisonRow row;
      row.n = n;
      row.j = r.branch;
      row.multiplicity = r.multiplicity;
      row.solver = r.lambda;
      const int b = (r.branch == 2) ? 1 : 0;
      row.leading = lead[b].lambda_leading;
      row.refined = refined[b];
      row.abs_gap = std::abs(r.lambda - row.leading);
      row.rel_gap = split > 0 ? row.abs_gap / split : nan;
      row.split_ratio = split > 0 ? std::abs(r.lambda - base) / split : nan;
      row.refined_gap = (!row.refined.empty() && row.refined.back()) ? std::abs(r.lambda - *row.refined.back()) : nan;
      row.applicable = lead[b].applicable;
      row.condition_met = lead[b].condition_met;
      row.note = note;
      rep.rows.push_back(std::move(row));
    }
  }
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const ComparisonRow& a, const ComparisonRow& b) { return a.n != b.n ? a.n < b.n : a.j < b.j; });
  std::vector<double> lx, ly;
  for (const auto& row : rep.rows)
    if (row.applicable && row.abs_gap > 0) {
      lx.push_back(std::log(double(row.n)));
      ly.push_back(std::log(row.abs_gap));
    }
  rep.rate = fit_line(lx, ly);
  return rep;
}

}  // namespace slspectra
