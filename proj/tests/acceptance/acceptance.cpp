// Acceptance run: one line per criterion with the measured quantity, the
// pinned tolerance and the wall time against its limit.
//
//   acceptance [--expected-fail 3,...] [--only 1,2,...]
//
// Exit status is nonzero when a criterion fails that is not listed as an
// expected failure. Listed criteria still run in full and print FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "slspectra/asymptotics.hpp"
#include "slspectra/boundary.hpp"
#include "slspectra/diagnostics.hpp"
#include "slspectra/error.hpp"
#include "slspectra/potential.hpp"
#include "slspectra/solver.hpp"

using namespace slspectra;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// q* = sum_{k<=16} k^{-3/4} sin 4 pi k x
TrigPotential q_star() {
  std::vector<cplx> s(32);
  for (int k = 1; k <= 16; ++k) s[2 * k - 1] = std::pow(k, -0.75);
  return {{}, s};
}

// q** = sum_{k<=16} k^{-3/4} sin 2 pi (2k+1) x
TrigPotential q_star_star() {
  std::vector<cplx> s(33);
  for (int k = 1; k <= 16; ++k) s[2 * k] = std::pow(k, -0.75);
  return {{}, s};
}

struct FamilyCase {
  const char* name;
  OperatorSpec spec;
  TrigPotential q;
};

const std::vector<FamilyCase>& standard_cases() {
  static const std::vector<FamilyCase> cases{
      {"T1", OperatorSpec::parse("T1:beta=3"), q_star()},
      {"T3", OperatorSpec::parse("T3:alpha=0.5"), q_star()},
      {"T2", OperatorSpec::parse("T2:beta=3"), q_star_star()},
      {"T4", OperatorSpec::parse("T4:alpha=0.5"), q_star_star()},
  };
  return cases;
}

constexpr int kBandMin = 8, kBandMax = 16;

// Disks n = 8..16 for each standard case, solved once and shared by the
// criteria that read them.
const std::map<std::string, std::vector<DiskResult>>& band_disks() {
  static const auto disks = [] {
    std::map<std::string, std::vector<DiskResult>> out;
    for (const auto& c : standard_cases()) {
      auto& v = out[c.name];
      for (auto& o : locate_range(c.spec, c.q, kBandMin, kBandMax, {}, thread_cap_from_env())) {
        if (!o.error.empty()) throw NumericalError(std::string(c.name) + ": " + o.error);
        label_branches(c.spec, c.q, o.result);
        v.push_back(std::move(o.result));
      }
    }
    return out;
  }();
  return disks;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

cplx random_parameter(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (;;) {
    const cplx p(u(rng), u(rng));
    if (std::abs(p) <= 5 && std::abs(p - 1.0) >= 0.1 && std::abs(p + 1.0) >= 0.1) return p;
  }
}

// 1. q = 0 reproduces the double base eigenvalues; T1 has the simple eigenvalue 0.
Outcome unperturbed_exactness() {
  Outcome out;
  double worst = 0;
  for (const char* s : {"T1:beta=3", "T2:beta=3", "T3:alpha=0.5", "T4:alpha=2i"}) {
    const OperatorSpec spec = OperatorSpec::parse(s);
    for (int n = 1; n <= 12; ++n) {
      const DiskResult d = locate_eigenpair(spec, TrigPotential{}, n);
      const double base = base_eigenvalue(spec.family, n);
      if (d.records.size() != 1 || d.records[0].multiplicity != 2) {
        out.pass = false;
        out.detail += fmt("%s n=%d not a single double record; ", s, n);
        continue;
      }
      worst = std::max(worst, std::abs(d.records[0].lambda - base) / base);
    }
  }
  const DiskResult d0 = locate_eigenpair(OperatorSpec::parse("T1:beta=3"), TrigPotential{}, 0);
  const bool simple0 = d0.records.size() == 1 && d0.records[0].multiplicity == 1 && std::abs(d0.records[0].lambda) < 1e-8;
  out.pass = out.pass && worst <= 1e-8 && simple0;
  out.detail += fmt("max relative error %.2e (tol 1e-8); T1 eigenvalue 0 simple: %s", worst, simple0 ? "yes" : "no");
  return out;
}

// 2. (f_n, g_m) = delta for n, m <= 16.
Outcome biorthogonality() {
  std::mt19937 rng(2024);
  double worst = 0;
  for (Family f : {Family::T1, Family::T2, Family::T3, Family::T4})
    for (int trial = 0; trial < 5; ++trial) {
      const auto m = biorthogonality_matrix(OperatorSpec{f, random_parameter(rng)}, 16);
      for (std::size_t i = 0; i < m.entries.size(); ++i)
        for (std::size_t j = 0; j < m.entries.size(); ++j)
          worst = std::max(worst, std::abs(m.entries[i][j] - (i == j ? 1.0 : 0.0)));
    }
  return {worst <= 1e-10, fmt("max |(f_n, g_m) - delta| = %.2e over 4 families x 5 parameters (tol 1e-10)", worst)};
}

// 3. Exactly two zeros in U(n) for n = 4..20.
Outcome disk_count() {
  Outcome out;
  std::string misses;
  int checked = 0, bad = 0;
  for (const auto& c : standard_cases())
    for (int n = 4; n <= 20; ++n) {
      const int count = count_zeros(c.spec, c.q, base_eigenvalue(c.spec.family, n), disk_radius(n));
      ++checked;
      if (count != 2) {
        ++bad;
        misses += fmt(" %s:n=%d->%d", c.name, n, count);
      }
    }
  out.pass = bad == 0;
  out.detail = fmt("%d/%d disks count 2", checked - bad, checked);
  if (bad) out.detail += "; miss:" + misses;
  return out;
}

// 4. Splitting ratio in [0.7, 1.3], deviation from 1 trending down.
// 5. Every located eigenvalue in the band is simple.
struct SplitStats {
  Outcome split, simple;
};

const SplitStats& splitting() {
  static const SplitStats stats = [] {
    SplitStats s;
    std::string split_detail, simple_detail;
    int merged = 0, total = 0;
    for (const auto& c : standard_cases()) {
      const auto& disks = band_disks().at(c.name);
      const cplx g = gamma(c.spec);
      std::vector<double> ns, dev;
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& d : disks) {
        for (const auto& r : d.records) {
          total += r.multiplicity;
          if (r.multiplicity != 1) merged += r.multiplicity;
        }
        if (d.records.size() != 2) {
          s.split.pass = false;
          continue;
        }
        const double np = coupling_index(c.spec.family, d.n);
        const cplx term = std::sqrt(2.0 * g) * std::sqrt(np * splitting_coefficient(c.spec.family, c.q, d.n));
        const double ratio = std::abs(d.records[1].lambda - d.records[0].lambda) / std::abs(term);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        ns.push_back(d.n);
        dev.push_back(std::abs(ratio - 1));
      }
      const LineFit fit = fit_line(ns, dev);
      const bool ok = lo >= 0.7 && hi <= 1.3 && fit.slope <= 0;
      s.split.pass = s.split.pass && ok;
      split_detail += fmt("%s ratio [%.4f, %.4f] dev-slope %.2e; ", c.name, lo, hi, fit.slope);
    }
    s.split.detail = split_detail + "(range [0.7, 1.3], slope <= 0)";
    s.simple.pass = merged == 0;
    s.simple.detail = fmt("%d of %d eigenvalues in merged records (T1..T4, n = 8..16)", merged, total);
    return s;
  }();
  return stats;
}

// 6. Fixed-point refinement reduces |D| and contracts.
Outcome refinement() {
  int cases = 0, improved = 0, converged = 0, contracting = 0;
  double worst_ratio = 0;
  for (const auto& c : standard_cases())
    for (int n = kBandMin; n <= kBandMax; ++n) {
      const SeriesEngine engine(c.spec, c.q, n, default_cutoff(c.q, n));
      for (int j : {1, 2}) {
        ++cases;
        AsymptoticEstimate e;
        try {
          e = fixed_point_refine(engine, c.spec, c.q, j, 1);
        } catch (const NumericalError&) {
          continue;
        }
        ++converged;
        const double before = std::abs(char_det(c.spec, c.q, e.lambda_leading));
        const double after = std::abs(char_det(c.spec, c.q, *e.lambda_refined));
        if (after < before) ++improved;
        // Steps below the rounding level of lambda carry no contraction information.
        const double floor = 1e-13 * std::abs(*e.lambda_refined);
        bool geometric = true;
        for (std::size_t m = 1; m < e.iterations.size(); ++m) {
          if (e.iterations[m - 1] <= floor) break;
          const double ratio = e.iterations[m] / e.iterations[m - 1];
          worst_ratio = std::max(worst_ratio, ratio);
          if (!(ratio < 1)) geometric = false;
        }
        if (geometric) ++contracting;
      }
    }
  const double share = double(improved) / cases;
  const bool pass = share >= 0.9 && contracting == converged;
  return {pass, fmt("|D| reduced in %d/%d (%.0f%%, need 90%%); contracting traces %d/%d converged, worst step ratio %.2e",
                    improved, cases, 100 * share, contracting, converged, worst_ratio)};
}

// Basis reports over the shared band.
const std::map<std::string, std::vector<BasisPairReport>>& band_reports() {
  static const auto reports = [] {
    std::map<std::string, std::vector<BasisPairReport>> out;
    for (const auto& c : standard_cases())
      for (const auto& d : band_disks().at(c.name)) out[c.name].push_back(basis_pair_report(c.spec, c.q, d));
    return out;
  }();
  return reports;
}

// 7. n^{1/2} sup |Psi - sqrt(2) h_n| bounded by 3x the band median.
Outcome eigenfunction_asymptotics() {
  Outcome out;
  for (const auto& c : standard_cases()) {
    std::vector<double> scaled;
    for (const auto& r : band_reports().at(c.name))
      for (const auto& b : r.branches) scaled.push_back(b.residual.scaled);
    const double med = median(scaled), mx = *std::max_element(scaled.begin(), scaled.end());
    const bool ok = mx <= 3 * med;
    out.pass = out.pass && ok;
    out.detail += fmt("%s C = %.3f (median %.3f, bound %.3f); ", c.name, mx, med, 3 * med);
  }
  return out;
}

// 8. Overlap of the two eigenfunctions approaches 1 like n^{-1/2} or faster.
Outcome riesz_indicator() {
  const auto& t1 = standard_cases()[0];
  std::vector<BasisPairReport> reports = band_reports().at("T1");
  for (auto& o : locate_range(t1.spec, t1.q, kBandMax + 1, 20, {}, thread_cap_from_env())) {
    if (!o.error.empty()) return {false, "disk failed: " + o.error};
    label_branches(t1.spec, t1.q, o.result);
    reports.push_back(basis_pair_report(t1.spec, t1.q, o.result));
  }
  // The fit uses n <= 16: beyond the degree of q* its coefficient s_{2n} is zero,
  // the pair is nearly double and 1 - |overlap| drops by orders of magnitude.
  double min_overlap = INFINITY, c_bound = 0;
  std::vector<double> ln_n, ln_gap, ln_n_all, ln_gap_all;
  for (const auto& r : reports) {
    if (!r.overlap) return {false, fmt("n=%d has no overlap (merged or failed)", r.n)};
    const double ov = std::abs(*r.overlap);
    if (r.n >= 12) min_overlap = std::min(min_overlap, ov);
    ln_n_all.push_back(std::log(r.n));
    ln_gap_all.push_back(std::log(1 - ov));
    if (r.n > kBandMax) continue;
    c_bound = std::max(c_bound, (1 - ov) * std::sqrt(r.n));
    ln_n.push_back(std::log(r.n));
    ln_gap.push_back(std::log(1 - ov));
  }
  const LineFit fit = fit_line(ln_n, ln_gap), fit_all = fit_line(ln_n_all, ln_gap_all);
  const bool pass = min_overlap >= 0.9 && c_bound > 0 && fit.r2 >= 0.5;
  return {pass, fmt("min |overlap| for n = 12..20: %.5f (need 0.9); n = 8..16: C = %.4f, log fit slope %.3f, "
                    "R^2 %.3f (need 0.5); n = 8..20 fit slope %.2f, R^2 %.3f",
                    min_overlap, c_bound, fit.slope, fit.r2, fit_all.slope, fit_all.r2)};
}

// 9. a|u|^2 + |v|^2/2 within C ln n / n of 1, C < 10.
Outcome normalization_identity() {
  Outcome out;
  for (const auto& c : standard_cases()) {
    double cfit = 0;
    for (const auto& r : band_reports().at(c.name))
      for (const auto& b : r.branches) cfit = std::max(cfit, std::abs(b.norm_identity - 1) * r.n / std::log(r.n));
    out.pass = out.pass && cfit < 10;
    out.detail += fmt("%s C = %.4f; ", c.name, cfit);
  }
  out.detail += "(need C < 10)";
  return out;
}

// 10. Reflection-symmetric q: T1 = periodic, T2 = antiperiodic, disk by disk.
Outcome symmetric_coincidence() {
  const TrigPotential q = TrigPotential::single_cos(1);
  double worst = 0;
  std::string detail;
  for (auto [a, b] : {std::pair{"T1:beta=3", "periodic"}, std::pair{"T2:beta=3", "antiperiodic"}}) {
    const auto ra = locate_range(OperatorSpec::parse(a), q, 0, 10, {}, thread_cap_from_env());
    const auto rb = locate_range(OperatorSpec::parse(b), q, 0, 10, {}, thread_cap_from_env());
    double w = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
      if (!ra[i].error.empty() || !rb[i].error.empty()) return {false, fmt("disk %zu failed", i)};
      w = std::max(w, hausdorff_distance(expand_multiplicity(ra[i].result.records),
                                         expand_multiplicity(rb[i].result.records)));
    }
    worst = std::max(worst, w);
    detail += fmt("%s vs %s: %.2e; ", a, b, w);
  }
  return {worst <= 1e-6, detail + "max per-disk Hausdorff distance, n = 0..10 (tol 1e-6)"};
}

// 11. Closed forms against defining inner products, 20 random potentials x 3 betas.
Outcome quantities_consistency() {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0;
  for (cplx beta : {cplx(3, 0), cplx(2, 1), cplx(-0.5, 0.7)}) {
    const OperatorSpec spec{Family::T1, beta};
    for (int t = 0; t < 20; ++t) {
      const int degree = 1 + t % 8;
      std::vector<cplx> a(degree), b(degree);
      for (int k = 0; k < degree; ++k) {
        a[k] = {u(rng), u(rng)};
        b[k] = {u(rng), u(rng)};
      }
      const TrigPotential q(a, b);
      for (int n = 1; n <= 10; ++n) {
        const auto x = pair_quantities(spec, q, n), y = pair_quantities_direct(spec, q, n);
        worst = std::max({worst, std::abs(x.Q - y.Q), std::abs(x.P - y.P), std::abs(x.P_star - y.P_star),
                          std::abs(x.Q_star - y.Q_star)});
      }
    }
  }
  return {worst <= 1e-10, fmt("max difference %.2e over 60 potentials, n = 1..10 (tol 1e-10)", worst)};
}

// 12. conj(spectrum of T1(q, beta)) = spectrum of the adjoint problem with conj(q).
Outcome adjoint_symmetry() {
  std::vector<cplx> cs(2), ss(10);
  cs[0] = cplx(0, 0.1);
  cs[1] = cplx(0.05, -0.05);
  for (int k = 1; k <= 5; ++k) ss[2 * k - 1] = cplx(0.1, 0.05) / double(k);
  const TrigPotential q(cs, ss);
  const OperatorSpec spec{Family::T1, cplx(2, 1)};
  const BcFunctionals bc = bc_functionals(spec), adj = adjoint_bc_functionals(spec);
  double worst = 0;
  for (int n = 4; n <= 10; ++n) {
    const double base = base_eigenvalue(Family::T1, n);
    const DiskResult a = locate_in_disk(bc, q, base, disk_radius(n));
    const DiskResult b = locate_in_disk(adj, q.conj(), base, disk_radius(n));
    if (a.count != b.count) return {false, fmt("n=%d: counts %d vs %d", n, a.count, b.count)};
    std::vector<cplx> ca = expand_multiplicity(a.records);
    for (auto& z : ca) z = std::conj(z);
    worst = std::max(worst, hausdorff_distance(ca, expand_multiplicity(b.records)));
  }
  return {worst <= 1e-6, fmt("max Hausdorff distance %.2e, beta = 2+i, n = 4..10 (tol 1e-6)", worst)};
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;  // 0 = no runtime limit
  std::function<Outcome()> run;
};

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_fail, only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expected-fail" && i + 1 < argc) expected_fail = parse_list(argv[++i]);
    else if (a == "--only" && i + 1 < argc) only = parse_list(argv[++i]);
    else {
      std::fprintf(stderr, "usage: acceptance [--expected-fail ids] [--only ids]\n");
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "unperturbed exactness", 30, unperturbed_exactness},
      {2, "biorthogonality", 10, biorthogonality},
      {3, "disk count", 120, disk_count},
      {4, "eigenvalue splitting", 120, [] { return splitting().split; }},
      {5, "simplicity in the band", 0, [] { return splitting().simple; }},
      {6, "fixed-point refinement", 0, refinement},
      {7, "eigenfunction asymptotics", 0, eigenfunction_asymptotics},
      {8, "basis-failure indicator", 0, riesz_indicator},
      {9, "normalization identity", 0, normalization_identity},
      {10, "symmetric-potential coincidence", 60, symmetric_coincidence},
      {11, "quantities consistency", 0, quantities_consistency},
      {12, "adjoint symmetry", 0, adjoint_symmetry},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.1f s", secs);
    if (c.limit_s > 0) {
      timing += fmt(" (limit %.0f s)", c.limit_s);
      if (secs > c.limit_s) {
        o.pass = false;
        o.detail += "; runtime limit exceeded";
      }
    }
    const bool expected = expected_fail.count(c.id) > 0;
    const char* tag = o.pass ? "PASS" : "FAIL";
    std::printf("criterion %2d %s  %s: %s [%s]%s\n", c.id, tag, c.title, o.detail.c_str(), timing.c_str(),
                !o.pass && expected ? " (expected failure)" : (o.pass && expected ? " (listed as expected failure)" : ""));
    std::fflush(stdout);
    if (!o.pass && !expected) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
