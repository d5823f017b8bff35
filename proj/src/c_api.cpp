#include "slspectra/slspectra.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "slspectra/asymptotics.hpp"
#include "slspectra/diagnostics.hpp"
#include "slspectra/error.hpp"
#include "slspectra/report.hpp"
#include "slspectra/solver.hpp"

using namespace slspectra;

struct sl_potential {
  TrigPotential q;
};

struct sl_operator {
  OperatorSpec spec;
};

struct sl_spectrum {
  std::vector<DiskOutcome> disks;
  std::vector<EigenRecord> records;  // ascending n, then j
  std::vector<std::string> failures;
};

struct sl_comparison {
  ComparisonReport report;
  int order = 0;
};

struct sl_basis_profile {
  RieszProfile profile;
};

namespace {

thread_local std::string g_last_error;

template <class F>
sl_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SL_OK;
  } catch (const std::invalid_argument& e) {  // ConfigError and parse failures
    g_last_error = e.what();
    return SL_ERR_CONFIG;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return SL_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SL_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SL_ERR_NUMERIC;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw ConfigError(std::string("null argument: ") + what);
}

SolverOptions solver_options(const sl_solver_options* o) {
  SolverOptions out;
  if (o == nullptr) return out;
  if (!(o->integration_tol > 0) || !(o->newton_tol > 0) || o->max_newton_iter < 1)
    throw ConfigError("solver tolerances and iteration cap must be positive");
  out.integration_tol = o->integration_tol;
  out.newton_tol = o->newton_tol;
  out.max_newton_iter = o->max_newton_iter;
  return out;
}

int thread_count(const sl_solver_options* o) {
  const int cap = thread_cap_from_env();
  if (o == nullptr || o->threads <= 0) return cap;
  return std::min(o->threads, cap);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string render(const Table& t, sl_format format) {
  switch (format) {
    case SL_FORMAT_CSV: return to_csv(t);
    case SL_FORMAT_JSON: return to_json(t);
  }
  throw ConfigError("unknown output format");
}

Family to_family(sl_family f) {
  switch (f) {
    case SL_FAMILY_T1: return Family::T1;
    case SL_FAMILY_T2: return Family::T2;
    case SL_FAMILY_T3: return Family::T3;
    case SL_FAMILY_T4: return Family::T4;
    case SL_FAMILY_PERIODIC: return Family::Periodic;
    case SL_FAMILY_ANTIPERIODIC: return Family::Antiperiodic;
  }
  throw ConfigError("unknown boundary-condition family");
}

std::vector<EigenRecord> records_of(const sl_spectrum* s, int n) {
  std::vector<EigenRecord> out;
  for (const auto& r : s->records)
    if (r.disk_index == n) out.push_back(r);
  return out;
}

bool has_disk(const sl_spectrum* s, int n) {
  return std::any_of(s->disks.begin(), s->disks.end(),
                     [n](const DiskOutcome& d) { return d.error.empty() && d.result.n == n; });
}

}  // namespace

extern "C" {

const char* sl_last_error(void) { return g_last_error.c_str(); }
const char* sl_version(void) { return "0.1.0"; }
void sl_string_free(char* s) { std::free(s); }

void sl_solver_options_default(sl_solver_options* opts) {
  if (opts == nullptr) return;
  const SolverOptions d;
  opts->integration_tol = d.integration_tol;
  opts->newton_tol = d.newton_tol;
  opts->max_newton_iter = d.max_newton_iter;
  opts->threads = 0;
}

sl_status sl_potential_create(const double* cos_re, const double* cos_im, const double* sin_re, const double* sin_im,
                              int degree, sl_potential** out) {
  return guarded([&] {
    require(out, "out");
    if (degree < 1) throw ConfigError("potential degree must be >= 1");
    std::vector<cplx> c(degree), s(degree);
    for (int k = 0; k < degree; ++k) {
      c[k] = {cos_re ? cos_re[k] : 0.0, cos_im ? cos_im[k] : 0.0};
      s[k] = {sin_re ? sin_re[k] : 0.0, sin_im ? sin_im[k] : 0.0};
    }
    *out = new sl_potential{TrigPotential(c, s)};
  });
}

sl_status sl_potential_from_json(const char* text, sl_potential** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new sl_potential{TrigPotential::from_json(text)};
  });
}

sl_status sl_potential_from_file(const char* path, sl_potential** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sl_potential{TrigPotential::from_json_file(path)};
  });
}

void sl_potential_destroy(sl_potential* q) { delete q; }

sl_status sl_potential_eval(const sl_potential* q, double x, double* re, double* im) {
  return guarded([&] {
    require(q, "potential");
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("x must lie in [0, 1]");
    const cplx v = q->q(x);
    if (re) *re = v.real();
    if (im) *im = v.imag();
  });
}

int sl_potential_is_symmetric(const sl_potential* q) { return q != nullptr && q->q.is_reflection_symmetric(); }

sl_status sl_operator_parse(const char* text, sl_operator** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new sl_operator{OperatorSpec::parse(text)};
  });
}

sl_status sl_operator_create(sl_family family, double re, double im, sl_operator** out) {
  return guarded([&] {
    require(out, "out");
    OperatorSpec spec{to_family(family), {re, im}};
    spec.validate();
    *out = new sl_operator{spec};
  });
}

void sl_operator_destroy(sl_operator* op) { delete op; }

sl_family sl_operator_family(const sl_operator* op) { return static_cast<sl_family>(op->spec.family); }

int sl_operator_near_degenerate(const sl_operator* op) { return op != nullptr && op->spec.near_degenerate(); }

sl_status sl_operator_gamma(const sl_operator* op, double* re, double* im) {
  return guarded([&] {
    require(op, "operator");
    const cplx g = gamma(op->spec);
    if (re) *re = g.real();
    if (im) *im = g.imag();
  });
}

double sl_base_eigenvalue(sl_family family, int n) {
  try {
    return base_eigenvalue(to_family(family), n);
  } catch (...) {
    return 0.0;
  }
}

sl_status sl_char_det(const sl_operator* op, const sl_potential* q, double re, double im, double tol, double* out_re,
                      double* out_im) {
  return guarded([&] {
    require(op, "operator");
    require(q, "potential");
    const cplx d = char_det(op->spec, q->q, {re, im}, tol);
    if (out_re) *out_re = d.real();
    if (out_im) *out_im = d.imag();
  });
}

sl_status sl_count_zeros(const sl_operator* op, const sl_potential* q, double center_re, double center_im,
                         double radius, double tol, int* count) {
  return guarded([&] {
    require(op, "operator");
    require(q, "potential");
    require(count, "count");
    *count = count_zeros(op->spec, q->q, {center_re, center_im}, radius, tol);
  });
}

sl_status sl_spectrum_compute(const sl_operator* op, const sl_potential* q, int n_min, int n_max,
                              const sl_solver_options* opts, int allow_partial, sl_spectrum** out) {
  return guarded([&] {
    require(op, "operator");
    require(q, "potential");
    require(out, "out");
    auto s = std::make_unique<sl_spectrum>();
    s->disks = locate_range(op->spec, q->q, n_min, n_max, solver_options(opts), thread_count(opts));
    for (auto& d : s->disks) {
      if (!d.error.empty()) {
        s->failures.push_back("n=" + std::to_string(d.result.n) + ": " + d.error);
        continue;
      }
      label_branches(op->spec, q->q, d.result);
      std::vector<EigenRecord> recs = d.result.records;
      std::sort(recs.begin(), recs.end(), [](const EigenRecord& a, const EigenRecord& b) { return a.branch < b.branch; });
      s->records.insert(s->records.end(), recs.begin(), recs.end());
    }
    if (!s->failures.empty() && !allow_partial) throw NumericalError(s->failures.front());
    *out = s.release();
  });
}

void sl_spectrum_destroy(sl_spectrum* s) { delete s; }
size_t sl_spectrum_size(const sl_spectrum* s) { return s ? s->records.size() : 0; }

sl_status sl_spectrum_record(const sl_spectrum* s, size_t i, sl_eigen_record* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    const EigenRecord& r = s->records.at(i);
    *out = {r.disk_index, r.branch, r.lambda.real(), r.lambda.imag(), r.multiplicity, r.residual};
  });
}

size_t sl_spectrum_disk_count(const sl_spectrum* s) { return s ? s->disks.size() : 0; }

sl_status sl_spectrum_disk(const sl_spectrum* s, size_t i, sl_disk_info* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    const DiskResult& d = s->disks.at(i).result;
    *out = {d.n, d.count, d.expected_count, d.flagged ? 1 : 0, d.center.real(), d.center.imag(), d.radius};
  });
}

size_t sl_spectrum_failure_count(const sl_spectrum* s) { return s ? s->failures.size() : 0; }

const char* sl_spectrum_failure(const sl_spectrum* s, size_t i) {
  if (s == nullptr || i >= s->failures.size()) return nullptr;
  return s->failures[i].c_str();
}

sl_status sl_spectrum_deviation(const sl_spectrum* a, const sl_spectrum* b, int n, double* out) {
  return guarded([&] {
    require(a, "spectrum");
    require(b, "spectrum");
    require(out, "out");
    if (!has_disk(a, n) || !has_disk(b, n)) throw ConfigError("disk " + std::to_string(n) + " missing from a spectrum");
    const auto ra = records_of(a, n), rb = records_of(b, n);
    const auto pa = expand_multiplicity(ra), pb = expand_multiplicity(rb);
    *out = hausdorff_distance(pa, pb);
  });
}

sl_status sl_spectrum_write(const sl_spectrum* s, const sl_spectrum* reference, sl_format format, char** out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    if (reference == nullptr) {
      *out = copy_string(render(spectrum_table(s->records), format));
      return;
    }
    std::map<int, double> dev;
    for (const auto& d : s->disks) {
      const int n = d.result.n;
      if (!d.error.empty() || !has_disk(reference, n)) continue;
      const auto pa = expand_multiplicity(records_of(s, n));
      const auto pb = expand_multiplicity(records_of(reference, n));
      dev[n] = hausdorff_distance(pa, pb);
    }
    *out = copy_string(render(spectrum_table(s->records, dev), format));
  });
}

sl_status sl_leading_estimate(const sl_operator* op, const sl_potential* q, int n, int j, double* re, double* im,
                              int* applicable) {
  return guarded([&] {
    require(op, "operator");
    require(q, "potential");
    const AsymptoticEstimate e = leading_estimate(op->spec, q->q, n, j);
    if (re) *re = e.lambda_leading.real();
    if (im) *im = e.lambda_leading.imag();
    if (applicable) *applicable = e.applicable ? 1 : 0;
  });
}

sl_status sl_fixed_point_refine(const sl_operator* op, const sl_potential* q, int n, int j, int order, int cutoff,
                                double tol, int max_iter, double* re, double* im, int* iterations) {
  return guarded([&] {
    require(op, "operator");
    require(q, "potential");
    const AsymptoticEstimate e = fixed_point_refine(op->spec, q->q, n, j, order, cutoff, tol, max_iter);
    if (re) *re = e.lambda_refined->real();
    if (im) *im = e.lambda_refined->imag();
    if (iterations) *iterations = static_cast<int>(e.iterations.size());
  });
}

sl_status sl_comparison_compute(const sl_operator* op, const sl_potential* q, int n_min, int n_max, int order,
                                int cutoff, double fp_tol, const sl_solver_options* opts, int allow_partial,
                                sl_comparison** out) {
  return guarded([&] {
    require(op, "operator");
    require(q, "potential");
    require(out, "out");
    if (op->spec.family == Family::Periodic || op->spec.family == Family::Antiperiodic)
      throw ConfigError("comparison needs one of T1..T4");
    auto c = std::make_unique<sl_comparison>();
    c->order = order;
    c->report = compare_range(op->spec, q->q, n_min, n_max, order, cutoff, fp_tol, solver_options(opts),
                              thread_count(opts));
    if (c->report.partial && !allow_partial) throw NumericalError(c->report.failures.front());
    *out = c.release();
  });
}

void sl_comparison_destroy(sl_comparison* c) { delete c; }
size_t sl_comparison_rows(const sl_comparison* c) { return c ? c->report.rows.size() : 0; }

sl_status sl_comparison_rate(const sl_comparison* c, double* slope, double* intercept, double* r2, int* points) {
  return guarded([&] {
    require(c, "comparison");
    if (slope) *slope = c->report.rate.slope;
    if (intercept) *intercept = c->report.rate.intercept;
    if (r2) *r2 = c->report.rate.r2;
    if (points) *points = c->report.rate.points;
  });
}

int sl_comparison_inapplicable_rows(const sl_comparison* c) {
  if (c == nullptr) return 0;
  return static_cast<int>(std::count_if(c->report.rows.begin(), c->report.rows.end(),
                                        [](const ComparisonRow& r) { return !r.applicable; }));
}

size_t sl_comparison_failure_count(const sl_comparison* c) { return c ? c->report.failures.size() : 0; }

const char* sl_comparison_failure(const sl_comparison* c, size_t i) {
  if (c == nullptr || i >= c->report.failures.size()) return nullptr;
  return c->report.failures[i].c_str();
}

sl_status sl_comparison_write(const sl_comparison* c, sl_format format, char** out) {
  return guarded([&] {
    require(c, "comparison");
    require(out, "out");
    *out = copy_string(render(comparison_table(c->report, c->order), format));
  });
}

sl_status sl_basis_profile_compute(const sl_operator* op, const sl_potential* q, int n_min, int n_max,
                                   const sl_solver_options* opts, int allow_partial, sl_basis_profile** out) {
  return guarded([&] {
    require(op, "operator");
    require(q, "potential");
    require(out, "out");
    if (op->spec.family == Family::Periodic || op->spec.family == Family::Antiperiodic)
      throw ConfigError("basis diagnostics need one of T1..T4");
    auto p = std::make_unique<sl_basis_profile>();
    p->profile = riesz_failure_profile(op->spec, q->q, n_min, n_max, solver_options(opts), thread_count(opts));
    if (p->profile.partial && !allow_partial) {
      for (const auto& r : p->profile.reports)
        if (!r.error.empty()) throw NumericalError("n=" + std::to_string(r.n) + ": " + r.error);
    }
    *out = p.release();
  });
}

void sl_basis_profile_destroy(sl_basis_profile* p) { delete p; }

sl_evidence sl_basis_profile_evidence(const sl_basis_profile* p) {
  if (p == nullptr) return SL_EVIDENCE_INCONCLUSIVE;
  switch (p->profile.evidence) {
    case Evidence::Present: return SL_EVIDENCE_PRESENT;
    case Evidence::Absent: return SL_EVIDENCE_ABSENT;
    default: return SL_EVIDENCE_INCONCLUSIVE;
  }
}

const char* sl_basis_profile_reason(const sl_basis_profile* p) { return p ? p->profile.reason.c_str() : ""; }

int sl_basis_profile_effective_index(const sl_basis_profile* p) {
  return (p && p->profile.n_effective) ? *p->profile.n_effective : -1;
}

int sl_basis_profile_merged_disks(const sl_basis_profile* p) {
  if (p == nullptr) return 0;
  return static_cast<int>(std::count_if(p->profile.reports.begin(), p->profile.reports.end(),
                                        [](const BasisPairReport& r) { return r.merged; }));
}

size_t sl_basis_profile_failure_count(const sl_basis_profile* p) {
  if (p == nullptr) return 0;
  return static_cast<size_t>(std::count_if(p->profile.reports.begin(), p->profile.reports.end(),
                                           [](const BasisPairReport& r) { return !r.error.empty(); }));
}

sl_status sl_basis_profile_write(const sl_basis_profile* p, sl_format format, char** out) {
  return guarded([&] {
    require(p, "profile");
    require(out, "out");
    *out = copy_string(format == SL_FORMAT_JSON ? basis_json(p->profile) : to_csv(basis_table(p->profile)));
  });
}

}  // extern "C"
