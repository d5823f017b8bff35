// sl_spectra: command-line front end over the slspectra C interface.
//
//   sl_spectra spectrum    --spec T1:beta=3 --potential q.json --n-min 1 --n-max 10
//   sl_spectra compare     --spec T1:beta=3 --potential q.json --n-min 8 --n-max 16 --order 1
//   sl_spectra basis-check --spec T1:beta=3 --potential q.json --n-min 8 --n-max 16
//
// Exit status: 0 success, 1 numerical failure, 2 configuration error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "slspectra/slspectra.h"

namespace {

struct RunConfig {
  std::string spec;
  std::string potential;
  int n_min = 1;
  int n_max = 10;
  int order = 1;
  int cutoff = -1;
  double tol = 1e-9;
  double fp_tol = 1e-10;
  std::string format = "csv";
  std::string out;
  std::string compare;
  bool partial = false;
};

struct ExitError {
  int status;
  std::string message;
};

[[noreturn]] void fail(sl_status status, const std::string& context) {
  throw ExitError{static_cast<int>(status), context + ": " + sl_last_error()};
}

void check(sl_status status, const std::string& context) {
  if (status != SL_OK) fail(status, context);
}

template <class T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (ptr) Destroy(ptr);
  }
};

using Potential = Handle<sl_potential, sl_potential_destroy>;
using Operator = Handle<sl_operator, sl_operator_destroy>;
using Spectrum = Handle<sl_spectrum, sl_spectrum_destroy>;
using Comparison = Handle<sl_comparison, sl_comparison_destroy>;
using Profile = Handle<sl_basis_profile, sl_basis_profile_destroy>;

void validate(const RunConfig& c) {
  if (c.n_min < 0 || c.n_max < c.n_min) throw ExitError{2, "invalid range: need 0 <= n-min <= n-max"};
  if (!(c.tol > 0) || !(c.fp_tol > 0)) throw ExitError{2, "tolerances must be positive"};
  if (c.order < 0 || c.order > 3) throw ExitError{2, "series order must be in 0..3"};
}

sl_format output_format(const RunConfig& c) { return c.format == "json" ? SL_FORMAT_JSON : SL_FORMAT_CSV; }

sl_solver_options solver_options(const RunConfig& c) {
  sl_solver_options o;
  sl_solver_options_default(&o);
  o.newton_tol = c.tol;
  if (c.tol * 1e-3 < o.integration_tol) o.integration_tol = std::max(c.tol * 1e-3, 1e-14);
  return o;
}

void load(const RunConfig& c, Operator& op, Potential& q) {
  check(sl_operator_parse(c.spec.c_str(), &op.ptr), "spec '" + c.spec + "'");
  if (sl_operator_near_degenerate(op.ptr))
    std::cerr << "warning: boundary parameter within 1e-6 of +-1; asymptotic formulas are ill-conditioned\n";
  if (c.potential.empty()) {
    const double zero = 0.0;
    check(sl_potential_create(&zero, nullptr, nullptr, nullptr, 1, &q.ptr), "potential");
  } else {
    check(sl_potential_from_file(c.potential.c_str(), &q.ptr), "potential '" + c.potential + "'");
  }
}

// Table to --out (or stdout); summaries to stdout when the table went to a
// file, else to stderr so that stdout stays machine-readable.
struct Output {
  const RunConfig& cfg;
  std::ostream& summary() const { return cfg.out.empty() ? std::cerr : std::cout; }
  void table(char* text) const {
    std::unique_ptr<char, void (*)(char*)> owned(text, sl_string_free);
    if (cfg.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw ExitError{2, "cannot open output file '" + cfg.out + "'"};
    f << text;
  }
};

int report_failures(std::ostream& os, std::size_t count, const char* (*get)(const void*, std::size_t),
                    const void* obj) {
  for (std::size_t i = 0; i < count; ++i) os << "partial: disk failed: " << get(obj, i) << '\n';
  return count > 0 ? 1 : 0;
}

int cmd_spectrum(const RunConfig& c) {
  Operator op;
  Potential q;
  load(c, op, q);
  const sl_solver_options opts = solver_options(c);
  Spectrum s;
  check(sl_spectrum_compute(op.ptr, q.ptr, c.n_min, c.n_max, &opts, c.partial, &s.ptr), "spectrum");
  Output out{c};

  Operator ref_op;
  Spectrum ref;
  if (!c.compare.empty()) {
    if (c.compare != "periodic" && c.compare != "antiperiodic")
      throw ExitError{2, "--compare must be periodic or antiperiodic"};
    check(sl_operator_parse(c.compare.c_str(), &ref_op.ptr), "compare");
    check(sl_spectrum_compute(ref_op.ptr, q.ptr, c.n_min, c.n_max, &opts, c.partial, &ref.ptr), "reference spectrum");
  }
  char* text = nullptr;
  check(sl_spectrum_write(s.ptr, ref.ptr, output_format(c), &text), "write");
  out.table(text);

  for (std::size_t i = 0; i < sl_spectrum_disk_count(s.ptr); ++i) {
    sl_disk_info d;
    check(sl_spectrum_disk(s.ptr, i, &d), "disk");
    if (d.flagged)
      out.summary() << "flagged: disk n=" << d.n << " counted " << d.count << " zeros (expected "
                    << d.expected_count << ")\n";
    else if (d.n >= 1 && d.radius != static_cast<double>(d.n))
      out.summary() << "note: disk n=" << d.n << " of radius n does not hold the expected zeros; located in an isolation circle of radius "
                    << d.radius << '\n';
  }
  if (ref.ptr) {
    double worst = 0.0;
    for (int n = c.n_min; n <= c.n_max; ++n) {
      double dev = 0.0;
      if (sl_spectrum_deviation(s.ptr, ref.ptr, n, &dev) == SL_OK) worst = std::max(worst, dev);
    }
    out.summary() << "max deviation from " << c.compare << " spectrum: " << worst << '\n';
  }
  int status = report_failures(
      out.summary(), sl_spectrum_failure_count(s.ptr),
      [](const void* o, std::size_t i) { return sl_spectrum_failure(static_cast<const sl_spectrum*>(o), i); }, s.ptr);
  if (ref.ptr)
    status |= report_failures(
        out.summary(), sl_spectrum_failure_count(ref.ptr),
        [](const void* o, std::size_t i) { return sl_spectrum_failure(static_cast<const sl_spectrum*>(o), i); },
        ref.ptr);
  return c.partial ? 0 : status;
}

int cmd_compare(const RunConfig& c) {
  Operator op;
  Potential q;
  load(c, op, q);
  const int n_min = std::max(c.n_min, 1);
  const sl_solver_options opts = solver_options(c);
  Comparison cmp;
  check(sl_comparison_compute(op.ptr, q.ptr, n_min, c.n_max, c.order, c.cutoff, c.fp_tol, &opts, c.partial,
                              &cmp.ptr),
        "compare");
  Output out{c};
  char* text = nullptr;
  check(sl_comparison_write(cmp.ptr, output_format(c), &text), "write");
  out.table(text);
  double slope = 0, intercept = 0, r2 = 0;
  int points = 0;
  check(sl_comparison_rate(cmp.ptr, &slope, &intercept, &r2, &points), "rate");
  out.summary() << "gap rate: |lambda_num - lambda_leading| ~ n^" << slope << " (R^2 = " << r2 << ", " << points
                << " points); inapplicable rows: " << sl_comparison_inapplicable_rows(cmp.ptr) << "/"
                << sl_comparison_rows(cmp.ptr) << '\n';
  report_failures(
      out.summary(), sl_comparison_failure_count(cmp.ptr),
      [](const void* o, std::size_t i) { return sl_comparison_failure(static_cast<const sl_comparison*>(o), i); },
      cmp.ptr);
  return 0;
}

int cmd_basis_check(const RunConfig& c) {
  Operator op;
  Potential q;
  load(c, op, q);
  const int n_min = std::max(c.n_min, 1);
  const sl_solver_options opts = solver_options(c);
  Profile p;
  check(sl_basis_profile_compute(op.ptr, q.ptr, n_min, c.n_max, &opts, c.partial, &p.ptr), "basis-check");
  Output out{c};
  char* text = nullptr;
  check(sl_basis_profile_write(p.ptr, output_format(c), &text), "write");
  out.table(text);
  const char* flag = "inconclusive";
  switch (sl_basis_profile_evidence(p.ptr)) {
    case SL_EVIDENCE_PRESENT: flag = "evidence"; break;
    case SL_EVIDENCE_ABSENT: flag = "no-evidence"; break;
    default: break;
  }
  out.summary() << "basis-failure: " << flag << " (" << sl_basis_profile_reason(p.ptr) << ")\n";
  const int eff = sl_basis_profile_effective_index(p.ptr);
  out.summary() << "effective index: " << (eff < 0 ? std::string("none") : std::to_string(eff)) << '\n';
  if (const int merged = sl_basis_profile_merged_disks(p.ptr))
    out.summary() << "merged (double) eigenvalues in " << merged << " disk(s)\n";
  if (const std::size_t failed = sl_basis_profile_failure_count(p.ptr))
    out.summary() << "partial: " << failed << " disk(s) failed\n";
  return 0;
}

void add_common(CLI::App* sub, RunConfig& c, bool spectrum) {
  sub->add_option("--spec", c.spec, "operator, e.g. T1:beta=3+0i, T3:alpha=0.5, periodic")->required();
  sub->add_option("--potential", c.potential, "potential JSON file (default: q = 0)");
  sub->add_option("--n-min", c.n_min, "first disk index");
  sub->add_option("--n-max", c.n_max, "last disk index");
  sub->add_option("--order", c.order, "series order k (0..3)");
  sub->add_option("--cutoff", c.cutoff, "series cutoff K_max (default n + K + 8)");
  sub->add_option("--tol", c.tol, "Newton tolerance on |delta lambda|");
  sub->add_option("--fp-tol", c.fp_tol, "fixed-point tolerance");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "output file (default stdout)");
  if (spectrum) sub->add_option("--compare", c.compare, "reference spectrum: periodic or antiperiodic");
  sub->add_flag("--partial", c.partial, "keep going when a disk fails");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of non-self-adjoint Sturm-Liouville operators with trigonometric potentials"};
  app.require_subcommand(1);
  RunConfig spectrum_cfg, compare_cfg, basis_cfg;
  auto* spectrum = app.add_subcommand("spectrum", "locate eigenvalues disk by disk");
  auto* compare = app.add_subcommand("compare", "solver eigenvalues against asymptotic formulas");
  auto* basis = app.add_subcommand("basis-check", "basis-failure diagnostics");
  add_common(spectrum, spectrum_cfg, true);
  add_common(compare, compare_cfg, false);
  add_common(basis, basis_cfg, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed()) {
      validate(spectrum_cfg);
      return cmd_spectrum(spectrum_cfg);
    }
    if (compare->parsed()) {
      validate(compare_cfg);
      return cmd_compare(compare_cfg);
    }
    validate(basis_cfg);
    return cmd_basis_check(basis_cfg);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
