#pragma once

// Tabular output: CSV with 17 significant digits (exact round trip) and JSON.

#include <map>
#include <string>
#include <vector>

#include "slspectra/diagnostics.hpp"
#include "slspectra/solver.hpp"

namespace slspectra {

/// Column-named string cells; numbers are pre-formatted.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  ///< ConfigError if absent
  double number(std::size_t row, const std::string& name) const;
  long integer(std::size_t row, const std::string& name) const;
};

/// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

std::string to_csv(const Table& t);
/// Inverse of to_csv (no quoting: cells never contain commas or newlines).
Table parse_csv(const std::string& text);
/// Array of objects; cells that parse completely as numbers become JSON
/// numbers (non-finite ones become null), "true"/"false" become booleans.
std::string to_json(const Table& t);

/// n, j, re_lambda, im_lambda, multiplicity, residual
Table spectrum_table(const std::vector<EigenRecord>& records);
/// Adds a max_deviation column holding the per-disk value keyed by n.
Table spectrum_table(const std::vector<EigenRecord>& records, const std::map<int, double>& deviation);
std::vector<EigenRecord> records_from_table(const Table& t);

/// n, j, re_lambda, im_lambda, abs_overlap, norm_identity, residual_scaled
Table basis_table(const RieszProfile& profile);
/// JSON array with one object per BasisPairReport.
std::string basis_json(const RieszProfile& profile);

/// n, j, solver, leading, refined_k0..k, gaps, flags.
Table comparison_table(const ComparisonReport& report, int order);

}  // namespace slspectra
