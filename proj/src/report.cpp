#include "slspectra/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "slspectra/error.hpp"

namespace slspectra {

namespace {

std::string fmt_int(long v) { return std::to_string(v); }
std::string fmt_bool(bool v) { return v ? "true" : "false"; }

bool parse_full_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json json_complex(cplx z) { return nlohmann::json::array({json_number(z.real()), json_number(z.imag())}); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ConfigError("table has no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  double v = 0.0;
  const std::string& cell = rows.at(row).at(column(name));
  if (!parse_full_double(cell, v)) throw ConfigError("cell '" + cell + "' in column " + name + " is not a number");
  return v;
}

long Table::integer(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  char* end = nullptr;
  const long v = std::strtol(cell.c_str(), &end, 10);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw ConfigError("cell '" + cell + "' in column " + name + " is not an integer");
  return v;
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (header) {
      t.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != t.columns.size()) throw ConfigError("CSV row width differs from header");
      t.rows.push_back(std::move(cells));
    }
  }
  if (header) throw ConfigError("empty CSV input");
  return t;
}

std::string to_json(const Table& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const std::string& cell = r[i];
      double v = 0.0;
      if (cell == "true" || cell == "false")
        obj[t.columns[i]] = (cell == "true");
      else if (parse_full_double(cell, v))
        obj[t.columns[i]] = json_number(v);
      else
        obj[t.columns[i]] = cell;
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

Table spectrum_table(const std::vector<EigenRecord>& records) {
  Table t{{"n", "j", "re_lambda", "im_lambda", "multiplicity", "residual"}, {}};
  for (const auto& r : records)
    t.rows.push_back({fmt_int(r.disk_index), fmt_int(r.branch), format_double(r.lambda.real()),
                      format_double(r.lambda.imag()), fmt_int(r.multiplicity), format_double(r.residual)});
  return t;
}

Table spectrum_table(const std::vector<EigenRecord>& records, const std::map<int, double>& deviation) {
  Table t = spectrum_table(records);
  t.columns.push_back("max_deviation");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto it = deviation.find(records[i].disk_index);
    t.rows[i].push_back(format_double(it == deviation.end() ? std::numeric_limits<double>::quiet_NaN() : it->second));
  }
  return t;
}

std::vector<EigenRecord> records_from_table(const Table& t) {
  std::vector<EigenRecord> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EigenRecord r;
    r.disk_index = static_cast<int>(t.integer(i, "n"));
    r.branch = static_cast<int>(t.integer(i, "j"));
    r.lambda = {t.number(i, "re_lambda"), t.number(i, "im_lambda")};
    r.multiplicity = static_cast<int>(t.integer(i, "multiplicity"));
    r.residual = t.number(i, "residual");
    out.push_back(r);
  }
  return out;
}

Table basis_table(const RieszProfile& profile) {
  Table t{{"n", "j", "re_lambda", "im_lambda", "abs_overlap", "norm_identity", "residual_scaled"}, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& rep : profile.reports)
    for (const auto& b : rep.branches)
      t.rows.push_back({fmt_int(rep.n), fmt_int(b.j), format_double(b.lambda.real()), format_double(b.lambda.imag()),
                        format_double(rep.overlap ? std::abs(*rep.overlap) : nan), format_double(b.norm_identity),
                        format_double(b.residual.scaled)});
  return t;
}

std::string basis_json(const RieszProfile& profile) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rep : profile.reports) {
    nlohmann::json obj;
    obj["n"] = rep.n;
    obj["merged"] = rep.merged;
    obj["overlap"] = rep.overlap ? json_complex(*rep.overlap) : nlohmann::json(nullptr);
    if (!rep.error.empty()) obj["error"] = rep.error;
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& b : rep.branches) {
      branches.push_back({{"j", b.j},
                          {"lambda", json_complex(b.lambda)},
                          {"u", json_complex(b.uv.u)},
                          {"v", json_complex(b.uv.v)},
                          {"norm_identity", json_number(b.norm_identity)},
                          {"eigfn_residual", json_number(b.residual.sup)},
                          {"eigfn_residual_scaled", json_number(b.residual.scaled)}});
    }
    obj["branches"] = std::move(branches);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

Table comparison_table(const ComparisonReport& report, int order) {
  Table t;
  t.columns = {"n", "j", "multiplicity", "re_solver", "im_solver", "re_leading", "im_leading"};
  for (int k = 0; k <= order; ++k) {
    t.columns.push_back("re_refined_k" + std::to_string(k));
    t.columns.push_back("im_refined_k" + std::to_string(k));
  }
  for (const char* c : {"abs_gap", "rel_gap", "split_ratio", "refined_gap", "applicable", "condition_met"})
    t.columns.push_back(c);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : report.rows) {
    std::vector<std::string> cells{fmt_int(row.n),
                                   fmt_int(row.j),
                                   fmt_int(row.multiplicity),
                                   format_double(row.solver.real()),
                                   format_double(row.solver.imag()),
                                   format_double(row.leading.real()),
                                   format_double(row.leading.imag())};
    for (int k = 0; k <= order; ++k) {
      const bool has = k < static_cast<int>(row.refined.size()) && row.refined[k].has_value();
      cells.push_back(format_double(has ? row.refined[k]->real() : nan));
      cells.push_back(format_double(has ? row.refined[k]->imag() : nan));
    }
    cells.push_back(format_double(row.abs_gap));
    cells.push_back(format_double(row.rel_gap));
    cells.push_back(format_double(row.split_ratio));
    cells.push_back(format_double(row.refined_gap));
    cells.push_back(fmt_bool(row.applicable));
    cells.push_back(fmt_bool(row.condition_met));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace slspectra
