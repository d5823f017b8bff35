#include "slspectra/boundary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "slspectra/error.hpp"

namespace slspectra {

namespace {

constexpr double kPi = std::numbers::pi;

double parse_real(const std::string& s, const std::string& whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("cannot parse complex number '" + whole + "'");
}

// Polynomial envelope c*(a + b x) of the scaled associated function.
ExpPoly associated_envelope(const OperatorSpec& spec) {
  const cplx p = spec.parameter;
  switch (spec.family) {
    case Family::T1: return ExpPoly::linear(p / (1.0 + p), -1.0) * (4.0 * (p + 1.0) / (p - 1.0));
    case Family::T2: return ExpPoly::linear(p / (p - 1.0), -1.0) * (4.0 * (p - 1.0) / (p + 1.0));
    case Family::T3: return ExpPoly::linear(-p / (1.0 + p), 1.0) * (4.0 * (1.0 + p) / (1.0 - p));
    case Family::T4: return ExpPoly::linear(p / (1.0 - p), 1.0) * (4.0 * (1.0 - p) / (1.0 + p));
    default: throw ConfigError("associated functions exist only for T1..T4");
  }
}

// Adjoint envelope; built from conj(parameter).
ExpPoly adjoint_envelope(const OperatorSpec& spec) {
  const cplx p = std::conj(spec.parameter);
  switch (spec.family) {
    case Family::T1: return ExpPoly::linear(-1.0 / (1.0 + p), 1.0) * (4.0 * (p + 1.0) / (p - 1.0));
    case Family::T2: return ExpPoly::linear(1.0 / (p - 1.0), 1.0) * (4.0 * (p - 1.0) / (p + 1.0));
    case Family::T3: return ExpPoly::linear(1.0 / (1.0 + p), -1.0) * (4.0 * (1.0 + p) / (1.0 - p));
    case Family::T4: return ExpPoly::linear(1.0 / (1.0 - p), -1.0) * (4.0 * (1.0 - p) / (1.0 + p));
    default: throw ConfigError("associated functions exist only for T1..T4");
  }
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::T1: return "T1";
    case Family::T2: return "T2";
    case Family::T3: return "T3";
    case Family::T4: return "T4";
    case Family::Periodic: return "periodic";
    case Family::Antiperiodic: return "antiperiodic";
  }
  return "?";
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return parse_real(s, text);
  s.pop_back();
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_real(s, text)};
  return {parse_real(s.substr(0, split), text), parse_real(s.substr(split), text)};
}

void OperatorSpec::validate() const {
  if (family == Family::Periodic || family == Family::Antiperiodic) return;
  const char* name = (family == Family::T1 || family == Family::T2) ? "beta" : "alpha";
  if (parameter == cplx{1.0, 0.0} || parameter == cplx{-1.0, 0.0})
    throw ConfigError(family_name(family) + ": " + name +
                      " = +-1 is excluded (every complex number is an eigenvalue of infinite multiplicity)");
  if (!std::isfinite(parameter.real()) || !std::isfinite(parameter.imag()))
    throw ConfigError(std::string(name) + " must be finite");
}

bool OperatorSpec::near_degenerate() const {
  if (family == Family::Periodic || family == Family::Antiperiodic) return false;
  return std::abs(parameter - 1.0) < 1e-6 || std::abs(parameter + 1.0) < 1e-6;
}

OperatorSpec OperatorSpec::parse(const std::string& text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  OperatorSpec spec;
  if (lower == "periodic") {
    spec.family = Family::Periodic;
    return spec;
  }
  if (lower == "antiperiodic") {
    spec.family = Family::Antiperiodic;
    return spec;
  }
  const auto colon = lower.find(':');
  const auto eq = lower.find('=');
  if (colon == std::string::npos || eq == std::string::npos || eq < colon)
    throw ConfigError("operator spec '" + text + "' must look like T1:beta=3 or periodic");
  const std::string fam = lower.substr(0, colon);
  const std::string key = lower.substr(colon + 1, eq - colon - 1);
  if (fam == "t1") spec.family = Family::T1;
  else if (fam == "t2") spec.family = Family::T2;
  else if (fam == "t3") spec.family = Family::T3;
  else if (fam == "t4") spec.family = Family::T4;
  else throw ConfigError("unknown operator family '" + text.substr(0, colon) + "'");
  const bool wants_beta = spec.family == Family::T1 || spec.family == Family::T2;
  if (key != (wants_beta ? "beta" : "alpha"))
    throw ConfigError(family_name(spec.family) + " takes parameter '" + (wants_beta ? "beta" : "alpha") + "'");
  spec.parameter = parse_complex(text.substr(eq + 1));
  spec.validate();
  return spec;
}

std::string OperatorSpec::to_string() const {
  if (family == Family::Periodic || family == Family::Antiperiodic) return family_name(family);
  std::ostringstream os;
  os.precision(17);
  os << family_name(family) << ((family == Family::T1 || family == Family::T2) ? ":beta=" : ":alpha=")
     << parameter.real() << (parameter.imag() < 0 ? "-" : "+") << std::abs(parameter.imag()) << "i";
  return os.str();
}

bool is_even_type(Family f) {
  return f == Family::T1 || f == Family::T3 || f == Family::Periodic;
}

int harmonic_index(Family f, int n) { return is_even_type(f) ? 2 * n : 2 * n + 1; }

double base_eigenvalue(Family f, int n) {
  const double w = kPi * harmonic_index(f, n);
  return w * w;
}

int coupling_index(Family f, int n) { return is_even_type(f) ? n : 2 * n + 1; }

BcFunctionals bc_functionals(const OperatorSpec& spec) {
  spec.validate();
  const cplx p = spec.parameter;
  switch (spec.family) {
    case Family::T1: return {{{{0, 1, 0, p}, {1, 0, -1, 0}}}};
    case Family::T2: return {{{{0, 1, 0, p}, {1, 0, 1, 0}}}};
    case Family::T3: return {{{{0, 1, 0, -1}, {1, 0, p, 0}}}};
    case Family::T4: return {{{{0, 1, 0, 1}, {1, 0, p, 0}}}};
    case Family::Periodic: return {{{{1, 0, -1, 0}, {0, 1, 0, -1}}}};
    case Family::Antiperiodic: return {{{{1, 0, 1, 0}, {0, 1, 0, 1}}}};
  }
  throw ConfigError("unknown family");
}

BcFunctionals adjoint_bc_functionals(const OperatorSpec& spec) {
  spec.validate();
  const cplx pc = std::conj(spec.parameter);
  switch (spec.family) {
    case Family::T1: return {{{{pc, 0, 1, 0}, {0, -1, 0, 1}}}};
    case Family::T2: return {{{{pc, 0, 1, 0}, {0, 1, 0, 1}}}};
    case Family::T3: return {{{{1, 0, -1, 0}, {0, pc, 0, 1}}}};
    case Family::T4: return {{{{1, 0, 1, 0}, {0, pc, 0, 1}}}};
    default: return bc_functionals(spec);
  }
}

cplx gamma(const OperatorSpec& spec) {
  spec.validate();
  const cplx p = spec.parameter;
  switch (spec.family) {
    case Family::T1: return 16.0 * kPi * (p + 1.0) / (p - 1.0);
    case Family::T2: return 8.0 * kPi * (p - 1.0) / (p + 1.0);
    case Family::T3: return 16.0 * kPi * (1.0 + p) / (1.0 - p);
    case Family::T4: return 8.0 * kPi * (1.0 - p) / (1.0 + p);
    default: throw ConfigError("gamma is undefined for " + family_name(spec.family));
  }
}

double normalization_constant(const OperatorSpec& spec) {
  spec.validate();
  const ExpPoly env = associated_envelope(spec);
  return 0.5 * inner(env, env).real();
}

ExpPoly leading_harmonic(Family f, int n) {
  const int m = harmonic_index(f, n);
  return (f == Family::T3 || f == Family::T4) ? ExpPoly::sin_pi(m) : ExpPoly::cos_pi(m);
}

UnperturbedSystem unperturbed_system(const OperatorSpec& spec, int n) {
  spec.validate();
  if (spec.family == Family::Periodic || spec.family == Family::Antiperiodic)
    throw ConfigError("unperturbed_system is defined for T1..T4 only");
  if (n < 0) throw ConfigError("index must be nonnegative");

  const Family f = spec.family;
  const cplx p = spec.parameter;
  const int m = harmonic_index(f, n);
  UnperturbedSystem s{f, n, base_eigenvalue(f, n), m, gamma(spec) * double(coupling_index(f, n)),
                      true, {}, {}, {}, {}, {}, {}, {}};
  const ExpPoly c = ExpPoly::cos_pi(m), sn = ExpPoly::sin_pi(m);
  const ExpPoly env = associated_envelope(spec), env_star = adjoint_envelope(spec);
  const bool cos_type = (f == Family::T1 || f == Family::T2);
  // Unscaled associated function: scaled one divided by prefactor * unscale.
  const double unscale = (f == Family::T1 || f == Family::T3) ? 4.0 * kPi * n : 2.0 * kPi * m;

  if (n == 0 && (f == Family::T1 || f == Family::T3)) {
    // Simple eigenvalue 0; the partner of the constant function is half the
    // n -> 0 limit of the generic formula so that the pairing is exactly 1.
    s.double_eigenvalue = false;
    if (f == Family::T1) {
      s.e = s.eigenfunction = ExpPoly::constant(1.0);
      s.phi_star = env_star * 0.5;
      s.adjoint_eigenfunction = ExpPoly::linear(-1.0 / (1.0 + std::conj(p)), 1.0);
    } else {
      s.phi = env * 0.5;
      s.e_star = s.adjoint_eigenfunction = ExpPoly::constant(1.0);
      s.eigenfunction = ExpPoly::linear(-p / (1.0 + p), 1.0);
    }
    return s;
  }

  if (cos_type) {
    s.e = s.eigenfunction = c;
    s.phi = env * sn;
    s.e_star = s.adjoint_eigenfunction = sn;
    s.phi_star = env_star * c;
  } else {
    s.e = s.eigenfunction = sn;
    s.phi = env * c;
    s.e_star = s.adjoint_eigenfunction = c;
    s.phi_star = env_star * sn;
  }
  const cplx prefactor = [&] {
    switch (f) {
      case Family::T1: return 4.0 * (p + 1.0) / (p - 1.0);
      case Family::T2: return 4.0 * (p - 1.0) / (p + 1.0);
      case Family::T3: return 4.0 * (1.0 + p) / (1.0 - p);
      default: return 4.0 * (1.0 - p) / (1.0 + p);
    }
  }();
  s.associated = s.phi * (1.0 / (prefactor * unscale));
  return s;
}

BiorthogonalityMatrix biorthogonality_matrix(const OperatorSpec& spec, int n_max) {
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  std::vector<ExpPoly> f_sys, g_sys;
  BiorthogonalityMatrix out;
  for (int n = 0; n <= n_max; ++n) {
    const UnperturbedSystem s = unperturbed_system(spec, n);
    if (!s.e.empty()) {
      out.labels.push_back(n);
      g_sys.push_back(s.e);
      f_sys.push_back(s.phi_star);
    }
    if (!s.phi.empty()) {
      out.labels.push_back(-n);
      g_sys.push_back(s.phi);
      f_sys.push_back(s.e_star);
    }
  }
  // For T3 at n = 0 the single element carries label 0 on the associated side.
  const std::size_t size = g_sys.size();
  out.entries.assign(size, std::vector<cplx>(size));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) out.entries[i][j] = inner(f_sys[i], g_sys[j]);
  return out;
}

}  // namespace slspectra
