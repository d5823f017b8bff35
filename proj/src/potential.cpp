#include "slspectra/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "slspectra/error.hpp"

namespace slspectra {

TrigPotential::TrigPotential(std::vector<cplx> cos_coeffs, std::vector<cplx> sin_coeffs)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  const std::size_t k_max = std::max<std::size_t>({cos_.size(), sin_.size(), 1});
  cos_.resize(k_max);
  sin_.resize(k_max);
  for (std::size_t i = 0; i < k_max; ++i) {
    const cplx a = cos_[i], b = sin_[i];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
        !std::isfinite(b.imag()))
      throw ConfigError("potential coefficients must be finite");
    const int m = 2 * static_cast<int>(i + 1);
    poly_ += ExpPoly::cos_pi(m) * a;
    poly_ += ExpPoly::sin_pi(m) * b;
  }
}

TrigPotential TrigPotential::single_cos(int k, cplx amplitude) {
  std::vector<cplx> c(k);
  c[k - 1] = amplitude;
  return {c, {}};
}

TrigPotential TrigPotential::single_sin(int k, cplx amplitude) {
  std::vector<cplx> s(k);
  s[k - 1] = amplitude;
  return {{}, s};
}

namespace {

std::vector<cplx> parse_block(const nlohmann::json& root, const char* name) {
  std::vector<cplx> out;
  if (!root.contains(name)) return out;
  const auto& block = root.at(name);
  if (!block.is_object()) throw ConfigError(std::string("potential: '") + name + "' must be an object");
  for (const auto& [key, value] : block.items()) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ConfigError("potential: harmonic index '" + key + "' is not an integer");
    }
    if (k < 1) throw ConfigError("potential: harmonic index must be >= 1 (q has zero mean)");
    cplx c;
    if (value.is_number()) {
      c = value.get<double>();
    } else if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
      c = {value[0].get<double>(), value[1].get<double>()};
    } else {
      throw ConfigError("potential: coefficient for '" + key + "' must be [re, im]");
    }
    if (static_cast<int>(out.size()) < k) out.resize(k);
    out[k - 1] = c;
  }
  return out;
}

nlohmann::json dump_block(const std::vector<cplx>& coeffs) {
  nlohmann::json block = nlohmann::json::object();
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != cplx{}) block[std::to_string(i + 1)] = {coeffs[i].real(), coeffs[i].imag()};
  return block;
}

}  // namespace

TrigPotential TrigPotential::from_json(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("potential: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("potential: top level must be an object");
  for (const auto& [key, _] : root.items())
    if (key != "cos" && key != "sin") throw ConfigError("potential: unknown key '" + key + "'");
  return {parse_block(root, "cos"), parse_block(root, "sin")};
}

TrigPotential TrigPotential::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string TrigPotential::to_json() const {
  nlohmann::json root{{"cos", dump_block(cos_)}, {"sin", dump_block(sin_)}};
  return root.dump();
}

cplx TrigPotential::operator()(double x) const {
  // Harmonics by rotation: e^{2 pi i k x} = z^k.
  const double w = 2.0 * std::numbers::pi * x;
  const cplx z{std::cos(w), std::sin(w)};
  cplx zk = z, sum{};
  for (int k = 1; k <= degree(); ++k) {
    sum += cos_[k - 1] * zk.real() + sin_[k - 1] * zk.imag();
    zk *= z;
  }
  return sum;
}

bool TrigPotential::is_reflection_symmetric() const {
  return std::all_of(sin_.begin(), sin_.end(), [](cplx b) { return b == cplx{}; });
}

TrigPotential TrigPotential::conj() const {
  std::vector<cplx> c(cos_), s(sin_);
  for (auto& v : c) v = std::conj(v);
  for (auto& v : s) v = std::conj(v);
  return {c, s};
}

TrigPotential TrigPotential::operator+(const TrigPotential& o) const {
  const std::size_t k = std::max(cos_.size(), o.cos_.size());
  std::vector<cplx> c(k), s(k);
  for (std::size_t i = 0; i < k; ++i) {
    c[i] = (i < cos_.size() ? cos_[i] : cplx{}) + (i < o.cos_.size() ? o.cos_[i] : cplx{});
    s[i] = (i < sin_.size() ? sin_[i] : cplx{}) + (i < o.sin_.size() ? o.sin_[i] : cplx{});
  }
  return {c, s};
}

cplx weighted_fourier(const TrigPotential& q, int weight_power, TrigKind kind, int n) {
  if (weight_power < 0 || weight_power > 2) throw ConfigError("weight power must be 0, 1 or 2");
  if (n < 0) throw ConfigError("harmonic index must be nonnegative");
  const ExpPoly trig = kind == TrigKind::Cos ? ExpPoly::cos_pi(2 * n) : ExpPoly::sin_pi(2 * n);
  return inner(q.as_exp_poly() * ExpPoly::monomial(1.0, weight_power, 0), trig);
}

FourierFunctionals fourier_functionals(const TrigPotential& q, int n) {
  using enum TrigKind;
  return {weighted_fourier(q, 0, Cos, n), weighted_fourier(q, 0, Sin, n),
          weighted_fourier(q, 1, Cos, n), weighted_fourier(q, 1, Sin, n),
          weighted_fourier(q, 2, Cos, n), weighted_fourier(q, 2, Sin, n)};
}

cplx inner_product(std::span<const cplx> f, std::span<const cplx> g) {
  if (f.size() != g.size()) throw ConfigError("inner_product: grid mismatch");
  if (f.size() < 2) throw ConfigError("inner_product: need at least two samples");
  const std::size_t last = f.size() - 1;
  cplx sum = 0.5 * (f[0] * std::conj(g[0]) + f[last] * std::conj(g[last]));
  for (std::size_t i = 1; i < last; ++i) sum += f[i] * std::conj(g[i]);
  return sum / static_cast<double>(last);
}

}  // namespace slspectra
