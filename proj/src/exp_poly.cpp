#include "slspectra/exp_poly.hpp"

#include <cmath>
#include <numbers>

namespace slspectra {

ExpPoly ExpPoly::monomial(cplx coef, int power, int freq_index) {
  ExpPoly p;
  p.add_term({power, freq_index}, coef);
  return p;
}

ExpPoly ExpPoly::cos_pi(int m) {
  if (m == 0) return constant(1.0);
  ExpPoly p;
  p.add_term({0, m}, 0.5);
  p.add_term({0, -m}, 0.5);
  return p;
}

ExpPoly ExpPoly::sin_pi(int m) {
  ExpPoly p;
  if (m == 0) return p;
  const cplx half_i{0.0, 0.5};
  p.add_term({0, m}, -half_i);
  p.add_term({0, -m}, half_i);
  return p;
}

ExpPoly ExpPoly::linear(cplx a, cplx b) {
  ExpPoly p;
  p.add_term({0, 0}, a);
  p.add_term({1, 0}, b);
  return p;
}

void ExpPoly::add_term(Key k, cplx c) {
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

cplx ExpPoly::operator()(double x) const {
  cplx sum{};
  for (const auto& [key, c] : terms_) {
    const double phase = std::numbers::pi * key.second * x;
    sum += c * std::pow(x, key.first) * cplx{std::cos(phase), std::sin(phase)};
  }
  return sum;
}

cplx exp_moment(int power, int freq_index) {
  if (freq_index == 0) return 1.0 / (power + 1.0);
  // exp(i*pi*m) is exactly +-1 for integer m.
  const double e = (freq_index % 2 == 0) ? 1.0 : -1.0;
  const cplx i_omega{0.0, std::numbers::pi * freq_index};
  cplx value = (e - 1.0) / i_omega;
  for (int p = 1; p <= power; ++p) value = (e - double(p) * value) / i_omega;
  return value;
}

cplx ExpPoly::integral() const {
  cplx sum{};
  for (const auto& [key, c] : terms_) sum += c * exp_moment(key.first, key.second);
  return sum;
}

ExpPoly ExpPoly::conj() const {
  ExpPoly out;
  for (const auto& [key, c] : terms_) out.add_term({key.first, -key.second}, std::conj(c));
  return out;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key, c);
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key, -c);
  return *this;
}

ExpPoly& ExpPoly::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly out;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_)
      out.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
  return out;
}

cplx inner(const ExpPoly& f, const ExpPoly& g) {
  // Sum the product integral term by term without materializing f*conj(g).
  cplx sum{};
  for (const auto& [kf, cf] : f.terms())
    for (const auto& [kg, cg] : g.terms())
      sum += cf * std::conj(cg) * exp_moment(kf.first + kg.first, kf.second - kg.second);
  return sum;
}

}  // namespace slspectra
