#pragma once

// Exponential polynomials: finite sums of c * x^p * exp(i*pi*m*x) on [0,1].
//
// Every closed-form function in this library (the potential, unperturbed
// eigenfunctions, associated functions and their adjoints) lives in this
// class, so products and L2 inner products are integrated exactly.

#include <complex>
#include <map>
#include <utility>

namespace slspectra {

using cplx = std::complex<double>;

class ExpPoly {
 public:
  /// (power p, frequency index m) -> coefficient; frequency is pi*m.
  using Key = std::pair<int, int>;

  ExpPoly() = default;

  static ExpPoly monomial(cplx coef, int power, int freq_index);
  static ExpPoly constant(cplx c) { return monomial(c, 0, 0); }
  /// cos(pi*m*x) and sin(pi*m*x).
  static ExpPoly cos_pi(int m);
  static ExpPoly sin_pi(int m);
  /// a + b*x
  static ExpPoly linear(cplx a, cplx b);

  bool empty() const noexcept { return terms_.empty(); }
  const std::map<Key, cplx>& terms() const noexcept { return terms_; }

  cplx operator()(double x) const;
  /// Exact integral over [0,1].
  cplx integral() const;
  ExpPoly conj() const;

  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  ExpPoly& operator*=(cplx s);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(ExpPoly a, cplx s) { return a *= s; }
  friend ExpPoly operator*(cplx s, ExpPoly a) { return a *= s; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);

 private:
  void add_term(Key k, cplx c);
  std::map<Key, cplx> terms_;
};

/// Integral of x^p exp(i*pi*m*x) over [0,1], closed form.
cplx exp_moment(int power, int freq_index);

/// (f, g) = integral of f * conj(g); second argument conjugated.
cplx inner(const ExpPoly& f, const ExpPoly& g);

}  // namespace slspectra
