#pragma once

// Zero-mean trigonometric-polynomial potentials and their Fourier functionals.

#include <span>
#include <string>
#include <vector>

#include "slspectra/exp_poly.hpp"

namespace slspectra {

enum class TrigKind { Cos, Sin };

/// q(x) = sum_{k=1..K} a_k cos(2 pi k x) + b_k sin(2 pi k x), complex a_k, b_k.
/// There is no constant term: the mean of q over [0,1] is zero by construction.
class TrigPotential {
 public:
  TrigPotential() : TrigPotential(std::vector<cplx>(1), std::vector<cplx>(1)) {}
  /// cos_coeffs[k-1] multiplies cos(2 pi k x); the shorter list is zero-padded.
  TrigPotential(std::vector<cplx> cos_coeffs, std::vector<cplx> sin_coeffs);

  static TrigPotential zero() { return {}; }
  static TrigPotential single_cos(int k, cplx amplitude = 1.0);
  static TrigPotential single_sin(int k, cplx amplitude = 1.0);

  /// Parses {"cos": {"1": [re, im], ...}, "sin": {...}}; absent keys are zero.
  static TrigPotential from_json(const std::string& text);
  static TrigPotential from_json_file(const std::string& path);
  std::string to_json() const;

  int degree() const noexcept { return static_cast<int>(cos_.size()); }
  cplx cos_coeff(int k) const { return k >= 1 && k <= degree() ? cos_[k - 1] : cplx{}; }
  cplx sin_coeff(int k) const { return k >= 1 && k <= degree() ? sin_[k - 1] : cplx{}; }

  cplx operator()(double x) const;
  const ExpPoly& as_exp_poly() const noexcept { return poly_; }

  bool is_zero() const noexcept { return poly_.empty(); }
  /// q(x) == q(1-x) for all x, i.e. no sine content.
  bool is_reflection_symmetric() const;
  TrigPotential conj() const;
  TrigPotential operator+(const TrigPotential& o) const;

 private:
  std::vector<cplx> cos_, sin_;
  ExpPoly poly_;
};

/// integral over [0,1] of x^p q(x) trig(2 pi n x), p in {0,1,2}, exact.
cplx weighted_fourier(const TrigPotential& q, int weight_power, TrigKind kind, int n);

/// c_n, s_n, c_{n,1}, s_{n,1}, c_{n,2}, s_{n,2}.
struct FourierFunctionals {
  cplx c, s, c1, s1, c2, s2;
};
FourierFunctionals fourier_functionals(const TrigPotential& q, int n);

/// (f, g) = integral f conj(g) for closed-form functions.
inline cplx inner_product(const ExpPoly& f, const ExpPoly& g) { return inner(f, g); }

/// (f, g) for samples on the uniform grid x_i = i/(size-1), composite trapezoid.
cplx inner_product(std::span<const cplx> f, std::span<const cplx> g);

}  // namespace slspectra
