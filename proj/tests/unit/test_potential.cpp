#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slspectra/error.hpp"
#include "slspectra/potential.hpp"

using namespace slspectra;
using std::numbers::pi;

namespace {

// Composite Simpson on [0,1] with `panels` (even) panels: an oracle that knows
// nothing about exact trig integration.
template <class F>
cplx simpson(F f, int panels = 1 << 14) {
  const double h = 1.0 / panels;
  cplx sum = f(0.0) + f(1.0);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

TrigPotential random_potential(std::mt19937& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> a(degree), b(degree);
  for (int k = 0; k < degree; ++k) {
    a[k] = {u(rng), u(rng)};
    b[k] = {u(rng), u(rng)};
  }
  return {a, b};
}

}  // namespace

TEST_CASE("eval") {
  CHECK(std::abs(TrigPotential::single_sin(2)(0.125) - 1.0) < 1e-15);
  CHECK(std::abs(TrigPotential::single_cos(1)(0.5) + 1.0) < 1e-15);
  const TrigPotential zero;
  for (double x : {0.0, 0.3, 1.0}) CHECK(zero(x) == cplx{});
  CHECK(zero.is_zero());
}

TEST_CASE("eval matches the coefficient sum") {
  std::mt19937 rng(7);
  const TrigPotential q = random_potential(rng, 5);
  for (double x : {0.0, 0.17, 0.5, 0.91}) {
    cplx ref = 0;
    for (int k = 1; k <= 5; ++k)
      ref += q.cos_coeff(k) * std::cos(2 * pi * k * x) + q.sin_coeff(k) * std::sin(2 * pi * k * x);
    CHECK(std::abs(q(x) - ref) < 1e-13);
  }
}

TEST_CASE("weighted_fourier examples") {
  const TrigPotential q = TrigPotential::single_sin(2);
  CHECK(std::abs(weighted_fourier(q, 0, TrigKind::Sin, 2) - 0.5) < 1e-15);
  CHECK(std::abs(weighted_fourier(q, 0, TrigKind::Sin, 1)) < 1e-15);
  CHECK(std::abs(weighted_fourier(q, 1, TrigKind::Sin, 2) - 0.25) < 1e-15);
  CHECK(std::abs(weighted_fourier(q, 1, TrigKind::Cos, 0) + 1.0 / (4 * pi)) < 1e-15);

  auto oracle = [&](int p, bool sine, int n) {
    return simpson([&](double x) {
      const double t = sine ? std::sin(2 * pi * n * x) : std::cos(2 * pi * n * x);
      return std::pow(x, p) * q(x) * t;
    });
  };
  CHECK(std::abs(oracle(1, true, 2) - 0.25) < 1e-10);
  CHECK(std::abs(oracle(1, false, 0) + 1.0 / (4 * pi)) < 1e-10);
}

TEST_CASE("weighted_fourier against the Simpson oracle") {
  std::mt19937 rng(11);
  const int K = 4;
  const TrigPotential q = random_potential(rng, K);
  for (int p = 0; p <= 2; ++p)
    for (int n = 0; n <= 2 * K; ++n)
      for (TrigKind kind : {TrigKind::Cos, TrigKind::Sin}) {
        const cplx ref = simpson([&](double x) {
          const double t = kind == TrigKind::Sin ? std::sin(2 * pi * n * x) : std::cos(2 * pi * n * x);
          return std::pow(x, p) * q(x) * t;
        });
        CHECK(std::abs(weighted_fourier(q, p, kind, n) - ref) < 1e-10);
      }
}

TEST_CASE("exact orthogonality beyond the degree") {
  std::mt19937 rng(3);
  const TrigPotential q = random_potential(rng, 3);
  for (int n = 4; n < 12; ++n) {
    const auto f = fourier_functionals(q, n);
    CHECK(f.c == cplx{});
    CHECK(f.s == cplx{});
  }
}

TEST_CASE("linearity") {
  std::mt19937 rng(5);
  const TrigPotential a = random_potential(rng, 3), b = random_potential(rng, 5);
  const TrigPotential sum = a + b;
  for (int p = 0; p <= 2; ++p)
    for (int n = 0; n <= 6; ++n) {
      const cplx lhs = weighted_fourier(sum, p, TrigKind::Sin, n);
      const cplx rhs = weighted_fourier(a, p, TrigKind::Sin, n) + weighted_fourier(b, p, TrigKind::Sin, n);
      CHECK(std::abs(lhs - rhs) < 1e-15);
    }
}

TEST_CASE("Parseval") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const TrigPotential q = random_potential(rng, 6);
    double coeffs = 0;
    for (int k = 1; k <= 6; ++k) coeffs += (std::norm(q.cos_coeff(k)) + std::norm(q.sin_coeff(k))) / 2;
    const cplx norm2 = inner_product(q.as_exp_poly(), q.as_exp_poly());
    // Cross terms a_k conj(b_k) (cos, sin) vanish, so the sum is exact.
    CHECK(std::abs(norm2 - coeffs) < 1e-12);
  }
}

TEST_CASE("inner_product") {
  const ExpPoly c = ExpPoly::cos_pi(2) * std::sqrt(2.0);
  CHECK(std::abs(inner_product(c, c) - 1.0) < 1e-15);
  CHECK(std::abs(inner_product(ExpPoly::sin_pi(2), ExpPoly::cos_pi(2))) < 1e-15);
  CHECK(std::abs(inner_product(ExpPoly::linear(0, 1), ExpPoly::constant(1)) - 0.5) < 1e-15);
  // Second argument conjugated.
  const ExpPoly i1 = ExpPoly::constant(cplx(0, 1));
  CHECK(std::abs(inner_product(ExpPoly::constant(1), i1) - cplx(0, -1)) < 1e-15);

  const int N = 2000;
  std::vector<cplx> x(N + 1), one(N + 1, 1.0);
  for (int i = 0; i <= N; ++i) x[i] = double(i) / N;
  CHECK(std::abs(inner_product(std::span<const cplx>(x), std::span<const cplx>(one)) - 0.5) < 1e-12);
}

TEST_CASE("json round trip and errors") {
  const TrigPotential q({cplx(1, 2)}, {0, cplx(0.5, -1)});
  const TrigPotential back = TrigPotential::from_json(q.to_json());
  CHECK(back.cos_coeff(1) == cplx(1, 2));
  CHECK(back.sin_coeff(2) == cplx(0.5, -1));
  CHECK(TrigPotential::from_json(R"({"sin": {"3": 2}})").sin_coeff(3) == cplx(2, 0));
  CHECK_THROWS_AS(TrigPotential::from_json("{"), ConfigError);
  CHECK_THROWS_AS(TrigPotential::from_json(R"({"cos": {"0": [1, 0]}})"), ConfigError);
  CHECK_THROWS_AS(TrigPotential::from_json(R"({"cos": {"x": [1, 0]}})"), ConfigError);
  CHECK_THROWS_AS(TrigPotential::from_json(R"({"cos": {"1": "a"}})"), ConfigError);
  CHECK_THROWS_AS(TrigPotential::from_json_file("/nonexistent/q.json"), ConfigError);
}

TEST_CASE("reflection symmetry and conjugate") {
  CHECK(TrigPotential::single_cos(3).is_reflection_symmetric());
  CHECK_FALSE(TrigPotential::single_sin(1).is_reflection_symmetric());
  const TrigPotential q({cplx(1, 2)}, {cplx(0, 3)});
  for (double x : {0.1, 0.6}) CHECK(std::abs(q.conj()(x) - std::conj(q(x))) < 1e-15);
}
