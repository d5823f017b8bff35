#include "slspectra/solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "slspectra/error.hpp"

namespace slspectra {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;

// Complex state split into real/imaginary parts for the odeint algebra.
template <std::size_t N>
using RealState = std::array<double, 2 * N>;

template <std::size_t N>
cplx get(const RealState<N>& s, std::size_t i) {
  return {s[2 * i], s[2 * i + 1]};
}
template <std::size_t N>
void put(RealState<N>& s, std::size_t i, cplx v) {
  s[2 * i] = v.real();
  s[2 * i + 1] = v.imag();
}

// Second-order system y'' = (q - lambda) y for `N/2` solutions stored as (y, y').
template <std::size_t N>
struct DirectSystem {
  const TrigPotential& q;
  cplx lambda;
  void operator()(const RealState<N>& s, RealState<N>& ds, double x) const {
    const cplx f = q(x) - lambda;
    for (std::size_t i = 0; i < N; i += 2) {
      put<N>(ds, i, get<N>(s, i + 1));
      put<N>(ds, i + 1, f * get<N>(s, i));
    }
  }
};

// Envelope (a, b) with y = a cos(kx) + b sin(kx)/k, y' = -a k sin(kx) + b cos(kx).
template <std::size_t N>
struct EnvelopeSystem {
  const TrigPotential& q;
  cplx k;
  void operator()(const RealState<N>& s, RealState<N>& ds, double x) const {
    const cplx c = std::cos(k * x), sn = std::sin(k * x);
    const cplx qx = q(x);
    for (std::size_t i = 0; i < N; i += 2) {
      const cplx y = get<N>(s, i) * c + get<N>(s, i + 1) * sn / k;
      put<N>(ds, i, -qx * y * sn / k);
      put<N>(ds, i + 1, qx * y * c);
    }
  }
};

// Advances s from x to x_end with an embedded Runge-Kutta-Fehlberg 7(8) pair.
template <std::size_t N, class System>
void advance(const System& sys, RealState<N>& s, double& x, double x_end, double& dt, double tol) {
  using Stepper = odeint::runge_kutta_fehlberg78<RealState<N>>;
  auto ctrl = odeint::make_controlled<Stepper>(tol, tol);
  while (x < x_end) {
    double h = dt;
    bool clamped = false;
    if (x + h >= x_end) {
      h = x_end - x;
      clamped = true;
    }
    const auto result = ctrl.try_step(sys, s, x, h);
    if (result == odeint::success) {
      if (clamped) x = x_end;
      else dt = h;
    } else {
      dt = h;
      if (dt < 1e-13) throw IntegrationError("integrator step size underflow", x);
    }
  }
}

bool use_envelope(cplx lambda) { return std::abs(lambda) > kEnvelopeThreshold; }

cplx sinc_k(cplx k) {  // sin(k)/k
  if (std::abs(k) < 1e-4) return 1.0 - k * k / 6.0;
  return std::sin(k) / k;
}

}  // namespace

namespace {

// Taylor stepping for y'' = (q - lambda) y carrying `count` solutions.
class TaylorStepper {
 public:
  TaylorStepper(const TrigPotential& q, cplx lambda, double tol) : q_(q), lambda_(lambda), tol_(tol) {
    const int K = q.degree();
    omega_.resize(K);
    for (int k = 1; k <= K; ++k) omega_[k - 1] = 2.0 * kPi * k;
    double rate = std::max(1.0, std::abs(std::sqrt(lambda)));
    if (!q.is_zero()) rate = std::max(rate, 2.0 * kPi * K);
    h_max_ = 0.5 / rate;
  }

  double max_step() const { return h_max_; }

  // Advances the (y, y') pairs in `state` from x over one step h.
  // Returns false if the series did not converge (caller halves h).
  template <std::size_t N>
  bool step(std::array<cplx, N>& state, double x, double h) const {
    constexpr int kMaxOrder = 60;
    // Scaled Taylor coefficients of g(x + t) = q(x + t) - lambda: G_j = g_j h^j.
    std::array<cplx, kMaxOrder + 1> g{};
    const int K = q_.degree();
    for (int k = 0; k < K; ++k) {
      const cplx a = q_.cos_coeff(k + 1), b = q_.sin_coeff(k + 1);
      if (a == cplx{} && b == cplx{}) continue;
      const double th = omega_[k] * x;
      const double c = std::cos(th), s = std::sin(th);
      const double wh = omega_[k] * h;
      double pw = 1.0;  // (wh)^j / j!
      for (int j = 0; j <= kMaxOrder; ++j) {
        // cos(th + j pi/2), sin(th + j pi/2)
        double cj, sj;
        switch (j % 4) {
          case 0: cj = c; sj = s; break;
          case 1: cj = -s; sj = c; break;
          case 2: cj = -c; sj = -s; break;
          default: cj = s; sj = -c; break;
        }
        g[j] += pw * (a * cj + b * sj);
        pw *= wh / (j + 1);
        if (pw < 1e-300) break;
      }
    }
    g[0] -= lambda_;
    const double h2 = h * h;
    for (std::size_t sidx = 0; sidx < N; sidx += 2) {
      std::array<cplx, kMaxOrder + 1> v{};
      v[0] = state[sidx];
      v[1] = state[sidx + 1] * h;
      const double size = std::abs(v[0]) + std::abs(v[1]) + 1e-300;
      int order = 1;
      bool converged = false;
      for (int m = 0; m + 2 <= kMaxOrder; ++m) {
        cplx acc{};
        for (int j = 0; j <= m; ++j) acc += g[j] * v[m - j];
        v[m + 2] = h2 * acc / double((m + 2) * (m + 1));
        order = m + 2;
        if (m >= 6 && std::abs(v[m + 2]) + std::abs(v[m + 1]) < 1e-3 * tol_ * size &&
            std::abs(v[m]) < tol_ * size) {
          converged = true;
          break;
        }
      }
      if (!converged) return false;
      cplx y{}, dy{};
      for (int m = order; m >= 0; --m) {
        y += v[m];
        if (m > 0) dy += double(m) * v[m];
      }
      state[sidx] = y;
      state[sidx + 1] = dy / h;
    }
    return true;
  }

  template <std::size_t N>
  void advance(std::array<cplx, N>& state, double& x, double x_end) const {
    const int pieces = std::max(1, static_cast<int>(std::ceil((x_end - x) / h_max_ - 1e-9)));
    const double x0 = x, h0 = (x_end - x0) / pieces;
    for (int i = 0; i < pieces; ++i) {
      const double xa = x0 + i * h0;
      sub_advance(state, xa, h0, 0);
    }
    x = x_end;
  }

 private:
  template <std::size_t N>
  void sub_advance(std::array<cplx, N>& state, double x, double h, int depth) const {
    std::array<cplx, N> trial = state;
    if (step(trial, x, h)) {
      state = trial;
      return;
    }
    if (depth > 30 || h < 1e-13) throw IntegrationError("Taylor integrator step size underflow", x);
    sub_advance(state, x, 0.5 * h, depth + 1);
    sub_advance(state, x + 0.5 * h, 0.5 * h, depth + 1);
  }

  const TrigPotential& q_;
  cplx lambda_;
  double tol_;
  std::vector<double> omega_;
  double h_max_;
};

}  // namespace

FundamentalData integrate_fundamental(const TrigPotential& q, cplx lambda, double tol, Integrator method) {
  if (!(tol > 0)) throw ConfigError("integration tolerance must be positive");
  const cplx k = std::sqrt(lambda);
  if (q.is_zero()) {
    return {std::cos(k), -lambda * sinc_k(k), sinc_k(k), std::cos(k)};
  }
  if (method == Integrator::Taylor) {
    std::array<cplx, 4> s{1.0, 0.0, 0.0, 1.0};
    double x = 0.0;
    TaylorStepper(q, lambda, tol).advance(s, x, 1.0);
    return {s[0], s[1], s[2], s[3]};
  }
  double x = 0.0, dt = 1e-3;
  if (!use_envelope(lambda)) {
    RealState<4> s{1, 0, 0, 0, 0, 0, 1, 0};
    advance<4>(DirectSystem<4>{q, lambda}, s, x, 1.0, dt, tol);
    return {get<4>(s, 0), get<4>(s, 1), get<4>(s, 2), get<4>(s, 3)};
  }
  RealState<4> s{1, 0, 0, 0, 0, 0, 1, 0};
  advance<4>(EnvelopeSystem<4>{q, k}, s, x, 1.0, dt, tol);
  const cplx c = std::cos(k), sn = std::sin(k);
  const cplx a1 = get<4>(s, 0), b1 = get<4>(s, 1), a2 = get<4>(s, 2), b2 = get<4>(s, 3);
  return {a1 * c + b1 * sn / k, -a1 * k * sn + b1 * c, a2 * c + b2 * sn / k, -a2 * k * sn + b2 * c};
}

std::vector<cplx> sample_solution(const TrigPotential& q, cplx lambda, cplx y0, cplx dy0, int grid,
                                  double tol, Integrator method) {
  if (grid < 1) throw ConfigError("grid must be positive");
  std::vector<cplx> out(grid + 1);
  out[0] = y0;
  const cplx k = std::sqrt(lambda);
  double x = 0.0, dt = 1e-3;
  if (method == Integrator::Taylor) {
    const TaylorStepper stepper(q, lambda, tol);
    std::array<cplx, 2> s{y0, dy0};
    for (int i = 1; i <= grid; ++i) {
      stepper.advance(s, x, double(i) / grid);
      out[i] = s[0];
    }
    return out;
  }
  if (!use_envelope(lambda)) {
    RealState<2> s{};
    put<2>(s, 0, y0);
    put<2>(s, 1, dy0);
    for (int i = 1; i <= grid; ++i) {
      advance<2>(DirectSystem<2>{q, lambda}, s, x, double(i) / grid, dt, tol);
      out[i] = get<2>(s, 0);
    }
    return out;
  }
  RealState<2> s{};
  put<2>(s, 0, y0);
  put<2>(s, 1, dy0);
  for (int i = 1; i <= grid; ++i) {
    const double xi = double(i) / grid;
    advance<2>(EnvelopeSystem<2>{q, k}, s, x, xi, dt, tol);
    out[i] = get<2>(s, 0) * std::cos(k * xi) + get<2>(s, 1) * std::sin(k * xi) / k;
  }
  return out;
}

cplx char_det(const BcFunctionals& bc, const FundamentalData& fd) {
  const std::array<cplx, 4> v1{1.0, 0.0, fd.y1, fd.dy1};
  const std::array<cplx, 4> v2{0.0, 1.0, fd.y2, fd.dy2};
  cplx m[2][2];
  for (int i = 0; i < 2; ++i) {
    m[i][0] = m[i][1] = 0.0;
    for (int c = 0; c < 4; ++c) {
      m[i][0] += bc.rows[i][c] * v1[c];
      m[i][1] += bc.rows[i][c] * v2[c];
    }
  }
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

cplx char_det(const BcFunctionals& bc, const TrigPotential& q, cplx lambda, double tol) {
  return char_det(bc, integrate_fundamental(q, lambda, tol));
}

cplx char_det(const OperatorSpec& spec, const TrigPotential& q, cplx lambda, double tol) {
  return char_det(bc_functionals(spec), q, lambda, tol);
}

// ---------------------------------------------------------------------------
// Contour machinery

namespace {

struct ContourHitsZero {};

constexpr double kMaxArgStep = kPi / 4;
constexpr int kMaxBisect = 14;
constexpr double kZeroOnContour = 1e-10;

struct Circle {
  cplx center;
  double radius;
  std::vector<cplx> z, d;
  double scale = 0.0;
};

template <class F>
Circle sample_circle(const F& f, cplx center, double radius, int m) {
  Circle c{center, radius, std::vector<cplx>(m), std::vector<cplx>(m)};
  for (int j = 0; j < m; ++j) {
    c.z[j] = center + std::polar(radius, 2.0 * kPi * j / m);
    c.d[j] = f(c.z[j]);
    c.scale = std::max(c.scale, std::abs(c.d[j]));
  }
  return c;
}

template <class F>
double segment_increment(const F& f, const Circle& c, double th0, cplx d0, double th1, cplx d1,
                         int depth) {
  const double inc = std::arg(d1 / d0);
  if (std::abs(inc) <= kMaxArgStep) return inc;
  if (depth >= kMaxBisect) throw ContourHitsZero{};
  const double thm = 0.5 * (th0 + th1);
  const cplx dm = f(c.center + std::polar(c.radius, thm));
  if (std::abs(dm) < kZeroOnContour * c.scale) throw ContourHitsZero{};
  return segment_increment(f, c, th0, d0, thm, dm, depth + 1) +
         segment_increment(f, c, thm, dm, th1, d1, depth + 1);
}

// Winding number of f along the sampled circle, bisecting segments whose
// argument increment exceeds pi/4.
template <class F>
int winding(const F& f, const Circle& c) {
  const int m = static_cast<int>(c.z.size());
  for (const cplx& d : c.d)
    if (std::abs(d) < kZeroOnContour * c.scale) throw ContourHitsZero{};
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    const int next = (j + 1) % m;
    total += segment_increment(f, c, 2.0 * kPi * j / m, c.d[j], 2.0 * kPi * (j + 1) / m, c.d[next], 0);
  }
  const double turns = total / (2.0 * kPi);
  const long rounded = std::lround(turns);
  if (std::abs(total - 2.0 * kPi * rounded) > 0.01) throw ContourHitsZero{};
  return static_cast<int>(rounded);
}

constexpr std::array<double, 6> kRadiusFactors{1.0, 1.01, 0.99, 1.02, 0.98, 1.03};

template <class F>
std::pair<Circle, int> counted_circle(const F& f, cplx center, double radius, int m) {
  for (double factor : kRadiusFactors) {
    try {
      Circle c = sample_circle(f, center, radius * factor, m);
      const int count = winding(f, c);
      return {std::move(c), count};
    } catch (const ContourHitsZero&) {
    }
  }
  throw NumericalError("characteristic determinant vanishes on the contour after 5 radius adjustments");
}

// Power sums of the zeros (in the scaled variable u = (z - c)/r) from
// contour samples. D' on the circle comes from the Taylor coefficients of D,
// which are the discrete Fourier coefficients of the samples.
std::vector<cplx> power_sums(const Circle& c, int count) {
  const int m = static_cast<int>(c.d.size());
  std::vector<cplx> taylor(m);
  for (int k = 0; k < m; ++k) {
    cplx sum{};
    for (int j = 0; j < m; ++j) sum += c.d[j] * std::polar(1.0, -2.0 * kPi * double(j) * k / m);
    taylor[k] = sum / double(m);
  }
  std::vector<cplx> sums(count + 1);
  for (int j = 0; j < m; ++j) {
    cplx wdd{};  // (z - c) D'(z)
    for (int k = 1; k < m; ++k) wdd += double(k) * taylor[k] * std::polar(1.0, 2.0 * kPi * double(j) * k / m);
    const cplx ratio = wdd / c.d[j];
    const cplx u = std::polar(1.0, 2.0 * kPi * j / m);
    cplx up = 1.0;
    for (int p = 0; p <= count; ++p) {
      sums[p] += up * ratio;
      up *= u;
    }
  }
  for (auto& s : sums) s /= double(m);
  return sums;
}

// Largest Taylor coefficient in the upper half of the spectrum, relative to scale.
double taylor_tail(const Circle& c) {
  const int m = static_cast<int>(c.d.size());
  double tail = 0.0;
  for (int k = 3 * m / 8; k < 5 * m / 8; ++k) {
    cplx sum{};
    for (int j = 0; j < m; ++j) sum += c.d[j] * std::polar(1.0, -2.0 * kPi * double(j) * k / m);
    tail = std::max(tail, std::abs(sum) / m);
  }
  return tail / c.scale;
}

std::vector<cplx> roots_from_power_sums(const std::vector<cplx>& p, int count) {
  // Newton identities -> elementary symmetric polynomials -> companion matrix.
  std::vector<cplx> e(count + 1);
  e[0] = 1.0;
  for (int k = 1; k <= count; ++k) {
    cplx acc{};
    for (int i = 1; i <= k; ++i) acc += ((i % 2) ? 1.0 : -1.0) * e[k - i] * p[i];
    e[k] = acc / double(k);
  }
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(count, count);
  for (int i = 1; i < count; ++i) companion(i, i - 1) = 1.0;
  // u^N - e1 u^{N-1} + e2 u^{N-2} - ... = 0
  for (int k = 1; k <= count; ++k) companion(0, k - 1) = ((k % 2) ? 1.0 : -1.0) * e[k];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<cplx> roots(count);
  for (int i = 0; i < count; ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

double fd_step(cplx z) { return std::max(1e-6, 1e-8 * std::abs(z)); }

template <class F>
cplx fd_derivative(const F& f, cplx z) {
  const double h = fd_step(z);
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

struct NewtonResult {
  cplx z;
  bool converged;
};

template <class F>
NewtonResult newton(const F& f, cplx z, cplx center, double radius, const SolverOptions& opts) {
  for (int it = 0; it < opts.max_newton_iter; ++it) {
    const cplx d = f(z);
    if (d == cplx{}) return {z, true};
    const cplx dd = fd_derivative(f, z);
    if (dd == cplx{}) return {z, false};
    const cplx step = d / dd;
    z -= step;
    if (std::abs(z - center) > 1.5 * radius) return {z, false};
    if (std::abs(step) < opts.newton_tol) return {z, true};
  }
  return {z, false};
}

}  // namespace

int count_zeros(const BcFunctionals& bc, const TrigPotential& q, cplx center, double radius, double tol) {
  if (!(radius > 0)) throw ConfigError("contour radius must be positive");
  const auto f = [&](cplx z) { return char_det(bc, q, z, tol); };
  return counted_circle(f, center, radius, 64).second;
}

int count_zeros(const OperatorSpec& spec, const TrigPotential& q, cplx center, double radius, double tol) {
  return count_zeros(bc_functionals(spec), q, center, radius, tol);
}

DiskResult locate_in_disk(const BcFunctionals& bc, const TrigPotential& q, cplx center, double radius,
                          const SolverOptions& opts) {
  const auto f = [&](cplx z) { return char_det(bc, q, z, opts.integration_tol); };
  auto [circle, count] = counted_circle(f, center, radius, 64);
  DiskResult out;
  out.center = center;
  out.radius = circle.radius;
  out.count = count;
  out.scale = circle.scale;
  if (count <= 0) return out;
  if (count > 8) throw NumericalError("too many zeros in one disk for the moment method");

  // Refine sampling until the Taylor spectrum of D is resolved.
  // Stop at the noise floor: a doubling that does not halve the tail gains nothing.
  double tail = taylor_tail(circle);
  while (tail > 1e-12 && circle.z.size() < 512) {
    Circle finer = sample_circle(f, center, circle.radius, 2 * static_cast<int>(circle.z.size()));
    const double finer_tail = taylor_tail(finer);
    circle = std::move(finer);
    if (finer_tail > 0.5 * tail) break;
    tail = finer_tail;
  }
  out.scale = circle.scale;

  const std::vector<cplx> sums = power_sums(circle, count);
  std::vector<cplx> seeds = roots_from_power_sums(sums, count);
  for (auto& u : seeds) u = center + circle.radius * u;

  // Polish each moment root; keep the moment root if Newton wanders off.
  struct Candidate {
    cplx seed, z;
    bool polished;
  };
  std::vector<Candidate> cands;
  for (const cplx s : seeds) {
    const NewtonResult r = newton(f, s, center, circle.radius, opts);
    const bool ok = r.converged && std::abs(r.z - center) <= circle.radius;
    cands.push_back({s, ok ? r.z : s, ok});
  }

  // Clusters: coincident limits, or vanishing derivative at both members.
  const double merge_tol = 10.0 * opts.newton_tol;
  const double flat = 1e-6 * circle.scale;
  std::vector<int> group(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) group[i] = static_cast<int>(i);
  std::vector<double> dprime(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) dprime[i] = std::abs(fd_derivative(f, cands[i].z));
  for (std::size_t i = 0; i < cands.size(); ++i)
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      const double gap = std::abs(cands[i].z - cands[j].z);
      const bool coincide = gap < merge_tol;
      const bool flat_pair = dprime[i] < flat && dprime[j] < flat && gap < 0.01 * circle.radius;
      if (coincide || flat_pair) {
        const int gi = group[i], gj = group[j];
        for (auto& g : group)
          if (g == gj) g = gi;
      }
    }

  // A polished pair that collapsed onto one root without a flat derivative
  // means one zero was missed: retry from ring starting points and hints.
  std::vector<cplx> starts = opts.hints;
  for (int s = 0; s < 8; ++s) starts.push_back(center + std::polar(0.5 * circle.radius, 2.0 * kPi * s / 8));

  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      if (group[i] != group[j]) continue;
      const bool flat_pair = dprime[i] < flat && dprime[j] < flat;
      if (flat_pair || std::abs(cands[i].seed - cands[j].seed) < merge_tol) continue;
      // Collapsed distinct seeds: look for another root.
      bool repaired = false;
      for (const cplx st : starts) {
        const NewtonResult r = newton(f, st, center, circle.radius, opts);
        if (!r.converged || std::abs(r.z - center) > circle.radius) continue;
        if (std::abs(r.z - cands[i].z) < 1e3 * opts.newton_tol) continue;
        cands[j].z = r.z;
        group[j] = static_cast<int>(j);
        dprime[j] = std::abs(fd_derivative(f, r.z));
        repaired = true;
        break;
      }
      if (!repaired) throw NumericalError("Newton iteration failed to separate the zeros in the disk");
    }
  }

  std::vector<int> seen;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (std::find(seen.begin(), seen.end(), group[i]) != seen.end()) continue;
    seen.push_back(group[i]);
    EigenRecord rec;
    int members = 0;
    cplx seed_sum{};
    for (std::size_t j = 0; j < cands.size(); ++j)
      if (group[j] == group[i]) {
        ++members;
        seed_sum += cands[j].seed;
      }
    rec.multiplicity = members;
    // Clustered zeros: the mean of the moment roots is far better conditioned
    // than Newton on a (nearly) multiple root.
    rec.lambda = members == 1 ? cands[i].z : seed_sum / double(members);
    rec.residual = std::abs(f(rec.lambda));
    out.records.push_back(rec);
  }
  std::sort(out.records.begin(), out.records.end(), [](const EigenRecord& a, const EigenRecord& b) {
    return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real() : a.lambda.imag() < b.lambda.imag();
  });
  const bool simple_pair = out.records.size() == 2 && out.records[0].multiplicity == 1;
  for (std::size_t i = 0; i < out.records.size(); ++i)
    out.records[i].branch = simple_pair ? static_cast<int>(i) + 1 : 0;
  return out;
}

double disk_radius(int n) { return static_cast<double>(n); }

double isolation_radius(Family f, int n) {
  const double here = base_eigenvalue(f, n);
  double r = 0.5 * (base_eigenvalue(f, n + 1) - here);
  if (n > 0) r = std::min(r, 0.5 * (here - base_eigenvalue(f, n - 1)));
  return r;
}

DiskResult locate_eigenpair(const OperatorSpec& spec, const TrigPotential& q, int n, const SolverOptions& opts) {
  if (n < 0) throw ConfigError("disk index must be nonnegative");
  const BcFunctionals bc = bc_functionals(spec);
  const double base = base_eigenvalue(spec.family, n);
  const int expected = (n == 0 && is_even_type(spec.family)) ? 1 : 2;

  DiskResult res;
  const double iso = isolation_radius(spec.family, n);
  if (n == 0) {
    res = locate_in_disk(bc, q, base, iso, opts);
  } else {
    res = locate_in_disk(bc, q, base, disk_radius(n), opts);
    if (res.count != expected && iso > disk_radius(n)) res = locate_in_disk(bc, q, base, iso, opts);
  }
  res.n = n;
  res.expected_count = expected;
  res.flagged = res.count != expected;
  for (auto& r : res.records) r.disk_index = n;
  return res;
}

int thread_cap_from_env() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SL_SPECTRA_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) cap = v;
  }
  return std::max(cap, 1);
}

std::vector<DiskOutcome> locate_range(const OperatorSpec& spec, const TrigPotential& q, int n_min, int n_max,
                                      const SolverOptions& opts, int threads) {
  if (n_min < 0 || n_max < n_min) throw ConfigError("invalid disk range");
  const int total = n_max - n_min + 1;
  std::vector<DiskOutcome> out(total);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < total; i = next++) {
      try {
        out[i].result = locate_eigenpair(spec, q, n_min + i, opts);
      } catch (const std::exception& e) {
        out[i].result.n = n_min + i;
        out[i].error = e.what();
      }
    }
  };
  const int workers = std::clamp(threads, 1, total);
  std::vector<std::jthread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  return out;
}

std::optional<int> effective_index(const OperatorSpec& spec, const TrigPotential& q, int n_min, int n_max,
                                   double tol) {
  std::optional<int> eff;
  for (int n = n_max; n >= std::max(n_min, 1); --n) {
    if (count_zeros(spec, q, base_eigenvalue(spec.family, n), disk_radius(n), tol) != 2) break;
    eff = n;
  }
  return eff;
}

int nearest_index(Family f, cplx lambda) {
  const double root = std::sqrt(std::max(lambda.real(), 0.0)) / kPi;
  const int n = is_even_type(f) ? static_cast<int>(std::lround(root / 2.0))
                                : static_cast<int>(std::lround((root - 1.0) / 2.0));
  return std::max(n, 0);
}

void fix_phase(std::vector<cplx>& psi, const ExpPoly& harmonic) {
  const int grid = static_cast<int>(psi.size()) - 1;
  std::vector<cplx> h(psi.size());
  for (int i = 0; i <= grid; ++i) h[i] = harmonic(double(i) / grid);
  const cplx pairing = inner_product(psi, h);
  if (std::abs(pairing) == 0.0) return;
  const cplx rot = std::conj(pairing) / std::abs(pairing);
  for (auto& v : psi) v *= rot;
}

std::vector<cplx> eigenfunction(const OperatorSpec& spec, const TrigPotential& q, cplx lambda, int grid, int n,
                                double tol) {
  if (grid < 2) throw ConfigError("grid must be at least 2");
  const BcFunctionals bc = bc_functionals(spec);
  const FundamentalData fd = integrate_fundamental(q, lambda, tol);
  const std::array<cplx, 4> v1{1.0, 0.0, fd.y1, fd.dy1};
  const std::array<cplx, 4> v2{0.0, 1.0, fd.y2, fd.dy2};
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int c = 0; c < 4; ++c) {
      m(i, 0) += bc.rows[i][c] * v1[c];
      m(i, 1) += bc.rows[i][c] * v2[c];
    }
  if (n < 0) n = nearest_index(spec.family, lambda);
  const ExpPoly harmonic = leading_harmonic(spec.family, n);

  const double size = 1.0 + std::abs(std::sqrt(lambda));
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  std::vector<cplx> psi;
  if (sv(0) < 1e-8 * size) {
    // Two-dimensional eigenspace: take the member closest to the harmonic.
    const auto y1 = sample_solution(q, lambda, 1.0, 0.0, grid, tol);
    const auto y2 = sample_solution(q, lambda, 0.0, 1.0, grid, tol);
    std::vector<cplx> h(grid + 1);
    for (int i = 0; i <= grid; ++i) h[i] = harmonic(double(i) / grid);
    Eigen::Matrix2cd gram;
    Eigen::Vector2cd rhs;
    gram << inner_product(y1, y1), inner_product(y2, y1), inner_product(y1, y2), inner_product(y2, y2);
    rhs << inner_product(h, y1), inner_product(h, y2);
    const Eigen::Vector2cd coef = gram.fullPivLu().solve(rhs);
    psi.resize(grid + 1);
    for (int i = 0; i <= grid; ++i) psi[i] = coef(0) * y1[i] + coef(1) * y2[i];
  } else {
    if (sv(1) > 1e-6 * sv(0))
      throw NumericalError("boundary matrix has full rank: lambda is not an eigenvalue");
    const Eigen::Vector2cd c = svd.matrixV().col(1);
    psi = sample_solution(q, lambda, c(0), c(1), grid, tol);
  }
  const double norm = std::sqrt(std::abs(inner_product(psi, psi)));
  if (norm == 0.0) throw NumericalError("eigenfunction vanished on the grid");
  for (auto& v : psi) v /= norm;
  fix_phase(psi, harmonic);
  return psi;
}

}  // namespace slspectra
