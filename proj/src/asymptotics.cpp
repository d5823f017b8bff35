#include "slspectra/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slspectra/error.hpp"

namespace slspectra {

namespace {


void require_perturbative(const OperatorSpec& spec) {
  spec.validate();
  if (spec.family == Family::Periodic || spec.family == Family::Antiperiodic)
    throw ConfigError("asymptotic formulas are defined for T1..T4 only");
}

// Nearest continuation of sqrt(delta) to `previous`.
cplx tracked_sqrt(cplx delta, cplx previous) {
  const cplx r = std::sqrt(delta);
  return std::abs(r - previous) <= std::abs(-r - previous) ? r : -r;
}

}  // namespace

PairQuantities pair_quantities_direct(const OperatorSpec& spec, const TrigPotential& q, int n) {
  require_perturbative(spec);
  if (n < 1) throw ConfigError("pair quantities need n >= 1");
  const UnperturbedSystem s = unperturbed_system(spec, n);
  const ExpPoly& qp = q.as_exp_poly();
  const ExpPoly q_phi = qp * s.phi, q_e = qp * s.e;
  PairQuantities pq;
  pq.Q = inner(q_phi, s.e_star);
  pq.P = inner(q_e, s.e_star);
  pq.P_star = inner(q_e, s.phi_star);
  pq.Q_star = inner(q_phi, s.phi_star);
  pq.gamma = gamma(spec);
  pq.base = s.base;
  pq.n = n;
  return pq;
}

PairQuantities pair_quantities(const OperatorSpec& spec, const TrigPotential& q, int n) {
  require_perturbative(spec);
  if (n < 1) throw ConfigError("pair quantities need n >= 1");
  if (spec.family != Family::T1) return pair_quantities_direct(spec, q, n);

  const cplx b = spec.parameter;
  const cplx r = (b + 1.0) / (b - 1.0);
  const FourierFunctionals f = fourier_functionals(q, 2 * n);
  const cplx moment = weighted_fourier(q, 1, TrigKind::Cos, 0);
  PairQuantities pq;
  pq.Q = -2.0 * r * moment + 2.0 * r * f.c1 - 2.0 * b / (b - 1.0) * f.c;
  pq.P_star = 2.0 * r * moment + 2.0 * r * f.c1 - 2.0 / (b - 1.0) * f.c;
  pq.P = 0.5 * f.s;
  pq.Q_star = -8.0 * r * r * f.s2 + 8.0 * r * r * f.s1 - 8.0 * b / ((b - 1.0) * (b - 1.0)) * f.s;
  pq.gamma = gamma(spec);
  pq.base = base_eigenvalue(spec.family, n);
  pq.n = n;
  return pq;
}

int default_cutoff(const TrigPotential& q, int n) { return n + q.degree() + 8; }

SeriesEngine::SeriesEngine(const OperatorSpec& spec, const TrigPotential& q, int n, int cutoff)
    : family_(spec.family), n_(n), cutoff_(cutoff) {
  pq_ = pair_quantities_direct(spec, q, n);
  if (cutoff_ < n_) throw ConfigError("series cutoff must be at least n");
  const int size = cutoff_ + 1;
  std::vector<UnperturbedSystem> sys;
  sys.reserve(size);
  for (int m = 0; m < size; ++m) sys.push_back(unperturbed_system(spec, m));
  base_.resize(size);
  coupling_.resize(size);
  for (int m = 0; m < size; ++m) {
    base_[m] = sys[m].base;
    coupling_[m] = sys[m].coupling;
  }
  const ExpPoly& qp = q.as_exp_poly();
  auto table = [&] { return std::vector<std::vector<cplx>>(size, std::vector<cplx>(size)); };
  phi_es_ = table();
  e_es_ = table();
  phi_phis_ = table();
  e_phis_ = table();
  for (int a = 0; a < size; ++a) {
    const ExpPoly q_phi = qp * sys[a].phi, q_e = qp * sys[a].e;
    for (int b = 0; b < size; ++b) {
      phi_es_[a][b] = inner(q_phi, sys[b].e_star);
      e_es_[a][b] = inner(q_e, sys[b].e_star);
      phi_phis_[a][b] = inner(q_phi, sys[b].phi_star);
      e_phis_[a][b] = inner(q_e, sys[b].phi_star);
    }
  }
}

SeriesState SeriesEngine::evaluate(cplx lambda, int order) const {
  if (order < 0 || order > kMaxSeriesOrder) throw ConfigError("series order must be in 0..3");
  SeriesState st;
  st.order = order;
  st.cutoff = cutoff_;
  if (order == 0) return st;

  const int size = cutoff_ + 1;
  std::vector<cplx> inv(size);
  for (int m = 0; m < size; ++m) {
    if (m == n_) continue;
    const cplx d = lambda - base_[m];
    if (std::abs(d) < 1e-12 * std::max(1.0, std::abs(lambda)))
      throw NumericalError("series evaluated at an unperturbed eigenvalue of another index");
    inv[m] = 1.0 / d;
  }
  // Component of h along phi_m per unit (q Psi, e*_m) is 1/d; along e_m it is
  // gamma_m/d^2 from (q Psi, e*_m) plus 1/d from (q Psi, phi*_m).
  // Kernel applied to a target column t (one of e*_t, phi*_t):
  auto project = [&](const std::vector<cplx>& we, const std::vector<cplx>& wp,
                     const std::vector<std::vector<cplx>>& phi_t, const std::vector<std::vector<cplx>>& e_t,
                     int t) {
    cplx acc{};
    for (int m = 0; m < size; ++m) {
      if (m == n_) continue;
      const cplx a = phi_t[m][t] * inv[m] + coupling_[m] * e_t[m][t] * inv[m] * inv[m];
      const cplx b = e_t[m][t] * inv[m];
      acc += we[m] * a + wp[m] * b;
    }
    return acc;
  };

  // Chains seeded by q phi_n (coefficient of u) and q e_n (coefficient of v).
  struct Chain {
    std::vector<cplx> we, wp;
  };
  auto seed = [&](const std::vector<std::vector<cplx>>& to_e, const std::vector<std::vector<cplx>>& to_p) {
    Chain c{std::vector<cplx>(size), std::vector<cplx>(size)};
    for (int m = 0; m < size; ++m) {
      c.we[m] = to_e[n_][m];
      c.wp[m] = to_p[n_][m];
    }
    return c;
  };
  Chain cu = seed(phi_es_, phi_phis_);
  Chain cv = seed(e_es_, e_phis_);

  double previous = -1.0;
  for (int k = 1; k <= order; ++k) {
    const cplx alpha = project(cu.we, cu.wp, phi_es_, e_es_, n_);
    const cplx beta = project(cv.we, cv.wp, phi_es_, e_es_, n_);
    const cplx beta_p = project(cu.we, cu.wp, phi_phis_, e_phis_, n_);
    const cplx alpha_p = project(cv.we, cv.wp, phi_phis_, e_phis_, n_);
    st.A += alpha;
    st.B += beta;
    st.A_prime += alpha_p;
    st.B_prime += beta_p;
    st.terms.push_back({std::abs(alpha), std::abs(beta), std::abs(alpha_p), std::abs(beta_p)});
    const double largest = *std::max_element(st.terms.back().begin(), st.terms.back().end());
    if (previous >= 0.0 && largest > previous) st.monotone = false;
    previous = largest;
    if (k == order) break;
    auto advance = [&](const Chain& c) {
      Chain next{std::vector<cplx>(size), std::vector<cplx>(size)};
      for (int t = 0; t < size; ++t) {
        next.we[t] = project(c.we, c.wp, phi_es_, e_es_, t);
        next.wp[t] = project(c.we, c.wp, phi_phis_, e_phis_, t);
      }
      return next;
    };
    cu = advance(cu);
    cv = advance(cv);
  }
  return st;
}

SeriesState series(const OperatorSpec& spec, const TrigPotential& q, int n, cplx lambda, int order, int cutoff) {
  if (order < 0 || order > kMaxSeriesOrder) throw ConfigError("series order must be in 0..3");
  if (order == 0) {
    SeriesState st;
    st.cutoff = cutoff < 0 ? default_cutoff(q, n) : cutoff;
    return st;
  }
  return SeriesEngine(spec, q, n, cutoff < 0 ? default_cutoff(q, n) : cutoff).evaluate(lambda, order);
}

cplx discriminant(const PairQuantities& pq, const SeriesState& st, cplx coupling) {
  const cplx diff = pq.Q - pq.P_star + st.A - st.A_prime;
  return diff * diff + 4.0 * (pq.P + st.B) * (coupling + pq.Q_star + st.B_prime);
}

cplx discriminant(const OperatorSpec& spec, const TrigPotential& q, int n, cplx lambda, int order, int cutoff) {
  const PairQuantities pq = pair_quantities(spec, q, n);
  const SeriesState st = series(spec, q, n, lambda, order, cutoff);
  return discriminant(pq, st, pq.gamma * double(coupling_index(spec.family, n)));
}

cplx splitting_coefficient(Family f, const TrigPotential& q, int n) {
  return weighted_fourier(q, 0, TrigKind::Sin, harmonic_index(f, n));
}

AsymptoticEstimate leading_estimate(const OperatorSpec& spec, const TrigPotential& q, int n, int j) {
  require_perturbative(spec);
  if (n < 1) throw ConfigError("leading estimate needs n >= 1");
  if (j != 1 && j != 2) throw ConfigError("branch must be 1 or 2");
  AsymptoticEstimate est;
  est.n = n;
  est.j = j;
  const double np = coupling_index(spec.family, n);
  const cplx s = splitting_coefficient(spec.family, q, n);
  const cplx g = gamma(spec);
  const double sign = (j == 1) ? -1.0 : 1.0;
  const double base = base_eigenvalue(spec.family, n);
  est.lambda_leading = base + sign * (std::sqrt(2.0 * g) / 2.0) * std::sqrt(np * s);
  const double threshold = 4.0 * std::log(np + 1.0);
  est.condition_ratio = std::abs(np * s) / threshold;
  est.condition_met = est.condition_ratio > 1.0;
  const double scale = std::max(1.0, std::abs(q(0.0)) + std::abs(q(0.5)));
  est.applicable = std::abs(np * s) > 1e-12 * scale;
  if (!est.applicable)
    est.reason = "s below threshold: splitting coefficient vanishes";
  else if (!est.condition_met)
    est.reason = "leading term present; |n' s| below 4 ln(n'+1)";
  return est;
}

AsymptoticEstimate fixed_point_refine(const SeriesEngine& engine, const OperatorSpec& spec, const TrigPotential& q,
                                      int j, int order, double tol, int max_iter) {
  AsymptoticEstimate est = leading_estimate(spec, q, engine.n(), j);
  est.order = order;
  if (q.is_zero()) {
    est.lambda_refined = est.lambda_leading;
    return est;
  }
  if (!est.applicable) throw NumericalError("fixed-point refinement needs a nondegenerate leading term");
  if (!(tol > 0) || max_iter < 1) throw ConfigError("fixed-point tolerance and iteration cap must be positive");

  const PairQuantities& pq = engine.quantities();
  const cplx coupling = pq.gamma * double(coupling_index(spec.family, engine.n()));
  // Branch seed: the leading term's square root.
  cplx root = 2.0 * (est.lambda_leading - pq.base);
  cplx lambda = est.lambda_leading;
  for (int it = 0; it < max_iter; ++it) {
    const SeriesState st = engine.evaluate(lambda, order);
    const cplx sum = pq.Q + pq.P_star + st.A + st.A_prime;
    root = tracked_sqrt(discriminant(pq, st, coupling), root);
    const cplx next = pq.base + 0.5 * (sum + root);
    const double step = std::abs(next - lambda);
    est.iterations.push_back(step);
    lambda = next;
    if (step < tol) {
      est.lambda_refined = lambda;
      return est;
    }
  }
  throw NumericalError("fixed-point iteration did not converge within " + std::to_string(max_iter) +
                       " iterations");
}

AsymptoticEstimate fixed_point_refine(const OperatorSpec& spec, const TrigPotential& q, int n, int j, int order,
                                      int cutoff, double tol, int max_iter) {
  require_perturbative(spec);
  if (n < 1) throw ConfigError("fixed-point refinement needs n >= 1");
  const SeriesEngine engine(spec, q, n, cutoff < 0 ? default_cutoff(q, n) : cutoff);
  return fixed_point_refine(engine, spec, q, j, order, tol, max_iter);
}

std::array<AsymptoticEstimate, 2> refine_pair(const OperatorSpec& spec, const TrigPotential& q, int n, int order,
                                              int cutoff, double tol, int max_iter) {
  require_perturbative(spec);
  if (n < 1) throw ConfigError("fixed-point refinement needs n >= 1");
  const SeriesEngine engine(spec, q, n, cutoff < 0 ? default_cutoff(q, n) : cutoff);
  std::array<AsymptoticEstimate, 2> out{fixed_point_refine(engine, spec, q, 1, order, tol, max_iter),
                                        fixed_point_refine(engine, spec, q, 2, order, tol, max_iter)};
  if (!q.is_zero() && std::abs(*out[0].lambda_refined - *out[1].lambda_refined) < 10.0 * tol)
    throw NumericalError("merged roots: both branches converged to the same point");
  return out;
}

BranchAssignment assign_branches(std::vector<EigenRecord>& records, const std::array<AsymptoticEstimate, 2>& estimates,
                                 double tol) {
  BranchAssignment out;
  if (records.size() != 2 || records[0].multiplicity != 1 || records[1].multiplicity != 1) {
    out.merged = true;
    for (auto& r : records) r.branch = 0;
    return out;
  }
  auto target = [&](int i) { return estimates[i].lambda_refined.value_or(estimates[i].lambda_leading); };
  const double straight = std::abs(records[0].lambda - target(0)) + std::abs(records[1].lambda - target(1));
  const double crossed = std::abs(records[0].lambda - target(1)) + std::abs(records[1].lambda - target(0));
  out.margin = std::abs(straight - crossed);
  out.tie = out.margin <= tol;
  if (out.tie) {
    for (auto& r : records) r.branch = 0;
    return out;
  }
  out.branch = straight < crossed ? std::array<int, 2>{estimates[0].j, estimates[1].j}
                                  : std::array<int, 2>{estimates[1].j, estimates[0].j};
  records[0].branch = out.branch[0];
  records[1].branch = out.branch[1];
  return out;
}

MomentIndicator moment_indicator(const OperatorSpec& spec, const TrigPotential& q, int n, int order, int cutoff) {
  if (spec.family != Family::T1) throw ConfigError("moment indicator is defined for T1 only");
  if (n < 1) throw ConfigError("moment indicator needs n >= 1");
  MomentIndicator out;
  out.moment = weighted_fourier(q, 1, TrigKind::Cos, 0);
  const SeriesState st = series(spec, q, n, base_eigenvalue(spec.family, n), order, cutoff);
  out.indicator = 0.5 * weighted_fourier(q, 0, TrigKind::Sin, 2 * n) + st.B;
  return out;
}

}  // namespace slspectra
