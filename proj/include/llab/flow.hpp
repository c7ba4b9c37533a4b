#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "llab/bundle.hpp"
#include "llab/errors.hpp"

// Liouville flows on the disc bundle.  The singular field X is never
// integrated near the zero-section: trajectories through s = 0 go through the
// C^1 field rX in polar fiber coordinates plus the monotone time rescale
// int_0^tau r du = t.

namespace llab {

inline constexpr double kBoundaryGuard = 1e-6;

// ---------------------------------------------------------------------------
// Embedded Dormand-Prince 5(4) step with adaptive control.

template <std::size_t N>
using OdeField = std::function<std::array<double, N>(const std::array<double, N>&)>;

namespace detail {

template <std::size_t N>
std::array<double, N> axpy(const std::array<double, N>& y, double h,
                           const std::array<double, N>& k) {
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

template <std::size_t N>
struct DopriStep {
  std::array<double, N> y5;   // 5th-order solution
  double error;               // scaled error estimate
};

template <std::size_t N>
DopriStep<N> dopri_step(const OdeField<N>& f, const std::array<double, N>& y, double h,
                        double tol) {
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, h / 5.0, k1));
  auto mix = [&](std::initializer_list<std::pair<double, const std::array<double, N>*>> terms) {
    std::array<double, N> acc{};
    for (const auto& [c, k] : terms)
      for (std::size_t i = 0; i < N; ++i) acc[i] += c * (*k)[i];
    return axpy(y, h, acc);
  };
  const auto k3 = f(mix({{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
  const auto k4 = f(mix({{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
  const auto k5 = f(mix({{19372.0 / 6561, &k1},
                         {-25360.0 / 2187, &k2},
                         {64448.0 / 6561, &k3},
                         {-212.0 / 729, &k4}}));
  const auto k6 = f(mix({{9017.0 / 3168, &k1},
                         {-355.0 / 33, &k2},
                         {46732.0 / 5247, &k3},
                         {49.0 / 176, &k4},
                         {-5103.0 / 18656, &k5}}));
  const auto y5 = mix({{35.0 / 384, &k1},
                       {500.0 / 1113, &k3},
                       {125.0 / 192, &k4},
                       {-2187.0 / 6784, &k5},
                       {11.0 / 84, &k6}});
  const auto k7 = f(y5);
  // 4th-order embedded solution
  const auto y4 = mix({{5179.0 / 57600, &k1},
                       {7571.0 / 16695, &k3},
                       {393.0 / 640, &k4},
                       {-92097.0 / 339200, &k5},
                       {187.0 / 2100, &k6},
                       {1.0 / 40, &k7}});
  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double scale = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
    err = std::max(err, std::abs(y5[i] - y4[i]) / scale);
  }
  return {y5, err};
}

}  // namespace detail

// Integrates y' = f(y) from time 0 to `time` (either sign).  `watch` is called
// on every accepted state and may throw to abort.
template <std::size_t N>
std::array<double, N> integrate_ode(const OdeField<N>& f, std::array<double, N> y, double time,
                                    double tol,
                                    const std::function<void(const std::array<double, N>&)>&
                                        watch = nullptr) {
  if (time == 0.0) return y;
  const double dir = time > 0 ? 1.0 : -1.0;
  double t = 0.0;
  double h = dir * std::min(0.05, std::abs(time));
  int rejects_in_a_row = 0;
  while (dir * (time - t) > 1e-15) {
    if (dir * (t + h) > dir * time) h = time - t;
    const auto step = detail::dopri_step<N>(f, y, h, tol);
    if (step.error <= 1.0) {
      t += h;
      y = step.y5;
      if (watch) watch(y);
      rejects_in_a_row = 0;
    } else if (++rejects_in_a_row > 60) {
      throw EscapeError("step control failed to converge");
    }
    const double factor = 0.9 * std::pow(1.0 / std::max(step.error, 1e-10), 0.2);
    h *= std::clamp(factor, 0.2, 5.0);
    if (std::abs(h) < 1e-16) throw EscapeError("step size underflow");
  }
  return y;
}

// ---------------------------------------------------------------------------
// Closed-form radial flow and reach time (theta = 0, mu = 0).

inline BundlePoint flow_closed_form(const BundleParams& params, double t, double theta,
                                    double A, double phi) {
  if (t < 0.0)
    throw ChartDomainError("backward trajectory from the zero-section exits the bundle");
  BundlePoint p;
  p.s = (1.0 - std::exp(-t)) / params.k;
  p.theta = theta;
  p.A = A;
  p.phi = phi;
  return p;
}

// Forward time from the zero-section to p along X0: -ln(1 - k s).
inline double reach_time(const BundleParams& params, const BundlePoint& p) {
  if (p.s < 0.0 || p.s >= params.fiber_cap())
    throw ChartDomainError("point outside the open disc bundle");
  return -std::log(1.0 - params.k * p.s);
}

// ---------------------------------------------------------------------------
// Numerical flow of X_theta away from the zero-section.

struct FlowRequest {
  BundleParams params;
  LiouvilleSpec spec;
  BundlePoint start;
  double time = 0.0;
  double tol = 1e-9;
};

namespace detail {

inline OdeField<4> liouville_ode(const BundleParams& params, const LiouvilleSpec& spec) {
  return [params, spec](const std::array<double, 4>& y) {
    BundlePoint p{y[0], y[1], y[2], y[3]};
    const TangentVector x = liouville_field(params, spec, p);
    return std::array<double, 4>{x.ds, x.dtheta, x.dA, x.dphi};
  };
}

inline void check_interior(const BundleParams& params, const std::array<double, 4>& y) {
  if (y[0] >= params.fiber_cap() - kBoundaryGuard)
    throw EscapeError("trajectory reached the bundle boundary");
  if (y[0] <= 0.0) throw EscapeError("trajectory reached the zero-section");
  if (y[2] < 0.0 || y[2] >= params.base_area.value())
    throw EscapeError("trajectory exited the base chart");
}

}  // namespace detail

inline BundlePoint integrate_flow(const FlowRequest& req) {
  if (req.start.s <= 0.0)
    throw SingularLocusError("start on the zero-section; use the desingularized flow");
  detail::require_in_chart(req.params, req.start);
  const auto f = detail::liouville_ode(req.params, req.spec);
  const std::array<double, 4> y0{req.start.s, req.start.theta, req.start.A, req.start.phi};
  try {
    const auto y = integrate_ode<4>(f, y0, req.time, req.tol, [&](const auto& state) {
      detail::check_interior(req.params, state);
    });
    return BundlePoint{y[0], y[1], y[2], y[3]};
  } catch (const SingularLocusError&) {
    // a trial step crossed the zero-section before the interior check ran
    throw EscapeError("trajectory reached the zero-section");
  } catch (const ChartDomainError&) {
    throw EscapeError("trajectory left the coordinate chart");
  }
}

struct TrajectorySample {
  double t;
  BundlePoint p;
};

inline std::vector<TrajectorySample> integrate_flow_sampled(const FlowRequest& req,
                                                            int samples) {
  std::vector<TrajectorySample> out;
  out.push_back({0.0, req.start});
  FlowRequest leg = req;
  for (int i = 1; i <= samples; ++i) {
    const double t = req.time * i / samples;
    leg.start = out.back().p;
    leg.time = t - out.back().t;
    out.push_back({t, integrate_flow(leg)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Desingularized flow through the zero-section.
//
// State is (r, theta, A, phi, I) with I = int r du along the rX trajectory;
// rX is regular at r = 0 because r times the singular lambda components stays
// bounded.

namespace detail {

inline std::array<double, 5> rx_rhs(const BundleParams& params, const LiouvilleSpec& spec,
                                    const std::array<double, 5>& y) {
  const double r = y[0], theta = y[1], A = y[2], phi = y[3];
  const double k = params.k;
  const double dead = 1.0 - k * r * r;
  if (dead <= kBoundaryGuard) throw EscapeError("rX trajectory reached the bundle boundary");
  // lambda components in the polar cobasis (dr, dtheta, dA, dphi)
  const double l_r = spec.mu.is_zero() ? 0.0 : spec.mu.mu_r(theta);
  const double l_theta = dead / (kTwoPi * k) + spec.mu.mu_theta(r, theta);
  const double l_A = spec.theta.c_A(A, phi);
  const double l_phi = -dead * A / kTwoPi + spec.theta.c_phi(A, phi);
  std::array<double, 5> d{};
  const double r_xphi = -kTwoPi * r * l_A / dead;
  d[0] = llab::kTwoPi * l_theta / 2.0;        // r * X^r = pi * l_theta
  d[1] = k * A * r_xphi - (kTwoPi / 2.0) * l_r;
  d[2] = kTwoPi * r * (l_phi + k * A * l_theta) / dead;
  d[3] = r_xphi;
  d[4] = r;
  return d;
}

}  // namespace detail

struct RescaleProblem {
  double theta = 0.0;
  double A = 0.0;
  double phi = 0.0;
  double target_time = 0.0;  // t with int_0^tau r du = t
};

struct ZeroSectionFlowResult {
  BundlePoint point;   // Phi_X^t(0, theta, A, phi)
  double tau;          // rescaled time along rX
};

// Flows the desingularized field rX from (r=0, theta, A, phi) until the
// accumulated integral of r reaches target_time; the final rX-time is the
// rescaled time tau.  Root located by bisection on the monotone integral.
inline ZeroSectionFlowResult zero_section_flow(const BundleParams& params,
                                               const LiouvilleSpec& spec,
                                               const RescaleProblem& prob,
                                               double tol = 1e-10) {
  if (prob.target_time < 0.0)
    throw PreconditionError("rescaled time needs t >= 0", "t >= 0");
  std::array<double, 5> y{0.0, prob.theta, prob.A, prob.phi, 0.0};
  if (prob.target_time == 0.0) return {BundlePoint{0.0, prob.theta, prob.A, prob.phi}, 0.0};
  const auto f = [&](const std::array<double, 5>& state) {
    return detail::rx_rhs(params, spec, state);
  };
  double u = 0.0;
  double h = 1e-3;
  const double t_goal = prob.target_time;
  // march until the integral brackets t_goal
  while (y[4] < t_goal) {
    const auto step = detail::dopri_step<5>(f, y, h, tol);
    if (step.error <= 1.0) {
      if (step.y5[4] >= t_goal) {
        // bisect the step length to land on the integral level set
        double lo = 0.0, hi = h;
        std::array<double, 5> y_hit = step.y5;
        while (hi - lo > tol) {
          const double mid = 0.5 * (lo + hi);
          const auto trial = detail::dopri_step<5>(f, y, mid, tol);
          if (trial.y5[4] >= t_goal) {
            hi = mid;
            y_hit = trial.y5;
          } else {
            lo = mid;
          }
        }
        u += hi;
        y = y_hit;
        break;
      }
      u += h;
      y = step.y5;
      if (y[2] < 0.0 || y[2] >= params.base_area.value())
        throw EscapeError("rX trajectory exited the base chart");
    }
    const double factor = 0.9 * std::pow(1.0 / std::max(step.error, 1e-10), 0.2);
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < 1e-15) throw EscapeError("rX step size underflow");
  }
  BundlePoint p{y[0] * y[0], y[1], y[2], y[3]};
  return {p, u};
}

inline double rescaled_time(const BundleParams& params, const LiouvilleSpec& spec,
                            const RescaleProblem& prob, double tol = 1e-10) {
  return zero_section_flow(params, spec, prob, tol).tau;
}

// Conjugation Psi(p) = Phi_X^{reach_time(p)}(0, theta, base): pulls the
// perturbed Liouville form back to the unperturbed one; identity when mu = 0.
inline BundlePoint conjugation_map(const BundleParams& params, const LiouvilleSpec& spec,
                                   const BundlePoint& p, double tol = 1e-10) {
  if (p.s == 0.0) return p;
  const double t = reach_time(params, p);
  RescaleProblem prob{p.theta, p.A, p.phi, t};
  return zero_section_flow(params, spec, prob, tol).point;
}

// ---------------------------------------------------------------------------
// Inflation embedding: extend a germ map defined on {s < s0} by flow
// conjugation  Phi = Phi_{X_beta}^tau o germ o Phi_{X_theta}^{-tau}.

struct InflationProblem {
  BundleParams source_params;
  LiouvilleSpec source_spec;
  BundleParams target_params;
  LiouvilleSpec target_spec;  // beta
  std::function<BundlePoint(const BundlePoint&)> germ;
  double s0 = 0.0;  // germ domain {s < s0}
  double tol = 1e-10;
};

// Smallest time flowing x backward below fill * s0 (the radial dynamics is
// theta-independent, so this is exact).
inline double inflation_min_time(const InflationProblem& prob, const BundlePoint& x,
                                 double fill = 0.5) {
  const int k = prob.source_params.k;
  const double s_back = fill * prob.s0;
  if (x.s <= s_back) return 0.0;
  return std::log((1.0 - k * s_back) / (1.0 - k * x.s));
}

inline BundlePoint inflation_embedding(const InflationProblem& prob, const BundlePoint& x,
                                       std::optional<double> tau_choice = std::nullopt) {
  if (x.s < prob.s0 && !tau_choice) return prob.germ(x);
  // admissible window: below it the backward leg misses the germ domain,
  // at reach_time it hits the singular zero-section
  const double tau = tau_choice ? *tau_choice
                                : 0.5 * (inflation_min_time(prob, x) +
                                         reach_time(prob.source_params, x));
  if (tau < inflation_min_time(prob, x))
    throw ChartDomainError("intermediate time does not reach the germ domain");
  if (tau == 0.0) return prob.germ(x);
  FlowRequest back{prob.source_params, prob.source_spec, x, -tau, prob.tol};
  const BundlePoint y = integrate_flow(back);
  if (y.s >= prob.s0) throw ChartDomainError("backward trajectory missed the germ domain");
  const BundlePoint z = prob.germ(y);
  FlowRequest fwd{prob.target_params, prob.target_spec, z, tau, prob.tol};
  return integrate_flow(fwd);
}

// ---------------------------------------------------------------------------
// Finite-difference pullback verifier for maps of R^4.

using Map4 = std::function<std::array<double, 4>(const std::array<double, 4>&)>;
using Form4 = std::function<std::array<std::array<double, 4>, 4>(const std::array<double, 4>&)>;

// Max over coordinate-basis pairs of |(map^* target_form - reference_form)|
// at p, Jacobian by central differences with the given step.
inline double pullback_residual(const Map4& map, const std::array<double, 4>& p,
                                const Form4& target_form, const Form4& reference_form,
                                double step) {
  std::array<std::array<double, 4>, 4> jac;  // jac[i] = d(map)/dx_i
  for (int i = 0; i < 4; ++i) {
    auto hi = p, lo = p;
    hi[i] += step;
    lo[i] -= step;
    const auto fhi = map(hi), flo = map(lo);
    for (int c = 0; c < 4; ++c) jac[i][c] = (fhi[c] - flo[c]) / (2 * step);
  }
  const auto wt = target_form(map(p));
  const auto wr = reference_form(p);
  double residual = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      double pulled = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) pulled += wt[a][b] * jac[i][a] * jac[j][b];
      residual = std::max(residual, std::abs(pulled - wr[i][j]));
    }
  }
  return residual;
}

inline Form4 omega0_form(const BundleParams& params) {
  return [params](const std::array<double, 4>& y) {
    return omega0_matrix(params, BundlePoint{y[0], y[1], y[2], y[3]});
  };
}

inline Form4 scaled_form(const Form4& base, double factor) {
  return [base, factor](const std::array<double, 4>& y) {
    auto w = base(y);
    for (auto& row : w)
      for (auto& v : row) v *= factor;
    return w;
  };
}

inline Form4 standard_action_angle_form() {
  return [](const std::array<double, 4>&) {
    std::array<std::array<double, 4>, 4> w{};
    w[0][1] = 1.0 / kTwoPi;
    w[1][0] = -w[0][1];
    w[2][3] = 1.0 / kTwoPi;
    w[3][2] = -w[2][3];
    return w;
  };
}

}  // namespace llab
