#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "llab/errors.hpp"
#include "llab/rational.hpp"

// Coordinate model of the symplectic disc bundle over a disc or sphere base.
//
// Coordinates are (s, theta, A, phi): s = r^2 is the fiber area coordinate,
// A the base area coordinate.  All areas are measured in units of pi, so the
// fiber disc has s in [0, 1/k) and a disc base of "area a" means a*pi.
//
// Over a contractible chart the transgression form is trivialized as
//   alpha = dtheta/2pi - (k/2pi) A dphi,   d(alpha) = -k tau,
// with base form tau = (1/2pi) dA ^ dphi, giving
//   omega0 = (1-ks) tau + ds ^ alpha.

namespace llab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class BaseKind { Disc, Sphere };

struct BundleParams {
  int k = 1;
  BaseKind base = BaseKind::Disc;
  Rational base_area = Rational(1);  // disc chart area; sphere has two 1/2 charts

  BundleParams() = default;
  BundleParams(int k_, BaseKind base_, Rational area) : k(k_), base(base_), base_area(area) {
    if (k < 1) throw PreconditionError("bundle degree must be positive", "k >= 1");
    if (!(area > Rational(0))) throw PreconditionError("base area must be positive", "a > 0");
  }

  double fiber_cap() const { return 1.0 / k; }
};

struct BundlePoint {
  double s = 0.0;
  double theta = 0.0;
  double A = 0.0;
  double phi = 0.0;
};

struct TangentVector {
  double ds = 0.0;
  double dtheta = 0.0;
  double dA = 0.0;
  double dphi = 0.0;

  double operator[](int i) const {
    switch (i) {
      case 0: return ds;
      case 1: return dtheta;
      case 2: return dA;
      default: return dphi;
    }
  }
};

inline TangentVector basis_vector(int i) {
  TangentVector v;
  switch (i) {
    case 0: v.ds = 1.0; break;
    case 1: v.dtheta = 1.0; break;
    case 2: v.dA = 1.0; break;
    default: v.dphi = 1.0; break;
  }
  return v;
}

// Closed 1-form on the base, represented through a potential
//   g(A, phi) = u*A + v*A*cos(phi) + w*A*sin(phi),
// so theta_form = dg is closed by construction and vanishes when u=v=w=0.
struct ThetaForm {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  bool is_zero() const { return u == 0.0 && v == 0.0 && w == 0.0; }

  double c_A(double /*A*/, double phi) const {
    return u + v * std::cos(phi) + w * std::sin(phi);
  }
  double c_phi(double A, double phi) const {
    return A * (-v * std::sin(phi) + w * std::cos(phi));
  }

  // Finite-difference closedness residual d(c_phi)/dA - d(c_A)/dphi at (A, phi).
  double closedness_residual(double A, double phi, double h = 1e-5) const {
    const double dcphi_dA = (c_phi(A + h, phi) - c_phi(A - h, phi)) / (2 * h);
    const double dcA_dphi = (c_A(A, phi + h) - c_A(A, phi - h)) / (2 * h);
    return dcphi_dA - dcA_dphi;
  }
};

// Closed perturbation form mu = d(cx*x + cy*y) with (x, y) = (r cos, r sin)
// cartesian fiber coordinates.  Bounded near the zero-section in the fiber
// polar frame: mu = (cx cos + cy sin) dr + r (-cx sin + cy cos) dtheta.
struct FiberPerturbation {
  double cx = 0.0;
  double cy = 0.0;

  bool is_zero() const { return cx == 0.0 && cy == 0.0; }

  double mu_r(double theta) const { return cx * std::cos(theta) + cy * std::sin(theta); }
  double mu_theta(double r, double theta) const {
    return r * (-cx * std::sin(theta) + cy * std::cos(theta));
  }

  // Supremum of the polar-frame coefficients over a (theta, s->0) grid.
  double bound_near_zero_section(int n = 64) const {
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      const double th = kTwoPi * i / n;
      for (double r : {1e-2, 1e-4, 1e-6}) {
        sup = std::max(sup, std::abs(mu_r(th)));
        sup = std::max(sup, std::abs(mu_theta(r, th)));
      }
    }
    return sup;
  }
};

struct LiouvilleSpec {
  ThetaForm theta;
  FiberPerturbation mu;
};

namespace detail {

inline void require_in_chart(const BundleParams& params, const BundlePoint& p) {
  if (p.s < 0.0 || p.s >= params.fiber_cap())
    throw ChartDomainError("fiber coordinate outside [0, 1/k)");
  if (p.A < 0.0 || p.A >= params.base_area.value())
    throw ChartDomainError("base coordinate outside [0, a)");
}

}  // namespace detail

// omega0 as a 4x4 antisymmetric matrix on the (s, theta, A, phi) basis.
inline std::array<std::array<double, 4>, 4> omega0_matrix(const BundleParams& params,
                                                          const BundlePoint& p) {
  detail::require_in_chart(params, p);
  std::array<std::array<double, 4>, 4> w{};
  const double k = params.k;
  w[0][1] = 1.0 / kTwoPi;           // ds ^ dtheta
  w[1][0] = -w[0][1];
  w[0][3] = -k * p.A / kTwoPi;      // ds ^ dphi
  w[3][0] = -w[0][3];
  w[2][3] = (1.0 - k * p.s) / kTwoPi;  // dA ^ dphi
  w[3][2] = -w[2][3];
  return w;
}

inline double omega0_at(const BundleParams& params, const BundlePoint& p,
                        const TangentVector& u, const TangentVector& v) {
  const auto w = omega0_matrix(params, p);
  double val = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) val += w[i][j] * u[i] * v[j];
  return val;
}

// Components of lambda = lambda0 + pi^*theta + mu in the (ds,dtheta,dA,dphi)
// cobasis.  Singular on the zero-section (the mu-part carries a 1/sqrt(s)).
inline std::array<double, 4> lambda_components(const BundleParams& params,
                                               const LiouvilleSpec& spec,
                                               const BundlePoint& p) {
  if (p.s <= 0.0) throw SingularLocusError("lambda undefined on the zero-section");
  detail::require_in_chart(params, p);
  const double k = params.k;
  const double r = std::sqrt(p.s);
  std::array<double, 4> l{};
  l[0] = spec.mu.is_zero() ? 0.0 : spec.mu.mu_r(p.theta) / (2.0 * r);
  l[1] = (1.0 - k * p.s) / (kTwoPi * k) + spec.mu.mu_theta(r, p.theta);
  l[2] = spec.theta.c_A(p.A, p.phi);
  l[3] = -(1.0 - k * p.s) * p.A / kTwoPi + spec.theta.c_phi(p.A, p.phi);
  return l;
}

inline double lambda_at(const BundleParams& params, const LiouvilleSpec& spec,
                        const BundlePoint& p, const TangentVector& v) {
  const auto l = lambda_components(params, spec, p);
  return l[0] * v.ds + l[1] * v.dtheta + l[2] * v.dA + l[3] * v.dphi;
}

// Liouville vector field dual to lambda: omega0(X, .) = lambda, solved in
// closed form from the block structure of omega0.
inline TangentVector liouville_field(const BundleParams& params, const LiouvilleSpec& spec,
                                     const BundlePoint& p) {
  const auto l = lambda_components(params, spec, p);
  const double k = params.k;
  const double dead = 1.0 - k * p.s;
  TangentVector x;
  x.ds = kTwoPi * l[1];
  x.dphi = -kTwoPi * l[2] / dead;
  x.dtheta = k * p.A * x.dphi - kTwoPi * l[0];
  x.dA = kTwoPi * (l[3] + k * p.A * l[1]) / dead;
  return x;
}

// Action-angle chart of the restriction of the bundle over a disc of area a:
// (s, theta, A, phi) -> (A1, phi1, A2, phi2) = (A(1-ks), phi, s, theta),
// an open ellipsoid E(a, 1/k) in the coordinates where the standard form is
// (1/2pi)(dA1^dphi1 + dA2^dphi2) and the ellipsoid is {A1/a + k*A2 < 1}.
struct EllipsoidChart {
  BundleParams params;

  explicit EllipsoidChart(const BundleParams& params_) : params(params_) {
    if (params.base != BaseKind::Disc && params.base != BaseKind::Sphere)
      throw PreconditionError("chart needs a disc chart", "base = disc");
  }

  double axis_base() const { return params.base_area.value(); }
  double axis_fiber() const { return params.fiber_cap(); }

  std::array<double, 4> forward(const BundlePoint& p) const {
    detail::require_in_chart(params, p);
    return {p.A * (1.0 - params.k * p.s), p.phi, p.s, p.theta};
  }

  BundlePoint inverse(const std::array<double, 4>& q) const {
    BundlePoint p;
    p.s = q[2];
    p.theta = q[3];
    p.phi = q[1];
    const double dead = 1.0 - params.k * q[2];
    if (dead <= 0.0) throw ChartDomainError("fiber action outside ellipsoid");
    p.A = q[0] / dead;
    detail::require_in_chart(params, p);
    return p;
  }

  // Ellipsoid membership of an action-angle point: A1/a + k*A2 < 1.
  bool image_contains(const std::array<double, 4>& q) const {
    return q[0] >= 0.0 && q[2] >= 0.0 && q[0] / axis_base() + params.k * q[2] < 1.0;
  }
};

// Standard form in action-angle coordinates (A1, phi1, A2, phi2).
inline double standard_form_at(const std::array<double, 4>& /*q*/,
                               const std::array<double, 4>& u,
                               const std::array<double, 4>& v) {
  return (u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2]) / kTwoPi;
}

struct ConvexityWitness {
  BundlePoint point;
  double value = 0.0;
};

struct ConvexityResult {
  bool convex = true;
  std::optional<ConvexityWitness> witness;
};

// Checks that the Liouville field exits through every sampled boundary point
// of {F <= 0}: dF(X) > 0 with dF by central differences.
inline ConvexityResult convexity_check(const BundleParams& params, const LiouvilleSpec& spec,
                                       const std::function<double(const BundlePoint&)>& level,
                                       const std::vector<BundlePoint>& boundary_samples,
                                       double fd_step = 1e-6) {
  ConvexityResult result;
  for (const auto& p : boundary_samples) {
    detail::require_in_chart(params, p);  // ChartDomainError on a bad sampler
    const TangentVector x = liouville_field(params, spec, p);
    TangentVector grad;
    auto diff = [&](auto bump) {
      BundlePoint hi = p, lo = p;
      bump(hi, fd_step);
      bump(lo, -fd_step);
      return (level(hi) - level(lo)) / (2 * fd_step);
    };
    grad.ds = diff([](BundlePoint& q, double h) { q.s += h; });
    grad.dtheta = diff([](BundlePoint& q, double h) { q.theta += h; });
    grad.dA = diff([](BundlePoint& q, double h) { q.A += h; });
    grad.dphi = diff([](BundlePoint& q, double h) { q.phi += h; });
    const double outward = grad.ds * x.ds + grad.dtheta * x.dtheta + grad.dA * x.dA +
                           grad.dphi * x.dphi;
    if (!(outward > 0.0)) {
      result.convex = false;
      result.witness = ConvexityWitness{p, outward};
      return result;
    }
  }
  return result;
}

// Straight ellipsoid {A1/(a c1) + A2/(c2/k) <= 1} inside E(a, 1/k), expressed
// in bundle coordinates through the chart.  c1, c2 in (0,1).
struct StraightEllipsoid {
  EllipsoidChart chart;
  double c1;
  double c2;

  StraightEllipsoid(const EllipsoidChart& chart_, double c1_, double c2_)
      : chart(chart_), c1(c1_), c2(c2_) {
    if (!(c1 > 0.0 && c1 < 1.0 && c2 > 0.0 && c2 < 1.0))
      throw PreconditionError("straight ellipsoid axes must shrink", "0 < c1, c2 < 1");
  }

  double level(const BundlePoint& p) const {
    const auto q = chart.forward(p);
    return q[0] / (chart.axis_base() * c1) + q[2] / (c2 * chart.axis_fiber()) - 1.0;
  }

  // Boundary points away from the singular loci A1 = 0 and A2 = 0.
  std::vector<BundlePoint> boundary_samples(int n_radial, int n_angle) const {
    std::vector<BundlePoint> out;
    for (int i = 1; i < n_radial; ++i) {
      const double t = static_cast<double>(i) / n_radial;  // share of the fiber axis
      const double a2 = t * c2 * chart.axis_fiber() * 0.999;
      const double a1 = (1.0 - a2 / (c2 * chart.axis_fiber())) * chart.axis_base() * c1;
      for (int j = 0; j < n_angle; ++j) {
        const double ang = kTwoPi * j / n_angle;
        out.push_back(chart.inverse({a1, ang, a2, std::fmod(ang * 1.7, kTwoPi)}));
      }
    }
    return out;
  }
};

// Karshon's maximal packing model: SDB(S^2, 1), sphere of area 1 covered by
// two hemispherical discs of area 1/2, each carrying an ellipsoid chart
// E(1/2, 1) with an inscribed ball of capacity 1/2.  The two closed balls
// meet along the fiber circle over the equator on the zero-section.
struct KarshonModel {
  BundleParams hemisphere1;
  BundleParams hemisphere2;
  EllipsoidChart chart1;
  EllipsoidChart chart2;
  Rational ball_capacity1;
  Rational ball_capacity2;

  KarshonModel()
      : hemisphere1(1, BaseKind::Sphere, Rational(1, 2)),
        hemisphere2(1, BaseKind::Sphere, Rational(1, 2)),
        chart1(hemisphere1),
        chart2(hemisphere2),
        ball_capacity1(1, 2),
        ball_capacity2(1, 2) {}

  Rational capacity_sum() const { return ball_capacity1 + ball_capacity2; }

  // Ball of capacity c = 1/2 in action-angle coordinates: A1 + A2 <= c.
  static double ball_level(const std::array<double, 4>& q, double c) {
    return q[0] + q[2] - c;
  }

  // Chart-2 base coordinate of a point with chart-1 base coordinate A
  // (sphere area 1, measured from the opposite pole).
  static double other_chart_area(double A) { return 1.0 - A; }

  // A point of ball 1 seen from chart 2 lies in the closed ball 2 only on the
  // shared circle {s = 0, A = 1/2}; returns the worst interior overlap margin
  // (positive = disjoint) over a sampling grid.
  double interior_disjointness_margin(int n = 24) const {
    const double c = ball_capacity1.value();
    double margin = 1e9;
    for (int i = 1; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double a1 = c * i / n * (1.0 - 1e-9);
        const double a2 = (c - a1) * j / n * (1.0 - 1e-9);
        if (a1 + a2 >= c) continue;  // interior of ball 1 only
        const BundlePoint p = chart1.inverse({a1, 0.0, a2, 0.0});
        // chart-2 membership would need base coordinate < 1/2
        margin = std::min(margin, other_chart_area(p.A) - 0.5);
      }
    }
    return margin;
  }

  // Max distance of boundary-contact points from the shared circle C.
  double boundary_circle_deviation(int n = 64) const {
    double worst = 0.0;
    const double c = ball_capacity1.value();
    for (int i = 0; i <= n; ++i) {
      // boundary of ball 1 with chart-2 coordinate also on its closed ball:
      // forces A -> 1/2, s -> 0
      const double a1 = c * (1.0 - 1e-12);
      const double a2 = c - a1;
      const BundlePoint p = chart1.inverse({a1, kTwoPi * i / n, a2, 0.0});
      worst = std::max(worst, std::abs(p.A - 0.5));
      worst = std::max(worst, std::abs(p.s));
    }
    return worst;
  }
};

inline KarshonModel karshon_model() { return KarshonModel(); }

}  // namespace llab
