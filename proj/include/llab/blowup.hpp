#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "llab/errors.hpp"
#include "llab/flow.hpp"
#include "llab/rational.hpp"

// One-point blow-up of C^2 at the origin: transition map g, the blown-up
// form omega_lambda in the two standard affine charts, homology arithmetic
// on dL - mE, and the bubbling-decomposition enumerator.
//
// Capacities are in units of pi, so the ball of capacity lam is
// {|z|^2 <= lam} and g(z) = sqrt(|z|^2 - lam) z/|z|.

namespace llab {

using Complex = std::complex<double>;

struct HomologyClass {
  std::int64_t d = 0;  // coefficient of L
  std::int64_t m = 0;  // class is dL - mE

  friend bool operator==(const HomologyClass& a, const HomologyClass& b) {
    return a.d == b.d && a.m == b.m;
  }
  friend bool operator<(const HomologyClass& a, const HomologyClass& b) {
    return a.d != b.d ? a.d < b.d : a.m < b.m;
  }

  // lam is the blow-up capacity; E = (0,-1) has area lam.
  Rational area(const Rational& lam) const {
    return Rational(d) - Rational(m) * lam;
  }

  std::string str() const {
    return std::to_string(d) + "L" + (m >= 0 ? "-" : "+") + std::to_string(m >= 0 ? m : -m) +
           "E";
  }
};

// (d-1)(d-2)/2 - m(m-1)/2; an embedded sphere representative needs >= 0.
inline Rational adjunction_virtual_genus(const HomologyClass& c) {
  return Rational((c.d - 1) * (c.d - 2), 2) - Rational(c.m * (c.m - 1), 2);
}

inline std::int64_t intersection_number(const HomologyClass& a, const HomologyClass& b) {
  return a.d * b.d - a.m * b.m;
}

// ---------------------------------------------------------------------------
// Transition map of the blow-up.

inline std::array<Complex, 2> blowup_transition(const std::array<Complex, 2>& z,
                                                const Rational& lam) {
  const double n2 = std::norm(z[0]) + std::norm(z[1]);
  if (!(n2 > lam.value()))
    throw ChartDomainError("point inside the closed ball of capacity lam");
  const double scale = std::sqrt((n2 - lam.value()) / n2);
  return {scale * z[0], scale * z[1]};
}

// ---------------------------------------------------------------------------
// Blow-up charts.  Chart 1: (z1, t) with z2 = z1 t; chart 2: (z2, u) with
// z1 = z2 u.  Overlap transition is the reciprocal slope u = 1/t.

struct BlowupChartPoint {
  int chart = 1;
  std::array<double, 4> q{};  // (Re zi, Im zi, Re slope, Im slope)
};

inline BlowupChartPoint to_chart(const std::array<Complex, 2>& z) {
  if (z[0] == Complex{} && z[1] == Complex{})
    throw ChartDomainError("origin has no canonical chart point");
  if (std::abs(z[1]) <= std::abs(z[0])) {
    const Complex t = z[1] / z[0];
    return {1, {z[0].real(), z[0].imag(), t.real(), t.imag()}};
  }
  const Complex u = z[0] / z[1];
  return {2, {z[1].real(), z[1].imag(), u.real(), u.imag()}};
}

inline std::array<Complex, 2> chart_to_c2(const BlowupChartPoint& p) {
  const Complex zi{p.q[0], p.q[1]};
  const Complex slope{p.q[2], p.q[3]};
  if (p.chart == 1) return {zi, zi * slope};
  return {zi * slope, zi};
}

inline BlowupChartPoint chart_transition(const BlowupChartPoint& p) {
  const Complex zi{p.q[0], p.q[1]};
  const Complex slope{p.q[2], p.q[3]};
  if (slope == Complex{}) throw ChartDomainError("slope 0 lies outside the chart overlap");
  const Complex other = zi * slope;
  const Complex inv = 1.0 / slope;
  return {p.chart == 1 ? 2 : 1, {other.real(), other.imag(), inv.real(), inv.imag()}};
}

// omega_lambda = pi1^* omega_st + lam * pi2^* omega_FS in the given chart,
// with omega_FS the affine Fubini-Study form of total area 1.
inline Form4 omega_lambda_form(const Rational& lam, int chart) {
  (void)chart;  // both charts have the same coordinate expression
  return [lam](const std::array<double, 4>& q) {
    const double a = q[0], b = q[1], c = q[2], d = q[3];
    // pi1: (zi, t) -> (zi, zi t) up to factor ordering; other coordinate is
    // w = zi * t with Re w = ac - bd, Im w = ad + bc.
    // Rows of J are gradients of (a, b, Re w, Im w).
    const std::array<std::array<double, 4>, 4> jac{{
        {1, 0, 0, 0},
        {0, 1, 0, 0},
        {c, -d, a, -b},   // d(Re w)
        {d, c, b, a},     // d(Im w)
    }};
    std::array<std::array<double, 4>, 4> w{};
    // pullback of dx1^dy1 + dx2^dy2 through jac
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double v = jac[0][i] * jac[1][j] - jac[0][j] * jac[1][i] + jac[2][i] * jac[3][j] -
                   jac[2][j] * jac[3][i];
        w[i][j] = v;
      }
    }
    const double fs = lam.value() / ((1 + c * c + d * d) * (1 + c * c + d * d));
    w[2][3] += fs;
    w[3][2] -= fs;
    return w;
  };
}

inline Form4 standard_c2_form() {
  return [](const std::array<double, 4>&) {
    std::array<std::array<double, 4>, 4> w{};
    w[0][1] = 1.0;
    w[1][0] = -1.0;
    w[2][3] = 1.0;
    w[3][2] = -1.0;
    return w;
  };
}

struct ShellResidualReport {
  double max_residual = 0.0;
  int evaluated = 0;
  int skipped = 0;  // stencil would leave the shell
};

// Finite-difference residual of Phi^* omega_lambda - omega_st over sample
// points of the shell B(lam+delta)\B(lam), Phi = pi1^{-1} o g.
inline ShellResidualReport omega_lambda_residual(const Rational& lam,
                                                 const std::vector<std::array<Complex, 2>>&
                                                     samples,
                                                 double step) {
  ShellResidualReport report;
  const double lamv = lam.value();
  for (const auto& z : samples) {
    const double n2 = std::norm(z[0]) + std::norm(z[1]);
    const double margin = 8 * step * std::sqrt(n2) + 8 * step * step;
    if (n2 - lamv <= margin) {
      ++report.skipped;
      continue;
    }
    const int chart = to_chart(blowup_transition(z, lam)).chart;
    Map4 map = [&lam, chart](const std::array<double, 4>& y) {
      const std::array<Complex, 2> zz{Complex{y[0], y[1]}, Complex{y[2], y[3]}};
      const auto g = blowup_transition(zz, lam);
      const Complex zi = chart == 1 ? g[0] : g[1];
      const Complex slope = chart == 1 ? g[1] / g[0] : g[0] / g[1];
      return std::array<double, 4>{zi.real(), zi.imag(), slope.real(), slope.imag()};
    };
    const std::array<double, 4> p{z[0].real(), z[0].imag(), z[1].real(), z[1].imag()};
    const double res = pullback_residual(map, p, omega_lambda_form(lam, chart),
                                         standard_c2_form(), step);
    report.max_residual = std::max(report.max_residual, res);
    ++report.evaluated;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Bubbling decompositions of L - E.

struct BubbleCandidate {
  HomologyClass principal;          // L - kE part
  std::vector<std::int64_t> e_mults;  // multiples of E with sum k - 1
  Rational principal_area{0};
  Rational virtual_genus{0};
  bool area_positive = false;
  bool adjunction_ok = false;

  bool survives() const { return area_positive && adjunction_ok; }
  std::string killed_by() const {
    if (survives()) return "";
    return !adjunction_ok ? "adjunction" : "area";
  }
};

struct BubbleReport {
  Rational lam{0};
  Rational scale{1};
  std::vector<BubbleCandidate> candidates;
  int survivors = 0;
  bool trivial_admissible = true;  // the no-bubbling configuration
};

namespace detail {

inline void partitions(std::int64_t n, std::int64_t max_part,
                       std::vector<std::int64_t>& current,
                       std::vector<std::vector<std::int64_t>>& out) {
  if (n == 0) {
    out.push_back(current);
    return;
  }
  for (std::int64_t p = std::min(n, max_part); p >= 1; --p) {
    current.push_back(p);
    partitions(n - p, p, current, out);
    current.pop_back();
  }
}

}  // namespace detail

// Enumerates the nontrivial decompositions L - E = (L - kE) + sum k_i E,
// k >= 2, sum k_i = k - 1, filtered by area positivity and the adjunction
// bound.  Survivors are expected empty: every L - kE has virtual genus
// -k(k-1)/2 < 0.
inline BubbleReport enumerate_bubble_decompositions(const Rational& lam, const Rational& scale,
                                                    std::int64_t k_cap = 12) {
  if (!(scale > Rational(0) && scale <= Rational(1)))
    throw PreconditionError("scale must lie in (0, 1]", "0 < t <= 1");
  BubbleReport report;
  report.lam = lam;
  report.scale = scale;
  const Rational cap = lam * scale;  // current ball capacity
  for (std::int64_t k = 2; k <= k_cap; ++k) {
    std::vector<std::vector<std::int64_t>> parts;
    std::vector<std::int64_t> current;
    detail::partitions(k - 1, k - 1, current, parts);
    for (const auto& e_mults : parts) {
      BubbleCandidate cand;
      cand.principal = HomologyClass{1, k};
      cand.e_mults = e_mults;
      cand.principal_area = cand.principal.area(cap);
      cand.virtual_genus = adjunction_virtual_genus(cand.principal);
      cand.area_positive = cand.principal_area > Rational(0);
      cand.adjunction_ok = cand.virtual_genus >= Rational(0);
      if (cand.survives()) ++report.survivors;
      report.candidates.push_back(cand);
    }
  }
  return report;
}

// General mode: arbitrary decompositions of L - E into >= 2 classes d_iL - m_iE
// with d_i >= 0, each of positive area, classes other than E-multiples passing
// the adjunction filter.  Gives the same survivors as the restricted family.
inline std::vector<std::vector<HomologyClass>> enumerate_general_decompositions(
    const Rational& lam, const Rational& scale, std::int64_t m_cap = 12) {
  const Rational cap = lam * scale;
  std::vector<std::vector<HomologyClass>> survivors;
  // exactly one part carries d = 1; E-parts are (0, -k_i)
  for (std::int64_t m = -m_cap; m <= m_cap; ++m) {
    const HomologyClass principal{1, m};
    const std::int64_t rest = m - 1;  // total E-multiplicity to return
    if (rest < 1) continue;           // nontrivial decompositions only
    if (!(principal.area(cap) > Rational(0))) continue;
    if (adjunction_virtual_genus(principal) < Rational(0)) continue;
    std::vector<std::vector<std::int64_t>> parts;
    std::vector<std::int64_t> current;
    detail::partitions(rest, rest, current, parts);
    for (const auto& e_mults : parts) {
      std::vector<HomologyClass> decomposition{principal};
      bool ok = true;
      for (auto kk : e_mults) {
        const HomologyClass e_part{0, -kk};
        if (!(e_part.area(cap) > Rational(0))) ok = false;
        decomposition.push_back(e_part);
      }
      if (ok) survivors.push_back(decomposition);
    }
  }
  return survivors;
}

// ---------------------------------------------------------------------------
// Two-ball packing obstruction of the projective plane.

enum class PackingVerdict { Admissible, Obstructed };

inline PackingVerdict packing_obstruction(const Rational& r1_sq, const Rational& r2_sq) {
  if (!(r1_sq >= Rational(0) && r2_sq >= Rational(0)))
    throw PreconditionError("squared radii must be nonnegative", "r^2 >= 0");
  return r1_sq + r2_sq <= Rational(1) ? PackingVerdict::Admissible
                                      : PackingVerdict::Obstructed;
}

}  // namespace llab
