#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "llab/errors.hpp"
#include "llab/rational.hpp"

// Exact catalog of closed Reeb orbits on the boundary of an irrational
// ellipsoid E(a_+, a_-): the two axis circles gamma_+/gamma_- and their
// covers, with actions and Conley-Zehnder indices.

namespace llab {

enum class Axis { Minus, Plus };

inline const char* axis_name(Axis a) { return a == Axis::Minus ? "minus" : "plus"; }
inline Axis axis_other(Axis a) { return a == Axis::Minus ? Axis::Plus : Axis::Minus; }

struct EllipsoidSpec {
  Rational a_plus;
  Rational a_minus;

  EllipsoidSpec(Rational plus, Rational minus) : a_plus(plus), a_minus(minus) {
    if (!(a_minus > Rational(0)))
      throw PreconditionError("axis areas must be positive", "0 < a_-");
    if (!(a_minus <= a_plus))
      throw PreconditionError("axes must be ordered", "a_- <= a_+");
  }

  Rational axis(Axis a) const { return a == Axis::Minus ? a_minus : a_plus; }

  std::string str() const { return a_plus.str() + "," + a_minus.str(); }
};

struct ReebOrbit {
  Axis axis;
  int mult;
  Rational action;
  int cz;
};

inline Rational orbit_action(const EllipsoidSpec& spec, Axis axis, int mult) {
  if (mult < 1) throw PreconditionError("multiplicity must be positive", "mult >= 1");
  return Rational(mult) * spec.axis(axis);
}

// Index of the mult-fold cover of an axis orbit:
//   2 (mult + floor(mult * a_axis / a_other)) + 1.
// An exact integer ratio means the orbit family is degenerate and is a hard
// error rather than a silent perturbation.
inline int cz_index(const EllipsoidSpec& spec, Axis axis, int mult) {
  if (mult < 1) throw PreconditionError("multiplicity must be positive", "mult >= 1");
  const Rational ratio = Rational(mult) * spec.axis(axis) / spec.axis(axis_other(axis));
  if (ratio.is_integer())
    throw DegenerateOrbitError("degenerate orbit: " + std::to_string(mult) + "*a_" +
                               axis_name(axis) + " is an integer multiple of a_" +
                               axis_name(axis_other(axis)));
  return static_cast<int>(2 * (mult + ratio.floor()) + 1);
}

inline ReebOrbit make_orbit(const EllipsoidSpec& spec, Axis axis, int mult) {
  return {axis, mult, orbit_action(spec, axis, mult), cz_index(spec, axis, mult)};
}

// All orbits of action <= cap, sorted by (action, axis, mult).
inline std::vector<ReebOrbit> orbits_up_to_action(const EllipsoidSpec& spec,
                                                  const Rational& cap) {
  if (!(cap > Rational(0))) throw PreconditionError("cap must be positive", "cap > 0");
  std::vector<ReebOrbit> out;
  for (Axis axis : {Axis::Minus, Axis::Plus}) {
    for (int m = 1; Rational(m) * spec.axis(axis) <= cap; ++m)
      out.push_back(make_orbit(spec, axis, m));
  }
  std::sort(out.begin(), out.end(), [](const ReebOrbit& a, const ReebOrbit& b) {
    if (a.action != b.action) return a.action < b.action;
    if (a.axis != b.axis) return a.axis < b.axis;
    return a.mult < b.mult;
  });
  return out;
}

// Monotonicity lower bound: a curve through the centers of `num_points`
// disjoint balls of the given capacity has area at least their sum.
inline Rational point_constraint_area_bound(int num_points, const Rational& ball_capacity) {
  if (num_points < 1) throw PreconditionError("need at least one point", "num_points >= 1");
  if (!(ball_capacity > Rational(0)))
    throw PreconditionError("capacity must be positive", "ball_capacity > 0");
  return Rational(num_points) * ball_capacity;
}

}  // namespace llab
