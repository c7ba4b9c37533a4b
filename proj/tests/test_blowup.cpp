#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "llab/blowup.hpp"

using namespace llab;

TEST_CASE("homology class arithmetic") {
  const HomologyClass line{1, 0}, exceptional{0, -1}, conic{2, 1};
  CHECK(line.area(Rational(1, 4)) == Rational(1));
  CHECK(HomologyClass{1, 1}.area(Rational(1, 4)) == Rational(3, 4));
  CHECK(exceptional.area(Rational(1, 4)) == Rational(1, 4));
  CHECK(intersection_number(line, line) == 1);
  CHECK(intersection_number(line, exceptional) == 0);
  CHECK(intersection_number(exceptional, exceptional) == -1);
  CHECK(intersection_number(conic, conic) == 3);
  CHECK(HomologyClass{1, 2}.str() == "1L-2E");
  CHECK(HomologyClass{0, -1}.str() == "0L+1E");
}

TEST_CASE("virtual genus from the adjunction formula") {
  CHECK(adjunction_virtual_genus({1, 0}) == Rational(0));
  CHECK(adjunction_virtual_genus({1, 1}) == Rational(0));
  CHECK(adjunction_virtual_genus({3, 0}) == Rational(1));
  // (d-1)(d-2)/2 - m(m-1)/2 at d=1: -k(k-1)/2 < 0 for every k >= 2
  for (std::int64_t k = 2; k <= 8; ++k) {
    CHECK(adjunction_virtual_genus({1, k}) == Rational(-k * (k - 1), 2));
    CHECK(adjunction_virtual_genus({1, k}) < Rational(0));
  }
}

TEST_CASE("transition map compresses the shell radially") {
  const Rational lam(1, 4);
  const std::array<Complex, 2> z{Complex{0.6, 0.1}, Complex{0.2, -0.3}};
  const auto w = blowup_transition(z, lam);
  const double n2 = std::norm(z[0]) + std::norm(z[1]);
  CHECK(std::norm(w[0]) + std::norm(w[1]) == Catch::Approx(n2 - lam.value()).epsilon(1e-12));
  // direction preserved
  CHECK(w[0].real() * z[0].imag() == Catch::Approx(w[0].imag() * z[0].real()).margin(1e-12));
  CHECK_THROWS_AS(blowup_transition({Complex{0.1, 0}, Complex{0.2, 0}}, lam),
                  ChartDomainError);
}

TEST_CASE("chart round trips and reciprocal-slope transition") {
  const std::array<Complex, 2> z{Complex{0.3, 0.4}, Complex{-0.1, 0.2}};
  const auto p = to_chart(z);
  const auto back = chart_to_c2(p);
  CHECK(back[0].real() == Catch::Approx(z[0].real()).margin(1e-14));
  CHECK(back[1].imag() == Catch::Approx(z[1].imag()).margin(1e-14));
  const auto q = chart_transition(p);
  CHECK(q.chart != p.chart);
  const Complex slope_p{p.q[2], p.q[3]}, slope_q{q.q[2], q.q[3]};
  CHECK((slope_p * slope_q).real() == Catch::Approx(1.0).margin(1e-12));
  CHECK((slope_p * slope_q).imag() == Catch::Approx(0.0).margin(1e-12));
  const auto back2 = chart_to_c2(q);
  CHECK(back2[0].real() == Catch::Approx(z[0].real()).margin(1e-12));
  CHECK_THROWS_AS(to_chart({Complex{}, Complex{}}), ChartDomainError);
}

TEST_CASE("blown-up form restricts to the standard form when lam = 0") {
  // with zero capacity the transition is the identity and the residual of
  // pi1^* omega_st against omega_st vanishes
  const auto report = omega_lambda_residual(Rational(0),
                                            {{Complex{0.5, 0.1}, Complex{0.2, 0.3}},
                                             {Complex{0.1, 0.0}, Complex{0.6, -0.2}}},
                                            1e-5);
  CHECK(report.evaluated == 2);
  CHECK(report.max_residual < 1e-8);
}

TEST_CASE("transition pulls the blown-up form back to the standard form") {
  const Rational lam(1, 4);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 6.28);
  std::uniform_real_distribution<double> radius(1.1, 1.7);
  std::vector<std::array<Complex, 2>> samples;
  for (int i = 0; i < 200; ++i) {
    const double n = std::sqrt(radius(rng) * lam.value());
    const double a = angle(rng), b = angle(rng), c = angle(rng) / 4.0;
    samples.push_back({Complex{n * std::cos(c) * std::cos(a), n * std::cos(c) * std::sin(a)},
                       Complex{n * std::sin(c) * std::cos(b), n * std::sin(c) * std::sin(b)}});
  }
  const auto report = omega_lambda_residual(lam, samples, 1e-5);
  CHECK(report.evaluated + report.skipped == 200);
  CHECK(report.evaluated > 150);
  CHECK(report.max_residual < 1e-6);
}

TEST_CASE("no nontrivial bubbling decomposition survives") {
  const auto report = enumerate_bubble_decompositions(Rational(1, 3), Rational(1));
  CHECK(report.survivors == 0);
  CHECK(report.trivial_admissible);
  CHECK(!report.candidates.empty());
  for (const auto& c : report.candidates) {
    CHECK_FALSE(c.survives());
    CHECK(c.killed_by() == "adjunction");  // area may pass; the genus never does
    CHECK(c.virtual_genus < Rational(0));
  }
  CHECK_THROWS_AS(enumerate_bubble_decompositions(Rational(1, 3), Rational(2)),
                  PreconditionError);
}

TEST_CASE("general decompositions agree with the restricted family") {
  CHECK(enumerate_general_decompositions(Rational(1, 3), Rational(1)).empty());
  CHECK(enumerate_general_decompositions(Rational(1, 5), Rational(1, 2)).empty());
}

TEST_CASE("packing obstruction boundary") {
  CHECK(packing_obstruction(Rational(1, 2), Rational(1, 2)) == PackingVerdict::Admissible);
  CHECK(packing_obstruction(Rational(1, 2), Rational(1, 2) + Rational(1, 1000)) ==
        PackingVerdict::Obstructed);
  CHECK(packing_obstruction(Rational(1), Rational(0)) == PackingVerdict::Admissible);
  CHECK_THROWS_AS(packing_obstruction(Rational(-1, 2), Rational(1, 2)), PreconditionError);
}

TEST_CASE("norm identity of the transition map on random points") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Rational lam(1, 5);
  int checked = 0;
  while (checked < 1000) {
    const std::array<Complex, 2> z{Complex{unit(rng), unit(rng)},
                                   Complex{unit(rng), unit(rng)}};
    const double n2 = std::norm(z[0]) + std::norm(z[1]);
    if (n2 <= lam.value() + 1e-9) continue;
    const auto w = blowup_transition(z, lam);
    CHECK(std::norm(w[0]) + std::norm(w[1]) ==
          Catch::Approx(n2 - lam.value()).margin(1e-12));
    ++checked;
  }
}

TEST_CASE("bubbling verdicts do not depend on the capacity") {
  for (const Rational& lam : {Rational(1, 10), Rational(1, 2), Rational(9, 10)}) {
    const auto rep = enumerate_bubble_decompositions(lam, Rational(1, 2));
    CHECK(rep.survivors == 0);
    for (const auto& c : rep.candidates) CHECK_FALSE(c.adjunction_ok);
  }
}
