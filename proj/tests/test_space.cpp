#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "grandlux/integrate.hpp"
#include "testutil.hpp"

using namespace grandlux;

namespace {

ProbabilitySpace interval_with_singularity_at_zero() {
  QuadratureSpec q;
  q.singular_points = {0.0};
  return ProbabilitySpace::interval(q);
}

}  // namespace

TEST_CASE("space construction validates its invariants") {
  CHECK_NOTHROW(ProbabilitySpace::finite({1.0}));
  CHECK_NOTHROW(ProbabilitySpace::finite({0.25, 0.25, 0.25, 0.25}));
  CHECK_THROWS_AS(ProbabilitySpace::finite({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(ProbabilitySpace::finite({1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ProbabilitySpace::finite({}), std::invalid_argument);

  CHECK_NOTHROW(ProbabilitySpace::interval());
  QuadratureSpec bad;
  bad.panels = 0;
  CHECK_THROWS_AS(ProbabilitySpace::interval(bad), std::invalid_argument);
  bad = QuadratureSpec{};
  bad.nodes_per_panel = 1;
  CHECK_THROWS_AS(ProbabilitySpace::interval(bad), std::invalid_argument);
  bad = QuadratureSpec{};
  bad.grading_ratio = 1.0;
  CHECK_THROWS_AS(ProbabilitySpace::interval(bad), std::invalid_argument);
  bad = QuadratureSpec{};
  bad.singular_points = {1.5};
  CHECK_THROWS_AS(ProbabilitySpace::interval(bad), std::invalid_argument);
}

TEST_CASE("catalog evaluation") {
  CHECK(FunctionRep::constant(3.0)(0.7) == 3.0);
  CHECK(FunctionRep::power(-0.5)(0.25) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(FunctionRep::cosine(1)(0.5) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(FunctionRep::indicator(0.25, 0.5)(0.25) == 1.0);
  CHECK(FunctionRep::indicator(0.25, 0.5)(0.5) == 0.0);

  auto s = FunctionRep::sampled({1.0, 2.0});
  CHECK(s.at_atom(1) == 2.0);
  CHECK_THROWS_AS(s(0.5), std::invalid_argument);
  CHECK_THROWS_AS(s.at_atom(2), std::out_of_range);
  CHECK_THROWS_AS(FunctionRep::power(-0.5)(0.0), std::domain_error);
  CHECK_THROWS_AS(FunctionRep::cosine(0), std::invalid_argument);
  CHECK_THROWS_AS(FunctionRep::indicator(0.5, 0.5), std::invalid_argument);
}

TEST_CASE("gauss-legendre rules are consistent") {
  for (int n : {2, 4, 8, 13}) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    double wsum = 0.0, odd = 0.0, deg = 0.0;
    for (int i = 0; i < n; ++i) {
      auto iu = static_cast<std::size_t>(i);
      wsum += w[iu];
      odd += w[iu] * std::pow(x[iu], 3);
      deg += w[iu] * std::pow(x[iu], 2 * n - 2);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::fabs(odd) < 1e-14);
    // exact for degree 2n-1, so x^(2n-2) integrates to 2/(2n-1)
    CHECK(deg == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("integrate on finite spaces is the exact weighted sum") {
  auto sp = ProbabilitySpace::finite({0.25, 0.25, 0.25, 0.25});
  CHECK(integrate(sp, FunctionRep::sampled({1, 2, 3, 4})).value() == 2.5);
  CHECK(integrate(sp, FunctionRep::constant(7.0)).value() == doctest::Approx(7.0).epsilon(1e-15));
  CHECK_THROWS_AS(integrate(sp, FunctionRep::cosine(1)), std::invalid_argument);
}

TEST_CASE("integrate uses the power closed form, divergence included") {
  auto sp = interval_with_singularity_at_zero();
  CHECK(integrate(sp, FunctionRep::power(-0.5)).value() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_FALSE(integrate(sp, FunctionRep::power(-1.0)).is_finite());
  CHECK_FALSE(integrate(sp, FunctionRep::power(-1.7)).is_finite());
  CHECK(integrate(sp, FunctionRep::power(2.0)).value() == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK_THROWS_AS(integrate(sp, FunctionRep::sampled({1, 2})), std::invalid_argument);
}

TEST_CASE("quadrature reproduces power closed forms at default settings") {
  for (double a : {-0.9, -0.5, 0.0, 1.0, 3.0}) {
    QuadratureSpec q;
    if (a < 0.0) q.singular_points = {0.0};
    auto sp = ProbabilitySpace::interval(q);
    const double exact = 1.0 / (a + 1.0);
    const double got = integrate_quadrature(sp, FunctionRep::power(a));
    CHECK(std::fabs(got - exact) / exact <= 1e-8);
  }
  // registering a harmless singular anchor must not break smooth integrands
  for (double a : {0.0, 1.0, 3.0}) {
    auto sp = interval_with_singularity_at_zero();
    const double exact = 1.0 / (a + 1.0);
    CHECK(std::fabs(integrate_quadrature(sp, FunctionRep::power(a)) - exact) / exact <= 1e-8);
  }
}

TEST_CASE("doubling the panel count never worsens the power-catalog error") {
  for (double a : {-0.9, -0.5, 0.0, 1.0, 3.0}) {
    const double exact = 1.0 / (a + 1.0);
    double prev = -1.0;
    for (int panels : {64, 128, 256}) {
      QuadratureSpec q;
      q.panels = panels;
      if (a < 0.0) q.singular_points = {0.0};
      auto sp = ProbabilitySpace::interval(q);
      double err = std::fabs(integrate_quadrature(sp, FunctionRep::power(a)) - exact) / exact;
      if (prev >= 0.0) CHECK(err <= prev + 1e-13);
      prev = err;
    }
  }
}

TEST_CASE("quadrature handles the rest of the catalog") {
  auto sp = ProbabilitySpace::interval();
  CHECK(std::fabs(integrate_quadrature(sp, FunctionRep::cosine(1))) < 1e-14);
  CHECK(std::fabs(integrate_quadrature(sp, FunctionRep::cosine(3))) < 1e-13);
  CHECK(integrate_quadrature(sp, FunctionRep::indicator(0.2, 0.7)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(integrate_quadrature(sp, FunctionRep::constant(1.0)) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("integrate is linear on finite spaces") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    auto sp = testutil::random_finite_space(rng);
    const int n = sp.atom_count();
    auto fv = testutil::random_values(rng, n);
    auto gv = testutil::random_values(rng, n);
    const double a = testutil::uniform(rng, -3.0, 3.0);
    const double b = testutil::uniform(rng, -3.0, 3.0);
    std::vector<double> combo(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto iu = static_cast<std::size_t>(i);
      combo[iu] = a * fv[iu] + b * gv[iu];
    }
    double lhs = integrate(sp, FunctionRep::sampled(combo)).value();
    double rhs = a * integrate(sp, FunctionRep::sampled(fv)).value() +
                 b * integrate(sp, FunctionRep::sampled(gv)).value();
    CHECK(std::fabs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("the measure is normalized on every valid space") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto sp = testutil::random_finite_space(rng);
    CHECK(std::fabs(integrate(sp, FunctionRep::constant(1.0)).value() - 1.0) <= 1e-12);
  }
  auto iv = interval_with_singularity_at_zero();
  CHECK(std::fabs(integrate_quadrature(iv, FunctionRep::constant(1.0)) - 1.0) <= 1e-12);
}

TEST_CASE("exponent bounds and validation") {
  auto sp4 = ProbabilitySpace::finite({0.25, 0.25, 0.25, 0.25});
  auto iv = ProbabilitySpace::interval();

  auto pw = Exponent::piecewise({{0.0, 0.5, 2.0}, {0.5, 1.0, 3.0}});
  CHECK(exponent_bounds(pw, iv) == std::pair<double, double>{2.0, 3.0});

  auto pc = Exponent::constant(2.5);
  CHECK(exponent_bounds(pc, iv) == std::pair<double, double>{2.5, 2.5});
  CHECK(exponent_bounds(pc, sp4) == std::pair<double, double>{2.5, 2.5});

  auto ps = Exponent::sampled({2, 2, 3, 4});
  CHECK(exponent_bounds(ps, sp4) == std::pair<double, double>{2.0, 4.0});
  CHECK_THROWS_AS(exponent_bounds(ps, iv), std::invalid_argument);
  CHECK_THROWS_AS(exponent_bounds(pw, sp4), std::invalid_argument);

  // p- <= 1 leaves the grand range empty and is rejected
  CHECK_THROWS_AS(Exponent::constant(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::constant(0.9), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::sampled({2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::piecewise({{0.0, 1.0, 1.0}}), std::invalid_argument);

  // partition defects
  CHECK_THROWS_AS(Exponent::piecewise({{0.0, 0.4, 2.0}, {0.5, 1.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::piecewise({{0.1, 1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::piecewise({{0.0, 0.0, 2.0}, {0.0, 1.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("piecewise exponent evaluates by piece") {
  auto pw = Exponent::piecewise({{0.0, 0.5, 2.0}, {0.5, 1.0, 3.0}});
  CHECK(pw(0.25) == 2.0);
  CHECK(pw(0.5) == 3.0);
  CHECK(pw(0.75) == 3.0);
  CHECK(pw.breakpoints() == std::vector<double>{0.5});
}

TEST_CASE("extended real arithmetic") {
  ExtendedReal inf = ExtendedReal::infinity();
  CHECK_FALSE(inf.is_finite());
  CHECK((inf + 3.0).value() == ExtendedReal::infinity().value());
  CHECK((inf * 2.0).value() == ExtendedReal::infinity().value());
  CHECK((ExtendedReal(2.0) + 3.0).value() == 5.0);
  CHECK_THROWS_AS(inf * 0.0, std::invalid_argument);
  CHECK_THROWS_AS(ExtendedReal(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(ExtendedReal(-std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}
