#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "grandlux/ergodic.hpp"
#include "grandlux/experiment.hpp"
#include "testutil.hpp"

using namespace grandlux;
using namespace grandlux::ergodic;

namespace {

const double kGoldenAlpha = 0.6180339887498949;

struct TwoCycleSystem {
  ProbabilitySpace space = ProbabilitySpace::finite(std::vector<double>(6, 1.0 / 6));
  Exponent p = Exponent::sampled({2, 2, 2, 3, 3, 3});
  FunctionRep f = FunctionRep::sampled({3, 0, 0, 6, 0, 0});
  dynamics::Transformation T = dynamics::Transformation::finite_map({1, 2, 0, 4, 5, 3});
};

}  // namespace

TEST_CASE("two-cycle worked example: full theorem run") {
  TwoCycleSystem sys;
  TheoremOptions opt;
  opt.n_schedule = {3, 6, 9};
  auto rep = verify_theorem(sys.space, sys.f, sys.T, sys.p, opt);

  CHECK(rep.passed);
  CHECK(rep.hypothesis.ok());

  // part (i): finite norms, contraction of the grand norm
  CHECK(rep.part_i.f_grand_norm.is_finite());
  CHECK(rep.part_i.fav_grand_norm.is_finite());
  CHECK(rep.part_i.fav_grand_norm.value() <= rep.part_i.f_grand_norm.value() + 1e-8);

  // part (ii): residuals vanish in finite arithmetic, means equal 1.5
  CHECK(rep.part_ii.invariance_residual == 0.0);
  CHECK(rep.part_ii.mean_residual <= 1e-12);
  CHECK(rep.part_ii.mean_f == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(rep.part_ii.mean_fav == doctest::Approx(1.5).epsilon(1e-12));

  // eps = 0 boundary probe is informational with the worked values
  REQUIRE(!rep.contraction.empty());
  CHECK(rep.contraction[0].informational);
  CHECK(rep.contraction[0].eps == 0.0);
  CHECK(rep.contraction[0].modular_fav == doctest::Approx(4.5).epsilon(1e-13));
  CHECK(rep.contraction[0].modular_f == doctest::Approx(37.5).epsilon(1e-13));
  for (const auto& row : rep.contraction) {
    if (!row.informational) {
      CHECK(row.ok);
      CHECK(row.modular_fav <= row.modular_f + 1e-10);
    }
  }

  // part (iii): every cycle length divides every scheduled n, rows vanish
  REQUIRE(rep.part_iii.rows.size() == 3);
  for (const auto& row : rep.part_iii.rows) CHECK(row.diff_grand_norm == 0.0);
  CHECK(rep.part_iii.checked);  // bounded f is a closure member
  CHECK(rep.part_iii.ok);
  CHECK(rep.closure_member.is_member);
}

TEST_CASE("constants are fixed points of averaging") {
  auto space = ProbabilitySpace::finite({0.2, 0.3, 0.5});
  auto p = Exponent::constant(2.5);
  auto f = FunctionRep::constant(-3.25);
  auto T = dynamics::Transformation::finite_map({1, 2, 0});
  CHECK_FALSE(dynamics::check_measure_preserving(T, space).preserved);

  // use a weight-preserving cycle instead
  auto space_u = ProbabilitySpace::finite(std::vector<double>(3, 1.0 / 3));
  TheoremOptions opt;
  opt.n_schedule = {1, 2, 4};
  auto rep = verify_theorem(space_u, f, T, p, opt);
  CHECK(rep.passed);
  CHECK(rep.part_i.fav_grand_norm.value() ==
        doctest::Approx(rep.part_i.f_grand_norm.value()).epsilon(1e-9));
  CHECK(rep.part_ii.invariance_residual == 0.0);
  CHECK(rep.part_ii.mean_residual == 0.0);
  for (const auto& row : rep.contraction) {
    CHECK(row.modular_fav == doctest::Approx(row.modular_f).epsilon(1e-12));
  }
  for (const auto& row : rep.part_iii.rows) CHECK(row.diff_grand_norm == 0.0);
}

TEST_CASE("irrational rotation with a cosine: averages collapse to the mean") {
  auto space = ProbabilitySpace::interval();
  auto p = Exponent::constant(2.0);
  auto f = FunctionRep::cosine(1);
  auto T = dynamics::Transformation::rotation(kGoldenAlpha);

  auto part1 = verify_pointwise_limit(space, f, T, p, 1.0);
  CHECK(part1.fav_grand_norm.value() <= 1e-12);  // f_av is zero up to quadrature
  CHECK(part1.norm_contraction_ok);
  CHECK(part1.finiteness_ok);

  auto part2 = verify_invariance(space, f, T, p);
  CHECK(part2.ok);
  CHECK(part2.invariance_residual <= 1e-10);
  CHECK(std::fabs(part2.mean_f) <= 1e-12);
  CHECK(part2.mean_residual <= 1e-6);

  TheoremOptions opt;
  opt.n_schedule = {1, 4, 16, 64, 256};
  auto rep = verify_theorem(space, f, T, p, opt);
  CHECK(rep.passed);
  CHECK(rep.part_iii.checked);
  CHECK(rep.part_iii.ok);
  // the dirichlet amplitude bounds the final row
  const auto& last = rep.part_iii.rows.back();
  CHECK(last.diff_grand_norm <= 1.0 / (256 * std::sin(M_PI * kGoldenAlpha)));
}

TEST_CASE("hypothesis gating refuses to run the theorem checks") {
  auto sp6 = ProbabilitySpace::finite(std::vector<double>(6, 1.0 / 6));
  auto p_blocks = Exponent::sampled({2, 2, 2, 3, 3, 3});
  auto f = FunctionRep::sampled({1, 2, 3, 4, 5, 6});

  // non-bijective map: not measure-preserving
  auto collapse = dynamics::Transformation::finite_map({0, 0, 1, 3, 4, 5});
  CHECK_THROWS_AS(verify_theorem(sp6, f, collapse, p_blocks), HypothesisError);
  try {
    verify_theorem(sp6, f, collapse, p_blocks);
  } catch (const HypothesisError& e) {
    CHECK(e.which() == "measure_preserving");
  }

  // block swap against a block-variable exponent: p not T-invariant
  auto block_swap = dynamics::Transformation::finite_map({3, 4, 5, 0, 1, 2});
  CHECK_THROWS_AS(verify_theorem(sp6, f, block_swap, p_blocks), HypothesisError);
  try {
    verify_theorem(sp6, f, block_swap, p_blocks);
  } catch (const HypothesisError& e) {
    CHECK(e.which() == "exponent_invariant");
  }

  // the same gate guards the individual part (i) runner
  CHECK_THROWS_AS(verify_pointwise_limit(sp6, f, block_swap, p_blocks, 1.0), HypothesisError);
}

TEST_CASE("random weight-preserving systems satisfy contraction and residual bounds") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    auto sys = experiment::make_random_system(rng(), 2 + static_cast<int>(rng() % 30));
    auto space = ProbabilitySpace::finite(sys.weights);
    auto p = Exponent::sampled(sys.exponent_values);
    auto f = FunctionRep::sampled(sys.f_values);
    auto T = dynamics::Transformation::finite_map(sys.permutation);

    REQUIRE(dynamics::check_measure_preserving(T, space).preserved);
    REQUIRE(dynamics::check_exponent_invariant(T, p, space).invariant);

    auto rows = verify_modular_contraction(space, f, T, p);
    for (const auto& row : rows) {
      if (!row.informational) {
        CHECK(row.modular_fav <= row.modular_f + 1e-10);
      }
    }

    auto part1 = verify_pointwise_limit(space, f, T, p, 1.0);
    CHECK(part1.norm_contraction_ok);
    CHECK(part1.finiteness_ok);

    auto part2 = verify_invariance(space, f, T, p);
    CHECK(part2.invariance_residual == 0.0);
    CHECK(part2.mean_residual <= 1e-12);
  }
}

TEST_CASE("convergence rows are eventually monotone for closure members") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 8; ++trial) {
    auto sys = experiment::make_random_system(rng(), 2 + static_cast<int>(rng() % 24));
    auto space = ProbabilitySpace::finite(sys.weights);
    auto p = Exponent::sampled(sys.exponent_values);
    auto f = FunctionRep::sampled(sys.f_values);
    auto T = dynamics::Transformation::finite_map(sys.permutation);

    auto membership = norms::vanishing_limit(space, f, p, 1.0);
    REQUIRE(membership.is_member);
    auto part3 = verify_norm_convergence(space, f, T, p, 1.0, {}, membership);
    REQUIRE(part3.rows.size() == default_schedule().size());
    CHECK(part3.checked);
    // the C/n envelope can legitimately fail when no scheduled n is a
    // multiple of every cycle length, so only the monotone shape is asserted
    for (std::size_t i = 4; i < part3.rows.size(); ++i) {
      CHECK(part3.rows[i].diff_grand_norm <= part3.rows[i - 1].diff_grand_norm + 1e-12);
    }
  }
}

TEST_CASE("non-members get informational convergence rows") {
  QuadratureSpec q;
  q.singular_points = {0.0};
  auto space = ProbabilitySpace::interval(q);
  auto p = Exponent::constant(2.0);
  auto f = FunctionRep::power(-0.5);
  auto T = dynamics::Transformation::rotation(kGoldenAlpha);

  auto membership = norms::vanishing_limit(space, f, p, 1.0);
  REQUIRE_FALSE(membership.is_member);
  auto part3 = verify_norm_convergence(space, f, T, p, 1.0, {1, 2, 4}, membership);
  CHECK_FALSE(part3.checked);
  CHECK(part3.ok);  // no assertion applies
  CHECK(part3.rows.size() == 3);

  CHECK_THROWS_AS(
      verify_norm_convergence(space, f, T, p, 1.0, {4, 2}, membership),
      std::invalid_argument);
}

TEST_CASE("identity transformation with a constant function runs end to end") {
  auto space = ProbabilitySpace::finite({0.4, 0.6});
  auto rep = verify_theorem(space, FunctionRep::constant(2.0),
                            dynamics::Transformation::identity(), Exponent::constant(2.0));
  CHECK(rep.passed);
  CHECK(rep.part_ii.invariance_residual == 0.0);
  for (const auto& row : rep.part_iii.rows) CHECK(row.diff_grand_norm == 0.0);
}

TEST_CASE("theorem options validate the schedule") {
  TwoCycleSystem sys;
  TheoremOptions opt;
  opt.n_schedule = {3, 3};
  CHECK_THROWS_AS(verify_theorem(sys.space, sys.f, sys.T, sys.p, opt), std::invalid_argument);
}
