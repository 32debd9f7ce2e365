#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "mixlap/bathtub.hpp"

using namespace mixlap;

namespace {

double rel_diff(double x, double y) { return std::abs(x - y) / std::abs(y); }

double moment_residual(const BathtubProblem<double>& p, double r) {
  const double surf = unit_sphere_area<double>(p.n);
  const double m = p.m1 * surf * (p.alpha * std::pow(r, p.n + 2.0) / (p.n + 2.0) +
                                  p.beta * std::pow(r, p.n + 2.0 * p.s) / (p.n + 2.0 * p.s));
  return std::abs(m - p.m2) / p.m2;
}

}  // namespace

TEST_SUITE("bathtub") {

TEST_CASE("single-term closed-form radii") {
  // Local term only in one dimension: 2 R^3 / 3 = 1.
  BathtubProblem<double> local{1, 0.5, 1.0, 0.0, 1.0, 1.0};
  CHECK(rel_diff(bathtub_radius(local), std::cbrt(1.5)) <= 1e-10);
  // Nonlocal term only, s = 1/2: 2 R^2 / 2 = 1.
  BathtubProblem<double> nonlocal{1, 0.5, 0.0, 1.0, 1.0, 1.0};
  CHECK(rel_diff(bathtub_radius(nonlocal), 1.0) <= 1e-10);
}

TEST_CASE("two-term radius solves the moment equation") {
  BathtubProblem<double> p{1, 0.5, 1.0, 1.0, 1.0, 1.0};
  const double r = bathtub_radius(p);
  CHECK(r == doctest::Approx(0.806443932359).epsilon(1e-9));  // root of (2/3)R^3 + R^2 = 1
  CHECK(moment_residual(p, r) <= 1e-10);
}

TEST_CASE("degenerate problem is rejected") {
  BathtubProblem<double> p{1, 0.5, 0.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(bathtub_radius(p), std::invalid_argument);
  CHECK_THROWS_AS(bathtub_bounds(p), std::invalid_argument);
}

TEST_CASE("single-term bound forms coincide") {
  BathtubProblem<double> p{1, 0.5, 1.0, 0.0, 1.0, 1.0};
  const auto sol = bathtub_bounds(p);
  const double expected = 2 * std::cbrt(1.5);
  CHECK(rel_diff(sol.exact_bound, expected) <= 1e-10);
  CHECK(rel_diff(sol.minform_bound, expected) <= 1e-10);
  CHECK(rel_diff(sol.maxform_bound, expected) <= 1e-10);
  CHECK(sol.active_branch == BathtubBranch::local);
}

TEST_CASE("two-term bound forms and ordering") {
  BathtubProblem<double> p{1, 0.5, 1.0, 1.0, 1.0, 1.0};
  const auto sol = bathtub_bounds(p);
  CHECK(sol.exact_bound == doctest::Approx(2 * 0.806443932359).epsilon(1e-9));
  CHECK(rel_diff(sol.minform_bound, 2.0) <= 1e-12);  // min{(3/2)^{1/3}, 1} = 1
  CHECK(rel_diff(sol.maxform_bound, 2 * std::cbrt(1.5)) <= 1e-12);
  CHECK(sol.exact_bound <= sol.minform_bound);
  CHECK(sol.minform_bound <= sol.maxform_bound);
  CHECK(sol.active_branch == BathtubBranch::interior);
}

TEST_CASE("nonlocal-only branch flag and coincidence with min form") {
  BathtubProblem<double> p{2, 0.75, 0.0, 2.5, 1.5, 0.7};
  const auto sol = bathtub_bounds(p);
  CHECK(sol.active_branch == BathtubBranch::nonlocal);
  CHECK(rel_diff(sol.exact_bound, sol.minform_bound) <= 1e-12);
}

TEST_CASE("random problems: residual, ordering, monotonicity") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> logu(-3.0, 3.0);
  const int ns[] = {1, 2, 3};
  const double ss[] = {0.25, 0.5, 0.75};
  for (int trial = 0; trial < 100; ++trial) {
    BathtubProblem<double> p;
    p.n = ns[trial % 3];
    p.s = ss[(trial / 3) % 3];
    p.alpha = std::exp(logu(rng));
    p.beta = std::exp(logu(rng));
    p.m1 = std::exp(logu(rng));
    p.m2 = std::exp(logu(rng));

    const double r = bathtub_radius(p);
    CHECK(moment_residual(p, r) <= 1e-10);

    const auto sol = bathtub_bounds(p);
    CHECK(sol.exact_bound <= sol.minform_bound * (1 + 1e-12));
    CHECK(sol.minform_bound <= sol.maxform_bound * (1 + 1e-12));

    // Strict ordering whenever the two single-term radii genuinely differ.
    const double surf = unit_sphere_area<double>(p.n);
    const double ra = std::pow(p.m2 * (p.n + 2.0) / (p.m1 * surf * p.alpha), 1.0 / (p.n + 2.0));
    const double rb = std::pow(p.m2 * (p.n + 2.0 * p.s) / (p.m1 * surf * p.beta),
                               1.0 / (p.n + 2.0 * p.s));
    if (std::abs(ra - rb) > 1e-6 * std::max(ra, rb)) {
      CHECK(sol.exact_bound < sol.minform_bound);
      CHECK(sol.minform_bound < sol.maxform_bound);
    }

    // Monotonicity under parameter perturbations.
    auto exact_of = [&](const BathtubProblem<double>& q) { return bathtub_bounds(q).exact_bound; };
    BathtubProblem<double> up = p;
    up.m2 = p.m2 * (1 + 1e-6);
    CHECK(exact_of(up) >= sol.exact_bound * (1 - 1e-12));
    BathtubProblem<double> heavier_a = p;
    heavier_a.alpha = p.alpha * (1 + 1e-6);
    CHECK(exact_of(heavier_a) <= sol.exact_bound * (1 + 1e-12));
    BathtubProblem<double> heavier_b = p;
    heavier_b.beta = p.beta * (1 + 1e-6);
    CHECK(exact_of(heavier_b) <= sol.exact_bound * (1 + 1e-12));
  }
}

TEST_CASE("oracle reproduces the extremal ball exactly") {
  BathtubProblem<double> p{1, 0.5, 1.0, 1.0, 1.0, 1.0};
  const auto sol = bathtub_bounds(p);
  RadialStepFunction<double> ball{{sol.radius}, {p.m1}};
  const auto chk = bathtub_oracle_check(p, ball);
  CHECK(chk.admissible);
  CHECK(rel_diff(chk.mass, sol.exact_bound) <= 1e-12);
  CHECK(rel_diff(chk.moment, p.m2) <= 1e-10);

  RadialStepFunction<double> half{{sol.radius}, {p.m1 / 2}};
  const auto chk_half = bathtub_oracle_check(p, half);
  CHECK(chk_half.admissible);
  CHECK(rel_diff(chk_half.mass, sol.exact_bound / 2) <= 1e-12);
}

TEST_CASE("oracle rejects malformed step functions") {
  BathtubProblem<double> p{1, 0.5, 1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(bathtub_oracle_check(p, RadialStepFunction<double>{{1.0, 0.5}, {0.5, 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bathtub_oracle_check(p, RadialStepFunction<double>{{1.0}, {-0.1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bathtub_oracle_check(p, RadialStepFunction<double>{{1.0}, {2.0}}),
                  std::invalid_argument);
}

TEST_CASE("no admissible step function beats the exact bound") {
  BathtubProblem<double> p{1, 0.5, 1.0, 1.0, 1.0, 1.0};
  const auto sol = bathtub_bounds(p);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> radius_u(0.0, 3 * sol.radius);
  std::uniform_real_distribution<double> level_u(0.0, p.m1);
  std::uniform_int_distribution<int> shells_u(1, 5);
  int admissible_count = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    RadialStepFunction<double> f;
    const int shells = shells_u(rng);
    for (int j = 0; j < shells; ++j) f.breakpoints.push_back(radius_u(rng));
    std::sort(f.breakpoints.begin(), f.breakpoints.end());
    f.breakpoints.erase(std::unique(f.breakpoints.begin(), f.breakpoints.end()),
                        f.breakpoints.end());
    if (f.breakpoints.empty() || f.breakpoints.front() <= 0.0) continue;
    for (std::size_t j = 0; j < f.breakpoints.size(); ++j) f.levels.push_back(level_u(rng));

    auto chk = bathtub_oracle_check(p, f);
    if (!chk.admissible) {
      // Scale the levels down onto the budget; scaling keeps them in [0, m1].
      const double scale = 0.999 * p.m2 / chk.moment;
      for (auto& lv : f.levels) lv *= scale;
      chk = bathtub_oracle_check(p, f);
    }
    REQUIRE(chk.admissible);
    ++admissible_count;
    CHECK(chk.mass <= sol.exact_bound * (1 + 1e-12));
  }
  CHECK(admissible_count >= 900);
}

}  // TEST_SUITE
