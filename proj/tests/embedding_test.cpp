#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mixlap/embedding.hpp"

using namespace mixlap;

namespace {

double rel_diff(double x, double y) { return std::abs(x - y) / std::abs(y); }

}  // namespace

TEST_SUITE("embedding") {

TEST_CASE("estimate equals the raw pencil value and echoes its inputs") {
  const auto g = make_grid(0.0, 1.0, 96);
  const double s = 0.5;
  const auto est = discrete_embedding_constant(g, s);
  CHECK(est.s == s);
  CHECK(est.grid.n_interior == 96);
  CHECK(est.convention == GagliardoConvention::full_space_normalized);
  CHECK(est.mu_max > 0.0);
  CHECK(est.extremizer.size() == 96);

  // Same pencil without the h scaling; the common factor drops out.
  const auto raw = generalized_symmetric_eigen(fractional_matrix(g, s), laplacian_matrix(g),
                                               Extremal::largest);
  CHECK(rel_diff(est.mu_max, raw.value) <= 1e-12);
}

TEST_CASE("extremizer attains the estimated value") {
  const auto g = make_grid(0.0, 1.0, 80);
  const double s = 0.5;
  const auto est = discrete_embedding_constant(g, s);
  const Vec<double>& v = est.extremizer;
  const double num = g.h * v.dot(fractional_matrix(g, s) * v);
  const double den = g.h * v.dot(laplacian_matrix(g) * v);
  CHECK(rel_diff(num / den, est.mu_max) <= 1e-8);
}

TEST_CASE("refinement drifts the estimate slightly downward") {
  // The quadratic form is a collocation surrogate rather than the exact
  // energy of the interpolant, so the finite-subspace argument that would
  // force growth under nesting does not apply; the observed drift is a small
  // monotone decrease that itself shrinks as the grid resolves.
  std::vector<double> mu;
  for (int n : {127, 255, 511}) {
    const auto g = make_grid(0.0, 1.0, n);
    mu.push_back(discrete_embedding_constant(g, 0.5).mu_max);
  }
  CHECK(mu[0] == doctest::Approx(0.2496602170).epsilon(1e-6));
  CHECK(mu[1] == doctest::Approx(0.2494444829).epsilon(1e-6));
  CHECK(mu[1] <= mu[0] + 1e-9);
  CHECK(mu[2] <= mu[1] + 1e-9);
  CHECK(mu[0] - mu[1] <= 5e-4);
  CHECK(mu[1] - mu[2] < mu[0] - mu[1]);
}

TEST_CASE("near the local limit the constant is order one") {
  const auto g = make_grid(0.0, 1.0, 127);
  const auto est = discrete_embedding_constant(g, 0.95);
  CHECK(est.mu_max >= 0.5);
  CHECK(est.mu_max <= 2.0);
  CHECK(est.mu_max == doctest::Approx(0.86158232).epsilon(1e-4));
}

TEST_CASE("interval-restricted convention yields the larger constant") {
  const auto g = make_grid(0.0, 1.0, 127);
  const auto noisy =
      discrete_embedding_constant(g, 0.5, GagliardoConvention::omega_only_unnormalized);
  const auto plain = discrete_embedding_constant(g, 0.5);
  CHECK(noisy.mu_max == doctest::Approx(0.73151013).epsilon(1e-5));
  CHECK(noisy.mu_max > plain.mu_max);

  const Vec<double>& v = noisy.extremizer;
  const double num = gagliardo_form(g, v, v, 0.5, GagliardoConvention::omega_only_unnormalized);
  const double den = g.h * v.dot(laplacian_matrix(g) * v);
  CHECK(rel_diff(num / den, noisy.mu_max) <= 1e-8);
}

TEST_CASE("definiteness brackets around the estimated threshold") {
  const auto g = make_grid(0.0, 1.0, 64);
  for (double s : {0.3, 0.5, 0.8}) {
    const double mu = discrete_embedding_constant(g, s).mu_max;
    const OperatorSpec<double> inside{1, 1.0, -0.9 / mu, s};
    const OperatorSpec<double> outside{1, 1.0, -1.5 / mu, s};
    CHECK(is_positive_definite(mixed_matrix(g, inside)));
    CHECK_FALSE(is_positive_definite(mixed_matrix(g, outside)));
  }
}

TEST_CASE("admissible coefficient range with certificate") {
  const auto g = make_grid(0.0, 1.0, 128);
  const auto range = admissible_b_range(g, 0.5, 1.0);
  CHECK(range.b_lo < 0.0);
  CHECK(range.certificate);

  const auto scaled = admissible_b_range(g, 0.5, 3.0);
  CHECK(rel_diff(scaled.b_lo, 3.0 * range.b_lo) <= 1e-12);

  CHECK_THROWS_AS(admissible_b_range(g, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(admissible_b_range(g, 0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(admissible_b_range(g, 1.5, 1.0), std::domain_error);
}

}  // TEST_SUITE
