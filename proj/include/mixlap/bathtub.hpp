#pragma once

// Mass maximization for radial densities 0 <= f <= M1 under the moment
// budget  int (alpha |z|^2 + beta |z|^{2s}) f(z) dz <= M2.  The extremal f
// is the indicator of a ball, M1 * chi_{|z| <= R}, with R solving
//
//   M1 |S^{n-1}| [ alpha R^{n+2}/(n+2) + beta R^{n+2s}/(n+2s) ] = M2.
//
// Besides the exact mass bound M1 |S^{n-1}| R^n / n we expose the two
// printed relaxations obtained from the single-term radii (min and max
// form); the max form is looser, the ordering exact <= min <= max is an
// invariant.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mixlap/specfun.hpp"

namespace mixlap {

template <class Scalar = double>
struct BathtubProblem {
  int n = 1;
  Scalar s = Scalar(0.5);
  Scalar alpha = Scalar(0);  // weight of |z|^2
  Scalar beta = Scalar(0);   // weight of |z|^{2s}
  Scalar m1 = Scalar(1);     // pointwise cap
  Scalar m2 = Scalar(1);     // moment budget
};

enum class BathtubBranch { local, nonlocal, interior };

template <class Scalar = double>
struct BathtubSolution {
  Scalar radius;
  Scalar exact_bound;
  Scalar minform_bound;
  Scalar maxform_bound;
  BathtubBranch active_branch;
};

namespace detail {

template <class Scalar>
void validate_bathtub(const BathtubProblem<Scalar>& p) {
  if (p.n < 1) throw std::invalid_argument("bathtub: n must be >= 1");
  if (!(p.s > Scalar(0) && p.s < Scalar(1)))
    throw std::invalid_argument("bathtub: s must lie in (0, 1)");
  if (!(p.alpha >= Scalar(0)) || !(p.beta >= Scalar(0)))
    throw std::invalid_argument("bathtub: weights must be nonnegative");
  if (!(p.alpha + p.beta > Scalar(0)))
    throw std::invalid_argument("bathtub: degenerate problem, alpha + beta = 0");
  if (!(p.m1 > Scalar(0)) || !(p.m2 > Scalar(0)))
    throw std::invalid_argument("bathtub: m1 and m2 must be positive");
}

// Moment of the filled ball of radius r.
template <class Scalar>
Scalar ball_moment(const BathtubProblem<Scalar>& p, Scalar r) {
  const Scalar surf = unit_sphere_area<Scalar>(p.n);
  return p.m1 * surf * (p.alpha * std::pow(r, Scalar(p.n) + 2) / (Scalar(p.n) + 2) +
                        p.beta * std::pow(r, Scalar(p.n) + 2 * p.s) / (Scalar(p.n) + 2 * p.s));
}

// Radius of the ball that spends the whole budget on one term alone.
template <class Scalar>
Scalar single_term_radius(const BathtubProblem<Scalar>& p, bool local_term) {
  const Scalar surf = unit_sphere_area<Scalar>(p.n);
  const Scalar order = local_term ? Scalar(p.n) + 2 : Scalar(p.n) + 2 * p.s;
  const Scalar weight = local_term ? p.alpha : p.beta;
  return std::pow(p.m2 * order / (p.m1 * surf * weight), 1 / order);
}

}  // namespace detail

// Unique R > 0 that spends the moment budget exactly.
template <class Scalar = double>
Scalar bathtub_radius(const BathtubProblem<Scalar>& p) {
  detail::validate_bathtub(p);
  if (p.beta == Scalar(0)) return detail::single_term_radius(p, true);
  if (p.alpha == Scalar(0)) return detail::single_term_radius(p, false);
  // Dropping either positive term shows R is below both single-term radii,
  // and the moment is strictly increasing in R: bisection is safe.
  Scalar hi = std::min(detail::single_term_radius(p, true), detail::single_term_radius(p, false));
  Scalar lo = Scalar(0);
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = (lo + hi) / 2;
    if (detail::ball_moment(p, mid) < p.m2) lo = mid; else hi = mid;
    if (hi - lo <= std::numeric_limits<Scalar>::epsilon() * hi) break;
  }
  return (lo + hi) / 2;
}

template <class Scalar = double>
BathtubSolution<Scalar> bathtub_bounds(const BathtubProblem<Scalar>& p) {
  detail::validate_bathtub(p);
  const Scalar r = bathtub_radius(p);
  const Scalar ball = unit_ball_volume<Scalar>(p.n);  // |S^{n-1}|/n
  const Scalar exact = p.m1 * ball * std::pow(r, Scalar(p.n));

  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  const Scalar r_local = p.alpha > Scalar(0) ? detail::single_term_radius(p, true) : inf;
  const Scalar r_nonlocal = p.beta > Scalar(0) ? detail::single_term_radius(p, false) : inf;
  const Scalar r_min = std::min(r_local, r_nonlocal);
  const Scalar r_max = std::isinf(r_local) ? r_nonlocal
                     : std::isinf(r_nonlocal) ? r_local
                     : std::max(r_local, r_nonlocal);

  BathtubBranch branch = BathtubBranch::interior;
  if (p.alpha == Scalar(0)) branch = BathtubBranch::nonlocal;
  else if (p.beta == Scalar(0)) branch = BathtubBranch::local;

  return {r, exact,
          p.m1 * ball * std::pow(r_min, Scalar(p.n)),
          p.m1 * ball * std::pow(r_max, Scalar(p.n)),
          branch};
}

// Radial step function: levels[j] on the shell breakpoints[j-1] <= |z| <
// breakpoints[j], with an implicit innermost radius 0; zero beyond the last
// breakpoint.
template <class Scalar = double>
struct RadialStepFunction {
  std::vector<Scalar> breakpoints;
  std::vector<Scalar> levels;
};

template <class Scalar = double>
struct BathtubCheck {
  Scalar mass;
  Scalar moment;
  bool admissible;
};

// Exact mass and moment of a radial step function via shell antiderivatives;
// used as the brute-force comparison oracle against exact_bound.
template <class Scalar = double>
BathtubCheck<Scalar> bathtub_oracle_check(const BathtubProblem<Scalar>& p,
                                          const RadialStepFunction<Scalar>& f) {
  detail::validate_bathtub(p);
  if (f.breakpoints.size() != f.levels.size())
    throw std::invalid_argument("bathtub oracle: breakpoints and levels must pair up");
  Scalar prev = Scalar(0);
  for (std::size_t j = 0; j < f.breakpoints.size(); ++j) {
    if (!(f.breakpoints[j] > prev))
      throw std::invalid_argument("bathtub oracle: breakpoints must be positive and increasing");
    if (!(f.levels[j] >= Scalar(0)) || !(f.levels[j] <= p.m1))
      throw std::invalid_argument("bathtub oracle: levels must lie in [0, m1]");
    prev = f.breakpoints[j];
  }

  const Scalar surf = unit_sphere_area<Scalar>(p.n);
  const auto shell = [&](Scalar power, Scalar r0, Scalar r1) {
    return (std::pow(r1, power) - std::pow(r0, power)) / power;
  };
  Scalar mass = 0, moment = 0;
  prev = Scalar(0);
  for (std::size_t j = 0; j < f.breakpoints.size(); ++j) {
    const Scalar r1 = f.breakpoints[j], lv = f.levels[j];
    mass += lv * shell(Scalar(p.n), prev, r1);
    moment += lv * (p.alpha * shell(Scalar(p.n) + 2, prev, r1) +
                    p.beta * shell(Scalar(p.n) + 2 * p.s, prev, r1));
    prev = r1;
  }
  mass *= surf;
  moment *= surf;
  return {mass, moment, moment <= p.m2 * (1 + Scalar(1e-12))};
}

}  // namespace mixlap
