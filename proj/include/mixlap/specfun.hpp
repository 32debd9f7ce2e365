#pragma once

// Gamma-function helpers plus the normalization constant of the integral
// fractional Laplacian,
//
//   c(n, s) = [ int_{R^n} (1 - cos z_1) / |z|^{n+2s} dz ]^{-1}.
//
// The n-dimensional integral is reduced to a single radial one:
//
//   I(n, s) = K(n, s) * J(s),
//   K(n, s) = pi^{(n-1)/2} Gamma(s + 1/2) / Gamma((n + 2s)/2),
//   J(s)    = 2 * int_0^inf (1 - cos t) t^{-1-2s} dt.
//
// K carries the angular average of (1 - cos(r omega_1)) over the sphere and
// is evaluated in closed form; J is computed with a Taylor series on
// [0, delta] (the hypersingular part), adaptive quadrature on [delta, T],
// and an integration-by-parts series for the oscillatory tail beyond T.

#include <cmath>
#include <stdexcept>
#include <string>

#include "mixlap/quadrature.hpp"

namespace mixlap {

template <class Scalar = double>
Scalar log_gamma(Scalar x) {
  if (!(x > Scalar(0))) throw std::domain_error("log_gamma: x must be positive");
  return std::lgamma(x);
}

template <class Scalar = double>
Scalar unit_ball_volume(int n) {
  if (n < 1) throw std::domain_error("unit_ball_volume: n must be >= 1");
  const Scalar half_n = Scalar(n) / 2;
  const Scalar pi = Scalar(3.14159265358979323846L);
  return std::exp(half_n * std::log(pi) - log_gamma(half_n + 1));
}

template <class Scalar = double>
Scalar unit_sphere_area(int n) {
  if (n < 1) throw std::domain_error("unit_sphere_area: n must be >= 1");
  const Scalar half_n = Scalar(n) / 2;
  const Scalar pi = Scalar(3.14159265358979323846L);
  return 2 * std::exp(half_n * std::log(pi) - log_gamma(half_n));
}

template <class Scalar = double>
struct KernelConstant {
  int n = 1;
  Scalar s = Scalar(0.5);
  Scalar value = Scalar(0);
  Scalar quadrature_error_estimate = Scalar(0);
};

namespace detail {

// J(s) = 2 int_0^inf (1 - cos t) t^{-1-2s} dt with a certified error bound.
template <class Scalar>
QuadResult<Scalar> radial_kernel_integral(Scalar s) {
  const Scalar pi = Scalar(3.14159265358979323846L);
  const Scalar delta = Scalar(1e-3);
  const Scalar cut = Scalar(50);

  // [0, delta]: 1 - cos t = sum_{k>=1} (-1)^{k+1} t^{2k}/(2k)!, integrated
  // termwise against t^{-1-2s}. Alternating with decaying terms, so the
  // first omitted term bounds the truncation.
  Scalar near = 0, near_err = 0, factorial = 1;
  for (int k = 1; k <= 16; ++k) {
    factorial *= Scalar((2 * k - 1) * (2 * k));
    const Scalar term = (k % 2 ? Scalar(1) : Scalar(-1)) *
                        std::pow(delta, Scalar(2 * k) - 2 * s) / (factorial * (Scalar(2 * k) - 2 * s));
    near += term;
    near_err = std::abs(term);
    if (near_err < Scalar(1e-20) * std::abs(near)) break;
  }

  // [delta, cut]: adaptive quadrature, split at multiples of pi to keep the
  // oscillation tame. 2 sin^2(t/2) avoids the 1 - cos cancellation.
  const auto f = [s](Scalar t) {
    const Scalar sh = std::sin(t / 2);
    return 2 * sh * sh * std::pow(t, Scalar(-1) - 2 * s);
  };
  Scalar mid = 0, mid_err = 0;
  Scalar left = delta;
  for (int m = 1; left < cut; ++m) {
    const Scalar right = std::min(cut, Scalar(m) * pi);
    if (right <= left) continue;
    const auto piece = integrate_to_relative(f, left, right, Scalar(1e-13));
    mid += piece.value;
    mid_err += piece.error;
    left = right;
  }

  // [cut, inf): int (1 - cos t) t^{-1-2s} dt = cut^{-2s}/(2s) - C(cut) with
  // C(cut) = int_cut^inf cos t * t^{-1-2s} dt expanded by repeated
  // integration by parts; terms decay like (nu)_j / cut^{nu+j}.
  const Scalar nu = 1 + 2 * s;
  Scalar c_tail = 0, coef = 1, order = nu, last = 0;
  bool cosine = true;
  for (int j = 0; j < 14; ++j) {
    if (cosine) {
      last = coef * (-std::sin(cut)) * std::pow(cut, -order);
      coef *= order;
    } else {
      last = coef * std::cos(cut) * std::pow(cut, -order);
      coef *= -order;
    }
    c_tail += last;
    cosine = !cosine;
    order += 1;
  }
  const Scalar tail = std::pow(cut, -2 * s) / (2 * s) - c_tail;
  const Scalar tail_err = std::abs(last);

  return {2 * (near + mid + tail), 2 * (near_err + mid_err + tail_err), true};
}

}  // namespace detail

// Reciprocal of the kernel integral, from the integral definition itself.
// Throws if the quadrature cannot certify 1e-8 relative accuracy.
template <class Scalar = double>
KernelConstant<Scalar> normalization_constant(int n, Scalar s) {
  if (n < 1) throw std::domain_error("normalization_constant: n must be >= 1");
  if (!(s > Scalar(0) && s < Scalar(1)))
    throw std::domain_error("normalization_constant: s must lie in (0, 1)");
  const Scalar pi = Scalar(3.14159265358979323846L);
  const auto radial = detail::radial_kernel_integral(s);
  const Scalar angular = std::exp(Scalar(n - 1) / 2 * std::log(pi) +
                                  log_gamma(s + Scalar(0.5)) -
                                  log_gamma((Scalar(n) + 2 * s) / 2));
  const Scalar integral = angular * radial.value;
  const Scalar value = 1 / integral;
  const Scalar err = value * (radial.error / radial.value);
  if (!(err <= Scalar(1e-8) * value)) {
    throw std::runtime_error("normalization_constant: quadrature reached only " +
                             std::to_string(err / value) + " relative accuracy");
  }
  return {n, s, value, err};
}

}  // namespace mixlap
