#pragma once

// Small adaptive Simpson integrator used for the one-dimensional kernel
// integrals. Returns the value together with an accumulated error estimate
// (the usual |S_fine - S_coarse| / 15 Richardson bound summed over leaves).

#include <cmath>
#include <stdexcept>

namespace mixlap {

template <class Scalar = double>
struct QuadResult {
  Scalar value = Scalar(0);
  Scalar error = Scalar(0);
  bool converged = true;
};

namespace detail {

template <class Scalar, class F>
QuadResult<Scalar> simpson_rec(const F& f, Scalar a, Scalar b, Scalar fa, Scalar fm, Scalar fb,
                               Scalar whole, Scalar tol, int depth) {
  const Scalar m = (a + b) / 2;
  const Scalar lm = (a + m) / 2, rm = (m + b) / 2;
  const Scalar flm = f(lm), frm = f(rm);
  const Scalar left = (m - a) / 6 * (fa + 4 * flm + fm);
  const Scalar right = (b - m) / 6 * (fm + 4 * frm + fb);
  const Scalar delta = left + right - whole;
  if (std::abs(delta) <= 15 * tol || depth <= 0) {
    return {left + right + delta / 15, std::abs(delta) / 15, std::abs(delta) <= 15 * tol};
  }
  const auto L = simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1);
  const auto R = simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
  return {L.value + R.value, L.error + R.error, L.converged && R.converged};
}

}  // namespace detail

template <class Scalar, class F>
QuadResult<Scalar> integrate_adaptive(const F& f, Scalar a, Scalar b, Scalar abs_tol,
                                      int max_depth = 48) {
  if (!(b > a)) return {Scalar(0), Scalar(0), true};
  const Scalar fa = f(a), fb = f(b), m = (a + b) / 2, fm = f(m);
  const Scalar whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// Two-pass wrapper: a cheap first pass fixes the magnitude, the second pass
// targets rel_tol relative to it. Avoids guessing absolute scales.
template <class Scalar, class F>
QuadResult<Scalar> integrate_to_relative(const F& f, Scalar a, Scalar b, Scalar rel_tol,
                                         int max_depth = 48) {
  const auto rough = integrate_adaptive(f, a, b, Scalar(1e-6), 24);
  const Scalar scale = std::max(Scalar(1), std::abs(rough.value));
  return integrate_adaptive(f, a, b, rel_tol * scale, max_depth);
}

}  // namespace mixlap
