#pragma once

// Uniform grids on an interval, the Dirichlet 3-point Laplacian, and a dense
// discretization of the integral fractional Laplacian with zero extension
// outside the interval. Values of a grid function are nodal samples; between
// nodes the function is the piecewise-linear interpolant, identically zero
// beyond the endpoint nodes.
//
// Fractional scheme: the singular integral is split per grid cell. On the
// first cell the second difference of a smooth function is modelled by its
// parabolic term (the piecewise-linear interpolant alone would make the
// integral diverge for s >= 1/2); every other cell integrates the linear
// interpolant against exact kernel moments, and the exterior tail is analytic
// because the extension vanishes. The result is a symmetric Toeplitz matrix
// scaled by c_{1,s} h^{-2s}.

#include <mixlap/bounds.hpp>
#include <mixlap/dense.hpp>
#include <mixlap/quadrature.hpp>
#include <mixlap/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace mixlap {

template <class Scalar>
struct Grid1D {
  Scalar x_lo = Scalar(0);
  Scalar x_hi = Scalar(1);
  int n_interior = 0;
  Scalar h = Scalar(0);

  Scalar node(int j) const { return x_lo + Scalar(j + 1) * h; }  // j = 0 .. n_interior-1
  Scalar length() const { return x_hi - x_lo; }
};

template <class Scalar>
Grid1D<Scalar> make_grid(Scalar x_lo, Scalar x_hi, int n_interior) {
  if (!(x_lo < x_hi)) throw std::invalid_argument("make_grid: endpoints out of order");
  if (n_interior < 2) throw std::invalid_argument("make_grid: need at least two interior nodes");
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi))
    throw std::invalid_argument("make_grid: endpoints must be finite");
  const Scalar h = (x_hi - x_lo) / Scalar(n_interior + 1);
  return {x_lo, x_hi, n_interior, h};
}

namespace detail {

// Kernel moments over the unit-spaced cell [m, m+1] in the scaled variable:
//   cell_mass(m)         = int_m^{m+1} t^{-1-2s} dt
//   cell_first_moment(m) = int_m^{m+1} (t - m) t^{-1-2s} dt
// Written via expm1/log1p so nothing degenerates at s = 1/2 or cancels for
// large m; beyond kSeriesFrom the first moment switches to a binomial series
// in 1/m, which avoids the subtraction of two nearly equal integrals.
inline constexpr int kSeriesFrom = 64;

template <class Scalar>
Scalar cell_mass(int m, Scalar s) {
  const Scalar mm(m);
  return -std::pow(mm, -2 * s) * std::expm1(-2 * s * std::log1p(1 / mm)) / (2 * s);
}

template <class Scalar>
Scalar cell_first_moment(int m, Scalar s) {
  const Scalar mm(m);
  if (m >= kSeriesFrom) {
    // int_0^1 tau (m+tau)^{-1-2s} dtau, binomial expansion of (1+tau/m)^{-1-2s}
    Scalar coef = Scalar(1), sum = Scalar(0), mk = Scalar(1);
    for (int k = 0; k <= 12; ++k) {
      sum += coef * mk / Scalar(k + 2);
      coef *= -(2 * s + Scalar(k + 1)) / Scalar(k + 1);
      mk /= mm;
    }
    return std::pow(mm, -1 - 2 * s) * sum;
  }
  const Scalar e = (1 - 2 * s) * std::log1p(1 / mm);
  const Scalar growth = (e == Scalar(0)) ? Scalar(1) : std::expm1(e) / e;
  const Scalar plain = std::pow(mm, 1 - 2 * s) * std::log1p(1 / mm) * growth;  // int t^{-2s}
  return plain - mm * cell_mass(m, s);
}

// Interaction weight between nodes m apart (m >= 2): the hat-weighted kernel
// average -int_{-1}^{1} (1-|r|) (m+r)^{-1-2s} dr.
template <class Scalar>
Scalar toeplitz_weight(int m, Scalar s) {
  const Scalar mm(m);
  if (m >= kSeriesFrom) {
    Scalar coef = Scalar(1), sum = Scalar(0), mk = Scalar(1);
    for (int k = 0; k <= 12; ++k) {
      if (k % 2 == 0) sum += coef * mk * 2 / (Scalar(k + 1) * Scalar(k + 2));
      coef *= -(2 * s + Scalar(k + 1)) / Scalar(k + 1);
      mk /= mm;
    }
    return -std::pow(mm, -1 - 2 * s) * sum;
  }
  return -(cell_mass(m, s) - cell_first_moment(m, s)) - cell_first_moment(m - 1, s);
}

template <class Scalar>
void check_fractional_order(Scalar s) {
  if (!(s > Scalar(0)) || !(s < Scalar(1)))
    throw std::domain_error("fractional order must lie in (0, 1)");
}

// First column of the unscaled Toeplitz matrix.
template <class Scalar>
std::vector<Scalar> fractional_stencil(int n, Scalar s) {
  const Scalar q0 = 1 / (2 - 2 * s);  // parabolic model on the singular cell
  std::vector<Scalar> t(static_cast<std::size_t>(n));
  t[0] = 2 * q0 + 1 / s;
  if (n > 1) t[1] = -q0 - cell_mass(1, s) + cell_first_moment(1, s);
  for (int m = 2; m < n; ++m) t[static_cast<std::size_t>(m)] = toeplitz_weight(m, s);
  return t;
}

}  // namespace detail

template <class Scalar>
Mat<Scalar> laplacian_matrix(const Grid1D<Scalar>& g) {
  const int n = g.n_interior;
  const Scalar w = 1 / (g.h * g.h);
  Mat<Scalar> a = Mat<Scalar>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2 * w;
    if (i + 1 < n) {
      a(i, i + 1) = -w;
      a(i + 1, i) = -w;
    }
  }
  return a;
}

template <class Scalar>
Mat<Scalar> fractional_matrix(const Grid1D<Scalar>& g, Scalar s) {
  detail::check_fractional_order(s);
  const int n = g.n_interior;
  const Scalar scale =
      normalization_constant<Scalar>(1, s).value * std::pow(g.h, -2 * s);
  const auto t = detail::fractional_stencil(n, s);
  Mat<Scalar> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * t[static_cast<std::size_t>(std::abs(i - j))];
  return a;
}

// Kernel mass each node sees beyond the interval, where the zero extension
// makes the integrand proportional to the nodal value:
//   X_j = c_{1,s} [(x_j - x_lo)^{-2s} + (x_hi - x_j)^{-2s}] / (2s).
template <class Scalar>
Vec<Scalar> exterior_tail_weights(const Grid1D<Scalar>& g, Scalar s) {
  detail::check_fractional_order(s);
  const Scalar c = normalization_constant<Scalar>(1, s).value;
  Vec<Scalar> x(g.n_interior);
  for (int j = 0; j < g.n_interior; ++j) {
    const Scalar dl = g.node(j) - g.x_lo, dr = g.x_hi - g.node(j);
    x[j] = c * (std::pow(dl, -2 * s) + std::pow(dr, -2 * s)) / (2 * s);
  }
  return x;
}

// Row sums of fractional_matrix in closed form. Applying the matrix to the
// all-ones vector probes the interpolant that ramps to zero across the two
// boundary cells, so each side contributes its exterior tail plus one ramp
// moment (the first moment of the cell carrying the ramp; for the node next
// to the boundary the ramp sits in the singular cell and the parabolic model
// turns it into the q0 weight).
template <class Scalar>
Vec<Scalar> fractional_row_sums(const Grid1D<Scalar>& g, Scalar s) {
  detail::check_fractional_order(s);
  const int n = g.n_interior;
  const Scalar c = normalization_constant<Scalar>(1, s).value;
  const Scalar scale = c * std::pow(g.h, -2 * s);
  const Scalar q0 = 1 / (2 - 2 * s);
  const auto ramp = [&](int m) {
    return m > 1 ? detail::cell_first_moment(m - 1, s) : q0;
  };
  Vec<Scalar> r(n);
  for (int j = 1; j <= n; ++j) {
    const int m_lo = j, m_hi = n + 1 - j;
    const Scalar dl = Scalar(m_lo) * g.h, dr = Scalar(m_hi) * g.h;
    r[j - 1] = scale * (ramp(m_lo) + ramp(m_hi)) +
               c * (std::pow(dl, -2 * s) + std::pow(dr, -2 * s)) / (2 * s);
  }
  return r;
}

template <class Scalar>
Mat<Scalar> mixed_matrix(const Grid1D<Scalar>& g, const OperatorSpec<Scalar>& op) {
  if (op.n != 1) throw std::invalid_argument("mixed_matrix: grid and operator dimension differ");
  if (op.b == Scalar(0)) return op.a * laplacian_matrix(g);
  Mat<Scalar> a = op.b * fractional_matrix(g, op.s);
  if (op.a != Scalar(0)) a += op.a * laplacian_matrix(g);
  return a;
}

// Direct adaptive-quadrature evaluation of the operator at one point, used as
// an assembly-independent oracle. The singular ball |y| < delta is handled by
// the second-order Taylor term, the far field |y| > Y0 (both arguments beyond
// the support) analytically, and the middle range numerically with the
// integrand split where x +- y crosses a support edge.
template <class Scalar>
Scalar apply_fractional_pointwise(const std::function<Scalar(Scalar)>& u,
                                  Scalar support_lo, Scalar support_hi, Scalar x, Scalar s,
                                  std::optional<std::type_identity_t<Scalar>> d2u = {}) {
  detail::check_fractional_order(s);
  if (!(support_lo < support_hi))
    throw std::invalid_argument("apply_fractional_pointwise: empty support");
  const Scalar d_lo = std::abs(x - support_lo), d_hi = std::abs(support_hi - x);
  const Scalar y0 = std::max(d_lo, d_hi);
  const Scalar d_edge = std::min(d_lo, d_hi);
  if (!(d_edge > Scalar(0)))
    throw std::invalid_argument("apply_fractional_pointwise: x sits on a support edge");

  const Scalar delta = std::min({Scalar(1e-4), y0 / 4, d_edge / 2});
  Scalar second;
  if (d2u) {
    second = *d2u;
  } else {
    const auto diff2 = [&](Scalar step) {
      return (u(x + step) - 2 * u(x) + u(x - step)) / (step * step);
    };
    const Scalar step = std::max(delta, Scalar(1e-5));
    second = (4 * diff2(step / 2) - diff2(step)) / 3;  // Richardson-corrected
  }
  const Scalar near = -second * std::pow(delta, 2 - 2 * s) / (2 - 2 * s);

  const auto integrand = [&](Scalar y) {
    return (2 * u(x) - u(x + y) - u(x - y)) * std::pow(y, -1 - 2 * s);
  };
  std::vector<Scalar> cuts{delta};
  for (Scalar c : {support_hi - x, x - support_lo, x - support_hi, support_lo - x})
    if (c > delta && c < y0) cuts.push_back(c);
  cuts.push_back(y0);
  std::sort(cuts.begin(), cuts.end());

  Scalar mid = Scalar(0), err = Scalar(0), mag = Scalar(0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto q = integrate_to_relative<Scalar>(integrand, cuts[i], cuts[i + 1], Scalar(1e-9));
    mid += q.value;
    err += q.error;
    mag += std::abs(q.value);
  }

  const Scalar far = 2 * u(x) * std::pow(y0, -2 * s) / (2 * s);
  // Segments may stop refining once the second difference of u sinks below
  // roundoff; the value is still fine as long as the accumulated estimate
  // meets the 1e-6 relative target. Only a genuine miss is an error.
  const Scalar scale = std::abs(near) + mag + std::abs(far);
  if (!(err <= Scalar(1e-6) * scale)) {
    std::ostringstream what;
    what << "apply_fractional_pointwise: 1e-6 relative accuracy not reached, achieved about "
         << std::scientific << std::setprecision(2) << static_cast<double>(err / scale);
    throw std::runtime_error(what.str());
  }
  return normalization_constant<Scalar>(1, s).value * (near + mid + far);
}

enum class GagliardoConvention { full_space_normalized, omega_only_unnormalized };

// Double-difference quadratic form of the discretization, accumulated pair by
// pair: sum_{i<j} w_ij (u_i - u_j)(v_i - v_j) plus the diagonal mass each node
// keeps for itself. With the full row sums this reproduces h u'L_s v; dropping
// the exterior tails and the kernel prefactor restricts the interaction to
// the interval in the unnormalized convention.
template <class Scalar>
Scalar gagliardo_form(const Grid1D<Scalar>& g, const Vec<Scalar>& u, const Vec<Scalar>& v,
                      Scalar s, GagliardoConvention convention) {
  detail::check_fractional_order(s);
  const int n = g.n_interior;
  if (u.size() != n || v.size() != n)
    throw std::invalid_argument("gagliardo_form: vector length does not match the grid");
  const Scalar c = normalization_constant<Scalar>(1, s).value;
  const Scalar scale = c * std::pow(g.h, -2 * s);
  const auto t = detail::fractional_stencil(n, s);

  Scalar pairs = Scalar(0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      pairs += -scale * t[static_cast<std::size_t>(j - i)] * (u[i] - u[j]) * (v[i] - v[j]);

  Vec<Scalar> diag = fractional_row_sums(g, s);
  if (convention == GagliardoConvention::omega_only_unnormalized)
    diag -= exterior_tail_weights(g, s);
  Scalar mass = Scalar(0);
  for (int i = 0; i < n; ++i) mass += u[i] * v[i] * diag[i];

  const Scalar form = g.h * (pairs + mass);
  return convention == GagliardoConvention::full_space_normalized ? form : 2 / c * form;
}

}  // namespace mixlap
