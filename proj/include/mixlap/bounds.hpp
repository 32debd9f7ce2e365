#pragma once

// Closed-form spectral bounds for the Dirichlet problem of
// L = -a Laplace + b (-Laplace)^s on a domain of volume V, together with
// the Legendre-transform bridge from the Riesz-mean upper bound to the
// eigenvalue-sum lower bound.
//
// Sum bounds are for Sum_{i<=k} lambda_i; per-eigenvalue bounds divide by k
// using the monotonicity of the sequence.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>

#include "mixlap/dense.hpp"
#include "mixlap/specfun.hpp"

namespace mixlap {

template <class Scalar = double>
struct OperatorSpec {
  int n = 1;
  Scalar a = Scalar(1);
  Scalar b = Scalar(0);
  Scalar s = Scalar(0.5);
};

template <class Scalar = double>
struct DomainMeta {
  int n = 1;
  Scalar volume = Scalar(1);
};

// Admissibility of the coefficient pair. b > 0 needs only a >= 0 (the pure
// nonlocal operator is allowed); b < 0 additionally needs an embedding
// constant C with b > -a/C to keep the quadratic form positive.
enum class Regime { local, positive_b, negative_b };

template <class Scalar>
Regime classify_regime(const OperatorSpec<Scalar>& op,
                       std::optional<std::type_identity_t<Scalar>> c_e = {}) {
  if (op.n < 1) throw std::invalid_argument("operator: n must be >= 1");
  if (!(op.a >= Scalar(0))) throw std::invalid_argument("operator: a must be nonnegative");
  if (op.b != Scalar(0) && !(op.s > Scalar(0) && op.s < Scalar(1)))
    throw std::invalid_argument("operator: s must lie in (0, 1)");
  if (op.b > Scalar(0)) return Regime::positive_b;
  if (!(op.a > Scalar(0)))
    throw std::invalid_argument("operator: a must be positive when b <= 0");
  if (op.b == Scalar(0)) return Regime::local;
  if (!c_e || !(*c_e > Scalar(0)))
    throw std::invalid_argument("operator: negative b requires an embedding constant");
  if (!(op.b > -op.a / *c_e))
    throw std::invalid_argument("operator: b <= -a/C_E is outside the admissible range");
  return Regime::negative_b;
}

namespace detail {

template <class Scalar>
void validate_domain(const DomainMeta<Scalar>& d) {
  if (d.n < 1) throw std::invalid_argument("domain: n must be >= 1");
  if (!(d.volume > Scalar(0))) throw std::invalid_argument("domain: volume must be positive");
}

constexpr double kPi = 3.14159265358979323846;

// (Gamma(1 + n/2) / V)^(2t/n), the geometric factor shared by the bounds.
template <class Scalar>
Scalar geometry_power(int n, Scalar volume, Scalar t) {
  return std::exp(2 * t / Scalar(n) *
                  (log_gamma(Scalar(1) + Scalar(n) / 2) - std::log(volume)));
}

}  // namespace detail

// Leading-order growth law lambda_k ~ 4 pi^2 (omega_n V)^{-2/n} k^{2/n}.
template <class Scalar = double>
Scalar weyl_asymptotic(int k, const DomainMeta<Scalar>& d) {
  detail::validate_domain(d);
  if (k < 1) throw std::invalid_argument("weyl_asymptotic: k must be >= 1");
  const Scalar pi = Scalar(detail::kPi);
  const Scalar wn = unit_ball_volume<Scalar>(d.n);
  return 4 * pi * pi * std::pow(wn * d.volume, Scalar(-2) / d.n) *
         std::pow(Scalar(k), Scalar(2) / d.n);
}

// lambda_k >= 4 pi (Gamma(1 + n/2) k / V)^{2/n}; algebraically the same
// expression as weyl_asymptotic.
template <class Scalar = double>
Scalar polya_bound(int k, const DomainMeta<Scalar>& d) {
  detail::validate_domain(d);
  if (k < 1) throw std::invalid_argument("polya_bound: k must be >= 1");
  const Scalar pi = Scalar(detail::kPi);
  return 4 * pi *
         std::exp(Scalar(2) / d.n *
                  (log_gamma(Scalar(1) + Scalar(d.n) / 2) + std::log(Scalar(k)) -
                   std::log(d.volume)));
}

template <class Scalar = double>
struct RieszMeanCheck {
  Scalar lhs;  // Sum (cap - lambda_i)_+^sigma over the supplied spectrum
  Scalar rhs;  // Gamma(sigma+1) / ((4 pi)^{n/2} Gamma(sigma+n/2+1)) V cap^{n/2+sigma}
};

// Riesz-mean upper bound for the Dirichlet Laplacian. The inequality
// lhs <= rhs is a statement about pure-Laplacian spectra only; callers
// assert it in that regime.
template <class Scalar, class Derived>
RieszMeanCheck<Scalar> berezin_riesz_upper(Scalar lambda_cap, Scalar sigma,
                                           const DomainMeta<Scalar>& d,
                                           const Eigen::MatrixBase<Derived>& eigenvalues) {
  detail::validate_domain(d);
  if (!(sigma >= Scalar(1))) throw std::domain_error("berezin_riesz_upper: sigma must be >= 1");
  for (Eigen::Index i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] < eigenvalues[i - 1])
      throw std::invalid_argument("berezin_riesz_upper: eigenvalues must be ascending");
  }
  Scalar lhs = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const Scalar gap = lambda_cap - eigenvalues[i];
    if (gap > Scalar(0)) lhs += std::pow(gap, sigma);
  }
  const Scalar pi = Scalar(detail::kPi);
  const Scalar rhs = std::exp(log_gamma(sigma + 1) - Scalar(d.n) / 2 * std::log(4 * pi) -
                              log_gamma(sigma + Scalar(d.n) / 2 + 1)) *
                     d.volume * std::pow(lambda_cap, Scalar(d.n) / 2 + sigma);
  return {lhs, rhs};
}

// Sum_{i<=k} lambda_i >= n/(n+2) ((2 pi)^n / (omega_n V))^{2/n} k^{1+2/n}.
template <class Scalar = double>
Scalar liyau_classical(int k, const DomainMeta<Scalar>& d) {
  detail::validate_domain(d);
  if (k < 1) throw std::invalid_argument("liyau_classical: k must be >= 1");
  const Scalar pi = Scalar(detail::kPi);
  const Scalar wn = unit_ball_volume<Scalar>(d.n);
  return Scalar(d.n) / (d.n + 2) *
         std::pow(std::pow(2 * pi, Scalar(d.n)) / (wn * d.volume), Scalar(2) / d.n) *
         std::pow(Scalar(k), 1 + Scalar(2) / d.n);
}

// Fractional analogue: Sum_{i<=k} mu_i >= (4 pi)^s n/(n+2s)
// (Gamma(1+n/2)/V)^{2s/n} k^{1+2s/n} for the Dirichlet (-Laplace)^s.
template <class Scalar = double>
Scalar liyau_fractional(int k, Scalar s, const DomainMeta<Scalar>& d) {
  detail::validate_domain(d);
  if (k < 1) throw std::invalid_argument("liyau_fractional: k must be >= 1");
  if (!(s > Scalar(0) && s < Scalar(1)))
    throw std::domain_error("liyau_fractional: s must lie in (0, 1)");
  const Scalar pi = Scalar(detail::kPi);
  return std::pow(4 * pi, s) * Scalar(d.n) / (Scalar(d.n) + 2 * s) *
         detail::geometry_power(d.n, d.volume, s) * std::pow(Scalar(k), 1 + 2 * s / d.n);
}

// Eigenvalue-sum lower bound for the mixed operator. For b >= 0 the bound is
//   n k max{ 4 a pi/(n+2) (Gamma(1+n/2)/V)^{2/n} k^{2/n},
//            (4 pi)^s b/(n+2s) (Gamma(1+n/2)/V)^{2s/n} k^{2s/n} },
// and for -a/C_E < b < 0
//   n k (a + C_E b) max{ 4 pi/(n+2) (...) k^{2/n},
//                        (4 pi)^s/((n+2s) C_E) (...) k^{2s/n} }.
template <class Scalar = double>
Scalar mixed_bly_lower(int k, const OperatorSpec<Scalar>& op, const DomainMeta<Scalar>& d,
                       std::optional<std::type_identity_t<Scalar>> c_e = {}) {
  detail::validate_domain(d);
  if (k < 1) throw std::invalid_argument("mixed_bly_lower: k must be >= 1");
  if (op.n != d.n) throw std::invalid_argument("mixed_bly_lower: dimension mismatch");
  const Regime regime = classify_regime(op, c_e);
  const Scalar pi = Scalar(detail::kPi);
  const int n = d.n;
  const Scalar k2n = std::pow(Scalar(k), Scalar(2) / n);
  const Scalar local_core = 4 * pi / (n + 2) * detail::geometry_power(n, d.volume, Scalar(1)) * k2n;
  if (regime == Regime::local) return Scalar(n) * k * op.a * local_core;
  const Scalar k2sn = std::pow(Scalar(k), 2 * op.s / n);
  const Scalar nonlocal_core = std::pow(4 * pi, op.s) / (n + 2 * op.s) *
                               detail::geometry_power(n, d.volume, op.s) * k2sn;
  if (regime == Regime::positive_b) {
    return Scalar(n) * k * std::max(op.a * local_core, op.b * nonlocal_core);
  }
  const Scalar ce = *c_e;
  return Scalar(n) * k * (op.a + ce * op.b) * std::max(local_core, nonlocal_core / ce);
}

// lambda_k >= mixed_bly_lower(k)/k by monotonicity of the eigenvalues.
template <class Scalar = double>
Scalar per_eigenvalue_lower(int k, const OperatorSpec<Scalar>& op, const DomainMeta<Scalar>& d,
                            std::optional<std::type_identity_t<Scalar>> c_e = {}) {
  return mixed_bly_lower(k, op, d, c_e) / Scalar(k);
}

template <class Scalar = double>
struct PlanarFirstEigenvalueBound {
  Scalar value;  // the relaxed two-branch form actually quoted downstream
  Scalar sharp;  // the tighter max{} expression it relaxes
};

// n = 2, a = b = 1 special case of the first-eigenvalue bound:
// lambda_1 >= 2 pi V^{-1} for V <= 1 and 2 pi V^{-s} for V >= 1.
template <class Scalar = double>
PlanarFirstEigenvalueBound<Scalar> planar_first_eigenvalue_bound(Scalar volume, Scalar s) {
  if (!(volume > Scalar(0)))
    throw std::invalid_argument("planar_first_eigenvalue_bound: volume must be positive");
  if (!(s > Scalar(0) && s < Scalar(1)))
    throw std::domain_error("planar_first_eigenvalue_bound: s must lie in (0, 1)");
  const Scalar pi = Scalar(detail::kPi);
  const Scalar relaxed =
      volume <= Scalar(1) ? 2 * pi / volume : 2 * pi * std::pow(volume, -s);
  const Scalar sharp = 2 * std::max(pi / volume,
                                    std::pow(4 * pi, s) / (2 + 2 * s) * std::pow(volume, -s));
  return {relaxed, sharp};
}

// sup_{cap > 0} [ k cap - rhs(cap) ] with the sigma = 1 Riesz-mean rhs,
// located by bisecting the derivative of the strictly concave objective.
// By the Legendre-transform identity this equals liyau_classical(k, d).
template <class Scalar = double>
Scalar legendre_liyau_from_berezin(int k, const DomainMeta<Scalar>& d) {
  detail::validate_domain(d);
  if (k < 1) throw std::invalid_argument("legendre_liyau_from_berezin: k must be >= 1");
  const Scalar pi = Scalar(detail::kPi);
  const Scalar cb = std::exp(log_gamma(Scalar(2)) - Scalar(d.n) / 2 * std::log(4 * pi) -
                             log_gamma(Scalar(d.n) / 2 + 2)) * d.volume;
  const Scalar p = Scalar(d.n) / 2 + 1;
  const auto slope = [&](Scalar cap) { return Scalar(k) - cb * p * std::pow(cap, p - 1); };
  Scalar lo = Scalar(0), hi = Scalar(1);
  int guard = 0;
  while (slope(hi) > Scalar(0)) {
    hi *= 2;
    if (++guard > 2000) throw std::runtime_error("legendre_liyau_from_berezin: bracket failure");
  }
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = (lo + hi) / 2;
    if (slope(mid) > Scalar(0)) lo = mid; else hi = mid;
  }
  const Scalar cap = (lo + hi) / 2;
  return Scalar(k) * cap - cb * std::pow(cap, p);
}

}  // namespace mixlap
