#pragma once

// Discrete estimate of the constant relating the two Dirichlet energies on a
// grid: mu_max is the largest generalized eigenvalue of the pencil (G, K)
// where G is the fractional quadratic form (in either convention) and K the
// local stiffness form. Maximizing over grid functions only, the estimate
// sits below the continuum constant for the same interval.

#include <mixlap/dense.hpp>
#include <mixlap/discretize.hpp>
#include <mixlap/eigensolve.hpp>

#include <cmath>
#include <stdexcept>

namespace mixlap {

template <class Scalar>
struct EmbeddingEstimate {
  Grid1D<Scalar> grid;
  Scalar s = Scalar(0);
  GagliardoConvention convention = GagliardoConvention::full_space_normalized;
  Scalar mu_max = Scalar(0);
  Vec<Scalar> extremizer;
};

namespace detail {

// Gram matrix of gagliardo_form on the nodal basis, in closed form: off the
// diagonal only the pair term survives, on the diagonal the exterior tail is
// kept or dropped by convention.
template <class Scalar>
Mat<Scalar> gagliardo_gram(const Grid1D<Scalar>& g, Scalar s, GagliardoConvention convention) {
  Mat<Scalar> gram = g.h * fractional_matrix(g, s);
  if (convention == GagliardoConvention::omega_only_unnormalized) {
    const Vec<Scalar> tails = exterior_tail_weights(g, s);
    gram.diagonal() -= g.h * tails;
    gram *= 2 / normalization_constant<Scalar>(1, s).value;
  }
  return gram;
}

}  // namespace detail

template <class Scalar>
EmbeddingEstimate<Scalar> discrete_embedding_constant(
    const Grid1D<Scalar>& g, Scalar s,
    GagliardoConvention convention = GagliardoConvention::full_space_normalized) {
  detail::check_fractional_order(s);
  const Mat<Scalar> gram = detail::gagliardo_gram(g, s, convention);
  const Mat<Scalar> stiffness = g.h * laplacian_matrix(g);
  const auto top = generalized_symmetric_eigen(gram, stiffness, Extremal::largest);

  EmbeddingEstimate<Scalar> out{g, s, convention, top.value, top.vector};
  if (!(out.mu_max > Scalar(0)))
    throw std::runtime_error("discrete_embedding_constant: nonpositive estimate");
  const Vec<Scalar>& v = out.extremizer;
  const Scalar quotient = v.dot(gram * v) / v.dot(stiffness * v);
  if (!(std::abs(quotient - out.mu_max) <= Scalar(1e-8) * out.mu_max))
    throw std::runtime_error("discrete_embedding_constant: extremizer fails to attain the value");
  return out;
}

template <class Scalar>
struct AdmissibleRange {
  Scalar b_lo = Scalar(0);  // open lower endpoint for the nonlocal weight
  bool certificate = false;  // positive definiteness verified just inside
};

template <class Scalar>
AdmissibleRange<Scalar> admissible_b_range(const Grid1D<Scalar>& g, Scalar s, Scalar a) {
  if (!(a > Scalar(0))) throw std::invalid_argument("admissible_b_range: a must be positive");
  const auto est = discrete_embedding_constant(g, s);
  AdmissibleRange<Scalar> out;
  out.b_lo = -a / est.mu_max;
  const OperatorSpec<Scalar> probe{1, a, Scalar(0.99) * out.b_lo, s};
  out.certificate = is_positive_definite(mixed_matrix(g, probe));
  return out;
}

}  // namespace mixlap
