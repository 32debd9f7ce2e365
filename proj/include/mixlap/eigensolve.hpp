#pragma once

// Dense symmetric and generalized symmetric eigensolvers with certified
// output: every solve checks its residuals and the orthonormality of the
// returned vectors against fixed tolerances and throws instead of returning
// silently degraded results. Column signs are fixed (first sizable entry
// positive) so repeated runs are reproducible.

#include <mixlap/dense.hpp>
#include <mixlap/discretize.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mixlap {

template <class Scalar>
struct RayleighComponents {
  Scalar local_part = Scalar(0);
  Scalar nonlocal_part = Scalar(0);
};

template <class Scalar>
struct Spectrum {
  Vec<Scalar> eigenvalues;                // ascending
  Mat<Scalar> eigenvectors;               // orthonormal columns, one per eigenvalue
  Vec<Scalar> residual_norms;             // ||A v - lambda v||_2 per pair
  std::vector<RayleighComponents<Scalar>> rayleigh_components;  // filled for mixed operators
};

enum class Extremal { largest, smallest };

template <class Scalar>
struct GeneralizedPair {
  Scalar value = Scalar(0);
  Vec<Scalar> vector;
};

namespace detail {

template <class Scalar>
void fix_column_signs(Mat<Scalar>& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, j)) > Scalar(1e-8)) {
        if (v(i, j) < Scalar(0)) v.col(j) = -v.col(j);
        break;
      }
    }
  }
}

template <class Scalar>
void fix_sign(Vec<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > Scalar(1e-8)) {
      if (v[i] < Scalar(0)) v = -v;
      return;
    }
  }
}

}  // namespace detail

template <class Scalar>
Spectrum<Scalar> symmetric_eigen(const Mat<Scalar>& a, int m) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("symmetric_eigen: matrix not square");
  if (m < 1 || m > n) throw std::invalid_argument("symmetric_eigen: invalid pair count");

  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigen: iteration failed to converge");

  Spectrum<Scalar> out;
  out.eigenvalues = solver.eigenvalues().head(m);
  out.eigenvectors = solver.eigenvectors().leftCols(m);
  detail::fix_column_signs(out.eigenvectors);

  const Scalar a_norm = a.norm();
  const Scalar residual_cap = Scalar(1e-8) * std::max(a_norm, Scalar(1e-300));
  out.residual_norms.resize(m);
  for (int k = 0; k < m; ++k) {
    out.residual_norms[k] =
        (a * out.eigenvectors.col(k) - out.eigenvalues[k] * out.eigenvectors.col(k)).norm();
    if (!(out.residual_norms[k] <= residual_cap))
      throw std::runtime_error("symmetric_eigen: residual certification failed");
  }
  const Mat<Scalar> gram = out.eigenvectors.transpose() * out.eigenvectors;
  const Scalar ortho_dev =
      (gram - Mat<Scalar>::Identity(m, m)).cwiseAbs().maxCoeff();
  if (!(ortho_dev <= Scalar(1e-8)))
    throw std::runtime_error("symmetric_eigen: eigenvectors lost orthonormality");
  return out;
}

template <class Scalar>
GeneralizedPair<Scalar> generalized_symmetric_eigen(const Mat<Scalar>& a, const Mat<Scalar>& b,
                                                    Extremal which) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n)
    throw std::invalid_argument("generalized_symmetric_eigen: dimension mismatch");

  Eigen::LLT<Mat<Scalar>> llt(b);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("generalized_symmetric_eigen: right-hand matrix not positive definite");

  // Reduce A v = mu B v to the standard problem for C = L^{-1} A L^{-T}.
  // (Fresh destinations: the triangular solves must not alias their input.)
  const Mat<Scalar> half = llt.matrixL().solve(a);
  Mat<Scalar> c = llt.matrixL().solve(half.transpose());
  c = ((c + c.transpose()) / 2).eval();

  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(c);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("generalized_symmetric_eigen: iteration failed to converge");

  const Eigen::Index pick = which == Extremal::largest ? n - 1 : 0;
  GeneralizedPair<Scalar> out;
  out.value = solver.eigenvalues()[pick];
  Vec<Scalar> w = solver.eigenvectors().col(pick);
  out.vector = llt.matrixU().solve(w);
  out.vector.normalize();
  detail::fix_sign(out.vector);

  const Scalar residual = (a * out.vector - out.value * (b * out.vector)).norm();
  const Scalar cap = Scalar(1e-8) * (a.norm() + std::abs(out.value) * b.norm());
  if (!(residual <= cap))
    throw std::runtime_error("generalized_symmetric_eigen: residual certification failed");
  return out;
}

template <class Scalar>
bool is_positive_definite(const Mat<Scalar>& a) {
  Eigen::LLT<Mat<Scalar>> llt(a);
  return llt.info() == Eigen::Success;
}

// Spectrum of a L + b L_s on a grid, with each eigenvalue split into its two
// Rayleigh parts D_i = a v'L v and G_i = b v'L_s v. The split is certified to
// recombine: lambda_i = D_i + G_i.
template <class Scalar>
Spectrum<Scalar> mixed_spectrum(const Grid1D<Scalar>& g, const OperatorSpec<Scalar>& op, int m) {
  if (op.n != 1) throw std::invalid_argument("mixed_spectrum: grid and operator dimension differ");
  const Mat<Scalar> local = laplacian_matrix(g);
  Mat<Scalar> a = op.a * local;
  Mat<Scalar> nonlocal;
  if (op.b != Scalar(0)) {
    nonlocal = fractional_matrix(g, op.s);
    a += op.b * nonlocal;
  }

  Spectrum<Scalar> out = symmetric_eigen(a, m);
  out.rayleigh_components.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const Vec<Scalar> v = out.eigenvectors.col(k);
    RayleighComponents<Scalar> parts;
    parts.local_part = op.a * v.dot(local * v);
    parts.nonlocal_part = op.b == Scalar(0) ? Scalar(0) : op.b * v.dot(nonlocal * v);
    const Scalar recombined = parts.local_part + parts.nonlocal_part;
    const Scalar scale = std::max(std::abs(out.eigenvalues[k]), Scalar(1e-12) * a.norm());
    if (!(std::abs(recombined - out.eigenvalues[k]) <= Scalar(1e-8) * scale))
      throw std::runtime_error("mixed_spectrum: Rayleigh split failed to recombine");
    out.rayleigh_components.push_back(parts);
  }
  return out;
}

}  // namespace mixlap
