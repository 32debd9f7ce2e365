#pragma once

#include <Eigen/Dense>

namespace mixlap {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Dense symmetric matrices are stored as plain square matrices; every
// assembly routine in this library fills both triangles identically, so
// A == A.transpose() holds exactly, not just up to roundoff.
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace mixlap
