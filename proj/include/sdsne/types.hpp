#pragma once

#include <Eigen/Dense>

namespace sdsne {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Largest |a_ij - a_ji|; zero for exactly symmetric input.
template <typename Derived>
typename Derived::Scalar max_asymmetry(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0) return Scalar(0);
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace sdsne
