#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "sdsne/error.hpp"
#include "sdsne/types.hpp"

namespace sdsne {

/// Degrees below this are clamped before the inverse square root.
inline constexpr double kDegreeFloor = 1e-12;

/// Default Gaussian kernel width.
inline constexpr double kDefaultSigma = 0.5;

/// A symmetric nonnegative affinity matrix together with its row-sum degrees
/// and the symmetric normalization D^{-1/2} A D^{-1/2}.
///
/// Nodes whose degree fell below kDegreeFloor are listed in degenerate_nodes;
/// their normalized rows and columns are zero (or numerically negligible).
template <typename Scalar>
struct TransitionGraph {
  Mat<Scalar> affinity;
  Vec<Scalar> degrees;
  Mat<Scalar> normalized;
  std::vector<Index> degenerate_nodes;

  Index size() const { return affinity.rows(); }
  bool degenerate() const { return !degenerate_nodes.empty(); }
};

namespace detail {

template <typename Scalar>
Scalar symmetry_tolerance(const Mat<Scalar>& a) {
  const Scalar scale = a.size() == 0 ? Scalar(1) : std::max<Scalar>(Scalar(1), a.cwiseAbs().maxCoeff());
  return Scalar(1e-10) * scale;
}

template <typename Scalar>
void require_square(const Mat<Scalar>& a, const char* what) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << what << " is " << a.rows() << "x" << a.cols() << ", expected square";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

template <typename Scalar>
void require_symmetric(const Mat<Scalar>& a, const char* what) {
  require_square(a, what);
  const Scalar asym = max_asymmetry(a);
  if (asym > symmetry_tolerance(a)) {
    std::ostringstream os;
    os << what << " is not symmetric, max |a_ij - a_ji| = " << asym;
    throw Error(ErrorKind::AsymmetricInput, os.str());
  }
}

/// Inverse square roots of the clamped row sums. Also reports which rows were
/// clamped. No validation: the model's objective calls this on matrices that
/// are only approximately symmetric during finite-difference probing.
template <typename Scalar>
Vec<Scalar> inv_sqrt_degrees(const Mat<Scalar>& a, Vec<Scalar>& degrees, std::vector<Index>* clamped) {
  degrees = a.rowwise().sum();
  Vec<Scalar> s(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    if (degrees(i) < Scalar(kDegreeFloor)) {
      if (clamped) clamped->push_back(i);
      s(i) = Scalar(1) / std::sqrt(Scalar(kDegreeFloor));
    } else {
      s(i) = Scalar(1) / std::sqrt(degrees(i));
    }
  }
  return s;
}

/// normalized(i,j) = (s_i s_j) a_ij. The product s_i s_j commutes exactly, so
/// an exactly symmetric input yields an exactly symmetric output.
template <typename Scalar>
Mat<Scalar> scale_symmetric(const Mat<Scalar>& a, const Vec<Scalar>& s) {
  Mat<Scalar> out(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) out(i, j) = (s(i) * s(j)) * a(i, j);
  return out;
}

}  // namespace detail

/// D^{-1/2} A D^{-1/2} with D = diag(row sums of A), degrees clamped at
/// kDegreeFloor. Throws AsymmetricInput / NegativeEntry on invalid input.
template <typename Derived>
TransitionGraph<typename Derived::Scalar> sym_normalize(const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> a = a_in;
  detail::require_symmetric(a, "affinity");
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (a(i, j) < Scalar(0)) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") = " << a(i, j);
        throw Error(ErrorKind::NegativeEntry, os.str());
      }

  TransitionGraph<Scalar> g;
  const Vec<Scalar> s = detail::inv_sqrt_degrees(a, g.degrees, &g.degenerate_nodes);
  g.normalized = detail::scale_symmetric(a, s);
  g.affinity = std::move(a);
  return g;
}

/// Keep, for every node, its `neighbors` strongest off-diagonal edges and
/// symmetrize by union. Ties go to the lower column index.
template <typename Derived>
Mat<typename Derived::Scalar> knn_sparsify(const Eigen::MatrixBase<Derived>& a, Index neighbors) {
  using Scalar = typename Derived::Scalar;
  const Index n = a.rows();
  if (neighbors <= 0) throw Error(ErrorKind::InvalidConfig, "knn neighbor count must be positive");
  Mat<Scalar> keep = Mat<Scalar>::Zero(n, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return a(i, x) > a(i, y); });
    Index taken = 0;
    for (Index j : order) {
      if (taken == neighbors) break;
      if (j == i) continue;
      keep(i, j) = a(i, j);
      ++taken;
    }
  }
  return keep.cwiseMax(keep.transpose());
}

/// Gaussian affinity a_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)) with a zero
/// diagonal, followed by symmetric normalization. Self-loops are added later
/// by the fusion step, not here.
template <typename Derived>
TransitionGraph<typename Derived::Scalar> gaussian_affinity(const Eigen::MatrixBase<Derived>& x,
                                                            typename Derived::Scalar sigma,
                                                            Index knn = 0) {
  using Scalar = typename Derived::Scalar;
  if (!(sigma > Scalar(0))) {
    std::ostringstream os;
    os << "sigma = " << sigma;
    throw Error(ErrorKind::NonPositiveSigma, os.str());
  }
  const Index n = x.rows();
  if (n < 2) throw Error(ErrorKind::EmptyInput, "feature matrix needs at least 2 rows");
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < x.cols(); ++j)
      if (!std::isfinite(x(i, j))) {
        std::ostringstream os;
        os << "row " << i << ", col " << j;
        throw Error(ErrorKind::NonFiniteFeature, os.str());
      }

  const Scalar inv_two_sigma_sq = Scalar(1) / (Scalar(2) * sigma * sigma);
  Mat<Scalar> a = Mat<Scalar>::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) {
      const Scalar v = std::exp(-(x.row(i) - x.row(j)).squaredNorm() * inv_two_sigma_sq);
      a(i, j) = v;
      a(j, i) = v;
    }
  if (knn > 0) a = knn_sparsify(a, knn);
  return sym_normalize(a);
}

/// Number of connected components when edges of weight <= tol are dropped.
template <typename Derived>
Index connected_components(const Eigen::MatrixBase<Derived>& a_in, typename Derived::Scalar tol) {
  using Scalar = typename Derived::Scalar;
  const Mat<Scalar> a = a_in;
  detail::require_symmetric(a, "adjacency");
  const Index n = a.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack;
  Index components = 0;
  for (Index root = 0; root < n; ++root) {
    if (seen[root]) continue;
    ++components;
    seen[root] = 1;
    stack.push_back(root);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v = 0; v < n; ++v)
        if (!seen[v] && a(u, v) > tol) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
  }
  return components;
}

}  // namespace sdsne
