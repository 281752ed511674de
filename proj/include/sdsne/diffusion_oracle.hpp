#pragma once

// Brute-force checks of the diffusion identities. Everything here is written
// with explicit loops or dense eigendecompositions so it stays independent of
// the matrix-product paths used by the model.

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sdsne/error.hpp"
#include "sdsne/graphs.hpp"
#include "sdsne/types.hpp"

namespace sdsne::oracle {

/// Kronecker products are only materialized up to this node count.
inline constexpr Index kKroneckerLimit = 12;
/// The quadruple-sum identity check costs n^4.
inline constexpr Index kQuadrupleLimit = 8;
inline constexpr double kDefaultMultiplicityTol = 1e-6;

namespace detail {

inline void require_same(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": " << a << " vs " << b;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

inline void require_limit(Index n, Index limit, const char* what) {
  if (n > limit) {
    std::ostringstream os;
    os << what << ": n = " << n << " exceeds " << limit;
    throw Error(ErrorKind::SizeLimitExceeded, os.str());
  }
}

template <typename Scalar>
Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eigensolve(const Mat<Scalar>& p, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(p, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::EigensolverFailure, "dense symmetric eigensolver did not converge");
  return solver;
}

}  // namespace detail

/// Column-stacking vectorization: vec(S)[j*n + i] = S(i, j).
template <typename Scalar>
Vec<Scalar> vec(const Mat<Scalar>& s) {
  Vec<Scalar> g(s.size());
  for (Index j = 0; j < s.cols(); ++j)
    for (Index i = 0; i < s.rows(); ++i) g(j * s.rows() + i) = s(i, j);
  return g;
}

template <typename Scalar>
Mat<Scalar> unvec(const Vec<Scalar>& g, Index rows) {
  Mat<Scalar> s(rows, g.size() / rows);
  for (Index j = 0; j < s.cols(); ++j)
    for (Index i = 0; i < rows; ++i) s(i, j) = g(j * rows + i);
  return s;
}

/// The joint transition operator of two views, P1 (x) P2.
template <typename Scalar>
struct HyperTransition {
  Mat<Scalar> left;
  Mat<Scalar> right;
  Mat<Scalar> product;

  static HyperTransition build(const Mat<Scalar>& p1, const Mat<Scalar>& p2) {
    sdsne::detail::require_square(p1, "P1");
    sdsne::detail::require_square(p2, "P2");
    detail::require_limit(p1.rows() * p2.rows(), kKroneckerLimit * kKroneckerLimit, "Kronecker product");
    HyperTransition h{p1, p2, Mat<Scalar>(p1.rows() * p2.rows(), p1.cols() * p2.cols())};
    const Index r = p2.rows(), c = p2.cols();
    for (Index i = 0; i < p1.rows(); ++i)
      for (Index j = 0; j < p1.cols(); ++j)
        for (Index k = 0; k < r; ++k)
          for (Index l = 0; l < c; ++l) h.product(i * r + k, j * c + l) = p1(i, j) * p2(k, l);
    return h;
  }
};

/// One diffusion step h <- P h.
template <typename Scalar>
Vec<Scalar> diffuse_step(const Mat<Scalar>& p, const Vec<Scalar>& h) {
  detail::require_same(p.cols(), h.size(), "diffuse_step");
  Vec<Scalar> out = Vec<Scalar>::Zero(p.rows());
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = 0; j < p.cols(); ++j) out(i) += p(i, j) * h(j);
  return out;
}

template <typename Scalar>
struct HyperDiffuseCheck {
  Mat<Scalar> small_form;  // P2 S P1^T
  Scalar max_deviation;    // max |vec(small_form) - (P1 (x) P2) vec(S)|
};

/// Compares the n x n form P2 S P1^T against the materialized n^2 x n^2
/// Kronecker operator applied to vec(S).
template <typename Scalar>
HyperDiffuseCheck<Scalar> hyper_diffuse_check(const Mat<Scalar>& p1, const Mat<Scalar>& p2, const Mat<Scalar>& s) {
  const Index n = s.rows();
  detail::require_same(s.cols(), n, "S must be square");
  detail::require_same(p1.rows(), n, "P1 rows");
  detail::require_same(p2.rows(), n, "P2 rows");
  detail::require_limit(n, kKroneckerLimit, "hyper_diffuse_check");
  const auto hyper = HyperTransition<Scalar>::build(p1, p2);

  Mat<Scalar> small = Mat<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) small(i, j) += p2(i, a) * s(a, b) * p1(j, b);

  const Vec<Scalar> g = vec(s);
  const Vec<Scalar> big = diffuse_step(hyper.product, g);
  const Scalar dev = (vec(small) - big).cwiseAbs().maxCoeff();
  return {std::move(small), dev};
}

/// Count of eigenvalues within tol of 1.
template <typename Scalar>
Index eigen_multiplicity_of_one(const Mat<Scalar>& p, Scalar tol = Scalar(kDefaultMultiplicityTol)) {
  sdsne::detail::require_symmetric(p, "P");
  if (!(tol > Scalar(0))) throw Error(ErrorKind::InvalidConfig, "tolerance must be positive");
  const auto solver = detail::eigensolve(p, false);
  Index count = 0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (std::abs(solver.eigenvalues()(i) - Scalar(1)) <= tol) ++count;
  return count;
}

/// Orthonormal basis of the eigenvalue-1 eigenspace.
template <typename Scalar>
struct StationaryBasis {
  Mat<Scalar> vectors;

  Index dimension() const { return vectors.cols(); }
};

template <typename Scalar>
StationaryBasis<Scalar> stationary_basis(const Mat<Scalar>& p, Scalar tol = Scalar(kDefaultMultiplicityTol)) {
  sdsne::detail::require_symmetric(p, "P");
  const auto solver = detail::eigensolve(p, true);
  const auto& vals = solver.eigenvalues();
  Index count = 0;
  for (Index i = 0; i < vals.size(); ++i)
    if (std::abs(vals(i) - Scalar(1)) <= tol) ++count;
  StationaryBasis<Scalar> basis{Mat<Scalar>(p.rows(), count)};
  Index col = 0;
  for (Index i = 0; i < vals.size(); ++i)
    if (std::abs(vals(i) - Scalar(1)) <= tol) basis.vectors.col(col++) = solver.eigenvectors().col(i);
  return basis;
}

/// Eigenvectors of the k largest eigenvalues of a symmetric P, as columns.
template <typename Scalar>
Mat<Scalar> top_eigenvectors(const Mat<Scalar>& p, Index k) {
  sdsne::detail::require_symmetric(p, "P");
  if (k < 0 || k > p.rows()) throw Error(ErrorKind::DimensionMismatch, "requested more eigenvectors than rows");
  const auto solver = detail::eigensolve(p, true);
  return solver.eigenvectors().rightCols(k);
}

/// The weighted edge-disagreement sum_ij p_ij (h_i - h_j)^2.
template <typename Scalar>
Scalar edge_disagreement(const Mat<Scalar>& p, const Vec<Scalar>& h) {
  detail::require_same(p.cols(), h.size(), "edge_disagreement");
  Scalar sum(0);
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = 0; j < p.cols(); ++j) sum += p(i, j) * (h(i) - h(j)) * (h(i) - h(j));
  return sum;
}

/// Tr(H^T (I - P) H), element by element.
template <typename Scalar>
Scalar laplacian_trace(const Mat<Scalar>& p, const Mat<Scalar>& h) {
  detail::require_same(p.cols(), h.rows(), "laplacian_trace");
  Scalar sum(0);
  for (Index c = 0; c < h.cols(); ++c)
    for (Index i = 0; i < h.rows(); ++i) {
      Scalar ph(0);
      for (Index j = 0; j < p.cols(); ++j) ph += p(i, j) * h(j, c);
      sum += h(i, c) * (h(i, c) - ph);
    }
  return sum;
}

template <typename Scalar>
struct QuadraticIdentity {
  Scalar lhs;  // g^T (I - P1 (x) P2) g, g = vec(S)
  Scalar rhs;  // 1/2 sum_{ijkl} p1_ij p2_kl (s_ik - s_jl)^2
};

/// Both sides of the hyper-graph quadratic-form identity. They agree when P1
/// and P2 are doubly stochastic; for a general symmetric normalization they
/// do not, and callers compare the two values themselves.
template <typename Scalar>
QuadraticIdentity<Scalar> quadratic_identity_check(const Mat<Scalar>& p1, const Mat<Scalar>& p2, const Mat<Scalar>& s) {
  const Index n = s.rows();
  detail::require_same(s.cols(), n, "S must be square");
  detail::require_same(p1.rows(), n, "P1 rows");
  detail::require_same(p2.rows(), n, "P2 rows");
  detail::require_limit(n, kQuadrupleLimit, "quadratic_identity_check");
  sdsne::detail::require_symmetric(s, "S");

  const auto hyper = HyperTransition<Scalar>::build(p1, p2);
  const Vec<Scalar> g = vec(s);
  const Vec<Scalar> pg = diffuse_step(hyper.product, g);
  Scalar lhs(0);
  for (Index i = 0; i < g.size(); ++i) lhs += g(i) * (g(i) - pg(i));

  Scalar rhs(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) {
          const Scalar d = s(i, k) - s(j, l);
          rhs += p1(i, j) * p2(k, l) * d * d;
        }
  return {lhs, rhs / Scalar(2)};
}

/// |h - P h|_2.
template <typename Scalar>
Scalar stationarity_residual(const Mat<Scalar>& p, const Vec<Scalar>& h) {
  return (h - diffuse_step(p, h)).norm();
}

}  // namespace sdsne::oracle
