#pragma once

// Test-only reference implementations. These deliberately avoid the library's
// code paths: plain loops, exhaustive enumeration, finite differences.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline MatrixXd random_matrix(int rows, int cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

inline MatrixXd random_symmetric(int n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = uniform(rng, lo, hi);
  return m;
}

inline MatrixXd naive_product(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd c = MatrixXd::Zero(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      for (int k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline MatrixXd naive_transpose(const MatrixXd& a) {
  MatrixXd t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline MatrixXd permutation_matrix(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  MatrixXd p = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
  return p;
}

/// Symmetric and exactly doubly stochastic: a convex mixture of symmetrized
/// permutation matrices.
inline MatrixXd random_doubly_stochastic(int n, Rng& rng, int terms = 4) {
  std::vector<double> weights(terms);
  for (auto& w : weights) w = uniform(rng, 0.1, 1.0);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  MatrixXd p = MatrixXd::Zero(n, n);
  std::vector<int> perm(n);
  for (int t = 0; t < terms; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const MatrixXd q = permutation_matrix(perm);
    p += (weights[t] / total) * 0.5 * (q + q.transpose());
  }
  return p;
}

/// Symmetric block-diagonal affinity with zero diagonal. Block sizes are
/// random (each at least 2); intra-block weights are drawn from (0, 1].
struct BlockGraph {
  MatrixXd affinity;
  std::vector<int> block_of;
  int blocks = 0;
};

inline BlockGraph random_block_graph(int n, int blocks, Rng& rng) {
  std::vector<int> sizes(blocks, 2);
  for (int extra = n - 2 * blocks; extra > 0; --extra)
    ++sizes[std::uniform_int_distribution<int>(0, blocks - 1)(rng)];
  BlockGraph g;
  g.affinity = MatrixXd::Zero(n, n);
  g.blocks = blocks;
  int start = 0;
  for (int b = 0; b < blocks; ++b) {
    for (int i = start; i < start + sizes[b]; ++i) {
      g.block_of.push_back(b);
      for (int j = start; j < i; ++j) {
        const double w = 1.0 - uniform(rng);  // (0, 1]
        g.affinity(i, j) = g.affinity(j, i) = w;
      }
    }
    start += sizes[b];
  }
  return g;
}

/// Random symmetric matrix with orthonormal columns, via Gram-Schmidt.
inline MatrixXd random_orthonormal(int n, int k, Rng& rng) {
  MatrixXd h = random_matrix(n, k, rng);
  for (int c = 0; c < k; ++c) {
    for (int p = 0; p < c; ++p) h.col(c) -= h.col(p).dot(h.col(c)) * h.col(p);
    h.col(c).normalize();
  }
  return h;
}

/// Central finite-difference gradient of f at x, entry by entry.
inline MatrixXd finite_difference(const std::function<double(const MatrixXd&)>& f, const MatrixXd& x, double step) {
  MatrixXd g(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      MatrixXd up = x, down = x;
      up(i, j) += step;
      down(i, j) -= step;
      g(i, j) = (f(up) - f(down)) / (2.0 * step);
    }
  return g;
}

/// Largest relative deviation over entries where either side exceeds floor.
inline double max_relative_error(const MatrixXd& a, const MatrixXd& b, double floor) {
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const double scale = std::max(std::abs(a(i, j)), std::abs(b(i, j)));
      if (scale > floor) worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
    }
  return worst;
}

/// Exhaustive minimum over all permutations.
inline double brute_force_assignment(const MatrixXd& cost) {
  std::vector<int> perm(cost.rows());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < cost.rows(); ++i) total += cost(i, perm[i]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Minimum within-cluster sum of squares over every split into two nonempty
/// groups.
inline double brute_force_two_means(const MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    if (mask & 1u) continue;  // each split once: point 0 always in group 0
    double cost = 0.0;
    for (int g = 0; g < 2; ++g) {
      VectorXd mean = VectorXd::Zero(x.cols());
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (((mask >> i) & 1u) == static_cast<unsigned>(g)) {
          mean += x.row(i).transpose();
          ++count;
        }
      mean /= count;
      for (int i = 0; i < n; ++i)
        if (((mask >> i) & 1u) == static_cast<unsigned>(g)) cost += (x.row(i).transpose() - mean).squaredNorm();
    }
    best = std::min(best, cost);
  }
  return best;
}

/// Reference scores computed from explicit pair enumeration and counting.
struct ReferenceScores {
  double nmi, acc, ari, f1, precision, recall, purity;
};

inline ReferenceScores reference_scores(const std::vector<int>& pred, const std::vector<int>& truth) {
  const int n = static_cast<int>(pred.size());
  // Pair counts.
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool same_pred = pred[i] == pred[j], same_true = truth[i] == truth[j];
      if (same_pred && same_true) ++tp;
      else if (same_pred) ++fp;
      else if (same_true) ++fn;
      else ++tn;
    }
  ReferenceScores s{};
  s.precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
  s.recall = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
  s.f1 = (s.precision + s.recall) > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  // ARI from the 2x2 pair table.
  const double total = tp + fp + fn + tn;
  const double expected = total > 0 ? (tp + fp) * (tp + fn) / total : 0.0;
  const double maximum = 0.5 * ((tp + fp) + (tp + fn));
  s.ari = maximum == expected ? 1.0 : (tp - expected) / (maximum - expected);

  // Joint and marginal distributions by direct counting.
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pm, tm;
  for (int i = 0; i < n; ++i) {
    joint[{pred[i], truth[i]}] += 1;
    pm[pred[i]] += 1;
    tm[truth[i]] += 1;
  }
  double mi = 0, hp = 0, ht = 0;
  for (auto& [key, c] : joint) mi += c / n * std::log((c / n) / ((pm[key.first] / n) * (tm[key.second] / n)));
  for (auto& [key, c] : pm) hp -= c / n * std::log(c / n);
  for (auto& [key, c] : tm) ht -= c / n * std::log(c / n);
  s.nmi = (hp > 0 && ht > 0) ? mi / std::sqrt(hp * ht) : 0.0;

  double majority = 0;
  for (auto& [cluster, size] : pm) {
    double best = 0;
    for (auto& [cls, sz] : tm) {
      auto it = joint.find({cluster, cls});
      if (it != joint.end()) best = std::max(best, it->second);
    }
    majority += best;
  }
  s.purity = majority / n;

  // Accuracy: try every injective map from predicted ids to class ids.
  std::vector<int> pids, tids;
  for (auto& [c, _] : pm) pids.push_back(c);
  for (auto& [c, _] : tm) tids.push_back(c);
  const int m = static_cast<int>(std::max(pids.size(), tids.size()));
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0;
  do {
    double matched = 0;
    for (std::size_t a = 0; a < pids.size(); ++a) {
      const int target = perm[a];
      if (target >= static_cast<int>(tids.size())) continue;
      auto it = joint.find({pids[a], tids[target]});
      if (it != joint.end()) matched += it->second;
    }
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  s.acc = best / n;
  return s;
}

}  // namespace testing
