#include "sdsne/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sdsne/error.hpp"
#include "sdsne/graphs.hpp"

namespace sdsne {

namespace {

template <typename Int>
Partition relabel(std::span<const Int> raw) {
  std::map<Int, int> ids;
  for (Int v : raw) ids.emplace(v, 0);
  int next = 0;
  for (auto& [value, id] : ids) id = next++;
  Partition p;
  p.k = next;
  p.labels.reserve(raw.size());
  for (Int v : raw) p.labels.push_back(ids.at(v));
  return p;
}

using Rng = std::mt19937_64;

Rng restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return Rng(seq);
}

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centroids(k, x.cols());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  Eigen::Index first = pick(rng);
  centroids.row(0) = x.row(first);
  chosen[first] = 1;

  Eigen::VectorXd nearest = (x.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Eigen::Index next = -1;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng), acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += nearest(i);
        if (nearest(i) > 0.0 && r < acc) {
          next = i;
          break;
        }
      }
      if (next < 0)  // r landed on the rounding tail
        for (Eigen::Index i = n; i-- > 0;)
          if (nearest(i) > 0.0) {
            next = i;
            break;
          }
    } else {
      for (Eigen::Index i = 0; i < n; ++i)
        if (!chosen[i]) {
          next = i;
          break;
        }
    }
    centroids.row(c) = x.row(next);
    chosen[next] = 1;
    nearest = nearest.cwiseMin((x.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

// Assigns every point to its nearest centroid, lowest index on ties.
double assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, std::vector<int>& labels) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = (x.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[i] = arg;
    inertia += best;
  }
  return inertia;
}

void check_monotone(double previous, double current, int iteration) {
  if (current > previous + 1e-12 * (1.0 + std::abs(previous))) {
    std::ostringstream os;
    os << "k-means inertia rose from " << previous << " to " << current << " at iteration " << iteration;
    throw Error(ErrorKind::InvariantViolation, os.str());
  }
}

KMeansResult lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centroids) {
  const int k = static_cast<int>(centroids.rows());
  KMeansResult result;
  result.partition.k = k;
  result.partition.labels.assign(static_cast<std::size_t>(x.rows()), 0);
  double inertia = assign(x, centroids, result.partition.labels);

  int it = 0;
  while (it < kMaxLloydIterations) {
    ++it;
    Eigen::MatrixXd updated = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      updated.row(result.partition.labels[i]) += x.row(i);
      ++counts[result.partition.labels[i]];
    }
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        updated.row(c) = centroids.row(c);
      } else {
        updated.row(c) /= counts[c];
      }
      shift = std::max(shift, (updated.row(c) - centroids.row(c)).norm());
    }
    centroids = std::move(updated);
    const double next = assign(x, centroids, result.partition.labels);
    check_monotone(inertia, next, it);
    inertia = next;
    if (shift < kCentroidShiftTol) break;
  }
  result.centroids = std::move(centroids);
  result.inertia = inertia;
  result.iterations = it;
  return result;
}

}  // namespace

Partition Partition::from_labels(std::span<const long> raw) { return relabel(raw); }
Partition Partition::from_labels(std::span<const int> raw) { return relabel(raw); }

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts) {
  if (points.rows() == 0) throw Error(ErrorKind::EmptyInput, "k-means on zero points");
  if (k < 1 || k > points.rows()) {
    std::ostringstream os;
    os << "k = " << k << " with " << points.rows() << " points";
    throw Error(ErrorKind::TooManyClusters, os.str());
  }
  if (!points.allFinite()) throw Error(ErrorKind::NonFinite, "k-means input has non-finite entries");
  if (restarts < 1) throw Error(ErrorKind::InvalidConfig, "restarts must be positive");

  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng = restart_rng(seed, r);
    KMeansResult candidate = lloyd(points, plus_plus_seeds(points, k, rng));
    if (candidate.inertia < best.inertia) best = std::move(candidate);
  }
  return best;
}

SpectralResult spectral(const Eigen::MatrixXd& h, int k, std::uint64_t seed, int restarts) {
  if (h.rows() == 0) throw Error(ErrorKind::EmptyInput, "spectral clustering on an empty graph");
  if (k < 1 || k > h.rows()) {
    std::ostringstream os;
    os << "k = " << k << " with " << h.rows() << " nodes";
    throw Error(ErrorKind::TooManyClusters, os.str());
  }
  const auto graph = sym_normalize(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(graph.normalized);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::EigensolverFailure, "spectral eigendecomposition failed");

  SpectralResult result;
  result.eigenvalues = solver.eigenvalues().tail(k);
  result.embedding = solver.eigenvectors().rightCols(k);
  for (Eigen::Index i = 0; i < result.embedding.rows(); ++i) {
    const double norm = result.embedding.row(i).norm();
    if (norm > 1e-12) {
      result.embedding.row(i) /= norm;
    } else {
      result.embedding.row(i).setZero();
      ++result.zero_rows;
    }
  }
  result.partition = kmeans(result.embedding, k, seed, restarts).partition;
  return result;
}

namespace {

// O(n^3) shortest augmenting path with row/column potentials.
double min_cost_matching(const Eigen::MatrixXd& a, std::vector<int>* row_to_col) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) {
    if (row_to_col) row_to_col->clear();
    return 0.0;
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, 0);
  for (int j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += a(i, assignment[i]);
  if (row_to_col) *row_to_col = std::move(assignment);
  return total;
}

}  // namespace

Assignment hungarian(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) {
    std::ostringstream os;
    os << "cost matrix is " << cost.rows() << "x" << cost.cols();
    throw Error(ErrorKind::NonSquare, os.str());
  }
  if (!cost.allFinite()) throw Error(ErrorKind::NonFinite, "cost matrix has non-finite entries");
  const int n = static_cast<int>(cost.rows());
  Assignment out;
  if (n == 0) return out;

  const double optimum = min_cost_matching(cost, nullptr);
  const double tol = 1e-9 * std::max(1.0, cost.cwiseAbs().maxCoeff() * n);

  // Fix rows in order, each to the smallest column that still admits an
  // optimal completion.
  std::vector<int> free_cols(n);
  for (int j = 0; j < n; ++j) free_cols[j] = j;
  double fixed = 0.0;
  for (int i = 0; i < n; ++i) {
    const int rest = n - i - 1;
    int chosen = -1;
    for (std::size_t c = 0; c < free_cols.size(); ++c) {
      const int j = free_cols[c];
      Eigen::MatrixXd sub(rest, rest);
      for (int r = 0; r < rest; ++r) {
        int col = 0;
        for (int other : free_cols)
          if (other != j) sub(r, col++) = cost(i + 1 + r, other);
      }
      const double completion = fixed + cost(i, j) + min_cost_matching(sub, nullptr);
      if (completion <= optimum + tol) {
        chosen = static_cast<int>(c);
        break;
      }
    }
    if (chosen < 0) chosen = 0;  // unreachable unless rounding exceeds tol
    const int j = free_cols[chosen];
    out.assignment.push_back(j);
    fixed += cost(i, j);
    free_cols.erase(free_cols.begin() + chosen);
  }
  out.total = fixed;
  return out;
}

}  // namespace sdsne
