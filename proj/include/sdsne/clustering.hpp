#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sdsne {

/// Hard assignment of n items to k clusters labelled 0..k-1.
struct Partition {
  std::vector<int> labels;
  int k = 0;

  std::size_t size() const { return labels.size(); }

  /// Relabels arbitrary integer ids to 0..k-1 in ascending id order.
  static Partition from_labels(std::span<const long> raw);
  static Partition from_labels(std::span<const int> raw);
};

struct KMeansResult {
  Partition partition;
  Eigen::MatrixXd centroids;  // k x d
  double inertia = 0.0;
  int iterations = 0;  // Lloyd iterations of the winning restart
};

inline constexpr int kDefaultRestarts = 10;
inline constexpr int kMaxLloydIterations = 300;
inline constexpr double kCentroidShiftTol = 1e-9;

/// k-means++ seeding followed by Lloyd iterations; the restart with the
/// lowest inertia wins (ties to the earliest restart). Rows are points.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts = kDefaultRestarts);

struct SpectralResult {
  Partition partition;
  Eigen::MatrixXd embedding;  // row-normalized n x k
  Eigen::VectorXd eigenvalues;  // the k largest, ascending
  int zero_rows = 0;  // embedding rows left at zero norm
};

/// Spectral clustering of a symmetric nonnegative similarity matrix: top-k
/// eigenvectors of D^{-1/2} H D^{-1/2}, rows scaled to unit norm, then k-means.
SpectralResult spectral(const Eigen::MatrixXd& h, int k, std::uint64_t seed, int restarts = kDefaultRestarts);

struct Assignment {
  std::vector<int> assignment;  // row i -> column assignment[i]
  double total = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix. Among optimal
/// permutations the lexicographically smallest is returned.
Assignment hungarian(const Eigen::MatrixXd& cost);

}  // namespace sdsne
