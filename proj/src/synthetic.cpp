#include <random>

#include <Eigen/QR>

#include "sdsne/dataset.hpp"

namespace sdsne {

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

// Centres with every pairwise distance equal to `distance` (a regular
// simplex) when the latent space is wide enough, else evenly spaced on a line.
Eigen::MatrixXd cluster_centres(int k, int dim, double distance) {
  Eigen::MatrixXd centres = Eigen::MatrixXd::Zero(k, dim);
  if (dim >= k - 1 && k > 1) {
    Eigen::MatrixXd simplex = Eigen::MatrixXd::Identity(k, k) * (distance / std::sqrt(2.0));
    simplex.rowwise() -= simplex.colwise().mean();
    // Orthonormal basis of the (k-1)-dimensional span of the centred vertices.
    Eigen::MatrixXd basis = Eigen::HouseholderQR<Eigen::MatrixXd>(simplex.transpose()).householderQ();
    centres.leftCols(k - 1) = simplex * basis.leftCols(k - 1);
  } else {
    for (int c = 0; c < k; ++c) centres(c, 0) = distance * c;
  }
  return centres;
}

}  // namespace

MultiviewDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.samples < 2 || spec.clusters < 1 || spec.clusters > spec.samples || spec.views < 1 || spec.latent_dim < 1 ||
      !(spec.spread > 0.0) || spec.base_view_dim < spec.latent_dim)
    throw Error(ErrorKind::InvalidConfig, "invalid synthetic dataset parameters");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::MatrixXd centres = cluster_centres(spec.clusters, spec.latent_dim, spec.separation * spec.spread);

  MultiviewDataset data;
  data.name = "synthetic";
  std::vector<long> labels(static_cast<std::size_t>(spec.samples));
  Eigen::MatrixXd latent(spec.samples, spec.latent_dim);
  for (int i = 0; i < spec.samples; ++i) {
    labels[i] = i % spec.clusters;
    for (int d = 0; d < spec.latent_dim; ++d) latent(i, d) = centres(labels[i], d) + spec.spread * normal(rng);
  }

  for (int v = 0; v < spec.views; ++v) {
    const int dim = spec.base_view_dim + 3 * v;
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian_matrix(dim, spec.latent_dim, rng)).householderQ();
    const Eigen::MatrixXd map = q.leftCols(spec.latent_dim);  // dim x latent, orthonormal columns
    Eigen::MatrixXd x = latent * map.transpose();
    x += spec.noise * spec.spread * gaussian_matrix(spec.samples, dim, rng);
    data.views.push_back(std::move(x));
  }
  data.labels = std::move(labels);
  return data;
}

}  // namespace sdsne
