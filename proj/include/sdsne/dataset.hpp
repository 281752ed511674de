#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdsne/error.hpp"

namespace sdsne {

/// Several feature views of the same n samples, with optional ground truth.
struct MultiviewDataset {
  std::vector<Eigen::MatrixXd> views;
  std::optional<std::vector<long>> labels;
  std::string name;

  Eigen::Index samples() const { return views.empty() ? 0 : views.front().rows(); }
  std::size_t view_count() const { return views.size(); }

  void validate() const {
    if (views.empty()) throw Error(ErrorKind::EmptyViewList, "dataset has no views");
    for (std::size_t v = 0; v < views.size(); ++v)
      if (views[v].rows() != views.front().rows())
        throw Error(ErrorKind::ViewRowMismatch, "view " + std::to_string(v) + " has " +
                                                    std::to_string(views[v].rows()) + " rows, view 0 has " +
                                                    std::to_string(views.front().rows()));
    if (labels && static_cast<Eigen::Index>(labels->size()) != samples())
      throw Error(ErrorKind::LengthMismatch, "label count differs from sample count");
  }
};

/// Gaussian blobs in a low-dimensional latent space, rendered into each view
/// by an independent random orthonormal map plus isotropic noise.
struct SyntheticSpec {
  int samples = 150;
  int clusters = 3;
  int views = 2;
  int latent_dim = 2;
  double spread = 0.2;      // within-cluster standard deviation
  double separation = 8.0;  // distance between cluster centres, in units of spread
  double noise = 0.05;      // view noise standard deviation, in units of spread
  int base_view_dim = 6;    // view v has base_view_dim + 3 v columns
  std::uint64_t seed = 42;
};

MultiviewDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace sdsne
