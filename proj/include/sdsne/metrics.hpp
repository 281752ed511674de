#pragma once

#include <Eigen/Dense>

#include "sdsne/clustering.hpp"

namespace sdsne {

/// Co-occurrence counts: rows are predicted clusters, columns true classes.
struct Contingency {
  Eigen::MatrixXd counts;
  Eigen::VectorXd row_sums;
  Eigen::VectorXd col_sums;
  double total = 0.0;

  static Contingency build(const Partition& pred, const Partition& truth);
};

/// The six external clustering scores.
///
/// Conventions: NMI uses natural logs normalized by the geometric mean of the
/// two entropies, and is 0 when either partition has zero entropy. Precision,
/// recall and F1 are pair-counting scores over same-cluster pairs, with 0 for
/// an empty denominator. ACC, purity and precision are directional (pred is
/// scored against truth); NMI and ARI are symmetric.
struct MetricReport {
  double nmi = 0.0;
  double acc = 0.0;
  double ari = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double purity = 0.0;
};

MetricReport evaluate(const Partition& pred, const Partition& truth);

}  // namespace sdsne
