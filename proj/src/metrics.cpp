#include "sdsne/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdsne/error.hpp"

namespace sdsne {

namespace {

void check(const Partition& p, const char* which) {
  for (int label : p.labels)
    if (label < 0 || label >= p.k)
      throw Error(ErrorKind::InvalidConfig, std::string(which) + " label " + std::to_string(label) +
                                                " outside [0, " + std::to_string(p.k) + ")");
}

double pairs(double m) { return m * (m - 1.0) / 2.0; }

double entropy(const Eigen::VectorXd& marginal, double n) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < marginal.size(); ++i)
    if (marginal(i) > 0.0) {
      const double p = marginal(i) / n;
      h -= p * std::log(p);
    }
  return h;
}

}  // namespace

Contingency Contingency::build(const Partition& pred, const Partition& truth) {
  if (pred.size() != truth.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(pred.size()) + " predictions vs " + std::to_string(truth.size()) + " labels");
  if (pred.size() == 0) throw Error(ErrorKind::EmptyPartition, "cannot score an empty partition");
  check(pred, "predicted");
  check(truth, "true");
  Contingency c;
  c.counts = Eigen::MatrixXd::Zero(pred.k, truth.k);
  for (std::size_t i = 0; i < pred.size(); ++i) c.counts(pred.labels[i], truth.labels[i]) += 1.0;
  c.row_sums = c.counts.rowwise().sum();
  c.col_sums = c.counts.colwise().sum().transpose();
  c.total = static_cast<double>(pred.size());
  return c;
}

MetricReport evaluate(const Partition& pred, const Partition& truth) {
  const Contingency c = Contingency::build(pred, truth);
  const double n = c.total;
  MetricReport r;

  double mutual = 0.0;
  for (Eigen::Index i = 0; i < c.counts.rows(); ++i)
    for (Eigen::Index j = 0; j < c.counts.cols(); ++j) {
      const double nij = c.counts(i, j);
      if (nij > 0.0) mutual += nij / n * std::log(n * nij / (c.row_sums(i) * c.col_sums(j)));
    }
  const double hp = entropy(c.row_sums, n), ht = entropy(c.col_sums, n);
  r.nmi = (hp > 0.0 && ht > 0.0) ? std::clamp(mutual / std::sqrt(hp * ht), 0.0, 1.0) : 0.0;

  // Optimal one-to-one matching of predicted clusters to classes.
  const Eigen::Index m = std::max(c.counts.rows(), c.counts.cols());
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(m, m);
  cost.topLeftCorner(c.counts.rows(), c.counts.cols()) = -c.counts;
  r.acc = -hungarian(cost).total / n;

  double both = 0.0, pred_pairs = 0.0, true_pairs = 0.0;
  for (Eigen::Index i = 0; i < c.counts.rows(); ++i)
    for (Eigen::Index j = 0; j < c.counts.cols(); ++j) both += pairs(c.counts(i, j));
  for (Eigen::Index i = 0; i < c.row_sums.size(); ++i) pred_pairs += pairs(c.row_sums(i));
  for (Eigen::Index j = 0; j < c.col_sums.size(); ++j) true_pairs += pairs(c.col_sums(j));

  const double all_pairs = pairs(n);
  const double expected = all_pairs > 0.0 ? pred_pairs * true_pairs / all_pairs : 0.0;
  const double maximum = 0.5 * (pred_pairs + true_pairs);
  // Equal max and expectation only happens for two all-singleton or two
  // single-cluster partitions, which agree perfectly.
  r.ari = maximum == expected ? 1.0 : (both - expected) / (maximum - expected);

  r.precision = pred_pairs > 0.0 ? both / pred_pairs : 0.0;
  r.recall = true_pairs > 0.0 ? both / true_pairs : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;

  double majority = 0.0;
  for (Eigen::Index i = 0; i < c.counts.rows(); ++i) majority += c.counts.row(i).maxCoeff();
  r.purity = majority / n;
  return r;
}

}  // namespace sdsne
