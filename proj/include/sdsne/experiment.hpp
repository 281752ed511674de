#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdsne/clustering.hpp"
#include "sdsne/dataset.hpp"
#include "sdsne/metrics.hpp"
#include "sdsne/model.hpp"

namespace sdsne {

enum class Backend { KMeans, Spectral };

const char* to_string(Backend b);

struct ExperimentOptions {
  std::optional<int> k;  // defaults to the number of distinct labels
  std::vector<Backend> backends{Backend::KMeans, Backend::Spectral};
  int restarts = kDefaultRestarts;
};

struct BackendResult {
  Backend backend;
  Partition partition;
  std::optional<MetricReport> metrics;  // empty when the dataset has no labels
};

struct ExperimentReport {
  std::string dataset;
  SdsneConfig config;
  int k = 0;
  int samples = 0;
  int views = 0;
  int epochs_run = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  StopReason stop_reason = StopReason::MaxEpochs;
  std::vector<BackendResult> results;
  std::vector<std::string> notices;
  double wall_seconds = 0.0;
};

/// Fits the model, clusters the consensus graph with each backend and scores
/// the partitions when labels are available. The learned consensus graph is
/// copied to `consensus` when given.
ExperimentReport run_experiment(const MultiviewDataset& data, const SdsneConfig& config,
                                const ExperimentOptions& options, Eigen::MatrixXd* consensus = nullptr);

/// Pretty-printed JSON with sorted keys. Wall-clock time is left out unless
/// asked for, so identical runs serialize to identical bytes.
std::string to_json(const ExperimentReport& report, bool include_timing = false);

}  // namespace sdsne
