#include "sdsne/experiment.hpp"

#include <chrono>
#include <set>

#include <json.hpp>

namespace sdsne {

const char* to_string(Backend b) {
  switch (b) {
    case Backend::KMeans: return "km";
    case Backend::Spectral: return "sc";
  }
  return "unknown";
}

ExperimentReport run_experiment(const MultiviewDataset& data, const SdsneConfig& config,
                                const ExperimentOptions& options, Eigen::MatrixXd* consensus) {
  const auto start = std::chrono::steady_clock::now();
  data.validate();
  config.validate();
  if (options.backends.empty()) throw Error(ErrorKind::InvalidConfig, "no clustering backend requested");

  ExperimentReport report;
  report.dataset = data.name;
  report.config = config;
  report.samples = static_cast<int>(data.samples());
  report.views = static_cast<int>(data.view_count());

  std::optional<Partition> truth;
  if (data.labels) truth = Partition::from_labels(std::span<const long>(*data.labels));
  if (options.k) {
    report.k = *options.k;
  } else if (truth) {
    report.k = truth->k;
  } else {
    throw Error(ErrorKind::MissingK, "dataset has no labels; pass the cluster count explicitly");
  }
  if (!truth) report.notices.push_back("no labels.csv: evaluation skipped");

  const auto model = fit<double>(data, config);
  report.epochs_run = model.epochs_run;
  report.initial_loss = model.loss_history.front();
  report.final_loss = model.final_loss();
  report.stop_reason = model.stop_reason;

  for (Backend b : options.backends) {
    BackendResult r{b, {}, std::nullopt};
    if (b == Backend::KMeans) {
      r.partition = kmeans(model.consensus, report.k, config.seed, options.restarts).partition;
    } else {
      const auto sc = spectral(model.consensus, report.k, config.seed, options.restarts);
      r.partition = sc.partition;
      if (sc.zero_rows > 0)
        report.notices.push_back("sc: " + std::to_string(sc.zero_rows) + " zero rows in the spectral embedding");
    }
    if (truth) r.metrics = evaluate(r.partition, *truth);
    report.results.push_back(std::move(r));
  }
  if (consensus) *consensus = model.consensus;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string to_json(const ExperimentReport& report, bool include_timing) {
  using nlohmann::json;
  const SdsneConfig& c = report.config;
  json j;
  j["dataset"] = report.dataset;
  j["config"] = {
      {"alpha", c.alpha},       {"mu", c.mu},
      {"learning_rate", c.learning_rate},
      {"max_epochs", c.max_epochs},
      {"patience", c.patience}, {"seed", c.seed},
      {"layers", c.layers},     {"cross_view", c.cross_view},
      {"convergence_tol", c.convergence_tol},
      {"stop_on_cliff", c.stop_on_cliff},
      {"sigma", c.sigma},       {"knn", c.knn},
  };
  j["k"] = report.k;
  j["samples"] = report.samples;
  j["views"] = report.views;
  j["epochs_run"] = report.epochs_run;
  j["initial_loss"] = report.initial_loss;
  j["final_loss"] = report.final_loss;
  j["stop_reason"] = to_string(report.stop_reason);
  j["notices"] = report.notices;
  json results = json::array();
  for (const auto& r : report.results) {
    json block;
    block["backend"] = to_string(r.backend);
    block["labels"] = r.partition.labels;
    if (r.metrics) {
      const MetricReport& m = *r.metrics;
      block["metrics"] = {{"nmi", m.nmi},       {"acc", m.acc},         {"ari", m.ari},      {"f1", m.f1},
                          {"precision", m.precision}, {"recall", m.recall}, {"purity", m.purity}};
    } else {
      block["metrics"] = nullptr;
    }
    results.push_back(std::move(block));
  }
  j["results"] = std::move(results);
  if (include_timing) j["wall_seconds"] = report.wall_seconds;
  return j.dump(2) + "\n";
}

}  // namespace sdsne
