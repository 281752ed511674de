#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdsne/dataset.hpp"
#include "sdsne/error.hpp"
#include "sdsne/experiment.hpp"
#include "sdsne/io.hpp"

namespace {

int report_error(std::string_view category, const std::string& message) {
  nlohmann::json j{{"error", category}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiview clustering by stationary diffusion state estimation"};
  app.require_subcommand(1);

  sdsne::SdsneConfig config;
  std::string data_dir, out_file, graph_file, backend = "both";
  std::optional<int> k;
  int restarts = sdsne::kDefaultRestarts;
  bool timing = false;

  auto* run = app.add_subcommand("run", "Fit the model on a dataset directory and cluster the consensus graph");
  run->add_option("--data", data_dir, "Directory with view_0.csv, view_1.csv, ... and optional labels.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  run->add_option("--k", k, "Cluster count (default: number of distinct labels)")->check(CLI::PositiveNumber);
  run->add_option("--sigma", config.sigma, "Gaussian kernel width")->capture_default_str();
  run->add_option("--alpha", config.alpha, "Fusion weight of the learned view graphs")->capture_default_str();
  run->add_option("--mu", config.mu, "Regularization weight")->capture_default_str();
  run->add_option("--lr", config.learning_rate, "Gradient descent step size")->capture_default_str();
  run->add_option("--max-epochs", config.max_epochs, "Epoch limit")->capture_default_str();
  run->add_option("--patience", config.patience, "Epochs without improvement before stopping")->capture_default_str();
  run->add_option("--tol", config.convergence_tol, "Minimum loss improvement that resets patience")->capture_default_str();
  run->add_option("--seed", config.seed, "Seed for clustering")->capture_default_str();
  run->add_option("--layers", config.layers, "Number of diffusion layers")->capture_default_str();
  run->add_flag("--cross-view", config.cross_view, "Diffuse each view against the next view's graph");
  run->add_option("--backend", backend, "Clustering backend")
      ->check(CLI::IsMember({"km", "sc", "both"}))
      ->capture_default_str();
  run->add_option("--knn", config.knn, "Keep only this many neighbours per node (0 = dense)")->capture_default_str();
  run->add_option("--restarts", restarts, "k-means restarts")->capture_default_str();
  run->add_option("--out", out_file, "Write the JSON report here instead of stdout");
  run->add_option("--save-graph", graph_file, "Write the consensus graph H as CSV");
  run->add_flag("--stop-on-cliff", config.stop_on_cliff, "Stop when one epoch more than halves the loss");
  run->add_flag("--timing", timing, "Include wall-clock seconds in the report");

  sdsne::SyntheticSpec spec;
  std::string synth_dir;
  auto* gen = app.add_subcommand("generate-synthetic", "Write a Gaussian-blob multiview dataset");
  gen->add_option("--out", synth_dir, "Output directory")->required();
  gen->add_option("--n", spec.samples, "Samples")->capture_default_str();
  gen->add_option("--k", spec.clusters, "Clusters")->capture_default_str();
  gen->add_option("--views", spec.views, "Views")->capture_default_str();
  gen->add_option("--separation", spec.separation, "Centre distance in units of spread")->capture_default_str();
  gen->add_option("--spread", spec.spread, "Within-cluster standard deviation")->capture_default_str();
  gen->add_option("--latent-dim", spec.latent_dim, "Latent dimension")->capture_default_str();
  gen->add_option("--noise", spec.noise, "View noise in units of spread")->capture_default_str();
  gen->add_option("--seed", spec.seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      sdsne::io::write_dataset(synth_dir, sdsne::generate_synthetic(spec));
      return 0;
    }

    sdsne::ExperimentOptions options;
    options.k = k;
    options.restarts = restarts;
    if (backend == "km") options.backends = {sdsne::Backend::KMeans};
    if (backend == "sc") options.backends = {sdsne::Backend::Spectral};

    const auto data = sdsne::io::load_dataset(data_dir);
    Eigen::MatrixXd consensus;
    const auto report = sdsne::run_experiment(data, config, options, &consensus);
    for (const auto& notice : report.notices) std::cerr << "notice: " << notice << "\n";
    std::cerr << "finished in " << report.wall_seconds << " s\n";

    const std::string json = sdsne::to_json(report, timing);
    if (out_file.empty()) {
      std::cout << json;
    } else {
      std::ofstream out(out_file, std::ios::binary | std::ios::trunc);
      if (!(out << json)) return report_error("IoFailure", "cannot write " + out_file);
    }
    if (!graph_file.empty()) sdsne::io::write_matrix_csv(graph_file, consensus);
    return 0;
  } catch (const sdsne::Error& e) {
    return report_error(sdsne::to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return report_error("Internal", e.what());
  }
}
