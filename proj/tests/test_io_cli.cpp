#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#include "sdsne/dataset.hpp"
#include "sdsne/experiment.hpp"
#include "sdsne/io.hpp"
#include "support/expect.hpp"

using namespace sdsne;
using Eigen::MatrixXd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("sdsne_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args, const fs::path& stderr_file) {
  const std::string cmd = std::string("\"") + SDSNE_CLI_PATH + "\" " + args + " 2>\"" + stderr_file.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

MultiviewDataset tiny_fixture() {
  SyntheticSpec spec;
  spec.samples = 24;
  return generate_synthetic(spec);
}

}  // namespace

TEST_CASE("matrix CSV round trip is exact") {
  TempDir dir("csv");
  MatrixXd m(3, 2);
  m << 0.1, -2.5e-300, 1.0 / 3.0, 12345678.9, -0.0, 7;
  io::write_matrix_csv(dir.path / "m.csv", m);
  const MatrixXd back = io::read_matrix_csv(dir.path / "m.csv");
  CHECK(back == m);
  const std::string text = read_file(dir.path / "m.csv");
  CHECK(text.find("0.1,") == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("malformed CSV reports file, line and column") {
  TempDir dir("bad");
  write_file(dir.path / "m.csv", "1,2\n3,x\n");
  try {
    io::read_matrix_csv(dir.path / "m.csv");
    FAIL("expected MalformedNumber");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedNumber);
    CHECK(std::string(e.what()).find("m.csv:2:2") != std::string::npos);
  }
  write_file(dir.path / "r.csv", "1,2\n3\n");
  CHECK_ERROR_KIND(io::read_matrix_csv(dir.path / "r.csv"), ErrorKind::MalformedNumber);
  write_file(dir.path / "l.csv", "0\n1.5\n");
  CHECK_ERROR_KIND(io::read_labels_csv(dir.path / "l.csv"), ErrorKind::MalformedNumber);
}

TEST_CASE("load_dataset") {
  TempDir dir("load");
  SUBCASE("two four-row views") {
    write_file(dir.path / "view_0.csv", "1,2\n3,4\n5,6\n7,8\n");
    write_file(dir.path / "view_1.csv", "1\n2\n3\n4\n");
    const auto d = io::load_dataset(dir.path);
    CHECK(d.view_count() == 2);
    CHECK(d.samples() == 4);
    CHECK_FALSE(d.labels.has_value());
    CHECK(d.name == dir.path.filename().string());
  }
  SUBCASE("row count mismatch names the file") {
    write_file(dir.path / "view_0.csv", "1\n2\n3\n4\n");
    write_file(dir.path / "view_1.csv", "1\n2\n3\n4\n5\n");
    try {
      io::load_dataset(dir.path);
      FAIL("expected RowCountMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RowCountMismatch);
      CHECK(std::string(e.what()).find("view_1.csv") != std::string::npos);
    }
  }
  SUBCASE("labels are attached") {
    write_file(dir.path / "view_0.csv", "1\n2\n3\n");
    write_file(dir.path / "labels.csv", "4\n4\n9\n");
    const auto d = io::load_dataset(dir.path);
    REQUIRE(d.labels.has_value());
    CHECK(*d.labels == std::vector<long>{4, 4, 9});
  }
  SUBCASE("label count mismatch") {
    write_file(dir.path / "view_0.csv", "1\n2\n3\n");
    write_file(dir.path / "labels.csv", "0\n1\n");
    CHECK_ERROR_KIND(io::load_dataset(dir.path), ErrorKind::RowCountMismatch);
  }
  SUBCASE("no views") { CHECK_ERROR_KIND(io::load_dataset(dir.path), ErrorKind::NoViewsFound); }
}

TEST_CASE("synthetic generator") {
  SyntheticSpec spec;
  spec.views = 3;
  const auto d = generate_synthetic(spec);
  CHECK(d.view_count() == 3);
  CHECK(d.samples() == 150);
  for (std::size_t v = 0; v < 3; ++v) CHECK(d.views[v].cols() == spec.base_view_dim + 3 * static_cast<int>(v));
  REQUIRE(d.labels.has_value());
  for (int i = 0; i < 150; ++i) CHECK((*d.labels)[i] == i % 3);
  const auto again = generate_synthetic(spec);
  CHECK(again.views[2] == d.views[2]);
  spec.seed = 7;
  CHECK(generate_synthetic(spec).views[0] != d.views[0]);
}

TEST_CASE("run_experiment report schema") {
  const auto data = tiny_fixture();
  SdsneConfig config;
  config.max_epochs = 20;
  ExperimentOptions options;
  const auto report = run_experiment(data, config, options);
  REQUIRE(report.results.size() == 2);
  const auto j = nlohmann::json::parse(to_json(report));
  CHECK(j["results"][0]["backend"] == "km");
  CHECK(j["results"][1]["backend"] == "sc");
  for (const auto& block : j["results"])
    for (const char* key : {"nmi", "acc", "ari", "f1", "precision", "recall", "purity"})
      CHECK(block["metrics"].contains(key));
  CHECK(j["config"]["max_epochs"] == 20);
  CHECK(j["config"]["seed"] == 42);
  CHECK_FALSE(j.contains("wall_seconds"));
  CHECK(nlohmann::json::parse(to_json(report, true)).contains("wall_seconds"));

  options.backends = {Backend::KMeans};
  const auto km_only = run_experiment(data, config, options);
  REQUIRE(km_only.results.size() == 1);
  CHECK(km_only.results[0].backend == Backend::KMeans);

  CHECK(to_json(run_experiment(data, config, options)) == to_json(km_only));
}

TEST_CASE("run_experiment without labels") {
  auto data = tiny_fixture();
  data.labels.reset();
  SdsneConfig config;
  config.max_epochs = 5;
  CHECK_ERROR_KIND(run_experiment(data, config, ExperimentOptions{}), ErrorKind::MissingK);
  ExperimentOptions options;
  options.k = 3;
  const auto report = run_experiment(data, config, options);
  CHECK_FALSE(report.results[0].metrics.has_value());
  CHECK_FALSE(report.notices.empty());
  CHECK(nlohmann::json::parse(to_json(report))["results"][0]["metrics"].is_null());
}

TEST_CASE("cli end to end") {
  TempDir dir("cli");
  const fs::path data = dir.path / "blobs", err = dir.path / "stderr.txt";
  REQUIRE(run_cli("generate-synthetic --out \"" + data.string() + "\" --n 30 --k 3 --views 2 --seed 5", err) == 0);
  CHECK(fs::exists(data / "view_0.csv"));
  CHECK(fs::exists(data / "view_1.csv"));
  CHECK(fs::exists(data / "labels.csv"));

  const std::string common = "run --data \"" + data.string() + "\" --max-epochs 10 --backend both";
  REQUIRE(run_cli(common + " --out \"" + (dir.path / "a.json").string() + "\" --save-graph \"" +
                      (dir.path / "h.csv").string() + "\"",
                  err) == 0);
  REQUIRE(run_cli(common + " --out \"" + (dir.path / "b.json").string() + "\"", err) == 0);
  const std::string a = read_file(dir.path / "a.json");
  CHECK(a == read_file(dir.path / "b.json"));
  const auto j = nlohmann::json::parse(a);
  CHECK(j["dataset"] == "blobs");
  CHECK(j["results"].size() == 2);
  CHECK(io::read_matrix_csv(dir.path / "h.csv").rows() == 30);

  SUBCASE("errors exit nonzero with a category") {
    fs::create_directories(dir.path / "empty");
    CHECK(run_cli("run --data \"" + (dir.path / "empty").string() + "\"", err) == 1);
    const auto e = nlohmann::json::parse(read_file(err));
    CHECK(e["error"] == "NoViewsFound");
    CHECK(run_cli(common + " --sigma -1", err) == 1);
    CHECK(nlohmann::json::parse(read_file(err))["error"] == "NonPositiveSigma");
    CHECK(run_cli("run", err) != 0);
  }
}
