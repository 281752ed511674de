#include "sdsne/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "sdsne/error.hpp"

namespace sdsne::io {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

[[noreturn]] void malformed(const fs::path& path, std::size_t line, std::size_t column, std::string_view what) {
  std::ostringstream os;
  os << path.string() << ":" << line << ":" << column << ": " << what;
  throw Error(ErrorKind::MalformedNumber, os.str());
}

// Splits on '\n'; a single trailing newline does not start a new line.
std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

template <typename T>
T parse_field(std::string_view field, const fs::path& path, std::size_t line, std::size_t column) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last)
    malformed(path, line, column, "cannot parse '" + std::string(field) + "'");
  return value;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorKind::IoFailure, "cannot format number");
  return std::string(buf, ptr);
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  const std::string text = slurp(path);
  const auto lines = lines_of(text);
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    std::vector<double> row;
    std::size_t start = 0, column = 1;
    while (true) {
      const std::size_t comma = lines[l].find(',', start);
      const std::string_view field =
          lines[l].substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      row.push_back(parse_field<double>(field, path, l + 1, column));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
      ++column;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "expected " << rows.front().size() << " columns, found " << row.size();
      malformed(path, l + 1, row.size(), os.str());
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<long> read_labels_csv(const fs::path& path) {
  const std::string text = slurp(path);
  std::vector<long> labels;
  const auto lines = lines_of(text);
  for (std::size_t l = 0; l < lines.size(); ++l) labels.push_back(parse_field<long>(lines[l], path, l + 1, 1));
  return labels;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) {
  std::string text;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) text += ',';
      text += format_double(m(i, j));
    }
    text += '\n';
  }
  write_text(path, text);
}

void write_labels_csv(const fs::path& path, const std::vector<long>& labels) {
  std::string text;
  for (long v : labels) {
    text += std::to_string(v);
    text += '\n';
  }
  write_text(path, text);
}

MultiviewDataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::NoViewsFound, dir.string() + " is not a directory");
  MultiviewDataset data;
  data.name = fs::absolute(dir).lexically_normal().filename().string();
  if (data.name.empty()) data.name = fs::absolute(dir).lexically_normal().parent_path().filename().string();

  std::vector<fs::path> files;
  for (int v = 0;; ++v) {
    const fs::path file = dir / ("view_" + std::to_string(v) + ".csv");
    if (!fs::exists(file)) break;
    files.push_back(file);
  }
  if (files.empty()) throw Error(ErrorKind::NoViewsFound, "no view_0.csv in " + dir.string());

  for (const auto& file : files) {
    Eigen::MatrixXd x = read_matrix_csv(file);
    if (!data.views.empty() && x.rows() != data.views.front().rows()) {
      std::ostringstream os;
      os << file.string() << " has " << x.rows() << " rows, " << files.front().string() << " has "
         << data.views.front().rows();
      throw Error(ErrorKind::RowCountMismatch, os.str());
    }
    data.views.push_back(std::move(x));
  }

  const fs::path labels = dir / "labels.csv";
  if (fs::exists(labels)) {
    auto values = read_labels_csv(labels);
    if (static_cast<Eigen::Index>(values.size()) != data.samples()) {
      std::ostringstream os;
      os << labels.string() << " has " << values.size() << " rows, views have " << data.samples();
      throw Error(ErrorKind::RowCountMismatch, os.str());
    }
    data.labels = std::move(values);
  }
  return data;
}

void write_dataset(const fs::path& dir, const MultiviewDataset& data) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t v = 0; v < data.views.size(); ++v)
    write_matrix_csv(dir / ("view_" + std::to_string(v) + ".csv"), data.views[v]);
  if (data.labels) write_labels_csv(dir / "labels.csv", *data.labels);
}

}  // namespace sdsne::io
