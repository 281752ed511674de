#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdsne/dataset.hpp"

namespace sdsne::io {

/// Numeric CSV: ',' separator, '.' decimals, '\n' line endings, no header.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
std::vector<long> read_labels_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form of every entry.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
void write_labels_csv(const std::filesystem::path& path, const std::vector<long>& labels);

/// Reads view_0.csv, view_1.csv, ... (contiguous from 0) and an optional
/// labels.csv. The dataset is named after the directory.
MultiviewDataset load_dataset(const std::filesystem::path& dir);
void write_dataset(const std::filesystem::path& dir, const MultiviewDataset& data);

std::string format_double(double v);

}  // namespace sdsne::io
