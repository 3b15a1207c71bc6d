#pragma once

#include <string>

#include <Eigen/Dense>

namespace hdcd {

/// Reads a rectangular numeric CSV into a panel (rows = time, columns =
/// coordinates). A single non-numeric first row is treated as a header and
/// skipped. Ragged rows and non-numeric cells are reported with their
/// line/column numbers.
Eigen::MatrixXd load_csv(const std::string& path);

/// Writes a panel as CSV at 17 significant digits, so a save/load round
/// trip is lossless.
void save_csv(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& X);

}  // namespace hdcd
