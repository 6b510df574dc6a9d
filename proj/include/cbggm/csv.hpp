#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "cbggm/gwishart.hpp"

namespace cbggm {

// Rectangular numeric CSV without a header.
Eigen::MatrixXd read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

// Data CSV with one header row and N numeric rows. Columns are centered by
// default (and optionally scaled to unit standard deviation); the dataset
// keeps N and the scatter matrix X^T X of the transformed columns.
Dataset ingest_csv(std::istream& in, bool center = true, bool standardize = false);

}  // namespace cbggm
