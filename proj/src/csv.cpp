#include "cbggm/csv.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cbggm {

namespace {

std::vector<double> parse_numeric_row(const std::string& line, int line_number) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("CSV line " + std::to_string(line_number) +
                                     ": non-numeric cell '" + cell + "'");
        }
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size())
            throw std::runtime_error("CSV line " + std::to_string(line_number) +
                                     ": non-numeric cell '" + cell + "'");
        row.push_back(value);
    }
    return row;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        rows.push_back(parse_numeric_row(line, line_number));
        if (rows.back().size() != rows.front().size())
            throw std::runtime_error("CSV line " + std::to_string(line_number) + ": ragged row");
    }
    if (rows.empty()) throw std::runtime_error("CSV: no rows");
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
    return m;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    std::ostringstream buf;
    buf.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) buf << ',';
            buf << m(i, j);
        }
        buf << '\n';
    }
    out << buf.str();
}

Dataset ingest_csv(std::istream& in, bool center, bool standardize) {
    std::string header;
    if (!std::getline(in, header) || header.empty())
        throw std::runtime_error("data CSV: missing header row");
    const auto columns = static_cast<int>(std::count(header.begin(), header.end(), ',') + 1);

    std::vector<std::vector<double>> rows;
    std::string line;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        std::vector<double> row = parse_numeric_row(line, line_number);
        if (static_cast<int>(row.size()) != columns)
            throw std::runtime_error("data CSV line " + std::to_string(line_number) +
                                     ": expected " + std::to_string(columns) + " cells, got " +
                                     std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    const int n_obs = static_cast<int>(rows.size());
    if (n_obs < 1) throw std::runtime_error("data CSV: no data rows");

    Eigen::MatrixXd x(n_obs, columns);
    for (int i = 0; i < n_obs; ++i)
        for (int j = 0; j < columns; ++j) x(i, j) = rows[i][j];

    if (center) x.rowwise() -= x.colwise().mean();
    if (standardize) {
        for (int j = 0; j < columns; ++j) {
            const double ss = x.col(j).squaredNorm() / std::max(1, n_obs - 1);
            const double sd = std::sqrt(ss);
            if (sd > 0.0) x.col(j) /= sd;
        }
    }

    Eigen::MatrixXd scatter = x.transpose() * x;
    scatter = 0.5 * (scatter + scatter.transpose()).eval();  // exact symmetry
    return Dataset(n_obs, std::move(scatter));
}

}  // namespace cbggm
