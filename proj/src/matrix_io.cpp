#include "dhgl/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace dhgl {

namespace {

double parse_cell(const std::string& token, const std::string& path, std::size_t line) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": bad number '" + token + "'");
  }
  // Allow trailing spaces only; anything else is a malformed cell.
  for (std::size_t i = consumed; i < token.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(token[i])))
      throw std::runtime_error(path + ":" + std::to_string(line) + ": bad number '" + token + "'");
  }
  return value;
}

}  // namespace

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) row.push_back(parse_cell(token, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row (" +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(rows.front().size()) + ")");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix file");

  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace dhgl
