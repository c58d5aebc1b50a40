#include "dirmh/chain_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace dirmh {

namespace {

// Shortest text that still round-trips a double exactly.
std::string format_value(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

void emit_chain_csv(const Eigen::MatrixXd& states, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  const long d = states.cols();
  for (long j = 0; j < d; ++j) {
    out << (j ? ",x" : "x") << j + 1;
  }
  out << "\n";
  for (long i = 0; i < states.rows(); ++i) {
    for (long j = 0; j < d; ++j) {
      if (j) out << ',';
      out << format_value(states(i, j));
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void emit_chain_csv(const Chain& chain, const std::string& path) {
  emit_chain_csv(chain.states, path);
}

Eigen::MatrixXd read_chain_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open chain file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv", "empty chain file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  long d = 0;
  {
    std::stringstream head(line);
    std::string cell;
    while (std::getline(head, cell, ',')) {
      ++d;
      if (cell != "x" + std::to_string(d)) {
        throw ConfigError("csv", "chain header must be x1..xd");
      }
    }
  }
  if (d == 0) throw ConfigError("csv", "chain header must be x1..xd");

  std::vector<double> values;
  long rows = 0;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    long cols = 0;
    while (std::getline(ss, cell, ',')) {
      // strtod instead of std::stod: stod rejects subnormals (strtod flags
      // them with ERANGE), which would break the bitwise round-trip contract.
      const char* begin = cell.c_str();
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end != begin + cell.size() || cell.empty() || !std::isfinite(value)) {
        throw ConfigError("csv", "non-numeric cell at line " + std::to_string(line_no));
      }
      values.push_back(value);
      ++cols;
    }
    if (cols != d) {
      throw ConfigError("csv", "wrong column count at line " + std::to_string(line_no));
    }
    ++rows;
  }
  if (rows == 0) throw ConfigError("csv", "no states in " + path);

  Eigen::MatrixXd states(rows, d);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < d; ++j) states(i, j) = values[static_cast<std::size_t>(i * d + j)];
  }
  return states;
}

void write_adaptation_csv(const std::vector<AdaptTraceRow>& trace,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "batch_index,log_sigma,batch_acceptance\n";
  for (const auto& row : trace) {
    out << row.batch_index << ',' << format_value(row.log_sigma) << ','
        << format_value(row.batch_acceptance) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace dirmh
