#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dirmh/adaptive.hpp"
#include "dirmh/kernels.hpp"

namespace dirmh {

// Writes states as CSV with header x1..xd and 17-significant-digit values,
// so reading the file back reproduces every double bit for bit.
void emit_chain_csv(const Eigen::MatrixXd& states, const std::string& path);
void emit_chain_csv(const Chain& chain, const std::string& path);

// Reads a chain written by emit_chain_csv. Throws IoError on filesystem
// problems and ConfigError on malformed content.
Eigen::MatrixXd read_chain_csv(const std::string& path);

// Adaptation trace as CSV: batch_index,log_sigma,batch_acceptance.
void write_adaptation_csv(const std::vector<AdaptTraceRow>& trace,
                          const std::string& path);

}  // namespace dirmh
