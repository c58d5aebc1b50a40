#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dirmh/adaptive.hpp"

namespace dirmh {

// Static SVG renderings of chain output: one stacked panel per coordinate.
// Output is plain deterministic text so repeated runs are byte-identical.
void write_trace_svg(const Eigen::MatrixXd& states, const std::string& path);

// Autocorrelation bars per coordinate up to max_lag (capped at n/2), with a
// horizontal line marking the 0.05 cutoff.
void write_acf_svg(const Eigen::MatrixXd& states, const std::string& path,
                   long max_lag = 50);

// Adapted scale sigma = exp(log_sigma) against the batch index.
void write_sigma_svg(const std::vector<AdaptTraceRow>& trace, const std::string& path);

}  // namespace dirmh
