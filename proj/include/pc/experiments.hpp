#pragma once

#include "pc/config.hpp"

#include <string>
#include <vector>

namespace pc {

struct RunResult {
    /// Paths written, in order.
    std::vector<std::string> files;
    /// Experiment-specific results (also written to <experiment>.json next to the resolved config).
    nlohmann::json result;
    std::string csv;
};

/// Runs one experiment and writes <experiment>.csv, <experiment>.json and, with svg, <experiment>.svg into out_dir.
RunResult run(const ExperimentConfig& config, const std::string& out_dir, bool svg);

}  // namespace pc
