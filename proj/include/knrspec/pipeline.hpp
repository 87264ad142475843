#pragma once

#include "knrspec/artifacts.hpp"
#include "knrspec/config.hpp"

#include <filesystem>
#include <optional>

namespace knrspec {

struct PipelineResult {
  Spectrum spectrum;
  PeakSet peaks;
  std::vector<TransitionRow> table;
  RunManifest manifest;
};

/// Sweep, peak detection, analytic transition table and assignment. When
/// `output_dir` is set the enabled artifacts and manifest.json are written there.
PipelineResult run_pipeline(const RunConfig& config,
                            const std::optional<std::filesystem::path>& output_dir);

}  // namespace knrspec
