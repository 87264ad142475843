#include "knrspec/pipeline.hpp"

#include <chrono>

namespace knrspec {

PipelineResult run_pipeline(const RunConfig& config,
                            const std::optional<std::filesystem::path>& output_dir) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult res;
  res.spectrum = run_sweep(config.params, config.plan, config.solver, config.threads);
  res.table = transition_table(config.params);
  res.peaks = assign_peaks(detect_peaks(res.spectrum, config.peak_options), res.table,
                           config.assign_tolerance);

  res.manifest.version = tool_version();
  res.manifest.config_hash = sha256_hex(serialize_config(config));
  if (output_dir) {
    std::filesystem::create_directories(*output_dir);
    auto emit = [&](const std::string& name, const std::string& content) {
      write_file_atomic(*output_dir / name, content);
      res.manifest.artifacts.push_back({name, sha256_hex(content)});
    };
    if (config.outputs.csv) emit("spectrum.csv", spectrum_csv(res.spectrum));
    if (config.outputs.svg) emit("spectrum.svg", plot_svg(res.spectrum, res.peaks, res.table));
    if (config.outputs.transitions) emit("transitions.csv", transition_table_text(res.table));
    if (config.outputs.peaks) emit("peaks.csv", peak_report_text(res.peaks));
  }
  res.manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (output_dir) write_file_atomic(*output_dir / "manifest.json", res.manifest.to_json());
  return res;
}

}  // namespace knrspec
