#pragma once

#include "knrspec/spectroscopy.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace knrspec {

/// Writes `content` to a sibling temporary file and renames it into place.
/// Throws std::runtime_error naming the path on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string spectrum_csv(const Spectrum& spectrum);
void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);

/// Self-contained SVG: P_e against detuning (MHz), detected peaks as markers and
/// every in-range transition energy as a labeled vertical line.
std::string plot_svg(const Spectrum& spectrum, const PeakSet& peaks,
                     std::span<const TransitionRow> table);
void render_plot(const Spectrum& spectrum, const PeakSet& peaks,
                 std::span<const TransitionRow> table, const std::filesystem::path& path);

std::string transition_table_text(std::span<const TransitionRow> table);
std::string peak_report_text(const PeakSet& peaks);

std::string sha256_hex(std::string_view data);

struct ArtifactRecord {
  std::string name;
  std::string sha256;
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  double wall_clock_seconds = 0.0;
  std::vector<ArtifactRecord> artifacts;

  std::string to_json() const;
};

std::string tool_version();

}  // namespace knrspec
