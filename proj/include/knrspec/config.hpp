#pragma once

#include "knrspec/spectroscopy.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace knrspec {

/// Malformed configuration text, annotated with a 1-based line and column.
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

struct OutputOptions {
  std::string directory = "out";
  bool csv = true;
  bool svg = true;
  bool transitions = true;
  bool peaks = true;

  bool operator==(const OutputOptions&) const = default;
};

/// A complete run description. Physical values are stored in rad/us and us;
/// the unit conversion of the source text happens once, in parse_config.
struct RunConfig {
  SystemParams params;
  SweepPlan plan;
  SolverConfig solver;
  PeakOptions peak_options;
  double assign_tolerance = 0.0;  // rad/us
  unsigned threads = 0;
  OutputOptions outputs;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the sectioned key-value format:
///
///   units = MHz                 # or rad_per_us; mandatory
///   [frequencies]  omega | omega_tilde, omega_rot, omega_drive, kerr   (4-vectors)
///   [couplings]    g, J12, J13, J14, J23, J24, J34
///   [drive]        lambda, lambda_probe, lambda_drive (4-vector)
///   [dissipation]  gamma
///   [sweep]        delta_min, delta_max, n_points, duration (us), observable_mode,
///                  initial_state, peak_prominence, merge_radius, assign_tolerance
///   [solver]       method (rk4 | dp45), dt_max (us), rel_tol, abs_tol, record_stride, threads
///   [output]       directory, csv, svg, transitions, peaks
///
/// `#` and `;` start comments. Syntax problems and unknown keys raise
/// ConfigParseError; violated physical constraints raise ValidationError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form in rad_per_us with round-trip precision;
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace knrspec
