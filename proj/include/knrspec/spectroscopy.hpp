#pragma once

#include "knrspec/analytic.hpp"
#include "knrspec/lindblad.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace knrspec {

struct SweepPlan {
  double delta_min = 0.0;  // rad/us
  double delta_max = 0.0;  // rad/us
  int n_points = 2;
  double duration = 0.0;   // us, evolution time per point
  int observable_mode = 4;
  std::string initial_state = "dddd";  // computational basis pattern

  /// Evenly spaced detunings, endpoints included.
  std::vector<double> deltas() const;
  double spacing() const { return (delta_max - delta_min) / (n_points - 1); }
  /// Throws ValidationError on structural problems; returns resolution warnings
  /// (grid spacing above gamma/3).
  std::vector<std::string> validate(double gamma) const;

  bool operator==(const SweepPlan&) const = default;
};

struct SpectrumPoint {
  double delta = 0.0;  // rad/us
  double p_e = 0.0;
};

struct Spectrum {
  std::vector<SpectrumPoint> points;
  SystemParams params;
  SolverConfig solver;
  SweepPlan plan;
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<std::string> warnings;
};

/// Failure of one sweep point; carries the detuning that failed.
class SweepError : public std::runtime_error {
 public:
  SweepError(double delta, const std::string& what)
      : std::runtime_error("sweep failed at delta = " + std::to_string(rad_per_us_to_mhz(delta)) +
                           " MHz: " + what),
        delta_(delta) {}
  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

/// P_e on the observable mode after evolving each detuning from the initial
/// basis state. Points are distributed over `threads` workers (0 = hardware
/// concurrency); the result does not depend on the thread count.
Spectrum run_sweep(const SystemParams& params, const SweepPlan& plan, const SolverConfig& cfg,
                   unsigned threads = 0);

struct Peak {
  double delta = 0.0;   // rad/us, parabolically refined
  double height = 0.0;
  double prominence = 0.0;
  std::vector<std::string> assigned;  // empty when unassigned; >1 label when merged
  double assignment_error = std::numeric_limits<double>::infinity();
};

struct PeakSet {
  std::vector<Peak> peaks;  // sorted by delta
};

struct PeakOptions {
  double prominence = 0.02;        // fraction of the spectrum's dynamic range
  double merge_radius = 0.0;       // rad/us
  double min_dynamic_range = 1e-9; // flatter spectra have no peaks

  bool operator==(const PeakOptions&) const = default;
};

PeakSet detect_peaks(const Spectrum& spectrum, const PeakOptions& options);

/// Labels each peak with the nearest transition within `tolerance`; every
/// transition closer than `tolerance` to that nearest one joins a merged assignment.
PeakSet assign_peaks(PeakSet peaks, std::span<const TransitionRow> table, double tolerance);

}  // namespace knrspec
