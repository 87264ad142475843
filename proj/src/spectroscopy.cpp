#include "knrspec/spectroscopy.hpp"

#include "knrspec/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace knrspec {

std::vector<double> SweepPlan::deltas() const {
  std::vector<double> out(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    out[i] = i == n_points - 1 ? delta_max : delta_min + i * spacing();
  return out;
}

std::vector<std::string> SweepPlan::validate(double gamma) const {
  if (n_points < 2) throw ValidationError("sweep_points", "n_points must be >= 2");
  if (!(delta_min < delta_max))
    throw ValidationError("sweep_range", "delta_min must be below delta_max");
  if (!(duration > 0.0)) throw ValidationError("sweep_duration", "duration must be positive");
  if (observable_mode < 1 || observable_mode > 4)
    throw ValidationError("observable_mode", "observable mode must be in 1..4");
  if (initial_state.size() != 4)
    throw ValidationError("initial_state", "initial state must name four qubits");
  qubit_index(initial_state);
  std::vector<std::string> warnings;
  if (gamma > 0.0 && spacing() > gamma / 3.0)
    warnings.push_back("grid spacing " + std::to_string(rad_per_us_to_mhz(spacing())) +
                       " MHz exceeds gamma/3; peaks may be under-resolved");
  return warnings;
}

Spectrum run_sweep(const SystemParams& params, const SweepPlan& plan, const SolverConfig& cfg,
                   unsigned threads) {
  params.validate();
  Spectrum spec;
  spec.params = params;
  spec.solver = cfg;
  spec.plan = plan;
  spec.warnings = plan.validate(params.gamma);

  const ModeLayout layout = ModeLayout::qubits(4);
  const CollapseSet collapse = CollapseSet::amplitude_damping(layout, params.gamma);
  const DensityMatrix rho0 = DensityMatrix::basis(layout.dim(), qubit_index(plan.initial_state));
  const std::vector<double> deltas = plan.deltas();
  const std::size_t n = deltas.size();

  std::vector<Trajectory> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        SystemParams p = params;
        p.set_probe_detuning(deltas[i]);
        results[i] = evolve(rho0, build_probe_drive(p), collapse, plan.duration, cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw SweepError(deltas[i], e.what());
    }
  }

  spec.points.reserve(n);
  spec.min_eigenvalue = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Trajectory& tr = results[i];
    spec.points.push_back(
        {deltas[i], excitation_probability(tr.final_state.matrix, plan.observable_mode, layout)});
    spec.max_trace_drift = std::max(spec.max_trace_drift, tr.max_trace_drift);
    spec.max_hermiticity_drift = std::max(spec.max_hermiticity_drift, tr.max_hermiticity_drift);
    spec.min_eigenvalue = std::min(spec.min_eigenvalue, tr.min_eigenvalue);
    for (const auto& w : tr.warnings) spec.warnings.push_back(w);
  }
  return spec;
}

PeakSet detect_peaks(const Spectrum& spectrum, const PeakOptions& options) {
  const auto& pts = spectrum.points;
  PeakSet out;
  if (pts.size() < 3) throw std::invalid_argument("detect_peaks: need at least 3 points");
  double lo = pts.front().p_e, hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.p_e);
    hi = std::max(hi, p.p_e);
  }
  const double range = hi - lo;
  if (range <= options.min_dynamic_range) return out;

  const std::size_t n = pts.size();
  std::vector<Peak> candidates;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y = pts[i].p_e;
    if (!(y > pts[i - 1].p_e && y >= pts[i + 1].p_e)) continue;
    // topographic prominence: lowest point on each side before higher ground
    double left_min = y, right_min = y;
    for (std::size_t j = i; j-- > 0;) {
      if (pts[j].p_e > y) break;
      left_min = std::min(left_min, pts[j].p_e);
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pts[j].p_e > y) break;
      right_min = std::min(right_min, pts[j].p_e);
    }
    const double prominence = y - std::max(left_min, right_min);
    if (prominence < options.prominence * range) continue;

    const double y0 = pts[i - 1].p_e, y2 = pts[i + 1].p_e;
    const double h = pts[i + 1].delta - pts[i].delta;
    const double curvature = y0 - 2.0 * y + y2;
    double offset = 0.0;
    if (curvature < 0.0) offset = std::clamp(0.5 * (y0 - y2) / curvature, -0.5, 0.5);
    Peak pk;
    pk.delta = pts[i].delta + offset * h;
    pk.height = std::clamp(y - 0.25 * (y0 - y2) * offset, 0.0, 1.0);
    pk.prominence = prominence;
    candidates.push_back(pk);
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Peak& a, const Peak& b) { return a.height > b.height; });
  for (const auto& c : candidates) {
    const bool near = std::any_of(out.peaks.begin(), out.peaks.end(), [&](const Peak& p) {
      return std::abs(p.delta - c.delta) < options.merge_radius;
    });
    if (!near) out.peaks.push_back(c);
  }
  std::sort(out.peaks.begin(), out.peaks.end(),
            [](const Peak& a, const Peak& b) { return a.delta < b.delta; });
  return out;
}

PeakSet assign_peaks(PeakSet peaks, std::span<const TransitionRow> table, double tolerance) {
  if (table.empty()) throw std::invalid_argument("assign_peaks: empty transition table");
  for (auto& pk : peaks.peaks) {
    pk.assigned.clear();
    pk.assignment_error = std::numeric_limits<double>::infinity();
    const auto nearest = std::min_element(table.begin(), table.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.energy - pk.delta) < std::abs(b.energy - pk.delta);
    });
    const double err = std::abs(nearest->energy - pk.delta);
    if (err > tolerance) continue;
    pk.assignment_error = err;
    for (const auto& row : table)
      if (std::abs(row.energy - nearest->energy) < tolerance) pk.assigned.push_back(row.label());
  }
  return peaks;
}

}  // namespace knrspec
