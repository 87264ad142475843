#pragma once

#include "knrspec/hamiltonian.hpp"

#include <functional>
#include <string>
#include <vector>

namespace knrspec {

struct DensityMatrix {
  OperatorMatrix matrix;
  double time = 0.0;

  static DensityMatrix pure(const StateVector& psi, double time = 0.0);
  static DensityMatrix basis(Eigen::Index dim, Eigen::Index index, double time = 0.0);

  Eigen::Index dim() const { return matrix.rows(); }
  double trace_error() const { return std::abs(matrix.trace() - Complex(1.0)); }
  double min_eigenvalue() const;
  /// Throws ValidationError unless Hermitian (1e-10), unit trace (1e-9) and
  /// positive semidefinite down to -1e-7.
  void validate() const;
};

struct CollapseSet {
  std::vector<OperatorMatrix> operators;

  /// sqrt(gamma) * sigma_-^(j) (or sqrt(gamma) * a_j) on every mode of the layout.
  static CollapseSet amplitude_damping(const ModeLayout& layout, double gamma);
  /// Largest single-channel rate, max_j max|L_j|^2.
  double max_rate() const;
};

enum class IntegrationMethod { Rk4, Dp45 };

struct SolverConfig {
  IntegrationMethod method = IntegrationMethod::Rk4;
  double dt_max = 0.01;  // us
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int record_stride = 0;  // steps between recorded samples; 0 records the final state only

  bool operator==(const SolverConfig&) const = default;
};

/// -i[H, rho] + sum_j (L_j rho L_j^dag - 1/2 {L_j^dag L_j, rho}).
OperatorMatrix lindblad_rhs(const OperatorMatrix& rho, const OperatorMatrix& hamiltonian,
                            const CollapseSet& collapse);

struct TrajectorySample {
  double time = 0.0;
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

struct Trajectory {
  DensityMatrix final_state;
  std::vector<TrajectorySample> samples;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  double max_trace_drift = 0.0;         // over every accepted step
  double max_hermiticity_drift = 0.0;   // over every accepted step
  double min_eigenvalue = 0.0;          // over recorded samples
  std::vector<std::string> warnings;
};

/// Called at every recorded sample with the current time and state.
using StateObserver = std::function<void(double, const OperatorMatrix&)>;

/// Integrates the master equation from rho0.time to rho0.time + duration. The
/// fixed-step method uses dt = min(dt_max, 0.1 / (max|H_ij| + max rate)) rounded
/// so that an integer number of steps lands exactly on the final time.
Trajectory evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& hamiltonian,
                  const CollapseSet& collapse, double duration, const SolverConfig& cfg,
                  const StateObserver& observer = {});

/// Tr[rho (1 + sigma_z^(mode)) / 2], clamped to [0, 1].
double excitation_probability(const OperatorMatrix& rho, int mode, const ModeLayout& layout);

}  // namespace knrspec
