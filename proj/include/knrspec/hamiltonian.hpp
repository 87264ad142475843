#pragma once

#include "knrspec/operator_algebra.hpp"

#include <array>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace knrspec {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Ordinary frequency in MHz to angular frequency in rad/us.
constexpr double mhz_to_rad_per_us(double mhz) { return kTwoPi * mhz; }
constexpr double rad_per_us_to_mhz(double w) { return w / kTwoPi; }

using Quad = std::array<double, 4>;

/// Physical constants of the four-resonator model. All frequencies and rates
/// are angular, in rad/us; gamma in 1/us. Indices 0..3 correspond to modes 1..4.
struct SystemParams {
  Quad omega_tilde{};   // bare resonator frequencies
  Quad omega_rot{};     // rotating-frame frequencies
  Quad omega_drive{};   // drive frequencies
  Quad kerr{};          // Kerr coefficients (bosonic model only)
  Quad lambda_drive{};  // per-mode drive strengths (bosonic model)
  double lambda_rabi = 0.0;   // qubit-1 Rabi drive; the qubit model uses (lambda/2) sigma_x
  double lambda_probe = 0.0;  // probe strength on qubit 2
  double g = 0.0;             // four-body coupling
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();  // cross-Kerr, symmetric with zero diagonal
  double gamma = 0.0;

  /// Shifted frequencies omega_j = omega_tilde_j + 1/2 sum_{i != j} J_ij.
  Quad omega() const;
  /// Probe detuning omega'_2 - omega_2.
  double probe_detuning() const;
  void set_probe_detuning(double delta);

  /// Checks every structural invariant; throws ValidationError naming the
  /// first violated constraint.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

/// Parameter record with the standard spectroscopy settings: the rotating frame
/// coincides with the shifted frequencies, mode 1 is driven resonantly with
/// lambda_1 = lambda/2, mode 2 carries the probe (initially at zero detuning),
/// modes 3 and 4 are undriven and Kerr coefficients are zero.
SystemParams make_system_params(const Quad& omega_shifted, const Eigen::Matrix4d& J, double g,
                                 double lambda, double lambda_probe, double gamma);

Quad shifted_frequencies(const SystemParams& params);

/// Index of a qubit-register basis state written as a pattern of 'u' (up, |1>)
/// and 'd' (down, |0>), mode 1 first: "uudd" -> 12.
Eigen::Index qubit_index(std::string_view pattern);

/// strength * (lowering e^{+i f t} + lowering^dagger e^{-i f t}).
struct DriveTerm {
  double strength = 0.0;
  double frequency = 0.0;
  OperatorMatrix lowering;
  OperatorMatrix raising;
};

class TimeDependentHamiltonian {
 public:
  TimeDependentHamiltonian(OperatorMatrix static_part, std::vector<DriveTerm> drives);

  const OperatorMatrix& static_part() const { return static_; }
  std::span<const DriveTerm> drives() const { return drives_; }
  Eigen::Index dim() const { return static_.rows(); }

  OperatorMatrix at(double t) const;
  /// Upper bound on |H(t)_ij| over all t.
  double max_element() const;

 private:
  OperatorMatrix static_;
  std::vector<DriveTerm> drives_;
};

/// Static qubit-model Hamiltonian H0 on four qubits (16x16).
OperatorMatrix build_qubit_h0(const SystemParams& params);

/// H0 plus the probe drive lambda_2 (sigma_-^(2) e^{i d t} + h.c.), d = omega'_2 - omega_rot^(2).
TimeDependentHamiltonian build_probe_drive(const SystemParams& params);

/// Rotating-frame bosonic Hamiltonian on (fock_cutoff+1)^4 levels, Kerr term K n^2.
TimeDependentHamiltonian build_bosonic_h(const SystemParams& params, int fock_cutoff);

}  // namespace knrspec
