#include "knrspec/hamiltonian.hpp"

#include "knrspec/errors.hpp"

#include <cmath>
#include <sstream>

namespace knrspec {
namespace {

constexpr double kFrameTol = 1e-9;
constexpr double kMinGap = 1e-6;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool all_finite(const Quad& q) {
  for (double v : q)
    if (!std::isfinite(v)) return false;
  return true;
}

void check_frame(const SystemParams& p) {
  const double left = p.omega_rot[0] + p.omega_rot[1];
  const double right = p.omega_rot[2] + p.omega_rot[3];
  if (std::abs(left - right) > kFrameTol)
    throw ValidationError("frame_condition",
                          "omega_rot1 + omega_rot2 = " + fmt(left) +
                              " differs from omega_rot3 + omega_rot4 = " + fmt(right));
}

}  // namespace

Quad shifted_frequencies(const SystemParams& params) {
  Quad out{};
  for (int j = 0; j < 4; ++j) {
    double half_row = 0.0;
    for (int i = 0; i < 4; ++i)
      if (i != j) half_row += params.J(i, j);
    out[j] = params.omega_tilde[j] + 0.5 * half_row;
  }
  return out;
}

Quad SystemParams::omega() const { return shifted_frequencies(*this); }

double SystemParams::probe_detuning() const { return omega_drive[1] - omega()[1]; }

void SystemParams::set_probe_detuning(double delta) { omega_drive[1] = omega()[1] + delta; }

void SystemParams::validate() const {
  for (int i = 0; i < 4; ++i) {
    if (J(i, i) != 0.0) throw ValidationError("J_zero_diagonal", "J(" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ") is nonzero");
    for (int j = i + 1; j < 4; ++j) {
      if (!std::isfinite(J(i, j)) || J(i, j) != J(j, i))
        throw ValidationError("J_symmetric", "J(" + std::to_string(i + 1) + "," +
                                                 std::to_string(j + 1) +
                                                 ") is not finite or not symmetric");
    }
  }
  if (!all_finite(omega_tilde) || !all_finite(omega_rot) || !all_finite(omega_drive) ||
      !all_finite(kerr) || !all_finite(lambda_drive))
    throw ValidationError("finite_parameters", "frequencies, Kerr and drive strengths must be finite");
  if (!std::isfinite(g) || !std::isfinite(lambda_rabi) || !std::isfinite(lambda_probe))
    throw ValidationError("finite_parameters", "g and drive strengths must be finite");
  if (!std::isfinite(gamma) || gamma < 0.0)
    throw ValidationError("gamma_nonnegative", "gamma = " + fmt(gamma));
  check_frame(*this);
  const Quad w = omega();
  const double left = w[0] + w[1];
  const double right = w[2] + w[3];
  if (std::abs(left - right) > kFrameTol)
    throw ValidationError("frequency_sum_condition", "omega1 + omega2 = " + fmt(left) +
                                                         " differs from omega3 + omega4 = " +
                                                         fmt(right));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(w[i] - w[j]) <= kMinGap)
        throw ValidationError("distinct_frequencies", "omega" + std::to_string(i + 1) +
                                                          " and omega" + std::to_string(j + 1) +
                                                          " coincide");
}

SystemParams make_system_params(const Quad& omega_shifted, const Eigen::Matrix4d& J, double g,
                                double lambda, double lambda_probe, double gamma) {
  SystemParams p;
  p.J = J;
  for (int j = 0; j < 4; ++j) {
    double half_row = 0.0;
    for (int i = 0; i < 4; ++i)
      if (i != j) half_row += J(i, j);
    p.omega_tilde[j] = omega_shifted[j] - 0.5 * half_row;
  }
  p.omega_rot = omega_shifted;
  p.omega_drive = omega_shifted;
  p.g = g;
  p.lambda_rabi = lambda;
  p.lambda_probe = lambda_probe;
  p.lambda_drive = {lambda / 2.0, lambda_probe, 0.0, 0.0};
  p.gamma = gamma;
  return p;
}

Eigen::Index qubit_index(std::string_view pattern) {
  Eigen::Index idx = 0;
  for (char c : pattern) {
    if (c != 'u' && c != 'd')
      throw std::invalid_argument("qubit_index: pattern must contain only 'u' and 'd'");
    idx = 2 * idx + (c == 'u' ? 1 : 0);
  }
  return idx;
}

TimeDependentHamiltonian::TimeDependentHamiltonian(OperatorMatrix static_part,
                                                   std::vector<DriveTerm> drives)
    : static_(std::move(static_part)), drives_(std::move(drives)) {
  for (auto& d : drives_) {
    if (d.lowering.rows() != static_.rows() || d.lowering.cols() != static_.cols())
      throw std::invalid_argument("TimeDependentHamiltonian: drive operator dimension mismatch");
    d.raising = d.lowering.adjoint();
  }
}

OperatorMatrix TimeDependentHamiltonian::at(double t) const {
  OperatorMatrix h = static_;
  for (const auto& d : drives_) {
    if (d.strength == 0.0) continue;
    const Complex phase = std::polar(1.0, d.frequency * t);
    h += (d.strength * phase) * d.lowering + (d.strength * std::conj(phase)) * d.raising;
  }
  return h;
}

double TimeDependentHamiltonian::max_element() const {
  double m = max_abs(static_);
  for (const auto& d : drives_) m += 2.0 * std::abs(d.strength) * max_abs(d.lowering);
  return m;
}

OperatorMatrix build_qubit_h0(const SystemParams& params) {
  params.validate();
  const ModeLayout layout = ModeLayout::qubits(4);
  const Quad w = params.omega();
  std::array<OperatorMatrix, 4> sz, sp, sm;
  for (int j = 0; j < 4; ++j) {
    sz[j] = embed(sigma_z(), j + 1, layout);
    sp[j] = embed(sigma_plus(), j + 1, layout);
    sm[j] = embed(sigma_minus(), j + 1, layout);
  }
  OperatorMatrix h = OperatorMatrix::Zero(16, 16);
  for (int j = 0; j < 4; ++j) h += 0.5 * (w[j] - params.omega_rot[j]) * sz[j];
  h += 0.5 * params.lambda_rabi * embed(sigma_x(), 1, layout);
  const OperatorMatrix four_body = sp[0] * sp[1] * sm[2] * sm[3];
  h += params.g * (four_body + four_body.adjoint());
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) h += 0.25 * params.J(i, j) * sz[i] * sz[j];
  return h;
}

TimeDependentHamiltonian build_probe_drive(const SystemParams& params) {
  OperatorMatrix h0 = build_qubit_h0(params);
  DriveTerm probe;
  probe.strength = params.lambda_probe;
  probe.frequency = params.omega_drive[1] - params.omega_rot[1];
  probe.lowering = embed(sigma_minus(), 2, ModeLayout::qubits(4));
  return TimeDependentHamiltonian(std::move(h0), {std::move(probe)});
}

TimeDependentHamiltonian build_bosonic_h(const SystemParams& params, int fock_cutoff) {
  if (fock_cutoff < 1) throw std::invalid_argument("build_bosonic_h: fock_cutoff must be >= 1");
  params.validate();
  const ModeLayout layout = ModeLayout::uniform(4, fock_cutoff + 1);
  const LadderOperators local = ladder_ops(fock_cutoff + 1);
  std::array<OperatorMatrix, 4> a, ad, n;
  for (int j = 0; j < 4; ++j) {
    a[j] = embed(local.annihilation, j + 1, layout);
    ad[j] = embed(local.creation, j + 1, layout);
    n[j] = ad[j] * a[j];
  }
  OperatorMatrix h = OperatorMatrix::Zero(layout.dim(), layout.dim());
  for (int j = 0; j < 4; ++j) {
    h += (params.omega_tilde[j] - params.omega_rot[j]) * n[j];
    h += params.kerr[j] * n[j] * n[j];
  }
  const OperatorMatrix four_body = ad[0] * ad[1] * a[2] * a[3];
  h += params.g * (four_body + four_body.adjoint());
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) h += params.J(i, j) * n[i] * n[j];

  std::vector<DriveTerm> drives;
  for (int j = 0; j < 4; ++j) {
    if (params.lambda_drive[j] == 0.0) continue;
    DriveTerm d;
    d.strength = params.lambda_drive[j];
    d.frequency = params.omega_drive[j] - params.omega_rot[j];
    d.lowering = a[j];
    drives.push_back(std::move(d));
  }
  return TimeDependentHamiltonian(std::move(h), std::move(drives));
}

}  // namespace knrspec
