#include "knrspec/lindblad.hpp"

#include "knrspec/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace knrspec {
namespace {

using SparseOp = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

constexpr double kTraceFatal = 1e-6;
constexpr double kNegativeFatal = -1e-5;
constexpr double kNegativeWarn = -1e-7;

SparseOp sparse(const OperatorMatrix& m) { return m.sparseView(0.0, 0.0); }

void check_dims(const OperatorMatrix& rho, const OperatorMatrix& h, const CollapseSet& c) {
  if (rho.rows() != rho.cols() || h.rows() != h.cols() || rho.rows() != h.rows())
    throw std::invalid_argument("lindblad: density matrix and Hamiltonian dimensions differ");
  for (const auto& l : c.operators)
    if (l.rows() != rho.rows() || l.cols() != rho.cols())
      throw std::invalid_argument("lindblad: collapse operator dimension mismatch");
}

// Column-stacked superoperator form of the Lindblad generator, split into a
// static part and one pair of parts per drive term.
SparseOp spre(const SparseOp& a) {
  SparseOp id(a.rows(), a.cols());
  id.setIdentity();
  return Eigen::kroneckerProduct(id, a);
}

SparseOp spost(const SparseOp& a) {
  SparseOp id(a.rows(), a.cols());
  id.setIdentity();
  return Eigen::kroneckerProduct(SparseOp(a.transpose()), id);
}

class Generator {
 public:
  Generator(const TimeDependentHamiltonian& h, const CollapseSet& collapse) {
    const Complex minus_i(0.0, -1.0);
    auto commutator_super = [&](const OperatorMatrix& op) {
      const SparseOp s = sparse(op);
      return SparseOp(minus_i * (spre(s) - spost(s)));
    };
    static_ = commutator_super(h.static_part());
    for (const auto& d : h.drives()) {
      if (d.strength == 0.0) continue;
      drives_.push_back({d.strength, d.frequency, commutator_super(d.lowering),
                         commutator_super(d.raising)});
    }
    for (const auto& l : collapse.operators) {
      const SparseOp ls = sparse(l);
      const SparseOp n = sparse(l.adjoint() * l);
      static_ += SparseOp(Eigen::kroneckerProduct(SparseOp(ls.conjugate()), ls));
      static_ -= SparseOp(0.5 * (spre(n) + spost(n)));
    }
    static_.prune(Complex(0.0));
    static_.makeCompressed();
  }

  void operator()(double t, const OperatorMatrix& rho, OperatorMatrix& out) {
    const Eigen::Index n = rho.size();
    out.resize(rho.rows(), rho.cols());
    const Eigen::Map<const Eigen::VectorXcd> v(rho.data(), n);
    Eigen::Map<Eigen::VectorXcd> o(out.data(), n);
    o.noalias() = static_ * v;
    for (const auto& d : drives_) {
      const Complex phase = std::polar(d.strength, d.frequency * t);
      o.noalias() += phase * (d.lowering * v);
      o.noalias() += std::conj(phase) * (d.raising * v);
    }
  }

 private:
  struct Drive {
    double strength;
    double frequency;
    SparseOp lowering;
    SparseOp raising;
  };
  SparseOp static_;
  std::vector<Drive> drives_;
};

class Monitor {
 public:
  Monitor(Trajectory& traj, const StateObserver& observer) : traj_(traj), observer_(observer) {}

  void step(const OperatorMatrix& rho, double t) {
    const double tr = std::abs(rho.trace() - Complex(1.0));
    traj_.max_trace_drift = std::max(traj_.max_trace_drift, tr);
    traj_.max_hermiticity_drift = std::max(traj_.max_hermiticity_drift, hermiticity_error(rho));
    if (tr > kTraceFatal) throw IntegrationError(t, "trace drift " + std::to_string(tr));
    if (!std::isfinite(tr)) throw IntegrationError(t, "non-finite density matrix");
  }

  void record(const OperatorMatrix& rho, double t) {
    TrajectorySample s;
    s.time = t;
    s.trace_error = std::abs(rho.trace() - Complex(1.0));
    s.hermiticity_error = hermiticity_error(rho);
    const OperatorMatrix herm = 0.5 * (rho + rho.adjoint());
    s.min_eigenvalue = Eigen::SelfAdjointEigenSolver<OperatorMatrix>(herm, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
    if (traj_.samples.empty() || s.min_eigenvalue < traj_.min_eigenvalue)
      traj_.min_eigenvalue = s.min_eigenvalue;
    traj_.samples.push_back(s);
    if (s.min_eigenvalue < kNegativeFatal)
      throw IntegrationError(t, "negative eigenvalue " + std::to_string(s.min_eigenvalue));
    if (s.min_eigenvalue < kNegativeWarn)
      traj_.warnings.push_back("negative eigenvalue " + std::to_string(s.min_eigenvalue) +
                               " at t = " + std::to_string(t));
    if (observer_) observer_(t, rho);
  }

 private:
  Trajectory& traj_;
  const StateObserver& observer_;
};

void integrate_rk4(Generator& f, OperatorMatrix& rho, double t0, double duration, double dt,
                   int stride, Monitor& mon, Trajectory& traj) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(duration / dt - 1e-9)));
  const double h = duration / static_cast<double>(n);
  const Eigen::Index d = rho.rows();
  OperatorMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), y(d, d);
  for (std::size_t s = 0; s < n; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    f(t, rho, k1);
    y = rho + (0.5 * h) * k1;
    f(t + 0.5 * h, y, k2);
    y = rho + (0.5 * h) * k2;
    f(t + 0.5 * h, y, k3);
    y = rho + h * k3;
    f(t + h, y, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = t0 + static_cast<double>(s + 1) * h;
    mon.step(rho, t_next);
    if (stride > 0 && (s + 1) % static_cast<std::size_t>(stride) == 0 && s + 1 < n)
      mon.record(rho, t_next);
  }
  traj.steps = n;
}

// Dormand-Prince 5(4) with first-same-as-last and standard step control.
void integrate_dp45(Generator& f, OperatorMatrix& rho, double t0, double duration,
                    const SolverConfig& cfg, double dt_guess, Monitor& mon, Trajectory& traj) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Eigen::Index d = rho.rows();
  OperatorMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d), y(d, d),
      err(d, d);
  const double t_end = t0 + duration;
  double t = t0;
  double h = std::min(cfg.dt_max, dt_guess);
  f(t, rho, k1);
  std::size_t accepted = 0;
  while (t < t_end) {
    bool last = false;
    if (t + h >= t_end * (1.0 - 1e-15) || t + h >= t_end) {
      h = t_end - t;
      last = true;
    }
    y = rho + (h * a21) * k1;
    f(t + c2 * h, y, k2);
    y = rho + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, y, k3);
    y = rho + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, y, k4);
    y = rho + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, y, k5);
    y = rho + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, y, k6);
    y = rho + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, y, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Eigen::ArrayXXd scale =
        cfg.abs_tol + cfg.rel_tol * rho.cwiseAbs().array().max(y.cwiseAbs().array());
    const double en = (err.cwiseAbs().array() / scale).maxCoeff();
    if (!std::isfinite(en)) throw IntegrationError(t, "non-finite error estimate");
    if (en <= 1.0) {
      t = last ? t_end : t + h;
      rho.swap(y);
      k1.swap(k7);
      ++accepted;
      mon.step(rho, t);
      if (cfg.record_stride > 0 && accepted % static_cast<std::size_t>(cfg.record_stride) == 0 &&
          !last)
        mon.record(rho, t);
      if (last) break;
    } else {
      ++traj.rejected_steps;
    }
    const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h = std::min(cfg.dt_max, h * (en <= 1.0 ? factor : std::min(1.0, factor)));
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationError(t, "step size underflow");
  }
  traj.steps = accepted;
}

}  // namespace

DensityMatrix DensityMatrix::pure(const StateVector& psi, double time) {
  const StateVector n = psi / psi.norm();
  return {n * n.adjoint(), time};
}

DensityMatrix DensityMatrix::basis(Eigen::Index dim, Eigen::Index index, double time) {
  return pure(basis_state(dim, index), time);
}

double DensityMatrix::min_eigenvalue() const {
  const OperatorMatrix herm = 0.5 * (matrix + matrix.adjoint());
  return Eigen::SelfAdjointEigenSolver<OperatorMatrix>(herm, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

void DensityMatrix::validate() const {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
    throw ValidationError("density_matrix_square", "density matrix must be square and nonempty");
  if (hermiticity_error(matrix) > 1e-10)
    throw ValidationError("density_matrix_hermitian", "density matrix is not Hermitian");
  if (trace_error() > 1e-9)
    throw ValidationError("density_matrix_trace", "trace differs from 1 by " +
                                                      std::to_string(trace_error()));
  if (min_eigenvalue() < -1e-7)
    throw ValidationError("density_matrix_positive", "negative eigenvalue " +
                                                         std::to_string(min_eigenvalue()));
}

CollapseSet CollapseSet::amplitude_damping(const ModeLayout& layout, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("amplitude_damping: gamma must be >= 0");
  CollapseSet c;
  if (gamma == 0.0) return c;
  for (int m = 1; m <= layout.modes(); ++m)
    c.operators.push_back(std::sqrt(gamma) *
                          embed(ladder_ops(layout.local_dim(m)).annihilation, m, layout));
  return c;
}

double CollapseSet::max_rate() const {
  double r = 0.0;
  for (const auto& l : operators) r = std::max(r, std::pow(max_abs(l), 2));
  return r;
}

OperatorMatrix lindblad_rhs(const OperatorMatrix& rho, const OperatorMatrix& hamiltonian,
                            const CollapseSet& collapse) {
  check_dims(rho, hamiltonian, collapse);
  const Complex minus_i(0.0, -1.0);
  OperatorMatrix out = minus_i * commutator(hamiltonian, rho);
  for (const auto& l : collapse.operators) {
    const OperatorMatrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

Trajectory evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& hamiltonian,
                  const CollapseSet& collapse, double duration, const SolverConfig& cfg,
                  const StateObserver& observer) {
  check_dims(rho0.matrix, hamiltonian.static_part(), collapse);
  if (!(duration >= 0.0)) throw std::invalid_argument("evolve: duration must be >= 0");
  if (!(cfg.dt_max > 0.0)) throw std::invalid_argument("evolve: dt_max must be positive");
  rho0.validate();

  Trajectory traj;
  Monitor mon(traj, observer);
  OperatorMatrix rho = rho0.matrix;
  const double t0 = rho0.time;
  if (duration > 0.0) {
    Generator f(hamiltonian, collapse);
    const double rate = hamiltonian.max_element() + collapse.max_rate();
    const double dt_resolve = rate > 0.0 ? 0.1 / rate : cfg.dt_max;
    const double dt = std::min(cfg.dt_max, dt_resolve);
    if (cfg.method == IntegrationMethod::Rk4)
      integrate_rk4(f, rho, t0, duration, dt, cfg.record_stride, mon, traj);
    else
      integrate_dp45(f, rho, t0, duration, cfg, dt, mon, traj);
  }
  mon.record(rho, t0 + duration);
  traj.final_state = {rho, t0 + duration};
  return traj;
}

double excitation_probability(const OperatorMatrix& rho, int mode, const ModeLayout& layout) {
  if (layout.local_dim(mode) != 2)
    throw std::invalid_argument("excitation_probability: mode " + std::to_string(mode) +
                                " is not a qubit");
  if (rho.rows() != layout.dim() || rho.cols() != layout.dim())
    throw std::invalid_argument("excitation_probability: dimension mismatch");
  double p = 0.0;
  for (Eigen::Index i = 0; i < layout.dim(); ++i)
    if (layout.digit(i, mode) == 1) p += rho(i, i).real();
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace knrspec
