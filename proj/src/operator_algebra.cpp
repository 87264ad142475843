#include "knrspec/operator_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace knrspec {

ModeLayout::ModeLayout(std::vector<int> mode_dims) : dims_(std::move(mode_dims)) {
  if (dims_.empty()) throw std::invalid_argument("ModeLayout: at least one mode required");
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("ModeLayout: local dimension must be >= 2");
    total_ *= d;
  }
}

int ModeLayout::local_dim(int mode) const {
  if (mode < 1 || mode > modes())
    throw std::invalid_argument("ModeLayout: mode " + std::to_string(mode) + " out of range");
  return dims_[mode - 1];
}

Eigen::Index ModeLayout::stride(int mode) const {
  local_dim(mode);
  Eigen::Index s = 1;
  for (int m = mode + 1; m <= modes(); ++m) s *= dims_[m - 1];
  return s;
}

int ModeLayout::digit(Eigen::Index index, int mode) const {
  return static_cast<int>((index / stride(mode)) % local_dim(mode));
}

Eigen::Index ModeLayout::index_of(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != modes())
    throw std::invalid_argument("ModeLayout::index_of: wrong number of digits");
  Eigen::Index idx = 0;
  for (int m = 1; m <= modes(); ++m) {
    const int d = digits[m - 1];
    if (d < 0 || d >= dims_[m - 1])
      throw std::invalid_argument("ModeLayout::index_of: digit out of range");
    idx = idx * dims_[m - 1] + d;
  }
  return idx;
}

OperatorMatrix identity(Eigen::Index dim) { return OperatorMatrix::Identity(dim, dim); }

OperatorMatrix sigma_minus() {
  OperatorMatrix m = OperatorMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

OperatorMatrix sigma_plus() {
  OperatorMatrix m = OperatorMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

OperatorMatrix sigma_x() { return sigma_minus() + sigma_plus(); }

OperatorMatrix sigma_z() {
  OperatorMatrix m = OperatorMatrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

LadderOperators ladder_ops(int local_dim) {
  if (local_dim < 2) throw std::invalid_argument("ladder_ops: local_dim must be >= 2");
  OperatorMatrix a = OperatorMatrix::Zero(local_dim, local_dim);
  for (int n = 1; n < local_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {a, a.adjoint()};
}

void fix_phase(Eigen::Ref<StateVector> v) {
  if (v.size() == 0) return;
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  Eigen::Index k = 0;
  // first component within rounding of the maximum, so ties resolve deterministically
  while (std::abs(v(k)) < peak * (1.0 - 1e-12)) ++k;
  v *= std::conj(v(k)) / std::abs(v(k));
  v(k) = std::abs(v(k));
}

HermitianEigensystem hermitian_eigensystem(const OperatorMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigensystem: matrix not square");
  const double scale = std::max(1.0, max_abs(m));
  if (hermiticity_error(m) > 1e-10 * scale)
    throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigensystem: decomposition did not converge");
  HermitianEigensystem out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) fix_phase(out.eigenvectors.col(c));
  return out;
}

StateVector basis_state(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw std::invalid_argument("basis_state: index out of range");
  StateVector v = StateVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

}  // namespace knrspec
