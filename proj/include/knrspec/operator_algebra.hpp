#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace knrspec {

using Complex = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense complex operator on a tensor-product Hilbert space.
using OperatorMatrix = MatrixX<Complex>;
using StateVector = VectorX<Complex>;

/// Local dimensions of each mode. Mode 1 is the leftmost (slowest varying)
/// tensor factor; modes are addressed 1-based throughout the library.
class ModeLayout {
 public:
  explicit ModeLayout(std::vector<int> mode_dims);

  static ModeLayout qubits(int n_modes) { return ModeLayout(std::vector<int>(n_modes, 2)); }
  static ModeLayout uniform(int n_modes, int local_dim) {
    return ModeLayout(std::vector<int>(n_modes, local_dim));
  }

  int modes() const { return static_cast<int>(dims_.size()); }
  int local_dim(int mode) const;
  Eigen::Index dim() const { return total_; }
  /// Product of the local dimensions to the right of `mode`.
  Eigen::Index stride(int mode) const;
  /// Occupation of `mode` in computational basis state `index`.
  int digit(Eigen::Index index, int mode) const;
  Eigen::Index index_of(std::span<const int> digits) const;
  const std::vector<int>& dims() const { return dims_; }

  bool operator==(const ModeLayout&) const = default;

 private:
  std::vector<int> dims_;
  Eigen::Index total_ = 1;
};

// Single-qubit operators with index 0 = |0> = |down>, index 1 = |1> = |up>.
OperatorMatrix identity(Eigen::Index dim);
OperatorMatrix sigma_minus();  // |0><1|
OperatorMatrix sigma_plus();   // |1><0|
OperatorMatrix sigma_x();
OperatorMatrix sigma_z();  // |1><1| - |0><0| = diag(-1, +1)

/// I ⊗ ... ⊗ local_op ⊗ ... ⊗ I with local_op acting on `mode` (1-based).
template <typename Derived>
MatrixX<typename Derived::Scalar> embed(const Eigen::MatrixBase<Derived>& local_op, int mode,
                                        const ModeLayout& layout) {
  using Scalar = typename Derived::Scalar;
  if (mode < 1 || mode > layout.modes())
    throw std::invalid_argument("embed: mode index " + std::to_string(mode) + " out of range");
  const Eigen::Index d = layout.local_dim(mode);
  if (local_op.rows() != d || local_op.cols() != d)
    throw std::invalid_argument("embed: local operator is " + std::to_string(local_op.rows()) +
                                "x" + std::to_string(local_op.cols()) + ", mode " +
                                std::to_string(mode) + " has local dimension " +
                                std::to_string(d));
  const Eigen::Index right = layout.stride(mode);
  const Eigen::Index left = layout.dim() / (d * right);
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(layout.dim(), layout.dim());
  for (Eigen::Index l = 0; l < left; ++l)
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const Scalar v = local_op(i, j);
        if (v == Scalar(0)) continue;
        const Eigen::Index row = (l * d + i) * right;
        const Eigen::Index col = (l * d + j) * right;
        for (Eigen::Index r = 0; r < right; ++r) out(row + r, col + r) = v;
      }
  return out;
}

struct LadderOperators {
  OperatorMatrix annihilation;
  OperatorMatrix creation;
};

/// Truncated bosonic ladder operators: a[n-1, n] = sqrt(n).
LadderOperators ladder_ops(int local_dim);

struct HermitianEigensystem {
  Eigen::VectorXd eigenvalues;  // ascending
  OperatorMatrix eigenvectors;  // orthonormal columns
};

/// Dense Hermitian eigendecomposition. Each eigenvector is phased so that its
/// largest-magnitude component (lowest index on ties) is real and positive.
HermitianEigensystem hermitian_eigensystem(const OperatorMatrix& m);

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
double hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

template <typename A, typename B>
auto commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a * b - b * a).eval();
}

/// Phase `v` so that its largest-magnitude component is real and positive.
void fix_phase(Eigen::Ref<StateVector> v);

StateVector basis_state(Eigen::Index dim, Eigen::Index index);

}  // namespace knrspec
