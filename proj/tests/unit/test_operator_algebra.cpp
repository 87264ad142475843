#include "knrspec/operator_algebra.hpp"
#include "unit/support.hpp"

#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

using namespace knrspec;

namespace {

OperatorMatrix kron_chain(const std::vector<OperatorMatrix>& factors) {
  OperatorMatrix out = OperatorMatrix::Identity(1, 1);
  for (const auto& f : factors) out = Eigen::kroneckerProduct(out, f).eval();
  return out;
}

}  // namespace

TEST_CASE("single-qubit operators use index 0 for the down state") {
  CHECK(sigma_minus()(0, 1) == Complex(1.0));
  CHECK(sigma_minus()(1, 0) == Complex(0.0));
  CHECK(sigma_plus()(1, 0) == Complex(1.0));
  CHECK(sigma_z()(0, 0) == Complex(-1.0));
  CHECK(sigma_z()(1, 1) == Complex(1.0));
  CHECK(max_abs(sigma_x() - (sigma_minus() + sigma_plus())) == 0.0);
  CHECK(max_abs(commutator(sigma_plus(), sigma_minus()) - sigma_z()) == 0.0);
}

TEST_CASE("embed of sigma_z on the first of two modes") {
  const OperatorMatrix z1 = embed(sigma_z(), 1, ModeLayout::qubits(2));
  OperatorMatrix expected = OperatorMatrix::Zero(4, 4);
  expected.diagonal() << -1, -1, 1, 1;
  CHECK(max_abs(z1 - expected) == 0.0);
}

TEST_CASE("embed of the identity is the identity") {
  const auto layout = ModeLayout::qubits(4);
  for (int k = 1; k <= 4; ++k) CHECK(max_abs(embed(identity(2), k, layout) - identity(16)) == 0.0);
}

TEST_CASE("embed of sigma_plus on mode 2 of two has two unit entries") {
  const OperatorMatrix p2 = embed(sigma_plus(), 2, ModeLayout::qubits(2));
  int nonzero = 0;
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j)
      if (p2(i, j) != Complex(0.0)) {
        ++nonzero;
        CHECK(p2(i, j) == Complex(1.0));
      }
  CHECK(nonzero == 2);
  CHECK(p2(1, 0) == Complex(1.0));
  CHECK(p2(3, 2) == Complex(1.0));
}

TEST_CASE("embed agrees with an explicit Kronecker chain") {
  std::mt19937_64 rng(11);
  const ModeLayout layout({2, 3, 2});
  for (int mode = 1; mode <= 3; ++mode) {
    const OperatorMatrix local = test::random_hermitian(layout.local_dim(mode), rng);
    std::vector<OperatorMatrix> factors;
    for (int m = 1; m <= 3; ++m)
      factors.push_back(m == mode ? local : identity(layout.local_dim(m)));
    CHECK(max_abs(embed(local, mode, layout) - kron_chain(factors)) < 1e-15);
  }
}

TEST_CASE("embed works for real scalar types") {
  Eigen::Matrix2d z;
  z << -1, 0, 0, 1;
  const Eigen::MatrixXd e = embed(z, 2, ModeLayout::qubits(2));
  CHECK(e(0, 0) == -1.0);
  CHECK(e(1, 1) == 1.0);
  CHECK(e(2, 2) == -1.0);
}

TEST_CASE("embed is multiplicative and modes commute") {
  std::mt19937_64 rng(5);
  const auto layout = ModeLayout::uniform(3, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const OperatorMatrix a = test::random_hermitian(3, rng), b = test::random_hermitian(3, rng);
    for (int k = 1; k <= 3; ++k) {
      const OperatorMatrix lhs = embed((a * b).eval(), k, layout);
      const OperatorMatrix rhs = embed(a, k, layout) * embed(b, k, layout);
      CHECK(max_abs(lhs - rhs) < 1e-12);
      for (int j = 1; j <= 3; ++j)
        if (j != k)
          CHECK(max_abs(commutator(embed(a, k, layout), embed(b, j, layout))) <= 1e-12);
    }
  }
}

TEST_CASE("embed rejects mismatched dimensions and bad modes") {
  const auto layout = ModeLayout::qubits(3);
  CHECK_THROWS_AS(embed(identity(3), 1, layout), std::invalid_argument);
  CHECK_THROWS_AS(embed(sigma_x(), 0, layout), std::invalid_argument);
  CHECK_THROWS_AS(embed(sigma_x(), 4, layout), std::invalid_argument);
  CHECK_THROWS_AS(ModeLayout({2, 1}), std::invalid_argument);
}

TEST_CASE("mode layout digits and indices") {
  const auto layout = ModeLayout::qubits(4);
  CHECK(layout.dim() == 16);
  CHECK(layout.digit(12, 1) == 1);
  CHECK(layout.digit(12, 2) == 1);
  CHECK(layout.digit(12, 3) == 0);
  CHECK(layout.digit(12, 4) == 0);
  const int digits[4] = {1, 0, 1, 1};
  CHECK(layout.index_of(digits) == 11);
  const ModeLayout mixed({3, 2});
  CHECK(mixed.stride(1) == 2);
  CHECK(mixed.digit(5, 1) == 2);
  CHECK(mixed.digit(5, 2) == 1);
}

TEST_CASE("ladder operators") {
  SUBCASE("two levels reduce to sigma_minus") {
    CHECK(max_abs(ladder_ops(2).annihilation - sigma_minus()) == 0.0);
  }
  SUBCASE("three levels") {
    const auto ops = ladder_ops(3);
    CHECK(ops.annihilation(0, 1) == Complex(1.0));
    CHECK(std::abs(ops.annihilation(1, 2) - std::sqrt(2.0)) < 1e-15);
    CHECK(max_abs(ops.creation - ops.annihilation.adjoint()) == 0.0);
  }
  SUBCASE("number operator") {
    for (int d = 2; d <= 6; ++d) {
      const auto ops = ladder_ops(d);
      const OperatorMatrix n = ops.creation * ops.annihilation;
      for (int i = 0; i < d; ++i) CHECK(std::abs(n(i, i) - double(i)) < 1e-14);
      CHECK(max_abs(n - OperatorMatrix(n.diagonal().asDiagonal())) < 1e-14);
    }
  }
  CHECK_THROWS_AS(ladder_ops(1), std::invalid_argument);
}

TEST_CASE("hermitian eigensystem of small matrices") {
  SUBCASE("diagonal") {
    OperatorMatrix m = OperatorMatrix::Zero(3, 3);
    m.diagonal() << 3, 1, 2;
    const auto es = hermitian_eigensystem(m);
    CHECK(es.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(es.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(es.eigenvalues(2) == doctest::Approx(3.0));
  }
  SUBCASE("sigma_x with fixed phases") {
    const auto es = hermitian_eigensystem(sigma_x());
    CHECK(es.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(es.eigenvalues(1) == doctest::Approx(1.0));
    const double s = 1.0 / std::sqrt(2.0);
    // ties broken toward the lower index
    CHECK(std::abs(es.eigenvectors(0, 0) - s) < 1e-14);
    CHECK(std::abs(es.eigenvectors(1, 0) + s) < 1e-14);
    CHECK(std::abs(es.eigenvectors(0, 1) - s) < 1e-14);
    CHECK(std::abs(es.eigenvectors(1, 1) - s) < 1e-14);
  }
  SUBCASE("non-hermitian input") {
    CHECK_THROWS_AS(hermitian_eigensystem(sigma_minus()), std::invalid_argument);
  }
}

TEST_CASE("hermitian eigensystem reconstructs random matrices") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const OperatorMatrix m = test::random_hermitian(16, rng, 30.0);
    const auto es = hermitian_eigensystem(m);
    const OperatorMatrix& v = es.eigenvectors;
    const double scale = std::max(1.0, max_abs(m));
    CHECK(max_abs(v * es.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint() - m) <=
          1e-9 * scale);
    CHECK(max_abs(v.adjoint() * v - identity(16)) <= 1e-10);
    for (Eigen::Index k = 0; k + 1 < 16; ++k) CHECK(es.eigenvalues(k) <= es.eigenvalues(k + 1));
    for (Eigen::Index k = 0; k < 16; ++k) {
      Eigen::Index imax = 0;
      v.col(k).cwiseAbs().maxCoeff(&imax);
      CHECK(std::abs(v(imax, k).imag()) < 1e-12);
      CHECK(v(imax, k).real() > 0.0);
      CHECK((m * v.col(k) - es.eigenvalues(k) * v.col(k)).norm() <= 1e-9 * scale);
    }
  }
}
