#include "knrspec/analytic.hpp"
#include "knrspec/errors.hpp"
#include "knrspec/hamiltonian.hpp"
#include "unit/support.hpp"

#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <set>

using namespace knrspec;

namespace {

// Independent construction from explicit Kronecker products of 2x2 matrices.
OperatorMatrix on(int mode, const Eigen::Matrix2cd& op) {
  OperatorMatrix out = OperatorMatrix::Identity(1, 1);
  for (int m = 1; m <= 4; ++m) {
    const Eigen::Matrix2cd f = m == mode ? op : Eigen::Matrix2cd::Identity();
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

OperatorMatrix reference_h0(const SystemParams& p) {
  Eigen::Matrix2cd sm, sp, sz, sx;
  sm << 0, 1, 0, 0;
  sp << 0, 0, 1, 0;
  sz << -1, 0, 0, 1;
  sx << 0, 1, 1, 0;
  const Quad w = p.omega();
  OperatorMatrix h = OperatorMatrix::Zero(16, 16);
  for (int j = 0; j < 4; ++j) h += 0.5 * (w[j] - p.omega_rot[j]) * on(j + 1, sz);
  h += 0.5 * p.lambda_rabi * on(1, sx);
  const OperatorMatrix four = on(1, sp) * on(2, sp) * on(3, sm) * on(4, sm);
  h += p.g * (four + four.adjoint());
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) h += 0.25 * p.J(i, j) * on(i + 1, sz) * on(j + 1, sz);
  return h;
}

std::set<Eigen::Index> reachable(const OperatorMatrix& h, Eigen::Index start) {
  std::set<Eigen::Index> seen{start};
  std::vector<Eigen::Index> todo{start};
  while (!todo.empty()) {
    const Eigen::Index i = todo.back();
    todo.pop_back();
    for (Eigen::Index j = 0; j < h.rows(); ++j)
      if (std::abs(h(j, i)) > 0.0 && seen.insert(j).second) todo.push_back(j);
  }
  return seen;
}

}  // namespace

TEST_CASE("shifted frequencies") {
  SystemParams p;
  p.omega_tilde = {1.0, 2.0, 3.0, 4.0};
  CHECK(shifted_frequencies(p) == p.omega_tilde);

  p.omega_tilde = {0.0, 0.0, 0.0, 0.0};
  p.J(0, 1) = p.J(1, 0) = mhz_to_rad_per_us(-0.10);
  CHECK(shifted_frequencies(p)[0] == doctest::Approx(mhz_to_rad_per_us(-0.05)));

  p.J = test::reference_J();
  const Quad w = shifted_frequencies(p);
  for (int j = 0; j < 4; ++j) {
    double row = 0.0;
    for (int i = 0; i < 4; ++i) row += p.J(i, j);
    CHECK(w[j] == doctest::Approx(0.5 * row).epsilon(1e-14));
  }
}

TEST_CASE("standard parameter record") {
  const SystemParams p = test::strong_coupling_params();
  const Quad w = p.omega();
  for (int j = 0; j < 4; ++j) {
    CHECK(w[j] == doctest::Approx(test::reference_omega()[j]).epsilon(1e-15));
    CHECK(p.omega_rot[j] == w[j]);
  }
  CHECK(p.probe_detuning() == doctest::Approx(0.0));
  CHECK(p.lambda_drive[0] == doctest::Approx(0.5 * p.lambda_rabi));
  CHECK(p.lambda_drive[1] == p.lambda_probe);
  SystemParams q = p;
  q.set_probe_detuning(1.25);
  CHECK(q.probe_detuning() == doctest::Approx(1.25));
}

TEST_CASE("parameter validation names the violated constraint") {
  auto constraint_of = [](const SystemParams& p) {
    try {
      p.validate();
    } catch (const ValidationError& e) {
      return std::string(e.constraint());
    }
    return std::string();
  };
  const SystemParams good = test::strong_coupling_params();
  CHECK(constraint_of(good).empty());

  SystemParams p = good;
  p.omega_rot[3] += 1.0;
  CHECK(constraint_of(p) == "frame_condition");

  p = good;
  p.omega_tilde[3] += 1.0;
  p.omega_rot = p.omega();
  p.omega_rot[2] -= 1.0;  // keeps the rotating frame consistent
  CHECK(constraint_of(p) == "frequency_sum_condition");

  p = good;
  p.J(0, 1) += 0.1;
  CHECK(constraint_of(p) == "J_symmetric");

  p = good;
  p.J(2, 2) = 0.1;
  CHECK(constraint_of(p) == "J_zero_diagonal");

  p = good;
  p.gamma = -1.0;
  CHECK(constraint_of(p) == "gamma_nonnegative");

  p = good;
  p.g = std::numeric_limits<double>::quiet_NaN();
  CHECK(constraint_of(p) == "finite_parameters");

  p = make_system_params({1.0, 2.0, 1.0, 2.0}, Eigen::Matrix4d::Zero(), 0, 0, 0, 0);
  CHECK(constraint_of(p) == "distinct_frequencies");
}

TEST_CASE("frame-condition errors print both sums") {
  SystemParams p = test::strong_coupling_params();
  p.omega_rot[3] += 1.0;
  try {
    p.validate();
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("omega_rot1 + omega_rot2 = ") != std::string::npos);
    CHECK(msg.find("omega_rot3 + omega_rot4 = ") != std::string::npos);
  }
}

TEST_CASE("qubit H0 matches an independent Kronecker construction") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) J(i, j) = J(j, i) = u(rng);
    const double w1 = 1000 + u(rng), w2 = 1000 + u(rng), w3 = 1000 + u(rng);
    SystemParams p = make_system_params({w1, w2, w3, w1 + w2 - w3}, J, u(rng), std::abs(u(rng)),
                                        0.1, 0.0);
    // rotating frame away from the shifted frequencies, still consistent
    const double c3 = u(rng), c4 = u(rng);
    p.omega_rot[1] += c3 + c4;
    p.omega_rot[2] += c3;
    p.omega_rot[3] += c4;
    CHECK(max_abs(build_qubit_h0(p) - reference_h0(p)) < 1e-12);
  }
}

TEST_CASE("H0 structure") {
  SUBCASE("resonant frame without couplings vanishes") {
    const SystemParams p = make_system_params({1.0, 2.0, 0.5, 2.5}, Eigen::Matrix4d::Zero(), 0.0,
                                              0.0, 0.0, 0.0);
    CHECK(max_abs(build_qubit_h0(p)) == 0.0);
  }
  const SystemParams p = test::strong_coupling_params();
  const OperatorMatrix h = build_qubit_h0(p);
  CHECK(hermiticity_error(h) <= 1e-12);

  SUBCASE("four-body element") {
    CHECK(std::abs(h(qubit_index("uudd"), qubit_index("dduu")) - p.g) < 1e-12);
    const SystemParams q =
        make_system_params(test::reference_omega(), Eigen::Matrix4d::Zero(), p.g, 0.0, 0.0, 0.0);
    OperatorMatrix four = build_qubit_h0(q);
    int nonzero = 0;
    for (Eigen::Index i = 0; i < 16; ++i)
      for (Eigen::Index j = 0; j < 16; ++j)
        if (std::abs(four(i, j)) > 0.0) ++nonzero;
    CHECK(nonzero == 2);
  }

  SUBCASE("rabi term acts on mode 1 only") {
    const SystemParams q = make_system_params(test::reference_omega(), Eigen::Matrix4d::Zero(),
                                              0.0, p.lambda_rabi, 0.0, 0.0);
    CHECK(max_abs(build_qubit_h0(q) - 0.5 * q.lambda_rabi * embed(sigma_x(), 1,
                                                                  ModeLayout::qubits(4))) <
          1e-12);
  }

  SUBCASE("cross-Kerr diagonal") {
    SystemParams q = p;
    q.g = 0.0;
    q.lambda_rabi = 0.0;
    const OperatorMatrix hz = build_qubit_h0(q);
    const auto layout = ModeLayout::qubits(4);
    for (Eigen::Index s = 0; s < 16; ++s) {
      double e = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          e += 0.25 * q.J(i, j) * (2 * layout.digit(s, i + 1) - 1) * (2 * layout.digit(s, j + 1) - 1);
      CHECK(std::abs(hz(s, s) - e) < 1e-12);
    }
  }

  SUBCASE("invariant subsets") {
    const auto from_ground = reachable(h, qubit_index("dddd"));
    CHECK(from_ground == std::set<Eigen::Index>{qubit_index("dddd"), qubit_index("uddd")});
    const auto from_a = reachable(h, qubit_index("uudd"));
    CHECK(from_a == std::set<Eigen::Index>{qubit_index("uudd"), qubit_index("dudd"),
                                           qubit_index("dduu"), qubit_index("uduu")});
  }
}

TEST_CASE("subspace A diagonal is the closed-form block up to one common shift") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) J(i, j) = J(j, i) = u(rng);
    const double w1 = 500 + u(rng), w2 = 520 + u(rng), w3 = 480 + u(rng);
    SystemParams p = make_system_params({w1, w2, w3, w1 + w2 - w3}, J, u(rng), 1.0, 0.0, 0.0);
    // mode 1 stays resonant; modes 2..4 move consistently
    const double c3 = u(rng), c4 = u(rng);
    p.omega_rot[1] += c3 + c4;
    p.omega_rot[2] += c3;
    p.omega_rot[3] += c4;
    const OperatorMatrix h = build_qubit_h0(p);
    const CouplingCombos c = CouplingCombos::from(J);
    const double target[4] = {c.J_plus, c.J_minus, c.J_plus, c.J_minus};
    double shift[4];
    for (int k = 0; k < 4; ++k) shift[k] = h(basis::subspace_a[k], basis::subspace_a[k]).real() - target[k];
    for (int k = 1; k < 4; ++k) CHECK(shift[k] == doctest::Approx(shift[0]).epsilon(1e-12));
    CHECK(shift[0] == doctest::Approx(subspace_a_shift(p)).epsilon(1e-12));
  }
}

TEST_CASE("H0 spectrum with the strong-coupling parameters") {
  // eigenvalues in MHz from an independent numpy construction
  const double expected[16] = {-4.884453946932, -0.880609837060, -0.880609837060, -0.355535431835,
                               -0.355535431835, -0.349097448159, -0.349097448159, -0.119783262048,
                               -0.020546053068, 0.175609837060,  0.175609837060,  0.654097448159,
                               0.654097448159,  0.660535431835,  0.660535431835,  5.214783262048};
  const auto es = hermitian_eigensystem(build_qubit_h0(test::strong_coupling_params()));
  for (int k = 0; k < 16; ++k)
    CHECK(rad_per_us_to_mhz(es.eigenvalues(k)) == doctest::Approx(expected[k]).epsilon(1e-10));
}

TEST_CASE("probe drive") {
  SystemParams p = test::strong_coupling_params();
  p.set_probe_detuning(mhz_to_rad_per_us(0.7));
  const auto h = build_probe_drive(p);
  const auto layout = ModeLayout::qubits(4);
  const OperatorMatrix h0 = build_qubit_h0(p);
  CHECK(max_abs(h.at(0.0) - h0 - p.lambda_probe * embed(sigma_x(), 2, layout)) < 1e-12);

  const double t = 0.37;
  const Complex ph = std::polar(1.0, mhz_to_rad_per_us(0.7) * t);
  const OperatorMatrix expected =
      h0 + p.lambda_probe * (ph * embed(sigma_minus(), 2, layout) +
                             std::conj(ph) * embed(sigma_plus(), 2, layout));
  CHECK(max_abs(h.at(t) - expected) < 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(0.0, 30.0);
  for (int i = 0; i < 1000; ++i) REQUIRE(hermiticity_error(h.at(ut(rng))) <= 1e-12);

  p.lambda_probe = 0.0;
  const auto silent = build_probe_drive(p);
  CHECK(max_abs(silent.at(1.3) - h0) == 0.0);
}

TEST_CASE("bosonic model") {
  SUBCASE("cutoff must be positive") {
    CHECK_THROWS_AS(build_bosonic_h(test::strong_coupling_params(), 0), std::invalid_argument);
  }
  SUBCASE("cutoff 1 reproduces the qubit model up to identity") {
    SystemParams p = test::strong_coupling_params();
    p.set_probe_detuning(mhz_to_rad_per_us(-2.0));
    const auto boson = build_bosonic_h(p, 1);
    const auto qubit = build_probe_drive(p);
    REQUIRE(boson.dim() == 16);
    for (double t : {0.0, 0.11, 2.5}) {
      const OperatorMatrix diff = boson.at(t) - qubit.at(t);
      const Complex c = diff(0, 0);
      CHECK(max_abs(diff - c * identity(16)) < 1e-9);
    }
  }
  SUBCASE("kerr term enters as K n on two levels") {
    SystemParams p = test::strong_coupling_params();
    p.kerr = {0.3, 0.2, 0.1, 0.4};
    SystemParams q = p;
    for (int j = 0; j < 4; ++j) q.omega_tilde[j] += p.kerr[j];
    q.kerr = {};
    const OperatorMatrix d = build_bosonic_h(p, 1).at(0.4) - build_bosonic_h(q, 1).at(0.4);
    CHECK(max_abs(d) < 1e-9);
  }
  SUBCASE("four-body pair at cutoff 1") {
    SystemParams p = test::strong_coupling_params();
    p.J.setZero();
    p.lambda_drive = {};
    p.omega_tilde = p.omega_rot;
    const OperatorMatrix h = build_bosonic_h(p, 1).static_part();
    CHECK(std::abs(h(12, 3) - p.g) < 1e-12);
    CHECK(std::abs(h(3, 12) - p.g) < 1e-12);
    CHECK(max_abs(h) == doctest::Approx(std::abs(p.g)));
  }
  SUBCASE("uncoupled three-level spectrum") {
    SystemParams p;
    const double delta = 0.7, K = 0.15;
    p.omega_tilde = {1.0, 3.0, 1.5, 2.5};
    p.omega_rot = {1.0 - delta, 3.0 - delta, 1.5 - delta, 2.5 - delta};
    p.omega_drive = p.omega_rot;
    p.kerr = {K, K, K, K};
    const auto es = hermitian_eigensystem(build_bosonic_h(p, 2).static_part());
    std::vector<double> single = {0.0, delta + K, 2 * delta + 4 * K};
    std::vector<double> expected;
    for (double a : single)
      for (double b : single)
        for (double c : single)
          for (double d : single) expected.push_back(a + b + c + d);
    std::sort(expected.begin(), expected.end());
    REQUIRE(es.eigenvalues.size() == 81);
    for (int k = 0; k < 81; ++k) CHECK(es.eigenvalues(k) == doctest::Approx(expected[k]));
  }
}

TEST_CASE("qubit pattern indices") {
  CHECK(qubit_index("uudd") == 12);
  CHECK(qubit_index("dudd") == 4);
  CHECK(qubit_index("dduu") == 3);
  CHECK(qubit_index("uduu") == 11);
  CHECK(qubit_index("uddd") == 8);
  CHECK(qubit_index("dddd") == 0);
  CHECK_THROWS(qubit_index("udx"));
}
