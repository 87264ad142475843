#include "knrspec/analytic.hpp"

#include "knrspec/errors.hpp"

#include <algorithm>
#include <cmath>

namespace knrspec {
namespace {

// Subspace-A coefficients in the order (uudd, dudd, dduu, uduu).
using Coeffs = Eigen::Vector4d;

struct Normalized {
  StateVector state;
  double normalizer;
};

// Normalizes (a, c, b, c') where c and c' may be huge; keeps the overall sign
// of the printed vector so that the normalizer stays positive.
Normalized normalize_into_16(const Coeffs& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  const Coeffs u = v / scale;
  const double n = u.norm();
  StateVector s = StateVector::Zero(16);
  for (int i = 0; i < 4; ++i) s(basis::subspace_a[i]) = u(i) / n;
  return {s, 1.0 / (n * scale)};
}

// A printed state of the form p*(1, c, 1, c) + q*(...) with coefficient c, or
// its limit when c is infinite.
Coeffs with_coefficient(const Coeffs& finite_part, const Coeffs& coefficient_part, double c) {
  if (std::isinf(c)) return std::copysign(1.0, c) * coefficient_part;
  return finite_part + c * coefficient_part;
}

}  // namespace

CouplingCombos CouplingCombos::from(const Eigen::Matrix4d& J) {
  const double j12 = J(0, 1), j13 = J(0, 2), j14 = J(0, 3), j23 = J(1, 2), j24 = J(1, 3),
               j34 = J(2, 3);
  CouplingCombos c;
  c.J_plus = (j12 - j13 - j14 - j23 - j24 + j34) / 4.0;
  c.J_minus = (-j12 + j13 + j14 - j23 - j24 + j34) / 4.0;
  c.J_plus_prime = (-j12 - j13 - j14 + j23 + j24 + j34) / 4.0;
  c.J_minus_prime = (j12 + j13 + j14 + j23 + j24 + j34) / 4.0;
  c.Jt_plus = c.J_plus + c.J_minus;
  c.Jt_minus = c.J_plus - c.J_minus;
  return c;
}

Eigen::Matrix4d subspace_a_block(double g, double lambda, double Jt_plus, double Jt_minus) {
  const double jp = 0.5 * (Jt_plus + Jt_minus);
  const double jm = 0.5 * (Jt_plus - Jt_minus);
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h.diagonal() << jp, jm, jp, jm;
  h(0, 2) = h(2, 0) = g;
  h(0, 1) = h(1, 0) = 0.5 * lambda;
  h(2, 3) = h(3, 2) = 0.5 * lambda;
  return h;
}

SubspaceA subspace_a_exact(double g, double lambda, double Jt_plus, double Jt_minus) {
  const double sp = g + Jt_minus;
  const double sm = g - Jt_minus;
  const double rp = std::hypot(sp, lambda);
  const double rm = std::hypot(sm, lambda);

  // Each printed coefficient is evaluated in whichever of its two algebraically
  // equivalent forms avoids cancellation: (R - s)/lambda == lambda/(R + s).
  // At lambda = 0 the divergent forms evaluate to +-inf and select the limit state.
  auto ratio = [](double num, double den) {
    if (den == 0.0) return num == 0.0 ? 0.0 : std::copysign(HUGE_VAL, num);
    return num / den;
  };
  double x1, y3, z2, w4;
  if (lambda == 0.0) {
    x1 = sp > 0 ? 0.0 : (sp < 0 ? HUGE_VAL : 1.0);
    y3 = sp > 0 ? -HUGE_VAL : (sp < 0 ? 0.0 : -1.0);
    z2 = sm > 0 ? HUGE_VAL : (sm < 0 ? 0.0 : 1.0);
    w4 = sm > 0 ? 0.0 : (sm < 0 ? HUGE_VAL : 1.0);
  } else {
    x1 = sp >= 0 ? ratio(lambda, sp + rp) : ratio(rp - sp, lambda);
    y3 = sp >= 0 ? -ratio(sp + rp, lambda) : ratio(lambda, sp - rp);
    z2 = sm >= 0 ? ratio(sm + rm, lambda) : ratio(lambda, rm - sm);
    w4 = sm >= 0 ? ratio(lambda, sm + rm) : ratio(rm - sm, lambda);
  }

  const Coeffs sym_a(1, 0, 1, 0), sym_b(0, 1, 0, 1);
  const Coeffs anti_c(-1, 0, 1, 0), anti_d(0, -1, 0, 1);
  const std::array<Coeffs, 4> printed = {
      with_coefficient(sym_a, sym_b, x1),     // uudd + x (uduu + dudd) + dduu
      with_coefficient(anti_c, anti_d, z2),   // -uudd + z (uduu - dudd) + dduu
      with_coefficient(sym_a, sym_b, y3),     // uudd + y (uduu + dudd) + dduu
      with_coefficient(anti_c, -anti_d, w4),  // -uudd - w (uduu - dudd) + dduu
  };
  const std::array<double, 4> energies = {
      0.5 * (g + Jt_plus + rp),
      0.5 * (-g + Jt_plus + rm),
      0.5 * (g + Jt_plus - rp),
      0.5 * (-g + Jt_plus - rm),
  };
  const std::array<double, 4> coefficient = {x1, z2, y3, w4};

  SubspaceA out;
  for (int i = 0; i < 4; ++i) {
    Normalized n = normalize_into_16(printed[i]);
    out.pairs[i] = {energies[i], std::move(n.state)};
    out.normalizers[i] = std::isinf(coefficient[i]) ? 0.0 : n.normalizer;
  }
  return out;
}

SubspaceASimplified subspace_a_simplified(double g, double lambda, double Jt_plus,
                                          double Jt_minus) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("subspace_a_simplified: lambda must be positive");
  const double sp = g + Jt_minus;
  const double sm = g - Jt_minus;
  if (sp == 0.0 || sm == 0.0)
    throw std::invalid_argument("subspace_a_simplified: g +- Jt_minus vanishes");

  SubspaceASimplified out;
  out.outside_perturbative_regime =
      std::abs(sp) <= 2.0 * std::abs(lambda) || std::abs(sm) <= 2.0 * std::abs(lambda);

  const double small_p = lambda / (2.0 * sp), large_p = 2.0 * sp / lambda;
  const double small_m = lambda / (2.0 * sm), large_m = 2.0 * sm / lambda;
  const std::array<Coeffs, 4> forms = {
      Coeffs(1, small_p, 1, small_p),     // g-branch of the symmetric pair
      Coeffs(-1, -large_m, 1, large_m),   // -uudd + (2s/l)(uduu - dudd) + dduu
      Coeffs(1, -large_p, 1, -large_p),   // uudd - (2s/l)(uduu + dudd) + dduu
      Coeffs(-1, small_m, 1, -small_m),   // -uudd - (l/2s)(uduu - dudd) + dduu
  };
  const std::array<double, 4> energies = {
      g + 0.5 * (Jt_plus + Jt_minus),
      0.5 * (Jt_plus - Jt_minus),
      0.5 * (Jt_plus - Jt_minus),
      -g + 0.5 * (Jt_plus + Jt_minus),
  };
  const std::array<int, 4> printed = {sp >= 0 ? 1 : 3, sm >= 0 ? 2 : 4, sp >= 0 ? 3 : 1,
                                      sm >= 0 ? 4 : 2};
  for (int i = 0; i < 4; ++i)
    out.pairs[i] = {i + 1, printed[i], energies[i], normalize_into_16(forms[i]).state};
  return out;
}

namespace {

void require_mode1_frame(const SystemParams& params) {
  params.validate();
  const double d1 = params.omega()[0] - params.omega_rot[0];
  if (std::abs(d1) > 1e-9)
    throw ValidationError("mode1_rotating_frame",
                          "the closed-form eigensystem requires omega_rot^(1) = omega_1");
}

}  // namespace

double subspace_a_shift(const SystemParams& params) {
  const Quad w = params.omega();
  Quad d{};
  for (int j = 0; j < 4; ++j) d[j] = w[j] - params.omega_rot[j];
  return 0.5 * (d[0] + d[1] - d[2] - d[3]);
}

SubspaceB subspace_b(const SystemParams& params) {
  require_mode1_frame(params);
  const CouplingCombos c = CouplingCombos::from(params.J);
  const Quad w = params.omega();
  SubspaceB b;
  b.epsilon = c.J_plus_prime - c.J_minus_prime;
  b.k = -((w[1] - params.omega_rot[1]) + (w[2] - params.omega_rot[2]) +
          (w[3] - params.omega_rot[3])) +
        c.J_plus_prime + c.J_minus_prime;
  const double lambda = params.lambda_rabi;
  b.r = std::hypot(b.epsilon, lambda);
  b.theta = 0.5 * std::atan2(lambda, b.epsilon);
  b.E5 = 0.5 * (b.k + b.r);
  b.E6 = 0.5 * (b.k - b.r);
  const double cs = std::cos(b.theta), sn = std::sin(b.theta);
  StateVector s5 = StateVector::Zero(16), s6 = StateVector::Zero(16);
  s5(basis::subspace_b[0]) = cs;
  s5(basis::subspace_b[1]) = sn;
  s6(basis::subspace_b[0]) = -sn;
  s6(basis::subspace_b[1]) = cs;
  b.pairs = {Eigenpair{b.E5, s5}, Eigenpair{b.E6, s6}};
  return b;
}

AnalyticEigensystem analytic_eigensystem(const SystemParams& params) {
  const SubspaceB b = subspace_b(params);
  AnalyticEigensystem out;
  out.combos = CouplingCombos::from(params.J);
  const SubspaceA a =
      subspace_a_exact(params.g, params.lambda_rabi, out.combos.Jt_plus, out.combos.Jt_minus);
  for (int i = 0; i < 4; ++i) {
    out.energies[i] = a.pairs[i].energy;
    out.states[i] = a.pairs[i].state;
  }
  out.normalizers = a.normalizers;
  out.energies[4] = b.E5;
  out.energies[5] = b.E6;
  out.states[4] = b.pairs[0].state;
  out.states[5] = b.pairs[1].state;
  out.epsilon = b.epsilon;
  out.r = b.r;
  out.theta = b.theta;
  out.k = b.k;
  return out;
}

std::string TransitionRow::label() const {
  return "E" + std::to_string(upper) + "-E" + std::to_string(lower);
}

std::vector<TransitionRow> transition_table(const SystemParams& params) {
  const AnalyticEigensystem sys = analytic_eigensystem(params);
  const OperatorMatrix sx2 = embed(sigma_x(), 2, ModeLayout::qubits(4));
  std::vector<TransitionRow> rows;
  for (int n = 1; n <= 4; ++n)
    for (int m = 5; m <= 6; ++m) {
      TransitionRow row;
      row.upper = n;
      row.lower = m;
      row.energy = sys.energies[n - 1] - sys.energies[m - 1];
      row.sigma_x_element = sys.states[n - 1].dot(sx2 * sys.states[m - 1]);
      row.drive_element = params.lambda_probe * row.sigma_x_element;
      rows.push_back(row);
    }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const TransitionRow& a, const TransitionRow& b) { return a.energy < b.energy; });
  return rows;
}

bool dressed_limit_applies(double g, double lambda, double Jt_minus, double ratio) {
  return std::abs(lambda) < ratio * std::abs(g) && std::abs(Jt_minus) < ratio * std::abs(g);
}

}  // namespace knrspec
