#pragma once

#include "knrspec/hamiltonian.hpp"

#include <array>
#include <string>
#include <vector>

namespace knrspec {

/// Linear combinations of the cross-Kerr couplings that appear on the diagonal
/// of the two invariant subspaces of H0.
struct CouplingCombos {
  double J_plus = 0.0;
  double J_minus = 0.0;
  double J_plus_prime = 0.0;
  double J_minus_prime = 0.0;
  double Jt_plus = 0.0;   // J_plus + J_minus
  double Jt_minus = 0.0;  // J_plus - J_minus

  static CouplingCombos from(const Eigen::Matrix4d& J);
};

namespace basis {
// Subspace A in the order used for its 4x4 block.
inline const std::array<Eigen::Index, 4> subspace_a = {12 /*uudd*/, 4 /*dudd*/, 3 /*dduu*/,
                                                       11 /*uduu*/};
// Subspace B: |uddd>, |dddd>.
inline const std::array<Eigen::Index, 2> subspace_b = {8, 0};
}  // namespace basis

struct Eigenpair {
  double energy = 0.0;
  StateVector state;  // 16 components, computational basis
};

/// The 4x4 subspace-A block in the basis order of basis::subspace_a.
Eigen::Matrix4d subspace_a_block(double g, double lambda, double Jt_plus, double Jt_minus);

struct SubspaceA {
  std::array<Eigenpair, 4> pairs;  // E1..E4
  std::array<double, 4> normalizers{};
};

/// Closed-form eigenpairs E1..E4 of the subspace-A block. lambda = 0 selects the
/// limiting states continuously connected to lambda -> 0+.
SubspaceA subspace_a_exact(double g, double lambda, double Jt_plus, double Jt_minus);

struct SimplifiedPair {
  int label = 0;          // canonical label after relabeling
  int printed_label = 0;  // label of the exact eigenpair this approximates
  double energy = 0.0;
  StateVector state;
};

struct SubspaceASimplified {
  std::array<SimplifiedPair, 4> pairs;  // indexed by canonical label - 1
  bool outside_perturbative_regime = false;
};

/// First-order-in-lambda states and zeroth-order energies for lambda << |g +- Jt_minus|,
/// with the canonical labeling: label 1 (3) is the branch at g + (Jt_plus + Jt_minus)/2
/// ((Jt_plus - Jt_minus)/2) and label 2 (4) the branch at (Jt_plus - Jt_minus)/2
/// (-g + (Jt_plus + Jt_minus)/2), regardless of the signs of g +- Jt_minus.
SubspaceASimplified subspace_a_simplified(double g, double lambda, double Jt_plus,
                                          double Jt_minus);

struct SubspaceB {
  double E5 = 0.0;
  double E6 = 0.0;
  double epsilon = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double k = 0.0;
  std::array<Eigenpair, 2> pairs;  // E5, E6
};

SubspaceB subspace_b(const SystemParams& params);

struct AnalyticEigensystem {
  CouplingCombos combos;
  std::array<double, 6> energies{};
  std::array<StateVector, 6> states;
  std::array<double, 4> normalizers{};
  double epsilon = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double k = 0.0;
};

/// All six labeled eigenpairs of the two invariant subspaces. Requires the
/// rotating frame of mode 1 to coincide with omega_1.
AnalyticEigensystem analytic_eigensystem(const SystemParams& params);

/// Diagonal offset of subspace A in H0 relative to the closed-form block
/// (zero whenever omega_rot^(1) = omega_1 and the frame conditions hold).
double subspace_a_shift(const SystemParams& params);

struct TransitionRow {
  int upper = 0;  // n in 1..4
  int lower = 0;  // m in 5..6
  double energy = 0.0;       // E_n - E_m, rad/us
  Complex sigma_x_element;   // <E_n| sigma_x^(2) |E_m>
  Complex drive_element;     // lambda_2 * sigma_x_element

  std::string label() const;
};

/// The eight resonance conditions E_n - E_m (n = 1..4, m = 5, 6), sorted by energy.
std::vector<TransitionRow> transition_table(const SystemParams& params);

/// True when the dressed-state picture ((|a> +- |b>)/sqrt 2) is a good description:
/// both lambda and |Jt_minus| are below `ratio` * |g|.
bool dressed_limit_applies(double g, double lambda, double Jt_minus, double ratio = 0.1);

}  // namespace knrspec
