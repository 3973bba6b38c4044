#pragma once

#include "magictrap/molecule.hpp"
#include "magictrap/polarization.hpp"
#include "magictrap/stark.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace magictrap {

// Lab-frame tensor <alpha_{sigma sigma'}> of one dressed state, atomic units,
// indices ordered x, y, z.
struct PolarizabilityTensor {
  Eigen::Matrix3cd components = Eigen::Matrix3cd::Zero();
  StateLabel state;
  double beta = 0.0;

  cplx operator()(Axis a, Axis b) const { return components(static_cast<int>(a), static_cast<int>(b)); }
  double xx() const { return components(0, 0).real(); }
  double yy() const { return components(1, 1).real(); }
  double zz() const { return components(2, 2).real(); }
};

/// Closed form: the molecule-frame tensor alpha_perp 1 + (alpha_par - alpha_perp) n n
/// averaged over the dressed state, with n_sigma n_sigma' expanded in C_2q.
/// For |M| > 0 with a ± branch the state is (|J~ M> ± |J~ -M>)/sqrt(2).
PolarizabilityTensor alpha_tensor_closed_form(const StarkEigensystem& sys, const StateLabel& label,
                                              const MolecularPolarizability& alpha);

struct LambdaSet {
  bool sigma = true;       // Lambda = 0
  bool pi_plus = true;     // Lambda = +1
  bool pi_minus = true;    // Lambda = -1
};

/// Sum over excited symmetric-top levels |Je Me Lambda>, Je <= je_max:
///   sum_Lambda alpha^Lambda sum_{Je Me} <psi|d_s|e><e|d_s'|psi>
/// with alpha^0 = alpha_par and alpha^{±1} = alpha_perp. Requires
/// je_max >= sys.j_max + 1, at which point the sum is complete.
PolarizabilityTensor alpha_tensor_sos(const StarkEigensystem& sys, const StateLabel& label,
                                      const MolecularPolarizability& alpha, int je_max,
                                      const LambdaSet& lambdas = {});

/// Re sum_{s s'} alpha_{s s'} eps_s eps*_{s'}.
double project(const Eigen::Matrix3cd& tensor, const PolarizationVector& pol);

// Light-shift operator restricted to {|J~ M>, |J~ -M>}, M = |M| > 0.
struct BranchResolution {
  std::array<double, 2> eigenvalues{};    // ascending, atomic units
  Eigen::Matrix2cd eigenvectors;          // columns in the basis {|M>, |-M>}
  bool degenerate = false;                // operator proportional to identity
  bool plus_minus_eigenbasis = false;     // eigenvectors are (|M> ± |-M>)/sqrt(2)
  double alpha_plus = 0.0;                // eigenvalue assigned to the + branch
  double alpha_minus = 0.0;
};

BranchResolution resolve_branches(const StarkEigensystem& sys, int j_tilde, const MolecularPolarizability& alpha,
                                  const PolarizationVector& pol);

/// Polarizability felt by `label` under `pol`. M = 0 and pure |M> labels use
/// the diagonal expectation; ± labels use the resolved degenerate branches.
double effective_polarizability(const DressedStates& states, const StateLabel& label,
                                const MolecularPolarizability& alpha, const PolarizationVector& pol);

struct StarkShift {
  double delta_e_mhz = 0.0;
  double alpha_eff_au = 0.0;
  double intensity_w_cm2 = 0.0;
};

/// Delta E = -(|E_o|^2 / 4) sum alpha_{s s'} eps_s eps*_{s'}, with |E_o|^2/4
/// expressed through the intensity via 1 au = 4.68645e-8 MHz/(W/cm^2).
StarkShift stark_shift(const PolarizabilityTensor& tensor, const PolarizationVector& pol, double intensity_w_cm2);

// Rank 0/1/2 parts of a Cartesian rank-2 tensor T.
//   scalar      = Tr T / 3
//   vector_q    = spherical components (cart_to_spherical) of
//                 a = (A_yz, A_zx, A_xy), A = (T - T^t)/2
//   tensor_0    = sqrt(3/2) S_zz
//   tensor_±1   = ∓(S_xz ± i S_yz)
//   tensor_±2   = (S_xx - S_yy ± 2i S_xy)/2,   S = (T + T^t)/2 - scalar 1
// Arrays are indexed by q + k.
struct IrreducibleParts {
  cplx scalar;
  std::array<cplx, 3> vector{};
  std::array<cplx, 5> tensor{};
};

IrreducibleParts irreducible_decompose(const Eigen::Matrix3cd& tensor);
Eigen::Matrix3cd recompose(const IrreducibleParts& parts);
/// sum_{s s'} T_{s s'} U_{s s'} written through the parts:
///   3 t0 u0 + 2 sum_q (-1)^q t1_q u1_{-q} + sum_q (-1)^q t2_q u2_{-q}.
cplx contract(const IrreducibleParts& t, const IrreducibleParts& u);
/// E_{s s'} = eps_s eps*_{s'}, so that project(T, pol) = Re contract(T, E).
Eigen::Matrix3cd polarization_tensor(const PolarizationVector& pol);

struct AngleScan {
  std::vector<double> theta_rad;
  std::vector<StateLabel> states;
  std::vector<std::vector<double>> alpha_eff;  // [state][theta]
};

/// alpha_eff(theta) for linear polarization cos(theta) z + sin(theta) x.
AngleScan alpha_angle_scan(const DressedStates& states, const std::vector<StateLabel>& labels,
                           const MolecularPolarizability& alpha, const std::vector<double>& theta_rad);

}  // namespace magictrap
