#pragma once

#include <array>
#include <complex>

namespace magictrap {

using cplx = std::complex<double>;
using CVec3 = std::array<cplx, 3>;

// Cartesian axis of the space-fixed frame. The static field points along z.
enum class Axis { x = 0, y = 1, z = 2 };

// Degenerate |M|>0 combinations |J M,±> = (|J M> ± |J -M>)/sqrt(2), M = |M|.
// `none` selects the pure |J M> state (with the sign of M as given).
enum class Branch { none, plus, minus };

/// Wigner 3-j symbol for integer angular momenta.
///
/// Racah's single-sum formula evaluated in exact rational arithmetic; the
/// squared value is formed exactly and converted to double once. Returns 0
/// outside the triangle or when m1+m2+m3 != 0.
double three_j(int j1, int j2, int j3, int m1, int m2, int m3);

/// <J M| C_{lq} |J' M'> for the Racah-normalized harmonic
/// C_{lq} = sqrt(4 pi / (2l+1)) Y_{lq}:
///   (-1)^M sqrt((2J+1)(2J'+1)) (J l J'; -M q M') (J l J'; 0 0 0).
double c_tensor_element(int l, int q, int j, int m, int jp, int mp);

/// Symmetric-top matrix element <J M 0| D^{1*}_{q,-Lambda} |Je Me Lambda>,
/// i.e. the angular part of the lab-frame dipole component d_q connecting a
/// Sigma ground level (K = 0) to an excited level with projection Lambda.
double symmetric_top_dipole(int j, int m, int je, int me, int lambda, int q);

/// Full complex angular element <J M,branch| d_sigma |Je Me Lambda>.
/// For branch != none the ground state is the ± combination built from |M|.
cplx f_factor_complex(int je, int me, int lambda, int j, int m, Branch branch, Axis sigma);

/// Real F factor. The x and z elements are real; the y element is i times a
/// real number and the factor i is dropped, so F_s(a) F_s(b) equals
/// <a|d_s|e><e|d_s|b> for matching Cartesian indices.
double f_factor(int je, int me, int lambda, int j, int m, Branch branch, Axis sigma);

// Condon-Shortley spherical components, stored in the order q = -1, 0, +1:
//   v_{+1} = -(v_x + i v_y)/sqrt(2),  v_0 = v_z,  v_{-1} = (v_x - i v_y)/sqrt(2).
// Every other module converts through these two functions.
CVec3 cart_to_spherical(const CVec3& v);
CVec3 spherical_to_cart(const CVec3& s);

inline constexpr int spherical_index(int q) { return q + 1; }

}  // namespace magictrap
