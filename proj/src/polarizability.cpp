#include "magictrap/polarizability.hpp"

#include "magictrap/units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace magictrap {

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const double kInvSqrt6 = 1.0 / std::sqrt(6.0);

struct Component {
  int j;
  int m;
  double c;
};

using StateVector = std::vector<Component>;

StateVector pure_state(const StarkEigensystem& sys, int j_tilde, int m) {
  const int k = sys.row(j_tilde);
  StateVector v;
  v.reserve(static_cast<std::size_t>(sys.size()));
  for (int col = 0; col < sys.size(); ++col) v.push_back({sys.j_min() + col, m, sys.u(k, col)});
  return v;
}

StateVector branch_state(const StarkEigensystem& sys, int j_tilde, Branch branch) {
  const int am = std::abs(sys.m);
  const double s = branch == Branch::plus ? 1.0 : -1.0;
  StateVector v = pure_state(sys, j_tilde, am);
  const StateVector neg = pure_state(sys, j_tilde, -am);
  for (auto& comp : v) comp.c *= kInvSqrt2;
  for (const auto& comp : neg) v.push_back({comp.j, comp.m, s * kInvSqrt2 * comp.c});
  return v;
}

StateVector state_for(const StarkEigensystem& sys, const StateLabel& label) {
  validate(label);
  if (std::abs(label.m) != std::abs(sys.m)) {
    throw std::invalid_argument("state " + to_string(label) + " does not belong to block M = " +
                                std::to_string(sys.m));
  }
  if (label.branch == Branch::none) return pure_state(sys, label.j, label.m);
  return branch_state(sys, label.j, label.branch);
}

// n_s n_s' = delta_{ss'}/3 + sum_q W^{ss'}_q C_2q.
struct RankTwoWeights {
  std::array<cplx, 5> w{};  // index q + 2
};

std::array<std::array<RankTwoWeights, 3>, 3> make_weights() {
  const cplx i{0.0, 1.0};
  std::array<std::array<RankTwoWeights, 3>, 3> t{};
  auto set = [&](int a, int b, int q, cplx value) {
    t[a][b].w[q + 2] = value;
    t[b][a].w[q + 2] = value;
  };
  set(2, 2, 0, 2.0 / 3.0);
  set(0, 0, 0, -1.0 / 3.0);
  set(0, 0, 2, kInvSqrt6);
  set(0, 0, -2, kInvSqrt6);
  set(1, 1, 0, -1.0 / 3.0);
  set(1, 1, 2, -kInvSqrt6);
  set(1, 1, -2, -kInvSqrt6);
  set(0, 1, 2, -i * kInvSqrt6);
  set(0, 1, -2, i * kInvSqrt6);
  set(0, 2, 1, -kInvSqrt6);
  set(0, 2, -1, kInvSqrt6);
  set(1, 2, 1, i * kInvSqrt6);
  set(1, 2, -1, i * kInvSqrt6);
  return t;
}

const std::array<std::array<RankTwoWeights, 3>, 3>& weights() {
  static const auto w = make_weights();
  return w;
}

// <a| n_s n_s' |b> and <a|b> for real-coefficient states.
Eigen::Matrix3cd geometry_between(const StateVector& a, const StateVector& b, double* overlap) {
  std::array<double, 5> c2{};  // <a|C_2q|b>, index q + 2
  double ov = 0.0;
  for (const auto& ca : a) {
    for (const auto& cb : b) {
      if (std::abs(ca.j - cb.j) > 2) continue;
      const int q = ca.m - cb.m;
      if (q < -2 || q > 2) continue;
      const double coef = ca.c * cb.c;
      if (q == 0 && ca.j == cb.j) ov += coef;
      c2[static_cast<std::size_t>(q + 2)] += coef * c_tensor_element(2, q, ca.j, ca.m, cb.j, cb.m);
    }
  }
  if (overlap) *overlap = ov;
  Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();
  const auto& w = weights();
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 3; ++t) {
      cplx v = s == t ? cplx(ov / 3.0) : cplx(0.0);
      for (int q = -2; q <= 2; ++q) v += w[s][t].w[static_cast<std::size_t>(q + 2)] * c2[static_cast<std::size_t>(q + 2)];
      g(s, t) = v;
    }
  }
  return g;
}

Eigen::Matrix3cd closed_form_between(const StateVector& a, const StateVector& b,
                                     const MolecularPolarizability& alpha) {
  double overlap = 0.0;
  const Eigen::Matrix3cd g = geometry_between(a, b, &overlap);
  return alpha.perpendicular * overlap * Eigen::Matrix3cd::Identity() + alpha.anisotropy() * g;
}

}  // namespace

PolarizabilityTensor alpha_tensor_closed_form(const StarkEigensystem& sys, const StateLabel& label,
                                              const MolecularPolarizability& alpha) {
  const StateVector psi = state_for(sys, label);
  return {closed_form_between(psi, psi, alpha), label, sys.beta()};
}

PolarizabilityTensor alpha_tensor_sos(const StarkEigensystem& sys, const StateLabel& label,
                                      const MolecularPolarizability& alpha, int je_max, const LambdaSet& lambdas) {
  if (je_max < sys.j_max + 1) {
    throw std::invalid_argument("je_max = " + std::to_string(je_max) + " must be at least j_max + 1 = " +
                                std::to_string(sys.j_max + 1));
  }
  const StateVector psi = state_for(sys, label);

  // Spherical amplitudes <psi|d_q|Je Me Lambda>, indexed [Je][Me + je_max][Lambda + 1][q + 1].
  const int width = 2 * je_max + 1;
  std::vector<std::array<std::array<double, 3>, 3>> amp(static_cast<std::size_t>((je_max + 1) * width));
  auto slot = [&](int je, int me) -> auto& { return amp[static_cast<std::size_t>(je * width + me + je_max)]; };

  for (const auto& comp : psi) {
    for (int je = std::max(0, comp.j - 1); je <= std::min(je_max, comp.j + 1); ++je) {
      for (int q = -1; q <= 1; ++q) {
        const int me = comp.m - q;
        if (std::abs(me) > je) continue;
        for (int lambda = -1; lambda <= 1; ++lambda) {
          if (std::abs(lambda) > je) continue;
          slot(je, me)[static_cast<std::size_t>(lambda + 1)][static_cast<std::size_t>(q + 1)] +=
              comp.c * symmetric_top_dipole(comp.j, comp.m, je, me, lambda, q);
        }
      }
    }
  }

  Eigen::Matrix3cd total = Eigen::Matrix3cd::Zero();
  for (int lambda = -1; lambda <= 1; ++lambda) {
    const bool include = lambda == 0 ? lambdas.sigma : (lambda > 0 ? lambdas.pi_plus : lambdas.pi_minus);
    if (!include) continue;
    const double weight = lambda == 0 ? alpha.parallel : alpha.perpendicular;
    Eigen::Matrix3cd partial = Eigen::Matrix3cd::Zero();
    for (int je = std::abs(lambda); je <= je_max; ++je) {
      for (int me = -je; me <= je; ++me) {
        const auto& sph = slot(je, me)[static_cast<std::size_t>(lambda + 1)];
        const CVec3 cart = spherical_to_cart({sph[0], sph[1], sph[2]});
        for (int s = 0; s < 3; ++s) {
          for (int t = 0; t < 3; ++t) partial(s, t) += cart[static_cast<std::size_t>(s)] * std::conj(cart[static_cast<std::size_t>(t)]);
        }
      }
    }
    total += weight * partial;
  }
  return {total, label, sys.beta()};
}

double project(const Eigen::Matrix3cd& tensor, const PolarizationVector& pol) {
  cplx sum = 0.0;
  const auto& e = pol.components();
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 3; ++t) sum += tensor(s, t) * e[static_cast<std::size_t>(s)] * std::conj(e[static_cast<std::size_t>(t)]);
  }
  return sum.real();
}

BranchResolution resolve_branches(const StarkEigensystem& sys, int j_tilde, const MolecularPolarizability& alpha,
                                  const PolarizationVector& pol) {
  const int am = std::abs(sys.m);
  if (am == 0) throw std::invalid_argument("branch resolution needs |M| > 0");
  const std::array<StateVector, 2> basis{pure_state(sys, j_tilde, am), pure_state(sys, j_tilde, -am)};

  Eigen::Matrix2cd v;
  const auto& e = pol.components();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Eigen::Matrix3cd t = closed_form_between(basis[static_cast<std::size_t>(a)], basis[static_cast<std::size_t>(b)], alpha);
      cplx sum = 0.0;
      for (int s = 0; s < 3; ++s) {
        for (int u = 0; u < 3; ++u) sum += t(s, u) * e[static_cast<std::size_t>(s)] * std::conj(e[static_cast<std::size_t>(u)]);
      }
      v(a, b) = sum;
    }
  }
  // Clean rounding-level anti-Hermitian residue before diagonalizing.
  v = 0.5 * (v + v.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(v);
  BranchResolution r;
  r.eigenvalues = {solver.eigenvalues()(0), solver.eigenvalues()(1)};
  r.eigenvectors = solver.eigenvectors();

  const double scale = std::max({std::abs(alpha.parallel), std::abs(alpha.perpendicular), 1e-300});
  r.degenerate = std::abs(r.eigenvalues[1] - r.eigenvalues[0]) <= 1e-12 * scale;

  if (r.degenerate) {
    r.plus_minus_eigenbasis = true;
    const double mean = 0.5 * (r.eigenvalues[0] + r.eigenvalues[1]);
    r.alpha_plus = mean;
    r.alpha_minus = mean;
    return r;
  }
  // Weight of each eigenvector on the + combination.
  std::array<double, 2> plus_weight{};
  for (int k = 0; k < 2; ++k) {
    const Eigen::Vector2cd vec = r.eigenvectors.col(k);
    plus_weight[static_cast<std::size_t>(k)] = 0.5 * std::norm(vec(0) + vec(1));
  }
  const int plus_col = plus_weight[0] >= plus_weight[1] ? 0 : 1;
  r.alpha_plus = r.eigenvalues[static_cast<std::size_t>(plus_col)];
  r.alpha_minus = r.eigenvalues[static_cast<std::size_t>(1 - plus_col)];
  r.plus_minus_eigenbasis = std::abs(plus_weight[static_cast<std::size_t>(plus_col)] - 1.0) < 1e-10;
  return r;
}

double effective_polarizability(const DressedStates& states, const StateLabel& label,
                                const MolecularPolarizability& alpha, const PolarizationVector& pol) {
  validate(label);
  const auto& sys = states.block(label.m);
  if (label.branch == Branch::none) return project(alpha_tensor_closed_form(sys, label, alpha).components, pol);
  const auto r = resolve_branches(sys, label.j, alpha, pol);
  return label.branch == Branch::plus ? r.alpha_plus : r.alpha_minus;
}

StarkShift stark_shift(const PolarizabilityTensor& tensor, const PolarizationVector& pol, double intensity_w_cm2) {
  StarkShift shift;
  shift.alpha_eff_au = project(tensor.components, pol);
  shift.intensity_w_cm2 = intensity_w_cm2;
  shift.delta_e_mhz = -shift.alpha_eff_au * units::kMHzPerWcm2PerAtomicPolarizability * intensity_w_cm2;
  return shift;
}

IrreducibleParts irreducible_decompose(const Eigen::Matrix3cd& t) {
  const cplx i{0.0, 1.0};
  IrreducibleParts p;
  p.scalar = t.trace() / 3.0;

  const Eigen::Matrix3cd a = 0.5 * (t - t.transpose());
  p.vector = [&] {
    const CVec3 sph = cart_to_spherical({a(1, 2), a(2, 0), a(0, 1)});
    return std::array<cplx, 3>{sph[0], sph[1], sph[2]};
  }();

  const Eigen::Matrix3cd s = 0.5 * (t + t.transpose()) - p.scalar * Eigen::Matrix3cd::Identity();
  p.tensor[0] = 0.5 * (s(0, 0) - s(1, 1) - 2.0 * i * s(0, 1));
  p.tensor[1] = s(0, 2) - i * s(1, 2);
  p.tensor[2] = std::sqrt(1.5) * s(2, 2);
  p.tensor[3] = -(s(0, 2) + i * s(1, 2));
  p.tensor[4] = 0.5 * (s(0, 0) - s(1, 1) + 2.0 * i * s(0, 1));
  return p;
}

Eigen::Matrix3cd recompose(const IrreducibleParts& p) {
  const cplx i{0.0, 1.0};
  const CVec3 a = spherical_to_cart({p.vector[0], p.vector[1], p.vector[2]});
  Eigen::Matrix3cd anti = Eigen::Matrix3cd::Zero();
  anti(1, 2) = a[0];
  anti(2, 1) = -a[0];
  anti(2, 0) = a[1];
  anti(0, 2) = -a[1];
  anti(0, 1) = a[2];
  anti(1, 0) = -a[2];

  const cplx szz = p.tensor[2] / std::sqrt(1.5);
  const cplx diff = p.tensor[4] + p.tensor[0];             // S_xx - S_yy
  const cplx sxy = (p.tensor[4] - p.tensor[0]) / (2.0 * i);
  const cplx sxz = 0.5 * (p.tensor[1] - p.tensor[3]);
  const cplx syz = 0.5 * i * (p.tensor[1] + p.tensor[3]);
  Eigen::Matrix3cd sym;
  sym << 0.5 * (-szz + diff), sxy, sxz,
         sxy, 0.5 * (-szz - diff), syz,
         sxz, syz, szz;
  return p.scalar * Eigen::Matrix3cd::Identity() + anti + sym;
}

cplx contract(const IrreducibleParts& t, const IrreducibleParts& u) {
  cplx sum = 3.0 * t.scalar * u.scalar;
  for (int q = -1; q <= 1; ++q) {
    const double sign = (q % 2 == 0) ? 1.0 : -1.0;
    sum += 2.0 * sign * t.vector[static_cast<std::size_t>(q + 1)] * u.vector[static_cast<std::size_t>(-q + 1)];
  }
  for (int q = -2; q <= 2; ++q) {
    const double sign = (q % 2 == 0) ? 1.0 : -1.0;
    sum += sign * t.tensor[static_cast<std::size_t>(q + 2)] * u.tensor[static_cast<std::size_t>(-q + 2)];
  }
  return sum;
}

Eigen::Matrix3cd polarization_tensor(const PolarizationVector& pol) {
  Eigen::Matrix3cd e;
  const auto& c = pol.components();
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 3; ++t) e(s, t) = c[static_cast<std::size_t>(s)] * std::conj(c[static_cast<std::size_t>(t)]);
  }
  return e;
}

AngleScan alpha_angle_scan(const DressedStates& states, const std::vector<StateLabel>& labels,
                           const MolecularPolarizability& alpha, const std::vector<double>& theta_rad) {
  AngleScan scan{theta_rad, labels, {}};
  scan.alpha_eff.reserve(labels.size());
  for (const auto& label : labels) {
    std::vector<double> row;
    row.reserve(theta_rad.size());
    for (double th : theta_rad) {
      row.push_back(effective_polarizability(states, label, alpha, PolarizationVector::linear(th)));
    }
    scan.alpha_eff.push_back(std::move(row));
  }
  return scan;
}

}  // namespace magictrap
