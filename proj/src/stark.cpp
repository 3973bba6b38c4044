#include "magictrap/stark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace magictrap {

void validate(const StateLabel& label) {
  if (label.j < 0 || std::abs(label.m) > label.j) {
    throw std::invalid_argument("state " + to_string(label) + " violates J~ >= |M|");
  }
  if (label.m == 0 && label.branch != Branch::none) {
    throw std::invalid_argument("state " + to_string(label) + ": M = 0 has no ± branch");
  }
}

std::string to_string(const StateLabel& label) {
  std::string s = std::to_string(label.j) + "," + std::to_string(label.m);
  if (label.branch == Branch::plus) s += ",+";
  if (label.branch == Branch::minus) s += ",-";
  return s;
}

int StarkEigensystem::row(int j_tilde) const {
  const int k = j_tilde - j_min();
  if (k < 0 || k >= size()) {
    throw std::out_of_range("J~ = " + std::to_string(j_tilde) + " not in block M = " + std::to_string(m));
  }
  return k;
}

StarkBlock build_block(double b_mhz, double dipole_field_mhz, int m, int j_max) {
  const int j_min = std::abs(m);
  if (j_max < j_min + 3) {
    throw std::invalid_argument("j_max = " + std::to_string(j_max) + " below the floor |M| + 3 = " +
                                std::to_string(j_min + 3));
  }
  if (!(b_mhz > 0.0)) throw std::invalid_argument("rotational constant must be positive");

  StarkBlock block{m, j_max, b_mhz, dipole_field_mhz, {}};
  const int n = block.size();
  block.h = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const int j = j_min + r;
    block.h(r, r) = b_mhz * j * (j + 1);
    if (r + 1 < n) {
      // Only |J - J'| = 1 survives the parity rule.
      const double v = -dipole_field_mhz * c_tensor_element(1, 0, j, m, j + 1, m);
      block.h(r, r + 1) = v;
      block.h(r + 1, r) = v;
    }
  }
  return block;
}

StarkBlock build_block(const MoleculeSpec& spec, double field_kv_cm, int m, int j_max) {
  return build_block(spec.b_mhz, spec.dipole_field_mhz(field_kv_cm), m, j_max);
}

StarkEigensystem diagonalize(const StarkBlock& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block.h);
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("eigensolver failed for block M = " + std::to_string(block.m));
  }
  StarkEigensystem sys{block.m, block.j_max, block.b_mhz, block.dipole_field_mhz, solver.eigenvalues(),
                       solver.eigenvectors().transpose()};
  for (int k = 0; k < sys.u.rows(); ++k) {
    Eigen::Index col = 0;
    sys.u.row(k).cwiseAbs().maxCoeff(&col);
    if (sys.u(k, col) < 0.0) sys.u.row(k) *= -1.0;
  }
  return sys;
}

DressedStates::DressedStates(double b_mhz, double dipole_field_mhz, int m_max, int j_max) {
  if (m_max < 0) throw std::invalid_argument("m_max must be non-negative");
  blocks_.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) blocks_.push_back(diagonalize(build_block(b_mhz, dipole_field_mhz, m, j_max)));
}

DressedStates::DressedStates(const MoleculeSpec& spec, double field_kv_cm, int m_max, int j_max)
    : DressedStates(spec.b_mhz, spec.dipole_field_mhz(field_kv_cm), m_max, j_max) {}

const StarkEigensystem& DressedStates::block(int m) const {
  const int am = std::abs(m);
  if (am > m_max()) throw std::out_of_range("|M| = " + std::to_string(am) + " not computed");
  return blocks_[static_cast<std::size_t>(am)];
}

ConvergenceReport check_convergence(double b_mhz, double dipole_field_mhz, int m, int j_tilde, int j_max,
                                    double tolerance) {
  const auto base = diagonalize(build_block(b_mhz, dipole_field_mhz, m, j_max));
  const auto extended = diagonalize(build_block(b_mhz, dipole_field_mhz, m, j_max + 4));
  ConvergenceReport report;
  report.energy_jmax = base.energy(j_tilde);
  report.energy_extended = extended.energy(j_tilde);
  report.relative_change = std::abs(report.energy_extended - report.energy_jmax) /
                           std::max(std::abs(report.energy_extended), b_mhz);
  report.tolerance = tolerance;
  report.converged = report.relative_change < tolerance;
  return report;
}

ConvergenceReport check_convergence(const MoleculeSpec& spec, double field_kv_cm, int m, int j_tilde, int j_max,
                                    double tolerance) {
  return check_convergence(spec.b_mhz, spec.dipole_field_mhz(field_kv_cm), m, j_tilde, j_max, tolerance);
}

double alignment(const StarkEigensystem& sys, int j_tilde) {
  const int k = sys.row(j_tilde);
  const int j_min = sys.j_min();
  double c20 = 0.0;
  for (int a = 0; a < sys.size(); ++a) {
    for (int b = std::max(0, a - 2); b <= std::min(sys.size() - 1, a + 2); ++b) {
      c20 += sys.u(k, a) * sys.u(k, b) * c_tensor_element(2, 0, j_min + a, sys.m, j_min + b, sys.m);
    }
  }
  return (1.0 + 2.0 * c20) / 3.0;
}

std::vector<double> adiabatic_overlaps(const StarkEigensystem& a, const StarkEigensystem& b) {
  if (a.m != b.m || a.size() != b.size()) throw std::invalid_argument("overlaps need matching blocks");
  std::vector<double> out(static_cast<std::size_t>(a.size()));
  for (int k = 0; k < a.size(); ++k) out[static_cast<std::size_t>(k)] = std::abs(a.u.row(k).dot(b.u.row(k)));
  return out;
}

}  // namespace magictrap
