#pragma once

#include "magictrap/angular.hpp"
#include "magictrap/molecule.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace magictrap {

inline constexpr int kDefaultJMax = 10;

// Adiabatic label (J~, M[, ±]) of a field-dressed rotational state.
struct StateLabel {
  int j = 0;
  int m = 0;
  Branch branch = Branch::none;

  friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

/// Throws std::invalid_argument unless j >= |m| >= 0 and branch is none for m = 0.
void validate(const StateLabel& label);
std::string to_string(const StateLabel& label);

// Rigid-rotor Stark Hamiltonian for one projection M over J = |M| .. j_max.
// Entries in MHz.
struct StarkBlock {
  int m = 0;
  int j_max = kDefaultJMax;
  double b_mhz = 0.0;
  double dipole_field_mhz = 0.0;
  Eigen::MatrixXd h;

  int j_min() const { return m < 0 ? -m : m; }
  int size() const { return j_max - j_min() + 1; }
};

// Eigenstates of one block sorted by energy. Row k of `u` holds the
// expansion of |J~ = j_min + k, M> over |J = j_min + column, M>.
struct StarkEigensystem {
  int m = 0;
  int j_max = kDefaultJMax;
  double b_mhz = 0.0;
  double dipole_field_mhz = 0.0;
  Eigen::VectorXd energies;
  Eigen::MatrixXd u;

  int j_min() const { return m < 0 ? -m : m; }
  int size() const { return static_cast<int>(energies.size()); }
  double beta() const { return dipole_field_mhz / b_mhz; }
  /// Throws std::out_of_range for J~ outside [|M|, j_max].
  int row(int j_tilde) const;
  double energy(int j_tilde) const { return energies(row(j_tilde)); }
};

class EigensolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// H_{JJ'} = B J(J+1) delta_{JJ'} - d E <J M|C_10|J' M>.
/// Requires j_max >= |M| + 3.
StarkBlock build_block(double b_mhz, double dipole_field_mhz, int m, int j_max = kDefaultJMax);
StarkBlock build_block(const MoleculeSpec& spec, double field_kv_cm, int m, int j_max = kDefaultJMax);

/// Ascending energies; each eigenvector's largest-magnitude entry is positive.
StarkEigensystem diagonalize(const StarkBlock& block);

// Dressed blocks |M| = 0 .. m_max at one field. Blocks for -M are identical
// to those for +M, so only non-negative M are stored.
class DressedStates {
 public:
  DressedStates(double b_mhz, double dipole_field_mhz, int m_max = 1, int j_max = kDefaultJMax);
  DressedStates(const MoleculeSpec& spec, double field_kv_cm, int m_max = 1, int j_max = kDefaultJMax);

  const StarkEigensystem& block(int m) const;
  int m_max() const { return static_cast<int>(blocks_.size()) - 1; }
  int j_max() const { return blocks_.front().j_max; }
  double b_mhz() const { return blocks_.front().b_mhz; }
  double beta() const { return blocks_.front().beta(); }

 private:
  std::vector<StarkEigensystem> blocks_;
};

struct ConvergenceReport {
  double energy_jmax = 0.0;
  double energy_extended = 0.0;
  // |E(j_max + 4) - E(j_max)| / max(|E(j_max + 4)|, B)
  double relative_change = 0.0;
  double tolerance = 1e-8;
  bool converged = true;
};

ConvergenceReport check_convergence(const MoleculeSpec& spec, double field_kv_cm, int m, int j_tilde,
                                    int j_max = kDefaultJMax, double tolerance = 1e-8);
ConvergenceReport check_convergence(double b_mhz, double dipole_field_mhz, int m, int j_tilde,
                                    int j_max = kDefaultJMax, double tolerance = 1e-8);

/// <cos^2 theta> = (1 + 2 <C_20>)/3 of the dressed state J~.
double alignment(const StarkEigensystem& sys, int j_tilde);

/// |<a_k|b_k>| for every shared adiabatic index k; used to confirm that
/// energy ordering tracks adiabatic continuity between nearby fields.
std::vector<double> adiabatic_overlaps(const StarkEigensystem& a, const StarkEigensystem& b);

}  // namespace magictrap
