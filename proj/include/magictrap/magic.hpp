#pragma once

#include "magictrap/molecule.hpp"
#include "magictrap/polarizability.hpp"
#include "magictrap/stark.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace magictrap {

enum class SweepVariable { field, theta, nu };

std::string_view to_string(SweepVariable v);

struct SweepGrid {
  SweepVariable variable = SweepVariable::field;
  double from = 0.0;
  double to = 15.0;
  int steps = 2;

  /// Throws std::invalid_argument unless from < to and steps >= 2.
  void validate() const;
  double value(int i) const { return from + (to - from) * i / (steps - 1); }
};

// Everything a sweep holds fixed. For theta sweeps the polarization is
// replaced by linear(theta) at each grid point.
struct SweepContext {
  MoleculeSpec molecule;
  double field_kv_cm = 0.0;
  double nu_inverse_cm = 9174.0;
  PolarizationVector polarization = PolarizationVector::z();
  double intensity_w_cm2 = 1.0;
  int j_max = kDefaultJMax;
};

struct SweepTable {
  SweepVariable variable = SweepVariable::field;
  std::vector<double> values;          // field kV/cm, theta degrees or nu cm^-1
  std::vector<StateLabel> states;
  std::vector<std::vector<double>> alpha_eff;    // [grid point][state], au
  std::vector<std::vector<double>> delta_e_mhz;  // [grid point][state]
};

/// One row per grid point, in grid order.
SweepTable sweep(const SweepGrid& grid, const SweepContext& context, const std::vector<StateLabel>& states);

struct MagicOptions {
  double nu_inverse_cm = 9174.0;
  int j_max = kDefaultJMax;
  int scan_points = 64;
  // Replaces the tabulated molecule-frame polarizability when set.
  std::optional<MolecularPolarizability> alpha_override;
};

struct CrossingReport {
  StateLabel a;
  StateLabel b;
  PolarizationVector polarization = PolarizationVector::z();
  double e_star_kv_cm = 0.0;
  double beta_star = 0.0;
  double bracket_lo_kv_cm = 0.0;
  double bracket_hi_kv_cm = 0.0;
  double residual_au = 0.0;            // |alpha_a - alpha_b| at e_star
  double achieved_rel_tol = 0.0;       // final bracket width / e_star
};

enum class CrossingStatus { found, identically_equal, none };

struct MagicFieldResult {
  CrossingStatus status = CrossingStatus::found;
  std::vector<CrossingReport> crossings;  // every sign change in the scan, ascending
  double diff_min_au = 0.0;               // extrema of alpha_a - alpha_b over the scan
  double diff_max_au = 0.0;
};

class NoCrossingError : public std::runtime_error {
 public:
  NoCrossingError(double diff_min, double diff_max);
  double diff_min() const { return diff_min_; }
  double diff_max() const { return diff_max_; }

 private:
  double diff_min_;
  double diff_max_;
};

/// Coarse scan of alpha_a(E) - alpha_b(E) on [from, to] followed by bracketed
/// derivative-free refinement of every sign change. Returns
/// identically_equal when the difference is below 1e-10 |alpha_bar| on more
/// than half of the scan; throws NoCrossingError when there is no sign change.
MagicFieldResult find_magic_field(const MoleculeSpec& molecule, const StateLabel& a, const StateLabel& b,
                                  const PolarizationVector& pol, double from_kv_cm, double to_kv_cm,
                                  const MagicOptions& options = {});

struct PolarizationCrossing {
  std::string name;
  PolarizationVector polarization = PolarizationVector::z();
  CrossingStatus status = CrossingStatus::none;
  std::optional<double> e_star_kv_cm;
};

struct PolarizationInvarianceReport {
  std::vector<PolarizationCrossing> entries;
  double max_relative_spread = 0.0;  // over entries with a crossing
};

/// Magic field of an M = 0 pair for z, x and linear(theta) for each theta in
/// `theta_deg`. Entries at the magic angle come back identically_equal.
PolarizationInvarianceReport magic_field_polarization_invariance(const MoleculeSpec& molecule,
                                                                 const StateLabel& a, const StateLabel& b,
                                                                 double from_kv_cm, double to_kv_cm,
                                                                 const std::vector<double>& theta_deg,
                                                                 const MagicOptions& options = {});

struct MagicAngleReport {
  double theta0_deg = 0.0;       // arccos(1/sqrt(3))
  double alpha_bar_au = 0.0;
  double spread_au = 0.0;        // max - min of alpha_eff at theta0 over states and fields
  double relative_spread = 0.0;  // spread / |alpha_bar|
  bool every_angle_magic = false;
  bool common_angle = false;
  std::optional<double> common_angle_deg;
  std::vector<double> fields_kv_cm;
  std::vector<std::optional<double>> crossing_angle_deg;  // per field; nullopt: none or degenerate
};

/// The analytic magic angle plus a numerical check over `fields_kv_cm`: the
/// angle at which the pair crosses is solved per field, and a common angle is
/// reported only if all fields agree.
MagicAngleReport magic_angle(const MoleculeSpec& molecule, const StateLabel& a, const StateLabel& b,
                             const std::vector<double>& fields_kv_cm, const MagicOptions& options = {});

/// cos(theta0) z + sin(theta0) x with cos^2(theta0) = 1/3.
PolarizationVector magic_angle_polarization();
double magic_angle_degrees();

}  // namespace magictrap
