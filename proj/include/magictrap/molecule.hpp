#pragma once

#include "magictrap/polarization.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace magictrap {

struct AlphaNode {
  double nu_inverse_cm = 0.0;
  double parallel_au = 0.0;
  double perpendicular_au = 0.0;
};

// Rotational constant and dipole of the v = 0 level plus the molecule-frame
// polarizability components on a shared wavenumber grid. Immutable once
// validated.
struct MoleculeSpec {
  std::string name;
  double b_mhz = 0.0;
  double d00_debye = 0.0;
  std::vector<AlphaNode> alpha_table;

  // d00 * E in MHz for a field in kV/cm.
  double dipole_field_mhz(double field_kv_cm) const;
  // Dimensionless Stark parameter d E / B.
  double beta(double field_kv_cm) const;
  double field_for_beta(double beta) const;
};

struct MolecularPolarizability {
  double parallel = 0.0;
  double perpendicular = 0.0;

  double isotropic() const { return (parallel + 2.0 * perpendicular) / 3.0; }
  double anisotropy() const { return parallel - perpendicular; }
};

// Static field along z plus the trapping light.
struct FieldConfig {
  double e_dc_kv_cm = 0.0;
  double nu_inverse_cm = 9174.0;
  std::optional<double> intensity_w_cm2;
  PolarizationVector polarization = PolarizationVector::z();
};

class MoleculeParseError : public std::runtime_error {
 public:
  MoleculeParseError(const std::string& source, int line, const std::string& what);
};

class MoleculeValidationError : public std::runtime_error {
 public:
  MoleculeValidationError(const std::string& field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses the key-value molecule format:
///
///   name: KRb
///   B_GHz: 1.1139
///   d00_debye: 0.566
///   alpha: <nu cm^-1> <alpha_par au> <alpha_perp au>
///
/// '#' starts a comment. Throws MoleculeParseError on malformed lines and
/// MoleculeValidationError when a field violates its invariant.
MoleculeSpec parse_molecule(std::string_view text, const std::string& source = "<string>");
MoleculeSpec load_molecule(const std::filesystem::path& path);

std::vector<std::string> bundled_molecule_names();
/// Bundled name first (case-sensitive), then a file path.
MoleculeSpec resolve_molecule(const std::string& name_or_path);

void validate(const MoleculeSpec& spec);

/// Linear interpolation of the polarizability table; exact at nodes. Throws
/// std::out_of_range outside the tabulated window.
MolecularPolarizability alpha_lambda_at(const MoleculeSpec& spec, double nu_inverse_cm);

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& bundled_molecule_texts();
}

}  // namespace magictrap
