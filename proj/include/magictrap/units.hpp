#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace magictrap {

// Internal unit system used by every engine:
//   energies and frequencies  MHz
//   static fields             kV/cm
//   dipole moments            Debye
//   polarizabilities          atomic units
//   laser wavenumbers         cm^-1
//   intensities               W/cm^2
namespace units {

inline constexpr double kSpeedOfLight = 299792458.0;         // m/s
inline constexpr double kPlanck = 6.62607015e-34;            // J s
inline constexpr double kElementaryCharge = 1.602176634e-19; // C
inline constexpr double kBohrRadius = 5.29177210903e-11;     // m

inline constexpr double kDebyeSI = 1e-21 / kSpeedOfLight;                        // C m
inline constexpr double kAtomicDipoleSI = kElementaryCharge * kBohrRadius;       // C m
inline constexpr double kMHzPerInverseCm = kSpeedOfLight * 100.0 / 1e6;          // 29979.2458
inline constexpr double kMHzPerGHz = 1e3;
inline constexpr double kVPerMPerKVPerCm = 1e5;
inline constexpr double kDebyePerAtomicDipole = kAtomicDipoleSI / kDebyeSI;      // 2.541746...
// d * E / h for d = 1 D and E = 1 kV/cm, in MHz.
inline constexpr double kMHzPerDebyeKVPerCm = kDebyeSI * kVPerMPerKVPerCm / kPlanck / 1e6;
// One atomic unit of polarizability expressed as a light shift per intensity.
inline constexpr double kMHzPerWcm2PerAtomicPolarizability = 4.68645e-8;
// Wavelength in nm times wavenumber in cm^-1.
inline constexpr double kNmInverseCm = 1e7;

}  // namespace units

enum class Unit {
  inverse_cm,
  GHz,
  MHz,
  kV_per_cm,
  V_per_m,
  debye,
  au_dipole,
  au_polarizability,
  MHz_per_W_cm2,
  nm,
  W_per_cm2,
};

enum class Dimension { energy, field, dipole, polarizability, intensity };

struct Quantity {
  double value = 0.0;
  Unit unit = Unit::MHz;
};

class IncompatibleUnitsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Dimension dimension_of(Unit unit);
std::string_view unit_symbol(Unit unit);
Unit parse_unit(std::string_view symbol);

/// Converts between units of one dimension.
///
/// All conversions are linear rescalings except nm, which is a spectroscopic
/// wavelength and maps to energy through E = h c / lambda. Throws
/// IncompatibleUnitsError when the dimensions differ.
Quantity convert(const Quantity& q, Unit to);

inline double dipole_field_mhz(double dipole_debye, double field_kv_cm) {
  return dipole_debye * field_kv_cm * units::kMHzPerDebyeKVPerCm;
}

}  // namespace magictrap
