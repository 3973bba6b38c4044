#include "magictrap/units.hpp"

#include <array>
#include <utility>

namespace magictrap {

namespace {

struct UnitInfo {
  Unit unit;
  std::string_view symbol;
  Dimension dimension;
  double to_base;  // multiply to reach the dimension's base unit
};

// Base units: MHz, kV/cm, Debye, au polarizability, W/cm^2.
constexpr std::array<UnitInfo, 11> kUnits{{
    {Unit::inverse_cm, "cm^-1", Dimension::energy, units::kMHzPerInverseCm},
    {Unit::GHz, "GHz", Dimension::energy, units::kMHzPerGHz},
    {Unit::MHz, "MHz", Dimension::energy, 1.0},
    {Unit::kV_per_cm, "kV/cm", Dimension::field, 1.0},
    {Unit::V_per_m, "V/m", Dimension::field, 1.0 / units::kVPerMPerKVPerCm},
    {Unit::debye, "D", Dimension::dipole, 1.0},
    {Unit::au_dipole, "au_dipole", Dimension::dipole, units::kDebyePerAtomicDipole},
    {Unit::au_polarizability, "au", Dimension::polarizability, 1.0},
    {Unit::MHz_per_W_cm2, "MHz/(W/cm^2)", Dimension::polarizability,
     1.0 / units::kMHzPerWcm2PerAtomicPolarizability},
    // nm is handled reciprocally; to_base is unused.
    {Unit::nm, "nm", Dimension::energy, 0.0},
    {Unit::W_per_cm2, "W/cm^2", Dimension::intensity, 1.0},
}};

const UnitInfo& info(Unit unit) {
  for (const auto& u : kUnits) {
    if (u.unit == unit) return u;
  }
  throw std::logic_error("unknown unit");
}

double to_base(double value, Unit unit) {
  if (unit == Unit::nm) return units::kNmInverseCm / value * units::kMHzPerInverseCm;
  return value * info(unit).to_base;
}

double from_base(double value, Unit unit) {
  if (unit == Unit::nm) return units::kNmInverseCm / (value / units::kMHzPerInverseCm);
  return value / info(unit).to_base;
}

}  // namespace

Dimension dimension_of(Unit unit) { return info(unit).dimension; }

std::string_view unit_symbol(Unit unit) { return info(unit).symbol; }

Unit parse_unit(std::string_view symbol) {
  for (const auto& u : kUnits) {
    if (u.symbol == symbol) return u.unit;
  }
  throw std::invalid_argument("unknown unit '" + std::string(symbol) + "'");
}

Quantity convert(const Quantity& q, Unit to) {
  if (q.unit == to) return q;
  if (dimension_of(q.unit) != dimension_of(to)) {
    throw IncompatibleUnitsError("cannot convert " + std::string(unit_symbol(q.unit)) + " to " +
                                 std::string(unit_symbol(to)));
  }
  return {from_base(to_base(q.value, q.unit), to), to};
}

}  // namespace magictrap
