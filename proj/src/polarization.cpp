#include "magictrap/polarization.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace magictrap {

PolarizationVector PolarizationVector::from_components(const CVec3& components) {
  double norm2 = 0.0;
  for (const auto& c : components) norm2 += std::norm(c);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw std::invalid_argument("polarization vector must be finite and nonzero");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  CVec3 e;
  for (int i = 0; i < 3; ++i) e[i] = components[i] * inv;
  return PolarizationVector(e);
}

PolarizationVector PolarizationVector::z() { return PolarizationVector({0.0, 0.0, 1.0}); }

PolarizationVector PolarizationVector::x() { return PolarizationVector({1.0, 0.0, 0.0}); }

PolarizationVector PolarizationVector::linear(double theta) {
  return PolarizationVector({std::sin(theta), 0.0, std::cos(theta)});
}

PolarizationVector PolarizationVector::linear_degrees(double theta_deg) {
  return linear(theta_deg * std::numbers::pi / 180.0);
}

PolarizationVector PolarizationVector::circular(int helicity) {
  if (helicity != 1 && helicity != -1) throw std::invalid_argument("helicity must be +1 or -1");
  const double r = 1.0 / std::numbers::sqrt2;
  return PolarizationVector({-helicity * r, cplx{0.0, -r}, 0.0});
}

bool PolarizationVector::is_real(double tol) const {
  for (const auto& c : e_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

bool PolarizationVector::in_xz_plane(double tol) const {
  return is_real(tol) && std::abs(e_[1]) <= tol;
}

std::string PolarizationVector::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "(";
  for (int i = 0; i < 3; ++i) {
    if (i) os << ", ";
    os << e_[i].real();
    if (e_[i].imag() != 0.0) os << (e_[i].imag() < 0 ? "-" : "+") << std::abs(e_[i].imag()) << "i";
  }
  os << ")";
  return os.str();
}

}  // namespace magictrap
