#pragma once

#include "magictrap/angular.hpp"

#include <string>

namespace magictrap {

// Complex unit polarization vector of the trapping light in the space-fixed
// frame (static field along z).
class PolarizationVector {
 public:
  /// Normalizes `components`; throws std::invalid_argument for a zero vector.
  static PolarizationVector from_components(const CVec3& components);
  static PolarizationVector z();
  static PolarizationVector x();
  /// cos(theta) z + sin(theta) x, theta in radians.
  static PolarizationVector linear(double theta);
  static PolarizationVector linear_degrees(double theta_deg);
  /// sigma± = ∓(x ± i y)/sqrt(2); helicity must be +1 or -1.
  static PolarizationVector circular(int helicity);

  const CVec3& components() const { return e_; }
  const cplx& operator[](Axis a) const { return e_[static_cast<int>(a)]; }
  bool is_real(double tol = 1e-15) const;
  // True for real vectors with no y component.
  bool in_xz_plane(double tol = 1e-15) const;
  std::string describe() const;

 private:
  explicit PolarizationVector(const CVec3& e) : e_(e) {}
  CVec3 e_;
};

}  // namespace magictrap
