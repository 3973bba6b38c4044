#pragma once

#include <Eigen/Dense>
#include "json.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace magictrap {

struct Beam {
  std::string name;
  Eigen::Vector3d k_hat;
  Eigen::Vector3d eps_hat;
  double nu_mhz = 0.0;
  double delta_mhz = 0.0;  // offset from beam a
};

// "Much greater than" made checkable: nu > nu_over_delta * |delta| and every
// beat note > delta_over_fmot * f_mot.
struct ScaleThresholds {
  double nu_over_delta = 100.0;
  double delta_over_fmot = 100.0;
};

struct LatticePlan {
  std::array<Beam, 3> beams;
  double f_mot_mhz = 0.0;
  ScaleThresholds thresholds;
};

class SeparationOfScalesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Three orthogonal retroreflected beams, each polarized at the magic angle
/// to z:
///   k_a = y,            eps_a = sqrt(2/3) x   + sqrt(1/3) z
///   k_b = (x + z)/√2,   eps_b = sqrt(2/3) k_c + sqrt(1/3) y
///   k_c = (x - z)/√2,   eps_c = sqrt(2/3) k_b + sqrt(1/3) y
/// with nu_b = nu_a + delta_b and nu_c = nu_a + delta_c. All frequencies in MHz.
LatticePlan plan_magic_lattice(double nu_a_mhz, double delta_b_mhz, double delta_c_mhz, double f_mot_mhz,
                               const ScaleThresholds& thresholds = {});

/// Every violated invariant as a human-readable line; empty when valid.
std::vector<std::string> validate_plan(const LatticePlan& plan);

/// Smallest beat frequency between any two beams.
double min_beat_mhz(const LatticePlan& plan);

nlohmann::json to_json(const LatticePlan& plan);

}  // namespace magictrap
