#include "magictrap/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace magictrap {

namespace {

constexpr double kTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check_scales(const LatticePlan& plan, std::vector<std::string>& out) {
  const auto& t = plan.thresholds;
  const double nu = plan.beams[0].nu_mhz;
  for (const auto& b : plan.beams) {
    if (b.name == "a") continue;
    if (!(nu > t.nu_over_delta * std::abs(b.delta_mhz))) {
      out.push_back("nu >> delta_" + b.name + " violated: nu_a = " + fmt(nu) + " MHz, " + fmt(t.nu_over_delta) +
                    " * |delta_" + b.name + "| = " + fmt(t.nu_over_delta * std::abs(b.delta_mhz)) + " MHz");
    }
  }
  const double beat = min_beat_mhz(plan);
  if (!(beat > t.delta_over_fmot * plan.f_mot_mhz)) {
    out.push_back("delta >> f_mot violated: min(|delta_b|, |delta_c|, |delta_b - delta_c|) = " + fmt(beat) +
                  " MHz, " + fmt(t.delta_over_fmot) + " * f_mot = " + fmt(t.delta_over_fmot * plan.f_mot_mhz) +
                  " MHz");
  }
}

}  // namespace

double min_beat_mhz(const LatticePlan& plan) {
  double beat = std::abs(plan.beams[0].nu_mhz - plan.beams[1].nu_mhz);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) beat = std::min(beat, std::abs(plan.beams[i].nu_mhz - plan.beams[j].nu_mhz));
  }
  return beat;
}

LatticePlan plan_magic_lattice(double nu_a_mhz, double delta_b_mhz, double delta_c_mhz, double f_mot_mhz,
                               const ScaleThresholds& thresholds) {
  if (!(f_mot_mhz > 0.0)) throw std::invalid_argument("f_mot must be positive");
  if (delta_b_mhz == delta_c_mhz) {
    throw SeparationOfScalesError("delta_b == delta_c: beams b and c would interfere at DC");
  }
  const double r2 = std::sqrt(0.5);
  const double s23 = std::sqrt(2.0 / 3.0);
  const double s13 = std::sqrt(1.0 / 3.0);
  const Eigen::Vector3d x = Eigen::Vector3d::UnitX();
  const Eigen::Vector3d y = Eigen::Vector3d::UnitY();
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d kb = r2 * (x + z);
  const Eigen::Vector3d kc = r2 * (x - z);

  LatticePlan plan;
  plan.f_mot_mhz = f_mot_mhz;
  plan.thresholds = thresholds;
  plan.beams[0] = {"a", y, s23 * x + s13 * z, nu_a_mhz, 0.0};
  plan.beams[1] = {"b", kb, s23 * kc + s13 * y, nu_a_mhz + delta_b_mhz, delta_b_mhz};
  plan.beams[2] = {"c", kc, s23 * kb + s13 * y, nu_a_mhz + delta_c_mhz, delta_c_mhz};

  std::vector<std::string> scale;
  check_scales(plan, scale);
  if (!scale.empty()) throw SeparationOfScalesError(scale.front());
  return plan;
}

std::vector<std::string> validate_plan(const LatticePlan& plan) {
  std::vector<std::string> out;
  const double cos0 = 1.0 / std::sqrt(3.0);
  for (const auto& b : plan.beams) {
    if (std::abs(b.k_hat.norm() - 1.0) > kTol) out.push_back("k_" + b.name + " is not a unit vector");
    if (std::abs(b.eps_hat.norm() - 1.0) > kTol) out.push_back("eps_" + b.name + " is not a unit vector");
    if (std::abs(b.k_hat.dot(b.eps_hat)) > kTol) out.push_back("eps_" + b.name + " is not transverse to k_" + b.name);
    const double c = std::abs(b.eps_hat.dot(Eigen::Vector3d::UnitZ()));
    if (std::abs(c - cos0) > kTol) {
      out.push_back("magic angle violated for beam " + b.name + ": |eps.z| = " + fmt(c) + ", expected " + fmt(cos0));
    }
    if (std::abs(b.nu_mhz - b.delta_mhz - plan.beams[0].nu_mhz) > kTol * std::abs(plan.beams[0].nu_mhz)) {
      out.push_back("nu_" + b.name + " - delta_" + b.name + " differs from nu_a");
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const auto& bi = plan.beams[i];
      const auto& bj = plan.beams[j];
      if (std::abs(bi.k_hat.dot(bj.k_hat)) > kTol) out.push_back("k_" + bi.name + " and k_" + bj.name + " are not orthogonal");
      if (bi.nu_mhz == bj.nu_mhz) out.push_back("beams " + bi.name + " and " + bj.name + " share a frequency");
    }
  }
  if (!(plan.f_mot_mhz > 0.0)) out.push_back("f_mot must be positive");
  check_scales(plan, out);
  return out;
}

nlohmann::json to_json(const LatticePlan& plan) {
  auto vec = [](const Eigen::Vector3d& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); };
  nlohmann::json beams = nlohmann::json::array();
  for (const auto& b : plan.beams) {
    beams.push_back({{"name", b.name},
                     {"k_hat", vec(b.k_hat)},
                     {"eps_hat", vec(b.eps_hat)},
                     {"nu_MHz", b.nu_mhz},
                     {"delta_MHz", b.delta_mhz},
                     {"abs_eps_dot_z", std::abs(b.eps_hat.z())}});
  }
  const auto violations = validate_plan(plan);
  return {{"beams", beams},
          {"f_mot_MHz", plan.f_mot_mhz},
          {"thresholds", {{"nu_over_delta", plan.thresholds.nu_over_delta},
                          {"delta_over_fmot", plan.thresholds.delta_over_fmot}}},
          {"min_beat_MHz", min_beat_mhz(plan)},
          {"cos_theta0", 1.0 / std::sqrt(3.0)},
          {"valid", violations.empty()},
          {"violations", violations}};
}

}  // namespace magictrap
