#include "magictrap/magic.hpp"

#include "magictrap/units.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace magictrap {

namespace {

MolecularPolarizability alpha_for(const MoleculeSpec& molecule, const MagicOptions& options) {
  if (options.alpha_override) return *options.alpha_override;
  return alpha_lambda_at(molecule, options.nu_inverse_cm);
}

int block_span(const StateLabel& a, const StateLabel& b) { return std::max({std::abs(a.m), std::abs(b.m), 1}); }

constexpr double kRadPerDeg = std::numbers::pi / 180.0;

}  // namespace

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::field: return "field";
    case SweepVariable::theta: return "theta";
    case SweepVariable::nu: return "nu";
  }
  return "?";
}

void SweepGrid::validate() const {
  if (!(from < to)) throw std::invalid_argument("sweep grid needs from < to");
  if (steps < 2) throw std::invalid_argument("sweep grid needs at least 2 steps");
}

SweepTable sweep(const SweepGrid& grid, const SweepContext& ctx, const std::vector<StateLabel>& states) {
  grid.validate();
  if (states.empty()) throw std::invalid_argument("sweep needs at least one state");
  int m_max = 0;
  for (const auto& s : states) {
    validate(s);
    m_max = std::max(m_max, std::abs(s.m));
  }

  SweepTable table;
  table.variable = grid.variable;
  table.states = states;

  // Field-independent pieces are hoisted out of the loop where possible.
  std::optional<DressedStates> fixed_states;
  if (grid.variable != SweepVariable::field) fixed_states.emplace(ctx.molecule, ctx.field_kv_cm, m_max, ctx.j_max);
  std::optional<MolecularPolarizability> fixed_alpha;
  if (grid.variable != SweepVariable::nu) fixed_alpha = alpha_lambda_at(ctx.molecule, ctx.nu_inverse_cm);

  for (int i = 0; i < grid.steps; ++i) {
    const double x = grid.value(i);
    std::optional<DressedStates> local_states;
    const DressedStates* dressed = fixed_states ? &*fixed_states : nullptr;
    if (!dressed) {
      local_states.emplace(ctx.molecule, x, m_max, ctx.j_max);
      dressed = &*local_states;
    }
    const MolecularPolarizability alpha = fixed_alpha ? *fixed_alpha : alpha_lambda_at(ctx.molecule, x);
    const PolarizationVector pol =
        grid.variable == SweepVariable::theta ? PolarizationVector::linear_degrees(x) : ctx.polarization;

    std::vector<double> a_row;
    std::vector<double> e_row;
    for (const auto& s : states) {
      const double a = effective_polarizability(*dressed, s, alpha, pol);
      a_row.push_back(a);
      e_row.push_back(-a * units::kMHzPerWcm2PerAtomicPolarizability * ctx.intensity_w_cm2);
    }
    table.values.push_back(x);
    table.alpha_eff.push_back(std::move(a_row));
    table.delta_e_mhz.push_back(std::move(e_row));
  }
  return table;
}

NoCrossingError::NoCrossingError(double diff_min, double diff_max)
    : std::runtime_error([&] {
        std::ostringstream os;
        os.precision(12);
        os << "no sign change in range; difference spans [" << diff_min << ", " << diff_max << "] au";
        return os.str();
      }()),
      diff_min_(diff_min),
      diff_max_(diff_max) {}

MagicFieldResult find_magic_field(const MoleculeSpec& molecule, const StateLabel& a, const StateLabel& b,
                                  const PolarizationVector& pol, double from_kv_cm, double to_kv_cm,
                                  const MagicOptions& options) {
  validate(a);
  validate(b);
  if (!(from_kv_cm < to_kv_cm) || from_kv_cm < 0.0) {
    throw std::invalid_argument("field range must satisfy 0 <= from < to");
  }
  if (options.scan_points < 2) throw std::invalid_argument("scan needs at least 2 points");
  const MolecularPolarizability alpha = alpha_for(molecule, options);
  if (alpha.anisotropy() == 0.0) {
    throw std::invalid_argument("magic field search requires alpha_parallel != alpha_perp");
  }
  const int m_max = block_span(a, b);
  auto diff = [&](double field) {
    const DressedStates states(molecule, field, m_max, options.j_max);
    return effective_polarizability(states, a, alpha, pol) - effective_polarizability(states, b, alpha, pol);
  };

  const int n = options.scan_points;
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> fs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = from_kv_cm + (to_kv_cm - from_kv_cm) * i / (n - 1);
    fs[static_cast<std::size_t>(i)] = diff(xs[static_cast<std::size_t>(i)]);
  }

  MagicFieldResult result;
  result.diff_min_au = *std::min_element(fs.begin(), fs.end());
  result.diff_max_au = *std::max_element(fs.begin(), fs.end());

  const double tiny = 1e-10 * std::abs(alpha.isotropic());
  const auto small = std::count_if(fs.begin(), fs.end(), [&](double f) { return std::abs(f) < tiny; });
  if (2 * small > n) {
    result.status = CrossingStatus::identically_equal;
    return result;
  }

  auto report = [&](double lo, double hi, double rel_tol) {
    CrossingReport r;
    r.a = a;
    r.b = b;
    r.polarization = pol;
    r.e_star_kv_cm = 0.5 * (lo + hi);
    r.beta_star = molecule.beta(r.e_star_kv_cm);
    r.bracket_lo_kv_cm = lo;
    r.bracket_hi_kv_cm = hi;
    r.residual_au = std::abs(diff(r.e_star_kv_cm));
    r.achieved_rel_tol = rel_tol;
    return r;
  };

  auto tolerance = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-13 * std::max(std::abs(lo), std::abs(hi)); };

  for (int i = 0; i + 1 < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (fs[k] == 0.0) {
      result.crossings.push_back(report(xs[k], xs[k], 0.0));
      continue;
    }
    if (fs[k] * fs[k + 1] >= 0.0) continue;
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(diff, xs[k], xs[k + 1], fs[k], fs[k + 1], tolerance,
                                                             max_iter);
    const double mid = 0.5 * (lo + hi);
    result.crossings.push_back(report(lo, hi, mid != 0.0 ? std::abs(hi - lo) / mid : 0.0));
  }
  if (fs.back() == 0.0) result.crossings.push_back(report(xs.back(), xs.back(), 0.0));

  if (result.crossings.empty()) throw NoCrossingError(result.diff_min_au, result.diff_max_au);
  result.status = CrossingStatus::found;
  return result;
}

PolarizationInvarianceReport magic_field_polarization_invariance(const MoleculeSpec& molecule,
                                                                 const StateLabel& a, const StateLabel& b,
                                                                 double from_kv_cm, double to_kv_cm,
                                                                 const std::vector<double>& theta_deg,
                                                                 const MagicOptions& options) {
  if (a.m != 0 || b.m != 0) throw std::invalid_argument("polarization invariance applies to M = 0 pairs");
  PolarizationInvarianceReport report;
  std::vector<std::pair<std::string, PolarizationVector>> pols{{"z", PolarizationVector::z()},
                                                               {"x", PolarizationVector::x()}};
  for (double th : theta_deg) {
    std::ostringstream name;
    name.precision(12);
    name << "theta:" << th;
    pols.emplace_back(name.str(), PolarizationVector::linear_degrees(th));
  }

  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto& [name, pol] : pols) {
    PolarizationCrossing entry{name, pol, CrossingStatus::none, std::nullopt};
    try {
      const auto r = find_magic_field(molecule, a, b, pol, from_kv_cm, to_kv_cm, options);
      entry.status = r.status;
      if (r.status == CrossingStatus::found) entry.e_star_kv_cm = r.crossings.front().e_star_kv_cm;
    } catch (const NoCrossingError&) {
      entry.status = CrossingStatus::none;
    }
    if (entry.e_star_kv_cm) {
      lo = any ? std::min(lo, *entry.e_star_kv_cm) : *entry.e_star_kv_cm;
      hi = any ? std::max(hi, *entry.e_star_kv_cm) : *entry.e_star_kv_cm;
      any = true;
    }
    report.entries.push_back(std::move(entry));
  }
  report.max_relative_spread = any && hi != 0.0 ? (hi - lo) / hi : 0.0;
  return report;
}

PolarizationVector magic_angle_polarization() {
  return PolarizationVector::from_components({std::sqrt(2.0 / 3.0), 0.0, std::sqrt(1.0 / 3.0)});
}

double magic_angle_degrees() { return std::acos(1.0 / std::sqrt(3.0)) / kRadPerDeg; }

MagicAngleReport magic_angle(const MoleculeSpec& molecule, const StateLabel& a, const StateLabel& b,
                             const std::vector<double>& fields_kv_cm, const MagicOptions& options) {
  validate(a);
  validate(b);
  if (fields_kv_cm.empty()) throw std::invalid_argument("magic angle needs at least one field");
  const MolecularPolarizability alpha = alpha_for(molecule, options);
  const int m_max = block_span(a, b);
  const PolarizationVector magic_pol = magic_angle_polarization();
  const PolarizationVector par = PolarizationVector::z();
  const PolarizationVector perp = PolarizationVector::x();

  MagicAngleReport report;
  report.theta0_deg = magic_angle_degrees();
  report.alpha_bar_au = alpha.isotropic();
  report.fields_kv_cm = fields_kv_cm;

  const double tiny = 1e-10 * std::max(std::abs(alpha.isotropic()), 1e-300);
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  int degenerate_fields = 0;
  std::vector<double> angles;
  bool all_cross = true;
  for (double field : fields_kv_cm) {
    const DressedStates states(molecule, field, m_max, options.j_max);
    for (const auto& label : {a, b}) {
      const double v = effective_polarizability(states, label, alpha, magic_pol);
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
    // For these diagonal tensors alpha_eff(theta) = A cos^2 + X sin^2.
    const double d_par = effective_polarizability(states, a, alpha, par) - effective_polarizability(states, b, alpha, par);
    const double d_perp =
        effective_polarizability(states, a, alpha, perp) - effective_polarizability(states, b, alpha, perp);
    if (std::abs(d_par) < tiny && std::abs(d_perp) < tiny) {
      ++degenerate_fields;
      report.crossing_angle_deg.emplace_back(std::nullopt);
      continue;
    }
    if (d_par * d_perp > 0.0) {
      all_cross = false;
      report.crossing_angle_deg.emplace_back(std::nullopt);
      continue;
    }
    const double theta = std::atan2(std::sqrt(std::abs(d_par)), std::sqrt(std::abs(d_perp))) / kRadPerDeg;
    angles.push_back(theta);
    report.crossing_angle_deg.emplace_back(theta);
  }
  report.spread_au = hi - lo;
  report.relative_spread = report.spread_au / std::abs(report.alpha_bar_au);
  report.every_angle_magic = degenerate_fields == static_cast<int>(fields_kv_cm.size());
  if (!report.every_angle_magic && all_cross && !angles.empty()) {
    const auto [mn, mx] = std::minmax_element(angles.begin(), angles.end());
    if (*mx - *mn < 1e-8) {
      report.common_angle = true;
      report.common_angle_deg = 0.5 * (*mn + *mx);
    }
  }
  return report;
}

}  // namespace magictrap
