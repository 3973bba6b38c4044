#include "magictrap/cli.hpp"

#include "magictrap/lattice.hpp"
#include "magictrap/magic.hpp"
#include "magictrap/polarizability.hpp"
#include "magictrap/units.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace magictrap::cli {

namespace {

double parse_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end || !std::isfinite(v)) {
    throw UsageError(what + ": '" + std::string(s) + "' is not a number");
  }
  return v;
}

int parse_int(std::string_view s, const std::string& what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end) throw UsageError(what + ": '" + std::string(s) + "' is not an integer");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string fmt(double v) { return format_number(v); }

// Options shared by most subcommands.
struct Common {
  std::string molecule;
  double field = 0.0;
  double nu = 9174.0;
  int jmax = kDefaultJMax;
  std::optional<double> theta;
  std::string pol = "z";
  std::string states = "0,0:1,0";
  std::string format = "csv";
  std::string out = "-";
  bool no_meta = false;
  double intensity = 1.0;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string argv_line;
};

void add_output_flags(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--out", c.out, "Output path, '-' for stdout")->capture_default_str();
  sub->add_flag("--no-meta", c.no_meta, "Suppress metadata lines");
}

void add_molecule_flag(CLI::App* sub, Common& c) {
  sub->add_option("--molecule", c.molecule, "Bundled molecule name or path to a .mol file")->required();
}

void add_pol_flags(CLI::App* sub, Common& c) {
  auto* pol = sub->add_option("--pol", c.pol, "z, x, theta:<deg>, sigma+ or sigma-")->capture_default_str();
  auto* theta = sub->add_option("--theta", c.theta, "Linear polarization angle from z in degrees");
  theta->excludes(pol);
}

PolarizationVector polarization_of(const Common& c) {
  if (c.theta) return PolarizationVector::linear_degrees(*c.theta);
  return parse_polarization(c.pol);
}

std::string polarization_text(const Common& c) { return c.theta ? "theta:" + fmt(*c.theta) : c.pol; }

void check_jmax(int jmax) {
  if (jmax < 3) throw UsageError("--jmax must be at least 3");
}

void meta_header(ResultTable& t, const Context& ctx, const std::string& command) {
  t.add_meta("tool", std::string("magictrap ") + MAGICTRAP_VERSION);
  t.add_meta("command", command);
  t.add_meta("argv", ctx.argv_line);
}

void meta_molecule(ResultTable& t, const MoleculeSpec& m) {
  t.add_meta("molecule", m.name);
  t.add_meta("B_MHz", fmt(m.b_mhz));
  t.add_meta("d00_debye", fmt(m.d00_debye));
}

double branch_code(Branch b) { return b == Branch::plus ? 1.0 : b == Branch::minus ? -1.0 : 0.0; }

int m_max_of(const std::vector<StateLabel>& states) {
  int m = 1;
  for (const auto& s : states) m = std::max(m, std::abs(s.m));
  return m;
}

void emit(const Context& ctx, const Common& c, const ResultTable& t) {
  auto write = [&](std::ostream& os) {
    if (c.format == "json") {
      write_json(os, t, !c.no_meta);
    } else {
      write_csv(os, t, !c.no_meta);
    }
  };
  if (c.out == "-") {
    write(ctx.out);
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot open output file '" + c.out + "'");
  write(f);
}

ResultTable cmd_eigen(const Context& ctx, const Common& c) {
  check_jmax(c.jmax);
  const auto mol = resolve_molecule(c.molecule);
  const auto states = parse_states(c.states);
  const DressedStates dressed(mol, c.field, m_max_of(states), c.jmax);
  ResultTable t;
  meta_header(t, ctx, "eigen");
  meta_molecule(t, mol);
  t.add_meta("field_kV_per_cm", fmt(c.field));
  t.add_meta("beta", fmt(mol.beta(c.field)));
  t.add_meta("jmax", std::to_string(c.jmax));
  for (auto [n, u] : {std::pair{"J", "1"}, {"M", "1"}, {"energy", "MHz"}, {"energy_over_B", "1"}, {"cos2_theta", "1"}}) {
    t.add_column(n, u);
  }
  for (const auto& s : states) {
    const auto& sys = dressed.block(s.m);
    const double e = sys.energy(s.j);
    t.add_row({double(s.j), double(s.m), e, e / mol.b_mhz, alignment(sys, s.j)});
  }
  return t;
}

ResultTable cmd_polar(const Context& ctx, const Common& c) {
  check_jmax(c.jmax);
  const auto mol = resolve_molecule(c.molecule);
  const auto states = parse_states(c.states);
  const auto pol = polarization_of(c);
  const auto alpha = alpha_lambda_at(mol, c.nu);
  const DressedStates dressed(mol, c.field, m_max_of(states), c.jmax);
  ResultTable t;
  meta_header(t, ctx, "polar");
  meta_molecule(t, mol);
  t.add_meta("field_kV_per_cm", fmt(c.field));
  t.add_meta("beta", fmt(mol.beta(c.field)));
  t.add_meta("nu_inverse_cm", fmt(c.nu));
  t.add_meta("alpha_parallel_au", fmt(alpha.parallel));
  t.add_meta("alpha_perpendicular_au", fmt(alpha.perpendicular));
  t.add_meta("polarization", polarization_text(c));
  t.add_meta("intensity_W_per_cm2", fmt(c.intensity));
  t.add_meta("jmax", std::to_string(c.jmax));
  for (auto [n, u] : {std::pair{"J", "1"}, {"M", "1"}, {"branch", "1"}, {"alpha_eff", "au"}, {"delta_E", "MHz"},
                      {"alpha_xx", "au"}, {"alpha_yy", "au"}, {"alpha_zz", "au"}}) {
    t.add_column(n, u);
  }
  for (const auto& s : states) {
    const auto& sys = dressed.block(s.m);
    const auto tensor = alpha_tensor_closed_form(sys, s, alpha);
    const double a = effective_polarizability(dressed, s, alpha, pol);
    const double de = -a * units::kMHzPerWcm2PerAtomicPolarizability * c.intensity;
    t.add_row({double(s.j), double(s.m), branch_code(s.branch), a, de, tensor.xx(), tensor.yy(), tensor.zz()});
  }
  return t;
}

ResultTable cmd_sweep(const Context& ctx, const Common& c, const std::string& var, const std::string& range,
                      int steps) {
  check_jmax(c.jmax);
  SweepGrid grid;
  if (var == "field") {
    grid.variable = SweepVariable::field;
  } else if (var == "theta") {
    grid.variable = SweepVariable::theta;
  } else {
    grid.variable = SweepVariable::nu;
  }
  std::tie(grid.from, grid.to) = parse_range(range);
  grid.steps = steps;
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (grid.variable == SweepVariable::field && grid.from < 0.0) throw UsageError("field range must be non-negative");

  SweepContext sc{resolve_molecule(c.molecule), c.field, c.nu, polarization_of(c), c.intensity, c.jmax};
  const auto states = parse_states(c.states);
  const auto table = sweep(grid, sc, states);

  ResultTable t;
  meta_header(t, ctx, "sweep");
  meta_molecule(t, sc.molecule);
  t.add_meta("variable", var);
  t.add_meta("range", fmt(grid.from) + ":" + fmt(grid.to));
  t.add_meta("steps", std::to_string(grid.steps));
  if (grid.variable != SweepVariable::field) t.add_meta("field_kV_per_cm", fmt(c.field));
  if (grid.variable != SweepVariable::nu) t.add_meta("nu_inverse_cm", fmt(c.nu));
  if (grid.variable != SweepVariable::theta) t.add_meta("polarization", polarization_text(c));
  t.add_meta("intensity_W_per_cm2", fmt(c.intensity));
  t.add_meta("jmax", std::to_string(c.jmax));

  const char* unit = grid.variable == SweepVariable::field ? "kV/cm" : grid.variable == SweepVariable::theta ? "deg" : "cm^-1";
  t.add_column(var, unit);
  for (const auto& s : states) t.add_column("alpha_" + state_tag(s), "au");
  for (const auto& s : states) t.add_column("delta_E_" + state_tag(s), "MHz");
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    std::vector<double> row{table.values[i]};
    row.insert(row.end(), table.alpha_eff[i].begin(), table.alpha_eff[i].end());
    row.insert(row.end(), table.delta_e_mhz[i].begin(), table.delta_e_mhz[i].end());
    t.add_row(std::move(row));
  }
  return t;
}

ResultTable cmd_find_magic(const Context& ctx, const Common& c, const std::string& pair, const std::string& range,
                           int scan_points) {
  check_jmax(c.jmax);
  const auto states = parse_states(pair);
  if (states.size() != 2) throw UsageError("--pair needs exactly two states, e.g. 0,0:1,0");
  const auto [from, to] = parse_range(range);
  if (!(from < to) || from < 0.0) throw UsageError("--range must satisfy 0 <= from < to");
  if (scan_points < 2) throw UsageError("--scan-points must be at least 2");
  const auto mol = resolve_molecule(c.molecule);
  MagicOptions opt;
  opt.nu_inverse_cm = c.nu;
  opt.j_max = c.jmax;
  opt.scan_points = scan_points;
  const auto result = find_magic_field(mol, states[0], states[1], polarization_of(c), from, to, opt);

  ResultTable t;
  meta_header(t, ctx, "find-magic-field");
  meta_molecule(t, mol);
  t.add_meta("pair", to_string(states[0]) + " x " + to_string(states[1]));
  t.add_meta("polarization", polarization_text(c));
  t.add_meta("range_kV_per_cm", fmt(from) + ":" + fmt(to));
  t.add_meta("nu_inverse_cm", fmt(c.nu));
  t.add_meta("jmax", std::to_string(c.jmax));
  t.add_meta("status", result.status == CrossingStatus::found ? "found" : "identically_equal");
  t.add_meta("diff_min_au", fmt(result.diff_min_au));
  t.add_meta("diff_max_au", fmt(result.diff_max_au));
  for (auto [n, u] : {std::pair{"E_star", "kV/cm"}, {"beta_star", "1"}, {"bracket_lo", "kV/cm"},
                      {"bracket_hi", "kV/cm"}, {"residual", "au"}, {"relative_tolerance", "1"}}) {
    t.add_column(n, u);
  }
  for (const auto& r : result.crossings) {
    t.add_row({r.e_star_kv_cm, r.beta_star, r.bracket_lo_kv_cm, r.bracket_hi_kv_cm, r.residual_au, r.achieved_rel_tol});
  }
  return t;
}

ResultTable cmd_magic_angle(const Context& ctx, const Common& c, const std::vector<double>& fields) {
  check_jmax(c.jmax);
  const auto states = parse_states(c.states);
  if (states.size() != 2) throw UsageError("--states needs exactly two states for magic-angle");
  for (double f : fields) {
    if (f < 0.0) throw UsageError("--fields must be non-negative");
  }
  const auto mol = resolve_molecule(c.molecule);
  MagicOptions opt;
  opt.nu_inverse_cm = c.nu;
  opt.j_max = c.jmax;
  const auto rep = magic_angle(mol, states[0], states[1], fields, opt);
  const auto alpha = alpha_lambda_at(mol, c.nu);
  const auto pol = magic_angle_polarization();

  ResultTable t;
  meta_header(t, ctx, "magic-angle");
  meta_molecule(t, mol);
  t.add_meta("pair", to_string(states[0]) + " x " + to_string(states[1]));
  t.add_meta("nu_inverse_cm", fmt(c.nu));
  t.add_meta("jmax", std::to_string(c.jmax));
  t.add_meta("theta0_deg", fmt(rep.theta0_deg));
  t.add_meta("alpha_bar_au", fmt(rep.alpha_bar_au));
  t.add_meta("spread_au", fmt(rep.spread_au));
  t.add_meta("relative_spread", fmt(rep.relative_spread));
  t.add_meta("common_angle", rep.common_angle ? fmt(*rep.common_angle_deg) : std::string("none"));
  t.add_meta("every_angle_magic", rep.every_angle_magic ? "true" : "false");

  for (auto [n, u] : {std::pair{"field", "kV/cm"}, {"theta0", "deg"}, {"alpha_bar", "au"}}) t.add_column(n, u);
  for (const auto& s : states) t.add_column("alpha_theta0_" + state_tag(s), "au");
  t.add_column("relative_residual", "1");
  t.add_column("crossing_theta", "deg");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const DressedStates dressed(mol, fields[i], m_max_of(states), c.jmax);
    const double a0 = effective_polarizability(dressed, states[0], alpha, pol);
    const double a1 = effective_polarizability(dressed, states[1], alpha, pol);
    const double res = std::max(std::abs(a0 - rep.alpha_bar_au), std::abs(a1 - rep.alpha_bar_au)) /
                       std::abs(rep.alpha_bar_au);
    const auto& th = rep.crossing_angle_deg[i];
    t.add_row({fields[i], rep.theta0_deg, rep.alpha_bar_au, a0, a1, res, th ? *th : std::nan("")});
  }
  return t;
}

ResultTable cmd_convergence(const Context& ctx, const Common& c, double tol) {
  check_jmax(c.jmax);
  const auto mol = resolve_molecule(c.molecule);
  const auto states = parse_states(c.states);
  ResultTable t;
  meta_header(t, ctx, "convergence");
  meta_molecule(t, mol);
  t.add_meta("field_kV_per_cm", fmt(c.field));
  t.add_meta("beta", fmt(mol.beta(c.field)));
  t.add_meta("jmax", std::to_string(c.jmax));
  t.add_meta("jmax_extended", std::to_string(c.jmax + 4));
  t.add_meta("tolerance", fmt(tol));
  for (auto [n, u] : {std::pair{"J", "1"}, {"M", "1"}, {"energy_jmax", "MHz"}, {"energy_extended", "MHz"},
                      {"relative_change", "1"}, {"converged", "1"}}) {
    t.add_column(n, u);
  }
  for (const auto& s : states) {
    const auto r = check_convergence(mol, c.field, s.m, s.j, c.jmax, tol);
    t.add_row({double(s.j), double(s.m), r.energy_jmax, r.energy_extended, r.relative_change, r.converged ? 1.0 : 0.0});
  }
  return t;
}

ResultTable lattice_table(const LatticePlan& plan) {
  ResultTable t;
  for (auto [n, u] : {std::pair{"beam", "1"}, {"k_x", "1"}, {"k_y", "1"}, {"k_z", "1"}, {"eps_x", "1"},
                      {"eps_y", "1"}, {"eps_z", "1"}, {"nu", "MHz"}, {"delta", "MHz"}}) {
    t.add_column(n, u);
  }
  for (int i = 0; i < 3; ++i) {
    const auto& b = plan.beams[static_cast<std::size_t>(i)];
    t.add_row({double(i), b.k_hat.x(), b.k_hat.y(), b.k_hat.z(), b.eps_hat.x(), b.eps_hat.y(), b.eps_hat.z(), b.nu_mhz,
               b.delta_mhz});
  }
  return t;
}

std::string one_line(std::string s) {
  for (auto& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

StateLabel parse_state(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() < 2 || parts.size() > 3) throw UsageError("state '" + text + "' must be J,M or J,M,+/-");
  StateLabel s;
  s.j = parse_int(parts[0], "state J");
  s.m = parse_int(parts[1], "state M");
  if (parts.size() == 3) {
    if (parts[2] == "+") {
      s.branch = Branch::plus;
    } else if (parts[2] == "-" || parts[2] == "\xE2\x88\x92") {
      s.branch = Branch::minus;
    } else {
      throw UsageError("state '" + text + "': branch must be + or -");
    }
  }
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

std::vector<StateLabel> parse_states(const std::string& text) {
  std::vector<StateLabel> out;
  for (const auto& p : split(text, ':')) out.push_back(parse_state(p));
  if (out.empty()) throw UsageError("empty state list");
  return out;
}

PolarizationVector parse_polarization(const std::string& text) {
  if (text == "z") return PolarizationVector::z();
  if (text == "x") return PolarizationVector::x();
  if (text == "sigma+") return PolarizationVector::circular(1);
  if (text == "sigma-") return PolarizationVector::circular(-1);
  if (text.rfind("theta:", 0) == 0) return PolarizationVector::linear_degrees(parse_double(text.substr(6), "--pol angle"));
  throw UsageError("unknown polarization '" + text + "' (z, x, theta:<deg>, sigma+, sigma-)");
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError("range '" + text + "' must be from:to");
  return {parse_double(parts[0], "range start"), parse_double(parts[1], "range end")};
}

std::string state_tag(const StateLabel& s) {
  std::string t = std::to_string(s.j) + "_" + std::to_string(s.m);
  if (s.branch == Branch::plus) t += "+";
  if (s.branch == Branch::minus) t += "-";
  return t;
}

Figure parse_figure(const std::string& id) {
  if (id == "fig2") return Figure::fig2;
  if (id == "fig3") return Figure::fig3;
  if (id == "fig4") return Figure::fig4;
  throw UsageError("unknown figure '" + id + "' (fig2, fig3, fig4)");
}

ResultTable emit_figure_data(Figure figure, const std::string& molecule, double nu, int j_max) {
  const auto names = bundled_molecule_names();
  if (std::find(names.begin(), names.end(), molecule) == names.end()) {
    throw UsageError("figure data is defined for bundled molecules only, not '" + molecule + "'");
  }
  const auto mol = resolve_molecule(molecule);
  const auto alpha = alpha_lambda_at(mol, nu);
  ResultTable t;
  meta_molecule(t, mol);
  t.add_meta("nu_inverse_cm", fmt(nu));
  t.add_meta("jmax", std::to_string(j_max));

  switch (figure) {
    case Figure::fig2: {
      t.add_meta("figure", "fig2");
      const std::vector<StateLabel> par{{0, 0}, {1, 0}, {1, 1}};
      const std::vector<StateLabel> perp{{0, 0}, {1, 0}, {1, 1, Branch::plus}, {1, 1, Branch::minus}};
      t.add_column("field", "kV/cm");
      t.add_column("beta", "1");
      for (const auto& s : par) t.add_column("alpha_parallel_" + state_tag(s), "au");
      t.add_column("alpha_perpendicular_0_0", "au");
      t.add_column("alpha_perpendicular_1_0", "au");
      t.add_column("alpha_perpendicular_1_|+1>+|-1>", "au");
      t.add_column("alpha_perpendicular_1_|+1>-|-1>", "au");
      for (int i = 0; i <= 150; ++i) {
        const double f = 0.1 * i;
        const DressedStates d(mol, f, 1, j_max);
        std::vector<double> row{f, mol.beta(f)};
        for (const auto& s : par) row.push_back(effective_polarizability(d, s, alpha, PolarizationVector::z()));
        for (const auto& s : perp) row.push_back(effective_polarizability(d, s, alpha, PolarizationVector::x()));
        t.add_row(std::move(row));
      }
      break;
    }
    case Figure::fig3: {
      t.add_meta("figure", "fig3");
      t.add_meta("state", "0,0");
      t.add_column("field", "kV/cm");
      t.add_column("theta", "deg");
      t.add_column("alpha_0_0", "au");
      for (int i = 0; i <= 30; ++i) {
        const double f = 0.5 * i;
        const DressedStates d(mol, f, 0, j_max);
        const auto tensor = alpha_tensor_closed_form(d.block(0), {0, 0}, alpha);
        for (int k = 0; k <= 18; ++k) {
          const double th = 5.0 * k;
          t.add_row({f, th, project(tensor.components, PolarizationVector::linear_degrees(th))});
        }
      }
      break;
    }
    case Figure::fig4: {
      t.add_meta("figure", "fig4");
      const double step = mol.name == "KRb" ? 0.6 : 0.3;
      t.add_meta("field_step_kV_per_cm", fmt(step));
      t.add_column("field", "kV/cm");
      t.add_column("theta", "deg");
      t.add_column("alpha_0_0", "au");
      t.add_column("alpha_1_0", "au");
      for (int i = 1; i <= 10; ++i) {
        const double f = step * i;
        const DressedStates d(mol, f, 0, j_max);
        const auto t0 = alpha_tensor_closed_form(d.block(0), {0, 0}, alpha);
        const auto t1 = alpha_tensor_closed_form(d.block(0), {1, 0}, alpha);
        for (int k = 0; k <= 90; ++k) {
          const auto pol = PolarizationVector::linear_degrees(k);
          t.add_row({f, double(k), project(t0.components, pol), project(t1.components, pol)});
        }
      }
      break;
    }
  }
  return t;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Field-dressed polarizabilities and magic trapping conditions for polar molecules", "magictrap"};
  app.set_version_flag("--version", std::string(MAGICTRAP_VERSION));
  app.require_subcommand(1);

  Common c;
  std::string var = "field";
  std::string range = "0:15";
  std::string pair = "0,0:1,0";
  std::string figure_id;
  int steps = 61;
  int scan_points = 64;
  double tol = 1e-8;
  std::vector<double> fields{0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  double nu_a = 2.75e8;
  double delta_b = 80.0;
  double delta_c = 160.0;
  double f_mot = 0.1;
  ScaleThresholds thresholds;

  auto* eigen = app.add_subcommand("eigen", "Dressed rotational energies");
  add_molecule_flag(eigen, c);
  eigen->add_option("--field", c.field, "DC field in kV/cm")->capture_default_str()->check(CLI::NonNegativeNumber);
  eigen->add_option("--jmax", c.jmax, "Basis truncation")->capture_default_str();
  eigen->add_option("--states", c.states, "States J,M[,+/-] separated by ':'")->capture_default_str();
  add_output_flags(eigen, c);

  auto* polar = app.add_subcommand("polar", "Polarizability tensor and light shift of dressed states");
  add_molecule_flag(polar, c);
  polar->add_option("--field", c.field, "DC field in kV/cm")->capture_default_str()->check(CLI::NonNegativeNumber);
  polar->add_option("--nu", c.nu, "Laser frequency in cm^-1")->capture_default_str();
  polar->add_option("--jmax", c.jmax, "Basis truncation")->capture_default_str();
  polar->add_option("--states", c.states, "States J,M[,+/-] separated by ':'")->capture_default_str();
  polar->add_option("--intensity", c.intensity, "Laser intensity in W/cm^2")->capture_default_str();
  add_pol_flags(polar, c);
  add_output_flags(polar, c);

  auto* sw = app.add_subcommand("sweep", "Tabulate alpha_eff and delta E over field, angle or frequency");
  add_molecule_flag(sw, c);
  sw->add_option("--var", var, "Swept variable")->check(CLI::IsMember({"field", "theta", "nu"}))->capture_default_str();
  sw->add_option("--range", range, "from:to of the swept variable")->capture_default_str();
  sw->add_option("--steps", steps, "Grid points")->capture_default_str();
  sw->add_option("--field", c.field, "DC field in kV/cm when not swept")->capture_default_str()->check(CLI::NonNegativeNumber);
  sw->add_option("--nu", c.nu, "Laser frequency in cm^-1 when not swept")->capture_default_str();
  sw->add_option("--jmax", c.jmax, "Basis truncation")->capture_default_str();
  sw->add_option("--states", c.states, "States J,M[,+/-] separated by ':'")->capture_default_str();
  sw->add_option("--intensity", c.intensity, "Laser intensity in W/cm^2")->capture_default_str();
  add_pol_flags(sw, c);
  add_output_flags(sw, c);

  auto* fm = app.add_subcommand("find-magic-field", "Locate DC fields where two states share alpha_eff");
  add_molecule_flag(fm, c);
  fm->add_option("--pair", pair, "Two states A:B")->capture_default_str();
  fm->add_option("--range", range, "Field range from:to in kV/cm")->capture_default_str();
  fm->add_option("--nu", c.nu, "Laser frequency in cm^-1")->capture_default_str();
  fm->add_option("--jmax", c.jmax, "Basis truncation")->capture_default_str();
  fm->add_option("--scan-points", scan_points, "Coarse scan points before refinement")->capture_default_str();
  add_pol_flags(fm, c);
  add_output_flags(fm, c);

  auto* ma = app.add_subcommand("magic-angle", "Check the magic polarization angle over several fields");
  add_molecule_flag(ma, c);
  ma->add_option("--states", c.states, "Two states A:B")->capture_default_str();
  ma->add_option("--fields", fields, "DC fields in kV/cm")->delimiter(',')->capture_default_str();
  ma->add_option("--nu", c.nu, "Laser frequency in cm^-1")->capture_default_str();
  ma->add_option("--jmax", c.jmax, "Basis truncation")->capture_default_str();
  add_output_flags(ma, c);

  auto* lat = app.add_subcommand("lattice", "Three-beam magic-angle lattice plan");
  lat->add_option("--nu-a", nu_a, "Frequency of beam a in MHz")->capture_default_str();
  lat->add_option("--delta-b", delta_b, "Offset of beam b in MHz")->capture_default_str();
  lat->add_option("--delta-c", delta_c, "Offset of beam c in MHz")->capture_default_str();
  lat->add_option("--f-mot", f_mot, "Trap motional frequency in MHz")->capture_default_str();
  lat->add_option("--nu-over-delta", thresholds.nu_over_delta, "Required nu/delta ratio")->capture_default_str();
  lat->add_option("--delta-over-fmot", thresholds.delta_over_fmot, "Required delta/f_mot ratio")->capture_default_str();
  c.format = "csv";
  std::string lat_format = "json";
  lat->add_option("--format", lat_format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  lat->add_option("--out", c.out, "Output path, '-' for stdout")->capture_default_str();
  lat->add_flag("--no-meta", c.no_meta, "Suppress metadata lines");

  auto* conv = app.add_subcommand("convergence", "Compare energies at jmax and jmax + 4");
  add_molecule_flag(conv, c);
  conv->add_option("--field", c.field, "DC field in kV/cm")->capture_default_str()->check(CLI::NonNegativeNumber);
  conv->add_option("--jmax", c.jmax, "Basis truncation")->capture_default_str();
  conv->add_option("--states", c.states, "States J,M separated by ':'")->capture_default_str();
  conv->add_option("--tolerance", tol, "Relative tolerance")->capture_default_str();
  add_output_flags(conv, c);

  auto* fig = app.add_subcommand("figure", "Reference data tables fig2, fig3, fig4");
  fig->add_option("id", figure_id, "fig2, fig3 or fig4")->required();
  add_molecule_flag(fig, c);
  fig->add_option("--nu", c.nu, "Laser frequency in cm^-1")->capture_default_str();
  fig->add_option("--jmax", c.jmax, "Basis truncation")->capture_default_str();
  add_output_flags(fig, c);

  std::vector<const char*> argv{"magictrap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return 1;
  }

  std::string line;
  for (const auto& a : args) line += (line.empty() ? "" : " ") + a;
  const Context ctx{out, err, line};

  try {
    if (*eigen) {
      emit(ctx, c, cmd_eigen(ctx, c));
    } else if (*polar) {
      emit(ctx, c, cmd_polar(ctx, c));
    } else if (*sw) {
      emit(ctx, c, cmd_sweep(ctx, c, var, range, steps));
    } else if (*fm) {
      emit(ctx, c, cmd_find_magic(ctx, c, pair, range, scan_points));
    } else if (*ma) {
      emit(ctx, c, cmd_magic_angle(ctx, c, fields));
    } else if (*conv) {
      emit(ctx, c, cmd_convergence(ctx, c, tol));
    } else if (*fig) {
      check_jmax(c.jmax);
      auto t = emit_figure_data(parse_figure(figure_id), c.molecule, c.nu, c.jmax);
      ResultTable full;
      meta_header(full, ctx, "figure");
      full.metadata.insert(full.metadata.end(), t.metadata.begin(), t.metadata.end());
      full.columns = std::move(t.columns);
      full.rows = std::move(t.rows);
      emit(ctx, c, full);
    } else if (*lat) {
      LatticePlan plan;
      try {
        plan = plan_magic_lattice(nu_a, delta_b, delta_c, f_mot, thresholds);
      } catch (const SeparationOfScalesError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (lat_format == "json") {
        auto j = to_json(plan);
        if (!c.no_meta) j["metadata"] = {{"tool", std::string("magictrap ") + MAGICTRAP_VERSION}, {"argv", line}};
        std::ostringstream os;
        os << j.dump(2) << '\n';
        if (c.out == "-") {
          out << os.str();
        } else {
          std::ofstream f(c.out);
          if (!f) throw std::runtime_error("cannot open output file '" + c.out + "'");
          f << os.str();
        }
      } else {
        auto t = lattice_table(plan);
        meta_header(t, ctx, "lattice");
        t.add_meta("f_mot_MHz", fmt(plan.f_mot_mhz));
        t.add_meta("valid", validate_plan(plan).empty() ? "true" : "false");
        c.format = "csv";
        emit(ctx, c, t);
      }
    }
  } catch (const UsageError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: computation: " << one_line(e.what()) << '\n';
    return 2;
  }
  return 0;
}

}  // namespace magictrap::cli
