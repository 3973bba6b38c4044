#include "magictrap/molecule.hpp"

#include "magictrap/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace magictrap {

MoleculeParseError::MoleculeParseError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what) {}

MoleculeValidationError::MoleculeValidationError(const std::string& field, const std::string& what)
    : std::runtime_error("invalid molecule field '" + field + "': " + what), field_(field) {}

double MoleculeSpec::dipole_field_mhz(double field_kv_cm) const {
  return magictrap::dipole_field_mhz(d00_debye, field_kv_cm);
}

double MoleculeSpec::beta(double field_kv_cm) const { return dipole_field_mhz(field_kv_cm) / b_mhz; }

double MoleculeSpec::field_for_beta(double beta) const {
  return beta * b_mhz / magictrap::dipole_field_mhz(d00_debye, 1.0);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

void validate(const MoleculeSpec& spec) {
  if (spec.name.empty()) throw MoleculeValidationError("name", "missing");
  if (!(spec.b_mhz > 0.0)) throw MoleculeValidationError("B_GHz", "must be positive");
  if (!(spec.d00_debye >= 0.0)) throw MoleculeValidationError("d00_debye", "must be non-negative");
  if (spec.alpha_table.empty()) throw MoleculeValidationError("alpha", "table is empty");
  for (std::size_t i = 1; i < spec.alpha_table.size(); ++i) {
    if (!(spec.alpha_table[i].nu_inverse_cm > spec.alpha_table[i - 1].nu_inverse_cm)) {
      throw MoleculeValidationError("alpha", "frequency grid must be strictly increasing (row " +
                                                 std::to_string(i + 1) + ")");
    }
  }
  if (!(spec.alpha_table.front().nu_inverse_cm > 0.0)) {
    throw MoleculeValidationError("alpha", "frequencies must be positive");
  }
}

MoleculeSpec parse_molecule(std::string_view text, const std::string& source) {
  MoleculeSpec spec;
  bool have_b = false;
  bool have_d = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw MoleculeParseError(source, line_no, "expected 'key: value'");
    const auto key = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));

    if (key == "name") {
      if (value.empty()) throw MoleculeParseError(source, line_no, "empty name");
      spec.name = std::string(value);
    } else if (key == "B_GHz") {
      const auto v = to_double(value);
      if (!v) throw MoleculeParseError(source, line_no, "B_GHz is not a number");
      spec.b_mhz = convert({*v, Unit::GHz}, Unit::MHz).value;
      have_b = true;
    } else if (key == "d00_debye") {
      const auto v = to_double(value);
      if (!v) throw MoleculeParseError(source, line_no, "d00_debye is not a number");
      spec.d00_debye = *v;
      have_d = true;
    } else if (key == "alpha") {
      const auto fields = split_ws(value);
      if (fields.size() != 3) {
        throw MoleculeParseError(source, line_no, "alpha needs <nu> <alpha_par> <alpha_perp>");
      }
      AlphaNode node;
      const auto nu = to_double(fields[0]);
      const auto par = to_double(fields[1]);
      const auto perp = to_double(fields[2]);
      if (!nu || !par || !perp) throw MoleculeParseError(source, line_no, "alpha entry is not numeric");
      node.nu_inverse_cm = *nu;
      node.parallel_au = *par;
      node.perpendicular_au = *perp;
      spec.alpha_table.push_back(node);
    } else {
      throw MoleculeParseError(source, line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_b) throw MoleculeValidationError("B_GHz", "missing");
  if (!have_d) throw MoleculeValidationError("d00_debye", "missing");
  validate(spec);
  return spec;
}

MoleculeSpec load_molecule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open molecule file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_molecule(buf.str(), path.string());
}

std::vector<std::string> bundled_molecule_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : detail::bundled_molecule_texts()) names.emplace_back(name);
  return names;
}

MoleculeSpec resolve_molecule(const std::string& name_or_path) {
  for (const auto& [name, text] : detail::bundled_molecule_texts()) {
    if (name == name_or_path) return parse_molecule(text, "bundled:" + std::string(name));
  }
  return load_molecule(name_or_path);
}

MolecularPolarizability alpha_lambda_at(const MoleculeSpec& spec, double nu_inverse_cm) {
  const auto& t = spec.alpha_table;
  if (t.empty() || nu_inverse_cm < t.front().nu_inverse_cm || nu_inverse_cm > t.back().nu_inverse_cm ||
      !std::isfinite(nu_inverse_cm)) {
    std::ostringstream os;
    os << "wavenumber " << nu_inverse_cm << " cm^-1 outside the tabulated range of " << spec.name;
    throw std::out_of_range(os.str());
  }
  const auto upper = std::lower_bound(t.begin(), t.end(), nu_inverse_cm,
                                      [](const AlphaNode& n, double nu) { return n.nu_inverse_cm < nu; });
  if (upper->nu_inverse_cm == nu_inverse_cm) return {upper->parallel_au, upper->perpendicular_au};
  const auto lower = upper - 1;
  const double w = (nu_inverse_cm - lower->nu_inverse_cm) / (upper->nu_inverse_cm - lower->nu_inverse_cm);
  return {lower->parallel_au + w * (upper->parallel_au - lower->parallel_au),
          lower->perpendicular_au + w * (upper->perpendicular_au - lower->perpendicular_au)};
}

}  // namespace magictrap
