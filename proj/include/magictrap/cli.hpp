#pragma once

#include "magictrap/molecule.hpp"
#include "magictrap/polarization.hpp"
#include "magictrap/stark.hpp"
#include "magictrap/table.hpp"

#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace magictrap::cli {

// Bad flag values. Reported with exit code 1 like CLI11 parse errors.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "J,M" or "J,M,+" / "J,M,-".
StateLabel parse_state(const std::string& text);
/// Colon-separated list of states, e.g. "0,0:1,0:1,1,+".
std::vector<StateLabel> parse_states(const std::string& text);
/// z, x, theta:<deg>, sigma+, sigma-.
PolarizationVector parse_polarization(const std::string& text);
/// "from:to".
std::pair<double, double> parse_range(const std::string& text);

/// Column-name friendly state tag: "1_0", "1_1+", "1_-1".
std::string state_tag(const StateLabel& label);

enum class Figure { fig2, fig3, fig4 };
Figure parse_figure(const std::string& id);
/// Reference figure tables; bundled molecules only.
ResultTable emit_figure_data(Figure figure, const std::string& molecule, double nu_inverse_cm = 9174.0,
                             int j_max = kDefaultJMax);

/// Exit codes: 0 success, 1 usage error, 2 computation error. Errors are a
/// single line on `err`: "error: usage: ..." or "error: computation: ...".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace magictrap::cli
