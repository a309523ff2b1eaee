#pragma once

// Command-line front end: state files, presets, CSV/JSON tables and the
// tradeoff / bounds / asymptotics / selftest commands.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nsqht/converse_bounds.hpp"
#include "nsqht/hermitian.hpp"

namespace nsqht::bench {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitSelftest = 4;

/// {"name": str, "dim": int, "matrix": [[[re, im], ...], ...]}, row-major.
struct StateFile {
  std::string name;
  std::size_t dim = 0;
  ComplexMatrix matrix;
};

/// Throws ParseError with line and column for malformed JSON, and with the
/// offending field for structural problems. `source` names the input in
/// messages.
StateFile parse_state_file(const std::string& text, const std::string& source = "<input>");
StateFile read_state_file(const std::string& path);
/// Pretty JSON; doubles are printed with enough digits to round-trip.
std::string to_json_text(const StateFile& state);
StateFile to_state_file(const DensityOperator& rho, const std::string& name);
/// Throws ParseError naming the state when it is not a density operator.
DensityOperator to_density(const StateFile& state);

/// START:STOP:COUNT with 0 < START < STOP < 1 and COUNT >= 2.
struct Grid {
  double start = 0.05;
  double stop = 0.95;
  int count = 19;

  /// Uniform points, computed as start + k * (stop - start) / (count - 1).
  std::vector<double> values() const;
};
Grid parse_grid(const std::string& text);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);
/// Header row, comma separated, LF line endings.
std::string to_csv(const Table& table);
/// {"columns": [...], "rows": [[...], ...]}; non-finite numbers become the
/// strings "inf", "-inf", "nan".
std::string to_json(const Table& table);

enum class OutputFormat { kCsv, kJson };

struct StatePair {
  std::string name;
  DensityOperator rho;
  DensityOperator sigma;
  int copies = 1;
  Grid grid;
};

/// fig1: |0><0| vs |+><+|, n = 5. fig2: the mixed qubit pair with
/// off-diagonal 3 sqrt(3) / 20, n = 5. identical, commuting and random
/// (seeded full-rank qubit pair) use n = 3, 4 and 3.
StatePair make_preset(const std::string& name, std::uint64_t seed = 0);

struct RunConfig {
  std::string rho_path;
  std::string sigma_path;
  std::string preset;
  std::optional<int> copies;
  std::optional<Grid> grid;
  int s_grid = 9;  ///< s = k / (s_grid + 1), k = 1..s_grid
  std::vector<BoundName> bounds;
  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;
  std::uint64_t seed = 0;
  std::vector<int> n_list;
  double epsilon = 0.5;
  std::optional<double> moderate_power;
  bool include_logn = false;
  std::string filter;
  std::string golden_dir;
  static constexpr const char* log_base = "2";
};

/// The states, copies and grid a config refers to (preset or files, with
/// --copies and --epsilons overriding).
StatePair resolve_states(const RunConfig& config);

/// alpha, beta_exact, beta_theorem1_s=<v>... over the grid (used as alpha).
Table cmd_tradeoff(const RunConfig& config);
/// epsilon and per-copy D_h bounds; infinite values stay infinite.
Table cmd_bounds(const RunConfig& config);
/// One row per n with D, V, exact D_h and the expansions.
Table cmd_asymptotics(const RunConfig& config);
/// Runs the invariant suite (optionally one module) and the golden-file
/// checks, printing a pass/fail table. Returns kExitOk or kExitSelftest.
int cmd_selftest(const RunConfig& config, std::ostream& out);

/// Full command-line entry point.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nsqht::bench
