#include "nsqht/bench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "nsqht/asymptotics.hpp"
#include "nsqht/error.hpp"
#include "nsqht/quantum_tradeoff.hpp"

namespace nsqht::bench {

namespace {

using nlohmann::json;

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
}

DensityOperator ginibre_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  ComplexMatrix m = g * g.adjoint();
  m *= Complex(1.0 / m.trace().real(), 0.0);
  return DensityOperator(m);
}

std::vector<double> s_values(int count) {
  std::vector<double> s;
  for (int k = 1; k <= count; ++k) s.push_back(static_cast<double>(k) / (count + 1));
  return s;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::vector<BoundName> default_bounds() {
  return {BoundName::kExact, BoundName::kTheorem1Envelope, BoundName::kNsSymmetric,
          BoundName::kFidelity, BoundName::kInfoSpectrum};
}

bool contains(const std::vector<BoundName>& v, BoundName b) {
  return std::find(v.begin(), v.end(), b) != v.end();
}

}  // namespace

StateFile parse_state_file(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": malformed JSON at " + line_column(text, e.byte));
  }
  auto fail = [&](const std::string& what) { throw ParseError(source + ": " + what); };
  if (!doc.is_object()) fail("expected a JSON object");
  StateFile out;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("\"name\" must be a string");
    out.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    fail("\"dim\" must be a positive integer");
  }
  out.dim = doc["dim"].get<std::size_t>();
  if (out.dim > kMaxDenseDim) fail("\"dim\" exceeds " + std::to_string(kMaxDenseDim));
  if (!doc.contains("matrix") || !doc["matrix"].is_array()) fail("\"matrix\" must be an array");
  const auto& rows = doc["matrix"];
  if (rows.size() != out.dim) {
    fail("\"matrix\" has " + std::to_string(rows.size()) + " rows, expected " +
         std::to_string(out.dim));
  }
  out.matrix = ComplexMatrix(out.dim);
  for (std::size_t i = 0; i < out.dim; ++i) {
    if (!rows[i].is_array() || rows[i].size() != out.dim) {
      fail("matrix row " + std::to_string(i) + " must have " + std::to_string(out.dim) +
           " entries");
    }
    for (std::size_t j = 0; j < out.dim; ++j) {
      const auto& e = rows[i][j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        fail("matrix entry (" + std::to_string(i) + ", " + std::to_string(j) +
             ") must be a [re, im] pair of numbers");
      }
      out.matrix(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return out;
}

StateFile read_state_file(const std::string& path) { return parse_state_file(read_file(path), path); }

std::string to_json_text(const StateFile& state) {
  json rows = json::array();
  for (std::size_t i = 0; i < state.dim; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < state.dim; ++j) {
      row.push_back({state.matrix(i, j).real(), state.matrix(i, j).imag()});
    }
    rows.push_back(row);
  }
  json doc{{"name", state.name}, {"dim", state.dim}, {"matrix", rows}};
  return doc.dump(2) + "\n";
}

StateFile to_state_file(const DensityOperator& rho, const std::string& name) {
  return StateFile{name, rho.dim(), rho.matrix()};
}

DensityOperator to_density(const StateFile& state) {
  try {
    return DensityOperator(state.matrix);
  } catch (const DomainError& e) {
    throw ParseError("state '" + state.name + "' is not a density operator: " + e.what());
  }
}

std::vector<double> Grid::values() const {
  std::vector<double> v(count);
  for (int k = 0; k < count; ++k) v[k] = start + k * (stop - start) / (count - 1);
  return v;
}

Grid parse_grid(const std::string& text) {
  Grid g;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.start, &g.stop, &g.count, &tail) != 3) {
    throw ParseError("grid '" + text + "' must have the form START:STOP:COUNT");
  }
  if (!(g.start > 0.0 && g.start < g.stop && g.stop < 1.0) || g.count < 2) {
    throw ParseError("grid '" + text + "' needs 0 < START < STOP < 1 and COUNT >= 2");
  }
  return g;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (const double* x = std::get_if<double>(&row[c])) {
        out += format_number(*x);
      } else {
        out += std::get<std::string>(row[c]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (const auto& cell : row) {
      if (const double* x = std::get_if<double>(&cell)) {
        if (std::isfinite(*x)) {
          r.push_back(*x);
        } else {
          r.push_back(format_number(*x));
        }
      } else {
        r.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(r);
  }
  return json{{"columns", table.columns}, {"rows", rows}}.dump(2) + "\n";
}

StatePair make_preset(const std::string& name, std::uint64_t seed) {
  if (name == "fig1") {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex zero[] = {{1.0, 0.0}, {0.0, 0.0}};
    const Complex plus[] = {{h, 0.0}, {h, 0.0}};
    return {"fig1", DensityOperator::pure(zero), DensityOperator::pure(plus), 5,
            Grid{0.0005, 0.0305, 61}};
  }
  if (name == "fig2") {
    const double c = 3.0 * std::sqrt(3.0) / 20.0;
    ComplexMatrix r(2), s(2);
    r(0, 0) = 0.8;
    r(1, 1) = 0.2;
    s(0, 0) = 0.35;
    s(0, 1) = c;
    s(1, 0) = c;
    s(1, 1) = 0.65;
    return {"fig2", DensityOperator(r), DensityOperator(s), 5, Grid{}};
  }
  if (name == "identical") {
    const double d[] = {0.7, 0.3};
    const DensityOperator rho(ComplexMatrix::diagonal(d));
    return {"identical", rho, rho, 3, Grid{}};
  }
  if (name == "commuting") {
    const double a[] = {0.8, 0.2};
    const double b[] = {0.2, 0.8};
    return {"commuting", DensityOperator(ComplexMatrix::diagonal(a)),
            DensityOperator(ComplexMatrix::diagonal(b)), 4, Grid{}};
  }
  if (name == "random") {
    std::mt19937_64 rng(seed);
    DensityOperator rho = ginibre_qubit(rng);
    DensityOperator sigma = ginibre_qubit(rng);
    return {"random", rho, sigma, 3, Grid{}};
  }
  throw ParseError("unknown preset '" + name +
                   "' (expected fig1, fig2, identical, commuting or random)");
}

StatePair resolve_states(const RunConfig& config) {
  std::optional<StatePair> states;
  if (!config.preset.empty()) {
    if (!config.rho_path.empty() || !config.sigma_path.empty()) {
      throw ParseError("--preset cannot be combined with --rho/--sigma");
    }
    states = make_preset(config.preset, config.seed);
  } else {
    if (config.rho_path.empty() || config.sigma_path.empty()) {
      throw ParseError("either --preset or both --rho and --sigma are required");
    }
    DensityOperator rho = to_density(read_state_file(config.rho_path));
    DensityOperator sigma = to_density(read_state_file(config.sigma_path));
    if (rho.dim() != sigma.dim()) {
      throw ParseError("rho and sigma have different dimensions (" + std::to_string(rho.dim()) +
                       " vs " + std::to_string(sigma.dim()) + ")");
    }
    states.emplace(StatePair{"files", rho, sigma, 1, Grid{}});
  }
  if (config.copies) {
    if (*config.copies < 1) throw ParseError("--copies must be a positive integer");
    states->copies = *config.copies;
  }
  if (config.grid) states->grid = *config.grid;
  return *states;
}

Table cmd_tradeoff(const RunConfig& config) {
  const StatePair st = resolve_states(config);
  const std::vector<double> alphas = st.grid.values();
  const std::vector<double> ss = s_values(config.s_grid);
  const auto exact = solve_tradeoff(TensorPowerPair(st.rho, st.sigma, st.copies), alphas);
  const ConverseProblem problem(st.rho, st.sigma, st.copies);

  Table t;
  t.columns = {"alpha", "beta_exact"};
  for (double s : ss) t.columns.push_back("beta_theorem1_s=" + short_number(s));
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    std::vector<Cell> row{alphas[k], exact[k].beta};
    for (double s : ss) {
      // Outside alpha <= 1 - s only the trivial bound 0 remains.
      row.emplace_back(alphas[k] <= 1.0 - s ? theorem1_beta_bound(problem, alphas[k], s) : 0.0);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_bounds(const RunConfig& config) {
  const StatePair st = resolve_states(config);
  const std::vector<double> eps = st.grid.values();
  const auto bounds = config.bounds.empty() ? default_bounds() : config.bounds;
  const ConverseProblem problem(st.rho, st.sigma, st.copies);
  const double n = st.copies;
  const std::vector<double> ss = s_values(config.s_grid);

  Table t;
  t.columns = {"epsilon"};
  if (contains(bounds, BoundName::kExact)) t.columns.push_back("dh_exact/n");
  if (contains(bounds, BoundName::kTheorem1Envelope)) {
    t.columns.push_back("theorem1_envelope/n");
    t.columns.push_back("s_star");
  }
  if (contains(bounds, BoundName::kTheorem1)) {
    for (double s : ss) t.columns.push_back("theorem1_s=" + short_number(s) + "/n");
  }
  if (contains(bounds, BoundName::kNsSymmetric)) t.columns.push_back("ns_symmetric/n");
  if (contains(bounds, BoundName::kFidelity)) t.columns.push_back("fidelity/n");
  if (contains(bounds, BoundName::kInfoSpectrum)) t.columns.push_back("info_spectrum/n");

  std::vector<TradeoffSolution> exact;
  if (contains(bounds, BoundName::kExact)) exact = solve_tradeoff(problem.pair(), eps);

  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double e = eps[k];
    std::vector<Cell> row{e};
    if (contains(bounds, BoundName::kExact)) row.emplace_back(neg_log2(exact[k].beta) / n);
    if (contains(bounds, BoundName::kTheorem1Envelope)) {
      const auto env = theorem1_envelope(problem, e);
      row.emplace_back(neg_log2(env.beta) / n);
      row.emplace_back(env.s_star);
    }
    if (contains(bounds, BoundName::kTheorem1)) {
      for (double s : ss) row.emplace_back(dh_bound(problem, BoundName::kTheorem1, e, s).dh_upper / n);
    }
    if (contains(bounds, BoundName::kNsSymmetric)) {
      row.emplace_back(neg_log2(ns_symmetric_bound(problem, e)) / n);
    }
    if (contains(bounds, BoundName::kFidelity)) {
      row.emplace_back(neg_log2(fidelity_bound(st.rho, st.sigma, st.copies, e).beta) / n);
    }
    if (contains(bounds, BoundName::kInfoSpectrum)) {
      row.emplace_back(info_spectrum_bound(problem, e).dh / n);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_asymptotics(const RunConfig& config) {
  const StatePair st = resolve_states(config);
  std::vector<int> ns = config.n_list;
  if (ns.empty()) {
    for (int n = 1; n <= 12; ++n) ns.push_back(n);
  }
  SweepOptions options;
  options.include_logn = config.include_logn;
  options.moderate_power = config.moderate_power;
  const auto reports = expansion_sweep(st.rho, st.sigma, config.epsilon, ns, options);
  const auto m = moments(ns_map(st.rho, st.sigma));

  Table t;
  t.columns = {"n", "epsilon", "D", "V", "dh_exact", "second_order", "residual"};
  if (config.moderate_power) {
    t.columns.push_back("moderate");
    t.columns.push_back("epsilon_n");
  }
  t.columns.push_back("source");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : reports) {
    std::vector<Cell> row{static_cast<double>(r.n), r.epsilon, m.D, m.V.value_or(nan), r.dh_exact,
                          r.second_order, r.residual};
    if (config.moderate_power) {
      row.emplace_back(r.moderate.value_or(nan));
      row.emplace_back(r.epsilon_n.value_or(nan));
    }
    row.emplace_back(r.source);
    t.rows.push_back(std::move(row));
  }
  return t;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum hypothesis testing trade-offs and converse bounds (logs base 2)", "nsqht"};
  app.require_subcommand(1);
  RunConfig config;
  std::string grid_text, bounds_text, format_text = "csv";
  std::optional<int> copies;

  auto add_state_options = [&](CLI::App* sub) {
    sub->add_option("--rho", config.rho_path, "State file for rho (H0)");
    sub->add_option("--sigma", config.sigma_path, "State file for sigma (H1)");
    sub->add_option("--preset", config.preset, "fig1, fig2, identical, commuting or random");
    sub->add_option("--seed", config.seed, "Seed for the random preset");
    sub->add_option("--copies", copies, "Number of copies n");
    sub->add_option("--out", config.output_path, "Output file (default stdout)");
    sub->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* tradeoff = app.add_subcommand("tradeoff", "Exact trade-off and fixed-s converse bounds");
  add_state_options(tradeoff);
  tradeoff->add_option("--epsilons", grid_text, "Alpha grid START:STOP:COUNT");
  tradeoff->add_option("--s-grid", config.s_grid, "Number of s values k/(K+1)")
      ->check(CLI::PositiveNumber);

  auto* bounds = app.add_subcommand("bounds", "Per-copy D_h bounds over an epsilon grid");
  add_state_options(bounds);
  bounds->add_option("--epsilons", grid_text, "Epsilon grid START:STOP:COUNT");
  bounds->add_option("--s-grid", config.s_grid, "Number of s values for fixed-s columns")
      ->check(CLI::PositiveNumber);
  bounds->add_option("--bounds", bounds_text,
                     "Comma-separated subset of exact, theorem1, theorem1_envelope, "
                     "ns_symmetric, fidelity, info_spectrum");

  auto* asym = app.add_subcommand("asymptotics", "Exact D_h against the expansions in n");
  add_state_options(asym);
  asym->add_option("--n-list", config.n_list, "Comma-separated copy numbers (default 1..12)")
      ->delimiter(',');
  asym->add_option("--epsilon", config.epsilon, "Type-I error level");
  asym->add_option("--moderate", config.moderate_power,
                   "Also evaluate the moderate-deviation form with a_n = n^-POWER");
  asym->add_flag("--logn", config.include_logn, "Add log2 n to the second-order expansion");

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite and golden checks");
  selftest->add_option("--filter", config.filter, "Only this module's suite");
  selftest->add_option("--golden-dir", config.golden_dir, "Directory holding golden.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    config.copies = copies;
    if (!grid_text.empty()) config.grid = parse_grid(grid_text);
    if (!bounds_text.empty()) {
      std::stringstream ss(bounds_text);
      std::string item;
      while (std::getline(ss, item, ',')) config.bounds.push_back(parse_bound_name(item));
    }
    config.format = format_text == "json" ? OutputFormat::kJson : OutputFormat::kCsv;

    if (selftest->parsed()) return cmd_selftest(config, out);
    Table table;
    if (tradeoff->parsed()) table = cmd_tradeoff(config);
    if (bounds->parsed()) table = cmd_bounds(config);
    if (asym->parsed()) table = cmd_asymptotics(config);
    write_output(config.output_path,
                 config.format == OutputFormat::kJson ? to_json(table) : to_csv(table), out);
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace nsqht::bench
