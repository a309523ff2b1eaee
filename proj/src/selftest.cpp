#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "nsqht/asymptotics.hpp"
#include "nsqht/bench.hpp"
#include "nsqht/error.hpp"
#include "nsqht/quantum_tradeoff.hpp"

#ifndef NSQHT_GOLDEN_DIR
#define NSQHT_GOLDEN_DIR "tests/golden"
#endif

namespace nsqht::bench {

namespace {

using nlohmann::json;

// An empty string means the check passed; anything else is the reason.
using Check = std::function<std::string()>;

struct Entry {
  std::string module;
  std::string name;
  Check check;
};

std::string mismatch(const std::string& what, double got, double want) {
  std::ostringstream os;
  os << std::setprecision(17) << what << ": got " << got << ", expected " << want;
  return os.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = normal(rng);
    for (std::size_t j = 0; j < i; ++j) {
      m(i, j) = Complex(normal(rng), normal(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

DensityOperator random_state(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  ComplexMatrix m = g * g.adjoint();
  m *= Complex(1.0 / m.trace().real(), 0.0);
  return DensityOperator(m);
}

// Lower convex envelope of all deterministic tests, evaluated at alpha.
double brute_force_np(const std::vector<double>& p, const std::vector<double>& q, double alpha) {
  const std::size_t k = p.size();
  std::vector<std::pair<double, double>> pts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1) {
        a += p[i];
      } else {
        b += q[i];
      }
    }
    pts.emplace_back(a, b);
  }
  double best = 1.0;
  for (const auto& u : pts) {
    if (u.first <= alpha) best = std::min(best, u.second);
    for (const auto& v : pts) {
      if (u.first < alpha && v.first > alpha) {
        const double w = (alpha - u.first) / (v.first - u.first);
        best = std::min(best, (1 - w) * u.second + w * v.second);
      }
    }
  }
  return best;
}

std::vector<Entry> suite(const std::string& golden_path) {
  std::vector<Entry> out;
  const StatePair fig2 = make_preset("fig2");

  out.push_back({"hermitian-core", "eigh reconstructs random Hermitian matrices", [] {
                   std::mt19937_64 rng(1);
                   for (std::size_t d : {2, 7, 40}) {
                     const HermitianMatrix h(random_hermitian(rng, d));
                     const auto spec = eigh(h);
                     const double err = (spec.reconstruct() - h.matrix()).frobenius_norm();
                     if (err > 1e-10 * h.matrix().frobenius_norm()) {
                       return mismatch("reconstruction error, dim " + std::to_string(d), err, 0.0);
                     }
                   }
                   return std::string();
                 }});
  out.push_back({"hermitian-core", "fidelity of pure states is the overlap", [] {
                   const double h = 1.0 / std::sqrt(2.0);
                   const Complex zero[] = {{1.0, 0.0}, {0.0, 0.0}};
                   const Complex plus[] = {{h, 0.0}, {h, 0.0}};
                   const double f =
                       fidelity(DensityOperator::pure(zero), DensityOperator::pure(plus));
                   return close(f, h, 1e-10) ? std::string() : mismatch("F", f, h);
                 }});
  out.push_back({"quantum-tradeoff", "identical states give 1 - alpha", [] {
                   const StatePair id = make_preset("identical");
                   for (double a : {0.1, 0.5, 0.9}) {
                     const double b = beta_alpha_quantum(id.rho, id.sigma, a);
                     if (!close(b, 1 - a, 1e-10)) return mismatch("beta", b, 1 - a);
                   }
                   return std::string();
                 }});
  out.push_back({"quantum-tradeoff", "symmetric blocks agree with dense n = 4", [] {
                   std::mt19937_64 rng(2);
                   const auto rho = random_state(rng, 2), sigma = random_state(rng, 2);
                   const TensorPowerPair dense(rho, sigma, 4, TensorPath::kDense);
                   const TensorPowerPair sym(rho, sigma, 4, TensorPath::kSymmetric);
                   for (double t : {0.3, 1.0, 4.0}) {
                     const double a = positive_part_trace(dense, t);
                     const double b = positive_part_trace(sym, t);
                     if (!close(a, b, 1e-10)) return mismatch("Tr[(t rho - sigma)_+]", b, a);
                   }
                   return std::string();
                 }});
  out.push_back({"ns-classical", "type-class NP equals brute force over all tests", [] {
                   std::mt19937_64 rng(3);
                   std::uniform_real_distribution<double> u(0.0, 1.0);
                   for (int rep = 0; rep < 5; ++rep) {
                     std::vector<double> p(8), q(8);
                     double sp = 0, sq = 0;
                     for (int i = 0; i < 8; ++i) {
                       sp += p[i] = u(rng);
                       sq += q[i] = u(rng);
                     }
                     for (int i = 0; i < 8; ++i) {
                       p[i] /= sp;
                       q[i] /= sq;
                     }
                     const auto atoms = atoms_product(p, q, 1);
                     for (double a : {0.05, 0.3, 0.7}) {
                       const double want = brute_force_np(p, q, a);
                       const double got = beta_alpha_classical(atoms, a);
                       if (!close(got, want, 1e-10)) return mismatch("beta", got, want);
                     }
                   }
                   return std::string();
                 }});
  out.push_back({"ns-classical", "Renyi overlap matches Tr[rho^s sigma^(1-s)]", [] {
                   std::mt19937_64 rng(4);
                   const auto rho = random_state(rng, 3), sigma = random_state(rng, 3);
                   const auto ns = ns_map(rho, sigma);
                   for (double s : {0.0, 0.3, 0.5, 1.0}) {
                     const double q = trace_product(
                         matrix_function(rho.hermitian(), MatrixFunction::power(s)),
                         matrix_function(sigma.hermitian(), MatrixFunction::power(1 - s)));
                     const double c = renyi_overlap(ns, s);
                     if (!close(q, c, 1e-10)) return mismatch("overlap", c, q);
                   }
                   return std::string();
                 }});
  out.push_back({"converse-bounds", "every bound lies above exact D_h (n = 3)", [fig2] {
                   const ConverseProblem problem(fig2.rho, fig2.sigma, 3);
                   for (double e : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                     const double exact = dh_bound(problem, BoundName::kExact, e).dh_upper;
                     for (auto b : {BoundName::kTheorem1Envelope, BoundName::kNsSymmetric,
                                    BoundName::kFidelity, BoundName::kInfoSpectrum}) {
                       const double v = dh_bound(problem, b, e).dh_upper;
                       if (v < exact - 1e-8) return mismatch(to_string(b), v, exact);
                     }
                   }
                   return std::string();
                 }});
  out.push_back({"converse-bounds", "fidelity bound is exact for pure states", [] {
                   const StatePair f1 = make_preset("fig1");
                   for (double a : {0.05, 0.1, 0.2}) {
                     const double exact = beta_alpha_quantum(f1.rho, f1.sigma, a);
                     const double fb = fidelity_bound(f1.rho, f1.sigma, 1, a).beta;
                     if (!close(exact, fb, 1e-8)) return mismatch("fidelity bound", fb, exact);
                   }
                   return std::string();
                 }});
  out.push_back({"asymptotics", "inverse normal CDF round trip", [] {
                   // Lower tail only: above 0 the round trip loses digits in 1 - p.
                   for (double x = -8.0; x <= 0.0; x += 0.25) {
                     const double y = inv_norm_cdf(norm_cdf(x));
                     if (!close(y, x, 1e-9)) return mismatch("inv_norm_cdf(norm_cdf(x))", y, x);
                   }
                   for (double p : {0.5, 0.75, 0.875, 0.9375}) {
                     const double hi = inv_norm_cdf(p), lo = inv_norm_cdf(1 - p);
                     if (!close(hi, -lo, 1e-12)) return mismatch("inv_norm_cdf symmetry", hi, -lo);
                   }
                   return std::string();
                 }});
  out.push_back({"bench-cli", "state file round trip", [fig2] {
                   const StateFile s = to_state_file(fig2.sigma, "sigma");
                   const StateFile back = parse_state_file(to_json_text(s));
                   return back.matrix == s.matrix ? std::string()
                                                  : std::string("entries changed in round trip");
                 }});
  out.push_back({"bench-cli", "fig2 bounds CSV is deterministic", [] {
                   RunConfig c;
                   c.preset = "fig2";
                   c.grid = Grid{0.1, 0.9, 5};
                   return to_csv(cmd_bounds(c)) == to_csv(cmd_bounds(c))
                              ? std::string()
                              : std::string("two runs differ");
                 }});

  // Golden values; a missing or malformed file fails with its path.
  auto golden = [golden_path](const std::function<std::string(const json&)>& body) {
    return [golden_path, body]() -> std::string {
      std::ifstream in(golden_path);
      if (!in) return "cannot read golden file " + golden_path;
      try {
        return body(json::parse(in));
      } catch (const std::exception& e) {
        return "golden file " + golden_path + " is corrupted: " + e.what();
      }
    };
  };
  out.push_back({"ns-classical", "golden moments and NS tables", golden([fig2](const json& g) {
                   const auto& m = g.at("mixed_states");
                   const auto ns = ns_map(fig2.rho, fig2.sigma);
                   for (std::size_t i = 0; i < 2; ++i) {
                     for (std::size_t j = 0; j < 2; ++j) {
                       const double p = m.at("ns_p").at(i).at(j).get<double>();
                       const double q = m.at("ns_q").at(i).at(j).get<double>();
                       if (!close(ns.P(i, j), p, 1e-12)) return mismatch("P", ns.P(i, j), p);
                       if (!close(ns.Q(i, j), q, 1e-12)) return mismatch("Q", ns.Q(i, j), q);
                     }
                   }
                   const auto mt = moments(ns);
                   for (auto [key, v] : {std::pair{"D", mt.D}, {"V", *mt.V}, {"T", *mt.T}}) {
                     const double want = m.at(key).get<double>();
                     if (!close(v, want, 1e-10)) return mismatch(key, v, want);
                   }
                   const double dh = dh_classical(ns, 5, 0.1);
                   const double want = g.at("dh_classical_n5_eps0.1").get<double>();
                   return close(dh, want, 1e-10) ? std::string() : mismatch("dh_classical", dh, want);
                 })});
  out.push_back({"quantum-tradeoff", "golden fig2 exact curve", golden([fig2](const json& g) {
                   const auto& f = g.at("fig2_exact_per_copy");
                   const auto eps = f.at("epsilon").get<std::vector<double>>();
                   const auto dh = f.at("dh").get<std::vector<double>>();
                   const TensorPowerPair pair(fig2.rho, fig2.sigma, 5);
                   const auto sols = solve_tradeoff(pair, eps);
                   for (std::size_t k = 0; k < eps.size(); ++k) {
                     const double got = neg_log2(sols[k].beta) / 5;
                     if (!close(got, dh[k], 1e-8)) return mismatch("dh/n", got, dh[k]);
                   }
                   return std::string();
                 })});
  out.push_back({"converse-bounds", "golden ns_symmetric and Hoeffding values",
                 golden([fig2](const json& g) {
                   const ConverseProblem problem(fig2.rho, fig2.sigma, 5);
                   const double ns = ns_symmetric_bound(problem, 0.25);
                   const double want_ns = g.at("ns_symmetric_n5_alpha0.25").get<double>();
                   if (!close(ns, want_ns, 1e-12)) return mismatch("ns_symmetric", ns, want_ns);
                   const double h = hoeffding_rhs(fig2.rho, fig2.sigma, 0.1).value;
                   const double want_h = g.at("hoeffding_r0.1").get<double>();
                   return close(h, want_h, 1e-7) ? std::string() : mismatch("hoeffding", h, want_h);
                 })});
  out.push_back({"asymptotics", "golden moderate-deviation value", golden([fig2](const json& g) {
                   const auto m = moments(ns_map(fig2.rho, fig2.sigma));
                   const auto r = moderate_rhs(m, 64, std::pow(64.0, -1.0 / 3.0));
                   const auto& want = g.at("moderate_n64");
                   const double v = want.at("value").get<double>();
                   const double e = want.at("epsilon_n").get<double>();
                   if (!close(r.value, v, 1e-9)) return mismatch("moderate", r.value, v);
                   return close(r.epsilon_n, e, 1e-12) ? std::string()
                                                        : mismatch("epsilon_n", r.epsilon_n, e);
                 })});
  return out;
}

}  // namespace

int cmd_selftest(const RunConfig& config, std::ostream& out) {
  const std::string dir = config.golden_dir.empty() ? NSQHT_GOLDEN_DIR : config.golden_dir;
  const auto entries = suite(dir + "/golden.json");
  bool any = false;
  std::string first_failure;
  int passed = 0, failed = 0;
  for (const auto& e : entries) {
    if (!config.filter.empty() && e.module != config.filter) continue;
    any = true;
    std::string detail;
    try {
      detail = e.check();
    } catch (const std::exception& ex) {
      detail = std::string("threw: ") + ex.what();
    }
    const bool ok = detail.empty();
    out << std::left << std::setw(18) << e.module << std::setw(52) << e.name
        << (ok ? "PASS" : "FAIL");
    if (!ok) out << "  " << detail;
    out << "\n";
    if (ok) {
      ++passed;
    } else {
      ++failed;
      if (first_failure.empty()) first_failure = e.module + ": " + e.name + " (" + detail + ")";
    }
  }
  if (!any) {
    out << "no checks match filter '" << config.filter << "'\n";
    return kExitSelftest;
  }
  out << passed << " passed, " << failed << " failed\n";
  if (failed) {
    out << "first failure: " << first_failure << "\n";
    return kExitSelftest;
  }
  return kExitOk;
}

}  // namespace nsqht::bench
