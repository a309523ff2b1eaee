#include "nsqht/converse_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsqht/error.hpp"
#include "nsqht/numeric.hpp"
#include "nsqht/quantum_tradeoff.hpp"

namespace nsqht {

namespace {

constexpr int kEnvelopeGridPoints = 101;
constexpr double kEnvelopeWidth = 1e-6;
// s is kept this far below 1 so alpha / (1 - s) stays finite at alpha = 0.
constexpr double kMaxWeight = 1.0 - 1e-12;
constexpr double kConstraintSlack = 1e-12;
constexpr double kFidelityOne = 1e-12;
constexpr double kFidelityBisectionWidth = 1e-12;
constexpr int kHoeffdingGridPoints = 513;
constexpr double kHoeffdingSMax = 1.0 - 1e-6;
constexpr double kHoeffdingWidth = 1e-9;
constexpr int kDeltaGridPoints = 200;
constexpr double kDeltaDecades = 6.0;
constexpr double kSupportMismatch = 1e-10;

double weighted_classical(std::span<const LLRAtom> atoms, double alpha, double s) {
  if (s == 0.0) return 0.0;
  const double scaled = std::min(1.0, alpha / (1.0 - s));
  return s * beta_alpha_classical(atoms, scaled);
}

template <class Psi>
HoeffdingResult hoeffding_search(Psi&& psi, double r, std::optional<double> d_limit) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    std::ostringstream os;
    os << "hoeffding_rhs: r must be a finite non-negative rate, got " << r;
    throw DomainError(os.str());
  }
  auto phi = [&](double s) { return (psi(s) + s * r) / (s - 1.0); };
  std::vector<double> grid(kHoeffdingGridPoints);
  HoeffdingResult best{-kInfinity, 0.0};
  int best_k = 0;
  for (int k = 0; k < kHoeffdingGridPoints; ++k) {
    grid[k] = kHoeffdingSMax * k / (kHoeffdingGridPoints - 1);
    const double v = phi(grid[k]);
    if (v > best.value) {
      best.value = v;
      best.s_star = grid[k];
      best_k = k;
    }
  }
  const double lo = grid[std::max(0, best_k - 1)];
  const double hi = grid[std::min(kHoeffdingGridPoints - 1, best_k + 1)];
  int evaluations = 0;
  if (hi > lo) {
    golden_maximize(phi, lo, hi, kHoeffdingWidth, 0.0, best.value, best.s_star, evaluations);
  }
  if (r == 0.0 && d_limit && *d_limit > best.value) {
    best.value = *d_limit;
    best.s_star = 1.0;
  }
  return best;
}

}  // namespace

ConverseProblem::ConverseProblem(const DensityOperator& rho, const DensityOperator& sigma,
                                 int copies, TensorPath path)
    : rho_(rho), sigma_(sigma), copies_(copies), path_(path) {
  if (copies < 1) throw DomainError("number of copies must be a positive integer");
  ns_ = ns_map(rho_, sigma_);
  atoms_ = atoms_product(ns_, copies_);
}

const TensorPowerPair& ConverseProblem::pair() const {
  if (!pair_) pair_.emplace(rho_, sigma_, copies_, path_);
  return *pair_;
}

double theorem1_beta_bound(const ConverseProblem& problem, double alpha, double s) {
  require_probability(alpha, "alpha");
  if (!(s >= 0.0 && s < 1.0)) {
    std::ostringstream os;
    os << "theorem1 bound needs 0 <= s < 1, got s = " << s;
    throw DomainError(os.str());
  }
  if (alpha > 1.0 - s + kConstraintSlack) {
    std::ostringstream os;
    os << "theorem1 bound needs alpha <= 1 - s, got alpha = " << alpha << " with 1 - s = "
       << 1.0 - s;
    throw DomainError(os.str());
  }
  return weighted_classical(problem.atoms(), alpha, s);
}

double theorem1_beta_bound(const DensityOperator& rho, const DensityOperator& sigma, int n,
                           double alpha, double s) {
  return theorem1_beta_bound(ConverseProblem(rho, sigma, n), alpha, s);
}

EnvelopeResult theorem1_envelope(const ConverseProblem& problem, double alpha) {
  require_probability(alpha, "alpha");
  EnvelopeResult best;
  if (alpha >= 1.0) return best;
  const double s_max = std::min(1.0 - alpha, kMaxWeight);
  auto f = [&](double s) { return weighted_classical(problem.atoms(), alpha, s); };
  std::vector<double> grid(kEnvelopeGridPoints);
  int best_k = 0;
  best.beta = -1.0;
  for (int k = 0; k < kEnvelopeGridPoints; ++k) {
    grid[k] = s_max * k / (kEnvelopeGridPoints - 1);
    const double v = f(grid[k]);
    if (v > best.beta) {
      best.beta = v;
      best.s_star = grid[k];
      best_k = k;
    }
  }
  const double lo = grid[std::max(0, best_k - 1)];
  const double hi = grid[std::min(kEnvelopeGridPoints - 1, best_k + 1)];
  int evaluations = 0;
  if (hi > lo) golden_maximize(f, lo, hi, kEnvelopeWidth, 0.0, best.beta, best.s_star, evaluations);
  return best;
}

double ns_symmetric_bound(const ConverseProblem& problem, double alpha) {
  require_probability(alpha, "alpha");
  if (alpha > 0.5) return 0.0;
  return theorem1_beta_bound(problem, alpha, 0.5);
}

PureCurvePoint lemma2_curve(double a, double p) {
  if (!(a > 0.0 && a < 1.0)) {
    std::ostringstream os;
    os << "pure-state curve needs overlap 0 < a < 1, got " << a;
    throw DomainError(os.str());
  }
  require_probability(p, "p");
  const double x = 4.0 * p * (1.0 - p) * a;
  const double root = std::sqrt(1.0 - x);
  // sqrt(1 - x) - 1 = -x / (1 + sqrt(1 - x)) avoids cancellation for small a.
  const double shift = x / (1.0 + root);
  PureCurvePoint out;
  out.alpha = std::max(0.0, (2.0 * (1.0 - p) * a - shift) / (2.0 * root));
  out.beta = std::max(0.0, (2.0 * p * a - shift) / (2.0 * root));
  return out;
}

FidelityBoundResult fidelity_bound(const DensityOperator& rho, const DensityOperator& sigma, int n,
                                   double alpha) {
  require_probability(alpha, "alpha");
  if (n < 1) throw DomainError("number of copies must be a positive integer");
  const double f = fidelity(rho, sigma);
  const double a = std::pow(f * f, n);
  FidelityBoundResult out;
  if (a >= 1.0 - kFidelityOne) {
    out.beta = 1.0 - alpha;
    return out;
  }
  if (alpha >= a) return out;
  // alpha_q decreases from a at p = 0 to 0 at p = 1. Keeping the lower end
  // (alpha_q(lo) > alpha) errs towards a smaller, still valid, beta.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kFidelityBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (lemma2_curve(a, mid).alpha > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.beta = lemma2_curve(a, lo).beta;
  out.p_star = lo;
  return out;
}

HoeffdingResult hoeffding_rhs(const NSPair& ns, double r) {
  for (std::size_t c = 0; c < ns.p.size(); ++c) {
    if ((ns.p[c] > 0.0) != (ns.q[c] > 0.0)) {
      throw SingularSupportError("hoeffding_rhs: P and Q have different supports");
    }
  }
  const auto m = moments(ns);
  return hoeffding_search([&](double s) { return std::log2(renyi_overlap(ns, s)); }, r, m.D);
}

HoeffdingResult hoeffding_rhs(const DensityOperator& rho, const DensityOperator& sigma, double r) {
  return hoeffding_rhs(ns_map(rho, sigma), r);
}

HoeffdingResult hoeffding_rhs_quantum(const DensityOperator& rho, const DensityOperator& sigma,
                                      double r) {
  if (rho.dim() != sigma.dim()) throw DomainError("hoeffding_rhs_quantum: dimension mismatch");
  const auto& rs = rho.spectrum();
  const auto& ss = sigma.spectrum();
  const double cross_rho = trace_product(matrix_function(ss, MatrixFunction::power(0.0)),
                                         rho.hermitian());
  const double cross_sigma = trace_product(matrix_function(rs, MatrixFunction::power(0.0)),
                                           sigma.hermitian());
  if (std::abs(1.0 - cross_rho) > kSupportMismatch ||
      std::abs(1.0 - cross_sigma) > kSupportMismatch) {
    throw SingularSupportError("hoeffding_rhs_quantum: rho and sigma have different supports");
  }
  auto psi = [&](double s) {
    return std::log2(trace_product(matrix_function(rs, MatrixFunction::power(s)),
                                   matrix_function(ss, MatrixFunction::power(1.0 - s))));
  };
  std::optional<double> d;
  if (r == 0.0) {
    const HermitianMatrix log_diff = matrix_function(rs, MatrixFunction::log2()) -
                                     matrix_function(ss, MatrixFunction::log2());
    d = std::max(0.0, trace_product(rho.hermitian(), log_diff));
  }
  return hoeffding_search(psi, r, d);
}

namespace {

template <class Ds>
InfoSpectrumResult info_spectrum_search(Ds&& ds, double epsilon) {
  require_probability(epsilon, "epsilon");
  InfoSpectrumResult best;
  if (epsilon >= 1.0) return best;
  const double room = 1.0 - epsilon;
  for (int k = 0; k < kDeltaGridPoints; ++k) {
    const double delta = room * std::pow(10.0, -kDeltaDecades + kDeltaDecades * k / kDeltaGridPoints);
    const double level = epsilon + delta;
    if (!(level > 0.0 && level < 1.0)) continue;
    const double value = ds(level) - std::log2(delta);
    if (value < best.dh) {
      best.dh = value;
      best.delta = delta;
    }
  }
  return best;
}

}  // namespace

InfoSpectrumResult info_spectrum_bound(const ConverseProblem& problem, double epsilon) {
  const auto& pair = problem.pair();
  return info_spectrum_search([&](double level) { return info_spectrum_Ds(pair, level); },
                              epsilon);
}

InfoSpectrumResult info_spectrum_bound_classical(std::span<const LLRAtom> atoms, double epsilon) {
  return info_spectrum_search(
      [&](double level) { return info_spectrum_Ds_classical(atoms, level); }, epsilon);
}

std::string to_string(BoundName name) {
  switch (name) {
    case BoundName::kExact: return "exact";
    case BoundName::kTheorem1: return "theorem1";
    case BoundName::kTheorem1Envelope: return "theorem1_envelope";
    case BoundName::kNsSymmetric: return "ns_symmetric";
    case BoundName::kFidelity: return "fidelity";
    case BoundName::kInfoSpectrum: return "info_spectrum";
  }
  return "unknown";
}

BoundName parse_bound_name(const std::string& text) {
  for (auto name : {BoundName::kExact, BoundName::kTheorem1, BoundName::kTheorem1Envelope,
                    BoundName::kNsSymmetric, BoundName::kFidelity, BoundName::kInfoSpectrum}) {
    if (to_string(name) == text) return name;
  }
  throw ParseError("unknown bound name '" + text +
                   "' (expected exact, theorem1, theorem1_envelope, ns_symmetric, fidelity or "
                   "info_spectrum)");
}

BoundPoint dh_bound(const ConverseProblem& problem, BoundName bound, double epsilon,
                    std::optional<double> s) {
  require_probability(epsilon, "epsilon");
  BoundPoint out;
  out.epsilon = epsilon;
  out.bound = bound;
  switch (bound) {
    case BoundName::kExact: {
      const auto sol = solve_tradeoff(problem.pair(), epsilon);
      out.dh_upper = neg_log2(sol.beta);
      out.t = sol.t_star;
      break;
    }
    case BoundName::kTheorem1: {
      if (!s) throw DomainError("theorem1 bound needs a value of s");
      out.s = *s;
      // Outside alpha <= 1 - s the bound degenerates to beta >= 0.
      out.dh_upper = epsilon > 1.0 - *s ? kInfinity
                                         : neg_log2(theorem1_beta_bound(problem, epsilon, *s));
      break;
    }
    case BoundName::kTheorem1Envelope: {
      const auto env = theorem1_envelope(problem, epsilon);
      out.dh_upper = neg_log2(env.beta);
      out.s = env.s_star;
      break;
    }
    case BoundName::kNsSymmetric:
      out.dh_upper = neg_log2(ns_symmetric_bound(problem, epsilon));
      out.s = 0.5;
      break;
    case BoundName::kFidelity: {
      const auto fb = fidelity_bound(problem.rho(), problem.sigma(), problem.copies(), epsilon);
      out.dh_upper = neg_log2(fb.beta);
      out.p = fb.p_star;
      break;
    }
    case BoundName::kInfoSpectrum: {
      const auto is = info_spectrum_bound(problem, epsilon);
      out.dh_upper = is.dh;
      out.delta = is.delta;
      break;
    }
  }
  return out;
}

}  // namespace nsqht
