#include "nsqht/quantum_tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsqht/error.hpp"
#include "nsqht/kahan.hpp"

namespace nsqht {

namespace {

constexpr double kTestSpectrumSlack = 1e-10;
constexpr int kSeedGridPoints = 64;
constexpr double kSeedGridLog2Min = -40.0;
constexpr double kSeedGridLog2Max = 40.0;
constexpr double kGoldenRelativeWidth = 1e-10;
// Below this, t only shifts g by about t itself.
constexpr double kGoldenAbsoluteWidth = 1e-15;
constexpr double kSpectrumBisectionWidth = 1e-6;
constexpr double kBracketLimit = 1e4;
constexpr double kProjectorSignTolerance = 1e-13;
constexpr double kOptimalTestSpread = 1e-6;

std::vector<double> seed_grid() {
  std::vector<double> t(kSeedGridPoints);
  for (int k = 0; k < kSeedGridPoints; ++k) {
    t[k] = std::exp2(kSeedGridLog2Min +
                     (kSeedGridLog2Max - kSeedGridLog2Min) * k / (kSeedGridPoints - 1));
  }
  return t;
}

// Rebuilds {eigenvalue of h >= 0} (or <= 0) as a projector.
HermitianMatrix sign_projector(const HermitianMatrix& h, bool nonnegative) {
  const auto spec = eigh(h);
  const double tol = kProjectorSignTolerance * std::max(1.0, h.matrix().frobenius_norm());
  std::vector<double> select(spec.dim());
  for (std::size_t k = 0; k < spec.dim(); ++k) {
    const double lambda = spec.eigenvalues[k];
    select[k] = (nonnegative ? lambda >= -tol : lambda <= tol) ? 1.0 : 0.0;
  }
  return from_spectrum(select, spec.eigenvectors);
}

double expectation(const HermitianMatrix& a, const ComplexMatrix& vectors, std::size_t col) {
  const std::size_t n = a.dim();
  KahanSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    Complex row{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) row += a(i, j) * vectors(j, col);
    acc += (std::conj(vectors(i, col)) * row).real();
  }
  return acc.value();
}

}  // namespace

// ---------------------------------------------------------------------------

TestOperator::TestOperator(const HermitianMatrix& pi) : pi_(pi) {
  const auto values = eigvalsh(pi);
  for (double v : values) {
    if (v < -kTestSpectrumSlack || v > 1.0 + kTestSpectrumSlack) {
      std::ostringstream os;
      os << "test operator must satisfy 0 <= Pi <= I, found eigenvalue " << v;
      throw DomainError(os.str());
    }
  }
}

TestOperator TestOperator::complement() const {
  return TestOperator(HermitianMatrix(ComplexMatrix::identity(dim())) - pi_);
}

void TradeoffCurve::sort_by_alpha() {
  std::stable_sort(points.begin(), points.end(),
                   [](const TradeoffPoint& a, const TradeoffPoint& b) { return a.alpha < b.alpha; });
}

void TradeoffCurve::convexify() {
  sort_by_alpha();
  // Lower convex hull (monotone chain), then drop the increasing tail.
  std::vector<TradeoffPoint> hull;
  for (const auto& p : points) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.alpha - a.alpha) * (p.beta - a.beta) -
                           (b.beta - a.beta) * (p.alpha - a.alpha);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  std::size_t keep = hull.size();
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (hull[i].beta > hull[i - 1].beta) {
      keep = i;
      break;
    }
  }
  hull.resize(keep);
  points = std::move(hull);
}

TestOperator helstrom_projector(const DensityOperator& rho, const DensityOperator& sigma,
                                double t) {
  if (rho.dim() != sigma.dim()) throw DomainError("helstrom_projector: dimension mismatch");
  if (!(t >= 0.0)) throw DomainError("helstrom_projector: t must be non-negative");
  return TestOperator(sign_projector(t * rho.hermitian() - sigma.hermitian(), true));
}

TradeoffPoint test_errors(const TestOperator& pi, const DensityOperator& rho,
                          const DensityOperator& sigma) {
  if (pi.dim() != rho.dim() || rho.dim() != sigma.dim()) {
    throw DomainError("test_errors: dimension mismatch");
  }
  TradeoffPoint out;
  out.alpha = std::clamp(trace_product(pi.hermitian(), rho.hermitian()), 0.0, 1.0);
  out.beta = std::clamp(1.0 - trace_product(pi.hermitian(), sigma.hermitian()), 0.0, 1.0);
  out.label = "test";
  return out;
}

double positive_part_trace(const TensorPowerPair& pair, double t) {
  KahanSum s;
  for (const auto& block : pair.blocks()) {
    s += block.multiplicity * positive_part_trace(t * block.rho - block.sigma);
  }
  return s.value();
}

namespace {

// Tr[(sigma - t rho)_+] summed over blocks.
double complement_trace(const TensorPowerPair& pair, double t) {
  KahanSum s;
  for (const auto& block : pair.blocks()) {
    s += block.multiplicity * positive_part_trace(block.sigma - t * block.rho);
  }
  return s.value();
}

// beta at alpha = 0: accept H1 exactly on the kernel of rho, so beta is
// Tr[P sigma] with P the support projector of rho. The supremum over t is
// only reached as t -> infinity, where noise in the kernel would dominate.
double support_overlap(const TensorPowerPair& pair) {
  KahanSum s;
  for (const auto& block : pair.blocks()) {
    const auto spec = eigh(block.rho);
    std::vector<double> select(spec.dim());
    for (std::size_t k = 0; k < spec.dim(); ++k) {
      select[k] = spec.eigenvalues[k] > kSupportCutoff ? 1.0 : 0.0;
    }
    s += block.multiplicity * trace_product(from_spectrum(select, spec.eigenvectors), block.sigma);
  }
  return std::clamp(s.value(), 0.0, 1.0);
}

}  // namespace

double tradeoff_objective(const TensorPowerPair& pair, double alpha, double t) {
  return 1.0 - t * alpha - complement_trace(pair, t);
}

std::vector<TradeoffSolution> solve_tradeoff(const TensorPowerPair& pair,
                                             std::span<const double> alphas) {
  for (double a : alphas) require_probability(a, "alpha");
  const auto grid = seed_grid();
  // h(t) = Tr[(sigma - t rho)_+] does not depend on alpha.
  const double h0 = complement_trace(pair, 0.0);
  std::vector<double> h(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) h[k] = complement_trace(pair, grid[k]);

  std::vector<TradeoffSolution> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    TradeoffSolution sol;
    sol.alpha = alpha;
    if (alpha == 0.0) {
      sol.beta = support_overlap(pair);
      sol.t_star = kInfinity;
      out.push_back(sol);
      continue;
    }
    sol.evaluations = static_cast<int>(grid.size()) + 1;
    double best_value = 1.0 - h0;
    double best_t = 0.0;
    int best_index = -1;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double g = 1.0 - grid[k] * alpha - h[k];
      if (g > best_value) {
        best_value = g;
        best_t = grid[k];
        best_index = static_cast<int>(k);
      }
    }
    const int last = static_cast<int>(grid.size()) - 1;
    const double lo = best_index <= 0 ? 0.0 : grid[best_index - 1];
    const double hi = best_index < 0 ? grid[0] : grid[std::min(best_index + 1, last)];
    golden_maximize([&](double t) { return tradeoff_objective(pair, alpha, t); }, lo, hi,
                    kGoldenAbsoluteWidth, kGoldenRelativeWidth, best_value, best_t,
                    sol.evaluations);
    sol.beta = std::clamp(best_value, 0.0, 1.0);
    sol.t_star = best_t;
    out.push_back(sol);
  }
  return out;
}

TradeoffSolution solve_tradeoff(const TensorPowerPair& pair, double alpha) {
  const double alphas[] = {alpha};
  return solve_tradeoff(pair, alphas).front();
}

double beta_alpha_quantum(const DensityOperator& rho, const DensityOperator& sigma, double alpha) {
  return solve_tradeoff(TensorPowerPair(rho, sigma, 1, TensorPath::kDense), alpha).beta;
}

double dh_quantum(const TensorPowerPair& pair, double epsilon) {
  require_open_probability(epsilon, "epsilon");
  return neg_log2(solve_tradeoff(pair, epsilon).beta);
}

double dh_quantum(const DensityOperator& rho, const DensityOperator& sigma, int n, double epsilon,
                  TensorPath path) {
  require_open_probability(epsilon, "epsilon");
  return dh_quantum(TensorPowerPair(rho, sigma, n, path), epsilon);
}

TestOperator optimal_test(const DensityOperator& rho, const DensityOperator& sigma, double alpha) {
  const auto sol = solve_tradeoff(TensorPowerPair(rho, sigma, 1, TensorPath::kDense), alpha);
  const HermitianMatrix identity(ComplexMatrix::identity(rho.dim()));
  auto np_test = [&](double t) {
    return identity - sign_projector(t * rho.hermitian() - sigma.hermitian(), true);
  };
  if (sol.t_star == 0.0) return TestOperator(np_test(0.0));
  if (sol.t_star == kInfinity) {
    // Projector onto the kernel of rho.
    const auto& spec = rho.spectrum();
    std::vector<double> select(spec.dim());
    for (std::size_t k = 0; k < spec.dim(); ++k) {
      select[k] = spec.eigenvalues[k] > kSupportCutoff ? 0.0 : 1.0;
    }
    return TestOperator(from_spectrum(select, spec.eigenvectors));
  }
  // Widen the spread around t* until the two tests bracket alpha; alpha of
  // the test falls as t grows.
  HermitianMatrix wide = identity, narrow = identity;
  double alpha_wide = 1.0, alpha_narrow = 1.0;
  for (double spread = kOptimalTestSpread; spread < 1.0; spread *= 4.0) {
    wide = np_test(sol.t_star * (1.0 - spread));
    narrow = np_test(sol.t_star * (1.0 + spread));
    alpha_wide = trace_product(wide, rho.hermitian());
    alpha_narrow = trace_product(narrow, rho.hermitian());
    if (alpha_narrow <= alpha && alpha_wide >= alpha) break;
  }
  double w = 1.0;
  if (alpha_wide - alpha_narrow > 0.0) {
    w = std::clamp((alpha - alpha_narrow) / (alpha_wide - alpha_narrow), 0.0, 1.0);
  } else if (alpha_wide > alpha) {
    w = 0.0;
  }
  return TestOperator(w * wide + (1.0 - w) * narrow);
}

double spectral_tail_mass(const TensorPowerPair& pair, double log_ratio) {
  const double scale = std::exp2(log_ratio);
  KahanSum mass;
  for (const auto& block : pair.blocks()) {
    const HermitianMatrix h = block.rho - scale * block.sigma;
    const auto spec = eigh(h);
    KahanSum inner;
    for (std::size_t k = 0; k < spec.dim(); ++k) {
      if (spec.eigenvalues[k] <= 0.0) inner += expectation(block.rho, spec.eigenvectors, k);
    }
    mass += block.multiplicity * inner.value();
  }
  return mass.value();
}

double info_spectrum_Ds(const TensorPowerPair& pair, double epsilon) {
  require_open_probability(epsilon, "epsilon");
  auto feasible = [&](double r) { return spectral_tail_mass(pair, r) <= epsilon; };
  double lo = -1.0;
  while (!feasible(lo)) {
    lo *= 2.0;
    if (lo < -kBracketLimit) return -kInfinity;
  }
  double hi = 1.0;
  while (feasible(hi)) {
    lo = std::max(lo, hi);
    hi *= 2.0;
    if (hi > kBracketLimit) return kInfinity;
  }
  while (hi - lo > kSpectrumBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double info_spectrum_Ds(const DensityOperator& rho, const DensityOperator& sigma, int n,
                        double epsilon, TensorPath path) {
  return info_spectrum_Ds(TensorPowerPair(rho, sigma, n, path), epsilon);
}

}  // namespace nsqht
