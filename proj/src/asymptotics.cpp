#include "nsqht/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nsqht/error.hpp"
#include "nsqht/numeric.hpp"
#include "nsqht/quantum_tradeoff.hpp"
#include "nsqht/tensor_power_pair.hpp"

namespace nsqht {

namespace {

// Acklam's rational approximation, relative error below 1.2e-9.
constexpr double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                         1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                         6.680131188771972e+01, -1.328068155288572e+01};
constexpr double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                         -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kD[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                         3.754408661907416e+00};
constexpr double kLowTail = 0.02425;

double acklam_lower_half(double p) {
  if (p < kLowTail) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

void require_finite_moments(const MomentTriple& m, bool need_variance) {
  if (!std::isfinite(m.D) || !m.V) {
    throw DomainError("expansion needs a finite relative entropy D(P||Q)");
  }
  if (need_variance && !(*m.V > 0.0)) {
    throw DegenerateVarianceError("expansion needs V(P||Q) > 0, got V = 0");
  }
}

bool quantum_feasible(std::size_t d, int n) {
  if (d == 2) return true;
  return std::pow(static_cast<double>(d), n) <= static_cast<double>(kMaxDenseDim);
}

}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double inv_norm_cdf(double p) {
  require_open_probability(p, "p");
  // Work in the lower half, where p itself carries full relative precision.
  if (p > 0.5) return -inv_norm_cdf(1.0 - p);
  double x = acklam_lower_half(p);
  const double e = norm_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double second_order_rhs(const MomentTriple& m, int n, double epsilon, bool include_logn) {
  if (n < 1) throw DomainError("n must be a positive integer");
  require_open_probability(epsilon, "epsilon");
  require_finite_moments(m, true);
  double out = n * m.D + std::sqrt(n * *m.V) * inv_norm_cdf(epsilon);
  if (include_logn) out += std::log2(static_cast<double>(n));
  return out;
}

ModerateResult moderate_rhs(const MomentTriple& m, int n, double a_n) {
  if (n < 1) throw DomainError("n must be a positive integer");
  if (!(a_n >= 0.0) || !std::isfinite(a_n)) {
    std::ostringstream os;
    os << "moderate deviation sequence needs a_n >= 0, got " << a_n;
    throw DomainError(os.str());
  }
  require_finite_moments(m, true);
  ModerateResult out;
  out.value = n * m.D - std::sqrt(2.0 * *m.V) * n * a_n;
  out.epsilon_n = std::exp(-n * a_n * a_n);
  return out;
}

std::vector<ExpansionReport> expansion_sweep(const DensityOperator& rho,
                                             const DensityOperator& sigma, double epsilon,
                                             std::span<const int> n_list,
                                             const SweepOptions& options) {
  require_open_probability(epsilon, "epsilon");
  const NSPair ns = ns_map(rho, sigma);
  const MomentTriple m = moments(ns);
  require_finite_moments(m, false);
  const bool degenerate = !(*m.V > 0.0);

  std::vector<ExpansionReport> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    if (n < 1) throw DomainError("n must be a positive integer");
    ExpansionReport r;
    r.n = n;
    r.epsilon = epsilon;
    if (quantum_feasible(rho.dim(), n)) {
      r.dh_exact = dh_quantum(rho, sigma, n, epsilon);
      r.source = "quantum";
    } else {
      r.dh_exact = dh_classical(ns, n, epsilon);
      r.source = "classical";
    }
    if (degenerate) {
      r.second_order = n * m.D;
    } else {
      r.second_order = second_order_rhs(m, n, epsilon, options.include_logn);
      if (options.moderate_power) {
        const auto mod = moderate_rhs(m, n, std::pow(static_cast<double>(n), -*options.moderate_power));
        r.moderate = mod.value;
        r.epsilon_n = mod.epsilon_n;
      }
    }
    r.residual = r.dh_exact - r.second_order;
    out.push_back(r);
  }
  return out;
}

}  // namespace nsqht
