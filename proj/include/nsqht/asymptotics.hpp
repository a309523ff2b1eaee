#pragma once

// Normal CDF and the finite-n second-order and moderate-deviation
// expansions of D_h^eps(rho^{(x)n} || sigma^{(x)n}), in bits.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsqht/hermitian.hpp"
#include "nsqht/ns_classical.hpp"

namespace nsqht {

/// Standard normal CDF.
double norm_cdf(double x);

/// Inverse of norm_cdf on (0, 1): rational initial guess refined by one
/// Halley step, |norm_cdf(inv_norm_cdf(p)) - p| <= 1e-12. DomainError
/// outside (0, 1).
double inv_norm_cdf(double p);

/// n D + sqrt(n V) Phi^{-1}(eps), plus log2 n when include_logn is set.
/// Throws DegenerateVarianceError when V = 0 and DomainError when D is
/// infinite.
double second_order_rhs(const MomentTriple& m, int n, double epsilon, bool include_logn = false);

struct ModerateResult {
  double value = 0.0;      ///< n D - sqrt(2 V) n a_n
  double epsilon_n = 1.0;  ///< exp(-n a_n^2)
};

/// Requires a_n >= 0, finite D and V > 0.
ModerateResult moderate_rhs(const MomentTriple& m, int n, double a_n);

struct ExpansionReport {
  int n = 1;
  double epsilon = 0.5;
  double dh_exact = 0.0;
  double second_order = 0.0;
  std::optional<double> moderate;
  std::optional<double> epsilon_n;
  double residual = 0.0;  ///< dh_exact - second_order
  std::string source;     ///< "quantum" or "classical"
};

struct SweepOptions {
  bool include_logn = false;
  /// When set, also evaluate moderate_rhs with a_n = n^{-moderate_power}.
  std::optional<double> moderate_power;
};

/// One report per n. dh_exact is the quantum value whenever the tensor pair
/// is representable (qubits at any n, otherwise d^n <= 4096); beyond that
/// the classical D_h^eps(P^n || Q^n) is reported with source "classical".
/// With V = 0 the Gaussian term vanishes and second_order is n D.
std::vector<ExpansionReport> expansion_sweep(const DensityOperator& rho,
                                             const DensityOperator& sigma, double epsilon,
                                             std::span<const int> n_list,
                                             const SweepOptions& options = {});

}  // namespace nsqht
