#pragma once

// Exact quantum Neyman-Pearson trade-off between rho^{(x)n} and sigma^{(x)n}.
//
// Conventions: a test Pi (0 <= Pi <= I) accepts H1 (sigma). Its type-I error
// is alpha = Tr[Pi rho], its type-II error beta = 1 - Tr[Pi sigma]. All
// logarithms are base 2, so D_h and D_s are in bits.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsqht/hermitian.hpp"
#include "nsqht/numeric.hpp"
#include "nsqht/tensor_power_pair.hpp"

namespace nsqht {

/// Hermitian Pi with spectrum in [-1e-10, 1 + 1e-10].
class TestOperator {
 public:
  explicit TestOperator(const HermitianMatrix& pi);

  const HermitianMatrix& hermitian() const noexcept { return pi_; }
  std::size_t dim() const noexcept { return pi_.dim(); }
  /// I - Pi.
  TestOperator complement() const;

 private:
  HermitianMatrix pi_;
};

struct TradeoffPoint {
  double alpha = 0.0;
  double beta = 1.0;
  std::optional<double> t;
  std::string label;
};

/// Points sorted by alpha. `convexify` keeps the lower convex envelope, which
/// makes beta non-increasing in alpha.
struct TradeoffCurve {
  std::vector<TradeoffPoint> points;

  void sort_by_alpha();
  void convexify();
};

/// Projector onto the non-negative eigenspace of t rho - sigma.
TestOperator helstrom_projector(const DensityOperator& rho, const DensityOperator& sigma,
                                double t);

/// (Tr[Pi rho], 1 - Tr[Pi sigma]) clamped to [0, 1].
TradeoffPoint test_errors(const TestOperator& pi, const DensityOperator& rho,
                          const DensityOperator& sigma);

/// Sum over blocks of multiplicity * Tr[(t rho_b - sigma_b)_+].
double positive_part_trace(const TensorPowerPair& pair, double t);

/// g(t) = t (1 - alpha) - Tr[(t rho - sigma)_+]. Concave in t, and
/// beta_alpha = sup_{t >= 0} g(t). Evaluated as 1 - t alpha -
/// Tr[(sigma - t rho)_+], which does not cancel at large t.
double tradeoff_objective(const TensorPowerPair& pair, double alpha, double t);

struct TradeoffSolution {
  double alpha = 0.0;
  double beta = 1.0;   ///< sup_t g(t), clamped to [0, 1]
  double t_star = 0.0;  ///< best t evaluated; infinity at alpha = 0
  int evaluations = 0;
};

/// beta_alpha for the tensor-power pair: geometric 64-point seed grid on
/// [2^-40, 2^40] plus t = 0, then golden-section refinement of the best
/// bracket to relative width 1e-10. At alpha = 0 the value is Tr[P sigma]
/// with P the support projector of rho (eigenvalues above kSupportCutoff).
TradeoffSolution solve_tradeoff(const TensorPowerPair& pair, double alpha);

/// Same as solve_tradeoff for several alphas, sharing the seed-grid
/// evaluations (which do not depend on alpha).
std::vector<TradeoffSolution> solve_tradeoff(const TensorPowerPair& pair,
                                             std::span<const double> alphas);

double beta_alpha_quantum(const DensityOperator& rho, const DensityOperator& sigma, double alpha);

/// -log2 beta_eps(rho^{(x)n}, sigma^{(x)n}); +infinity when beta is 0.
double dh_quantum(const DensityOperator& rho, const DensityOperator& sigma, int n, double epsilon,
                  TensorPath path = TensorPath::kAuto);
double dh_quantum(const TensorPowerPair& pair, double epsilon);

/// A test that attains beta_alpha: the mixture of the two Neyman-Pearson
/// tests {t rho < sigma} on either side of the optimal t, weighted so that
/// its type-I error equals alpha (or the largest achievable value <= alpha).
TestOperator optimal_test(const DensityOperator& rho, const DensityOperator& sigma, double alpha);

/// Sum over blocks of multiplicity * Tr[rho_b {rho_b <= 2^R sigma_b}].
double spectral_tail_mass(const TensorPowerPair& pair, double log_ratio);

/// Information-spectrum relative entropy
/// D_s^eps = sup{R : Tr[rho {rho <= 2^R sigma}] <= eps}, by bisection over R
/// to absolute width 1e-6 (the upper end of the final bracket is returned).
/// +infinity if the tail mass never exceeds eps.
double info_spectrum_Ds(const TensorPowerPair& pair, double epsilon);
double info_spectrum_Ds(const DensityOperator& rho, const DensityOperator& sigma, int n,
                        double epsilon, TensorPath path = TensorPath::kAuto);

}  // namespace nsqht
