#pragma once

// Converse (upper) bounds on D_h^eps(rho^{(x)n} || sigma^{(x)n}), stated as
// lower bounds on the type-II error beta. The D_h form of a beta bound b is
// -log2 b, which is +infinity when b = 0.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsqht/hermitian.hpp"
#include "nsqht/ns_classical.hpp"
#include "nsqht/numeric.hpp"
#include "nsqht/tensor_power_pair.hpp"

namespace nsqht {

/// A state pair at n copies with the derived classical and block data
/// cached. The tensor pair is built on first use; not safe to share across
/// threads before that.
class ConverseProblem {
 public:
  ConverseProblem(const DensityOperator& rho, const DensityOperator& sigma, int copies,
                  TensorPath path = TensorPath::kAuto);

  const DensityOperator& rho() const noexcept { return rho_; }
  const DensityOperator& sigma() const noexcept { return sigma_; }
  int copies() const noexcept { return copies_; }
  const NSPair& ns() const noexcept { return ns_; }
  /// Type-class atoms of (P^n, Q^n).
  const std::vector<LLRAtom>& atoms() const noexcept { return atoms_; }
  const TensorPowerPair& pair() const;

 private:
  DensityOperator rho_;
  DensityOperator sigma_;
  int copies_;
  TensorPath path_;
  NSPair ns_;
  std::vector<LLRAtom> atoms_;
  mutable std::optional<TensorPowerPair> pair_;
};

/// s * beta_{alpha/(1-s)}(P^n, Q^n). Requires 0 <= s < 1 and alpha <= 1 - s.
double theorem1_beta_bound(const ConverseProblem& problem, double alpha, double s);
double theorem1_beta_bound(const DensityOperator& rho, const DensityOperator& sigma, int n,
                           double alpha, double s);

struct EnvelopeResult {
  double beta = 0.0;
  double s_star = 0.0;
};

/// Max over s in [0, 1 - alpha] of theorem1_beta_bound: a 101-point uniform
/// grid, then golden-section refinement around the best grid point to width
/// 1e-6. The result never falls below any grid value.
EnvelopeResult theorem1_envelope(const ConverseProblem& problem, double alpha);

/// theorem1_beta_bound at s = 1/2, and 0 for alpha > 1/2.
double ns_symmetric_bound(const ConverseProblem& problem, double alpha);

/// Exact trade-off point of two pure states with overlap a, parametrized by
/// p in [0, 1]. p = 0 gives (a, 0) and p = 1 gives (0, a).
struct PureCurvePoint {
  double alpha = 0.0;
  double beta = 0.0;
};
PureCurvePoint lemma2_curve(double a, double p);

struct FidelityBoundResult {
  double beta = 0.0;
  std::optional<double> p_star;
};

/// Pure-state curve with a = F(rho, sigma)^{2n}: 0 once alpha >= a,
/// otherwise beta_q(p) at the p solving alpha_q(p) = alpha (bisection to
/// 1e-12). For a within 1e-12 of 1 (identical states) returns 1 - alpha.
FidelityBoundResult fidelity_bound(const DensityOperator& rho, const DensityOperator& sigma, int n,
                                   double alpha);

struct HoeffdingResult {
  double value = 0.0;
  double s_star = 0.0;
};

/// sup_{0 <= s < 1} (psi(s) + s r) / (s - 1), psi(s) = log2 sum P^s Q^(1-s):
/// 513-point grid on [0, 1 - 1e-6], golden-section refinement around the
/// best point, and the s -> 1 limit D(P||Q) when r = 0. Throws
/// SingularSupportError when P and Q have different supports.
HoeffdingResult hoeffding_rhs(const NSPair& ns, double r);
HoeffdingResult hoeffding_rhs(const DensityOperator& rho, const DensityOperator& sigma, double r);
/// Same search with psi from Tr[rho^s sigma^(1-s)] by matrix functions.
HoeffdingResult hoeffding_rhs_quantum(const DensityOperator& rho, const DensityOperator& sigma,
                                      double r);

struct InfoSpectrumResult {
  double dh = kInfinity;  ///< bound on D_h, bits
  std::optional<double> delta;
};

/// min over delta of D_s^{eps+delta} + log2(1/delta), delta on 200
/// logarithmically spaced points (1 - eps) * 10^(-6 + 6k/200), k = 0..199.
/// +infinity when eps >= 1.
InfoSpectrumResult info_spectrum_bound(const ConverseProblem& problem, double epsilon);
/// The same from the classical llr atoms (exact D_s per delta).
InfoSpectrumResult info_spectrum_bound_classical(std::span<const LLRAtom> atoms, double epsilon);

enum class BoundName {
  kExact,
  kTheorem1,
  kTheorem1Envelope,
  kNsSymmetric,
  kFidelity,
  kInfoSpectrum,
};

std::string to_string(BoundName name);
/// Inverse of to_string; throws ParseError for unknown names.
BoundName parse_bound_name(const std::string& text);

struct BoundPoint {
  double epsilon = 0.0;
  double dh_upper = kInfinity;
  BoundName bound = BoundName::kExact;
  std::optional<double> s;
  std::optional<double> t;
  std::optional<double> p;
  std::optional<double> delta;
};

/// D_h form of one bound at eps. kTheorem1 needs `s`.
BoundPoint dh_bound(const ConverseProblem& problem, BoundName bound, double epsilon,
                    std::optional<double> s = std::nullopt);

}  // namespace nsqht
