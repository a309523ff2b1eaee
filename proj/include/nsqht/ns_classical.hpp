#pragma once

// Nussbaum-Szkola mapping and the classical Neyman-Pearson machinery built on
// it. Log-likelihood ratios are log2(P/Q).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nsqht/hermitian.hpp"

namespace nsqht {

/// Joint tables P_ij = lambda_i |<x_i|y_j>|^2, Q_ij = mu_j |<x_i|y_j>|^2 over
/// d x d cells (row-major, i indexes rho's eigenbasis, j sigma's).
struct NSPair {
  std::size_t dim = 0;
  std::vector<double> p;
  std::vector<double> q;

  double P(std::size_t i, std::size_t j) const { return p[i * dim + j]; }
  double Q(std::size_t i, std::size_t j) const { return q[i * dim + j]; }
};

/// Overlaps |<x_i|y_j>|^2 below this, and eigenvalues at or below kSupportCutoff,
/// produce exactly-zero cells.
inline constexpr double kZeroOverlap = 1e-14;

NSPair ns_map(const DensityOperator& rho, const DensityOperator& sigma);

/// One aggregated group of outcome sequences sharing a log-likelihood ratio.
/// llr is +inf only when q_mass = 0 and -inf only when p_mass = 0; atoms with
/// p_mass = q_mass = 0 are never produced.
struct LLRAtom {
  double llr = 0.0;
  double p_mass = 0.0;
  double q_mass = 0.0;
  /// Number of outcome sequences aggregated (integer-valued).
  double multiplicity = 1.0;
};

/// Upper limits for the type-class enumeration.
inline constexpr std::size_t kMaxBaseCells = 64;
inline constexpr double kMaxTypeClasses = 1e7;

/// Type classes of n i.i.d. draws from the positive cells of `ns`, merged when
/// their llr agree within 1e-12 relative and sorted by llr ascending.
std::vector<LLRAtom> atoms_product(const NSPair& ns, int n);

/// The same for an arbitrary pair of distributions on k outcomes.
std::vector<LLRAtom> atoms_product(std::span<const double> p, std::span<const double> q, int n);

/// Exact randomized Neyman-Pearson value beta_alpha(P, Q): fill the H1
/// acceptance region from the smallest llr upward until the P-mass alpha is
/// used, splitting the boundary atom, and return the remaining Q-mass.
double beta_alpha_classical(std::span<const LLRAtom> atoms, double alpha);

/// sup_t { sum q 1{tp >= q} + t (sum p 1{tp < q} - alpha) } over a 2048-point
/// geometric grid spanning the finite likelihood ratios plus every breakpoint
/// t = q/p and t = 0.
double beta_alpha_classical_variational(std::span<const LLRAtom> atoms, double alpha);

/// (D, V, T) in bits, bits^2, bits^3. V and T are empty when D = +inf.
struct MomentTriple {
  double D = 0.0;
  std::optional<double> V;
  std::optional<double> T;

  bool finite() const noexcept { return V.has_value(); }
};

MomentTriple moments(const NSPair& ns);

/// sum P^s Q^(1-s) over cells, with cells where P or Q vanishes contributing 0
/// for s in [0, 1]. Outside [0, 1] the supports must coincide.
double renyi_overlap(const NSPair& ns, double s);

/// -log2 beta_eps(P^n, Q^n); +infinity when the trade-off value is 0.
double dh_classical(const NSPair& ns, int n, double epsilon);

/// sup{R : P(llr <= R) <= eps} computed exactly from sorted atoms.
double info_spectrum_Ds_classical(std::span<const LLRAtom> atoms, double epsilon);

}  // namespace nsqht
