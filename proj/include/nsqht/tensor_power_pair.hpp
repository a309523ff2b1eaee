#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nsqht/hermitian.hpp"

namespace nsqht {

/// One invariant block of (rho^{(x)n}, sigma^{(x)n}): the pair acts as
/// (rho_block (x) I_m, sigma_block (x) I_m) with m = multiplicity.
struct TensorBlock {
  HermitianMatrix rho;
  HermitianMatrix sigma;
  double multiplicity = 1.0;
};

enum class TensorPath {
  kAuto,       ///< symmetric blocks for qubits, dense otherwise
  kDense,      ///< one dense block of side dim^n
  kSymmetric,  ///< qubit Schur-Weyl blocks det^k (x) Sym^{n-2k}
};

/// The pair (rho^{(x)n}, sigma^{(x)n}) held in block-diagonal form. Every
/// unitarily invariant quantity of t rho^{(x)n} - sigma^{(x)n} (spectra,
/// positive parts, Tr[rho Pi] for spectral projectors Pi) is the
/// multiplicity-weighted sum over blocks.
///
/// For qubits, C^2^{(x)n} decomposes under GL(2) x S_n into irreducibles
/// labelled by k = 0..floor(n/2): A^{(x)n} ~ (+)_k det(A)^k Sym^{n-2k}(A) (x) I
/// with multiplicity C(n,k) - C(n,k-1). The largest block then has side n + 1,
/// so the exact quantum trade-off stays cheap far beyond dense sizes.
class TensorPowerPair {
 public:
  TensorPowerPair(const DensityOperator& rho, const DensityOperator& sigma, int copies,
                  TensorPath path = TensorPath::kAuto);

  int copies() const noexcept { return copies_; }
  /// Side of the full operator, d^n (as a double; may exceed integer range).
  double dim() const noexcept { return dim_; }
  TensorPath path() const noexcept { return path_; }
  std::span<const TensorBlock> blocks() const noexcept { return blocks_; }

 private:
  int copies_;
  double dim_;
  TensorPath path_;
  std::vector<TensorBlock> blocks_;
};

/// Matrix of A^{(x)m} restricted to the symmetric subspace of (C^2)^{(x)m},
/// in the orthonormal Dicke basis (k = number of |1> factors).
ComplexMatrix symmetric_power(const ComplexMatrix& a, int m);

}  // namespace nsqht
