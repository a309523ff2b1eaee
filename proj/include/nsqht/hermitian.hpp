#pragma once

// Dense complex linear algebra for small quantum systems: Hermitian
// eigendecomposition, tensor powers, spectral matrix functions, fidelity and
// positive-part traces.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nsqht {

using Complex = std::complex<double>;

/// Largest side of a dense operator we are willing to materialize.
inline constexpr std::size_t kMaxDenseDim = 4096;

/// Square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix of side `dim`.
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }

  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  /// True when every imaginary part is exactly zero.
  bool is_real() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs += rhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs -= rhs;
  }
  friend ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// Kronecker product, big-endian: (i1 i2),(j1 j2) -> a(i1,j1) b(i2,j2).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian matrix. Construction checks ||A - A^H||_F <= 1e-12 max(1, ||A||_F)
/// and stores (A + A^H) / 2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return m_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const;

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double scale, const HermitianMatrix& a);
  HermitianMatrix operator-() const { return -1.0 * *this; }

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
  friend HermitianMatrix kron(const HermitianMatrix&, const HermitianMatrix&);
  friend HermitianMatrix tensor_power(const HermitianMatrix&, int);
  friend HermitianMatrix from_spectrum(std::span<const double>, const ComplexMatrix&);

  ComplexMatrix m_;
};

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

/// Eigenvalues sorted descending; column k of `eigenvectors` pairs with
/// eigenvalue k.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  /// U diag(eigenvalues) U^H.
  ComplexMatrix reconstruct() const;
  std::size_t dim() const noexcept { return eigenvalues.size(); }
};

/// U diag(values) U^H, Hermitian by construction.
HermitianMatrix from_spectrum(std::span<const double> values, const ComplexMatrix& basis);

/// Selects the eigensolver used by eigh / eigvalsh.
enum class EigenMethod {
  kAuto,         ///< Jacobi up to kJacobiMaxDim, tridiagonal QL above
  kJacobi,       ///< cyclic complex Jacobi rotations
  kTridiagonal,  ///< Householder reduction + implicit QL
};

inline constexpr std::size_t kJacobiMaxDim = 32;

/// Full Hermitian eigendecomposition. Throws ConvergenceError (carrying the
/// residual off-diagonal norm) if the iteration cap is reached.
SpectralDecomposition eigh(const HermitianMatrix& h, EigenMethod method = EigenMethod::kAuto);

/// Eigenvalues only, sorted descending.
std::vector<double> eigvalsh(const HermitianMatrix& h, EigenMethod method = EigenMethod::kAuto);

/// Density operator: Hermitian, trace 1 within 1e-10, eigenvalues >= -1e-10.
/// Slightly negative eigenvalues are clamped to zero after validation. The
/// spectral decomposition is computed once and kept.
class DensityOperator {
 public:
  explicit DensityOperator(const HermitianMatrix& h);
  explicit DensityOperator(const ComplexMatrix& m) : DensityOperator(HermitianMatrix(m)) {}

  /// |psi><psi| for a (normalized on construction) state vector.
  static DensityOperator pure(std::span<const Complex> psi);

  std::size_t dim() const noexcept { return h_.dim(); }
  const HermitianMatrix& hermitian() const noexcept { return h_; }
  const ComplexMatrix& matrix() const noexcept { return h_.matrix(); }
  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }

 private:
  HermitianMatrix h_;
  SpectralDecomposition spectrum_;
};

/// Dense A^{(x) n}. Throws SizingError when dim^n > kMaxDenseDim.
ComplexMatrix tensor_power(const ComplexMatrix& a, int n);
HermitianMatrix tensor_power(const HermitianMatrix& a, int n);
DensityOperator tensor_power(const DensityOperator& rho, int n);

/// Scalar function applied in the eigenbasis.
struct MatrixFunction {
  enum class Kind { kPower, kLog2 };
  Kind kind = Kind::kPower;
  double exponent = 1.0;

  static MatrixFunction power(double s) { return {Kind::kPower, s}; }
  static MatrixFunction sqrt() { return {Kind::kPower, 0.5}; }
  static MatrixFunction log2() { return {Kind::kLog2, 0.0}; }
};

/// Eigenvalues with |x| <= this are treated as zero by power(.., 0) and by
/// fractional powers.
inline constexpr double kSupportCutoff = 1e-12;
/// log2 and negative powers refuse eigenvalues at or below this.
inline constexpr double kLogCutoff = 1e-14;

/// f(H). power(H, 0) is the support projector. Fractional powers need
/// eigenvalues >= -1e-12; those at or below kSupportCutoff map to 0. log2 and negative powers throw
/// SingularSupportError naming the offending eigenvalue.
HermitianMatrix matrix_function(const HermitianMatrix& h, MatrixFunction f);
HermitianMatrix matrix_function(const SpectralDecomposition& spec, MatrixFunction f);

/// Tr |sqrt(rho) sqrt(sigma)|, clamped to [0, 1].
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Sum of the positive eigenvalues.
double positive_part_trace(const HermitianMatrix& h);

/// Re Tr[A B] for Hermitian A, B without forming the product.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace nsqht
