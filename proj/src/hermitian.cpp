#include "nsqht/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nsqht/error.hpp"
#include "nsqht/kahan.hpp"

namespace nsqht {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kTraceTolerance = 1e-10;
constexpr double kPsdTolerance = 1e-10;
constexpr double kFractionalPowerTolerance = 1e-12;

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DomainError(os.str());
  }
}

bool is_integer(double s) { return std::floor(s) == s; }

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim * dim) {
    throw DomainError("ComplexMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                      std::to_string(data_.size()));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  KahanSum re, im;
  for (std::size_t i = 0; i < dim_; ++i) {
    re += (*this)(i, i).real();
    im += (*this)(i, i).imag();
  }
  return {re.value(), im.value()};
}

double ComplexMatrix::frobenius_norm() const {
  KahanSum s;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s.value());
}

bool ComplexMatrix::is_real() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) { return z.imag() == 0.0; });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(dim_, rhs.dim_, "matrix addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(dim_, rhs.dim_, "matrix subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs.dim(), rhs.dim(), "matrix product");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i1 = 0; i1 < na; ++i1) {
    for (std::size_t j1 = 0; j1 < na; ++j1) {
      const Complex x = a(i1, j1);
      for (std::size_t i2 = 0; i2 < nb; ++i2) {
        for (std::size_t j2 = 0; j2 < nb; ++j2) {
          out(i1 * nb + i2, j1 * nb + j2) = x * b(i2, j2);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) : m_(m.dim()) {
  const std::size_t n = m.dim();
  KahanSum skew;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) skew += std::norm(m(i, j) - std::conj(m(j, i)));
  }
  const double skew_norm = std::sqrt(skew.value());
  if (!(skew_norm <= kHermitianTolerance * std::max(1.0, m.frobenius_norm()))) {
    std::ostringstream os;
    os << "matrix is not Hermitian: ||A - A^H||_F = " << skew_norm;
    throw DomainError(os.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = z;
      m_(j, i) = std::conj(z);
    }
  }
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  return HermitianMatrix(ComplexMatrix::diagonal(values), Trusted{});
}

double HermitianMatrix::trace() const { return m_.trace().real(); }

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.m_ + b.m_, HermitianMatrix::Trusted{});
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.m_ - b.m_, HermitianMatrix::Trusted{});
}

HermitianMatrix operator*(double scale, const HermitianMatrix& a) {
  return HermitianMatrix(Complex(scale) * a.m_, HermitianMatrix::Trusted{});
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.matrix(), b.matrix()), HermitianMatrix::Trusted{});
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return from_spectrum(eigenvalues, eigenvectors).matrix();
}

HermitianMatrix from_spectrum(std::span<const double> values, const ComplexMatrix& basis) {
  const std::size_t n = basis.dim();
  require_same_dim(values.size(), n, "from_spectrum");
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) {
        if (values[k] == 0.0) continue;
        acc += values[k] * basis(i, k) * std::conj(basis(j, k));
      }
      out(i, j) = acc;
      out(j, i) = std::conj(acc);
    }
    out(i, i) = out(i, i).real();
  }
  return HermitianMatrix(std::move(out), HermitianMatrix::Trusted{});
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(const HermitianMatrix& h) : h_(h) {
  const double tr = h.trace();
  if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "density operator must have unit trace, got " << tr;
    throw DomainError(os.str());
  }
  spectrum_ = eigh(h);
  bool clamped = false;
  for (double& lambda : spectrum_.eigenvalues) {
    if (lambda < -kPsdTolerance) {
      std::ostringstream os;
      os << "density operator must be positive semidefinite, found eigenvalue " << lambda;
      throw DomainError(os.str());
    }
    if (lambda < 0.0) {
      lambda = 0.0;
      clamped = true;
    }
  }
  if (clamped) h_ = from_spectrum(spectrum_.eigenvalues, spectrum_.eigenvectors);
}

DensityOperator DensityOperator::pure(std::span<const Complex> psi) {
  KahanSum norm2;
  for (const auto& z : psi) norm2 += std::norm(z);
  const double norm = std::sqrt(norm2.value());
  if (!(norm > 0.0)) throw DomainError("pure state vector must be nonzero");
  const std::size_t n = psi.size();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = psi[i] * std::conj(psi[j]) / (norm * norm);
  }
  return DensityOperator(HermitianMatrix(m));
}

// ---------------------------------------------------------------------------
// tensor powers

ComplexMatrix tensor_power(const ComplexMatrix& a, int n) {
  if (n < 1) throw DomainError("tensor_power: n must be a positive integer");
  double total = 1.0;
  for (int k = 0; k < n; ++k) total *= static_cast<double>(a.dim());
  if (total > static_cast<double>(kMaxDenseDim)) {
    std::ostringstream os;
    os << "tensor_power: dimension " << a.dim() << "^" << n << " exceeds the dense limit "
       << kMaxDenseDim << "; use the type-class path (atoms_product) for classical product "
       << "distributions instead";
    throw SizingError(os.str());
  }
  ComplexMatrix out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

HermitianMatrix tensor_power(const HermitianMatrix& a, int n) {
  return HermitianMatrix(tensor_power(a.matrix(), n), HermitianMatrix::Trusted{});
}

DensityOperator tensor_power(const DensityOperator& rho, int n) {
  return DensityOperator(tensor_power(rho.hermitian(), n));
}

// ---------------------------------------------------------------------------
// spectral functions

HermitianMatrix matrix_function(const SpectralDecomposition& spec, MatrixFunction f) {
  std::vector<double> values(spec.eigenvalues.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double lambda = spec.eigenvalues[k];
    if (f.kind == MatrixFunction::Kind::kLog2) {
      if (!(lambda > kLogCutoff)) {
        std::ostringstream os;
        os << "log2 of an operator with eigenvalue " << lambda << " (cutoff " << kLogCutoff
           << "): support is singular";
        throw SingularSupportError(os.str());
      }
      values[k] = std::log2(lambda);
      continue;
    }
    const double s = f.exponent;
    if (s == 0.0) {
      values[k] = std::abs(lambda) > kSupportCutoff ? 1.0 : 0.0;
    } else if (s < 0.0) {
      if (is_integer(s) ? !(std::abs(lambda) > kLogCutoff) : !(lambda > kLogCutoff)) {
        std::ostringstream os;
        os << "negative power " << s << " of an operator with eigenvalue " << lambda
           << ": support is singular";
        throw SingularSupportError(os.str());
      }
      values[k] = std::pow(lambda, s);
    } else if (is_integer(s)) {
      values[k] = std::pow(lambda, s);
    } else {
      if (lambda < -kFractionalPowerTolerance) {
        std::ostringstream os;
        os << "fractional power " << s << " of an operator with negative eigenvalue " << lambda;
        throw DomainError(os.str());
      }
      values[k] = lambda > kSupportCutoff ? std::pow(lambda, s) : 0.0;
    }
  }
  return from_spectrum(values, spec.eigenvectors);
}

HermitianMatrix matrix_function(const HermitianMatrix& h, MatrixFunction f) {
  if (f.kind == MatrixFunction::Kind::kPower && f.exponent == 1.0) return h;
  return matrix_function(eigh(h), f);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "fidelity");
  const ComplexMatrix sqrt_rho =
      matrix_function(rho.spectrum(), MatrixFunction::sqrt()).matrix();
  const HermitianMatrix m(sqrt_rho * sigma.matrix() * sqrt_rho);
  const auto values = eigvalsh(m);
  KahanSum f;
  // ascending index order of the (descending) spectrum
  for (double lambda : values) f += lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  return std::clamp(f.value(), 0.0, 1.0);
}

double positive_part_trace(const HermitianMatrix& h) {
  const auto values = eigvalsh(h);
  KahanSum s;
  for (double lambda : values) {
    if (lambda > 0.0) s += lambda;
  }
  return s.value();
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "trace_product");
  const std::size_t n = a.dim();
  KahanSum s;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s += (a(i, j) * b(j, i)).real();
  }
  return s.value();
}

}  // namespace nsqht
