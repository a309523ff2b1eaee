#include "nsqht/tensor_power_pair.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsqht/error.hpp"
#include "nsqht/numeric.hpp"

namespace nsqht {

namespace {

Complex ipow(Complex z, int e) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < e; ++i) out *= z;
  return out;
}

}  // namespace

ComplexMatrix symmetric_power(const ComplexMatrix& a, int m) {
  if (a.dim() != 2) throw DomainError("symmetric_power: only qubit (2x2) operators are supported");
  if (m < 0) throw DomainError("symmetric_power: negative degree");
  const Complex a00 = a(0, 0), a01 = a(0, 1), a10 = a(1, 0), a11 = a(1, 1);
  ComplexMatrix out(static_cast<std::size_t>(m) + 1);
  for (int l = 0; l <= m; ++l) {
    // A^{(x)m} maps x^{m-l} y^l to (a00 x + a10 y)^{m-l} (a01 x + a11 y)^l.
    for (int k = 0; k <= m; ++k) {
      Complex c{0.0, 0.0};
      const int i_lo = std::max(0, k - (m - l));
      const int i_hi = std::min(l, k);
      for (int i = i_lo; i <= i_hi; ++i) {
        c += binomial(m - l, k - i) * binomial(l, i) * ipow(a00, m - l - k + i) *
             ipow(a10, k - i) * ipow(a01, l - i) * ipow(a11, i);
      }
      out(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) =
          c * std::sqrt(binomial(m, l) / binomial(m, k));
    }
  }
  return out;
}

TensorPowerPair::TensorPowerPair(const DensityOperator& rho, const DensityOperator& sigma,
                                 int copies, TensorPath path)
    : copies_(copies), dim_(std::pow(static_cast<double>(rho.dim()), copies)), path_(path) {
  if (copies < 1) throw DomainError("number of copies must be a positive integer");
  if (rho.dim() != sigma.dim()) {
    throw DomainError("rho and sigma must have equal dimensions (" + std::to_string(rho.dim()) +
                      " vs " + std::to_string(sigma.dim()) + ")");
  }
  if (path_ == TensorPath::kAuto) {
    path_ = (rho.dim() == 2 && copies > 1) ? TensorPath::kSymmetric : TensorPath::kDense;
  }
  if (path_ == TensorPath::kSymmetric && rho.dim() != 2) {
    throw DomainError("symmetric tensor path requires qubit states");
  }

  if (path_ == TensorPath::kDense) {
    blocks_.push_back(TensorBlock{tensor_power(rho.hermitian(), copies),
                                  tensor_power(sigma.hermitian(), copies), 1.0});
    return;
  }

  auto det2 = [](const ComplexMatrix& m) {
    return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  };
  const double det_rho = det2(rho.matrix());
  const double det_sigma = det2(sigma.matrix());
  for (int k = 0; 2 * k <= copies; ++k) {
    const int m = copies - 2 * k;
    const double mult = binomial(copies, k) - binomial(copies, k - 1);
    const ComplexMatrix r = std::pow(det_rho, k) * symmetric_power(rho.matrix(), m);
    const ComplexMatrix s = std::pow(det_sigma, k) * symmetric_power(sigma.matrix(), m);
    blocks_.push_back(TensorBlock{HermitianMatrix(r), HermitianMatrix(s), mult});
  }
}

}  // namespace nsqht
