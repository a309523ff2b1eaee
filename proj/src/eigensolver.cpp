#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include "nsqht/error.hpp"
#include "nsqht/hermitian.hpp"

namespace nsqht {
namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiTolerance = 1e-13;
constexpr int kMaxQlIterations = 60;

inline double conj_of(double x) { return x; }
inline Complex conj_of(const Complex& x) { return std::conj(x); }
inline double real_of(double x) { return x; }
inline double real_of(const Complex& x) { return x.real(); }
inline double abs2_of(double x) { return x * x; }
inline double abs2_of(const Complex& x) { return std::norm(x); }

double off_diagonal_norm(const std::vector<Complex>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) s += std::norm(a[i * n + j]);
    }
  }
  return std::sqrt(s);
}

// Orders eigenpairs by descending eigenvalue; equal values keep their
// original index order.
std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

SpectralDecomposition jacobi_eigh(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  std::vector<Complex> a(h.entries().begin(), h.entries().end());
  std::vector<Complex> v(n * n, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double tol = kJacobiTolerance * h.frobenius_norm();
  bool converged = false;
  for (int sweep = 0; sweep <= kMaxJacobiSweeps; ++sweep) {
    if (off_diagonal_norm(a, n) <= tol) {
      converged = true;
      break;
    }
    if (sweep == kMaxJacobiSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a[p * n + q];
        const double ab = std::abs(b);
        if (ab == 0.0) continue;
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double theta = (aqq - app) / (2.0 * ab);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex ph = b / ab;
        const Complex s_ph = s * ph;
        const Complex s_phc = s * std::conj(ph);

        // A <- A G, V <- V G with G = [[c, s e^{i phi}], [-s e^{-i phi}, c]].
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a[k * n + p];
          const Complex akq = a[k * n + q];
          a[k * n + p] = c * akp - s_phc * akq;
          a[k * n + q] = s_ph * akp + c * akq;
          const Complex vkp = v[k * n + p];
          const Complex vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s_phc * vkq;
          v[k * n + q] = s_ph * vkp + c * vkq;
        }
        // A <- G^H A.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a[p * n + k];
          const Complex aqk = a[q * n + k];
          a[p * n + k] = c * apk - s_ph * aqk;
          a[q * n + k] = s_phc * apk + c * aqk;
        }
        a[p * n + p] = app - t * ab;
        a[q * n + q] = aqq + t * ab;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
      }
    }
  }
  if (!converged) {
    const double residual = off_diagonal_norm(a, n);
    throw ConvergenceError("Jacobi eigensolver did not converge after " +
                               std::to_string(kMaxJacobiSweeps) +
                               " sweeps; residual off-diagonal norm " + std::to_string(residual),
                           residual);
  }

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i].real();
  const auto order = descending_order(diag);
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v[i * n + order[k]];
  }
  return out;
}

// Householder reduction of a Hermitian (or real symmetric) matrix to real
// tridiagonal form T = Q^H A Q, Q = H_0 H_1 ... H_{n-2}, H_k = I - tau_k v_k v_k^H.
// Only the lower triangle of `a` is referenced and updated.
template <class T>
struct Tridiagonal {
  std::vector<double> d;  // diagonal
  std::vector<double> e;  // e[k] = T(k, k+1), e[n-1] = 0
  std::vector<T> tau;
  std::vector<std::vector<T>> reflectors;  // v_k, v_k[0] = 1, acting on k+1..n-1
};

template <class T>
Tridiagonal<T> tridiagonalize(std::vector<T> a, std::size_t n, bool keep_reflectors) {
  Tridiagonal<T> out;
  out.d.assign(n, 0.0);
  out.e.assign(n, 0.0);
  if (keep_reflectors) {
    out.tau.assign(n, T{0});
    out.reflectors.resize(n);
  }
  std::vector<T> x, p, w;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out.d[k] = real_of(a[k * n + k]);
    const std::size_t m = n - k - 1;
    x.resize(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = a[(k + 1 + i) * n + k];
    const T alpha = x[0];
    double xnorm2 = 0.0;
    for (std::size_t i = 1; i < m; ++i) xnorm2 += abs2_of(x[i]);
    if (xnorm2 == 0.0 && real_of(alpha) == alpha) {
      out.e[k] = real_of(alpha);
      continue;  // H_k = I
    }
    const double beta =
        -std::copysign(std::sqrt(abs2_of(alpha) + xnorm2), real_of(alpha));
    const T tau = (T(beta) - alpha) / T(beta);
    const T scale = T(1.0) / (alpha - T(beta));
    x[0] = T(1.0);
    for (std::size_t i = 1; i < m; ++i) x[i] *= scale;
    out.e[k] = beta;

    // p = tau A22 v, lower triangle only.
    p.assign(m, T{0});
    for (std::size_t i = 0; i < m; ++i) {
      const T* row = &a[(k + 1 + i) * n + (k + 1)];
      const T vi = x[i];
      T acc{0};
      for (std::size_t j = 0; j < i; ++j) {
        acc += row[j] * x[j];
        p[j] += conj_of(row[j]) * vi;
      }
      acc += real_of(row[i]) * vi;
      p[i] += acc;
    }
    T pv{0};
    for (std::size_t i = 0; i < m; ++i) {
      p[i] *= tau;
      pv += conj_of(p[i]) * x[i];
    }
    const T shift = T(-0.5) * tau * pv;
    w.resize(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = p[i] + shift * x[i];

    // A22 -= v w^H + w v^H.
    for (std::size_t i = 0; i < m; ++i) {
      T* row = &a[(k + 1 + i) * n + (k + 1)];
      const T vi = x[i];
      const T wi = w[i];
      for (std::size_t j = 0; j <= i; ++j) {
        row[j] -= vi * conj_of(w[j]) + wi * conj_of(x[j]);
      }
    }
    if (keep_reflectors) {
      out.tau[k] = tau;
      out.reflectors[k] = x;
    }
  }
  if (n > 0) out.d[n - 1] = real_of(a[(n - 1) * n + (n - 1)]);
  return out;
}

// Implicit QL with Wilkinson-style shifts on a real symmetric tridiagonal
// matrix. If `zt` is non-null it holds row-wise vectors (zt[i*n + k] is
// component k of vector i) that receive the same rotations.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>* zt) {
  const std::size_t n = d.size();
  // Deflate also once e[m] is at rounding level of the whole matrix: the
  // reduction already carries that much backward error, and strongly graded
  // spectra (tiny clustered eigenvalues next to O(1) ones) otherwise stall.
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm = std::max(norm, std::abs(d[i]) + std::abs(e[i]));
  const double floor = std::numeric_limits<double>::epsilon() * norm;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) + dd == dd || std::abs(e[m]) <= floor) break;
      }
      if (m != l) {
        if (iter++ == kMaxQlIterations) {
          double residual = 0.0;
          for (double v : e) residual += v * v;
          residual = std::sqrt(2.0 * residual);
          throw ConvergenceError("tridiagonal QL did not converge; residual off-diagonal norm " +
                                     std::to_string(residual),
                                 residual);
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        std::size_t i = m;
        while (i-- > l) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (zt != nullptr) {
            double* zi = &(*zt)[i * n];
            double* zi1 = &(*zt)[(i + 1) * n];
            for (std::size_t k = 0; k < n; ++k) {
              const double f2 = zi1[k];
              zi1[k] = s * zi[k] + c * f2;
              zi[k] = c * zi[k] - s * f2;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

template <class T>
std::vector<T> lower_copy(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  std::vector<T> a(n * n, T{0});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if constexpr (std::is_same_v<T, double>) {
        a[i * n + j] = h(i, j).real();
      } else {
        a[i * n + j] = h(i, j);
      }
    }
  }
  return a;
}

template <class T>
std::vector<double> tridiagonal_eigvals(const ComplexMatrix& h) {
  auto tri = tridiagonalize<T>(lower_copy<T>(h), h.dim(), false);
  tridiagonal_ql(tri.d, tri.e, nullptr);
  std::sort(tri.d.begin(), tri.d.end(), std::greater<>());
  return tri.d;
}

template <class T>
SpectralDecomposition tridiagonal_eigh(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  auto tri = tridiagonalize<T>(lower_copy<T>(h), n, true);
  std::vector<double> zt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) zt[i * n + i] = 1.0;
  tridiagonal_ql(tri.d, tri.e, &zt);

  const auto order = descending_order(tri.d);
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  std::vector<T> col(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = tri.d[src];
    for (std::size_t i = 0; i < n; ++i) col[i] = T(zt[src * n + i]);
    // Q z = H_0 (H_1 (... H_{n-2} z)).
    for (std::size_t r = n - 1; r-- > 0;) {
      if (tri.reflectors[r].empty()) continue;
      const auto& v = tri.reflectors[r];
      T dot{0};
      for (std::size_t i = 0; i < v.size(); ++i) dot += conj_of(v[i]) * col[r + 1 + i];
      dot *= tri.tau[r];
      for (std::size_t i = 0; i < v.size(); ++i) col[r + 1 + i] -= v[i] * dot;
    }
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = Complex(col[i]);
  }
  return out;
}

bool use_jacobi(const HermitianMatrix& h, EigenMethod method) {
  switch (method) {
    case EigenMethod::kJacobi:
      return true;
    case EigenMethod::kTridiagonal:
      return false;
    case EigenMethod::kAuto:
      break;
  }
  return h.dim() <= kJacobiMaxDim;
}

}  // namespace

SpectralDecomposition eigh(const HermitianMatrix& h, EigenMethod method) {
  if (h.dim() == 0) return {};
  if (use_jacobi(h, method)) return jacobi_eigh(h.matrix());
  if (h.matrix().is_real()) return tridiagonal_eigh<double>(h.matrix());
  return tridiagonal_eigh<Complex>(h.matrix());
}

std::vector<double> eigvalsh(const HermitianMatrix& h, EigenMethod method) {
  if (h.dim() == 0) return {};
  if (use_jacobi(h, method)) return jacobi_eigh(h.matrix()).eigenvalues;
  if (h.matrix().is_real()) return tridiagonal_eigvals<double>(h.matrix());
  return tridiagonal_eigvals<Complex>(h.matrix());
}

}  // namespace nsqht
