#include <doctest.h>

#include <cmath>
#include <random>

#include "golden.hpp"
#include "nsqht/bench.hpp"
#include "nsqht/error.hpp"
#include "nsqht/hermitian.hpp"
#include "oracles.hpp"

using namespace nsqht;

namespace {

double unitary_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::identity(u.dim())).frobenius_norm();
}

DensityOperator fig2_rho() { return bench::make_preset("fig2").rho; }
DensityOperator fig2_sigma() { return bench::make_preset("fig2").sigma; }

}  // namespace

TEST_SUITE("hermitian-core") {
  TEST_CASE("eigh of identity, Pauli X and the fig2 sigma") {
    const auto id = eigh(HermitianMatrix(ComplexMatrix::identity(4)));
    for (double v : id.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(unitary_defect(id.eigenvectors) <= 1e-12);

    ComplexMatrix x(2);
    x(0, 1) = x(1, 0) = 1.0;
    const auto px = eigh(HermitianMatrix(x));
    CHECK(std::abs(px.eigenvalues[0] - 1.0) <= 1e-14);
    CHECK(std::abs(px.eigenvalues[1] + 1.0) <= 1e-14);

    const auto s = eigh(fig2_sigma().hermitian());
    CHECK(std::abs(s.eigenvalues[0] - 0.8) <= 1e-14);
    CHECK(std::abs(s.eigenvalues[1] - 0.2) <= 1e-14);
    const auto [e0, e1] = oracle::eig2(fig2_sigma().matrix());
    CHECK(std::abs(s.eigenvalues[0] - e0) <= 1e-14);
    CHECK(std::abs(s.eigenvalues[1] - e1) <= 1e-14);
  }

  TEST_CASE("reconstruction and orthonormality, 200 random matrices of dim 2..32") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(2, 32);
    double worst_rec = 0.0, worst_orth = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      const HermitianMatrix h(oracle::random_hermitian(rng, dim(rng)));
      const auto spec = eigh(h);
      const double scale = std::max(1.0, h.matrix().frobenius_norm());
      worst_rec = std::max(worst_rec, (spec.reconstruct() - h.matrix()).frobenius_norm() / scale);
      worst_orth = std::max(worst_orth, unitary_defect(spec.eigenvectors));
    }
    CHECK(worst_rec <= 1e-11);
    CHECK(worst_orth <= 1e-11);
  }

  TEST_CASE("tridiagonal path agrees with Jacobi and reconstructs above dim 32") {
    std::mt19937_64 rng(12);
    for (std::size_t d : {5, 33, 64, 100}) {
      const HermitianMatrix h(oracle::random_hermitian(rng, d));
      const auto ql = eigh(h, EigenMethod::kTridiagonal);
      const double scale = std::max(1.0, h.matrix().frobenius_norm());
      CHECK((ql.reconstruct() - h.matrix()).frobenius_norm() <= 1e-11 * scale);
      CHECK(unitary_defect(ql.eigenvectors) <= 1e-11);
      const auto jac = eigvalsh(h, EigenMethod::kJacobi);
      for (std::size_t k = 0; k < d; ++k) CHECK(std::abs(jac[k] - ql.eigenvalues[k]) <= 1e-11 * scale);
    }
  }

  TEST_CASE("eigenvalues are sorted descending") {
    std::mt19937_64 rng(13);
    const auto values = eigvalsh(HermitianMatrix(oracle::random_hermitian(rng, 12)));
    for (std::size_t k = 1; k < values.size(); ++k) CHECK(values[k - 1] >= values[k]);
  }

  TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(HermitianMatrix{m}, DomainError);
  }

  TEST_CASE("density operator validation") {
    CHECK_THROWS_AS(DensityOperator(ComplexMatrix::identity(2)), DomainError);
    const double bad[] = {1.2, -0.2};
    CHECK_THROWS_AS(DensityOperator(ComplexMatrix::diagonal(bad)), DomainError);
    const double ok[] = {1.0 + 5e-11, -5e-11};
    const DensityOperator clamped(ComplexMatrix::diagonal(ok));
    for (double v : clamped.spectrum().eigenvalues) CHECK(v >= 0.0);
  }

  TEST_CASE("tensor_power examples and trace") {
    std::mt19937_64 rng(14);
    const ComplexMatrix a = oracle::random_hermitian(rng, 3);
    CHECK(tensor_power(a, 1) == a);
    CHECK(tensor_power(ComplexMatrix::identity(2), 3) == ComplexMatrix::identity(8));
    const double d[] = {0.8, 0.2};
    const ComplexMatrix p = tensor_power(ComplexMatrix::diagonal(d), 2);
    const double want[] = {0.64, 0.16, 0.16, 0.04};
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(std::abs(p(i, j) - Complex(i == j ? want[i] : 0.0)) <= 1e-15);
      }
    }
    for (int n = 1; n <= 4; ++n) {
      const Complex tr = tensor_power(a, n).trace();
      CHECK(std::abs(tr - std::pow(a.trace(), n)) <= 1e-10 * std::max(1.0, std::abs(tr)));
    }
  }

  TEST_CASE("tensor_power refuses oversized results") {
    CHECK_THROWS_AS(tensor_power(ComplexMatrix::identity(2), 13), SizingError);
  }

  TEST_CASE("matrix_function examples") {
    const double d41[] = {4.0, 1.0};
    const auto root = matrix_function(HermitianMatrix::diagonal(d41), MatrixFunction::power(0.5));
    CHECK(std::abs(root(0, 0) - 2.0) <= 1e-14);
    CHECK(std::abs(root(1, 1) - 1.0) <= 1e-14);
    CHECK(std::abs(root(0, 1)) <= 1e-14);

    std::mt19937_64 rng(15);
    const HermitianMatrix h(oracle::random_hermitian(rng, 5));
    CHECK((matrix_function(h, MatrixFunction::power(1.0)).matrix() - h.matrix()).frobenius_norm() <=
          1e-12);

    // power 0 of a rank-2 state is its support projector.
    const auto pure = oracle::random_pure(rng, 3);
    const double w[] = {0.0, 0.5, 0.5};
    const DensityOperator mixed(ComplexMatrix::diagonal(w));
    const auto proj = matrix_function(mixed.hermitian(), MatrixFunction::power(0.0));
    const double want[] = {0.0, 1.0, 1.0};
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(proj(i, i) - want[i]) <= 1e-14);
    const auto proj_pure = matrix_function(pure.hermitian(), MatrixFunction::power(0.0));
    CHECK((proj_pure.matrix() - pure.matrix()).frobenius_norm() <= 1e-10);
  }

  TEST_CASE("log2 of a singular operator raises") {
    const double w[] = {1.0, 0.0};
    CHECK_THROWS_AS(matrix_function(HermitianMatrix::diagonal(w), MatrixFunction::log2()),
                    SingularSupportError);
  }

  TEST_CASE("fidelity examples") {
    std::mt19937_64 rng(16);
    const auto rho = oracle::random_state(rng, 3);
    CHECK(std::abs(fidelity(rho, rho) - 1.0) <= 1e-10);

    const Complex zero[] = {1.0, 0.0};
    const double h = 1.0 / std::sqrt(2.0);
    const Complex plus[] = {h, h};
    CHECK(std::abs(fidelity(DensityOperator::pure(zero), DensityOperator::pure(plus)) - h) <= 1e-10);

    const double f = fidelity(fig2_rho(), fig2_sigma());
    CHECK(std::abs(f - oracle::qubit_fidelity(fig2_rho().matrix(), fig2_sigma().matrix())) <= 1e-12);
    CHECK(std::abs(f - 0.854400) <= 1e-6);
    const double f2 = golden().at("mixed_states").at("fidelity_squared").get<double>();
    CHECK(std::abs(f * f - f2) <= 1e-12);
  }

  TEST_CASE("fidelity matches the qubit closed form on random pairs") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 50; ++rep) {
      const auto r = oracle::random_state(rng, 2), s = oracle::random_state(rng, 2);
      CHECK(std::abs(fidelity(r, s) - oracle::qubit_fidelity(r.matrix(), s.matrix())) <= 1e-10);
    }
  }

  TEST_CASE("fidelity is symmetric and multiplicative") {
    std::mt19937_64 rng(18);
    for (int rep = 0; rep < 20; ++rep) {
      const auto r = oracle::random_state(rng, 2), s = oracle::random_state(rng, 2);
      const auto r2 = oracle::random_state(rng, 3), s2 = oracle::random_state(rng, 3);
      CHECK(std::abs(fidelity(r, s) - fidelity(s, r)) <= 1e-10);
      const DensityOperator rr(kron(r.matrix(), r2.matrix()));
      const DensityOperator ss(kron(s.matrix(), s2.matrix()));
      CHECK(std::abs(fidelity(rr, ss) - fidelity(r, s) * fidelity(r2, s2)) <= 1e-10);
    }
  }

  TEST_CASE("positive_part_trace examples and the trace identity") {
    CHECK(positive_part_trace(-HermitianMatrix(ComplexMatrix::identity(3))) == 0.0);
    const double d[] = {3.0, -1.0};
    CHECK(std::abs(positive_part_trace(HermitianMatrix::diagonal(d)) - 3.0) <= 1e-15);

    // Traceless 2x2: eigenvalues +-sqrt(-det).
    const auto diff = fig2_rho().hermitian() - fig2_sigma().hermitian();
    const auto [e0, e1] = oracle::eig2(diff.matrix());
    CHECK(std::abs(positive_part_trace(diff) - e0) <= 1e-14);
    CHECK(std::abs(e0 + e1) <= 1e-14);

    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 20; ++rep) {
      const HermitianMatrix h(oracle::random_hermitian(rng, 6));
      CHECK(std::abs(positive_part_trace(h) - positive_part_trace(-h) - h.trace()) <= 1e-10);
    }
  }
}
