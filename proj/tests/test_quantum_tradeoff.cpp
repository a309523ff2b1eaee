#include <doctest.h>

#include <cmath>
#include <random>

#include "golden.hpp"
#include "nsqht/bench.hpp"
#include "nsqht/converse_bounds.hpp"
#include "nsqht/error.hpp"
#include "nsqht/ns_classical.hpp"
#include "nsqht/quantum_tradeoff.hpp"
#include "oracles.hpp"

using namespace nsqht;

namespace {

const bench::StatePair& fig2() {
  static const bench::StatePair p = bench::make_preset("fig2");
  return p;
}

DensityOperator ket(Complex a, Complex b) {
  const Complex psi[] = {a, b};
  return DensityOperator::pure(psi);
}

}  // namespace

TEST_SUITE("quantum-tradeoff") {
  TEST_CASE("helstrom_projector examples") {
    const double r[] = {0.8, 0.2}, s[] = {0.2, 0.8};
    const auto pi = helstrom_projector(oracle::diagonal_state(r), oracle::diagonal_state(s), 1.0);
    CHECK(std::abs(pi.hermitian()(0, 0) - 1.0) <= 1e-14);
    CHECK(std::abs(pi.hermitian()(1, 1)) <= 1e-14);

    // t = 0: kernel of sigma.
    const double s0[] = {1.0, 0.0};
    const auto k = helstrom_projector(oracle::diagonal_state(r), oracle::diagonal_state(s0), 0.0);
    CHECK(std::abs(k.hermitian()(0, 0)) <= 1e-14);
    CHECK(std::abs(k.hermitian()(1, 1) - 1.0) <= 1e-14);

    // Mixed pair, t = 1: rank one, positive eigenvector of rho - sigma.
    const auto h = helstrom_projector(fig2().rho, fig2().sigma, 1.0);
    CHECK(std::abs(h.hermitian().trace() - 1.0) <= 1e-12);
    const auto diff = fig2().rho.hermitian() - fig2().sigma.hermitian();
    const auto [e0, e1] = oracle::eig2(diff.matrix());
    CHECK(std::abs(trace_product(h.hermitian(), diff) - e0) <= 1e-12);
  }

  TEST_CASE("test_errors examples") {
    const auto& p = fig2();
    const TestOperator zero(HermitianMatrix(ComplexMatrix(2)));
    const TestOperator one(HermitianMatrix(ComplexMatrix::identity(2)));
    const auto z = test_errors(zero, p.rho, p.sigma);
    CHECK(z.alpha == 0.0);
    CHECK(z.beta == 1.0);
    const auto o = test_errors(one, p.rho, p.sigma);
    CHECK(std::abs(o.alpha - 1.0) <= 1e-15);
    CHECK(std::abs(o.beta) <= 1e-15);

    // Accepting H1 on {rho < sigma} gives the symmetric Helstrom point.
    const auto h = helstrom_projector(p.rho, p.sigma, 1.0).complement();
    const auto pt = test_errors(h, p.rho, p.sigma);
    const double half_norm = positive_part_trace(p.rho.hermitian() - p.sigma.hermitian());
    CHECK(std::abs(pt.alpha + pt.beta - (1.0 - half_norm)) <= 1e-12);
  }

  TEST_CASE("test operators are validated") {
    const double bad[] = {1.5, 0.0};
    CHECK_THROWS_AS(TestOperator(HermitianMatrix::diagonal(bad)), DomainError);
  }

  TEST_CASE("identical and orthogonal states") {
    std::mt19937_64 rng(31);
    const auto r = oracle::random_state(rng, 3);
    for (double a : {0.0, 0.3, 1.0}) CHECK(std::abs(beta_alpha_quantum(r, r, a) - (1 - a)) <= 1e-10);
    const auto z = ket(1.0, 0.0), o = ket(0.0, 1.0);
    for (double a : {0.0, 0.2, 0.7}) CHECK(beta_alpha_quantum(z, o, a) <= 1e-12);
    for (double e : {0.1, 0.5, 0.9}) {
      CHECK(std::abs(dh_quantum(r, r, 1, e) + std::log2(1 - e)) <= 1e-9);
    }
    CHECK(dh_quantum(z, o, 3, 0.1) == kInfinity);
  }

  TEST_CASE("pure states follow the exact pure-state curve") {
    const double h = 1.0 / std::sqrt(2.0);
    const auto z = ket(1.0, 0.0), plus = ket(h, h);
    const double a = 0.5;
    for (int k = 1; k < 20; ++k) {
      const auto pt = lemma2_curve(a, k / 20.0);
      CHECK(std::abs(beta_alpha_quantum(z, plus, pt.alpha) - pt.beta) <= 1e-9);
    }
    std::mt19937_64 rng(32);
    for (int rep = 0; rep < 10; ++rep) {
      const auto x = oracle::random_pure(rng, 3), y = oracle::random_pure(rng, 3);
      const double overlap = trace_product(x.hermitian(), y.hermitian());
      for (double p : {0.1, 0.4, 0.8}) {
        const auto pt = lemma2_curve(overlap, p);
        CHECK(std::abs(beta_alpha_quantum(x, y, pt.alpha) - pt.beta) <= 1e-9);
      }
    }
  }

  TEST_CASE("commuting states reduce to the classical value") {
    std::mt19937_64 rng(33);
    for (int rep = 0; rep < 10; ++rep) {
      const auto p = oracle::random_distribution(rng, 3), q = oracle::random_distribution(rng, 3);
      const auto r = oracle::diagonal_state(p), s = oracle::diagonal_state(q);
      for (int n : {1, 2, 3}) {
        for (double e : {0.1, 0.5, 0.8}) {
          const double want = -std::log2(oracle::np_fill(oracle::product(p, n), oracle::product(q, n), e));
          CHECK(std::abs(dh_quantum(r, s, n, e) - want) <= 1e-9 * std::max(1.0, want));
        }
      }
    }
  }

  TEST_CASE("g(t) is concave along random chords") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(-6.0, 6.0), al(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
      const TensorPowerPair pair(oracle::random_state(rng, 2), oracle::random_state(rng, 2), 1);
      const double alpha = al(rng);
      for (int k = 0; k < 100; ++k) {
        double t[3] = {std::exp2(u(rng)), std::exp2(u(rng)), std::exp2(u(rng))};
        std::sort(t, t + 3);
        if (t[2] - t[0] < 1e-12) continue;
        const double w = (t[1] - t[0]) / (t[2] - t[0]);
        const double chord = (1 - w) * tradeoff_objective(pair, alpha, t[0]) +
                             w * tradeoff_objective(pair, alpha, t[2]);
        CHECK(tradeoff_objective(pair, alpha, t[1]) >= chord - 1e-10);
      }
    }
  }

  TEST_CASE("every evaluated t gives a lower bound on beta") {
    std::mt19937_64 rng(35);
    for (int rep = 0; rep < 10; ++rep) {
      const auto r = oracle::random_state(rng, 2), s = oracle::random_state(rng, 2);
      const TensorPowerPair pair(r, s, 1);
      for (double alpha : {0.05, 0.3, 0.6}) {
        const double beta = beta_alpha_quantum(r, s, alpha);
        for (int k = -20; k <= 20; ++k) {
          const double t = std::exp2(k);
          // Pi_t = {t rho < sigma} minimizes beta(Pi) + t alpha(Pi).
          const auto pt = test_errors(helstrom_projector(r, s, t).complement(), r, s);
          CHECK(pt.beta + t * (pt.alpha - alpha) <= beta + 1e-10);
          CHECK(tradeoff_objective(pair, alpha, t) <= beta + 1e-10);
        }
      }
    }
  }

  TEST_CASE("optimal_test realizes beta_alpha") {
    std::mt19937_64 rng(36);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t d = 2 + rep % 7;
      const auto r = oracle::random_state(rng, d), s = oracle::random_state(rng, d);
      for (double alpha : {0.05, 0.25, 0.5, 0.9}) {
        const auto pt = test_errors(optimal_test(r, s, alpha), r, s);
        CHECK(pt.alpha <= alpha + 1e-10);
        CHECK(std::abs(pt.beta - beta_alpha_quantum(r, s, alpha)) <= 1e-8);
      }
    }
  }

  TEST_CASE("beta is non-increasing in alpha and vanishes at alpha = 1") {
    const TensorPowerPair pair(fig2().rho, fig2().sigma, 3);
    std::vector<double> alphas;
    for (int k = 0; k <= 40; ++k) alphas.push_back(k / 40.0);
    const auto sols = solve_tradeoff(pair, alphas);
    for (std::size_t k = 1; k < sols.size(); ++k) CHECK(sols[k].beta <= sols[k - 1].beta + 1e-10);
    CHECK(sols.back().beta <= 1e-12);
  }

  TEST_CASE("qubit Bloch-grid envelope of projective tests") {
    std::mt19937_64 rng(37);
    const auto r = oracle::random_state(rng, 2), s = oracle::random_state(rng, 2);
    const auto hull = oracle::bloch_tests(r, s, 400);
    for (int k = 0; k <= 20; ++k) {
      const double alpha = k / 20.0;
      CHECK(std::abs(beta_alpha_quantum(r, s, alpha) - hull(alpha)) <= 2e-4);
    }
  }

  TEST_CASE("fig2 exact curve at n = 5 matches the golden values") {
    const auto& g = golden().at("fig2_exact_per_copy");
    const auto eps = g.at("epsilon").get<std::vector<double>>();
    const auto dh = g.at("dh").get<std::vector<double>>();
    const TensorPowerPair pair(fig2().rho, fig2().sigma, 5);
    for (std::size_t k = 0; k < eps.size(); ++k) {
      CHECK(std::abs(dh_quantum(pair, eps[k]) / 5 - dh[k]) <= 1e-8);
    }
    const TensorPowerPair dense(fig2().rho, fig2().sigma, 5, TensorPath::kDense);
    CHECK(std::abs(dh_quantum(dense, 0.5) / 5 - dh[9]) <= 1e-8);
  }

  TEST_CASE("information-spectrum quantile") {
    std::mt19937_64 rng(38);
    const auto r = oracle::random_state(rng, 3);
    for (double e : {0.1, 0.5, 0.9}) CHECK(std::abs(info_spectrum_Ds(r, r, 1, e)) <= 1e-6);

    const double p[] = {0.5, 0.3, 0.2}, q[] = {0.2, 0.3, 0.5};
    const auto rd = oracle::diagonal_state({p, p + 3}), sd = oracle::diagonal_state({q, q + 3});
    const NSPair ns = ns_map(rd, sd);
    for (int n : {1, 3}) {
      const auto atoms = atoms_product(ns, n);
      for (double e : {0.15, 0.45, 0.7}) {
        const double want = info_spectrum_Ds_classical(atoms, e);
        CHECK(std::abs(info_spectrum_Ds(rd, sd, n, e) - want) <= 2e-6);
      }
    }

    const double want = golden().at("info_spectrum_Ds_n5_eps0.3").get<double>();
    CHECK(std::abs(info_spectrum_Ds(fig2().rho, fig2().sigma, 5, 0.3) - want) <= 2e-6);
  }

  TEST_CASE("argument validation") {
    CHECK_THROWS_AS(beta_alpha_quantum(fig2().rho, fig2().sigma, 1.5), DomainError);
    CHECK_THROWS_AS(dh_quantum(fig2().rho, fig2().sigma, 2, 0.0), DomainError);
    CHECK_THROWS_AS(helstrom_projector(fig2().rho, fig2().sigma, -1.0), DomainError);
  }
}
