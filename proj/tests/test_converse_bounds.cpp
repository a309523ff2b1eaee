#include <doctest.h>

#include <cmath>
#include <random>

#include "golden.hpp"
#include "nsqht/bench.hpp"
#include "nsqht/converse_bounds.hpp"
#include "nsqht/error.hpp"
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

DensityOperator zero() { return ket(1.0, 0.0); }
DensityOperator plus() {
  const double h = 1.0 / std::sqrt(2.0);
  return ket(h, h);
}

}  // namespace

TEST_SUITE("converse-bounds") {
  TEST_CASE("theorem1_beta_bound examples") {
    CHECK(theorem1_beta_bound(fig2().rho, fig2().sigma, 2, 0.3, 0.0) == 0.0);

    // Pure |0>, |+>, n = 1, s = p: s p a at alpha = (1 - s)(1 - p) a.
    const double a = 0.5;
    for (double p : {0.2, 0.5, 0.7}) {
      const double alpha = (1 - p) * (1 - p) * a;
      CHECK(std::abs(theorem1_beta_bound(zero(), plus(), 1, alpha, p) - p * p * a) <= 1e-14);
    }

    std::mt19937_64 rng(51);
    const auto r = oracle::random_state(rng, 2);
    for (double s : {0.1, 0.5, 0.9}) {
      for (double alpha : {0.0, 0.05, 0.1}) {
        const double b = theorem1_beta_bound(r, r, 1, alpha, s);
        CHECK(std::abs(b - s * (1 - alpha / (1 - s))) <= 1e-12);
        CHECK(b <= 1 - alpha + 1e-12);
      }
    }
  }

  TEST_CASE("theorem1_beta_bound rejects invalid parameters") {
    CHECK_THROWS_AS(theorem1_beta_bound(fig2().rho, fig2().sigma, 1, 0.5, 0.6), DomainError);
    CHECK_THROWS_AS(theorem1_beta_bound(fig2().rho, fig2().sigma, 1, 0.1, 1.0), DomainError);
    CHECK_THROWS_AS(theorem1_beta_bound(fig2().rho, fig2().sigma, 1, 0.1, -0.1), DomainError);
  }

  TEST_CASE("s-weighted classical bound holds on random tuples") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
      const std::size_t d = 2 + rep % 2;
      const auto r = oracle::random_state(rng, d), s = oracle::random_state(rng, d);
      const int n = 1 + rep % 2;
      const double sv = 0.99 * u(rng);
      const double alpha = (1 - sv) * u(rng);
      const double beta = beta_alpha_quantum(tensor_power(r, n), tensor_power(s, n), alpha);
      CHECK(beta >= theorem1_beta_bound(r, s, n, alpha, sv) - 1e-9);
    }
  }

  TEST_CASE("envelope examples") {
    const ConverseProblem problem(fig2().rho, fig2().sigma, 5);
    const auto one = theorem1_envelope(problem, 1.0);
    CHECK(one.beta == 0.0);
    const auto near = theorem1_envelope(problem, 1.0 - 1e-9);
    CHECK(near.beta <= 1e-8);

    // Pure states n = 5 at alpha_q(p = 1/2): within O(a) relative error.
    const ConverseProblem pure(zero(), plus(), 5);
    const double a = std::pow(0.5, 5);
    const auto pt = lemma2_curve(a, 0.5);
    const auto env = theorem1_envelope(pure, pt.alpha);
    CHECK(env.beta <= pt.beta + 1e-12);
    CHECK(env.beta >= pt.beta * (1 - 5 * a));

    for (int k = 1; k <= 19; ++k) CHECK(theorem1_envelope(problem, 0.05 * k).beta > 0.0);
  }

  TEST_CASE("envelope dominates every grid s and the symmetric bound") {
    const ConverseProblem problem(fig2().rho, fig2().sigma, 4);
    for (double alpha : {0.05, 0.2, 0.4, 0.6, 0.8}) {
      const auto env = theorem1_envelope(problem, alpha);
      const double top = std::min(1.0 - alpha, 1.0 - 1e-12);
      for (int k = 0; k <= 100; ++k) {
        const double s = top * k / 100;
        CHECK(env.beta >= theorem1_beta_bound(problem, alpha, s) - 1e-15);
      }
      CHECK(env.beta >= ns_symmetric_bound(problem, alpha) - 1e-15);
    }
  }

  TEST_CASE("envelope s-discretization error is below 1e-4 bits on fig2") {
    const ConverseProblem problem(fig2().rho, fig2().sigma, 5);
    for (double eps : {0.1, 0.5, 0.9}) {
      const auto env = theorem1_envelope(problem, eps);
      double best = 0.0;
      for (int k = 0; k < 10000; ++k) {
        best = std::max(best, theorem1_beta_bound(problem, eps, (1 - eps) * k / 10000.0));
      }
      CHECK(neg_log2(env.beta) <= neg_log2(best) + 1e-12);
      CHECK(neg_log2(best) - neg_log2(env.beta) <= 1e-4);
    }
  }

  TEST_CASE("ns_symmetric_bound examples") {
    const ConverseProblem problem(fig2().rho, fig2().sigma, 5);
    CHECK(ns_symmetric_bound(problem, 0.6) == 0.0);
    CHECK(dh_bound(problem, BoundName::kNsSymmetric, 0.6).dh_upper == kInfinity);
    const double want = golden().at("ns_symmetric_n5_alpha0.25").get<double>();
    CHECK(std::abs(ns_symmetric_bound(problem, 0.25) - want) <= 1e-12);

    std::mt19937_64 rng(53);
    const auto r = oracle::random_state(rng, 2);
    const ConverseProblem same(r, r, 3);
    CHECK(std::abs(ns_symmetric_bound(same, 0.0) - 0.5) <= 1e-12);
  }

  TEST_CASE("lemma2_curve examples") {
    for (double a : {0.03, 0.5, 0.9}) {
      const auto p0 = lemma2_curve(a, 0.0), p1 = lemma2_curve(a, 1.0);
      CHECK(std::abs(p0.alpha - a) <= 1e-15);
      CHECK(std::abs(p0.beta) <= 1e-15);
      CHECK(std::abs(p1.alpha) <= 1e-15);
      CHECK(std::abs(p1.beta - a) <= 1e-15);
      const auto h = lemma2_curve(a, 0.5);
      const double want = (1 - std::sqrt(1 - a)) / 2;
      CHECK(std::abs(h.alpha - want) <= 1e-15);
      CHECK(std::abs(h.beta - want) <= 1e-15);
    }
    const double a = 1e-6;
    for (double p : {0.1, 0.5, 0.9}) {
      const auto pt = lemma2_curve(a, p);
      CHECK(std::abs(pt.alpha - (1 - p) * (1 - p) * a) <= 1e-3 * a);
      CHECK(std::abs(pt.beta - p * p * a) <= 1e-3 * a);
    }
    CHECK_THROWS_AS(lemma2_curve(1.0, 0.5), DomainError);
    CHECK_THROWS_AS(lemma2_curve(0.5, 1.5), DomainError);
  }

  TEST_CASE("fidelity bound examples") {
    const double f = fidelity(fig2().rho, fig2().sigma);
    const double a = std::pow(f, 10);
    CHECK(fidelity_bound(fig2().rho, fig2().sigma, 5, a + 1e-9).beta == 0.0);
    CHECK(fidelity_bound(fig2().rho, fig2().sigma, 5, a - 1e-3).beta > 0.0);
    CHECK(fidelity_bound(fig2().rho, fig2().sigma, 5, 0.9).beta == 0.0);
    std::mt19937_64 rng(54);
    const auto r = oracle::random_state(rng, 2);
    for (double alpha : {0.0, 0.3, 0.8}) {
      CHECK(std::abs(fidelity_bound(r, r, 3, alpha).beta - (1 - alpha)) <= 1e-12);
    }
  }

  TEST_CASE("fidelity bound is tight for pure states") {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 8; ++rep) {
      const auto x = oracle::random_pure(rng, 2), y = oracle::random_pure(rng, 2);
      for (int n = 1; n <= 4; ++n) {
        const auto xn = tensor_power(x, n), yn = tensor_power(y, n);
        double worst = 0.0;
        for (int k = 0; k <= 20; ++k) {
          const double alpha = k / 20.0;
          worst = std::max(worst, std::abs(fidelity_bound(x, y, n, alpha).beta -
                                           beta_alpha_quantum(xn, yn, alpha)));
        }
        CHECK(worst <= 1e-8);
      }
    }
  }

  TEST_CASE("hoeffding examples") {
    const auto ns = ns_map(fig2().rho, fig2().sigma);
    const auto m = moments(ns);
    CHECK(std::abs(hoeffding_rhs(ns, 0.0).value - m.D) <= 1e-6);
    std::mt19937_64 rng(56);
    const auto r = oracle::random_state(rng, 2);
    const auto same = hoeffding_rhs(r, r, 0.3);
    CHECK(std::abs(same.value) <= 1e-12);
    CHECK(same.s_star == 0.0);

    const double want = golden().at("hoeffding_r0.1").get<double>();
    CHECK(std::abs(hoeffding_rhs(ns, 0.1).value - want) <= 1e-7);
    for (double rr : {0.05, 0.1, 0.5, 1.0}) {
      const double scan = oracle::hoeffding_scan(ns.p, ns.q, rr, 100000);
      const double got = hoeffding_rhs(ns, rr).value;
      CHECK(got >= scan - 1e-9);
      CHECK(got - scan <= 1e-6);
      CHECK(std::abs(hoeffding_rhs_quantum(fig2().rho, fig2().sigma, rr).value - got) <= 1e-8);
    }
  }

  TEST_CASE("hoeffding rejects mismatched supports") {
    const double one[] = {1.0, 0.0}, half[] = {0.5, 0.5};
    const auto r = oracle::diagonal_state({half, half + 2}), s = oracle::diagonal_state({one, one + 2});
    CHECK_THROWS_AS(hoeffding_rhs(r, s, 0.1), SingularSupportError);
    CHECK_THROWS_AS(hoeffding_rhs_quantum(r, s, 0.1), SingularSupportError);
  }

  TEST_CASE("info-spectrum bound examples") {
    const ConverseProblem problem(fig2().rho, fig2().sigma, 5);
    const auto r = info_spectrum_bound(problem, 0.5);
    const double want = golden().at("info_spectrum_bound_n5_eps0.5").get<double>();
    CHECK(std::abs(r.dh - want) <= 2e-6);
    CHECK(info_spectrum_bound(problem, 1.0 - 1e-15).dh > 30.0);

    const double p[] = {0.6, 0.3, 0.1}, q[] = {0.2, 0.3, 0.5};
    const ConverseProblem commuting(oracle::diagonal_state({p, p + 3}),
                                    oracle::diagonal_state({q, q + 3}), 3);
    for (double eps : {0.1, 0.4, 0.7}) {
      CHECK(std::abs(info_spectrum_bound(commuting, eps).dh -
                     info_spectrum_bound_classical(commuting.atoms(), eps).dh) <= 2e-6);
    }
  }

  TEST_CASE("every bound is valid on fig2 for n = 1..5") {
    for (int n = 1; n <= 5; ++n) {
      const ConverseProblem problem(fig2().rho, fig2().sigma, n);
      for (int k = 1; k <= 19; ++k) {
        const double eps = 0.05 * k;
        const double exact = dh_bound(problem, BoundName::kExact, eps).dh_upper;
        for (auto b : {BoundName::kTheorem1Envelope, BoundName::kNsSymmetric, BoundName::kFidelity,
                       BoundName::kInfoSpectrum}) {
          CHECK(dh_bound(problem, b, eps).dh_upper >= exact - 1e-8);
        }
        for (double s : {0.1, 0.5, 0.9}) {
          CHECK(dh_bound(problem, BoundName::kTheorem1, eps, s).dh_upper >= exact - 1e-8);
        }
      }
    }
  }

  TEST_CASE("bounds are non-increasing in alpha") {
    const ConverseProblem problem(fig2().rho, fig2().sigma, 3);
    double prev_env = 1.0, prev_ns = 1.0, prev_f = 1.0;
    for (int k = 0; k <= 40; ++k) {
      const double alpha = k / 40.0;
      const double env = theorem1_envelope(problem, alpha).beta;
      const double ns = ns_symmetric_bound(problem, alpha);
      const double f = fidelity_bound(fig2().rho, fig2().sigma, 3, alpha).beta;
      CHECK(env <= prev_env + 1e-10);
      CHECK(ns <= prev_ns + 1e-10);
      CHECK(f <= prev_f + 1e-10);
      prev_env = env;
      prev_ns = ns;
      prev_f = f;
    }
  }

  TEST_CASE("s-weighted bound with s = p tracks pure states at n = 10") {
    const ConverseProblem problem(zero(), plus(), 10);
    const double a = std::pow(0.5, 10);
    for (int k = 1; k <= 9; ++k) {
      const double p = k / 10.0;
      const auto pt = lemma2_curve(a, p);
      const double bound = theorem1_beta_bound(problem, pt.alpha, p);
      CHECK(bound / pt.beta >= 1 - 5 * a);
    }
  }

  TEST_CASE("bound names round trip") {
    for (auto b : {BoundName::kExact, BoundName::kTheorem1, BoundName::kTheorem1Envelope,
                   BoundName::kNsSymmetric, BoundName::kFidelity, BoundName::kInfoSpectrum}) {
      CHECK(parse_bound_name(to_string(b)) == b);
    }
    CHECK_THROWS_AS(parse_bound_name("chernoff"), ParseError);
  }
}
