#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsqht {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// -log2(beta), +infinity when beta is 0. Never returns -0.
double neg_log2(double beta);

/// C(n, k) as a double, rounded; 0 outside 0 <= k <= n.
double binomial(int n, int k);

/// Throw DomainError unless 0 <= x <= 1.
void require_probability(double x, const char* name);
/// Throw DomainError unless 0 < x < 1.
void require_open_probability(double x, const char* name);

/// Golden-section search for the maximum of a unimodal f on [lo, hi], run
/// until the bracket is narrower than max(abs_width, rel_width * |hi|).
/// Every evaluation updates (best_value, best_x) when it improves on it, so
/// the result is never worse than what the caller passed in.
template <class F>
void golden_maximize(F&& f, double lo, double hi, double abs_width, double rel_width,
                     double& best_value, double& best_x, int& evaluations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto eval = [&](double x) {
    const double v = f(x);
    ++evaluations;
    if (v > best_value) {
      best_value = v;
      best_x = x;
    }
    return v;
  };
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = eval(c);
  double fd = eval(d);
  while (hi - lo > std::max(abs_width, rel_width * std::abs(hi))) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = eval(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = eval(d);
    }
  }
}

}  // namespace nsqht
