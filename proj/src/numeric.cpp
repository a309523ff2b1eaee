#include "nsqht/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsqht/error.hpp"

namespace nsqht {

double neg_log2(double beta) {
  if (!(beta > 0.0)) return kInfinity;
  return -std::log2(beta) + 0.0;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return std::round(out);
}

void require_probability(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << name << " must lie in [0, 1], got " << x;
    throw DomainError(os.str());
  }
}

void require_open_probability(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream os;
    os << name << " must lie in (0, 1), got " << x;
    throw DomainError(os.str());
  }
}

}  // namespace nsqht
