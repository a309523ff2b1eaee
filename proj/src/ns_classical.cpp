#include "nsqht/ns_classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsqht/error.hpp"
#include "nsqht/kahan.hpp"
#include "nsqht/numeric.hpp"

namespace nsqht {

namespace {

constexpr double kMergeTolerance = 1e-12;
constexpr int kVariationalGridPoints = 2048;

struct Cell {
  double p;
  double q;
  double llr;
};

double cell_llr(double p, double q) {
  if (p == 0.0) return -kInfinity;
  if (q == 0.0) return kInfinity;
  return std::log2(p / q);
}

bool same_llr(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= kMergeTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// Sort ascending by llr and merge runs that agree within the tolerance. Each
// comparison is against the previous atom in the run, so runs can chain.
std::vector<LLRAtom> sort_and_merge(std::vector<LLRAtom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const LLRAtom& a, const LLRAtom& b) { return a.llr < b.llr; });
  std::vector<LLRAtom> out;
  out.reserve(atoms.size());
  double last_llr = 0.0;
  for (const auto& a : atoms) {
    if (!out.empty() && same_llr(last_llr, a.llr)) {
      auto& m = out.back();
      m.p_mass += a.p_mass;
      m.q_mass += a.q_mass;
      m.multiplicity += a.multiplicity;
    } else {
      out.push_back(a);
    }
    last_llr = a.llr;
  }
  for (auto& m : out) {
    if (std::isfinite(m.llr) && m.p_mass > 0.0 && m.q_mass > 0.0) {
      m.llr = std::log2(m.p_mass / m.q_mass);
    }
  }
  return out;
}

std::vector<LLRAtom> sorted_copy(std::span<const LLRAtom> atoms) {
  std::vector<LLRAtom> out(atoms.begin(), atoms.end());
  if (!std::is_sorted(out.begin(), out.end(),
                      [](const LLRAtom& a, const LLRAtom& b) { return a.llr < b.llr; })) {
    std::stable_sort(out.begin(), out.end(),
                     [](const LLRAtom& a, const LLRAtom& b) { return a.llr < b.llr; });
  }
  return out;
}

class TypeClassEnumerator {
 public:
  TypeClassEnumerator(std::vector<Cell> cells, int n) : cells_(std::move(cells)), n_(n) {
    const std::size_t k = cells_.size();
    p_pow_.assign(k, std::vector<double>(n + 1));
    q_pow_.assign(k, std::vector<double>(n + 1));
    for (std::size_t i = 0; i < k; ++i) {
      for (int c = 0; c <= n; ++c) {
        p_pow_[i][c] = std::pow(cells_[i].p, c);
        q_pow_[i][c] = std::pow(cells_[i].q, c);
      }
    }
  }

  std::vector<LLRAtom> run() {
    out_.clear();
    if (!cells_.empty()) visit(0, n_, 1.0, 1.0, 1.0, 0.0, false, false);
    return std::move(out_);
  }

 private:
  void visit(std::size_t i, int remaining, double count, double p, double q, double llr,
             bool p_zero, bool q_zero) {
    if (i + 1 == cells_.size()) {
      const int c = remaining;
      if (c > 0) {
        p_zero = p_zero || cells_[i].p == 0.0;
        q_zero = q_zero || cells_[i].q == 0.0;
        if (!p_zero && !q_zero) llr += c * cells_[i].llr;
      }
      if (p_zero && q_zero) return;
      LLRAtom atom;
      atom.multiplicity = count;
      atom.p_mass = count * p * p_pow_[i][c];
      atom.q_mass = count * q * q_pow_[i][c];
      atom.llr = p_zero ? -kInfinity : (q_zero ? kInfinity : llr);
      if (atom.p_mass == 0.0 && atom.q_mass == 0.0) return;
      out_.push_back(atom);
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      const bool pz = p_zero || (c > 0 && cells_[i].p == 0.0);
      const bool qz = q_zero || (c > 0 && cells_[i].q == 0.0);
      if (pz && qz) continue;
      const double next_llr = (c > 0 && !pz && !qz) ? llr + c * cells_[i].llr : llr;
      visit(i + 1, remaining - c, count * binomial(remaining, c), p * p_pow_[i][c],
            q * q_pow_[i][c], next_llr, pz, qz);
    }
  }

  std::vector<Cell> cells_;
  int n_;
  std::vector<std::vector<double>> p_pow_;
  std::vector<std::vector<double>> q_pow_;
  std::vector<LLRAtom> out_;
};

}  // namespace

NSPair ns_map(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DomainError("ns_map: dimension mismatch");
  const std::size_t d = rho.dim();
  const auto& r = rho.spectrum();
  const auto& s = sigma.spectrum();
  NSPair out;
  out.dim = d;
  out.p.assign(d * d, 0.0);
  out.q.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Complex ip{0.0, 0.0};
      for (std::size_t k = 0; k < d; ++k) ip += std::conj(r.eigenvectors(k, i)) * s.eigenvectors(k, j);
      const double overlap = std::norm(ip);
      if (overlap < kZeroOverlap) continue;
      const double lambda = r.eigenvalues[i];
      const double mu = s.eigenvalues[j];
      if (lambda > kSupportCutoff) out.p[i * d + j] = lambda * overlap;
      if (mu > kSupportCutoff) out.q[i * d + j] = mu * overlap;
    }
  }
  return out;
}

std::vector<LLRAtom> atoms_product(std::span<const double> p, std::span<const double> q, int n) {
  if (p.size() != q.size()) throw DomainError("atoms_product: P and Q lengths differ");
  if (n < 1) throw DomainError("atoms_product: n must be a positive integer");
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw DomainError("atoms_product: negative probability");
    if (p[i] > 0.0 || q[i] > 0.0) cells.push_back(Cell{p[i], q[i], cell_llr(p[i], q[i])});
  }
  if (cells.size() > kMaxBaseCells) {
    std::ostringstream os;
    os << "atoms_product: " << cells.size() << " positive base cells exceed the limit of "
       << kMaxBaseCells;
    throw SizingError(os.str());
  }
  const int k = static_cast<int>(cells.size());
  if (k > 0) {
    // C(n + k - 1, k - 1) in log space to avoid overflow before the check.
    const double log_count = std::lgamma(n + k) - std::lgamma(n + 1.0) - std::lgamma(k);
    if (log_count > std::log(kMaxTypeClasses) + 1e-9) {
      std::ostringstream os;
      os << "atoms_product: about " << std::exp(log_count) << " type classes for n = " << n
         << " over " << k << " cells exceed the limit of " << kMaxTypeClasses;
      throw SizingError(os.str());
    }
  }
  return sort_and_merge(TypeClassEnumerator(std::move(cells), n).run());
}

std::vector<LLRAtom> atoms_product(const NSPair& ns, int n) { return atoms_product(ns.p, ns.q, n); }

double beta_alpha_classical(std::span<const LLRAtom> atoms, double alpha) {
  require_probability(alpha, "alpha");
  const auto sorted = sorted_copy(atoms);
  double budget = alpha;
  KahanSum accepted_q;
  KahanSum total_q;
  for (const auto& a : sorted) {
    total_q += a.q_mass;
    if (a.p_mass <= budget) {
      accepted_q += a.q_mass;
      budget -= a.p_mass;
    } else if (budget > 0.0) {
      accepted_q += a.q_mass * (budget / a.p_mass);
      budget = 0.0;
    }
  }
  return std::clamp(total_q.value() - accepted_q.value(), 0.0, 1.0);
}

double beta_alpha_classical_variational(std::span<const LLRAtom> atoms, double alpha) {
  require_probability(alpha, "alpha");
  std::vector<double> ts{0.0};
  double r_min = kInfinity, r_max = 0.0;
  for (const auto& a : atoms) {
    if (a.p_mass > 0.0 && a.q_mass > 0.0) {
      const double r = a.q_mass / a.p_mass;
      ts.push_back(r);
      r_min = std::min(r_min, r);
      r_max = std::max(r_max, r);
    }
  }
  if (r_max > 0.0 && r_min < r_max) {
    const double lo = std::log(r_min), hi = std::log(r_max);
    for (int k = 0; k < kVariationalGridPoints; ++k) {
      ts.push_back(std::exp(lo + (hi - lo) * k / (kVariationalGridPoints - 1)));
    }
  }
  double best = -kInfinity;
  for (double t : ts) {
    KahanSum accepted_q, rejected_p;
    for (const auto& a : atoms) {
      if (t * a.p_mass >= a.q_mass) {
        accepted_q += a.q_mass;
      } else {
        rejected_p += a.p_mass;
      }
    }
    best = std::max(best, accepted_q.value() + t * (rejected_p.value() - alpha));
  }
  return std::clamp(best, 0.0, 1.0);
}

MomentTriple moments(const NSPair& ns) {
  MomentTriple out;
  KahanSum d;
  for (std::size_t c = 0; c < ns.p.size(); ++c) {
    if (ns.p[c] <= 0.0) continue;
    if (ns.q[c] <= 0.0) {
      out.D = kInfinity;
      return out;
    }
    d += ns.p[c] * std::log2(ns.p[c] / ns.q[c]);
  }
  out.D = std::max(0.0, d.value());
  KahanSum v, t;
  for (std::size_t c = 0; c < ns.p.size(); ++c) {
    if (ns.p[c] <= 0.0) continue;
    const double dev = std::abs(std::log2(ns.p[c] / ns.q[c]) - out.D);
    v += ns.p[c] * dev * dev;
    t += ns.p[c] * dev * dev * dev;
  }
  out.V = v.value();
  out.T = t.value();
  return out;
}

double renyi_overlap(const NSPair& ns, double s) {
  if (!std::isfinite(s)) throw DomainError("renyi_overlap: s must be finite");
  const bool inside = s >= 0.0 && s <= 1.0;
  KahanSum acc;
  for (std::size_t c = 0; c < ns.p.size(); ++c) {
    const double p = ns.p[c], q = ns.q[c];
    if (p == 0.0 && q == 0.0) continue;
    if (p == 0.0 || q == 0.0) {
      if (!inside) {
        std::ostringstream os;
        os << "renyi_overlap: s = " << s << " lies outside [0, 1] and the supports differ";
        throw DomainError(os.str());
      }
      continue;
    }
    acc += std::pow(p, s) * std::pow(q, 1.0 - s);
  }
  return acc.value();
}

double dh_classical(const NSPair& ns, int n, double epsilon) {
  require_open_probability(epsilon, "epsilon");
  return neg_log2(beta_alpha_classical(atoms_product(ns, n), epsilon));
}

double info_spectrum_Ds_classical(std::span<const LLRAtom> atoms, double epsilon) {
  require_open_probability(epsilon, "epsilon");
  const auto sorted = sorted_copy(atoms);
  KahanSum mass;
  for (const auto& a : sorted) {
    mass += a.p_mass;
    if (mass.value() > epsilon) return a.llr;
  }
  return kInfinity;
}

}  // namespace nsqht
