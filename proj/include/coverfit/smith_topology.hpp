#pragma once

#include "coverfit/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Finite bookkeeping around the Smith index of (SO(2n), antipodal map):
// Z2 Poincare polynomials, the 2-adic bounds on the index, and the facet count
// up to which the strip argument closes.
namespace coverfit::topology {

using Poly = std::vector<std::int64_t>;

struct BettiSequence {
  Poly coefficients;
  std::string label;

  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto c : coefficients) s += c;
    return s;
  }

  bool palindromic() const {
    const std::size_t n = coefficients.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
      if (coefficients[i] != coefficients[n - 1 - i]) return false;
    }
    return true;
  }
};

struct IndexBounds {
  int n_half = 0;
  std::int64_t s = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  std::optional<std::int64_t> exact;
};

inline Poly poly_multiply(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

inline void require_even(std::int64_t two_n, const char* what) {
  if (two_n < 2 || two_n % 2 != 0) throw InputError(std::string(what) + ": even dimensions only (got " + std::to_string(two_n) + ")");
}

// The power of two itself, not its exponent: 12 -> 4.
inline std::int64_t largest_power_two(std::int64_t two_n) {
  require_even(two_n, "largest_power_two");
  return two_n & -two_n;
}

inline bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

inline IndexBounds index_bounds(std::int64_t two_n) {
  IndexBounds b;
  b.s = largest_power_two(two_n);
  b.n_half = static_cast<int>(two_n / 2);
  b.lower = b.s - 1;
  b.upper = two_n - 1;
  if (is_power_of_two(two_n / 2)) b.exact = two_n - 1;
  return b;
}

inline void require_desk_range(std::int64_t two_n, const char* what) {
  require_even(two_n, what);
  if (two_n > 8) throw InputError(std::string(what) + ": supported for 2n in {2, 4, 6, 8}");
}

// prod_{i=1}^{2n-1} (1 + t^i)
inline BettiSequence poincare_so(std::int64_t two_n) {
  require_desk_range(two_n, "poincare_so");
  Poly q{1};
  for (std::int64_t i = 1; i <= two_n - 1; ++i) {
    Poly factor(static_cast<std::size_t>(i) + 1, 0);
    factor.front() = 1;
    factor.back() = 1;
    q = poly_multiply(q, factor);
  }
  return {q, "SO(" + std::to_string(two_n) + ")"};
}

// PSO(4) = SO(3) x SO(3), and SO(3) = RP^3 has Z2 Poincare polynomial 1 + t + t^2 + t^3.
inline BettiSequence poincare_pso4() {
  const Poly so3{1, 1, 1, 1};
  return {poly_multiply(so3, so3), "PSO(4)"};
}

struct PartialSumEntry {
  int i = 0;
  std::int64_t b_rho = 0;
  std::int64_t partial_sum = 0;
  bool pass = false;
};

// b_rho[i] == sum_{j<=i} b[j] for each i <= upto, reported index by index.
inline std::vector<PartialSumEntry> partial_sum_check(const BettiSequence& b_rho, const BettiSequence& b, int upto) {
  if (b_rho.coefficients.size() != b.coefficients.size()) throw InputError("partial_sum_check: length mismatch");
  if (upto < 0 || upto >= static_cast<int>(b.coefficients.size())) throw InputError("partial_sum_check: upto out of range");
  std::vector<PartialSumEntry> report;
  std::int64_t running = 0;
  for (int i = 0; i <= upto; ++i) {
    running += b.coefficients[i];
    report.push_back({i, b_rho.coefficients[i], running, b_rho.coefficients[i] == running});
  }
  return report;
}

struct FacetBound {
  std::int64_t facets = 0;
  std::int64_t ind = 0;
  bool ind_exact = false;
};

// Strips k with target sphere S^{k-dim-1} below the index: k <= dim + ind, so
// at most 2 dim + 2 ind facets. Uses the exact index when known, otherwise the
// lower bound s - 1.
inline FacetBound facet_bound(std::int64_t dim) {
  require_desk_range(dim, "facet_bound");
  const IndexBounds b = index_bounds(dim);
  FacetBound fb;
  fb.ind_exact = b.exact.has_value();
  fb.ind = b.exact.value_or(b.lower);
  fb.facets = 2 * dim + 2 * fb.ind;
  return fb;
}

}  // namespace coverfit::topology
