#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace grrf {

// Exact nonnegative rational, normalized (den > 0, gcd = 1). Magnitudes
// stay far below 2^63 for the node sizes handled here; comparisons go
// through 128-bit cross multiplication.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  Rational plus(const Rational& o) const;
  double to_double() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <
           static_cast<__int128>(b.num) * a.den;
  }
};

// Class composition of a binary-class node of size n; n1 + n2 = n.
struct NodeComposition {
  std::int64_t n = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
};

struct SplitEnumeration {
  std::vector<double> values;  // sorted distinct w_L*Gini(L)+w_R*Gini(R)
  std::size_t count = 0;
  std::int64_t bound = 0;  // theorem_bound(n)
};

// Upper bound on distinct Gini information gain values at a binary-class
// node of size n: the ceiling sum over L = 1..n-1 of ceil((L+1)/2), which
// collapses to n(n+2)/4 - 1 when n is even.
std::int64_t theorem_bound(std::int64_t n);

// All achievable weighted-child-impurity values for a fixed composition,
// enumerated over every feasible (L, L1). With exact_rational distinctness
// is decided in exact arithmetic; otherwise doubles are deduplicated at
// 1e-9 relative tolerance.
SplitEnumeration enumerate_distinct(const NodeComposition& comp,
                                    bool exact_rational = true);

// Union over every composition n1 = 0..n. This can exceed theorem_bound(n):
// the bound applies to a node, whose composition is fixed.
SplitEnumeration enumerate_distinct_union(std::int64_t n,
                                          bool exact_rational = true);

// Number of distinct values of L1*(L-L1) for L1 in {0..L}.
std::int64_t lemma1_distinct_count(std::int64_t L);

// Checks count <= ceil((L+1)/2) and that the bound is attained.
bool lemma1_check(std::int64_t L);

// Monte-Carlo estimate of the node sparsity effect: random binary-labeled
// nodes of size n with p continuous features; returns the mean fraction of
// features whose best gain equals the node-wise maximum (best gains are
// compared exactly, so equal rationals always count as tied).
double tie_frequency(int n, int p, int trials, std::uint64_t seed);

}  // namespace grrf
