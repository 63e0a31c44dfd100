#include "grrf/bound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "grrf/errors.hpp"
#include "grrf/rng.hpp"

namespace grrf {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw InvalidParameter("rational with nonpositive denominator");
  const std::int64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

Rational Rational::plus(const Rational& o) const {
  return make(num * o.den + o.num * den, den * o.den);
}

double Rational::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

std::int64_t theorem_bound(std::int64_t n) {
  if (n < 2) throw InvalidParameter("theorem_bound needs n >= 2");
  std::int64_t sum = 0;
  for (std::int64_t L = 1; L < n; ++L) sum += (L + 2) / 2;  // ceil((L+1)/2)
  return sum;
}

namespace {

// L1*L2/L + R1*R2/R for one feasible assignment, exact.
Rational child_impurity_term(std::int64_t L, std::int64_t L1, std::int64_t R,
                             std::int64_t R1) {
  const std::int64_t L2 = L - L1;
  const std::int64_t R2 = R - R1;
  return Rational::make(L1 * L2 * R + R1 * R2 * L, L * R);
}

void enumerate_into(const NodeComposition& comp, std::set<Rational>& out) {
  const std::int64_t n = comp.n, n1 = comp.n1, n2 = comp.n2;
  for (std::int64_t L = 1; L < n; ++L) {
    const std::int64_t R = n - L;
    const std::int64_t lo = std::max<std::int64_t>(0, L - n2);
    const std::int64_t hi = std::min(L, n1);
    for (std::int64_t L1 = lo; L1 <= hi; ++L1)
      out.insert(child_impurity_term(L, L1, R, n1 - L1));
  }
}

void check_composition(const NodeComposition& comp) {
  if (comp.n < 2) throw InvalidParameter("node size must be >= 2");
  if (comp.n1 < 0 || comp.n2 < 0 || comp.n1 + comp.n2 != comp.n)
    throw InvalidParameter("invalid node composition");
}

SplitEnumeration finish(std::int64_t n, const std::set<Rational>& values) {
  SplitEnumeration e;
  e.bound = theorem_bound(n);
  e.count = values.size();
  e.values.reserve(values.size());
  // scale by 2/N: w_L*Gini(L) + w_R*Gini(R) = (2/N)(L1L2/L + R1R2/R)
  for (const Rational& r : values)
    e.values.push_back(2.0 * r.to_double() / static_cast<double>(n));
  return e;
}

// Float-arithmetic variant, deduplicated at relative tolerance.
SplitEnumeration enumerate_float(std::int64_t n, std::optional<std::int64_t> n1_fixed) {
  std::vector<double> vals;
  const auto add_comp = [&](std::int64_t n1) {
    const std::int64_t n2 = n - n1;
    for (std::int64_t L = 1; L < n; ++L) {
      const std::int64_t R = n - L;
      const std::int64_t lo = std::max<std::int64_t>(0, L - n2);
      const std::int64_t hi = std::min(L, n1);
      for (std::int64_t L1 = lo; L1 <= hi; ++L1) {
        const double L2 = static_cast<double>(L - L1);
        const double R1 = static_cast<double>(n1 - L1);
        const double R2 = static_cast<double>(n2 - (L - L1));
        vals.push_back(static_cast<double>(L1) * L2 / static_cast<double>(L) +
                       R1 * R2 / static_cast<double>(R));
      }
    }
  };
  if (n1_fixed) {
    add_comp(*n1_fixed);
  } else {
    for (std::int64_t n1 = 0; n1 <= n; ++n1) add_comp(n1);
  }
  std::sort(vals.begin(), vals.end());
  SplitEnumeration e;
  e.bound = theorem_bound(n);
  const double tol = 1e-9;
  for (double v : vals) {
    if (e.values.empty() ||
        v - e.values.back() > tol * std::max({1e-300, std::abs(v), std::abs(e.values.back())}))
      e.values.push_back(v);
  }
  for (double& v : e.values) v *= 2.0 / static_cast<double>(n);
  e.count = e.values.size();
  return e;
}

}  // namespace

SplitEnumeration enumerate_distinct(const NodeComposition& comp,
                                    bool exact_rational) {
  check_composition(comp);
  if (!exact_rational) return enumerate_float(comp.n, comp.n1);
  std::set<Rational> values;
  enumerate_into(comp, values);
  return finish(comp.n, values);
}

SplitEnumeration enumerate_distinct_union(std::int64_t n, bool exact_rational) {
  if (n < 2) throw InvalidParameter("node size must be >= 2");
  if (!exact_rational) return enumerate_float(n, std::nullopt);
  std::set<Rational> values;
  for (std::int64_t n1 = 0; n1 <= n; ++n1)
    enumerate_into({n, n1, n - n1}, values);
  return finish(n, values);
}

std::int64_t lemma1_distinct_count(std::int64_t L) {
  if (L < 1) throw InvalidParameter("lemma1 needs L >= 1");
  std::set<std::int64_t> products;
  for (std::int64_t L1 = 0; L1 <= L; ++L1) products.insert(L1 * (L - L1));
  return static_cast<std::int64_t>(products.size());
}

bool lemma1_check(std::int64_t L) {
  const std::int64_t bound = (L + 2) / 2;  // ceil((L+1)/2)
  const std::int64_t count = lemma1_distinct_count(L);
  return count <= bound && count == bound;
}

double tie_frequency(int n, int p, int trials, std::uint64_t seed) {
  if (n < 2 || p < 1 || trials < 1)
    throw InvalidParameter("tie_frequency needs n >= 2, p >= 1, trials >= 1");
  Rng root(seed);
  double total_fraction = 0.0;

  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<std::pair<double, int>> col(static_cast<std::size_t>(n));

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = root.derive(static_cast<std::uint64_t>(trial));
    for (auto& y : labels) y = rng.uniform_real() < 0.5 ? 0 : 1;

    std::vector<Rational> best(static_cast<std::size_t>(p), Rational{-1, 1});
    for (int j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < col.size(); ++i)
        col[i] = {rng.uniform_real(), labels[i]};
      std::sort(col.begin(), col.end());
      // minimal weighted child impurity == maximal gain (parent term fixed)
      std::int64_t c1 = 0;
      std::int64_t total1 = 0;
      for (const auto& [v, y] : col) total1 += y;
      Rational best_val{-1, 1};
      for (std::int64_t L = 1; L < n; ++L) {
        c1 += col[static_cast<std::size_t>(L - 1)].second;
        if (col[static_cast<std::size_t>(L - 1)].first ==
            col[static_cast<std::size_t>(L)].first)
          continue;
        const Rational v = child_impurity_term(L, c1, n - L, total1 - c1);
        if (best_val.num < 0 || v < best_val) best_val = v;
      }
      best[static_cast<std::size_t>(j)] = best_val;
    }

    Rational node_best{-1, 1};
    for (const Rational& b : best)
      if (b.num >= 0 && (node_best.num < 0 || b < node_best)) node_best = b;
    if (node_best.num < 0) {
      total_fraction += 1.0;  // no feature splittable: all trivially tie
      continue;
    }
    int ties = 0;
    for (const Rational& b : best)
      if (b == node_best) ++ties;
    total_fraction += static_cast<double>(ties) / static_cast<double>(p);
  }
  return total_fraction / static_cast<double>(trials);
}

}  // namespace grrf
