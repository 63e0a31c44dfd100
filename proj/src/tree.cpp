#include "grrf/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grrf/errors.hpp"

namespace grrf {

int ClassCounts::majority() const {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

bool ClassCounts::pure() const {
  int nonzero = 0;
  for (std::int64_t c : counts)
    if (c > 0) ++nonzero;
  return nonzero <= 1;
}

double gini(const ClassCounts& c) {
  if (c.total < 1) throw InvalidParameter("gini of an empty node");
  const double n = static_cast<double>(c.total);
  double g = 0.0;
  for (std::int64_t k : c.counts) {
    const double p = static_cast<double>(k) / n;
    g += p * (1.0 - p);
  }
  return g;
}

double gini_gain(const ClassCounts& parent, const ClassCounts& left,
                 const ClassCounts& right) {
  if (left.counts.size() != parent.counts.size() ||
      right.counts.size() != parent.counts.size())
    throw InvalidParameter("gini_gain: class count size mismatch");
  if (left.total < 1 || right.total < 1)
    throw InvalidParameter("gini_gain: empty child");
  for (std::size_t c = 0; c < parent.counts.size(); ++c)
    if (left.counts[c] + right.counts[c] != parent.counts[c])
      throw InvalidParameter("gini_gain: children do not partition parent");
  const double wl = static_cast<double>(left.total) / static_cast<double>(parent.total);
  const double wr = static_cast<double>(right.total) / static_cast<double>(parent.total);
  return gini(parent) - wl * gini(left) - wr * gini(right);
}

int GrowthConfig::resolved_mtry(std::size_t p) const {
  if (mtry > 0) return std::min(mtry, static_cast<int>(p));
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p))));
}

namespace {

ClassCounts count_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
  ClassCounts c(d.num_classes());
  for (std::size_t r : rows) c.add(d.label(r));
  return c;
}

}  // namespace

std::optional<SplitCandidate> best_split_for_feature(
    const Dataset& d, const std::vector<std::size_t>& rows, int feature) {
  const std::size_t n = rows.size();
  if (n == 0) throw InvalidParameter("best_split_for_feature: empty row set");
  const int num_classes = d.num_classes();

  std::vector<std::pair<double, int>> vals;
  vals.reserve(n);
  for (std::size_t r : rows)
    vals.emplace_back(d.value(r, static_cast<std::size_t>(feature)), d.label(r));
  std::sort(vals.begin(), vals.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (vals.front().first == vals.back().first) return std::nullopt;

  ClassCounts parent(num_classes);
  for (const auto& [v, y] : vals) parent.add(y);

  ClassCounts left(num_classes);
  ClassCounts best_left(num_classes);
  double best_gain = 0.0;
  double best_threshold = 0.0;
  bool have_best = false;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    left.add(vals[i].second);
    if (vals[i].first == vals[i + 1].first) continue;
    ClassCounts right(num_classes);
    for (std::size_t c = 0; c < left.counts.size(); ++c)
      right.counts[c] = parent.counts[c] - left.counts[c];
    right.total = parent.total - left.total;
    const double g = gini_gain(parent, left, right);
    // strict > keeps the smallest threshold among equal-gain candidates
    if (!have_best || g > best_gain) {
      have_best = true;
      best_gain = g;
      best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
      best_left = left;
    }
  }

  SplitCandidate cand;
  cand.feature = feature;
  cand.threshold = best_threshold;
  cand.left_counts = best_left;
  cand.right_counts = ClassCounts(num_classes);
  for (std::size_t c = 0; c < best_left.counts.size(); ++c)
    cand.right_counts.counts[c] = parent.counts[c] - best_left.counts[c];
  cand.right_counts.total = parent.total - best_left.total;
  cand.raw_gain = gini_gain(parent, cand.left_counts, cand.right_counts);
  cand.regularized_gain = cand.raw_gain;
  return cand;
}

std::optional<SplitCandidate> evaluate_node(const Dataset& d,
                                            const std::vector<std::size_t>& rows,
                                            SelectedSet* F,
                                            const GrowthConfig& config,
                                            Rng& rng, int tree_index,
                                            int node_id) {
  const std::size_t p = d.cols();
  const int budget = config.resolved_mtry(p);
  const bool regularized = config.criterion_mode == CriterionMode::regularized;
  if (regularized && config.penalties.size() != p)
    throw InvalidParameter("evaluate_node: penalties size != feature count");

  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);

  std::optional<SplitCandidate> best;
  double best_reg_gain = 0.0;
  int examined_new = 0;

  if (!regularized && F == nullptr) {
    // plain RF path: a fresh uniform mtry-subset via partial Fisher-Yates
    for (int i = 0; i < budget && static_cast<std::size_t>(i) < p; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) + rng.uniform_index(p - static_cast<std::size_t>(i));
      std::swap(order[static_cast<std::size_t>(i)], order[j]);
      const int m = order[static_cast<std::size_t>(i)];
      auto cand = best_split_for_feature(d, rows, m);
      if (cand && cand->raw_gain > best_reg_gain) {
        best_reg_gain = cand->raw_gain;
        cand->regularized_gain = cand->raw_gain;
        best = std::move(cand);
      }
    }
    return best;
  }

  rng.shuffle(order);
  for (int m : order) {
    const bool in_f = F != nullptr && F->contains(m);
    double reg_gain = 0.0;
    std::optional<SplitCandidate> cand;
    if (in_f) {
      cand = best_split_for_feature(d, rows, m);
      if (cand) reg_gain = cand->raw_gain;
    } else if (examined_new < budget) {
      ++examined_new;
      cand = best_split_for_feature(d, rows, m);
      if (cand) {
        const double penalty = regularized ? config.penalties[static_cast<std::size_t>(m)] : 1.0;
        reg_gain = penalty * cand->raw_gain;
      }
    } else {
      continue;
    }
    if (cand && reg_gain > best_reg_gain) {
      best_reg_gain = reg_gain;
      cand->regularized_gain = reg_gain;
      best = std::move(cand);
    }
  }

  if (best && F != nullptr && !F->contains(best->feature))
    F->insert(best->feature, tree_index, node_id);
  return best;
}

Tree grow_tree(const Dataset& d, const std::vector<std::size_t>& rows,
               SelectedSet* F, const GrowthConfig& config, Rng& rng,
               int tree_index) {
  if (rows.empty()) throw InvalidParameter("grow_tree: empty row set");
  Tree tree;

  struct Work {
    std::vector<std::size_t> rows;
    int parent;     // -1 for the root
    bool is_left;
  };
  // LIFO with the right child pushed first keeps preorder, left child first
  std::vector<Work> stack;
  stack.push_back({rows, -1, false});

  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();

    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (w.parent >= 0) {
      auto& parent = tree.nodes[static_cast<std::size_t>(w.parent)];
      (w.is_left ? parent.left : parent.right) = id;
    }

    ClassCounts counts = count_rows(d, w.rows);
    const int prediction = counts.majority();
    const bool can_split =
        counts.total >= config.min_node && !counts.pure();

    std::optional<SplitCandidate> split;
    if (can_split)
      split = evaluate_node(d, w.rows, F, config, rng, tree_index, id);

    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.counts = std::move(counts);
    node.prediction = prediction;
    if (!split) {
      node.kind = TreeNode::Kind::leaf;
      continue;
    }

    node.kind = TreeNode::Kind::internal;
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.split_gain = split->raw_gain;

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(static_cast<std::size_t>(split->left_counts.total));
    right_rows.reserve(static_cast<std::size_t>(split->right_counts.total));
    for (std::size_t r : w.rows) {
      if (d.value(r, static_cast<std::size_t>(split->feature)) <= split->threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    stack.push_back({std::move(right_rows), id, false});
    stack.push_back({std::move(left_rows), id, true});
  }
  return tree;
}

int predict_tree(const Tree& t, const std::vector<double>& row) {
  const TreeNode* node = &t.nodes[0];
  while (node->kind == TreeNode::Kind::internal) {
    const int next = row[static_cast<std::size_t>(node->feature)] <= node->threshold
                         ? node->left
                         : node->right;
    node = &t.nodes[static_cast<std::size_t>(next)];
  }
  return node->prediction;
}

}  // namespace grrf
