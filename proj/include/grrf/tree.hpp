#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grrf/dataset.hpp"
#include "grrf/rng.hpp"

namespace grrf {

// Per-class instance counts at a node.
struct ClassCounts {
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;

  ClassCounts() = default;
  explicit ClassCounts(int num_classes) : counts(num_classes, 0) {}

  void add(int cls, std::int64_t k = 1) {
    counts[static_cast<std::size_t>(cls)] += k;
    total += k;
  }
  // Majority class; ties broken by the smallest class index.
  int majority() const;
  bool pure() const;
};

// Gini(v) = sum_c p_c (1 - p_c). Throws InvalidParameter on an empty node.
double gini(const ClassCounts& c);

// Gini(parent) - wL*Gini(left) - wR*Gini(right). Throws InvalidParameter
// unless left+right partitions parent and both children are nonempty.
double gini_gain(const ClassCounts& parent, const ClassCounts& left,
                 const ClassCounts& right);

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  ClassCounts left_counts;
  ClassCounts right_counts;
  double raw_gain = 0.0;
  double regularized_gain = 0.0;
};

struct TreeNode {
  enum class Kind { internal, leaf };
  Kind kind = Kind::leaf;
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  ClassCounts counts;
  int prediction = 0;
  double split_gain = 0.0;  // raw (un-penalized) gain of the winning split
};

struct Tree {
  std::vector<TreeNode> nodes;  // preorder; node 0 is the root
};

enum class CriterionMode { plain, regularized };

struct GrowthConfig {
  // In plain mode: size of the fresh random candidate subset at each node.
  // In regularized mode: the budget of features outside F examined per node.
  // 0 resolves to ceil(sqrt(P)).
  int mtry = 0;
  int min_node = 2;  // trees are grown completely
  CriterionMode criterion_mode = CriterionMode::plain;
  // Per-feature penalty coefficients (size P) applied to features outside F;
  // ignored in plain mode.
  std::vector<double> penalties;

  int resolved_mtry(std::size_t p) const;
};

struct SelectionEntry {
  int feature;
  int tree_index;  // tree where the feature first entered F
  int node_id;     // node (preorder id) where it entered
};

// The shared feature set F. Grows monotonically; insertion order and the
// first tree/node of each entry are kept for reporting.
class SelectedSet {
 public:
  explicit SelectedSet(std::size_t num_features)
      : member_(num_features, 0) {}

  bool contains(int f) const { return member_[static_cast<std::size_t>(f)] != 0; }
  void insert(int f, int tree_index, int node_id) {
    if (contains(f)) return;
    member_[static_cast<std::size_t>(f)] = 1;
    entries_.push_back({f, tree_index, node_id});
  }
  const std::vector<SelectionEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<char> member_;
  std::vector<SelectionEntry> entries_;
};

// Exhaustive scan over midpoints of consecutive distinct sorted values of
// one feature restricted to rows. Returns the candidate with the maximal
// raw gain (ties broken by the smallest threshold), or nullopt when the
// feature is constant on rows.
std::optional<SplitCandidate> best_split_for_feature(
    const Dataset& d, const std::vector<std::size_t>& rows, int feature);

// Node-level feature selection. Visits all P features in a uniformly random
// order; features in F are scored by raw gain, features outside F by
// penalty*gain while fewer than mtry of them have been examined. The winner
// must have regularized gain strictly above zero; a winning feature outside
// F is added to F. F == nullptr means "empty and frozen" (the plain RF
// path: the first mtry features visited form the candidate subset).
// tree_index/node_id are recorded with new F entries.
std::optional<SplitCandidate> evaluate_node(const Dataset& d,
                                            const std::vector<std::size_t>& rows,
                                            SelectedSet* F,
                                            const GrowthConfig& config,
                                            Rng& rng, int tree_index = 0,
                                            int node_id = 0);

// Fully grown binary tree. Depth-first, left child first; a node becomes a
// leaf when pure, below min_node, or when no feature wins at it. F updates
// persist across the growth.
Tree grow_tree(const Dataset& d, const std::vector<std::size_t>& rows,
               SelectedSet* F, const GrowthConfig& config, Rng& rng,
               int tree_index = 0);

// Routes by feature <= threshold to the left child.
int predict_tree(const Tree& t, const std::vector<double>& row);

}  // namespace grrf
