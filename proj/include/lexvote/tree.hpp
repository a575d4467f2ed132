#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexvote/features.hpp"

namespace lexvote {

/// Sense id -> number of training instances.
using SenseCounts = std::map<std::string, long>;

struct TreeParams {
  long min_leaf_instances = 2;
  double pruning_confidence = 0.25;
  bool prune = true;

  void validate() const;
  bool operator==(const TreeParams&) const = default;
};

/// Binary decision tree over presence features.
///
/// Nodes are stored in preorder with the root at index 0. A split sends
/// vectors with the feature set to `on_true` and the rest to `on_false`.
/// Every node keeps the training distribution that reached it; leaves carry
/// the predicted sense.
class DecisionTree {
 public:
  struct Node {
    std::optional<std::size_t> feature;  // empty for leaves
    std::size_t on_true = 0;
    std::size_t on_false = 0;
    SenseCounts distribution;
    std::string prediction;

    bool is_leaf() const { return !feature.has_value(); }
    bool operator==(const Node&) const = default;
  };

  DecisionTree() = default;

  /// Validates child links and feature indices; throws ValidationError.
  DecisionTree(std::size_t width, std::vector<Node> nodes);

  static DecisionTree leaf(std::size_t width, SenseCounts distribution, std::string prediction);

  std::size_t width() const { return width_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& root() const { return nodes_.front(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  /// Number of split nodes on the longest root-to-leaf path.
  std::size_t depth() const;

  /// Root-to-leaf descent. Throws ValidationError on a width mismatch.
  const std::string& classify(const BinaryVector& v) const;

  bool operator==(const DecisionTree&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<Node> nodes_;
};

/// Shannon entropy in bits. Throws DomainError for an empty distribution.
double entropy(const SenseCounts& distribution);

/// Information gain of splitting on `feature_index` divided by the split
/// information. Returns 0 for a degenerate split (one side empty).
double gain_ratio(std::span<const BinaryVector> vectors, std::span<const std::string> labels,
                  std::size_t feature_index);

/// Upper limit of the error rate at a node with `errors` misclassified out of
/// `n` instances: the p solving BinomialCDF(errors; n, p) = cf, i.e. the
/// one-sided exact (Clopper-Pearson) bound at confidence 1 - cf. Never below
/// the observed rate errors / n.
double upper_error_rate(long n, long errors, double cf);

/// n * upper_error_rate(n, errors, cf): the pessimistic error count of a leaf.
double pessimistic_errors(long n, long errors, double cf);

/// Greedy top-down learner.
///
/// At each node the eligible features are those that leave at least
/// `min_leaf_instances` instances on both sides. Among eligible features with
/// positive information gain, the highest gain ratio wins (ties: lower index).
/// If the node is impure, every eligible feature has zero gain and the
/// instances are not all identical, the lowest-index eligible feature is split
/// on anyway so that the unpruned tree can still separate distinct vectors.
/// Growth stops at pure nodes or when nothing is eligible.
///
/// With `prune`, subtrees are replaced bottom-up by a leaf whenever the leaf's
/// pessimistic_errors at `pruning_confidence` do not exceed the sum over the
/// subtree's leaves,
/// and splits whose two leaves predict the same sense are collapsed.
///
/// Leaf predictions take the most frequent sense; ties go to the sense that
/// is more frequent in the whole training set, then to the smaller id.
DecisionTree train_tree(std::span<const BinaryVector> vectors, std::span<const std::string> labels,
                        const TreeParams& params = {});

/// Depth-one tree. Among features with positive information gain, picks the
/// one whose two majority leaves classify the most training instances
/// correctly (ties: higher gain ratio, then lower index). Without such a
/// feature the result is a single majority leaf.
DecisionTree train_stump(std::span<const BinaryVector> vectors, std::span<const std::string> labels);

inline const std::string& classify_tree(const DecisionTree& tree, const BinaryVector& v) { return tree.classify(v); }

}  // namespace lexvote
