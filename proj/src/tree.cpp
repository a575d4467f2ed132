#include "lexvote/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "lexvote/error.hpp"

namespace lexvote {

namespace {

constexpr double kGainEpsilon = 1e-12;

double entropy_of(const std::vector<long>& counts, long total) {
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (long c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

struct SplitStats {
  double gain = 0.0;
  double ratio = 0.0;
  long correct = 0;  // instances matched by the two majority leaves
  long n_true = 0;
  long n_false = 0;
};

void check_inputs(std::span<const BinaryVector> vectors, std::span<const std::string> labels) {
  if (vectors.size() != labels.size())
    throw ValidationError("vector/label count mismatch: " + std::to_string(vectors.size()) + " vs " +
                          std::to_string(labels.size()));
  if (vectors.empty()) throw ValidationError("cannot train a tree on zero instances");
  const auto width = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != width) throw ValidationError("binary vectors have inconsistent widths");
  }
}

// Integer-coded view of a training set shared by tree growth and pruning.
class Learner {
 public:
  Learner(std::span<const BinaryVector> vectors, std::span<const std::string> labels)
      : vectors_(vectors), width_(vectors.front().size()) {
    senses_.assign(labels.begin(), labels.end());
    std::sort(senses_.begin(), senses_.end());
    senses_.erase(std::unique(senses_.begin(), senses_.end()), senses_.end());

    label_ids_.reserve(labels.size());
    std::vector<long> global(senses_.size(), 0);
    for (const auto& l : labels) {
      const auto id = static_cast<int>(std::lower_bound(senses_.begin(), senses_.end(), l) - senses_.begin());
      label_ids_.push_back(id);
      ++global[id];
    }
    // rank_[s] orders senses by global frequency (desc), then id (asc).
    std::vector<int> order(senses_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return global[a] > global[b]; });
    rank_.resize(senses_.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = static_cast<int>(r);
  }

  std::size_t width() const { return width_; }
  std::size_t sense_count() const { return senses_.size(); }

  std::vector<long> counts(std::span<const std::size_t> idx) const {
    std::vector<long> c(senses_.size(), 0);
    for (auto i : idx) ++c[label_ids_[i]];
    return c;
  }

  int majority(const std::vector<long>& counts) const {
    int best = -1;
    for (int s = 0; s < static_cast<int>(counts.size()); ++s) {
      if (counts[s] == 0) continue;
      if (best < 0 || counts[s] > counts[best] || (counts[s] == counts[best] && rank_[s] < rank_[best])) best = s;
    }
    return best < 0 ? 0 : best;
  }

  SenseCounts distribution(const std::vector<long>& counts) const {
    SenseCounts d;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (counts[s] > 0) d.emplace(senses_[s], counts[s]);
    }
    return d;
  }

  const std::string& sense(int id) const { return senses_[id]; }

  SplitStats split_stats(std::span<const std::size_t> idx, const std::vector<long>& parent, std::size_t f) const {
    std::vector<long> on_true(senses_.size(), 0);
    long n_true = 0;
    for (auto i : idx) {
      if (vectors_[i][f]) {
        ++on_true[label_ids_[i]];
        ++n_true;
      }
    }
    const long n = static_cast<long>(idx.size());
    const long n_false = n - n_true;
    SplitStats st;
    st.n_true = n_true;
    st.n_false = n_false;
    if (n_true == 0 || n_false == 0) return st;

    std::vector<long> on_false(senses_.size());
    for (std::size_t s = 0; s < on_false.size(); ++s) on_false[s] = parent[s] - on_true[s];

    const double pt = static_cast<double>(n_true) / n;
    const double pf = static_cast<double>(n_false) / n;
    st.gain = entropy_of(parent, n) - pt * entropy_of(on_true, n_true) - pf * entropy_of(on_false, n_false);
    if (st.gain < kGainEpsilon) st.gain = 0.0;
    const double split_info = -pt * std::log2(pt) - pf * std::log2(pf);
    st.ratio = st.gain / split_info;
    st.correct = on_true[majority(on_true)] + on_false[majority(on_false)];
    return st;
  }

  bool all_identical(std::span<const std::size_t> idx) const {
    for (auto i : idx) {
      if (!(vectors_[i] == vectors_[idx.front()])) return false;
    }
    return true;
  }

  void partition(std::span<const std::size_t> idx, std::size_t f, std::vector<std::size_t>& t,
                 std::vector<std::size_t>& e) const {
    for (auto i : idx) (vectors_[i][f] ? t : e).push_back(i);
  }

 private:
  std::span<const BinaryVector> vectors_;
  std::size_t width_;
  std::vector<std::string> senses_;
  std::vector<int> label_ids_;
  std::vector<int> rank_;
};

// Pointer-linked node used while growing and pruning; flattened afterwards.
struct GrowNode {
  std::optional<std::size_t> feature;
  std::unique_ptr<GrowNode> on_true;
  std::unique_ptr<GrowNode> on_false;
  std::vector<long> counts;
  int prediction = 0;
};

std::unique_ptr<GrowNode> make_leaf(const Learner& learner, std::vector<long> counts) {
  auto node = std::make_unique<GrowNode>();
  node->prediction = learner.majority(counts);
  node->counts = std::move(counts);
  return node;
}

std::unique_ptr<GrowNode> grow(const Learner& learner, std::span<const std::size_t> idx, const TreeParams& params) {
  auto counts = learner.counts(idx);
  const auto nonzero = std::count_if(counts.begin(), counts.end(), [](long c) { return c > 0; });
  if (nonzero <= 1) return make_leaf(learner, std::move(counts));

  std::optional<std::size_t> best;
  std::optional<std::size_t> fallback;
  double best_ratio = 0.0;
  for (std::size_t f = 0; f < learner.width(); ++f) {
    const auto st = learner.split_stats(idx, counts, f);
    if (st.n_true < params.min_leaf_instances || st.n_false < params.min_leaf_instances) continue;
    if (!fallback) fallback = f;
    if (st.gain <= 0.0) continue;
    if (!best || st.ratio > best_ratio + kGainEpsilon) {
      best = f;
      best_ratio = st.ratio;
    }
  }
  if (!best) {
    // Zero-gain split (e.g. parity-like labels): still separates distinct vectors.
    if (!fallback || learner.all_identical(idx)) return make_leaf(learner, std::move(counts));
    best = fallback;
  }

  std::vector<std::size_t> t, e;
  learner.partition(idx, *best, t, e);
  auto node = std::make_unique<GrowNode>();
  node->feature = best;
  node->prediction = learner.majority(counts);
  node->counts = std::move(counts);
  node->on_true = grow(learner, t, params);
  node->on_false = grow(learner, e, params);
  return node;
}

long total_of(const std::vector<long>& counts) { return std::accumulate(counts.begin(), counts.end(), 0L); }

double leaf_estimate(const GrowNode& node, double cf) {
  const long n = total_of(node.counts);
  return pessimistic_errors(n, n - node.counts[node.prediction], cf);
}

// Returns the pessimistic error estimate of the (possibly pruned) subtree.
double prune(GrowNode& node, double cf) {
  if (!node.feature) return leaf_estimate(node, cf);
  const double subtree = prune(*node.on_true, cf) + prune(*node.on_false, cf);
  const double as_leaf = leaf_estimate(node, cf);
  const bool same_leaves = node.on_true->feature == std::nullopt && node.on_false->feature == std::nullopt &&
                           node.on_true->prediction == node.on_false->prediction;
  if (as_leaf <= subtree + 1e-9 || same_leaves) {
    node.feature.reset();
    node.on_true.reset();
    node.on_false.reset();
    return as_leaf;
  }
  return subtree;
}

void flatten(const Learner& learner, const GrowNode& node, std::vector<DecisionTree::Node>& out) {
  const auto self = out.size();
  out.push_back({});
  out[self].distribution = learner.distribution(node.counts);
  out[self].prediction = learner.sense(node.prediction);
  if (!node.feature) return;
  out[self].feature = node.feature;
  out[self].on_true = out.size();
  flatten(learner, *node.on_true, out);
  out[self].on_false = out.size();
  flatten(learner, *node.on_false, out);
}

}  // namespace

void TreeParams::validate() const {
  if (min_leaf_instances < 1) throw ValidationError("min_leaf_instances must be >= 1");
  if (!(pruning_confidence > 0.0 && pruning_confidence <= 1.0))
    throw ValidationError("pruning_confidence must be in (0, 1]");
}

DecisionTree::DecisionTree(std::size_t width, std::vector<Node> nodes) : width_(width), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("decision tree has no nodes");
  // Preorder layout: children always follow their parent.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.is_leaf()) continue;
    if (*n.feature >= width_)
      throw ValidationError("split feature index " + std::to_string(*n.feature) + " out of range for width " +
                            std::to_string(width_));
    if (n.on_true <= i || n.on_false <= i || n.on_true >= nodes_.size() || n.on_false >= nodes_.size())
      throw ValidationError("malformed child link at node " + std::to_string(i));
  }
}

DecisionTree DecisionTree::leaf(std::size_t width, SenseCounts distribution, std::string prediction) {
  Node n;
  n.distribution = std::move(distribution);
  n.prediction = std::move(prediction);
  return DecisionTree(width, {std::move(n)});
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::depth() const {
  std::function<std::size_t(std::size_t)> rec = [&](std::size_t i) -> std::size_t {
    const auto& n = nodes_[i];
    if (n.is_leaf()) return 0;
    return 1 + std::max(rec(n.on_true), rec(n.on_false));
  };
  return nodes_.empty() ? 0 : rec(0);
}

const std::string& DecisionTree::classify(const BinaryVector& v) const {
  if (v.size() != width_)
    throw ValidationError("vector width " + std::to_string(v.size()) + " does not match tree width " +
                          std::to_string(width_));
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) i = v[*nodes_[i].feature] ? nodes_[i].on_true : nodes_[i].on_false;
  return nodes_[i].prediction;
}

double entropy(const SenseCounts& distribution) {
  long total = 0;
  std::vector<long> counts;
  for (const auto& [sense, c] : distribution) {
    if (c < 0) throw DomainError("negative count in distribution");
    counts.push_back(c);
    total += c;
  }
  if (total <= 0) throw DomainError("entropy of an empty distribution");
  return entropy_of(counts, total);
}

double gain_ratio(std::span<const BinaryVector> vectors, std::span<const std::string> labels,
                  std::size_t feature_index) {
  check_inputs(vectors, labels);
  if (feature_index >= vectors.front().size()) throw ValidationError("feature index out of range");
  const Learner learner(vectors, labels);
  std::vector<std::size_t> idx(vectors.size());
  std::iota(idx.begin(), idx.end(), 0);
  return learner.split_stats(idx, learner.counts(idx), feature_index).ratio;
}

double upper_error_rate(long n, long errors, double cf) {
  if (n <= 0) throw DomainError("error rate of an empty node");
  if (errors < 0 || errors > n) throw DomainError("error count out of range");
  if (errors == n) return 1.0;
  const double observed = static_cast<double>(errors) / n;
  if (cf >= 1.0) return observed;
  const double upper = boost::math::ibeta_inv(static_cast<double>(errors + 1), static_cast<double>(n - errors), 1.0 - cf);
  return std::max(upper, observed);
}

double pessimistic_errors(long n, long errors, double cf) { return n * upper_error_rate(n, errors, cf); }

DecisionTree train_tree(std::span<const BinaryVector> vectors, std::span<const std::string> labels,
                        const TreeParams& params) {
  params.validate();
  check_inputs(vectors, labels);
  const Learner learner(vectors, labels);
  std::vector<std::size_t> idx(vectors.size());
  std::iota(idx.begin(), idx.end(), 0);

  auto root = grow(learner, idx, params);
  if (params.prune) prune(*root, params.pruning_confidence);

  std::vector<DecisionTree::Node> nodes;
  flatten(learner, *root, nodes);
  return DecisionTree(learner.width(), std::move(nodes));
}

DecisionTree train_stump(std::span<const BinaryVector> vectors, std::span<const std::string> labels) {
  check_inputs(vectors, labels);
  const Learner learner(vectors, labels);
  std::vector<std::size_t> idx(vectors.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto counts = learner.counts(idx);

  std::optional<std::size_t> best;
  SplitStats best_stats;
  for (std::size_t f = 0; f < learner.width(); ++f) {
    const auto st = learner.split_stats(idx, counts, f);
    if (st.gain <= 0.0) continue;
    const bool better = !best || st.correct > best_stats.correct ||
                        (st.correct == best_stats.correct && st.ratio > best_stats.ratio + kGainEpsilon);
    if (better) {
      best = f;
      best_stats = st;
    }
  }

  auto root = make_leaf(learner, counts);
  if (best) {
    std::vector<std::size_t> t, e;
    learner.partition(idx, *best, t, e);
    root->feature = best;
    root->on_true = make_leaf(learner, learner.counts(t));
    root->on_false = make_leaf(learner, learner.counts(e));
  }
  std::vector<DecisionTree::Node> nodes;
  flatten(learner, *root, nodes);
  return DecisionTree(learner.width(), std::move(nodes));
}

}  // namespace lexvote
