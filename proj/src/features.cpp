#include "lexvote/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "lexvote/error.hpp"

namespace lexvote {

namespace {

constexpr char kSep = '\x1f';

std::string pair_key(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a).push_back(kSep);
  key.append(b);
  return key;
}

std::string cooc_key(std::string_view a, std::string_view b, TargetSide side) {
  auto key = pair_key(a, b);
  key.push_back(kSep);
  key.push_back(side == TargetSide::First ? '1' : '2');
  return key;
}

// Visits the co-occurrence slots of one instance as (first, second, side).
template <typename Fn>
void for_each_cooc_slot(const Instance& inst, int window, Fn&& fn) {
  const auto& target = inst.target_token();
  const auto t = static_cast<long>(inst.target_index);
  const auto len = static_cast<long>(inst.tokens.size());
  for (long d = -window; d <= window; ++d) {
    if (d == 0) continue;
    const long i = t + d;
    if (i < 0 || i >= len) continue;
    if (d < 0) fn(inst.tokens[i], target, TargetSide::Second);
    else fn(target, inst.tokens[i], TargetSide::First);
  }
}

struct PairCounts {
  std::map<std::string, long> first;
  std::map<std::string, long> second;
  long total = 0;

  void add(const std::string& a, const std::string& b) {
    ++first[a];
    ++second[b];
    ++total;
  }

  double g2(const std::string& a, const std::string& b, long joint) const {
    return g2_statistic(ContingencyTable::from_marginals(joint, first.at(a), second.at(b), total));
  }
};

void sort_by_score(std::vector<std::pair<Feature, double>>& scored) {
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
}

std::vector<std::pair<Feature, double>> select_unigrams(std::span<const Instance> train, const Stoplist& stoplist,
                                                        const FeatureExtractionConfig& config) {
  std::map<std::string, long> counts;
  for (const auto& inst : train) {
    for (auto& f : extract_unigram_candidates(inst, stoplist)) ++counts[f.words[0]];
  }
  std::vector<std::pair<Feature, double>> out;
  for (const auto& [word, count] : counts) {
    if (count >= config.unigram_min_freq) out.emplace_back(Feature::unigram(word), static_cast<double>(count));
  }
  return out;
}

std::vector<std::pair<Feature, double>> select_bigrams(std::span<const Instance> train, const Stoplist& stoplist,
                                                       const FeatureExtractionConfig& config) {
  PairCounts slots;
  std::map<std::pair<std::string, std::string>, long> joint;
  for (const auto& inst : train) {
    for (std::size_t i = 0; i + 1 < inst.tokens.size(); ++i) {
      slots.add(inst.tokens[i], inst.tokens[i + 1]);
      if (!(stoplist.contains(inst.tokens[i]) && stoplist.contains(inst.tokens[i + 1])))
        ++joint[{inst.tokens[i], inst.tokens[i + 1]}];
    }
  }
  std::vector<std::pair<Feature, double>> out;
  for (const auto& [words, count] : joint) {
    if (count < config.bigram_min_freq) continue;
    const double score = slots.g2(words.first, words.second, count);
    if (score >= config.bigram_g2_threshold) out.emplace_back(Feature::bigram(words.first, words.second), score);
  }
  return out;
}

std::vector<std::pair<Feature, double>> select_coocs(std::span<const Instance> train,
                                                     const FeatureExtractionConfig& config) {
  // The frequency floor applies per feature (pair and side); the 2x2 table
  // counts slots by word pair only, so that its cells stay consistent when
  // the target token also appears as a neighbour.
  PairCounts slots;
  std::map<std::tuple<std::string, std::string, TargetSide>, long> joint;
  std::map<std::pair<std::string, std::string>, long> pair_joint;
  for (const auto& inst : train) {
    for_each_cooc_slot(inst, config.cooc_window, [&](const std::string& a, const std::string& b, TargetSide side) {
      slots.add(a, b);
      ++joint[{a, b, side}];
      ++pair_joint[{a, b}];
    });
  }
  std::vector<std::pair<Feature, double>> out;
  for (const auto& [key, count] : joint) {
    const auto& [a, b, side] = key;
    if (count < config.cooc_min_freq) continue;
    const double score = slots.g2(a, b, pair_joint.at({a, b}));
    if (score >= config.cooc_g2_threshold) out.emplace_back(Feature::cooccurrence(a, b, side), score);
  }
  return out;
}

}  // namespace

std::string_view view_name(View view) {
  switch (view) {
    case View::Unigram: return "U";
    case View::Bigram: return "B";
    case View::Cooccurrence: return "C";
    case View::Mixed: return "mixed";
  }
  return "?";
}

std::optional<View> parse_view(std::string_view name) {
  if (name == "U") return View::Unigram;
  if (name == "B") return View::Bigram;
  if (name == "C") return View::Cooccurrence;
  if (name == "mixed") return View::Mixed;
  return std::nullopt;
}

std::string_view kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Unigram: return "unigram";
    case FeatureKind::Bigram: return "bigram";
    case FeatureKind::Cooccurrence: return "cooccurrence";
  }
  return "?";
}

std::optional<FeatureKind> parse_kind(std::string_view name) {
  if (name == "unigram") return FeatureKind::Unigram;
  if (name == "bigram") return FeatureKind::Bigram;
  if (name == "cooccurrence") return FeatureKind::Cooccurrence;
  return std::nullopt;
}

void FeatureExtractionConfig::validate() const {
  if (unigram_min_freq < 1 || bigram_min_freq < 1 || cooc_min_freq < 1)
    throw ValidationError("frequency floors must be >= 1");
  if (!(bigram_g2_threshold >= 0.0) || !(cooc_g2_threshold >= 0.0))
    throw ValidationError("G2 thresholds must be >= 0");
  if (cooc_window < 1) throw ValidationError("co-occurrence window must be >= 1");
}

Feature Feature::unigram(std::string word) {
  return Feature{FeatureKind::Unigram, {std::move(word)}, TargetSide::None};
}

Feature Feature::bigram(std::string first, std::string second) {
  return Feature{FeatureKind::Bigram, {std::move(first), std::move(second)}, TargetSide::None};
}

Feature Feature::cooccurrence(std::string first, std::string second, TargetSide target_side) {
  return Feature{FeatureKind::Cooccurrence, {std::move(first), std::move(second)}, target_side};
}

std::string Feature::text() const {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::strong_ordering Feature::operator<=>(const Feature& other) const {
  if (auto c = words <=> other.words; c != 0) return c;
  if (auto c = kind <=> other.kind; c != 0) return c;
  return target_side <=> other.target_side;
}

ContingencyTable ContingencyTable::from_marginals(long joint, long first_total, long second_total, long n) {
  return ContingencyTable{joint, first_total - joint, second_total - joint, n - first_total - second_total + joint};
}

double g2_statistic(long n11, long n12, long n21, long n22) {
  if (n11 < 0 || n12 < 0 || n21 < 0 || n22 < 0) throw DomainError("negative count in contingency table");
  const double n = static_cast<double>(n11) + n12 + n21 + n22;
  if (n == 0.0) throw DomainError("G2 of an all-zero contingency table");

  const double row[2] = {static_cast<double>(n11 + n12), static_cast<double>(n21 + n22)};
  const double col[2] = {static_cast<double>(n11 + n21), static_cast<double>(n12 + n22)};
  const long observed[2][2] = {{n11, n12}, {n21, n22}};

  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (observed[i][j] == 0) continue;
      const double o = static_cast<double>(observed[i][j]);
      const double e = row[i] * col[j] / n;
      sum += o * std::log(o / e);
    }
  }
  // Rounding can leave a tiny negative value for independent tables.
  return std::max(0.0, 2.0 * sum);
}

double g2_statistic(const ContingencyTable& t) { return g2_statistic(t.n11, t.n12, t.n21, t.n22); }

std::vector<Feature> extract_unigram_candidates(const Instance& instance, const Stoplist& stoplist) {
  std::vector<Feature> out;
  for (const auto& tok : instance.tokens) {
    if (!stoplist.contains(tok)) out.push_back(Feature::unigram(tok));
  }
  return out;
}

std::vector<Feature> extract_bigram_candidates(const Instance& instance, const Stoplist& stoplist) {
  std::vector<Feature> out;
  for (std::size_t i = 0; i + 1 < instance.tokens.size(); ++i) {
    const auto& a = instance.tokens[i];
    const auto& b = instance.tokens[i + 1];
    if (stoplist.contains(a) && stoplist.contains(b)) continue;
    out.push_back(Feature::bigram(a, b));
  }
  return out;
}

std::vector<Feature> extract_cooc_candidates(const Instance& instance, int window) {
  if (window < 1) throw ValidationError("co-occurrence window must be >= 1");
  std::vector<Feature> out;
  for_each_cooc_slot(instance, window, [&](const std::string& a, const std::string& b, TargetSide side) {
    out.push_back(Feature::cooccurrence(a, b, side));
  });
  return out;
}

FeatureSet build_feature_set(std::span<const Instance> train, View view, const Stoplist& stoplist,
                             const FeatureExtractionConfig& config) {
  config.validate();

  std::vector<std::pair<Feature, double>> scored;
  switch (view) {
    case View::Unigram:
      scored = select_unigrams(train, stoplist, config);
      break;
    case View::Bigram:
      scored = select_bigrams(train, stoplist, config);
      break;
    case View::Cooccurrence:
      scored = select_coocs(train, config);
      break;
    case View::Mixed: {
      scored = select_bigrams(train, stoplist, config);
      auto coocs = select_coocs(train, config);
      scored.insert(scored.end(), std::make_move_iterator(coocs.begin()), std::make_move_iterator(coocs.end()));
      break;
    }
  }
  sort_by_score(scored);

  FeatureSet fs;
  fs.view = view;
  fs.config = config;
  fs.features.reserve(scored.size());
  fs.scores.reserve(scored.size());
  for (auto& [feature, score] : scored) {
    fs.features.push_back(std::move(feature));
    fs.scores.push_back(score);
  }
  return fs;
}

Vectorizer::Vectorizer(const FeatureSet& fs) : width_(fs.size()), window_(fs.config.cooc_window) {
  for (std::size_t i = 0; i < fs.features.size(); ++i) {
    const auto& f = fs.features[i];
    switch (f.kind) {
      case FeatureKind::Unigram:
        unigrams_.emplace(f.words.at(0), i);
        break;
      case FeatureKind::Bigram:
        bigrams_.emplace(pair_key(f.words.at(0), f.words.at(1)), i);
        break;
      case FeatureKind::Cooccurrence:
        coocs_.emplace(cooc_key(f.words.at(0), f.words.at(1), f.target_side), i);
        break;
    }
  }
}

BinaryVector Vectorizer::operator()(const Instance& instance) const {
  BinaryVector v(width_);
  if (!unigrams_.empty()) {
    for (const auto& tok : instance.tokens) {
      if (auto it = unigrams_.find(tok); it != unigrams_.end()) v.set(it->second);
    }
  }
  if (!bigrams_.empty()) {
    for (std::size_t i = 0; i + 1 < instance.tokens.size(); ++i) {
      if (auto it = bigrams_.find(pair_key(instance.tokens[i], instance.tokens[i + 1])); it != bigrams_.end())
        v.set(it->second);
    }
  }
  if (!coocs_.empty()) {
    for_each_cooc_slot(instance, window_, [&](const std::string& a, const std::string& b, TargetSide side) {
      if (auto it = coocs_.find(cooc_key(a, b, side)); it != coocs_.end()) v.set(it->second);
    });
  }
  return v;
}

BinaryVector vectorize(const Instance& instance, const FeatureSet& fs) { return Vectorizer(fs)(instance); }

std::vector<BinaryVector> vectorize_all(std::span<const Instance> instances, const FeatureSet& fs) {
  const Vectorizer vec(fs);
  std::vector<BinaryVector> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(vec(inst));
  return out;
}

}  // namespace lexvote
