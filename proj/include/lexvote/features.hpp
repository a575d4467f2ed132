#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexvote/corpus.hpp"

namespace lexvote {

/// Feature view of the training data. U, B and C are the three lexical
/// views; Mixed is the union of the bigram and co-occurrence views.
enum class View { Unigram, Bigram, Cooccurrence, Mixed };

std::string_view view_name(View view);  // "U", "B", "C", "mixed"
std::optional<View> parse_view(std::string_view name);

enum class FeatureKind { Unigram, Bigram, Cooccurrence };

std::string_view kind_name(FeatureKind kind);
std::optional<FeatureKind> parse_kind(std::string_view name);

/// Which element of a co-occurrence pair is the target token.
enum class TargetSide { None, First, Second };

struct FeatureExtractionConfig {
  long unigram_min_freq = 5;
  long bigram_min_freq = 2;
  double bigram_g2_threshold = 6.635;  // chi-square(1) critical value, p = 0.01
  long cooc_min_freq = 2;
  double cooc_g2_threshold = 2.706;  // chi-square(1) critical value, p = 0.10
  int cooc_window = 2;

  /// Throws ValidationError when a count is < 1, a threshold is negative,
  /// or the window is < 1.
  void validate() const;

  bool operator==(const FeatureExtractionConfig&) const = default;
};

struct Feature {
  FeatureKind kind = FeatureKind::Unigram;
  std::vector<std::string> words;  // corpus order
  TargetSide target_side = TargetSide::None;

  static Feature unigram(std::string word);
  static Feature bigram(std::string first, std::string second);
  static Feature cooccurrence(std::string first, std::string second, TargetSide target_side);

  /// "water", "the channel", "art of" ...
  std::string text() const;

  bool operator==(const Feature&) const = default;
  // Lexicographic on words first so that feature sets sort by surface form.
  std::strong_ordering operator<=>(const Feature& other) const;
};

/// An ordered, duplicate-free list of binary features plus the configuration
/// that selected them. `scores[i]` is the selection score of `features[i]`
/// (corpus frequency for unigrams, G2 for pairs); features are sorted by
/// descending score with lexicographic tie-breaks.
struct FeatureSet {
  View view = View::Unigram;
  std::vector<Feature> features;
  std::vector<double> scores;
  FeatureExtractionConfig config;

  std::size_t size() const { return features.size(); }
  bool empty() const { return features.empty(); }
};

/// Presence bits aligned with a FeatureSet.
struct BinaryVector {
  std::vector<bool> bits;

  BinaryVector() = default;
  explicit BinaryVector(std::size_t width) : bits(width, false) {}
  BinaryVector(std::initializer_list<bool> init) : bits(init) {}

  std::size_t size() const { return bits.size(); }
  bool operator[](std::size_t i) const { return bits[i]; }
  void set(std::size_t i, bool value = true) { bits[i] = value; }

  bool operator==(const BinaryVector&) const = default;
};

struct ContingencyTable {
  long n11 = 0, n12 = 0, n21 = 0, n22 = 0;

  long total() const { return n11 + n12 + n21 + n22; }

  /// Builds the 2x2 table for a pair from its joint count, the two marginal
  /// counts and the event total.
  static ContingencyTable from_marginals(long joint, long first_total, long second_total, long n);
};

/// Log-likelihood ratio G2 = 2 * sum O ln(O / E) over the four cells, with
/// expected counts from the row and column marginals and 0 ln 0 = 0.
/// Throws DomainError for negative counts or an all-zero table.
double g2_statistic(long n11, long n12, long n21, long n22);
double g2_statistic(const ContingencyTable& table);

/// One entry per non-stoplisted token occurrence (the target token included).
std::vector<Feature> extract_unigram_candidates(const Instance& instance, const Stoplist& stoplist);

/// One entry per adjacent pair, except pairs whose two words are both stoplisted.
std::vector<Feature> extract_bigram_candidates(const Instance& instance, const Stoplist& stoplist);

/// Pairs of the target token with every token at distance 1..window, left
/// neighbours as (token, target) and right neighbours as (target, token).
/// No stoplist is applied.
std::vector<Feature> extract_cooc_candidates(const Instance& instance, int window);

/// Selects the features of `view` from the training instances.
///  - U: unigram candidates with frequency >= unigram_min_freq.
///  - B: bigram candidates with frequency >= bigram_min_freq and
///       G2 >= bigram_g2_threshold over the adjacent-pair event space.
///  - C: co-occurrence candidates with frequency >= cooc_min_freq and
///       G2 >= cooc_g2_threshold over the (instance, offset) slot space.
///  - mixed: B and C together, kinds kept distinct.
FeatureSet build_feature_set(std::span<const Instance> train, View view, const Stoplist& stoplist,
                             const FeatureExtractionConfig& config = {});

/// Maps instances onto a feature set. Construction indexes the features once,
/// so reuse a Vectorizer when converting many instances.
class Vectorizer {
 public:
  explicit Vectorizer(const FeatureSet& fs);

  BinaryVector operator()(const Instance& instance) const;
  std::size_t width() const { return width_; }

 private:
  std::size_t width_ = 0;
  int window_ = 2;
  std::unordered_map<std::string, std::size_t> unigrams_;
  std::unordered_map<std::string, std::size_t> bigrams_;
  std::unordered_map<std::string, std::size_t> coocs_;
};

BinaryVector vectorize(const Instance& instance, const FeatureSet& fs);
std::vector<BinaryVector> vectorize_all(std::span<const Instance> instances, const FeatureSet& fs);

}  // namespace lexvote
