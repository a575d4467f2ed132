#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lexvote/corpus.hpp"
#include "lexvote/features.hpp"
#include "lexvote/tree.hpp"

namespace lexvote {

struct BaggingParams {
  long num_bags = 10;
  std::uint64_t seed = 0;
  bool resample = true;  // bootstrap with replacement, n draws from n

  void validate() const;
  bool operator==(const BaggingParams&) const = default;
};

/// Trees learned from bootstrap resamples of one feature view. The feature
/// set is selected once from the full training data.
struct BaggedClassifier {
  std::string target_word;
  View view = View::Unigram;
  FeatureSet feature_set;
  std::vector<DecisionTree> trees;
  BaggingParams params;  // params.seed is the derived per-view seed
  SenseCounts sense_priors;
};

/// Members of a voting ensemble: a non-empty subset of {U, B, C}, or {mixed}.
struct EnsembleSpec {
  std::vector<View> members;  // canonical order U, B, C

  /// "U", "BC", "UBC", "mixed" ... Returns nullopt for anything else.
  static std::optional<EnsembleSpec> parse(std::string_view name);
  std::string name() const;

  bool operator==(const EnsembleSpec&) const = default;
};

struct Ensemble {
  EnsembleSpec spec;
  std::vector<BaggedClassifier> members;
  SenseCounts sense_priors;
};

struct MajorityClassifier {
  std::string target_word;
  std::string sense;
};

/// One-node tree over the co-occurrence view.
struct StumpClassifier {
  std::string target_word;
  FeatureSet feature_set;
  DecisionTree tree;
  SenseCounts sense_priors;
};

/// Majority vote with the fixed tie-break chain: most votes, then larger
/// prior count, then lexicographically smaller sense. Throws ValidationError
/// for an empty vote list.
std::string majority_vote(const std::vector<std::string>& votes, const SenseCounts& priors);

/// Stable seed of one view's member: master seed XOR a per-view tag.
std::uint64_t member_seed(std::uint64_t master_seed, View view);

/// Bootstrap indices: n uniform draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::mt19937_64& rng);

BaggedClassifier train_bagged(const LexicalSample& sample, View view, const Stoplist& stoplist,
                              const FeatureExtractionConfig& config, const TreeParams& tree_params,
                              const BaggingParams& bag_params);

std::string classify_bagged(const BaggedClassifier& clf, const Instance& instance);
std::string classify_bagged(const BaggedClassifier& clf, const BinaryVector& v);

Ensemble train_ensemble(const LexicalSample& sample, const EnsembleSpec& spec, const Stoplist& stoplist,
                        const FeatureExtractionConfig& config, const TreeParams& tree_params,
                        const BaggingParams& bag_params);

/// Builds an ensemble from already trained members, looked up by view.
Ensemble assemble_ensemble(const EnsembleSpec& spec, const std::map<View, BaggedClassifier>& trained);

std::string classify_ensemble(const Ensemble& e, const Instance& instance);

MajorityClassifier train_majority(const LexicalSample& sample);
std::string classify_majority(const MajorityClassifier& m, const Instance& instance);

StumpClassifier train_stump_classifier(const LexicalSample& sample, const FeatureExtractionConfig& config);
std::string classify_stump(const StumpClassifier& s, const Instance& instance);

/// A named system as listed in accuracy reports: an ensemble ("U" .. "UBC",
/// "mixed"), "stump" or "majority".
struct SystemSpec {
  enum class Kind { Ensemble, Stump, Majority };
  Kind kind = Kind::Ensemble;
  EnsembleSpec ensemble;

  static std::optional<SystemSpec> parse(std::string_view name);
  std::string name() const;
};

/// The default row set: U, B, C, UB, UC, BC, UBC, mixed, stump, majority.
std::vector<SystemSpec> default_systems();

struct TrainingOptions {
  Stoplist stoplist;
  FeatureExtractionConfig features;
  TreeParams tree;
  BaggingParams bagging;
};

using TrainedSystem = std::variant<Ensemble, StumpClassifier, MajorityClassifier>;

TrainedSystem train_system(const LexicalSample& sample, const SystemSpec& spec, const TrainingOptions& options);
std::string classify_system(const TrainedSystem& system, const Instance& instance);

}  // namespace lexvote
