#include "lexvote/ensemble.hpp"

#include <algorithm>

#include "lexvote/error.hpp"

namespace lexvote {

namespace {

void check_target(const std::string& expected, const Instance& instance) {
  if (instance.target_word != expected)
    throw ValidationError("instance " + instance.id + " has target '" + instance.target_word +
                          "' but the classifier was trained for '" + expected + "'");
}

std::vector<std::string> train_labels(const LexicalSample& sample) {
  std::vector<std::string> labels;
  labels.reserve(sample.train.size());
  for (const auto& inst : sample.train) labels.push_back(*inst.gold_sense);
  return labels;
}

void require_training_data(const LexicalSample& sample) {
  if (sample.train.empty())
    throw ValidationError("empty training set for target '" + sample.target_word + "'");
}

// FNV-1a over the view name.
std::uint64_t view_tag(View view) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : view_name(view)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void BaggingParams::validate() const {
  if (num_bags < 1) throw ValidationError("num_bags must be >= 1");
}

std::optional<EnsembleSpec> EnsembleSpec::parse(std::string_view name) {
  if (name == "mixed") return EnsembleSpec{{View::Mixed}};
  if (name.empty()) return std::nullopt;
  bool seen[3] = {false, false, false};
  for (char c : name) {
    const int slot = c == 'U' ? 0 : c == 'B' ? 1 : c == 'C' ? 2 : -1;
    if (slot < 0 || seen[slot]) return std::nullopt;
    seen[slot] = true;
  }
  EnsembleSpec spec;
  if (seen[0]) spec.members.push_back(View::Unigram);
  if (seen[1]) spec.members.push_back(View::Bigram);
  if (seen[2]) spec.members.push_back(View::Cooccurrence);
  return spec;
}

std::string EnsembleSpec::name() const {
  std::string out;
  for (auto v : members) out += view_name(v);
  return out;
}

std::string majority_vote(const std::vector<std::string>& votes, const SenseCounts& priors) {
  if (votes.empty()) throw ValidationError("majority vote over zero votes");
  std::map<std::string, long> tally;
  for (const auto& v : votes) ++tally[v];

  auto prior = [&](const std::string& s) {
    auto it = priors.find(s);
    return it == priors.end() ? 0L : it->second;
  };
  // std::map iterates in lexicographic order, so strict comparisons keep the smaller id on full ties.
  const std::string* best = nullptr;
  long best_votes = 0;
  for (const auto& [sense, count] : tally) {
    if (!best || count > best_votes || (count == best_votes && prior(sense) > prior(*best))) {
      best = &sense;
      best_votes = count;
    }
  }
  return *best;
}

std::uint64_t member_seed(std::uint64_t master_seed, View view) { return master_seed ^ view_tag(view); }

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) {
    // Multiply-shift keeps the draw identical across standard libraries.
    i = static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
  }
  return idx;
}

BaggedClassifier train_bagged(const LexicalSample& sample, View view, const Stoplist& stoplist,
                              const FeatureExtractionConfig& config, const TreeParams& tree_params,
                              const BaggingParams& bag_params) {
  require_training_data(sample);
  bag_params.validate();
  tree_params.validate();

  BaggedClassifier clf;
  clf.target_word = sample.target_word;
  clf.view = view;
  clf.feature_set = build_feature_set(sample.train, view, stoplist, config);
  clf.params = bag_params;
  clf.params.seed = member_seed(bag_params.seed, view);
  clf.sense_priors = sample.sense_counts();

  const auto vectors = vectorize_all(sample.train, clf.feature_set);
  const auto labels = train_labels(sample);

  std::mt19937_64 rng(clf.params.seed);
  clf.trees.reserve(static_cast<std::size_t>(bag_params.num_bags));
  for (long b = 0; b < bag_params.num_bags; ++b) {
    if (!bag_params.resample) {
      clf.trees.push_back(train_tree(vectors, labels, tree_params));
      continue;
    }
    std::vector<BinaryVector> bag_vectors;
    std::vector<std::string> bag_labels;
    bag_vectors.reserve(vectors.size());
    bag_labels.reserve(labels.size());
    for (auto i : bootstrap_indices(vectors.size(), rng)) {
      bag_vectors.push_back(vectors[i]);
      bag_labels.push_back(labels[i]);
    }
    clf.trees.push_back(train_tree(bag_vectors, bag_labels, tree_params));
  }
  return clf;
}

std::string classify_bagged(const BaggedClassifier& clf, const BinaryVector& v) {
  std::vector<std::string> votes;
  votes.reserve(clf.trees.size());
  for (const auto& tree : clf.trees) votes.push_back(tree.classify(v));
  return majority_vote(votes, clf.sense_priors);
}

std::string classify_bagged(const BaggedClassifier& clf, const Instance& instance) {
  check_target(clf.target_word, instance);
  return classify_bagged(clf, vectorize(instance, clf.feature_set));
}

Ensemble train_ensemble(const LexicalSample& sample, const EnsembleSpec& spec, const Stoplist& stoplist,
                        const FeatureExtractionConfig& config, const TreeParams& tree_params,
                        const BaggingParams& bag_params) {
  std::map<View, BaggedClassifier> trained;
  for (auto view : spec.members)
    trained.emplace(view, train_bagged(sample, view, stoplist, config, tree_params, bag_params));
  return assemble_ensemble(spec, trained);
}

Ensemble assemble_ensemble(const EnsembleSpec& spec, const std::map<View, BaggedClassifier>& trained) {
  if (spec.members.empty()) throw ValidationError("ensemble with no members");
  Ensemble e;
  e.spec = spec;
  for (auto view : spec.members) {
    auto it = trained.find(view);
    if (it == trained.end()) throw ValidationError("missing trained member " + std::string(view_name(view)));
    e.members.push_back(it->second);
  }
  e.sense_priors = e.members.front().sense_priors;
  return e;
}

std::string classify_ensemble(const Ensemble& e, const Instance& instance) {
  std::vector<std::string> votes;
  votes.reserve(e.members.size());
  for (const auto& m : e.members) votes.push_back(classify_bagged(m, instance));
  return majority_vote(votes, e.sense_priors);
}

MajorityClassifier train_majority(const LexicalSample& sample) {
  require_training_data(sample);
  const auto counts = sample.sense_counts();
  // Strict > over lexicographic map order keeps the smaller sense on ties.
  const std::string* best = nullptr;
  long best_count = 0;
  for (const auto& [sense, c] : counts) {
    if (!best || c > best_count) {
      best = &sense;
      best_count = c;
    }
  }
  return MajorityClassifier{sample.target_word, *best};
}

std::string classify_majority(const MajorityClassifier& m, const Instance& instance) {
  check_target(m.target_word, instance);
  return m.sense;
}

StumpClassifier train_stump_classifier(const LexicalSample& sample, const FeatureExtractionConfig& config) {
  require_training_data(sample);
  StumpClassifier s;
  s.target_word = sample.target_word;
  // The co-occurrence view takes no stoplist.
  s.feature_set = build_feature_set(sample.train, View::Cooccurrence, Stoplist{}, config);
  s.sense_priors = sample.sense_counts();
  s.tree = train_stump(vectorize_all(sample.train, s.feature_set), train_labels(sample));
  return s;
}

std::string classify_stump(const StumpClassifier& s, const Instance& instance) {
  check_target(s.target_word, instance);
  return s.tree.classify(vectorize(instance, s.feature_set));
}

std::optional<SystemSpec> SystemSpec::parse(std::string_view name) {
  if (name == "stump") return SystemSpec{Kind::Stump, {}};
  if (name == "majority") return SystemSpec{Kind::Majority, {}};
  if (auto e = EnsembleSpec::parse(name)) return SystemSpec{Kind::Ensemble, *e};
  return std::nullopt;
}

std::string SystemSpec::name() const {
  switch (kind) {
    case Kind::Stump: return "stump";
    case Kind::Majority: return "majority";
    case Kind::Ensemble: return ensemble.name();
  }
  return "?";
}

std::vector<SystemSpec> default_systems() {
  std::vector<SystemSpec> out;
  for (const char* name : {"U", "B", "C", "UB", "UC", "BC", "UBC", "mixed", "stump", "majority"})
    out.push_back(*SystemSpec::parse(name));
  return out;
}

TrainedSystem train_system(const LexicalSample& sample, const SystemSpec& spec, const TrainingOptions& options) {
  switch (spec.kind) {
    case SystemSpec::Kind::Stump:
      return train_stump_classifier(sample, options.features);
    case SystemSpec::Kind::Majority:
      return train_majority(sample);
    case SystemSpec::Kind::Ensemble:
      break;
  }
  return train_ensemble(sample, spec.ensemble, options.stoplist, options.features, options.tree, options.bagging);
}

std::string classify_system(const TrainedSystem& system, const Instance& instance) {
  struct Visitor {
    const Instance& inst;
    std::string operator()(const Ensemble& e) const { return classify_ensemble(e, inst); }
    std::string operator()(const StumpClassifier& s) const { return classify_stump(s, inst); }
    std::string operator()(const MajorityClassifier& m) const { return classify_majority(m, inst); }
  };
  return std::visit(Visitor{instance}, system);
}

}  // namespace lexvote
