#include "lexvote/experiment.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lexvote/error.hpp"
#include "text_util.hpp"

namespace lexvote {

namespace {

std::vector<SystemSpec> resolve_systems(const ExperimentConfig& config) {
  if (config.systems.empty()) return default_systems();
  std::vector<SystemSpec> out;
  std::set<std::string> seen;
  for (const auto& name : config.systems) {
    auto spec = SystemSpec::parse(name);
    if (!spec) throw ValidationError("unknown system '" + name + "'");
    if (seen.insert(spec->name()).second) out.push_back(*spec);
  }
  return out;
}

const PredictionSet* find(const std::vector<PredictionSet>& preds, const std::string& name) {
  for (const auto& p : preds) {
    if (p.system_name == name) return &p;
  }
  return nullptr;
}

// Groups analysed jointly: the three lexical members, the full ensemble with
// the two baselines, and the full ensemble alongside any external systems.
std::vector<std::vector<std::string>> kway_groups(const std::vector<PredictionSet>& preds,
                                                  const std::vector<std::string>& externals) {
  std::vector<std::vector<std::string>> groups;
  auto add_if_present = [&](std::vector<std::string> names) {
    if (names.size() < 2) return;
    for (const auto& n : names) {
      if (!find(preds, n)) return;
    }
    for (const auto& g : groups) {
      if (g == names) return;
    }
    groups.push_back(std::move(names));
  };
  add_if_present({"U", "B", "C"});
  add_if_present({"UBC", "stump", "majority"});
  if (!externals.empty()) {
    std::vector<std::string> with_ubc = {"UBC"};
    with_ubc.insert(with_ubc.end(), externals.begin(), externals.end());
    add_if_present(with_ubc);
    with_ubc.push_back("stump");
    with_ubc.push_back("majority");
    add_if_present(with_ubc);
  }
  std::vector<std::string> all;
  for (const auto& p : preds) all.push_back(p.system_name);
  add_if_present(all);
  return groups;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void ExperimentConfig::validate() const {
  if (resolve_systems(*this).empty()) throw ValidationError("no classifiers requested");
  features.validate();
  tree.validate();
  bagging.validate();
}

std::string describe_config(const ExperimentConfig& c) {
  using detail::format_double;
  std::ostringstream out;
  out << "train = " << c.train_path.string() << '\n'
      << "test = " << c.test_path.string() << '\n'
      << "stoplist = " << (c.stoplist_path ? c.stoplist_path->string() : "") << '\n';
  out << "systems =";
  for (const auto& s : resolve_systems(c)) out << ' ' << s.name();
  out << '\n';
  for (const auto& e : c.external_predictions) out << "external = " << e.string() << '\n';
  out << "unigram_min_freq = " << c.features.unigram_min_freq << '\n'
      << "bigram_min_freq = " << c.features.bigram_min_freq << '\n'
      << "bigram_g2 = " << format_double(c.features.bigram_g2_threshold) << '\n'
      << "cooc_min_freq = " << c.features.cooc_min_freq << '\n'
      << "cooc_g2 = " << format_double(c.features.cooc_g2_threshold) << '\n'
      << "cooc_window = " << c.features.cooc_window << '\n'
      << "min_leaf = " << c.tree.min_leaf_instances << '\n'
      << "pruning_confidence = " << format_double(c.tree.pruning_confidence) << '\n'
      << "prune = " << (c.tree.prune ? "true" : "false") << '\n'
      << "bags = " << c.bagging.num_bags << '\n'
      << "resample = " << (c.bagging.resample ? "true" : "false") << '\n'
      << "seed = " << c.bagging.seed << '\n';
  return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto systems = resolve_systems(config);

  TrainingOptions options;
  if (config.stoplist_path) options.stoplist = load_stoplist(*config.stoplist_path);
  options.features = config.features;
  options.tree = config.tree;
  options.bagging = config.bagging;

  const auto train = load_instances(config.train_path);
  const auto test = load_instances(config.test_path);
  const auto samples = group_by_target(train, test);

  std::set<View> views;
  for (const auto& s : systems) {
    if (s.kind == SystemSpec::Kind::Ensemble) views.insert(s.ensemble.members.begin(), s.ensemble.members.end());
  }

  ExperimentResult result;
  for (const auto& s : systems) result.predictions[s.name()].system_name = s.name();

  for (const auto& sample : samples) {
    if (sample.test.empty()) continue;
    try {
      // Each view is trained once and shared by every ensemble that uses it;
      // per-view seeds make this identical to training the ensembles separately.
      std::map<View, BaggedClassifier> trained;
      for (auto v : views)
        trained.emplace(v, train_bagged(sample, v, options.stoplist, options.features, options.tree, options.bagging));

      std::vector<std::pair<std::string, TrainedSystem>> models;
      for (const auto& s : systems) {
        if (s.kind == SystemSpec::Kind::Ensemble) models.emplace_back(s.name(), assemble_ensemble(s.ensemble, trained));
        else models.emplace_back(s.name(), train_system(sample, s, options));
      }
      std::map<std::string, Answers> answers;
      for (const auto& inst : sample.test) {
        for (const auto& [name, model] : models) answers[name][inst.id] = classify_system(model, inst);
      }
      for (auto& [name, a] : answers) result.predictions[name].answers.merge(a);
    } catch (const std::exception& e) {
      result.failures.push_back(sample.target_word + ": " + e.what());
    }
  }

  std::vector<PredictionSet> ordered;
  for (const auto& s : systems) ordered.push_back(result.predictions.at(s.name()));
  std::vector<std::string> external_names;
  for (const auto& path : config.external_predictions) {
    auto p = load_predictions(path);
    if (find(ordered, p.system_name)) throw ValidationError("external system name clashes: " + p.system_name);
    external_names.push_back(p.system_name);
    ordered.push_back(std::move(p));
  }

  const auto gold = gold_from_instances(test);
  if (!gold.empty()) {
    for (const auto& p : ordered) result.scores.push_back(score(p, gold));
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      for (std::size_t j = i + 1; j < ordered.size(); ++j)
        result.pairwise.push_back(pairwise_agreement(ordered[i], ordered[j], gold));
    }
    for (const auto& group : kway_groups(ordered, external_names)) {
      std::vector<PredictionSet> members;
      for (const auto& name : group) members.push_back(*find(ordered, name));
      result.kway.push_back(kway_agreement(members, gold));
    }
  }

  const auto pred_dir = config.out_dir / "predictions";
  std::error_code ec;
  std::filesystem::create_directories(pred_dir, ec);
  if (ec) throw IoError("cannot create " + pred_dir.string() + ": " + ec.message());
  for (const auto& s : systems) save_answers(pred_dir / (s.name() + ".tsv"), result.predictions.at(s.name()).answers);

  emit_reports(config.out_dir, result.scores, result.pairwise, result.kway);
  write_text(config.out_dir / "config.txt", describe_config(config));

  const auto failures_path = config.out_dir / "failures.txt";
  if (!result.failures.empty()) {
    std::string text;
    for (const auto& f : result.failures) text += f + '\n';
    write_text(failures_path, text);
  } else {
    std::filesystem::remove(failures_path, ec);
  }
  return result;
}

}  // namespace lexvote
