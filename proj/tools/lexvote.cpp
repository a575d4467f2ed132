// lexvote: command-line front end for feature extraction, training,
// classification, scoring and agreement analysis.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexvote/corpus.hpp"
#include "lexvote/ensemble.hpp"
#include "lexvote/error.hpp"
#include "lexvote/eval.hpp"
#include "lexvote/experiment.hpp"
#include "lexvote/features.hpp"
#include "lexvote/model_io.hpp"
#include "lexvote/synthetic.hpp"

namespace fs = std::filesystem;
using namespace lexvote;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

// Options shared by the commands that extract features or train models.
struct PipelineOptions {
  std::string stoplist;
  FeatureExtractionConfig features;
  TreeParams tree;
  BaggingParams bagging;
  bool no_prune = false;
  bool no_resample = false;

  void add_feature_flags(CLI::App& cmd) {
    cmd.add_option("--stoplist", stoplist, "Stoplist file (one word per line, # comments)");
    cmd.add_option("--unigram-min-freq", features.unigram_min_freq, "Minimum unigram frequency")
        ->capture_default_str();
    cmd.add_option("--bigram-min-freq", features.bigram_min_freq, "Minimum bigram frequency")->capture_default_str();
    cmd.add_option("--bigram-g2", features.bigram_g2_threshold, "Bigram G2 threshold")->capture_default_str();
    cmd.add_option("--cooc-min-freq", features.cooc_min_freq, "Minimum co-occurrence frequency")
        ->capture_default_str();
    cmd.add_option("--cooc-g2", features.cooc_g2_threshold, "Co-occurrence G2 threshold")->capture_default_str();
    cmd.add_option("--cooc-window", features.cooc_window, "Co-occurrence window")->capture_default_str();
  }

  void add_training_flags(CLI::App& cmd) {
    cmd.add_option("--bags", bagging.num_bags, "Trees per bagged classifier")->capture_default_str();
    cmd.add_option("--seed", bagging.seed, "Master seed")->envname("LEXVOTE_SEED")->capture_default_str();
    cmd.add_flag("--no-resample", no_resample, "Train every bag on the full training set");
    cmd.add_flag("--no-prune", no_prune, "Disable pessimistic pruning");
    cmd.add_option("--min-leaf", tree.min_leaf_instances, "Minimum instances per leaf")->capture_default_str();
    cmd.add_option("--confidence", tree.pruning_confidence, "Pruning confidence factor")->capture_default_str();
  }

  TrainingOptions resolve() const {
    TrainingOptions out;
    if (!stoplist.empty()) out.stoplist = load_stoplist(stoplist);
    out.features = features;
    out.tree = tree;
    out.tree.prune = !no_prune;
    out.bagging = bagging;
    out.bagging.resample = !no_resample;
    return out;
  }
};

LexicalSample load_single_word(const std::string& path, const std::string& word) {
  auto instances = load_instances(path);
  if (!word.empty()) std::erase_if(instances, [&](const Instance& i) { return i.target_word != word; });
  return make_lexical_sample(std::move(instances));
}

SystemSpec resolve_system(const std::string& view, const std::string& ensemble) {
  const std::string& name = ensemble.empty() ? view : ensemble;
  if (!view.empty() && !ensemble.empty()) throw ValidationError("give either --view or --ensemble, not both");
  if (name.empty()) throw ValidationError("one of --view or --ensemble is required");
  auto spec = SystemSpec::parse(name);
  if (!spec) throw ValidationError("unknown classifier '" + name + "'");
  return *spec;
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

// Reads flat "key = value" files; keys apply to the subcommand being run.
class FlatConfig : public CLI::ConfigINI {
 public:
  explicit FlatConfig(std::string section) : section_(std::move(section)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    auto items = CLI::ConfigINI::from_config(in);
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = {section_};
    }
    return items;
  }

 private:
  std::string section_;
};

std::string first_positional(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view a = argv[i];
    if (a == "--config") ++i;
    else if (!a.starts_with('-')) return std::string(a);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexvote: word sense disambiguation with bagged decision trees over lexical features"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat 'key = value' file of long flag names (extract, train, experiment)");
  app.config_formatter(std::make_shared<FlatConfig>(first_positional(argc, argv)));

  PipelineOptions pipe;

  // extract
  std::string extract_train, extract_view = "C", extract_word, extract_out;
  auto* extract = app.add_subcommand("extract", "Select a feature set from training data");
  extract->add_option("--train", extract_train, "Training instance file")->required();
  extract->add_option("--view", extract_view, "U, B, C or mixed")->capture_default_str();
  extract->add_option("--word", extract_word, "Restrict to one target word");
  extract->add_option("--out", extract_out, "Feature set file")->required();
  pipe.add_feature_flags(*extract);

  // train
  std::string train_file, train_view, train_ensemble, train_word, train_out;
  auto* train = app.add_subcommand("train", "Train a classifier for every target word");
  train->add_option("--train", train_file, "Training instance file")->required();
  train->add_option("--view", train_view, "U, B, C, mixed, stump or majority");
  train->add_option("--ensemble", train_ensemble, "Ensemble of views, e.g. UBC");
  train->add_option("--word", train_word, "Restrict to one target word");
  train->add_option("--out", train_out, "Model bundle directory")->required();
  pipe.add_feature_flags(*train);
  pipe.add_training_flags(*train);

  // classify
  std::string classify_model, classify_input, classify_out;
  auto* classify = app.add_subcommand("classify", "Label instances with a trained model");
  classify->add_option("--model", classify_model, "Model bundle directory")->required();
  classify->add_option("--input", classify_input, "Instance file")->required();
  classify->add_option("--out", classify_out, "Prediction file (default: stdout)");

  // score
  std::string score_pred, score_gold, score_out, score_name;
  auto* score_cmd = app.add_subcommand("score", "Fine-grained accuracy of a prediction file");
  score_cmd->add_option("--pred", score_pred, "Prediction file")->required();
  score_cmd->add_option("--gold", score_gold, "Gold standard file")->required();
  score_cmd->add_option("--name", score_name, "System name (default: file stem)");
  score_cmd->add_option("--out", score_out, "Report file (TSV; default: text to stdout)");

  // agree
  std::string agree_gold, agree_out;
  std::vector<std::string> agree_preds;
  auto* agree = app.add_subcommand("agree", "Pairwise and k-way agreement of prediction files");
  agree->add_option("--gold", agree_gold, "Gold standard file")->required();
  agree->add_option("predictions", agree_preds, "Two or more prediction files")->required()->expected(2, -1);
  agree->add_option("--out", agree_out, "Report directory (default: text to stdout)");

  // experiment
  ExperimentConfig exp;
  std::string exp_train, exp_test, exp_out;
  std::vector<std::string> exp_external;
  auto* experiment = app.add_subcommand("experiment", "Train, classify, score and compare every system");
  experiment->add_option("--train", exp_train, "Training instance file")->required();
  experiment->add_option("--test", exp_test, "Test instance file")->required();
  experiment->add_option("--ensemble,--systems", exp.systems, "Systems to run (default: all ten)");
  experiment->add_option("--external", exp_external, "Prediction files of other systems");
  experiment->add_option("--out", exp_out, "Report directory")->required();
  pipe.add_feature_flags(*experiment);
  pipe.add_training_flags(*experiment);

  // generate
  SyntheticSpec synth;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic lexical sample (train.tsv, test.tsv)");
  generate->add_option("--out", gen_out, "Output directory")->required();
  generate->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  generate->add_option("--words", synth.target_words, "Target words")->capture_default_str();
  generate->add_option("--train-per-word", synth.train_per_word)->capture_default_str();
  generate->add_option("--test-per-word", synth.test_per_word)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*extract) {
      const auto sample = load_single_word(extract_train, extract_word);
      const auto opts = pipe.resolve();
      const auto view = parse_view(extract_view);
      if (!view) throw ValidationError("unknown view '" + extract_view + "'");
      const auto fs = build_feature_set(sample.train, *view, opts.stoplist, opts.features);
      save_feature_set(extract_out, fs);
      std::cout << fs.size() << " features\n";
    } else if (*train) {
      const auto spec = resolve_system(train_view, train_ensemble);
      const auto opts = pipe.resolve();
      auto instances = load_instances(train_file);
      if (!train_word.empty()) std::erase_if(instances, [&](const Instance& i) { return i.target_word != train_word; });
      ModelBundle bundle;
      bundle.spec = spec;
      bundle.tree_params = opts.tree;
      for (const auto& sample : group_by_target(instances, {}))
        bundle.words.push_back({sample.target_word, train_system(sample, spec, opts)});
      save_model_bundle(train_out, bundle);
      std::cout << "trained " << spec.name() << " for " << bundle.words.size() << " target word(s)\n";
    } else if (*classify) {
      const auto bundle = load_model_bundle(classify_model);
      Answers answers;
      for (const auto& inst : load_instances(classify_input)) answers[inst.id] = bundle.classify(inst);
      std::ostringstream out;
      write_answers(out, answers);
      write_or_print(classify_out, out.str());
    } else if (*score_cmd) {
      auto pred = load_predictions(score_pred);
      if (!score_name.empty()) pred.system_name = score_name;
      const auto report = score(pred, load_answers(score_gold));
      if (report.unanswered > 0) std::cerr << "warning: " << report.unanswered << " gold instance(s) unanswered\n";
      if (report.unknown > 0) std::cerr << "warning: " << report.unknown << " answer(s) for unknown instance ids ignored\n";
      const ScoreReport reports[] = {report};
      write_or_print(score_out, score_out.empty() ? accuracy_report_text(reports) : accuracy_report_tsv(reports));
    } else if (*agree) {
      const auto gold = load_answers(agree_gold);
      std::vector<PredictionSet> preds;
      for (const auto& p : agree_preds) preds.push_back(load_predictions(p));
      std::vector<ScoreReport> scores;
      std::vector<AgreementTable> pairwise, kway;
      for (const auto& p : preds) scores.push_back(score(p, gold));
      for (std::size_t i = 0; i < preds.size(); ++i)
        for (std::size_t j = i + 1; j < preds.size(); ++j) pairwise.push_back(pairwise_agreement(preds[i], preds[j], gold));
      if (preds.size() > 2) kway.push_back(kway_agreement(preds, gold));
      if (agree_out.empty()) {
        std::cout << accuracy_report_text(scores) << '\n' << pairwise_report_text(pairwise);
        if (!kway.empty()) std::cout << '\n' << kway_report_text(kway);
      } else {
        emit_reports(agree_out, scores, pairwise, kway);
      }
    } else if (*experiment) {
      const auto opts = pipe.resolve();
      exp.train_path = exp_train;
      exp.test_path = exp_test;
      if (!pipe.stoplist.empty()) exp.stoplist_path = pipe.stoplist;
      for (const auto& e : exp_external) exp.external_predictions.emplace_back(e);
      exp.features = opts.features;
      exp.tree = opts.tree;
      exp.bagging = opts.bagging;
      exp.out_dir = exp_out;
      const auto result = run_experiment(exp);
      std::cout << accuracy_report_text(result.scores);
      for (const auto& f : result.failures) std::cerr << "failed: " << f << '\n';
      if (!result.failures.empty()) return kExitInvalid;
    } else if (*generate) {
      const auto corpus = generate_synthetic(synth);
      fs::create_directories(gen_out);
      save_instances(fs::path(gen_out) / "train.tsv", corpus.train);
      save_instances(fs::path(gen_out) / "test.tsv", corpus.test);
      std::cout << corpus.train.size() << " training and " << corpus.test.size() << " test instances\n";
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
