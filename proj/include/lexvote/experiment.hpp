#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexvote/ensemble.hpp"
#include "lexvote/eval.hpp"

namespace lexvote {

struct ExperimentConfig {
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::optional<std::filesystem::path> stoplist_path;
  std::vector<std::string> systems;  // empty: default_systems()
  /// Prediction files of other systems to include in the agreement analysis.
  std::vector<std::filesystem::path> external_predictions;
  FeatureExtractionConfig features;
  TreeParams tree;
  BaggingParams bagging;  // bagging.seed is the master seed
  std::filesystem::path out_dir;

  /// Checks system names and parameters; throws ValidationError.
  void validate() const;
};

struct ExperimentResult {
  std::vector<ScoreReport> scores;
  std::vector<AgreementTable> pairwise;
  std::vector<AgreementTable> kway;
  std::map<std::string, PredictionSet> predictions;
  std::vector<std::string> failures;  // "<word>: <message>"
};

/// Trains every requested system per target word, classifies the test
/// instances and writes predictions/<system>.tsv, the accuracy, pairwise and
/// k-way reports, config.txt and (when a word failed) failures.txt into
/// `out_dir`. A failing word is recorded and the run continues.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Flat "key = value" rendering of a configuration, as written to config.txt.
std::string describe_config(const ExperimentConfig& config);

}  // namespace lexvote
