#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lexvote/ensemble.hpp"
#include "lexvote/features.hpp"
#include "lexvote/tree.hpp"

namespace lexvote {

// Text formats. Every file starts with a "lexvote-<kind> <version>" line;
// readers reject other versions with ValidationError and malformed content
// with ParseError. Doubles are written in shortest round-trip form, so
// write -> read reproduces values exactly.

inline constexpr int kFormatVersion = 1;

void write_feature_set(std::ostream& out, const FeatureSet& fs);
FeatureSet read_feature_set(std::istream& in, const std::string& source = "<stream>");
void save_feature_set(const std::filesystem::path& path, const FeatureSet& fs);
FeatureSet load_feature_set(const std::filesystem::path& path);

/// Preorder, one node per line, indented by depth:
///   split <feature_index> <majority sense> <sense>=<count> ...
///   leaf <prediction> <sense>=<count> ...
void write_tree(std::ostream& out, const DecisionTree& tree);
DecisionTree read_tree(std::istream& in, const std::string& source = "<stream>");

/// Bagged classifier directory: manifest.txt, featureset.txt, tree_NNN.txt.
void save_bagged(const std::filesystem::path& dir, const BaggedClassifier& clf, const TreeParams& tree_params);
BaggedClassifier load_bagged(const std::filesystem::path& dir);

struct WordModel {
  std::string target_word;
  TrainedSystem system;
};

/// One trained system for every target word of a training file.
struct ModelBundle {
  SystemSpec spec;
  TreeParams tree_params;  // recorded for provenance only
  std::vector<WordModel> words;

  /// Classifies with the model of the instance's target word. Throws
  /// ValidationError for words the bundle was not trained on.
  std::string classify(const Instance& instance) const;
};

void save_model_bundle(const std::filesystem::path& dir, const ModelBundle& bundle);
ModelBundle load_model_bundle(const std::filesystem::path& dir);

}  // namespace lexvote
