#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexvote/corpus.hpp"

namespace lexvote {

/// Parameters of a generated lexical sample in which the sense of each
/// instance is fixed by the token right after the target ("cue" words, a
/// disjoint set per sense) and every other context token is drawn from a
/// shared topical vocabulary that carries no sense information.
struct SyntheticSpec {
  std::vector<std::string> target_words = {"bank", "line", "plant"};
  std::vector<double> sense_weights = {0.5, 0.3, 0.2};  // one entry per sense
  long train_per_word = 500;
  long test_per_word = 200;
  int cues_per_sense = 3;
  int context_length = 24;
  int topical_vocabulary = 300;
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  std::vector<Instance> train;
  std::vector<Instance> test;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

}  // namespace lexvote
