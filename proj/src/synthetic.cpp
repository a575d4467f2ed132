#include "lexvote/synthetic.hpp"

#include <random>

#include "lexvote/error.hpp"

namespace lexvote {

namespace {

// Uniform index in [0, n) that does not depend on the standard library's distributions.
std::size_t draw(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

std::size_t draw_weighted(std::mt19937_64& rng, const std::vector<double>& cumulative) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cumulative.back();
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (u < cumulative[i]) return i;
  }
  return cumulative.size() - 1;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.target_words.empty() || spec.sense_weights.empty()) throw ValidationError("synthetic spec needs words and senses");
  if (spec.context_length < 3 || spec.cues_per_sense < 1 || spec.topical_vocabulary < 1)
    throw ValidationError("synthetic spec sizes too small");

  std::vector<double> cumulative;
  double acc = 0.0;
  for (double w : spec.sense_weights) {
    if (!(w > 0.0)) throw ValidationError("sense weights must be positive");
    cumulative.push_back(acc += w);
  }

  // Function words mixed into the topical noise.
  const std::vector<std::string> function_words = {"the", "of", "a", "to", "and", "in", "is", "it"};

  std::mt19937_64 rng(spec.seed);
  SyntheticCorpus corpus;
  for (std::size_t w = 0; w < spec.target_words.size(); ++w) {
    const auto& target = spec.target_words[w];
    auto noise_token = [&]() -> std::string {
      if (draw(rng, 4) == 0) return function_words[draw(rng, function_words.size())];
      return "topic" + std::to_string(draw(rng, static_cast<std::size_t>(spec.topical_vocabulary)));
    };

    auto make = [&](const std::string& id) {
      const auto sense = draw_weighted(rng, cumulative);
      Instance inst;
      inst.id = id;
      inst.target_word = target;
      inst.gold_sense = target + "%" + std::to_string(sense + 1);
      const auto len = static_cast<std::size_t>(spec.context_length);
      inst.target_index = 1 + draw(rng, len - 2);
      inst.tokens.reserve(len);
      for (std::size_t i = 0; i < len; ++i) inst.tokens.push_back(noise_token());
      inst.tokens[inst.target_index] = target;
      inst.tokens[inst.target_index + 1] =
          target + "cue" + std::to_string(sense + 1) + "x" + std::to_string(draw(rng, static_cast<std::size_t>(spec.cues_per_sense)));
      return inst;
    };

    for (long i = 0; i < spec.train_per_word; ++i) corpus.train.push_back(make(target + ".train." + std::to_string(i)));
    for (long i = 0; i < spec.test_per_word; ++i) corpus.test.push_back(make(target + ".test." + std::to_string(i)));
  }
  return corpus;
}

}  // namespace lexvote
