// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "lexvote/ensemble.hpp"
#include "lexvote/eval.hpp"
#include "lexvote/experiment.hpp"
#include "lexvote/features.hpp"
#include "lexvote/synthetic.hpp"
#include "lexvote/tree.hpp"
#include "oracles.hpp"
#include "agreement_fixture.hpp"
#include "test_support.hpp"

using namespace lexvote;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr double kG2Tolerance = 1e-9;
constexpr double kPercentTolerance = 0.1;  // percentage points
constexpr double kMinCoocAccuracy = 0.95;
constexpr double kMajorityWindow = 0.03;
constexpr std::uint64_t kSeed = 20020711;

const std::string kFixtures = LEXVOTE_FIXTURE_DIR;
const std::string kData = LEXVOTE_DATA_DIR;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::set<std::string> texts(const std::vector<Feature>& fs) {
  std::set<std::string> out;
  for (const auto& f : fs) out.insert(f.text());
  return out;
}

Instance parse_one(const std::string& line) {
  std::istringstream in(line);
  return read_instances(in).at(0);
}

std::vector<Instance> copies(const Instance& inst, int n) {
  std::vector<Instance> out;
  for (int i = 0; i < n; ++i) {
    auto c = inst;
    c.id += "." + std::to_string(i);
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> labels(const std::vector<Instance>& instances) {
  std::vector<std::string> out;
  for (const auto& i : instances) out.push_back(*i.gold_sense);
  return out;
}

std::vector<std::vector<bool>> raw(const std::vector<BinaryVector>& xs) {
  std::vector<std::vector<bool>> out;
  for (const auto& v : xs) out.push_back(v.bits);
  return out;
}

long correct_count(const DecisionTree& t, const std::vector<BinaryVector>& xs, const std::vector<std::string>& ys) {
  long c = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) c += t.classify(xs[i]) == ys[i];
  return c;
}

LexicalSample synthetic_sample(std::uint64_t seed, long train, long test) {
  SyntheticSpec spec;
  spec.target_words = {"line"};
  spec.train_per_word = train;
  spec.test_per_word = test;
  spec.seed = seed;
  auto c = generate_synthetic(spec);
  return make_lexical_sample(c.train, c.test);
}

// A bagged classifier that always answers `sense`.
BaggedClassifier constant(View v, const std::string& sense) {
  BaggedClassifier b;
  b.target_word = "w";
  b.view = v;
  b.feature_set.view = v;
  b.trees = {DecisionTree::leaf(0, {{sense, 1}}, sense)};
  b.sense_priors = {{sense, 1}};
  return b;
}

std::string vote_of(const std::vector<std::string>& votes, const SenseCounts& priors) {
  static const View order[] = {View::Unigram, View::Bigram, View::Cooccurrence};
  Ensemble e;
  std::string name;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    e.members.push_back(constant(order[i], votes[i]));
    name += view_name(order[i]);
  }
  e.spec = *EnsembleSpec::parse(name);
  e.sense_priors = priors;
  return classify_ensemble(e, testing::make_instance("t", "w", {"w"}, 0));
}

// ---------------------------------------------------------------------------

Outcome worked_examples() {
  Outcome o;
  const auto stop = load_stoplist(kData + "/stoplists/english.txt");

  const auto water = parse_one("w1\twater\t1\ts\tI water the flowering flowers");
  o.require(texts(extract_unigram_candidates(water, stop)) == std::set<std::string>{"water", "flowering", "flowers"},
            "water: unigram candidates differ");
  const auto uni = texts(extract_unigram_candidates(water, stop));
  o.require(!uni.contains("i") && !uni.contains("the"), "water: stoplisted I/the admitted");

  const auto channel = parse_one("c1\tchannel\t3\ts\tGo to the channel quickly");
  std::vector<std::string> bigrams;
  for (const auto& f : extract_bigram_candidates(channel, stop)) bigrams.push_back(f.text());
  o.require(bigrams == std::vector<std::string>{"go to", "the channel", "channel quickly"},
            "channel: bigram candidates differ");

  const auto art = parse_one("a1\tart\t4\ts\tHe and I like art of a certain period");
  o.require(texts(extract_cooc_candidates(art, 2)) == std::set<std::string>{"i art", "like art", "art of", "art a"},
            "art: co-occurrence candidates differ");
  return o;
}

Outcome g2_oracle() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    long c[4];
    do {
      for (auto& x : c) x = static_cast<long>(rng() % 51);
    } while (c[0] + c[1] + c[2] + c[3] == 0);
    worst = std::max(worst, std::abs(g2_statistic(c[0], c[1], c[2], c[3]) - oracle::g2_events(c[0], c[1], c[2], c[3])));
  }
  o.require(worst <= kG2Tolerance, "max |G2 - oracle| = " + std::to_string(worst));

  double worst_zero = 0;
  for (int i = 0; i < 50; ++i) {
    const long a = 1 + rng() % 10, b = rng() % 10, k = 1 + rng() % 5, m = 1 + rng() % 5;
    worst_zero = std::max(worst_zero, std::abs(g2_statistic(k * a, k * b, m * a, m * b)));
  }
  o.require(worst_zero <= kG2Tolerance, "proportional rows give G2 = " + std::to_string(worst_zero));

  const FeatureExtractionConfig defaults;
  o.require(defaults.bigram_g2_threshold == 6.635 && defaults.cooc_g2_threshold == 2.706, "default thresholds");

  // Bigram gate: "the channel" scores G2(2,0,0,18) on this corpus.
  auto train = copies(parse_one("c\tchannel\t3\ts1\tgo to the channel quickly"), 2);
  const auto filler = copies(parse_one("f\tchannel\t0\ts2\tchannel ships enter at dawn"), 3);
  train.insert(train.end(), filler.begin(), filler.end());
  const auto the_channel = Feature::bigram("the", "channel");
  auto has = [](const FeatureSet& fs, const Feature& f) {
    return std::find(fs.features.begin(), fs.features.end(), f) != fs.features.end();
  };
  auto cfg = defaults;
  const double gb = g2_statistic(2, 0, 0, 18);
  cfg.bigram_g2_threshold = gb;
  o.require(has(build_feature_set(train, View::Bigram, Stoplist{}, cfg), the_channel), "bigram kept at G2 == threshold");
  cfg.bigram_g2_threshold = std::nextafter(gb, 100.0);
  o.require(!has(build_feature_set(train, View::Bigram, Stoplist{}, cfg), the_channel), "bigram kept below threshold");

  // Co-occurrence gate on two copies of the art sentence: G2(2,0,2,4).
  const auto arts = copies(parse_one("a\tart\t4\ts\the and i like art of a certain period"), 2);
  const auto art_of = Feature::cooccurrence("art", "of", TargetSide::First);
  const double gc = g2_statistic(2, 0, 2, 4);
  o.require(gc >= 2.706, "art table below default gate");
  cfg = defaults;
  cfg.cooc_g2_threshold = gc;
  o.require(has(build_feature_set(arts, View::Cooccurrence, Stoplist{}, cfg), art_of), "co-occurrence kept at G2 == threshold");
  cfg.cooc_g2_threshold = std::nextafter(gc, 100.0);
  o.require(!has(build_feature_set(arts, View::Cooccurrence, Stoplist{}, cfg), art_of), "co-occurrence kept below threshold");
  return o;
}

Outcome tree_oracle() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  TreeParams full;
  full.prune = false;
  full.min_leaf_instances = 1;
  int perfect_cases = 0;
  for (int d = 0; d < 100; ++d) {
    const std::size_t width = rng() % 5, n = 1 + rng() % 8;
    const int senses = 2 + static_cast<int>(rng() % 2);
    std::vector<BinaryVector> xs;
    std::vector<std::string> ys;
    for (std::size_t i = 0; i < n; ++i) {
      BinaryVector v(width);
      for (std::size_t f = 0; f < width; ++f) v.set(f, rng() % 2);
      xs.push_back(v);
      ys.push_back(std::string(1, static_cast<char>('a' + rng() % senses)));
    }
    const auto tree = train_tree(xs, ys, full);
    const long got = correct_count(tree, xs, ys);
    const long best = oracle::best_lookup_correct(raw(xs), ys);
    o.require(got == best, "dataset " + std::to_string(d) + ": tree " + std::to_string(got) + " vs lookup " + std::to_string(best));
    if (best == static_cast<long>(n)) {
      ++perfect_cases;
      o.require(got == static_cast<long>(n), "dataset " + std::to_string(d) + ": not memorized");
    }
    const long stump = correct_count(train_stump(xs, ys), xs, ys);
    const long best1 = oracle::best_depth1_correct(raw(xs), ys);
    o.require(stump == best1, "dataset " + std::to_string(d) + ": stump " + std::to_string(stump) + " vs depth-1 " + std::to_string(best1));
  }
  if (o.ok) o.detail = std::to_string(perfect_cases) + " of 100 datasets free of contradictions";
  return o;
}

Outcome bagging_degeneracy() {
  Outcome o;
  BaggingParams bp;
  bp.num_bags = 1;
  bp.resample = false;
  long checked = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto sample = synthetic_sample(s, 60, 30);
    bp.seed = s;
    for (View v : {View::Unigram, View::Bigram, View::Cooccurrence, View::Mixed}) {
      const auto clf = train_bagged(sample, v, Stoplist{}, FeatureExtractionConfig{}, TreeParams{}, bp);
      const auto tree = train_tree(vectorize_all(sample.train, clf.feature_set), labels(sample.train), TreeParams{});
      o.require(clf.trees.size() == 1 && clf.trees.front() == tree, "seed " + std::to_string(s) + ": tree differs");
      for (const auto& inst : sample.test) {
        ++checked;
        o.require(classify_bagged(clf, inst) == tree.classify(vectorize(inst, clf.feature_set)),
                  "seed " + std::to_string(s) + ": prediction differs on " + inst.id);
      }
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " predictions identical";
  return o;
}

Outcome ensemble_votes() {
  Outcome o;
  const auto sample = synthetic_sample(kSeed, 120, 60);
  BaggingParams bp;
  bp.seed = kSeed;
  for (View v : {View::Unigram, View::Bigram, View::Cooccurrence, View::Mixed}) {
    const auto bagged = train_bagged(sample, v, Stoplist{}, FeatureExtractionConfig{}, TreeParams{}, bp);
    const auto single = train_ensemble(sample, *EnsembleSpec::parse(view_name(v)), Stoplist{}, FeatureExtractionConfig{}, TreeParams{}, bp);
    for (const auto& inst : sample.test)
      o.require(classify_ensemble(single, inst) == classify_bagged(bagged, inst), "{" + std::string(view_name(v)) + "} differs from bagged");
  }

  for (const std::string s : {"a", "b", "z"}) {
    o.require(vote_of({s, s, s}, {{"a", 50}, {"b", 50}, {"q", 99}}) == s, "unanimous vote lost");
    o.require(vote_of({s, s}, {{"q", 99}}) == s, "unanimous pair lost");
  }
  o.require(vote_of({"a", "a", "b"}, {{"b", 99}}) == "a", "(a,a,b) majority");
  o.require(vote_of({"a", "b"}, {{"a", 10}, {"b", 5}}) == "a", "2-way tie by prior");
  o.require(vote_of({"a", "b"}, {{"a", 5}, {"b", 10}}) == "b", "2-way tie by prior (reversed)");
  o.require(vote_of({"b", "a"}, {{"a", 5}, {"b", 5}}) == "a", "2-way tie lexicographic");
  o.require(vote_of({"a", "b", "c"}, {{"a", 5}, {"b", 5}, {"c", 9}}) == "c", "3-way tie by prior");
  o.require(vote_of({"c", "b", "a"}, {{"a", 5}, {"b", 5}, {"c", 5}}) == "a", "3-way tie lexicographic");
  o.require(vote_of({"c", "b", "a"}, {{"b", 7}, {"c", 7}}) == "b", "3-way tie prior then lexicographic");
  return o;
}

Outcome agreement_arithmetic() {
  Outcome o;
  std::vector<std::string> off;
  int cells = 0;
  for (const auto& row : agreement_fixture::load_pairwise(kFixtures + "/agreement_pairwise.tsv")) {
    const auto fx = agreement_fixture::pair_fixture(row);
    const auto t = pairwise_agreement(fx.systems[0], fx.systems[1], fx.gold);
    static const char* bucket[] = {"both", "one", "zero"};
    for (int k = 0; k < 3; ++k) {
      ++cells;
      const long count = t.exactly(2 - k);
      o.require(count == row.counts[k], "fixture count mismatch");
      const double gap = agreement_fixture::printed_gap(count, t.n, row.printed_pct[k]);
      if (std::abs(gap) > kPercentTolerance + 1e-9) {
        off.push_back(row.sample + " " + row.system_a + "/" + row.system_b + " " + bucket[k] + ": " +
                      std::to_string(count) + "/" + std::to_string(t.n) + " = " + format_percent(count, t.n, 1) +
                      "% vs printed " + row.printed_pct[k] + "%");
      }
    }
  }
  o.require(cells == 36, "expected 36 pairwise cells");

  for (const auto& row : agreement_fixture::load_kway(kFixtures + "/agreement_kway.tsv")) {
    if (row.sample != "senseval1-english") continue;
    const auto fx = agreement_fixture::kway_fixture(row);
    const auto three = kway_agreement(std::span(fx.systems).first(3), fx.gold);
    const auto five = kway_agreement(fx.systems, fx.gold);
    auto exact = [&](long count, const std::string& printed, const std::string& what) {
      const auto got = format_percent(count, row.n, agreement_fixture::decimals_of(printed));
      o.require(got == printed, what + ": " + got + "% vs printed " + printed + "%");
    };
    o.require(three.all_correct() == row.three_all && three.none_correct() == row.three_none &&
                  five.none_correct() == row.five_none,
              "k-way fixture counts");
    exact(three.all_correct(), row.three_all_pct, "three-way all correct");
    exact(three.none_correct(), row.three_none_pct, "three-way none correct");
    exact(five.none_correct(), row.five_none_pct, "five-way none correct");
  }

  if (!off.empty()) {
    std::string d = std::to_string(off.size()) + " of " + std::to_string(cells) + " printed cells off by more than 0.1 pp: ";
    for (std::size_t i = 0; i < off.size(); ++i) d += (i ? "; " : "") + off[i];
    o.ok = false;
    o.detail = o.detail.empty() ? d : d + "; " + o.detail;
  }
  return o;
}

ExperimentConfig synthetic_config(const testing::TempDir& dir) {
  const auto corpus = generate_synthetic(SyntheticSpec{});
  save_instances(dir / "train.tsv", corpus.train);
  save_instances(dir / "test.tsv", corpus.test);
  ExperimentConfig cfg;
  cfg.train_path = dir / "train.tsv";
  cfg.test_path = dir / "test.tsv";
  cfg.stoplist_path = kData + "/stoplists/english.txt";
  cfg.bagging.seed = kSeed;
  cfg.out_dir = dir / "run1";
  return cfg;
}

Outcome synthetic_experiment() {
  Outcome o;
  testing::TempDir dir;
  const auto cfg = synthetic_config(dir);
  const auto result = run_experiment(cfg);
  o.require(result.failures.empty(), "word failures");

  std::map<std::string, double> acc;
  for (const auto& s : result.scores) acc[s.system_name] = s.accuracy;

  // Majority sense per word from the training file, then its test frequency.
  std::map<std::string, std::map<std::string, long>> train_counts;
  for (const auto& i : load_instances(cfg.train_path)) ++train_counts[i.target_word][*i.gold_sense];
  std::map<std::string, std::string> majority;
  for (const auto& [w, counts] : train_counts) {
    majority[w] = std::max_element(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
                    return a.second < b.second || (a.second == b.second && a.first > b.first);
                  })->first;
  }
  long hits = 0, total = 0;
  for (const auto& i : load_instances(cfg.test_path)) {
    ++total;
    hits += *i.gold_sense == majority[i.target_word];
  }
  const double freq = static_cast<double>(hits) / total;

  o.require(acc.size() == 10, "expected 10 systems");
  o.require(acc["C"] >= kMinCoocAccuracy, "C accuracy below 95%");
  o.require(std::abs(acc["majority"] - freq) <= kMajorityWindow, "majority outside +-3 points");
  o.require(acc["stump"] >= acc["majority"], "stump below majority");
  std::ostringstream d;
  d.precision(4);
  d << "C " << acc["C"] << ", majority " << acc["majority"] << " (test frequency " << freq << "), stump " << acc["stump"];
  o.detail = o.ok ? d.str() : o.detail + "; " + d.str();
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = testing::read_file(e.path());
  }
  return out;
}

Outcome determinism() {
  Outcome o;
  testing::TempDir dir;
  auto cfg = synthetic_config(dir);
  run_experiment(cfg);
  cfg.out_dir = dir / "run2";
  run_experiment(cfg);
  const auto a = snapshot(dir / "run1"), b = snapshot(dir / "run2");
  o.require(!a.empty(), "no report files");
  o.require(a.size() == b.size(), "different file lists");
  for (const auto& [name, content] : a) {
    const auto it = b.find(name);
    o.require(it != b.end() && it->second == content, name + " differs");
  }
  if (o.ok) o.detail = std::to_string(a.size()) + " files byte-identical";
  return o;
}

Outcome agreement_laws() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  for (int trial = 0; trial < 100; ++trial) {
    GoldStandard gold;
    const long n = 1 + static_cast<long>(rng() % 200);
    for (long i = 0; i < n; ++i) gold[agreement_fixture::instance_id(i)] = "s" + std::to_string(rng() % 3);
    std::vector<PredictionSet> p;
    for (const char* name : {"a", "b", "c"}) {
      PredictionSet ps{name, {}};
      const auto skill = rng() % 100;
      for (const auto& [id, s] : gold) {
        if (rng() % 20 == 0) continue;
        ps.answers[id] = rng() % 100 < skill ? s : "s" + std::to_string(rng() % 3);
      }
      p.push_back(ps);
    }
    double best = 0;
    for (const auto& x : p) best = std::max(best, score(x, gold).accuracy);
    o.require(optimal_combination_bound(p, gold) + 1e-12 >= best, "bound below best member");
    const auto k = kway_agreement(p, gold);
    o.require(std::accumulate(k.by_correct.begin(), k.by_correct.end(), 0L) == n, "k-way buckets do not sum to n");
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const auto ab = pairwise_agreement(p[i], p[j], gold);
        const auto ba = pairwise_agreement(p[j], p[i], gold);
        o.require(ab.exactly(0) + ab.exactly(1) + ab.exactly(2) == n, "both+one+zero != n");
        o.require(ab.by_correct == ba.by_correct, "pairwise not symmetric");
      }
    }
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "worked-example candidate sets", 1.0, worked_examples},
      {2, "G2 against brute-force oracle and threshold gates", 1.0, g2_oracle},
      {3, "tree and stump against exhaustive search", 10.0, tree_oracle},
      {4, "bagging degeneracy to a single tree", 5.0, bagging_degeneracy},
      {5, "ensemble degeneracy and vote law", 5.0, ensemble_votes},
      {6, "agreement table arithmetic", 1.0, agreement_arithmetic},
      {7, "synthetic end-to-end experiment", 30.0, synthetic_experiment},
      {8, "determinism of experiment reports", 60.0, determinism},
      {9, "agreement laws on random triples", 5.0, agreement_laws},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.ok = false;
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time limit");
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3fs/%.0fs", secs, c.limit_seconds);
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " [" << timing << "]";
    if (!o.detail.empty()) std::cout << " - " << o.detail;
    std::cout << '\n';
    failed += !o.ok;
  }
  std::cout << (9 - failed) << "/9 criteria passed\n";
  return failed;
}
