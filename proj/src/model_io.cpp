#include "lexvote/model_io.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "lexvote/error.hpp"
#include "text_util.hpp"

namespace lexvote {

using detail::format_double;
using detail::parse_number;
using detail::split_ws;

namespace {

// Line-oriented reader that remembers where it is for error messages.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  std::string require() {
    std::string line;
    if (!next(line)) fail("unexpected end of file");
    return line;
  }

  // Reads "key value..." and returns the value fields.
  std::vector<std::string> keyed(std::string_view key, std::size_t min_values = 1) {
    const auto line = require();
    const auto f = split_ws(line);
    if (f.empty() || f[0] != key || f.size() < 1 + min_values) fail("expected '" + std::string(key) + "'");
    return {f.begin() + 1, f.end()};
  }

  template <typename T>
  T number(std::string_view key) {
    const auto v = keyed(key);
    T out{};
    if (v.size() != 1 || !parse_number(v[0], out)) fail("bad value for '" + std::string(key) + "'");
    return out;
  }

  void header(std::string_view kind) {
    const auto line = require();
    const auto f = split_ws(line);
    if (f.size() != 2 || f[0] != "lexvote-" + std::string(kind)) fail("not a lexvote " + std::string(kind) + " file");
    int version = 0;
    if (!parse_number(f[1], version)) fail("bad format version");
    if (version != kFormatVersion)
      throw ValidationError(source_ + ": " + std::string(kind) + " format version " + std::to_string(version) +
                            " is not supported (expected " + std::to_string(kFormatVersion) + ")");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

std::string_view side_name(TargetSide side) {
  switch (side) {
    case TargetSide::None: return "none";
    case TargetSide::First: return "first";
    case TargetSide::Second: return "second";
  }
  return "none";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_distribution(std::ostream& out, const SenseCounts& d) {
  for (const auto& [sense, count] : d) out << ' ' << sense << '=' << count;
}

SenseCounts parse_distribution(const std::vector<std::string_view>& fields, std::size_t from, LineReader& r) {
  SenseCounts d;
  for (std::size_t i = from; i < fields.size(); ++i) {
    const auto eq = fields[i].rfind('=');
    long count = 0;
    if (eq == std::string_view::npos || eq == 0 || !parse_number(fields[i].substr(eq + 1), count) || count < 0)
      r.fail("bad distribution entry '" + std::string(fields[i]) + "'");
    d.emplace(std::string(fields[i].substr(0, eq)), count);
  }
  return d;
}

void write_priors(std::ostream& out, const SenseCounts& priors) {
  for (const auto& [sense, count] : priors) out << "prior " << sense << ' ' << count << '\n';
}

// Reads trailing "prior <sense> <count>" lines.
SenseCounts read_priors(LineReader& r) {
  SenseCounts priors;
  std::string line;
  while (r.next(line)) {
    const auto f = split_ws(line);
    long count = 0;
    if (f.size() != 3 || f[0] != "prior" || !parse_number(f[2], count)) r.fail("expected 'prior <sense> <count>'");
    priors.emplace(std::string(f[1]), count);
  }
  return priors;
}

std::string tree_file_name(std::size_t i) {
  std::ostringstream name;
  name << "tree_" << std::setw(3) << std::setfill('0') << i << ".txt";
  return name.str();
}

void save_tree(const std::filesystem::path& path, const DecisionTree& tree) {
  auto out = open_out(path);
  write_tree(out, tree);
}

DecisionTree load_tree(const std::filesystem::path& path, std::size_t expected_width) {
  auto in = open_in(path);
  auto tree = read_tree(in, path.string());
  if (tree.width() != expected_width)
    throw ValidationError(path.string() + ": tree width " + std::to_string(tree.width()) +
                          " does not match feature set size " + std::to_string(expected_width));
  return tree;
}

void save_stump(const std::filesystem::path& dir, const StumpClassifier& s) {
  make_dir(dir);
  {
    auto out = open_out(dir / "manifest.txt");
    out << "lexvote-stump " << kFormatVersion << '\n' << "target " << s.target_word << '\n';
    write_priors(out, s.sense_priors);
  }
  save_feature_set(dir / "featureset.txt", s.feature_set);
  save_tree(dir / "tree.txt", s.tree);
}

StumpClassifier load_stump(const std::filesystem::path& dir) {
  StumpClassifier s;
  auto in = open_in(dir / "manifest.txt");
  LineReader r(in, (dir / "manifest.txt").string());
  r.header("stump");
  s.target_word = r.keyed("target").at(0);
  s.sense_priors = read_priors(r);
  s.feature_set = load_feature_set(dir / "featureset.txt");
  s.tree = load_tree(dir / "tree.txt", s.feature_set.size());
  return s;
}

void save_majority(const std::filesystem::path& dir, const MajorityClassifier& m) {
  make_dir(dir);
  auto out = open_out(dir / "manifest.txt");
  out << "lexvote-majority " << kFormatVersion << '\n' << "target " << m.target_word << '\n' << "sense " << m.sense << '\n';
}

MajorityClassifier load_majority(const std::filesystem::path& dir) {
  auto in = open_in(dir / "manifest.txt");
  LineReader r(in, (dir / "manifest.txt").string());
  r.header("majority");
  MajorityClassifier m;
  m.target_word = r.keyed("target").at(0);
  m.sense = r.keyed("sense").at(0);
  return m;
}

std::string word_dir_name(std::size_t i) {
  std::ostringstream name;
  name << 'w' << std::setw(4) << std::setfill('0') << i;
  return name.str();
}

}  // namespace

void write_feature_set(std::ostream& out, const FeatureSet& fs) {
  const auto& c = fs.config;
  out << "lexvote-featureset " << kFormatVersion << '\n'
      << "view " << view_name(fs.view) << '\n'
      << "unigram_min_freq " << c.unigram_min_freq << '\n'
      << "bigram_min_freq " << c.bigram_min_freq << '\n'
      << "bigram_g2_threshold " << format_double(c.bigram_g2_threshold) << '\n'
      << "cooc_min_freq " << c.cooc_min_freq << '\n'
      << "cooc_g2_threshold " << format_double(c.cooc_g2_threshold) << '\n'
      << "cooc_window " << c.cooc_window << '\n'
      << "features " << fs.features.size() << '\n';
  for (std::size_t i = 0; i < fs.features.size(); ++i) {
    const auto& f = fs.features[i];
    out << kind_name(f.kind) << '\t' << side_name(f.target_side) << '\t' << f.text() << '\t'
        << format_double(i < fs.scores.size() ? fs.scores[i] : 0.0) << '\n';
  }
}

FeatureSet read_feature_set(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("featureset");
  FeatureSet fs;
  const auto view = parse_view(r.keyed("view").at(0));
  if (!view) r.fail("unknown view");
  fs.view = *view;
  fs.config.unigram_min_freq = r.number<long>("unigram_min_freq");
  fs.config.bigram_min_freq = r.number<long>("bigram_min_freq");
  fs.config.bigram_g2_threshold = r.number<double>("bigram_g2_threshold");
  fs.config.cooc_min_freq = r.number<long>("cooc_min_freq");
  fs.config.cooc_g2_threshold = r.number<double>("cooc_g2_threshold");
  fs.config.cooc_window = r.number<int>("cooc_window");
  const auto count = r.number<std::size_t>("features");

  for (std::size_t i = 0; i < count; ++i) {
    const auto line = r.require();
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find('\t')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      cols.push_back(rest.substr(0, pos));
    cols.push_back(rest);
    if (cols.size() != 4) r.fail("expected 'kind<TAB>side<TAB>words<TAB>score'");

    const auto kind = parse_kind(cols[0]);
    if (!kind) r.fail("unknown feature kind '" + std::string(cols[0]) + "'");
    Feature f;
    f.kind = *kind;
    if (cols[1] == "first") f.target_side = TargetSide::First;
    else if (cols[1] == "second") f.target_side = TargetSide::Second;
    else if (cols[1] != "none") r.fail("unknown target side");
    for (auto w : split_ws(cols[2])) f.words.emplace_back(w);
    const std::size_t arity = f.kind == FeatureKind::Unigram ? 1 : 2;
    if (f.words.size() != arity) r.fail("wrong number of words for " + std::string(cols[0]));
    if ((f.kind == FeatureKind::Cooccurrence) != (f.target_side != TargetSide::None)) r.fail("bad target side");
    double score = 0.0;
    if (!parse_number(cols[3], score)) r.fail("bad score");
    fs.features.push_back(std::move(f));
    fs.scores.push_back(score);
  }
  std::string extra;
  if (r.next(extra)) r.fail("trailing content after feature list");
  fs.config.validate();
  return fs;
}

void save_feature_set(const std::filesystem::path& path, const FeatureSet& fs) {
  auto out = open_out(path);
  write_feature_set(out, fs);
  if (!out) throw IoError("write failed for " + path.string());
}

FeatureSet load_feature_set(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_feature_set(in, path.string());
}

void write_tree(std::ostream& out, const DecisionTree& tree) {
  out << "lexvote-tree " << kFormatVersion << '\n' << "width " << tree.width() << '\n'
      << "nodes " << tree.node_count() << '\n';
  const auto& nodes = tree.nodes();
  std::function<void(std::size_t, std::size_t)> emit = [&](std::size_t i, std::size_t depth) {
    const auto& n = nodes[i];
    out << std::string(2 * depth, ' ');
    if (n.is_leaf()) out << "leaf " << n.prediction;
    else out << "split " << *n.feature << ' ' << n.prediction;
    write_distribution(out, n.distribution);
    out << '\n';
    if (!n.is_leaf()) {
      emit(n.on_true, depth + 1);
      emit(n.on_false, depth + 1);
    }
  };
  emit(0, 0);
}

DecisionTree read_tree(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("tree");
  const auto width = r.number<std::size_t>("width");
  const auto count = r.number<std::size_t>("nodes");
  if (count == 0) r.fail("tree without nodes");

  std::vector<DecisionTree::Node> nodes;
  std::function<std::size_t()> parse = [&]() -> std::size_t {
    if (nodes.size() >= count) r.fail("more nodes than declared");
    const auto line = r.require();
    const auto f = split_ws(line);
    if (f.size() < 2) r.fail("malformed node line");
    const auto self = nodes.size();
    nodes.emplace_back();
    if (f[0] == "leaf") {
      nodes[self].prediction = std::string(f[1]);
      nodes[self].distribution = parse_distribution(f, 2, r);
      return self;
    }
    if (f[0] != "split") r.fail("expected 'leaf' or 'split'");
    std::size_t feature = 0;
    if (!parse_number(f[1], feature)) r.fail("bad feature index");
    if (f.size() < 3) r.fail("split node without prediction");
    nodes[self].feature = feature;
    nodes[self].prediction = std::string(f[2]);
    nodes[self].distribution = parse_distribution(f, 3, r);
    const auto t = parse();
    const auto e = parse();
    nodes[self].on_true = t;
    nodes[self].on_false = e;
    return self;
  };
  parse();
  if (nodes.size() != count) r.fail("node count does not match header");
  std::string extra;
  if (r.next(extra)) r.fail("trailing content after tree");

  return DecisionTree(width, std::move(nodes));
}

void save_bagged(const std::filesystem::path& dir, const BaggedClassifier& clf, const TreeParams& tree_params) {
  make_dir(dir);
  {
    auto out = open_out(dir / "manifest.txt");
    out << "lexvote-bagged " << kFormatVersion << '\n'
        << "target " << clf.target_word << '\n'
        << "view " << view_name(clf.view) << '\n'
        << "num_bags " << clf.trees.size() << '\n'
        << "seed " << clf.params.seed << '\n'
        << "resample " << (clf.params.resample ? 1 : 0) << '\n'
        << "min_leaf_instances " << tree_params.min_leaf_instances << '\n'
        << "pruning_confidence " << format_double(tree_params.pruning_confidence) << '\n'
        << "prune " << (tree_params.prune ? 1 : 0) << '\n';
    write_priors(out, clf.sense_priors);
  }
  save_feature_set(dir / "featureset.txt", clf.feature_set);
  for (std::size_t i = 0; i < clf.trees.size(); ++i) save_tree(dir / tree_file_name(i), clf.trees[i]);
}

BaggedClassifier load_bagged(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.txt";
  auto in = open_in(manifest);
  LineReader r(in, manifest.string());
  r.header("bagged");

  BaggedClassifier clf;
  clf.target_word = r.keyed("target").at(0);
  const auto view = parse_view(r.keyed("view").at(0));
  if (!view) r.fail("unknown view");
  clf.view = *view;
  clf.params.num_bags = r.number<long>("num_bags");
  clf.params.seed = r.number<std::uint64_t>("seed");
  clf.params.resample = r.number<int>("resample") != 0;
  r.number<long>("min_leaf_instances");
  r.number<double>("pruning_confidence");
  r.number<int>("prune");
  clf.sense_priors = read_priors(r);
  if (clf.params.num_bags < 1) r.fail("num_bags must be >= 1");

  clf.feature_set = load_feature_set(dir / "featureset.txt");
  if (clf.feature_set.view != clf.view)
    throw ValidationError(dir.string() + ": feature set view does not match manifest");
  for (long i = 0; i < clf.params.num_bags; ++i)
    clf.trees.push_back(load_tree(dir / tree_file_name(static_cast<std::size_t>(i)), clf.feature_set.size()));
  return clf;
}

std::string ModelBundle::classify(const Instance& instance) const {
  for (const auto& w : words) {
    if (w.target_word == instance.target_word) return classify_system(w.system, instance);
  }
  throw ValidationError("no model for target word '" + instance.target_word + "'");
}

void save_model_bundle(const std::filesystem::path& dir, const ModelBundle& bundle) {
  make_dir(dir);
  {
    auto out = open_out(dir / "manifest.txt");
    out << "lexvote-model " << kFormatVersion << '\n'
        << "system " << bundle.spec.name() << '\n'
        << "words " << bundle.words.size() << '\n';
    for (std::size_t i = 0; i < bundle.words.size(); ++i)
      out << "word " << word_dir_name(i) << ' ' << bundle.words[i].target_word << '\n';
  }
  for (std::size_t i = 0; i < bundle.words.size(); ++i) {
    const auto word_dir = dir / word_dir_name(i);
    const auto& sys = bundle.words[i].system;
    if (const auto* e = std::get_if<Ensemble>(&sys)) {
      for (const auto& m : e->members) save_bagged(word_dir / std::string(view_name(m.view)), m, bundle.tree_params);
    } else if (const auto* s = std::get_if<StumpClassifier>(&sys)) {
      save_stump(word_dir, *s);
    } else {
      save_majority(word_dir, std::get<MajorityClassifier>(sys));
    }
  }
}

ModelBundle load_model_bundle(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.txt";
  auto in = open_in(manifest);
  LineReader r(in, manifest.string());
  r.header("model");

  ModelBundle bundle;
  const auto spec = SystemSpec::parse(r.keyed("system").at(0));
  if (!spec) r.fail("unknown system");
  bundle.spec = *spec;
  const auto count = r.number<std::size_t>("words");
  for (std::size_t i = 0; i < count; ++i) {
    const auto v = r.keyed("word", 2);
    const auto word_dir = dir / v.at(0);
    WordModel wm;
    wm.target_word = v.at(1);
    switch (bundle.spec.kind) {
      case SystemSpec::Kind::Ensemble: {
        std::map<View, BaggedClassifier> members;
        for (auto view : bundle.spec.ensemble.members)
          members.emplace(view, load_bagged(word_dir / std::string(view_name(view))));
        wm.system = assemble_ensemble(bundle.spec.ensemble, members);
        break;
      }
      case SystemSpec::Kind::Stump:
        wm.system = load_stump(word_dir);
        break;
      case SystemSpec::Kind::Majority:
        wm.system = load_majority(word_dir);
        break;
    }
    bundle.words.push_back(std::move(wm));
  }
  return bundle;
}

}  // namespace lexvote
