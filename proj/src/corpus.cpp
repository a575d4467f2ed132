#include "lexvote/corpus.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "lexvote/error.hpp"

namespace lexvote {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool has_space(std::string_view s) {
  return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c - 'A' + 'a');
    } else if (c == 0xC3 && i + 1 < out.size()) {
      // Latin-1 supplement capitals (U+00C0..U+00DE, except U+00D7).
      auto next = static_cast<unsigned char>(out[i + 1]);
      if (next >= 0x80 && next <= 0x9E && next != 0x97) out[i + 1] = static_cast<char>(next + 0x20);
      ++i;
    }
  }
  return out;
}

Stoplist::Stoplist(std::set<std::string> words) {
  for (const auto& w : words) words_.insert(to_lower(w));
}

bool Stoplist::contains(std::string_view word) const {
  return words_.find(to_lower(word)) != words_.end();
}

std::map<std::string, long> LexicalSample::sense_counts() const {
  std::map<std::string, long> counts;
  for (const auto& inst : train) ++counts[*inst.gold_sense];
  return counts;
}

void validate_instance(const Instance& instance) {
  if (instance.id.empty()) throw ValidationError("instance with empty id");
  if (instance.tokens.empty()) throw ValidationError("instance " + instance.id + " has no tokens");
  if (instance.target_index >= instance.tokens.size())
    throw ValidationError("instance " + instance.id + ": target_index " +
                          std::to_string(instance.target_index) + " out of range for " +
                          std::to_string(instance.tokens.size()) + " tokens");
}

std::vector<Instance> read_instances(std::istream& in, const std::string& source) {
  std::vector<Instance> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;

    const auto fields = split(line, '\t');
    if (fields.size() != 5)
      throw ParseError(source, lineno, "expected 5 tab-separated fields, found " + std::to_string(fields.size()));

    Instance inst;
    inst.id = std::string(fields[0]);
    inst.target_word = to_lower(fields[1]);
    if (inst.id.empty() || has_space(inst.id)) throw ParseError(source, lineno, "missing or malformed instance id");
    if (inst.target_word.empty()) throw ParseError(source, lineno, "missing target word");

    const auto idx_field = fields[2];
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(idx_field.data(), idx_field.data() + idx_field.size(), idx);
    if (ec != std::errc() || ptr != idx_field.data() + idx_field.size() || idx_field.empty())
      throw ParseError(source, lineno, "target_index is not a non-negative integer");
    inst.target_index = idx;

    if (fields[3].empty()) throw ParseError(source, lineno, "missing sense field (use '-' for none)");
    if (has_space(fields[3])) throw ParseError(source, lineno, "sense id contains whitespace");
    if (fields[3] != "-") inst.gold_sense = std::string(fields[3]);

    for (auto tok : split(fields[4], ' ')) {
      if (!tok.empty()) inst.tokens.push_back(to_lower(tok));
    }
    if (inst.tokens.empty()) throw ParseError(source, lineno, "empty token list");
    if (inst.target_index >= inst.tokens.size())
      throw ParseError(source, lineno,
                       "target_index " + std::to_string(inst.target_index) + " out of range for " +
                           std::to_string(inst.tokens.size()) + " tokens");

    if (!seen.insert(inst.id).second)
      throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate instance id " + inst.id);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<Instance> load_instances(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file " + path.string());
  return read_instances(in, path.string());
}

void write_instances(std::ostream& out, const std::vector<Instance>& instances) {
  for (const auto& inst : instances) {
    out << inst.id << '\t' << inst.target_word << '\t' << inst.target_index << '\t'
        << inst.gold_sense.value_or("-") << '\t';
    for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
      if (i) out << ' ';
      out << inst.tokens[i];
    }
    out << '\n';
  }
}

void save_instances(const std::filesystem::path& path, const std::vector<Instance>& instances) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write instance file " + path.string());
  write_instances(out, instances);
  if (!out) throw IoError("write failed for " + path.string());
}

LexicalSample make_lexical_sample(std::vector<Instance> train, std::vector<Instance> test) {
  LexicalSample sample;
  if (!train.empty()) sample.target_word = train.front().target_word;
  else if (!test.empty()) sample.target_word = test.front().target_word;

  for (const auto& inst : train) {
    validate_instance(inst);
    if (inst.target_word != sample.target_word)
      throw ValidationError("mixed target words in sample: " + sample.target_word + " and " + inst.target_word);
    if (!inst.gold_sense) throw ValidationError("training instance " + inst.id + " has no gold sense");
    sample.sense_inventory.insert(*inst.gold_sense);
  }
  for (const auto& inst : test) {
    validate_instance(inst);
    if (inst.target_word != sample.target_word)
      throw ValidationError("mixed target words in sample: " + sample.target_word + " and " + inst.target_word);
  }
  sample.train = std::move(train);
  sample.test = std::move(test);
  return sample;
}

LexicalSample load_lexical_sample(const std::filesystem::path& train_path) {
  return make_lexical_sample(load_instances(train_path));
}

LexicalSample load_lexical_sample(const std::filesystem::path& train_path,
                                  const std::filesystem::path& test_path) {
  return make_lexical_sample(load_instances(train_path), load_instances(test_path));
}

std::vector<LexicalSample> group_by_target(const std::vector<Instance>& train,
                                           const std::vector<Instance>& test) {
  std::map<std::string, std::pair<std::vector<Instance>, std::vector<Instance>>> groups;
  for (const auto& inst : train) groups[inst.target_word].first.push_back(inst);
  for (const auto& inst : test) groups[inst.target_word].second.push_back(inst);

  std::vector<LexicalSample> out;
  out.reserve(groups.size());
  for (auto& [word, parts] : groups) out.push_back(make_lexical_sample(std::move(parts.first), std::move(parts.second)));
  return out;
}

Stoplist read_stoplist(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    words.insert(to_lower(std::string_view(line).substr(first, last - first + 1)));
  }
  return Stoplist(std::move(words));
}

Stoplist load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stoplist " + path.string());
  return read_stoplist(in);
}

}  // namespace lexvote
