#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lexvote {

/// One occurrence of an ambiguous target word in context.
///
/// Tokens are pre-tokenized and lowercased; `target_index` points at the
/// target token. `gold_sense` is absent for unlabeled test instances.
struct Instance {
  std::string id;
  std::string target_word;
  std::vector<std::string> tokens;
  std::size_t target_index = 0;
  std::optional<std::string> gold_sense;

  const std::string& target_token() const { return tokens[target_index]; }

  bool operator==(const Instance&) const = default;
};

/// Training and test instances for a single target word.
struct LexicalSample {
  std::string target_word;
  std::vector<Instance> train;
  std::vector<Instance> test;
  std::set<std::string> sense_inventory;

  /// Sense -> number of training instances carrying it.
  std::map<std::string, long> sense_counts() const;
};

class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(std::set<std::string> words);

  bool contains(std::string_view word) const;
  const std::set<std::string, std::less<>>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::set<std::string, std::less<>> words_;
};

std::string to_lower(std::string_view s);

/// Checks the structural invariants of one instance; throws ValidationError.
void validate_instance(const Instance& instance);

/// Parses the tab-separated instance format:
///   id <TAB> target <TAB> target_index <TAB> sense-or-'-' <TAB> space-joined tokens
/// Throws ParseError naming the line on malformed records and ValidationError
/// on duplicate ids.
std::vector<Instance> read_instances(std::istream& in, const std::string& source = "<stream>");
std::vector<Instance> load_instances(const std::filesystem::path& path);

void write_instances(std::ostream& out, const std::vector<Instance>& instances);
void save_instances(const std::filesystem::path& path, const std::vector<Instance>& instances);

/// Loads a single-word training file (every record must carry a sense).
/// An empty file yields an empty sample.
LexicalSample load_lexical_sample(const std::filesystem::path& train_path);

/// As above, with a held-out test file whose senses are optional.
LexicalSample load_lexical_sample(const std::filesystem::path& train_path,
                                  const std::filesystem::path& test_path);

/// Builds a sample from already-loaded instances, enforcing the sample
/// invariants (shared target word, labeled training data).
LexicalSample make_lexical_sample(std::vector<Instance> train, std::vector<Instance> test = {});

/// Groups multi-word train/test instance lists into one sample per target
/// word, ordered by target word.
std::vector<LexicalSample> group_by_target(const std::vector<Instance>& train,
                                           const std::vector<Instance>& test);

Stoplist read_stoplist(std::istream& in);
Stoplist load_stoplist(const std::filesystem::path& path);

}  // namespace lexvote
