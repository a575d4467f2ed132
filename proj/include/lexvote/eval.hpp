#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lexvote/corpus.hpp"

namespace lexvote {

/// instance id -> sense
using Answers = std::map<std::string, std::string>;
using GoldStandard = Answers;

struct PredictionSet {
  std::string system_name;
  Answers answers;
};

struct ScoreReport {
  std::string system_name;
  long total = 0;
  long correct = 0;
  double accuracy = 0.0;
  long unanswered = 0;  // gold instances without an answer (scored wrong)
  long unknown = 0;     // answers for ids absent from the gold standard (ignored)
};

/// Per-instance correctness buckets for a group of systems.
/// `by_correct[k]` counts gold instances that exactly k systems got right.
struct AgreementTable {
  std::vector<std::string> systems;
  long n = 0;
  std::vector<long> by_correct;

  long all_correct() const { return by_correct.back(); }
  long none_correct() const { return by_correct.front(); }
  /// For pairwise tables: instances exactly one of the two systems got right.
  long exactly(std::size_t k) const { return by_correct.at(k); }
};

/// Fine-grained exact-match accuracy. Unanswered gold instances count as
/// wrong. Throws DomainError for an empty gold standard.
ScoreReport score(const PredictionSet& pred, const GoldStandard& gold);

/// both / one / zero buckets for two systems.
AgreementTable pairwise_agreement(const PredictionSet& a, const PredictionSet& b, const GoldStandard& gold);

/// Buckets by number of correct systems, for two or more systems.
AgreementTable kway_agreement(std::span<const PredictionSet> preds, const GoldStandard& gold);

/// 1 - none_correct / n: accuracy of an oracle that picks a correct system
/// whenever one exists.
double optimal_combination_bound(std::span<const PredictionSet> preds, const GoldStandard& gold);
double optimal_combination_bound(const AgreementTable& table);

/// 100 * count / n rounded half-up to `decimals` places, e.g. "53.4".
std::string format_percent(long count, long n, int decimals = 1);

/// Reads `instance_id<TAB>sense` lines. Duplicate ids are a ValidationError,
/// malformed lines a ParseError.
Answers read_answers(std::istream& in, const std::string& source = "<stream>");
Answers load_answers(const std::filesystem::path& path);
/// System name defaults to the file stem.
PredictionSet load_predictions(const std::filesystem::path& path);
void write_answers(std::ostream& out, const Answers& answers);
void save_answers(const std::filesystem::path& path, const Answers& answers);

/// Gold standard of the instances that carry a sense.
GoldStandard gold_from_instances(std::span<const Instance> instances);

// Report renderings. Accuracy rows are ordered by correct count (desc), then
// name; agreement rows keep the order given.
std::string accuracy_report_tsv(std::span<const ScoreReport> scores);
std::string accuracy_report_text(std::span<const ScoreReport> scores);
std::string pairwise_report_tsv(std::span<const AgreementTable> tables);
std::string pairwise_report_text(std::span<const AgreementTable> tables);
std::string kway_report_tsv(std::span<const AgreementTable> tables);
std::string kway_report_text(std::span<const AgreementTable> tables);

/// Writes accuracy.{tsv,txt}, pairwise.{tsv,txt} and kway.{tsv,txt} into
/// `dir` (created if needed) and returns the written paths.
std::vector<std::filesystem::path> emit_reports(const std::filesystem::path& dir, std::span<const ScoreReport> scores,
                                                std::span<const AgreementTable> pairwise,
                                                std::span<const AgreementTable> kway);

}  // namespace lexvote
