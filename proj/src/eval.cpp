#include "lexvote/eval.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "lexvote/error.hpp"

namespace lexvote {

namespace {

void require_gold(const GoldStandard& gold) {
  if (gold.empty()) throw DomainError("empty gold standard");
}

bool is_correct(const Answers& answers, const std::string& id, const std::string& sense) {
  auto it = answers.find(id);
  return it != answers.end() && it->second == sense;
}

}  // namespace

ScoreReport score(const PredictionSet& pred, const GoldStandard& gold) {
  require_gold(gold);
  ScoreReport r;
  r.system_name = pred.system_name;
  r.total = static_cast<long>(gold.size());
  for (const auto& [id, sense] : gold) {
    auto it = pred.answers.find(id);
    if (it == pred.answers.end()) ++r.unanswered;
    else if (it->second == sense) ++r.correct;
  }
  for (const auto& [id, sense] : pred.answers) {
    if (!gold.count(id)) ++r.unknown;
  }
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
  return r;
}

AgreementTable kway_agreement(std::span<const PredictionSet> preds, const GoldStandard& gold) {
  require_gold(gold);
  if (preds.size() < 2) throw ValidationError("agreement needs at least two systems");
  AgreementTable t;
  t.n = static_cast<long>(gold.size());
  t.by_correct.assign(preds.size() + 1, 0);
  for (const auto& p : preds) t.systems.push_back(p.system_name);
  for (const auto& [id, sense] : gold) {
    std::size_t k = 0;
    for (const auto& p : preds) k += is_correct(p.answers, id, sense);
    ++t.by_correct[k];
  }
  return t;
}

AgreementTable pairwise_agreement(const PredictionSet& a, const PredictionSet& b, const GoldStandard& gold) {
  const PredictionSet pair[2] = {a, b};
  return kway_agreement(pair, gold);
}

double optimal_combination_bound(const AgreementTable& table) {
  if (table.n <= 0) throw DomainError("agreement table over zero instances");
  return 1.0 - static_cast<double>(table.none_correct()) / static_cast<double>(table.n);
}

double optimal_combination_bound(std::span<const PredictionSet> preds, const GoldStandard& gold) {
  return optimal_combination_bound(kway_agreement(preds, gold));
}

std::string format_percent(long count, long n, int decimals) {
  if (n <= 0) throw DomainError("percentage of zero instances");
  if (count < 0 || decimals < 0 || decimals > 6) throw DomainError("bad percentage arguments");
  long scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  // Half-up rounding of 100 * count / n in integer arithmetic.
  const auto scaled = static_cast<__int128>(count) * 100 * scale;
  const auto q = static_cast<long>((2 * scaled + n) / (2 * static_cast<__int128>(n)));
  std::string out = std::to_string(q / scale);
  if (decimals > 0) {
    std::string frac = std::to_string(q % scale);
    out += '.' + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
  }
  return out;
}

Answers read_answers(std::istream& in, const std::string& source) {
  Answers out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos)
      throw ParseError(source, lineno, "expected 'instance_id<TAB>sense'");
    auto id = line.substr(0, tab);
    auto sense = line.substr(tab + 1);
    if (!out.emplace(id, std::move(sense)).second)
      throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate answer for " + id);
  }
  return out;
}

Answers load_answers(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open answer file " + path.string());
  return read_answers(in, path.string());
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  return PredictionSet{path.stem().string(), load_answers(path)};
}

void write_answers(std::ostream& out, const Answers& answers) {
  for (const auto& [id, sense] : answers) out << id << '\t' << sense << '\n';
}

void save_answers(const std::filesystem::path& path, const Answers& answers) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write answer file " + path.string());
  write_answers(out, answers);
  if (!out) throw IoError("write failed for " + path.string());
}

GoldStandard gold_from_instances(std::span<const Instance> instances) {
  GoldStandard gold;
  for (const auto& inst : instances) {
    if (inst.gold_sense) gold.emplace(inst.id, *inst.gold_sense);
  }
  return gold;
}

}  // namespace lexvote
