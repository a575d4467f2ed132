#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "lexvote/error.hpp"
#include "lexvote/eval.hpp"

namespace lexvote {

namespace {

std::vector<ScoreReport> ranked(std::span<const ScoreReport> scores) {
  std::vector<ScoreReport> out(scores.begin(), scores.end());
  std::stable_sort(out.begin(), out.end(), [](const ScoreReport& a, const ScoreReport& b) {
    // Compare correct/total exactly via cross-multiplication.
    const auto lhs = static_cast<__int128>(a.correct) * b.total;
    const auto rhs = static_cast<__int128>(b.correct) * a.total;
    if (lhs != rhs) return lhs > rhs;
    return a.system_name < b.system_name;
  });
  return out;
}

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ' ';
    out += names[i];
  }
  return out;
}

std::string pct(long count, long n, int decimals) { return format_percent(count, n, decimals) + "%"; }

std::size_t name_width(std::size_t floor, const std::vector<std::string>& names) {
  std::size_t w = floor;
  for (const auto& s : names) w = std::max(w, s.size());
  return w + 2;
}

std::string bound_percent(const AgreementTable& t) {
  return pct(t.n - t.none_correct(), t.n, 2);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string accuracy_report_tsv(std::span<const ScoreReport> scores) {
  std::ostringstream out;
  out << "system\taccuracy\tcorrect\ttotal\n";
  for (const auto& s : ranked(scores))
    out << s.system_name << '\t' << pct(s.correct, s.total, 1) << '\t' << s.correct << '\t' << s.total << '\n';
  return out.str();
}

std::string accuracy_report_text(std::span<const ScoreReport> scores) {
  std::vector<std::string> names;
  for (const auto& s : scores) names.push_back(s.system_name);
  const auto w = static_cast<int>(name_width(6, names));
  std::ostringstream out;
  out << std::left << std::setw(w) << "system" << std::right << std::setw(10) << "accuracy" << std::setw(10)
      << "correct" << '\n';
  for (const auto& s : ranked(scores)) {
    out << std::left << std::setw(w) << s.system_name << std::right << std::setw(10) << pct(s.correct, s.total, 1)
        << std::setw(10) << s.correct << '\n';
  }
  return out.str();
}

std::string pairwise_report_tsv(std::span<const AgreementTable> tables) {
  std::ostringstream out;
  out << "system pair\tboth\tboth_count\tone\tone_count\tzero\tzero_count\tn\n";
  for (const auto& t : tables) {
    if (t.systems.size() != 2) throw ValidationError("pairwise report given a table of " + std::to_string(t.systems.size()) + " systems");
    out << joined(t.systems);
    for (std::size_t k : {2u, 1u, 0u}) out << '\t' << pct(t.exactly(k), t.n, 1) << '\t' << t.exactly(k);
    out << '\t' << t.n << '\n';
  }
  return out.str();
}

std::string pairwise_report_text(std::span<const AgreementTable> tables) {
  std::vector<std::string> names;
  for (const auto& t : tables) names.push_back(joined(t.systems));
  const auto w = static_cast<int>(name_width(11, names));
  std::ostringstream out;
  out << std::left << std::setw(w) << "system pair" << std::right << std::setw(9) << "both" << std::setw(9) << "one"
      << std::setw(9) << "zero" << '\n';
  for (const auto& t : tables) {
    if (t.systems.size() != 2) throw ValidationError("pairwise report given a table of " + std::to_string(t.systems.size()) + " systems");
    out << std::left << std::setw(w) << joined(t.systems) << std::right;
    for (std::size_t k : {2u, 1u, 0u}) out << std::setw(9) << pct(t.exactly(k), t.n, 1);
    out << '\n' << std::setw(w) << "";
    for (std::size_t k : {2u, 1u, 0u}) out << std::setw(9) << t.exactly(k);
    out << '\n';
  }
  return out.str();
}

std::string kway_report_tsv(std::span<const AgreementTable> tables) {
  std::ostringstream out;
  out << "systems\tn\tall_correct\tall_correct_pct\tnone_correct\tnone_correct_pct\toracle_bound\tby_correct\n";
  for (const auto& t : tables) {
    out << joined(t.systems) << '\t' << t.n << '\t' << t.all_correct() << '\t' << pct(t.all_correct(), t.n, 2) << '\t'
        << t.none_correct() << '\t' << pct(t.none_correct(), t.n, 2) << '\t' << bound_percent(t) << '\t';
    for (std::size_t k = 0; k < t.by_correct.size(); ++k) out << (k ? "," : "") << t.by_correct[k];
    out << '\n';
  }
  return out.str();
}

std::string kway_report_text(std::span<const AgreementTable> tables) {
  std::vector<std::string> names;
  for (const auto& t : tables) names.push_back(joined(t.systems));
  const auto w = static_cast<int>(name_width(7, names));
  std::ostringstream out;
  out << std::left << std::setw(w) << "systems" << std::right << std::setw(8) << "n" << std::setw(20) << "all correct"
      << std::setw(20) << "none correct" << std::setw(14) << "oracle bound" << '\n';
  for (const auto& t : tables) {
    const auto all = std::to_string(t.all_correct()) + " (" + pct(t.all_correct(), t.n, 2) + ")";
    const auto none = std::to_string(t.none_correct()) + " (" + pct(t.none_correct(), t.n, 2) + ")";
    out << std::left << std::setw(w) << joined(t.systems) << std::right << std::setw(8) << t.n << std::setw(20) << all
        << std::setw(20) << none << std::setw(14) << bound_percent(t) << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> emit_reports(const std::filesystem::path& dir, std::span<const ScoreReport> scores,
                                                std::span<const AgreementTable> pairwise,
                                                std::span<const AgreementTable> kway) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create report directory " + dir.string() + ": " + ec.message());

  const std::pair<const char*, std::string> files[] = {
      {"accuracy.tsv", accuracy_report_tsv(scores)},  {"accuracy.txt", accuracy_report_text(scores)},
      {"pairwise.tsv", pairwise_report_tsv(pairwise)}, {"pairwise.txt", pairwise_report_text(pairwise)},
      {"kway.tsv", kway_report_tsv(kway)},             {"kway.txt", kway_report_text(kway)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    written.push_back(dir / name);
    write_file(written.back(), content);
  }
  return written;
}

}  // namespace lexvote
