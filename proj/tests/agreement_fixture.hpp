#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lexvote/eval.hpp"

// Expands printed agreement counts into prediction files that reproduce them.
namespace lexvote::agreement_fixture {

struct PairRow {
  std::string sample, system_a, system_b;
  std::array<long, 3> counts{};             // both, one, zero
  std::array<std::string, 3> printed_pct;   // as printed, without '%'
  long n() const { return counts[0] + counts[1] + counts[2]; }
};

struct KwayRow {
  std::string sample;
  long n = 0;
  long three_all = 0, three_none = 0, five_none = 0;
  std::string three_all_pct, three_none_pct, five_none_pct;
};

struct Fixture {
  GoldStandard gold;
  std::vector<PredictionSet> systems;
};

inline std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream s(line);
    std::string f;
    while (std::getline(s, f, '\t')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

inline long to_long(const std::string& s) { return std::stol(s); }

inline std::vector<PairRow> load_pairwise(const std::string& path) {
  std::vector<PairRow> out;
  for (const auto& f : read_rows(path)) {
    PairRow r{f.at(0), f.at(1), f.at(2)};
    for (int k = 0; k < 3; ++k) {
      r.counts[k] = to_long(f.at(3 + 2 * k));
      r.printed_pct[k] = f.at(4 + 2 * k);
    }
    out.push_back(r);
  }
  return out;
}

inline std::vector<KwayRow> load_kway(const std::string& path) {
  std::vector<KwayRow> out;
  for (const auto& f : read_rows(path)) {
    KwayRow r;
    r.sample = f.at(0);
    r.n = to_long(f.at(1));
    r.three_all = to_long(f.at(2));
    r.three_all_pct = f.at(3);
    r.three_none = to_long(f.at(4));
    r.three_none_pct = f.at(5);
    r.five_none = to_long(f.at(6));
    r.five_none_pct = f.at(7);
    out.push_back(r);
  }
  return out;
}

inline std::string instance_id(long i) {
  std::string s = std::to_string(i);
  return "t" + std::string(6 - std::min<std::size_t>(6, s.size()), '0') + s;
}

/// Gold sense "s" everywhere; a wrong answer is "x". The "one" bucket is
/// split as evenly as possible, system a taking the odd instance.
inline Fixture pair_fixture(const PairRow& row) {
  Fixture fx;
  fx.systems = {{row.system_a, {}}, {row.system_b, {}}};
  const long a_only = (row.counts[1] + 1) / 2;
  for (long i = 0; i < row.n(); ++i) {
    const auto id = instance_id(i);
    fx.gold[id] = "s";
    const bool both = i < row.counts[0];
    const bool one = !both && i < row.counts[0] + row.counts[1];
    const bool a_right = both || (one && i < row.counts[0] + a_only);
    const bool b_right = both || (one && !a_right);
    fx.systems[0].answers[id] = a_right ? "s" : "x";
    fx.systems[1].answers[id] = b_right ? "s" : "x";
  }
  return fx;
}

/// Five systems: three primary ones and two extra. Instances where no primary
/// system is right but some extra one is are answered by the first extra.
inline Fixture kway_fixture(const KwayRow& row) {
  Fixture fx;
  for (const char* name : {"UBC", "second", "third", "stump", "majority"}) fx.systems.push_back({name, {}});
  const long rescued = row.three_none - row.five_none;
  for (long i = 0; i < row.n; ++i) {
    const auto id = instance_id(i);
    fx.gold[id] = "s";
    std::array<bool, 5> right{};
    if (i < row.three_all) {
      right.fill(true);
    } else if (i < row.three_all + rescued) {
      right[3] = true;
    } else if (i < row.three_all + row.three_none) {
      // none right
    } else {
      right[0] = true;
    }
    for (int k = 0; k < 5; ++k) fx.systems[k].answers[id] = right[k] ? "s" : "x";
  }
  return fx;
}

/// Digits after the decimal point of a printed percentage.
inline int decimals_of(const std::string& printed) {
  const auto dot = printed.find('.');
  return dot == std::string::npos ? 0 : static_cast<int>(printed.size() - dot - 1);
}

/// Recomputed percentage rounded to the printed precision, minus the printed value.
inline double printed_gap(long count, long n, const std::string& printed) {
  const auto recomputed = format_percent(count, n, decimals_of(printed));
  return std::stod(recomputed) - std::stod(printed);
}

}  // namespace lexvote::agreement_fixture
