#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "lexvote/corpus.hpp"

namespace lexvote::testing {

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("lexvote_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Instance make_instance(std::string id, std::string target, std::vector<std::string> tokens,
                              std::size_t target_index, std::optional<std::string> sense = std::nullopt) {
  Instance inst;
  inst.id = std::move(id);
  inst.target_word = std::move(target);
  inst.tokens = std::move(tokens);
  inst.target_index = target_index;
  inst.gold_sense = std::move(sense);
  return inst;
}

}  // namespace lexvote::testing
