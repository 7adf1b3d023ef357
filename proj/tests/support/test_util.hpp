// Copyright 2026 The MediPipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEDIPIPE_TESTS_TEST_UTIL_HPP_
#define MEDIPIPE_TESTS_TEST_UTIL_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

namespace testutil {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("medipipe-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++) + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Corpus tree laid out like the public benchmark: 67 train, 20 valid and
// three test sets of 40. Writes <root>/manifest.tsv.
inline void write_benchmark_tree(const fs::path& root) {
  std::ostringstream manifest;
  auto emit = [&](const std::string& split, int count) {
    for (int i = 0; i < count; ++i) {
      const std::string id = split + "-" + std::to_string(i);
      write(root / (id + ".dialogue.txt"),
            "[doctor] hi , how are you feeling today ?\n[patient] my back hurts " +
                std::to_string(i) + " days now .");
      write(root / (id + ".note.txt"),
            "CHIEF COMPLAINT\n\nBack pain.\n\nHISTORY OF PRESENT ILLNESS\n\nPain for " +
                std::to_string(i) + " days.");
      manifest << id << '\t' << split << '\n';
    }
  };
  emit("train", 67);
  emit("valid", 20);
  emit("test1", 40);
  emit("test2", 40);
  emit("test3", 40);
  write(root / "manifest.tsv", manifest.str());
}

}  // namespace testutil

#endif  // MEDIPIPE_TESTS_TEST_UTIL_HPP_
