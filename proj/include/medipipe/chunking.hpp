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

// Recursive character splitting. Lengths and spans are counted in
// Unicode code points, never bytes, so a chunk never cuts a UTF-8 sequence.

#ifndef MEDIPIPE_CHUNKING_HPP_
#define MEDIPIPE_CHUNKING_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace medipipe {

struct ChunkConfig {
  std::size_t chunk_size = 1000;
  std::size_t overlap = 150;
  std::vector<std::string> separators = {"\n\n", "\n", " ", ""};

  // Throws Error(kConfig): chunk_size must be > 0, overlap < chunk_size and
  // the separator list must end with "".
  void validate() const;
};

struct CharSpan {
  std::size_t start = 0;  // inclusive, code points
  std::size_t end = 0;    // exclusive

  std::size_t length() const { return end - start; }
  bool operator==(const CharSpan&) const = default;
};

struct Chunk {
  std::string text;
  std::string source_id;
  std::size_t seq = 0;
  CharSpan span;

  bool operator==(const Chunk&) const = default;
};

// Splits on the first applicable separator, recurses into oversize pieces
// with the remaining separators, then greedily merges conforming pieces
// (rejoined with their own separator) up to chunk_size. When a chunk
// closes, the next one starts from the trailing pieces of the previous one
// whose joined length stays within `overlap`.
//
// Throws Error(kPrecondition) for empty text, Error(kConfig) for a bad cfg.
std::vector<Chunk> split_text(std::string_view text, const ChunkConfig& cfg,
                              std::string_view source_id = {});

enum class ChunkViolationKind { kSize, kSpan, kMonotonicity, kOverlap, kCoverage };

struct ChunkViolation {
  ChunkViolationKind kind;
  std::size_t chunk_index;
  std::string message;
};

// Diagnostic check of a chunk list against `text`. Empty result means the
// size bound, span/text agreement, ordering, overlap bound and coverage all
// hold. Coverage allows uncovered gaps only when they are made entirely of
// configured separators.
std::vector<ChunkViolation> validate_chunks(std::string_view text,
                                            const std::vector<Chunk>& chunks,
                                            const ChunkConfig& cfg);

}  // namespace medipipe

#endif  // MEDIPIPE_CHUNKING_HPP_
