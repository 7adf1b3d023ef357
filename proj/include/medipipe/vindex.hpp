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

// Exact cosine kNN over chunk embeddings.
//
// Vectors are held as 32-bit floats, exactly as persisted, so a loaded index
// answers every query bit-for-bit like the one that was saved. Scores are
// the cosine between the query and the stored float vector, computed in
// double precision.
//
// File layout (little-endian):
//   "MPVX" | version u16 | dim u32 | count u64
//   count x ( id u64 | dim x f32 | text_len u32 | text | meta_len u32 | meta JSON )
//   crc32 u32 over every preceding byte

#ifndef MEDIPIPE_VINDEX_HPP_
#define MEDIPIPE_VINDEX_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "medipipe/providers.hpp"

namespace medipipe {

inline constexpr std::uint16_t kIndexFormatVersion = 1;

struct EntryMetadata {
  std::string source_id;
  std::optional<std::string> note_id;
  std::int64_t seq = 0;

  bool operator==(const EntryMetadata&) const = default;
};

struct CandidateEntry {
  EmbeddingVector vector;
  std::string chunk_text;
  EntryMetadata metadata;
};

struct IndexEntry {
  std::uint64_t entry_id = 0;
  std::vector<float> vector;
  std::string chunk_text;
  EntryMetadata metadata;

  bool operator==(const IndexEntry&) const = default;
};

struct SearchHit {
  std::uint64_t entry_id = 0;
  double score = 0.0;
  std::string chunk_text;
  EntryMetadata metadata;

  bool operator==(const SearchHit&) const = default;
};

using MetadataFilter = std::function<bool(const EntryMetadata&)>;

// Many concurrent readers or one writer. Batch inserts become visible all at
// once.
class VectorIndex {
 public:
  explicit VectorIndex(bool normalize_on_insert = false);

  VectorIndex(const VectorIndex& other);
  VectorIndex& operator=(const VectorIndex& other);
  VectorIndex(VectorIndex&& other) noexcept;
  VectorIndex& operator=(VectorIndex&& other) noexcept;

  // The first insert fixes the dimension. Throws Error(kDimension) on a
  // mismatch and Error(kValue) on non-finite or non-unit vectors (unless
  // normalize_on_insert).
  std::uint64_t upsert(CandidateEntry entry);
  // All-or-nothing: every entry is validated before any is inserted.
  std::vector<std::uint64_t> upsert_batch(std::vector<CandidateEntry> entries);

  // Top-k by (score desc, entry_id asc). Throws Error(kDimension) on a
  // dimension mismatch, Error(kPrecondition) for k == 0 or a non-unit query.
  std::vector<SearchHit> knn(const EmbeddingVector& query, std::size_t k,
                             const MetadataFilter& filter = {}) const;

  std::size_t size() const;
  std::optional<std::size_t> dimension() const;
  std::uint64_t next_id() const;
  std::vector<IndexEntry> entries() const;

  // Writes to a temporary sibling and renames over `path`.
  void persist(const std::filesystem::path& path) const;
  // Throws FormatError (with byte offset) for a malformed
  // file and Error(kIo) when the file cannot be read.
  static VectorIndex load(const std::filesystem::path& path);

  std::string serialize() const;
  static VectorIndex deserialize(const std::string& bytes);

 private:
  struct Stored {
    IndexEntry entry;
    double inv_norm;
  };

  IndexEntry prepare(CandidateEntry entry, std::size_t expected_dim) const;
  void insert_locked(IndexEntry entry);

  mutable std::shared_mutex mu_;
  bool normalize_on_insert_;
  std::size_t dim_ = 0;
  std::uint64_t next_id_ = 0;
  std::vector<Stored> stored_;
};

std::uint32_t crc32_of(const void* data, std::size_t size);

}  // namespace medipipe

#endif  // MEDIPIPE_VINDEX_HPP_
