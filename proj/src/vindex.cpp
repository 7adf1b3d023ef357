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

#include "medipipe/vindex.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <sstream>

#include "medipipe/errors.hpp"

namespace medipipe {
namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'M', 'P', 'V', 'X'};
constexpr std::size_t kHeaderSize = 4 + 2 + 4 + 8;
constexpr double kQueryNormTolerance = 1e-6;

static_assert(std::endian::native == std::endian::little,
              "index serialization assumes a little-endian host");

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

void put_bytes(std::string& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t limit) : bytes_(bytes), limit_(limit) {}

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_string(const char* what) {
    const auto len = get<std::uint32_t>(what);
    need(len, what);
    std::string s = bytes_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (n > limit_ - pos_) {
      throw FormatError(std::string("truncated ") + what, pos_);
    }
  }

  const std::string& bytes_;
  std::size_t limit_;
  std::size_t pos_ = 0;
};

json metadata_to_json(const EntryMetadata& m) {
  json j;
  j["source_id"] = m.source_id;
  j["note_id"] = m.note_id ? json(*m.note_id) : json(nullptr);
  j["seq"] = m.seq;
  return j;
}

EntryMetadata metadata_from_json(const json& j) {
  EntryMetadata m;
  m.source_id = j.at("source_id").get<std::string>();
  if (j.contains("note_id") && !j.at("note_id").is_null()) {
    m.note_id = j.at("note_id").get<std::string>();
  }
  m.seq = j.at("seq").get<std::int64_t>();
  return m;
}

double inverse_norm(const std::vector<float>& v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * static_cast<double>(x);
  return sum > 0.0 ? 1.0 / std::sqrt(sum) : 0.0;
}

}  // namespace

std::uint32_t crc32_of(const void* data, std::size_t size) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  const auto* p = static_cast<const Bytef*>(data);
  while (size > 0) {
    const auto step = static_cast<uInt>(std::min<std::size_t>(size, 1U << 30));
    crc = ::crc32(crc, p, step);
    p += step;
    size -= step;
  }
  return static_cast<std::uint32_t>(crc);
}

VectorIndex::VectorIndex(bool normalize_on_insert)
    : normalize_on_insert_(normalize_on_insert) {}

VectorIndex::VectorIndex(const VectorIndex& other) {
  std::shared_lock lock(other.mu_);
  normalize_on_insert_ = other.normalize_on_insert_;
  dim_ = other.dim_;
  next_id_ = other.next_id_;
  stored_ = other.stored_;
}

VectorIndex& VectorIndex::operator=(const VectorIndex& other) {
  if (this == &other) return *this;
  VectorIndex copy(other);
  *this = std::move(copy);
  return *this;
}

VectorIndex::VectorIndex(VectorIndex&& other) noexcept {
  std::unique_lock lock(other.mu_);
  normalize_on_insert_ = other.normalize_on_insert_;
  dim_ = other.dim_;
  next_id_ = other.next_id_;
  stored_ = std::move(other.stored_);
}

VectorIndex& VectorIndex::operator=(VectorIndex&& other) noexcept {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  normalize_on_insert_ = other.normalize_on_insert_;
  dim_ = other.dim_;
  next_id_ = other.next_id_;
  stored_ = std::move(other.stored_);
  return *this;
}

IndexEntry VectorIndex::prepare(CandidateEntry entry, std::size_t expected_dim) const {
  EmbeddingVector& v = entry.vector;
  if (v.dim() == 0) throw Error(Errc::kDimension, "vector has dimension 0");
  if (expected_dim != 0 && v.dim() != expected_dim) {
    throw Error(Errc::kDimension, "vector dimension " + std::to_string(v.dim()) +
                                      " does not match index dimension " +
                                      std::to_string(expected_dim));
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) throw Error(Errc::kValue, "vector has non-finite values");
  }
  if (std::abs(v.norm() - 1.0) > kUnitNormTolerance) {
    if (!normalize_on_insert_) {
      throw Error(Errc::kValue, "vector is not unit-normalized (norm " +
                                    std::to_string(v.norm()) + ")");
    }
    v = normalized(std::move(v));
  }
  IndexEntry out;
  out.vector.assign(v.values.begin(), v.values.end());
  out.chunk_text = std::move(entry.chunk_text);
  out.metadata = std::move(entry.metadata);
  return out;
}

void VectorIndex::insert_locked(IndexEntry entry) {
  if (dim_ == 0) dim_ = entry.vector.size();
  entry.entry_id = next_id_++;
  const double inv = inverse_norm(entry.vector);
  stored_.push_back({std::move(entry), inv});
}

std::uint64_t VectorIndex::upsert(CandidateEntry entry) {
  std::unique_lock lock(mu_);
  IndexEntry prepared = prepare(std::move(entry), dim_);
  insert_locked(std::move(prepared));
  return stored_.back().entry.entry_id;
}

std::vector<std::uint64_t> VectorIndex::upsert_batch(std::vector<CandidateEntry> entries) {
  std::unique_lock lock(mu_);
  std::vector<IndexEntry> prepared;
  prepared.reserve(entries.size());
  std::size_t dim = dim_;
  for (auto& e : entries) {
    prepared.push_back(prepare(std::move(e), dim));
    if (dim == 0) dim = prepared.back().vector.size();
  }
  std::vector<std::uint64_t> ids;
  ids.reserve(prepared.size());
  for (auto& e : prepared) {
    insert_locked(std::move(e));
    ids.push_back(stored_.back().entry.entry_id);
  }
  return ids;
}

std::vector<SearchHit> VectorIndex::knn(const EmbeddingVector& query, std::size_t k,
                                        const MetadataFilter& filter) const {
  if (k == 0) throw Error(Errc::kPrecondition, "k must be > 0");
  std::shared_lock lock(mu_);
  if (stored_.empty()) return {};
  if (query.dim() != dim_) {
    throw Error(Errc::kDimension, "query dimension " + std::to_string(query.dim()) +
                                      " does not match index dimension " +
                                      std::to_string(dim_));
  }
  for (double x : query.values) {
    if (!std::isfinite(x)) throw Error(Errc::kValue, "query has non-finite values");
  }
  const double qnorm = query.norm();
  if (std::abs(qnorm - 1.0) > kQueryNormTolerance) {
    throw Error(Errc::kPrecondition, "query vector is not unit-normalized");
  }

  struct Scored {
    double score;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(stored_.size());
  for (std::size_t i = 0; i < stored_.size(); ++i) {
    const Stored& s = stored_[i];
    if (filter && !filter(s.entry.metadata)) continue;
    double dot = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      dot += query.values[d] * static_cast<double>(s.entry.vector[d]);
    }
    const double score = std::clamp(dot * s.inv_norm / qnorm, -1.0, 1.0);
    scored.push_back({score, i});
  }
  const std::size_t take = std::min(k, scored.size());
  // Stored order is ascending entry_id, so index order breaks ties.
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), [](const Scored& a, const Scored& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.index < b.index;
                    });
  std::vector<SearchHit> hits;
  hits.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const IndexEntry& e = stored_[scored[i].index].entry;
    hits.push_back({e.entry_id, scored[i].score, e.chunk_text, e.metadata});
  }
  return hits;
}

std::size_t VectorIndex::size() const {
  std::shared_lock lock(mu_);
  return stored_.size();
}

std::optional<std::size_t> VectorIndex::dimension() const {
  std::shared_lock lock(mu_);
  if (dim_ == 0) return std::nullopt;
  return dim_;
}

std::uint64_t VectorIndex::next_id() const {
  std::shared_lock lock(mu_);
  return next_id_;
}

std::vector<IndexEntry> VectorIndex::entries() const {
  std::shared_lock lock(mu_);
  std::vector<IndexEntry> out;
  out.reserve(stored_.size());
  for (const auto& s : stored_) out.push_back(s.entry);
  return out;
}

std::string VectorIndex::serialize() const {
  std::shared_lock lock(mu_);
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put<std::uint16_t>(out, kIndexFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(stored_.size()));
  for (const auto& s : stored_) {
    put<std::uint64_t>(out, s.entry.entry_id);
    for (float x : s.entry.vector) put<float>(out, x);
    put_bytes(out, s.entry.chunk_text);
    put_bytes(out, metadata_to_json(s.entry.metadata).dump());
  }
  put<std::uint32_t>(out, crc32_of(out.data(), out.size()));
  return out;
}

VectorIndex VectorIndex::deserialize(const std::string& bytes) {
  if (bytes.size() < kHeaderSize + sizeof(std::uint32_t)) {
    throw FormatError("truncated header", bytes.size());
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("bad magic bytes", 0);
  }
  const std::size_t body_end = bytes.size() - sizeof(std::uint32_t);
  Reader header(bytes, body_end);
  header.get<std::uint32_t>("magic");
  const auto version = header.get<std::uint16_t>("version");
  if (version != kIndexFormatVersion) {
    throw FormatError("unsupported version " + std::to_string(version), 4);
  }
  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, bytes.data() + body_end, sizeof(stored_crc));
  if (crc32_of(bytes.data(), body_end) != stored_crc) {
    throw FormatError("checksum mismatch", body_end);
  }

  Reader r(bytes, body_end);
  r.get<std::uint32_t>("magic");
  r.get<std::uint16_t>("version");
  const auto dim = r.get<std::uint32_t>("dimension");
  const auto count = r.get<std::uint64_t>("count");
  if (count > 0 && dim == 0) throw FormatError("entries present but dimension is 0", 6);

  VectorIndex index;
  index.dim_ = dim;
  bool first = true;
  for (std::uint64_t n = 0; n < count; ++n) {
    const std::size_t entry_offset = r.pos();
    IndexEntry e;
    e.entry_id = r.get<std::uint64_t>("entry id");
    if (!first && e.entry_id < index.next_id_) {
      throw FormatError("entry ids not increasing", entry_offset);
    }
    first = false;
    e.vector.resize(dim);
    for (auto& x : e.vector) {
      const std::size_t at = r.pos();
      x = r.get<float>("vector");
      if (!std::isfinite(x)) throw FormatError("non-finite vector value", at);
    }
    e.chunk_text = r.get_string("chunk text");
    const std::size_t meta_offset = r.pos();
    const std::string meta = r.get_string("metadata");
    try {
      e.metadata = metadata_from_json(json::parse(meta));
    } catch (const json::exception& ex) {
      throw FormatError(std::string("bad metadata JSON: ") + ex.what(), meta_offset);
    }
    const double inv = inverse_norm(e.vector);
    if (inv == 0.0) throw FormatError("zero vector", entry_offset);
    index.next_id_ = e.entry_id + 1;
    index.stored_.push_back({std::move(e), inv});
  }
  if (r.pos() != body_end) throw FormatError("trailing bytes after entries", r.pos());
  return index;
}

void VectorIndex::persist(const std::filesystem::path& path) const {
  const std::string bytes = serialize();
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(Errc::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::kIo, "cannot replace " + path.string() + ": " + ec.message());
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read index " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace medipipe
