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

#include "medipipe/chunking.hpp"

#include <deque>
#include <string>

#include "medipipe/errors.hpp"
#include "medipipe/utf8.hpp"

namespace medipipe {
namespace {

struct Piece {
  std::size_t start;
  std::size_t end;
  std::size_t length() const { return end - start; }
};

class RecursiveSplitter {
 public:
  RecursiveSplitter(const std::u32string& text, const ChunkConfig& cfg)
      : text_(text), chunk_size_(cfg.chunk_size), overlap_(cfg.overlap) {
    separators_.reserve(cfg.separators.size());
    for (const auto& s : cfg.separators) separators_.push_back(utf8::decode(s));
  }

  std::vector<Piece> run() {
    split({0, text_.size()}, 0);
    return std::move(chunks_);
  }

 private:
  bool contains(Piece range, const std::u32string& sep) const {
    std::u32string_view view(text_.data() + range.start, range.length());
    return view.find(sep) != std::u32string_view::npos;
  }

  std::vector<Piece> cut(Piece range, const std::u32string& sep) const {
    std::vector<Piece> pieces;
    if (sep.empty()) {
      for (std::size_t i = range.start; i < range.end; ++i) pieces.push_back({i, i + 1});
      return pieces;
    }
    std::u32string_view view(text_.data(), range.end);
    std::size_t pos = range.start;
    while (true) {
      const std::size_t hit = view.find(sep, pos);
      if (hit == std::u32string_view::npos) {
        pieces.push_back({pos, range.end});
        break;
      }
      pieces.push_back({pos, hit});
      pos = hit + sep.size();
    }
    return pieces;
  }

  void split(Piece range, std::size_t first_sep) {
    std::size_t chosen = separators_.size() - 1;
    for (std::size_t i = first_sep; i < separators_.size(); ++i) {
      if (separators_[i].empty() || contains(range, separators_[i])) {
        chosen = i;
        break;
      }
    }
    const std::u32string& sep = separators_[chosen];
    const std::size_t next = chosen + 1;

    std::vector<Piece> good;
    for (const Piece& p : cut(range, sep)) {
      if (p.length() <= chunk_size_) {
        good.push_back(p);
        continue;
      }
      if (!good.empty()) {
        merge(good, sep.size());
        good.clear();
      }
      if (next < separators_.size()) {
        split(p, next);
      } else {
        chunks_.push_back(p);
      }
    }
    if (!good.empty()) merge(good, sep.size());
  }

  void emit(const std::deque<Piece>& current) {
    Piece chunk{current.front().start, current.back().end};
    if (chunk.length() > 0) chunks_.push_back(chunk);
  }

  void merge(const std::vector<Piece>& pieces, std::size_t sep_len) {
    std::deque<Piece> current;
    std::size_t total = 0;
    for (const Piece& p : pieces) {
      const std::size_t len = p.length();
      auto joined = [&]() { return total + len + (current.empty() ? 0 : sep_len); };
      if (joined() > chunk_size_) {
        if (!current.empty()) {
          emit(current);
          while (total > overlap_ || (!current.empty() && joined() > chunk_size_)) {
            total -= current.front().length() + (current.size() > 1 ? sep_len : 0);
            current.pop_front();
          }
        }
      }
      current.push_back(p);
      total += len + (current.size() > 1 ? sep_len : 0);
    }
    if (!current.empty()) emit(current);
  }

  const std::u32string& text_;
  std::size_t chunk_size_;
  std::size_t overlap_;
  std::vector<std::u32string> separators_;
  std::vector<Piece> chunks_;
};

// True when `gap` is a concatenation of nonempty separators.
bool tiled_by_separators(std::u32string_view gap,
                         const std::vector<std::u32string>& seps) {
  std::vector<bool> ok(gap.size() + 1, false);
  ok[0] = true;
  for (std::size_t i = 0; i < gap.size(); ++i) {
    if (!ok[i]) continue;
    for (const auto& s : seps) {
      if (!s.empty() && gap.substr(i, s.size()) == s) ok[i + s.size()] = true;
    }
  }
  return ok[gap.size()];
}

}  // namespace

void ChunkConfig::validate() const {
  if (chunk_size == 0) throw Error(Errc::kConfig, "chunk_size must be > 0");
  if (overlap >= chunk_size) throw Error(Errc::kConfig, "overlap must be < chunk_size");
  if (separators.empty() || !separators.back().empty()) {
    throw Error(Errc::kConfig, "separator list must end with the empty separator");
  }
}

std::vector<Chunk> split_text(std::string_view text, const ChunkConfig& cfg,
                              std::string_view source_id) {
  cfg.validate();
  if (text.empty()) throw Error(Errc::kPrecondition, "split_text: text is empty");
  const std::u32string cps = utf8::decode(text);
  RecursiveSplitter splitter(cps, cfg);
  std::vector<Chunk> out;
  std::size_t seq = 0;
  for (const Piece& p : splitter.run()) {
    Chunk c;
    c.text = utf8::encode(std::u32string_view(cps).substr(p.start, p.length()));
    c.source_id = std::string(source_id);
    c.seq = seq++;
    c.span = {p.start, p.end};
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ChunkViolation> validate_chunks(std::string_view text,
                                            const std::vector<Chunk>& chunks,
                                            const ChunkConfig& cfg) {
  std::vector<ChunkViolation> out;
  const std::u32string cps = utf8::decode(text);
  std::vector<std::u32string> seps;
  for (const auto& s : cfg.separators) seps.push_back(utf8::decode(s));
  auto report = [&](ChunkViolationKind kind, std::size_t i, std::string msg) {
    out.push_back({kind, i, std::move(msg)});
  };

  std::vector<bool> covered(cps.size(), false);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const Chunk& c = chunks[i];
    const std::size_t len = utf8::length(c.text);
    if (len == 0 || len > cfg.chunk_size) {
      report(ChunkViolationKind::kSize, i,
             "chunk length " + std::to_string(len) + " outside (0, " +
                 std::to_string(cfg.chunk_size) + "]");
    }
    const bool span_ok = c.span.start <= c.span.end && c.span.end <= cps.size();
    if (!span_ok) {
      report(ChunkViolationKind::kSpan, i, "span out of range");
    } else {
      if (utf8::encode(std::u32string_view(cps).substr(c.span.start, c.span.length())) !=
          c.text) {
        report(ChunkViolationKind::kSpan, i, "span does not match chunk text");
      }
      for (std::size_t k = c.span.start; k < c.span.end; ++k) covered[k] = true;
    }
    if (i == 0) continue;
    const Chunk& prev = chunks[i - 1];
    if (c.seq <= prev.seq) {
      report(ChunkViolationKind::kMonotonicity, i, "seq not strictly increasing");
    }
    if (c.span.start < prev.span.start) {
      report(ChunkViolationKind::kMonotonicity, i, "span start decreased");
    }
    if (prev.span.end > c.span.start) {
      const std::size_t shared = prev.span.end - c.span.start;
      if (shared > cfg.overlap) {
        report(ChunkViolationKind::kOverlap, i,
               "overlap " + std::to_string(shared) + " exceeds " +
                   std::to_string(cfg.overlap));
      }
    }
  }

  std::size_t k = 0;
  while (k < cps.size()) {
    if (covered[k]) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < cps.size() && !covered[end]) ++end;
    if (!tiled_by_separators(std::u32string_view(cps).substr(k, end - k), seps)) {
      report(ChunkViolationKind::kCoverage, chunks.size(),
             "characters [" + std::to_string(k) + ", " + std::to_string(end) +
                 ") are not covered by any chunk");
    }
    k = end;
  }
  return out;
}

}  // namespace medipipe
