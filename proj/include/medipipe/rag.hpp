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

// The two pipeline flows: session -> note (generation and ingestion) and
// query -> answer (retrieval-augmented generation).

#ifndef MEDIPIPE_RAG_HPP_
#define MEDIPIPE_RAG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "medipipe/chunking.hpp"
#include "medipipe/providers.hpp"
#include "medipipe/soap.hpp"
#include "medipipe/transcript.hpp"
#include "medipipe/vindex.hpp"

namespace medipipe {

inline constexpr std::string_view kDefaultSystemPrompt =
    "You are a clinical assistant. Answer using only the provided context. "
    "If the context is insufficient, say so.";

struct RagConfig {
  std::size_t k = 4;
  std::string system_prompt = std::string(kDefaultSystemPrompt);
  ChunkConfig chunk_cfg;
  std::size_t max_context_chars = 4000;
  int answer_max_tokens = 512;
  int note_max_tokens = 1024;

  // Throws Error(kConfig).
  void validate() const;
};

struct Citation {
  std::uint64_t entry_id = 0;
  double score = 0.0;
  std::string source_id;

  bool operator==(const Citation&) const = default;
};

struct Answer {
  std::string text;
  std::vector<Citation> citations;
  bool context_used = false;

  bool operator==(const Answer&) const = default;
};

std::string note_id_for_session(std::string_view session_id);

// Renders the finalized session, prompts the generator and parses the
// result. Throws Error(kPrecondition) for open or empty sessions, the
// generator's ProviderError (stage "generate") and ParseError when the
// output has no recognizable header or no content.
SoapNote generate_note(const TranscriptSession& session, const Generator& generator,
                       const InstructionTemplate& tmpl = default_instruction_template(),
                       int max_tokens = 1024);

// Chunks render_note(note), embeds every chunk, then inserts all of them in
// one batch. Nothing is inserted if any step fails.
std::vector<std::uint64_t> ingest_note(const SoapNote& note, const Embedder& embedder,
                                       VectorIndex& index, const RagConfig& cfg);

struct AssembledPrompt {
  std::string text;
  std::size_t hits_used = 0;
};

// system_prompt, "Context:", then "[i] <chunk>" lines for leading hits as
// long as the running total of those lines (code points, newline included)
// stays within max_context_chars, then "Question: <query>" and "Answer:".
// Throws Error(kPrecondition) for an empty query.
AssembledPrompt assemble_prompt(std::string_view system_prompt,
                                const std::vector<SearchHit>& hits, std::string_view query,
                                std::size_t max_context_chars);

// Errors from providers and the index are rethrown as ProviderError tagged
// with the failing stage: "embed", "search" or "generate".
Answer answer_query(std::string_view query, const RagConfig& cfg, const Embedder& embedder,
                    const VectorIndex& index, const Generator& generator,
                    const MetadataFilter& filter = {});

}  // namespace medipipe

#endif  // MEDIPIPE_RAG_HPP_
