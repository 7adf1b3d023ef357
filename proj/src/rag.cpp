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

#include "medipipe/rag.hpp"

#include <utility>

#include "medipipe/errors.hpp"
#include "medipipe/utf8.hpp"

namespace medipipe {
namespace {

// Runs `fn`, re-labelling any library error with the pipeline stage.
template <typename Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ProviderError& e) {
    throw ProviderError(e.what(), e.retryable(), stage, e.code());
  } catch (const Error& e) {
    throw ProviderError(e.what(), false, stage, e.code());
  }
}

}  // namespace

void RagConfig::validate() const {
  if (k == 0) throw Error(Errc::kConfig, "rag k must be >= 1");
  if (system_prompt.empty()) throw Error(Errc::kConfig, "system prompt is empty");
  if (max_context_chars == 0) throw Error(Errc::kConfig, "max_context_chars must be > 0");
  if (answer_max_tokens <= 0 || note_max_tokens <= 0) {
    throw Error(Errc::kConfig, "token limits must be > 0");
  }
  chunk_cfg.validate();
}

std::string note_id_for_session(std::string_view session_id) {
  return "note-" + std::string(session_id);
}

SoapNote generate_note(const TranscriptSession& session, const Generator& generator,
                       const InstructionTemplate& tmpl, int max_tokens) {
  if (!session.finalized()) {
    throw Error(Errc::kPrecondition,
                "session " + session.session_id() + " must be finalized first");
  }
  GenerationRequest req;
  req.prompt = build_instruction_prompt(render_dialogue(session), tmpl);
  req.max_tokens = max_tokens;
  req.temperature = 0.0;
  const std::string output = staged("generate", [&] { return generator.generate(req); });
  SoapNote note = parse_note_text(output);
  if (!note.is_valid()) {
    throw ParseError("generator output has headers but no content", output);
  }
  note.note_id = note_id_for_session(session.session_id());
  note.source_session = session.session_id();
  return note;
}

std::vector<std::uint64_t> ingest_note(const SoapNote& note, const Embedder& embedder,
                                       VectorIndex& index, const RagConfig& cfg) {
  if (!note.is_valid()) throw Error(Errc::kValidation, "note has no content");
  if (note.note_id.empty()) throw Error(Errc::kValidation, "note has no id");
  const std::vector<Chunk> chunks = split_text(render_note(note), cfg.chunk_cfg, note.note_id);
  std::vector<std::string> texts;
  texts.reserve(chunks.size());
  for (const auto& c : chunks) texts.push_back(c.text);
  std::vector<EmbeddingVector> vectors =
      staged("embed", [&] { return embedder.embed_texts(texts); });

  std::vector<CandidateEntry> batch;
  batch.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    CandidateEntry e;
    e.vector = std::move(vectors[i]);
    e.chunk_text = chunks[i].text;
    e.metadata.source_id = note.note_id;
    e.metadata.note_id = note.note_id;
    e.metadata.seq = static_cast<std::int64_t>(chunks[i].seq);
    batch.push_back(std::move(e));
  }
  return index.upsert_batch(std::move(batch));
}

AssembledPrompt assemble_prompt(std::string_view system_prompt,
                                const std::vector<SearchHit>& hits, std::string_view query,
                                std::size_t max_context_chars) {
  if (query.empty()) throw Error(Errc::kPrecondition, "query is empty");
  AssembledPrompt out;
  out.text = std::string(system_prompt);
  out.text += "\nContext:\n";
  std::size_t used = 0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    std::string line = "[" + std::to_string(i + 1) + "] " + hits[i].chunk_text + "\n";
    const std::size_t len = utf8::length(line);
    if (used + len > max_context_chars) break;
    used += len;
    out.text += line;
    ++out.hits_used;
  }
  out.text += "Question: ";
  out.text += query;
  out.text += "\nAnswer:";
  return out;
}

Answer answer_query(std::string_view query, const RagConfig& cfg, const Embedder& embedder,
                    const VectorIndex& index, const Generator& generator,
                    const MetadataFilter& filter) {
  if (query.empty()) throw Error(Errc::kPrecondition, "query is empty");
  cfg.validate();
  const std::vector<std::string> texts = {std::string(query)};
  const EmbeddingVector qvec =
      staged("embed", [&] { return embedder.embed_texts(texts).front(); });
  const std::vector<SearchHit> hits =
      staged("search", [&] { return index.knn(qvec, cfg.k, filter); });
  const AssembledPrompt prompt =
      assemble_prompt(cfg.system_prompt, hits, query, cfg.max_context_chars);

  GenerationRequest req;
  req.prompt = prompt.text;
  req.max_tokens = cfg.answer_max_tokens;
  req.temperature = 0.0;

  Answer answer;
  answer.text = staged("generate", [&] { return generator.generate(req); });
  for (std::size_t i = 0; i < prompt.hits_used; ++i) {
    answer.citations.push_back({hits[i].entry_id, hits[i].score, hits[i].metadata.source_id});
  }
  answer.context_used = !answer.citations.empty();
  return answer;
}

}  // namespace medipipe
