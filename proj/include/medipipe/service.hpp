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

// JSON-over-HTTP front end for note capture and retrieval.
//
//   POST /v1/sessions                      -> 201 {session_id}
//   POST /v1/sessions/{id}/segments        {start, end, speaker, text} -> 204
//   POST /v1/sessions/{id}/transcribe      {audio_id} -> 200 {segments_added}
//   POST /v1/sessions/{id}/finalize        -> 200 {note_id, note}
//   POST /v1/query                         {query, k?} -> 200 {answer, citations, context_used}
//   GET  /v1/notes/{note_id}               -> 200 note
//   GET  /v1/health                        -> 200 {status, index_entries}
//
// Every error body is {"error": {"code", "message", "stage"?}}.
//
// Notes (one JSON file each) and the index file are durable and are
// written before finalize answers. Open sessions live in memory; when a
// snapshot path is configured they are rewritten there after each change.

#ifndef MEDIPIPE_SERVICE_HPP_
#define MEDIPIPE_SERVICE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>

#include "medipipe/providers.hpp"
#include "medipipe/rag.hpp"
#include "medipipe/soap.hpp"
#include "medipipe/transcript.hpp"
#include "medipipe/vindex.hpp"

namespace medipipe {

inline constexpr const char* kConfigEnv = "MEDIPIPE_CONFIG";

// Config file: one "key = value" per line, '#' starts a comment. Keys:
//   listen_addr, asr, embed, generate, timeout_ms, mock_dim, index_path,
//   notes_dir, sessions_snapshot, cors_origin, rag.k, rag.max_context_chars,
//   rag.chunk_size, rag.chunk_overlap, rag.system_prompt,
//   rag.answer_max_tokens, rag.note_max_tokens
// Provider values are "mock" or an http:// base URL.
struct ServiceConfig {
  std::string listen_addr = "127.0.0.1:8080";
  std::string asr = "mock";
  std::string embed = "mock";
  std::string generate = "mock";
  int timeout_ms = 30000;
  std::size_t mock_dim = kDefaultMockDim;
  std::filesystem::path index_path = "medipipe.index";
  std::filesystem::path notes_dir = "notes";
  std::optional<std::filesystem::path> sessions_snapshot;
  std::string cors_origin = "*";
  RagConfig rag;

  // Throws Error(kConfig).
  void validate() const;
  std::string host() const;
  int port() const;
};

// Relative paths are kept as written.
ServiceConfig parse_service_config(std::string_view text);
// Relative paths resolve against the config file's directory.
ServiceConfig load_service_config(const std::filesystem::path& path);

struct HttpReply {
  int status = 200;
  std::string body;  // JSON, empty for 204
};

class Service {
 public:
  // Builds providers from the config. Throws Error(kIo) when the index
  // path is not writable, FormatError for a corrupt index file.
  explicit Service(ServiceConfig cfg);
  Service(ServiceConfig cfg, ProviderSet providers);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Transport-independent dispatch; the HTTP server routes every request
  // here.
  HttpReply handle(std::string_view method, std::string_view path, std::string_view body);

  // Binds listen_addr (port 0 picks a free port) and returns the port.
  int bind();
  // Serves on the bound socket until stop().
  void listen();
  // bind() + listen() on a background thread.
  int start();
  void stop();

  const ServiceConfig& config() const { return cfg_; }
  const VectorIndex& index() const { return index_; }

 private:
  struct Slot {
    std::mutex mu;
    TranscriptSession session;
    explicit Slot(TranscriptSession s) : session(std::move(s)) {}
  };
  struct Server;

  HttpReply create_session();
  HttpReply add_segment(const std::string& id, std::string_view body);
  HttpReply transcribe(const std::string& id, std::string_view body);
  HttpReply finalize_session(const std::string& id);
  HttpReply query(std::string_view body);
  HttpReply get_note(const std::string& note_id);
  HttpReply health();

  std::shared_ptr<Slot> find_slot(const std::string& id) const;
  std::string fresh_session_id();
  void write_snapshot();
  void load_snapshot();
  void load_notes();
  void persist_note(const SoapNote& note);

  ServiceConfig cfg_;
  ProviderSet providers_;
  VectorIndex index_;

  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::mt19937_64 rng_;

  mutable std::shared_mutex notes_mu_;
  std::map<std::string, SoapNote> notes_;

  std::mutex ingest_mu_;
  std::mutex snapshot_mu_;

  std::unique_ptr<Server> server_;
  std::thread thread_;
};

}  // namespace medipipe

#endif  // MEDIPIPE_SERVICE_HPP_
