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

#include "medipipe/service.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "medipipe/errors.hpp"

namespace medipipe {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

HttpReply json_reply(int status, const ojson& body) { return {status, body.dump()}; }

HttpReply error_reply(int status, std::string_view code, std::string_view message,
                      std::string_view stage = {}) {
  ojson err;
  err["code"] = code;
  err["message"] = message;
  if (!stage.empty()) err["stage"] = stage;
  ojson body;
  body["error"] = err;
  return json_reply(status, body);
}

// Status and wire code for a library error.
HttpReply reply_for(const Error& e) {
  if (const auto* pe = dynamic_cast<const ProviderError*>(&e)) {
    return error_reply(502, "provider_error", e.what(), pe->stage());
  }
  if (dynamic_cast<const ParseError*>(&e) != nullptr) {
    return error_reply(502, "provider_error", e.what(), "generate");
  }
  switch (e.code()) {
    case Errc::kNotFound: return error_reply(404, "not_found", e.what());
    case Errc::kState: return error_reply(409, "conflict", e.what());
    case Errc::kValidation:
    case Errc::kOrdering:
    case Errc::kPrecondition:
    case Errc::kValue: return error_reply(422, "validation_error", e.what());
    default: return error_reply(500, "internal_error", e.what());
  }
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(Errc::kConfig, "config key " + key + ": not a number: " + value);
  }
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::kIo, "cannot rename onto " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) parts.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

// Throws the 400/422 reply as a value via std::optional.
std::optional<ojson> parse_body(std::string_view body, HttpReply& fail) {
  try {
    ojson j = ojson::parse(body.empty() ? std::string_view("{}") : body);
    if (!j.is_object()) {
      fail = error_reply(400, "bad_request", "request body must be a JSON object");
      return std::nullopt;
    }
    return j;
  } catch (const ojson::parse_error& e) {
    fail = error_reply(400, "bad_request", std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
}

ojson note_json(const SoapNote& note) {
  return ojson::parse(export_note(note, ExportFormat::kJson));
}

void ensure_writable(const fs::path& path) {
  std::error_code ec;
  const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::create_directories(parent, ec);
  if (ec || !fs::is_directory(parent)) {
    throw Error(Errc::kIo, "index directory not usable: " + parent.string());
  }
  if (fs::exists(path) && fs::is_directory(path)) {
    throw Error(Errc::kIo, "index path is a directory: " + path.string());
  }
  const fs::path probe = path.string() + ".probe";
  {
    std::ofstream out(probe, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIo, "index path not writable: " + path.string());
  }
  fs::remove(probe, ec);
}

}  // namespace

// -- config

void ServiceConfig::validate() const {
  if (host().empty()) throw Error(Errc::kConfig, "listen_addr needs host:port");
  const int p = port();
  if (p < 0 || p > 65535) throw Error(Errc::kConfig, "listen_addr port out of range");
  for (const auto* spec : {&asr, &embed, &generate}) {
    if (spec->empty()) throw Error(Errc::kConfig, "provider must be 'mock' or a URL");
    if (*spec != "mock") ProviderEndpoint::from_url(*spec, timeout_ms).validate();
  }
  if (timeout_ms < 1 || timeout_ms > 600000) throw Error(Errc::kConfig, "timeout_ms out of range");
  if (mock_dim < 8) throw Error(Errc::kConfig, "mock_dim must be >= 8");
  if (index_path.empty()) throw Error(Errc::kConfig, "index_path is empty");
  if (notes_dir.empty()) throw Error(Errc::kConfig, "notes_dir is empty");
  rag.validate();
}

std::string ServiceConfig::host() const {
  const auto colon = listen_addr.rfind(':');
  return colon == std::string::npos ? std::string() : listen_addr.substr(0, colon);
}

int ServiceConfig::port() const {
  const auto colon = listen_addr.rfind(':');
  if (colon == std::string::npos) return -1;
  int p = -1;
  const char* begin = listen_addr.data() + colon + 1;
  const char* end = listen_addr.data() + listen_addr.size();
  const auto [ptr, ec] = std::from_chars(begin, end, p);
  if (ec != std::errc() || ptr != end) return -1;
  return p;
}

ServiceConfig parse_service_config(std::string_view text) {
  ServiceConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::kConfig, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "listen_addr") cfg.listen_addr = value;
    else if (key == "asr") cfg.asr = value;
    else if (key == "embed") cfg.embed = value;
    else if (key == "generate") cfg.generate = value;
    else if (key == "timeout_ms") cfg.timeout_ms = parse_number<int>(key, value);
    else if (key == "mock_dim") cfg.mock_dim = parse_number<std::size_t>(key, value);
    else if (key == "index_path") cfg.index_path = value;
    else if (key == "notes_dir") cfg.notes_dir = value;
    else if (key == "sessions_snapshot") cfg.sessions_snapshot = fs::path(value);
    else if (key == "cors_origin") cfg.cors_origin = value;
    else if (key == "rag.k") cfg.rag.k = parse_number<std::size_t>(key, value);
    else if (key == "rag.max_context_chars") cfg.rag.max_context_chars = parse_number<std::size_t>(key, value);
    else if (key == "rag.chunk_size") cfg.rag.chunk_cfg.chunk_size = parse_number<std::size_t>(key, value);
    else if (key == "rag.chunk_overlap") cfg.rag.chunk_cfg.overlap = parse_number<std::size_t>(key, value);
    else if (key == "rag.system_prompt") cfg.rag.system_prompt = value;
    else if (key == "rag.answer_max_tokens") cfg.rag.answer_max_tokens = parse_number<int>(key, value);
    else if (key == "rag.note_max_tokens") cfg.rag.note_max_tokens = parse_number<int>(key, value);
    else throw Error(Errc::kConfig, "unknown config key: " + key);
  }
  cfg.validate();
  return cfg;
}

ServiceConfig load_service_config(const fs::path& path) {
  ServiceConfig cfg = parse_service_config(read_file(path));
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  auto resolve = [&](fs::path& p) {
    if (p.is_relative()) p = base / p;
  };
  resolve(cfg.index_path);
  resolve(cfg.notes_dir);
  if (cfg.sessions_snapshot) resolve(*cfg.sessions_snapshot);
  return cfg;
}

// -- service

struct Service::Server {
  httplib::Server http;
};

Service::Service(ServiceConfig cfg)
    : Service(cfg, ProviderSet{cfg.asr == "mock" ? mock_providers(cfg.mock_dim).asr
                                                 : make_transcriber(cfg.asr, cfg.timeout_ms),
                               cfg.embed == "mock"
                                   ? std::make_shared<const MockEmbedder>(cfg.mock_dim)
                                   : make_embedder(cfg.embed, cfg.timeout_ms),
                               make_generator(cfg.generate, cfg.timeout_ms)}) {}

Service::Service(ServiceConfig cfg, ProviderSet providers)
    : cfg_(std::move(cfg)), providers_(std::move(providers)), rng_(std::random_device{}()) {
  cfg_.validate();
  if (!providers_.asr || !providers_.embedder || !providers_.generator) {
    throw Error(Errc::kConfig, "all three providers are required");
  }
  ensure_writable(cfg_.index_path);
  if (fs::exists(cfg_.index_path)) index_ = VectorIndex::load(cfg_.index_path);
  std::error_code ec;
  fs::create_directories(cfg_.notes_dir, ec);
  if (ec || !fs::is_directory(cfg_.notes_dir)) {
    throw Error(Errc::kIo, "notes_dir not usable: " + cfg_.notes_dir.string());
  }
  load_notes();
  load_snapshot();
}

Service::~Service() { stop(); }

HttpReply Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  const auto query_at = path.find('?');
  if (query_at != std::string_view::npos) path = path.substr(0, query_at);
  const std::vector<std::string> p = split_path(path);
  try {
    if (p.size() < 2 || p[0] != "v1") return error_reply(404, "not_found", "no such route");
    if (method == "GET") {
      if (p.size() == 2 && p[1] == "health") return health();
      if (p.size() == 3 && p[1] == "notes") return get_note(p[2]);
    } else if (method == "POST") {
      if (p.size() == 2 && p[1] == "sessions") return create_session();
      if (p.size() == 2 && p[1] == "query") return query(body);
      if (p.size() == 4 && p[1] == "sessions") {
        if (p[3] == "segments") return add_segment(p[2], body);
        if (p[3] == "transcribe") return transcribe(p[2], body);
        if (p[3] == "finalize") return finalize_session(p[2]);
      }
    }
    return error_reply(404, "not_found", "no such route");
  } catch (const Error& e) {
    return reply_for(e);
  } catch (const std::exception& e) {
    return error_reply(500, "internal_error", e.what());
  }
}

std::string Service::fresh_session_id() {
  static constexpr char kHex[] = "0123456789abcdef";
  for (;;) {
    std::string id;
    for (int word = 0; word < 2; ++word) {
      std::uint64_t bits = rng_();
      for (int i = 0; i < 16; ++i, bits >>= 4) id += kHex[bits & 0xF];
    }
    if (sessions_.count(id) == 0) return id;
  }
}

std::shared_ptr<Service::Slot> Service::find_slot(const std::string& id) const {
  std::shared_lock lock(sessions_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(Errc::kNotFound, "unknown session " + id);
  return it->second;
}

HttpReply Service::create_session() {
  std::string id;
  {
    std::unique_lock lock(sessions_mu_);
    id = fresh_session_id();
    sessions_.emplace(id, std::make_shared<Slot>(TranscriptSession(id)));
  }
  write_snapshot();
  return json_reply(201, ojson{{"session_id", id}});
}

HttpReply Service::add_segment(const std::string& id, std::string_view body) {
  const auto slot = find_slot(id);
  HttpReply fail;
  const auto j = parse_body(body, fail);
  if (!j) return fail;
  Segment seg;
  try {
    seg.start_s = j->at("start").get<double>();
    seg.end_s = j->at("end").get<double>();
    seg.speaker = Speaker::parse(j->at("speaker").get<std::string>());
    seg.text = j->at("text").get<std::string>();
  } catch (const ojson::exception& e) {
    return error_reply(422, "validation_error",
                       std::string("segment needs start, end, speaker, text: ") + e.what());
  }
  {
    std::lock_guard lock(slot->mu);
    slot->session.append(std::move(seg));
  }
  write_snapshot();
  return {204, {}};
}

HttpReply Service::transcribe(const std::string& id, std::string_view body) {
  const auto slot = find_slot(id);
  HttpReply fail;
  const auto j = parse_body(body, fail);
  if (!j) return fail;
  if (!j->contains("audio_id") || !(*j)["audio_id"].is_string()) {
    return error_reply(422, "validation_error", "audio_id must be a string");
  }
  const std::string audio_id = (*j)["audio_id"].get<std::string>();
  std::size_t added = 0;
  {
    std::lock_guard lock(slot->mu);
    if (slot->session.finalized()) throw Error(Errc::kState, "session " + id + " is finalized");
    std::vector<Segment> segs;
    try {
      segs = providers_.asr->transcribe(audio_id);
    } catch (const ProviderError& e) {
      throw ProviderError(e.what(), e.retryable(), "transcribe", e.code());
    } catch (const Error& e) {
      throw ProviderError(e.what(), false, "transcribe", e.code());
    }
    TranscriptSession staged = slot->session;
    for (auto& s : segs) staged.append(std::move(s));
    added = staged.segments().size() - slot->session.segments().size();
    slot->session = std::move(staged);
  }
  write_snapshot();
  return json_reply(200, ojson{{"segments_added", added}});
}

HttpReply Service::finalize_session(const std::string& id) {
  const auto slot = find_slot(id);
  SoapNote note;
  {
    std::lock_guard lock(slot->mu);
    if (slot->session.finalized()) throw Error(Errc::kState, "session " + id + " is already finalized");
    if (slot->session.segments().empty()) {
      return error_reply(422, "validation_error", "session " + id + " has no segments");
    }
    TranscriptSession done = slot->session;
    done.finalize();
    note = generate_note(done, *providers_.generator, default_instruction_template(),
                         cfg_.rag.note_max_tokens);
    {
      std::lock_guard ingest(ingest_mu_);
      ingest_note(note, *providers_.embedder, index_, cfg_.rag);
      index_.persist(cfg_.index_path);
    }
    persist_note(note);
    {
      std::unique_lock notes_lock(notes_mu_);
      notes_[note.note_id] = note;
    }
    slot->session = std::move(done);
  }
  write_snapshot();
  ojson out;
  out["note_id"] = note.note_id;
  out["note"] = note_json(note);
  return json_reply(200, out);
}

HttpReply Service::query(std::string_view body) {
  HttpReply fail;
  const auto j = parse_body(body, fail);
  if (!j) return fail;
  if (!j->contains("query") || !(*j)["query"].is_string()) {
    return error_reply(422, "validation_error", "query must be a string");
  }
  const std::string q = (*j)["query"].get<std::string>();
  if (q.empty()) return error_reply(422, "validation_error", "query is empty");
  RagConfig rag = cfg_.rag;
  if (j->contains("k")) {
    const auto& k = (*j)["k"];
    if (!k.is_number_integer() || k.get<std::int64_t>() < 1) {
      return error_reply(422, "validation_error", "k must be a positive integer");
    }
    rag.k = k.get<std::size_t>();
  }
  const Answer answer = answer_query(q, rag, *providers_.embedder, index_, *providers_.generator);
  ojson out;
  out["answer"] = answer.text;
  out["citations"] = ojson::array();
  for (const auto& c : answer.citations) {
    out["citations"].push_back(
        ojson{{"entry_id", c.entry_id}, {"score", c.score}, {"source_id", c.source_id}});
  }
  out["context_used"] = answer.context_used;
  return json_reply(200, out);
}

HttpReply Service::get_note(const std::string& note_id) {
  std::shared_lock lock(notes_mu_);
  auto it = notes_.find(note_id);
  if (it == notes_.end()) return error_reply(404, "not_found", "unknown note " + note_id);
  return json_reply(200, note_json(it->second));
}

HttpReply Service::health() {
  return json_reply(200, ojson{{"status", "ok"}, {"index_entries", index_.size()}});
}

void Service::persist_note(const SoapNote& note) {
  write_file_atomic(cfg_.notes_dir / (note.note_id + ".json"), export_note(note, ExportFormat::kJson));
}

void Service::load_notes() {
  for (const auto& entry : fs::directory_iterator(cfg_.notes_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    SoapNote note = note_from_json(read_file(entry.path()));
    notes_[note.note_id] = std::move(note);
  }
}

void Service::write_snapshot() {
  if (!cfg_.sessions_snapshot) return;
  std::lock_guard snap(snapshot_mu_);
  ojson list = ojson::array();
  {
    std::shared_lock lock(sessions_mu_);
    for (const auto& [id, slot] : sessions_) {
      std::lock_guard slot_lock(slot->mu);
      list.push_back(ojson{{"session_id", id},
                           {"state", slot->session.finalized() ? "finalized" : "open"},
                           {"segments", export_session(slot->session)}});
    }
  }
  write_file_atomic(*cfg_.sessions_snapshot, ojson{{"sessions", list}}.dump(2) + "\n");
}

void Service::load_snapshot() {
  if (!cfg_.sessions_snapshot || !fs::exists(*cfg_.sessions_snapshot)) return;
  try {
    const ojson j = ojson::parse(read_file(*cfg_.sessions_snapshot));
    for (const auto& s : j.at("sessions")) {
      const std::string id = s.at("session_id").get<std::string>();
      TranscriptSession session = import_session(id, s.at("segments").get<std::string>());
      if (s.at("state").get<std::string>() == "finalized") session.finalize();
      sessions_.emplace(id, std::make_shared<Slot>(std::move(session)));
    }
  } catch (const ojson::exception& e) {
    throw Error(Errc::kParse, std::string("malformed sessions snapshot: ") + e.what());
  }
}

// -- transport

int Service::bind() {
  if (!server_) {
    server_ = std::make_unique<Server>();
    auto& http = server_->http;
    const std::string origin = cfg_.cors_origin;
    http.set_default_headers({{"Access-Control-Allow-Origin", origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      const HttpReply reply = handle(req.method, req.path, req.body);
      res.status = reply.status;
      if (!reply.body.empty()) res.set_content(reply.body, "application/json");
    };
    http.Get(".*", route);
    http.Post(".*", route);
    http.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
  const int p = cfg_.port();
  if (p == 0) {
    const int bound = server_->http.bind_to_any_port(cfg_.host());
    if (bound < 0) throw Error(Errc::kIo, "cannot bind " + cfg_.listen_addr);
    return bound;
  }
  if (!server_->http.bind_to_port(cfg_.host(), p)) {
    throw Error(Errc::kIo, "cannot bind " + cfg_.listen_addr);
  }
  return p;
}

void Service::listen() {
  if (!server_) throw Error(Errc::kState, "bind() before listen()");
  server_->http.listen_after_bind();
}

int Service::start() {
  const int p = bind();
  thread_ = std::thread([this] { listen(); });
  server_->http.wait_until_ready();
  return p;
}

void Service::stop() {
  if (server_) server_->http.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace medipipe
