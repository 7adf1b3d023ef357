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

#include "medipipe/providers.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <thread>
#include <utility>

#include "medipipe/corpus.hpp"
#include "medipipe/errors.hpp"
#include "medipipe/fixtures.hpp"

namespace medipipe {
namespace {

using nlohmann::json;

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

struct ParsedUrl {
  std::string scheme_host_port;
  std::string prefix;
};

ParsedUrl parse_base_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw Error(Errc::kConfig, "provider url must start with http://: " + url);
  }
  const std::size_t slash = url.find('/', scheme.size());
  ParsedUrl out;
  out.scheme_host_port = url.substr(0, slash);
  if (slash != std::string::npos) out.prefix = url.substr(slash);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  if (out.scheme_host_port.size() == scheme.size()) {
    throw Error(Errc::kConfig, "provider url has no host: " + url);
  }
  return out;
}

// POSTs a JSON body, retrying transport failures only.
json post_json(const ProviderEndpoint& endpoint, const std::string& path,
               const json& body) {
  const ParsedUrl url = parse_base_url(endpoint.base_url);
  httplib::Client client(url.scheme_host_port);
  const auto timeout = std::chrono::milliseconds(endpoint.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (endpoint.auth_token && !endpoint.auth_token->empty()) {
    headers.emplace("Authorization", "Bearer " + *endpoint.auth_token);
  }
  const std::string payload = body.dump();
  const std::string full_path = url.prefix + path;

  std::string last_error;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(kRetryBackoff);
    auto res = client.Post(full_path, headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      throw ProviderError(full_path + " returned HTTP " + std::to_string(res->status),
                          res->status >= 500);
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw ProviderError(full_path + " returned invalid JSON: " + e.what(), false,
                          {}, Errc::kProtocol);
    }
  }
  throw ProviderError(full_path + " transport failure after " +
                          std::to_string(kMaxRetries + 1) + " attempts: " + last_error,
                      true);
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Utterance {
  std::string tag;
  std::string text;
};

// Speaker-tagged utterances of the dialogue block of a prompt.
std::vector<Utterance> extract_utterances(std::string_view prompt) {
  std::string_view block = prompt;
  if (auto at = block.find("The conversation:"); at != std::string_view::npos) {
    block = block.substr(at + std::string_view("The conversation:").size());
  }
  if (auto at = block.rfind("The clinic note:"); at != std::string_view::npos) {
    block = block.substr(0, at);
  }
  std::vector<Utterance> out;
  std::size_t pos = 0;
  std::size_t body_start = std::string_view::npos;
  std::string tag;
  auto close = [&](std::size_t end) {
    if (body_start == std::string_view::npos) return;
    out.push_back({tag, trim(block.substr(body_start, end - body_start))});
  };
  while (pos < block.size()) {
    const std::size_t open = block.find('[', pos);
    if (open == std::string_view::npos) break;
    const std::size_t shut = block.find("]:", open);
    const std::size_t newline = block.find_first_of("[\n", open + 1);
    if (shut == std::string_view::npos || (newline != std::string_view::npos && newline < shut)) {
      pos = open + 1;
      continue;
    }
    close(open);
    tag = std::string(block.substr(open + 1, shut - open - 1));
    body_start = shut + 2;
    pos = body_start;
  }
  close(block.size());
  return out;
}

bool tag_is(const std::string& tag, std::string_view want) {
  if (tag.size() != want.size()) return false;
  for (std::size_t i = 0; i < tag.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(tag[i])) != want[i]) return false;
  }
  return true;
}

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ProviderError(std::string(what) + " contains non-finite values", false,
                          {}, Errc::kProtocol);
    }
  }
}

}  // namespace

// -- value types

void ProviderEndpoint::validate() const {
  if (timeout_ms < 1 || timeout_ms > 600000) {
    throw Error(Errc::kConfig, "timeout_ms must be in [1, 600000]");
  }
  parse_base_url(base_url);
}

ProviderEndpoint ProviderEndpoint::from_url(std::string base_url, int timeout_ms) {
  ProviderEndpoint ep;
  ep.base_url = std::move(base_url);
  ep.timeout_ms = timeout_ms;
  if (const char* token = std::getenv(kProviderTokenEnv); token != nullptr && *token) {
    ep.auth_token = std::string(token);
  }
  ep.validate();
  return ep;
}

void GenerationRequest::validate() const {
  if (prompt.empty()) throw Error(Errc::kPrecondition, "generation prompt is empty");
  if (max_tokens <= 0) throw Error(Errc::kPrecondition, "max_tokens must be > 0");
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw Error(Errc::kPrecondition, "temperature must be in [0, 2]");
  }
}

double EmbeddingVector::norm() const {
  double sum = 0.0;
  for (double x : values) sum += x * x;
  return std::sqrt(sum);
}

EmbeddingVector normalized(EmbeddingVector v) {
  for (double x : v.values) {
    if (!std::isfinite(x)) throw Error(Errc::kValue, "vector has non-finite values");
  }
  const double n = v.norm();
  if (n == 0.0) throw Error(Errc::kValue, "cannot normalize a zero vector");
  for (double& x : v.values) x /= n;
  v.normalized = true;
  return v;
}

// -- interfaces

std::vector<EmbeddingVector> Embedder::embed_texts(
    const std::vector<std::string>& texts) const {
  if (texts.empty()) throw Error(Errc::kPrecondition, "embed_texts needs at least one text");
  for (const auto& t : texts) {
    if (t.empty()) throw Error(Errc::kPrecondition, "embed_texts got an empty text");
  }
  auto vectors = do_embed(texts);
  if (vectors.size() != texts.size()) {
    throw ProviderError("embedder returned " + std::to_string(vectors.size()) +
                            " vectors for " + std::to_string(texts.size()) + " texts",
                        false, {}, Errc::kProtocol);
  }
  const std::size_t dim = vectors.front().dim();
  for (auto& v : vectors) {
    if (v.dim() == 0 || v.dim() != dim) {
      throw ProviderError("embedder returned vectors of differing dimension", false, {},
                          Errc::kProtocol);
    }
    require_finite(v.values, "embedding");
    v.normalized = std::abs(v.norm() - 1.0) <= kUnitNormTolerance;
  }
  return vectors;
}

std::string Generator::generate(const GenerationRequest& req) const {
  req.validate();
  std::string text = do_generate(req);
  if (text.empty()) throw ProviderError("generator returned an empty completion", false);
  return text;
}

std::vector<Segment> Transcriber::transcribe(const std::string& audio_id) const {
  if (audio_id.empty()) throw Error(Errc::kPrecondition, "audio id is empty");
  std::vector<Segment> segs = do_transcribe(audio_id);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    try {
      segs[i] = validated_segment(std::move(segs[i]));
    } catch (const Error& e) {
      throw ProviderError(std::string("transcriber returned an invalid segment: ") + e.what(),
                          false, {}, Errc::kProtocol);
    }
    if (i > 0 && segs[i].start_s < segs[i - 1].start_s) {
      throw ProviderError("transcriber returned segments out of order", false, {},
                          Errc::kProtocol);
    }
  }
  return segs;
}

// -- mocks

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = kFnvOffset;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

EmbeddingVector mock_embed(std::string_view text, std::size_t d) {
  if (d < 8) throw Error(Errc::kPrecondition, "mock embedding dimension must be >= 8");
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw Error(Errc::kPrecondition, "mock_embed: text has no tokens");
  EmbeddingVector v;
  v.values.assign(d, 0.0);
  for (const auto& tok : tokens) {
    const std::uint64_t h = fnv1a64(tok);
    const double sign = ((h >> 32) & 1ULL) == 0 ? 1.0 : -1.0;
    v.values[h % d] += sign;
  }
  if (std::all_of(v.values.begin(), v.values.end(), [](double x) { return x == 0.0; })) {
    v.values[0] = 1.0;
  }
  return normalized(std::move(v));
}

MockEmbedder::MockEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ < 8) throw Error(Errc::kConfig, "mock embedding dimension must be >= 8");
}

std::vector<EmbeddingVector> MockEmbedder::do_embed(
    const std::vector<std::string>& texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(mock_embed(t, dim_));
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    std::string s = trim(text.substr(start, end - start));
    if (!s.empty()) out.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      emit(i);
      start = i + 1;
    } else if ((c == '.' || c == '!' || c == '?') && i + 1 < text.size() &&
               std::isspace(static_cast<unsigned char>(text[i + 1]))) {
      emit(i + 1);
      start = i + 1;
    }
  }
  if (start < text.size()) emit(text.size());
  return out;
}

namespace {

// Retrieval prompts end in "Question: ...\nAnswer:". The answer is the first
// context chunk, or a fixed line when the context block is empty.
std::optional<std::string> mock_answer(std::string_view prompt) {
  constexpr std::string_view kTail = "\nAnswer:";
  constexpr std::string_view kContext = "Context:\n";
  if (prompt.size() < kTail.size() || prompt.substr(prompt.size() - kTail.size()) != kTail) {
    return std::nullopt;
  }
  const auto question = prompt.rfind("Question: ");
  const auto context = prompt.find(kContext);
  if (question == std::string_view::npos || context == std::string_view::npos || context > question) {
    return std::nullopt;
  }
  std::string_view block = prompt.substr(context + kContext.size(), question - context - kContext.size());
  if (block.rfind("[1] ", 0) != 0) return std::string(kMockNoContext);
  block.remove_prefix(4);
  const auto next = block.find("\n[2] ");
  if (next != std::string_view::npos) block = block.substr(0, next);
  while (!block.empty() && block.back() == '\n') block.remove_suffix(1);
  return std::string(block);
}

}  // namespace

std::string mock_generate(const GenerationRequest& req) {
  if (const auto answer = mock_answer(req.prompt)) return *answer;
  const auto utterances = extract_utterances(req.prompt);
  std::string chief;
  std::vector<std::string> history;
  bool tagged = false;
  for (const auto& u : utterances) {
    if (tag_is(u.tag, "patient")) {
      tagged = true;
      if (chief.empty()) {
        const auto sentences = split_sentences(u.text);
        if (!sentences.empty()) chief = sentences.front();
      }
    } else if (tag_is(u.tag, "doctor")) {
      tagged = true;
      for (auto& s : split_sentences(u.text)) {
        if (history.size() < 2) history.push_back(std::move(s));
      }
    }
  }
  if (!tagged) {
    throw ProviderError("mock generator: prompt has no [Doctor]: or [Patient]: tags", false);
  }
  std::string hpi;
  for (const auto& s : history) {
    if (!hpi.empty()) hpi += ' ';
    hpi += s;
  }
  const std::string placeholder(kMockPlaceholder);
  const std::pair<const char*, std::string> sections[] = {
      {"CHIEF COMPLAINT", chief.empty() ? placeholder : chief},
      {"HISTORY OF PRESENT ILLNESS", hpi.empty() ? placeholder : hpi},
      {"REVIEW OF SYSTEMS", placeholder},
      {"PHYSICAL EXAMINATION", placeholder},
      {"RESULTS", placeholder},
      {"ASSESSMENT AND PLAN", placeholder},
  };
  std::string out;
  for (const auto& [header, body] : sections) {
    if (!out.empty()) out += "\n\n";
    out += header;
    out += '\n';
    out += body;
  }
  out += '\n';
  return out;
}

std::string MockGenerator::do_generate(const GenerationRequest& req) const {
  return mock_generate(req);
}

MockTranscriber::MockTranscriber() {
  add_fixture(fixtures::kBackPainAudioId, fixtures::back_pain_segments());
}

void MockTranscriber::add_fixture(std::string audio_id, std::vector<Segment> segments) {
  fixtures_.emplace_back(std::move(audio_id), std::move(segments));
}

std::vector<Segment> MockTranscriber::do_transcribe(const std::string& audio_id) const {
  for (const auto& [id, segs] : fixtures_) {
    if (id == audio_id) return segs;
  }
  throw ProviderError("mock transcriber: unknown audio id '" + audio_id + "'", false);
}

// -- HTTP clients

HttpEmbedder::HttpEmbedder(ProviderEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
}

std::vector<EmbeddingVector> HttpEmbedder::do_embed(
    const std::vector<std::string>& texts) const {
  const json res = post_json(endpoint_, "/embed", json{{"texts", texts}});
  try {
    const auto dim = res.at("dim").get<std::size_t>();
    std::vector<EmbeddingVector> out;
    for (const auto& row : res.at("vectors")) {
      EmbeddingVector v;
      v.values = row.get<std::vector<double>>();
      if (v.dim() != dim) {
        throw ProviderError("/embed vector length disagrees with dim", false, {},
                            Errc::kProtocol);
      }
      out.push_back(std::move(v));
    }
    return out;
  } catch (const json::exception& e) {
    throw ProviderError(std::string("/embed response malformed: ") + e.what(), false, {},
                        Errc::kProtocol);
  }
}

HttpGenerator::HttpGenerator(ProviderEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
}

std::string HttpGenerator::do_generate(const GenerationRequest& req) const {
  const json body = {{"prompt", req.prompt},
                     {"max_tokens", req.max_tokens},
                     {"temperature", req.temperature}};
  const json res = post_json(endpoint_, "/generate", body);
  try {
    return res.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("/generate response malformed: ") + e.what(), false,
                        {}, Errc::kProtocol);
  }
}

HttpTranscriber::HttpTranscriber(ProviderEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
}

std::vector<Segment> HttpTranscriber::do_transcribe(const std::string& audio_id) const {
  const json res = post_json(endpoint_, "/transcribe", json{{"audio_id", audio_id}});
  try {
    std::vector<Segment> out;
    for (const auto& s : res.at("segments")) {
      Segment seg;
      seg.start_s = s.at("start").get<double>();
      seg.end_s = s.at("end").get<double>();
      seg.speaker = Speaker::parse(s.at("speaker").get<std::string>());
      seg.text = s.at("text").get<std::string>();
      out.push_back(std::move(seg));
    }
    return out;
  } catch (const json::exception& e) {
    throw ProviderError(std::string("/transcribe response malformed: ") + e.what(), false,
                        {}, Errc::kProtocol);
  }
}

ProviderSet mock_providers(std::size_t dim) {
  return {std::make_shared<MockTranscriber>(), std::make_shared<MockEmbedder>(dim),
          std::make_shared<MockGenerator>()};
}

std::shared_ptr<const Transcriber> make_transcriber(const std::string& spec, int timeout_ms) {
  if (spec == "mock") return std::make_shared<MockTranscriber>();
  return std::make_shared<HttpTranscriber>(ProviderEndpoint::from_url(spec, timeout_ms));
}

std::shared_ptr<const Embedder> make_embedder(const std::string& spec, int timeout_ms) {
  if (spec == "mock") return std::make_shared<MockEmbedder>();
  return std::make_shared<HttpEmbedder>(ProviderEndpoint::from_url(spec, timeout_ms));
}

std::shared_ptr<const Generator> make_generator(const std::string& spec, int timeout_ms) {
  if (spec == "mock") return std::make_shared<MockGenerator>();
  return std::make_shared<HttpGenerator>(ProviderEndpoint::from_url(spec, timeout_ms));
}

}  // namespace medipipe
