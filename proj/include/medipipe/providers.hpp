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

// Clients for the three external model services (speech recognition,
// embeddings, generation) and deterministic in-process stand-ins.
//
// Wire protocol, JSON over HTTP POST:
//   /embed       {"texts":[...]}                        -> {"vectors":[[...]],"dim":d}
//   /generate    {"prompt":..,"max_tokens":n,"temperature":t} -> {"text":..}
//   /transcribe  {"audio_id":..}  -> {"segments":[{"start","end","speaker","text"}]}

#ifndef MEDIPIPE_PROVIDERS_HPP_
#define MEDIPIPE_PROVIDERS_HPP_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medipipe/transcript.hpp"

namespace medipipe {

inline constexpr const char* kProviderTokenEnv = "MEDIPIPE_PROVIDER_TOKEN";

struct ProviderEndpoint {
  std::string base_url;
  int timeout_ms = 30000;
  std::optional<std::string> auth_token;

  // Throws Error(kConfig) unless timeout_ms is in [1, 600000] and base_url
  // looks like http://host[:port][/prefix].
  void validate() const;

  // Fills auth_token from MEDIPIPE_PROVIDER_TOKEN when it is unset.
  static ProviderEndpoint from_url(std::string base_url, int timeout_ms = 30000);
};

struct GenerationRequest {
  std::string prompt;
  int max_tokens = 512;
  double temperature = 0.0;

  // Throws Error(kPrecondition) for an empty prompt, max_tokens <= 0 or a
  // temperature outside [0, 2].
  void validate() const;
};

struct EmbeddingVector {
  std::vector<double> values;
  bool normalized = false;

  std::size_t dim() const { return values.size(); }
  double norm() const;

  bool operator==(const EmbeddingVector&) const = default;
};

inline constexpr double kUnitNormTolerance = 1e-9;

// Unit-normalized copy. Throws Error(kValue) on a zero or non-finite vector.
EmbeddingVector normalized(EmbeddingVector v);

// -- Provider interfaces. Public entry points validate inputs and provider
// responses; implementations override the private do_* hooks.

class Embedder {
 public:
  virtual ~Embedder() = default;

  // One vector per text, same order, uniform dimension.
  std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) const;

 private:
  virtual std::vector<EmbeddingVector> do_embed(
      const std::vector<std::string>& texts) const = 0;
};

class Generator {
 public:
  virtual ~Generator() = default;

  std::string generate(const GenerationRequest& req) const;

 private:
  virtual std::string do_generate(const GenerationRequest& req) const = 0;
};

class Transcriber {
 public:
  virtual ~Transcriber() = default;

  // Segments are returned validated and ordered by start time.
  std::vector<Segment> transcribe(const std::string& audio_id) const;

 private:
  virtual std::vector<Segment> do_transcribe(const std::string& audio_id) const = 0;
};

// -- Deterministic stand-ins.

inline constexpr std::size_t kDefaultMockDim = 64;

std::uint64_t fnv1a64(std::string_view bytes);

// Signed feature hashing of the default tokenizer's tokens, L2-normalized.
// Throws Error(kPrecondition) when d < 8 or the text has no tokens.
EmbeddingVector mock_embed(std::string_view text, std::size_t d = kDefaultMockDim);

class MockEmbedder final : public Embedder {
 public:
  explicit MockEmbedder(std::size_t dim = kDefaultMockDim);
  std::size_t dim() const { return dim_; }

 private:
  std::vector<EmbeddingVector> do_embed(const std::vector<std::string>& texts) const override;
  std::size_t dim_;
};

inline constexpr std::string_view kMockPlaceholder = "None reported.";

inline constexpr std::string_view kMockNoContext = "No relevant context found.";

// Extractive note writer: chief complaint is the first patient sentence,
// history is the first two doctor sentences, every other section carries
// kMockPlaceholder. Throws ProviderError when the prompt has no
// [Doctor]:/[Patient]: tags.
//
// A retrieval prompt (context block, "Question: ...", trailing "Answer:")
// is answered with the first context chunk verbatim, or kMockNoContext.
std::string mock_generate(const GenerationRequest& req);

class MockGenerator final : public Generator {
 private:
  std::string do_generate(const GenerationRequest& req) const override;
};

// Replays canned segment fixtures by id ("fig2" is built in).
class MockTranscriber final : public Transcriber {
 public:
  MockTranscriber();
  void add_fixture(std::string audio_id, std::vector<Segment> segments);

 private:
  std::vector<Segment> do_transcribe(const std::string& audio_id) const override;
  std::vector<std::pair<std::string, std::vector<Segment>>> fixtures_;
};

// -- HTTP clients. Transport failures are retried at most kMaxRetries times
// with a fixed kRetryBackoff; once a response has been received nothing is
// retried.

inline constexpr int kMaxRetries = 2;
inline constexpr std::chrono::milliseconds kRetryBackoff{200};

class HttpEmbedder final : public Embedder {
 public:
  explicit HttpEmbedder(ProviderEndpoint endpoint);

 private:
  std::vector<EmbeddingVector> do_embed(const std::vector<std::string>& texts) const override;
  ProviderEndpoint endpoint_;
};

class HttpGenerator final : public Generator {
 public:
  explicit HttpGenerator(ProviderEndpoint endpoint);

 private:
  std::string do_generate(const GenerationRequest& req) const override;
  ProviderEndpoint endpoint_;
};

class HttpTranscriber final : public Transcriber {
 public:
  explicit HttpTranscriber(ProviderEndpoint endpoint);

 private:
  std::vector<Segment> do_transcribe(const std::string& audio_id) const override;
  ProviderEndpoint endpoint_;
};

struct ProviderSet {
  std::shared_ptr<const Transcriber> asr;
  std::shared_ptr<const Embedder> embedder;
  std::shared_ptr<const Generator> generator;
};

ProviderSet mock_providers(std::size_t dim = kDefaultMockDim);
// "mock" selects the stand-in, anything else is treated as a base URL.
std::shared_ptr<const Transcriber> make_transcriber(const std::string& spec, int timeout_ms = 30000);
std::shared_ptr<const Embedder> make_embedder(const std::string& spec, int timeout_ms = 30000);
std::shared_ptr<const Generator> make_generator(const std::string& spec, int timeout_ms = 30000);

// Sentence split used by the mock generator: breaks after '.', '!' or '?'
// followed by whitespace, and at newlines. Pieces are trimmed, empties
// dropped.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace medipipe

#endif  // MEDIPIPE_PROVIDERS_HPP_
