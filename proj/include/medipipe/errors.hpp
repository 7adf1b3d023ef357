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

#ifndef MEDIPIPE_ERRORS_HPP_
#define MEDIPIPE_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace medipipe {

enum class Errc {
  kPrecondition,
  kValidation,
  kLoad,
  kConfig,
  kState,
  kOrdering,
  kProvider,
  kProtocol,
  kDimension,
  kValue,
  kFormat,
  kParse,
  kReport,
  kIo,
  kNotFound,
};

std::string_view errc_name(Errc code);

// Base of every error thrown by the library. The code is stable and is what
// the CLI and the HTTP service map onto exit codes and status codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Validation failures that concern a set of record ids (duplicates, missing
// files, empty bodies). The ids are reported in sorted order.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::vector<std::string> ids,
                  Errc code = Errc::kValidation);

  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

// Failure reported by (or while talking to) an external model provider.
// `stage` is filled in by the orchestration layer: "embed", "search",
// "generate" or "transcribe".
class ProviderError : public Error {
 public:
  ProviderError(const std::string& message, bool retryable,
                std::string stage = {}, Errc code = Errc::kProvider);

  bool retryable() const noexcept { return retryable_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  bool retryable_;
  std::string stage_;
};

// Malformed persisted data. `offset` is the byte offset where decoding failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t offset);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Generator output that could not be turned into a note.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string raw_text);

  const std::string& raw_text() const noexcept { return raw_text_; }

 private:
  std::string raw_text_;
};

}  // namespace medipipe

#endif  // MEDIPIPE_ERRORS_HPP_
