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

#include "medipipe/errors.hpp"

#include <utility>

namespace medipipe {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kPrecondition: return "precondition";
    case Errc::kValidation: return "validation";
    case Errc::kLoad: return "load";
    case Errc::kConfig: return "config";
    case Errc::kState: return "state";
    case Errc::kOrdering: return "ordering";
    case Errc::kProvider: return "provider";
    case Errc::kProtocol: return "protocol";
    case Errc::kDimension: return "dimension";
    case Errc::kValue: return "value";
    case Errc::kFormat: return "format";
    case Errc::kParse: return "parse";
    case Errc::kReport: return "report";
    case Errc::kIo: return "io";
    case Errc::kNotFound: return "not_found";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ValidationError::ValidationError(const std::string& message,
                                 std::vector<std::string> ids, Errc code)
    : Error(code, message), ids_(std::move(ids)) {}

ProviderError::ProviderError(const std::string& message, bool retryable,
                             std::string stage, Errc code)
    : Error(code, message), retryable_(retryable), stage_(std::move(stage)) {}

FormatError::FormatError(const std::string& message, std::size_t offset)
    : Error(Errc::kFormat,
            message + " (at byte offset " + std::to_string(offset) + ")"),
      offset_(offset) {}

ParseError::ParseError(const std::string& message, std::string raw_text)
    : Error(Errc::kParse, message), raw_text_(std::move(raw_text)) {}

}  // namespace medipipe
