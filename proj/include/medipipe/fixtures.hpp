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

// Back-pain consultation excerpt used across tests, the mock ASR provider
// and the offline demo paths.

#ifndef MEDIPIPE_FIXTURES_HPP_
#define MEDIPIPE_FIXTURES_HPP_

#include <string>
#include <vector>

#include "medipipe/transcript.hpp"

namespace medipipe::fixtures {

inline constexpr const char* kBackPainAudioId = "fig2";

// Ten alternating utterances, five seconds apart.
std::vector<Segment> back_pain_segments();

// The same exchange as one line of inline speaker tags.
std::string back_pain_dialogue_inline();

// Reference note for the exchange, inline-header layout.
std::string back_pain_reference_note();

}  // namespace medipipe::fixtures

#endif  // MEDIPIPE_FIXTURES_HPP_
