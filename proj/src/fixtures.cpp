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

#include "medipipe/fixtures.hpp"

#include <array>
#include <utility>

namespace medipipe::fixtures {
namespace {

struct Line {
  bool doctor;
  const char* text;
};

constexpr std::array<Line, 10> kLines = {{
    {true, "Hi, Bryan. How are you?"},
    {false, "I'm doing well. I'm a little sore."},
    {true,
     "So, Bryan is a 55-year-old male with a past medical history significant "
     "for a prior discectomy, presenting with back pain. So, Bryan, what "
     "happened to your back?"},
    {false,
     "You know... my wife made me push, uh, a refrigerator through the other "
     "room, and when I was helping move it, I felt something in my back on the "
     "lower right side."},
    {true, "Okay, on the lower right side of your back?"},
    {false, "Yes."},
    {true, "Okay. Those wives, always making you do stuff!"},
    {false, "Yes."},
    {true, "And what day did this happen? How long ago?"},
    {false, "Uh, this was about five days ago."},
}};

}  // namespace

std::vector<Segment> back_pain_segments() {
  std::vector<Segment> out;
  out.reserve(kLines.size());
  double t = 0.0;
  for (const auto& line : kLines) {
    Segment seg;
    seg.speaker = line.doctor ? Speaker::doctor() : Speaker::patient();
    seg.start_s = t;
    seg.end_s = t + 4.5;
    seg.text = line.text;
    out.push_back(std::move(seg));
    t += 5.0;
  }
  return out;
}

std::string back_pain_dialogue_inline() {
  std::string out;
  for (const auto& line : kLines) {
    if (!out.empty()) out += ' ';
    out += line.doctor ? "[Doctor]: " : "[Patient]: ";
    out += line.text;
  }
  return out;
}

std::string back_pain_reference_note() {
  return "CHIEF COMPLAINT Back pain. HISTORY OF PRESENT ILLNESS Bryan Smith is a "
         "55-year-old male with a past medical history significant for and prior "
         "discectomy, who presents with back pain. REVIEW OF SYSTEMS PHYSICAL "
         "EXAMINATION RESULTS ASSESSMENT AND PLAN";
}

}  // namespace medipipe::fixtures
