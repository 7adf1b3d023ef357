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

// Fine-tuning job description for an external LoRA/QLoRA trainer. Nothing
// here trains anything.

#ifndef MEDIPIPE_TUNING_HPP_
#define MEDIPIPE_TUNING_HPP_

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "medipipe/soap.hpp"

namespace medipipe {

inline constexpr int kFinetuneSchemaVersion = 1;

struct FinetuneSpec {
  std::string base_model;
  int rank_r = 16;
  int lora_alpha = 16;
  std::vector<std::string> target_modules = {"q_proj",    "k_proj", "v_proj",   "o_proj",
                                             "gate_proj", "up_proj", "down_proj"};
  int quant_bits = 4;
  std::string instruction_template_id = std::string(kDefaultTemplateId);
  std::string dataset_ref;
  // Trainer settings with no fixed default (learning rate, epochs, ...).
  // Must be a JSON object.
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const FinetuneSpec&) const = default;

  // Throws ValidationError whose ids() holds the offending field name.
  void validate() const;
};

// Key-sorted JSON, two-space indent, trailing newline.
std::string emit_finetune_spec(const FinetuneSpec& spec);

// Throws Error(kParse) on malformed JSON or a schema mismatch, and
// ValidationError for out-of-range fields.
FinetuneSpec parse_finetune_spec(std::string_view json_text);

}  // namespace medipipe

#endif  // MEDIPIPE_TUNING_HPP_
