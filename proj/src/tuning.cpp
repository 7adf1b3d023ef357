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

#include "medipipe/tuning.hpp"

#include "medipipe/errors.hpp"

namespace medipipe {
namespace {

using json = nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& why) {
  throw ValidationError("finetune spec field '" + field + "' " + why, {field});
}

}  // namespace

void FinetuneSpec::validate() const {
  if (base_model.empty()) field_error("base_model", "must be nonempty");
  if (rank_r < 1) field_error("rank_r", "must be >= 1");
  if (lora_alpha < 1) field_error("lora_alpha", "must be >= 1");
  if (target_modules.empty()) field_error("target_modules", "must be nonempty");
  for (const auto& m : target_modules) {
    if (m.empty()) field_error("target_modules", "must not contain empty names");
  }
  if (quant_bits != 4 && quant_bits != 8 && quant_bits != 16) {
    field_error("quant_bits", "must be one of 4, 8, 16");
  }
  if (instruction_template_id.empty()) field_error("instruction_template_id", "must be nonempty");
  if (!extra.is_object()) field_error("extra", "must be a JSON object");
}

std::string emit_finetune_spec(const FinetuneSpec& spec) {
  spec.validate();
  // nlohmann::json keeps object keys in std::map order.
  json j;
  j["schema_version"] = kFinetuneSchemaVersion;
  j["base_model"] = spec.base_model;
  j["rank_r"] = spec.rank_r;
  j["lora_alpha"] = spec.lora_alpha;
  j["target_modules"] = spec.target_modules;
  j["quant_bits"] = spec.quant_bits;
  j["instruction_template_id"] = spec.instruction_template_id;
  j["dataset_ref"] = spec.dataset_ref;
  j["extra"] = spec.extra;
  return j.dump(2) + "\n";
}

FinetuneSpec parse_finetune_spec(std::string_view json_text) {
  FinetuneSpec spec;
  try {
    const json j = json::parse(json_text);
    const int version = j.at("schema_version").get<int>();
    if (version != kFinetuneSchemaVersion) {
      throw Error(Errc::kParse, "unsupported schema_version " + std::to_string(version));
    }
    spec.base_model = j.at("base_model").get<std::string>();
    spec.rank_r = j.at("rank_r").get<int>();
    spec.lora_alpha = j.at("lora_alpha").get<int>();
    spec.target_modules = j.at("target_modules").get<std::vector<std::string>>();
    spec.quant_bits = j.at("quant_bits").get<int>();
    spec.instruction_template_id = j.at("instruction_template_id").get<std::string>();
    spec.dataset_ref = j.at("dataset_ref").get<std::string>();
    spec.extra = j.value("extra", json::object());
  } catch (const json::exception& e) {
    throw Error(Errc::kParse, std::string("malformed finetune spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace medipipe
