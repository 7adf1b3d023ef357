# Copyright 2026 The MediPipe Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the medipipe clinical note pipeline."""

from medipipe._core import (  # noqa: F401
    MediPipeError,
    VectorIndex,
    bertscore,
    build_instruction_prompt,
    cli_run,
    emit_finetune_spec,
    lcs_length,
    mock_embed,
    mock_generate,
    normalize_text,
    parse_finetune_spec,
    parse_note_text,
    render_note,
    rouge_l,
    rouge_lsum,
    rouge_n,
    split_text,
    tokenize,
)

SECTION_FIELDS = (
    "chief_complaint",
    "history_of_present_illness",
    "review_of_systems",
    "physical_examination",
    "results",
    "assessment_and_plan",
)
