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

import json
import math

import pytest

import medipipe


def test_tokenize_and_normalize():
    assert medipipe.tokenize("Back pain, 2 weeks.") == ["back", "pain", ",", "2", "weeks", "."]
    assert medipipe.normalize_text(medipipe.normalize_text("  a\r\nb ")) == medipipe.normalize_text("  a\r\nb ")


def test_rouge_worked_value():
    s = medipipe.rouge_n(["the", "cat", "sat"], ["the", "cat"], 1)
    assert s["precision"] == pytest.approx(2 / 3)
    assert s["recall"] == 1.0
    assert s["f1"] == pytest.approx(0.8)
    assert medipipe.lcs_length(list("abcd"), list("acbd")) == 3


def test_bertscore_identity():
    toks = medipipe.tokenize("lower back pain for two weeks")
    assert medipipe.bertscore(toks, toks)["f1"] == pytest.approx(1.0, abs=1e-9)


def test_split_text_spans():
    chunks = medipipe.split_text("aa bb cc dd ee", chunk_size=8, overlap=3, source_id="s")
    assert [c["text"] for c in chunks] == ["aa bb cc", "cc dd ee"]
    assert all(c["end"] - c["start"] <= 8 for c in chunks)


def test_index_self_retrieval(tmp_path):
    idx = medipipe.VectorIndex()
    texts = ["back pain", "knee swelling", "no fever"]
    for i, t in enumerate(texts):
        idx.upsert(medipipe.mock_embed(t), t, "note", i)
    assert len(idx) == 3
    hit = idx.knn(medipipe.mock_embed("knee swelling"), 1)[0]
    assert hit["text"] == "knee swelling"
    assert math.isclose(hit["score"], 1.0, abs_tol=1e-9)
    path = str(tmp_path / "v.index")
    idx.persist(path)
    back = medipipe.VectorIndex.load(path)
    assert back.knn(medipipe.mock_embed("back"), 3) == idx.knn(medipipe.mock_embed("back"), 3)
    (tmp_path / "bad.index").write_bytes(b"junk")
    with pytest.raises(medipipe.MediPipeError):
        medipipe.VectorIndex.load(str(tmp_path / "bad.index"))


def test_note_round_trip():
    note = {"note_id": "n1"}
    for field in medipipe.SECTION_FIELDS:
        note[field] = "None reported."
    text = medipipe.render_note(note)
    assert medipipe.parse_note_text(text)[medipipe.SECTION_FIELDS[0]] == "None reported."
    prompt = medipipe.build_instruction_prompt("[doctor] Hi.\n[patient] My back hurts.")
    assert "back hurts" in prompt


def test_finetune_spec_defaults():
    spec = json.loads(medipipe.emit_finetune_spec("base-13b"))
    assert (spec["rank_r"], spec["lora_alpha"], spec["quant_bits"]) == (16, 16, 4)
    assert len(spec["target_modules"]) == 7
    assert medipipe.parse_finetune_spec(medipipe.emit_finetune_spec("base-13b")) == medipipe.emit_finetune_spec("base-13b")
    with pytest.raises(medipipe.MediPipeError):
        medipipe.emit_finetune_spec("base-13b", rank_r=0)


def test_cli_run(tmp_path):
    out = tmp_path / "spec.json"
    code, _, err = medipipe.cli_run(["finetune-spec", "emit", "--base", "m", "--out", str(out)])
    assert code == 0, err
    assert json.loads(out.read_text())["rank_r"] == 16
    code, _, err = medipipe.cli_run(["corpus", "validate", "--root", str(tmp_path), "--manifest", str(tmp_path / "none.tsv")])
    assert code == 2
    assert err
