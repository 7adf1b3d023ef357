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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "medipipe/chunking.hpp"
#include "medipipe/cli.hpp"
#include "medipipe/corpus.hpp"
#include "medipipe/errors.hpp"
#include "medipipe/metrics.hpp"
#include "medipipe/providers.hpp"
#include "medipipe/soap.hpp"
#include "medipipe/tuning.hpp"
#include "medipipe/vindex.hpp"

namespace py = pybind11;
using namespace medipipe;

namespace {

py::dict score_dict(double p, double r, double f) {
  py::dict d;
  d["precision"] = p;
  d["recall"] = r;
  d["f1"] = f;
  return d;
}

py::dict note_dict(const SoapNote& note) {
  py::dict d;
  d["note_id"] = note.note_id;
  for (SectionKey key : kSectionOrder) d[py::str(std::string(section_field(key)))] = note.section(key);
  return d;
}

SoapNote note_from_dict(const py::dict& d) {
  SoapNote note;
  if (d.contains("note_id")) note.note_id = d["note_id"].cast<std::string>();
  for (SectionKey key : kSectionOrder) {
    const std::string field(section_field(key));
    if (d.contains(field.c_str())) note.section(key) = d[field.c_str()].cast<std::string>();
  }
  return note;
}

EmbeddingVector as_vector(const std::vector<double>& v) {
  EmbeddingVector e;
  e.values = v;
  return e;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "medipipe native core";

  static py::exception<Error> base_exc(m, "MediPipeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(errc_name(e.code())) + ": " + e.what();
      PyErr_SetString(base_exc.ptr(), msg.c_str());
    }
  });

  m.def("normalize_text", [](const std::string& s) { return normalize_text(s); });
  m.def("tokenize", [](const std::string& s) { return tokenize(s); });

  m.def(
      "split_text",
      [](const std::string& text, std::size_t chunk_size, std::size_t overlap,
         const std::string& source_id) {
        ChunkConfig cfg;
        cfg.chunk_size = chunk_size;
        cfg.overlap = overlap;
        py::list out;
        for (const auto& c : split_text(text, cfg, source_id)) {
          py::dict d;
          d["text"] = c.text;
          d["source_id"] = c.source_id;
          d["seq"] = c.seq;
          d["start"] = c.span.start;
          d["end"] = c.span.end;
          out.append(d);
        }
        return out;
      },
      py::arg("text"), py::arg("chunk_size") = 1000, py::arg("overlap") = 150,
      py::arg("source_id") = "");

  m.def(
      "mock_embed",
      [](const std::string& text, std::size_t dim) { return mock_embed(text, dim).values; },
      py::arg("text"), py::arg("dim") = kDefaultMockDim);

  m.def("mock_generate", [](const std::string& prompt) {
    GenerationRequest req;
    req.prompt = prompt;
    return mock_generate(req);
  });
  m.def("build_instruction_prompt",
        [](const std::string& dialogue) { return build_instruction_prompt(dialogue); });
  m.def("parse_note_text", [](const std::string& text) { return note_dict(parse_note_text(text)); });
  m.def("render_note", [](const py::dict& d) { return render_note(note_from_dict(d)); });

  m.def("rouge_n", [](const Tokens& c, const Tokens& r, std::size_t n) {
    const auto s = rouge_n(c, r, n);
    return score_dict(s.precision, s.recall, s.f1);
  });
  m.def("rouge_l", [](const Tokens& c, const Tokens& r) {
    const auto s = rouge_l(c, r);
    return score_dict(s.precision, s.recall, s.f1);
  });
  m.def("rouge_lsum", [](const std::string& c, const std::string& r) {
    const auto s = rouge_lsum(c, r);
    return score_dict(s.precision, s.recall, s.f1);
  });
  m.def("lcs_length", [](const Tokens& a, const Tokens& b) { return lcs_length(a, b); });
  m.def(
      "bertscore",
      [](const Tokens& c, const Tokens& r, std::size_t dim) {
        const auto s = bertscore(c, r, MockEmbedder(dim));
        return score_dict(s.precision, s.recall, s.f1);
      },
      py::arg("cand"), py::arg("ref"), py::arg("dim") = kDefaultMockDim);

  m.def(
      "emit_finetune_spec",
      [](const std::string& base_model, const std::string& dataset_ref, int rank_r,
         int lora_alpha, int quant_bits) {
        FinetuneSpec spec;
        spec.base_model = base_model;
        spec.dataset_ref = dataset_ref;
        spec.rank_r = rank_r;
        spec.lora_alpha = lora_alpha;
        spec.quant_bits = quant_bits;
        return emit_finetune_spec(spec);
      },
      py::arg("base_model"), py::arg("dataset_ref") = "", py::arg("rank_r") = 16,
      py::arg("lora_alpha") = 16, py::arg("quant_bits") = 4);
  m.def("parse_finetune_spec", [](const std::string& text) {
    return emit_finetune_spec(parse_finetune_spec(text));
  });

  m.def("cli_run", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });

  py::class_<VectorIndex>(m, "VectorIndex")
      .def(py::init<bool>(), py::arg("normalize_on_insert") = false)
      .def(
          "upsert",
          [](VectorIndex& self, const std::vector<double>& v, const std::string& text,
             const std::string& source_id, std::int64_t seq) {
            CandidateEntry e;
            e.vector = as_vector(v);
            e.chunk_text = text;
            e.metadata.source_id = source_id;
            e.metadata.seq = seq;
            return self.upsert(std::move(e));
          },
          py::arg("vector"), py::arg("text"), py::arg("source_id"), py::arg("seq") = 0)
      .def(
          "knn",
          [](const VectorIndex& self, const std::vector<double>& q, std::size_t k) {
            py::list out;
            for (const auto& h : self.knn(as_vector(q), k)) {
              py::dict d;
              d["entry_id"] = h.entry_id;
              d["score"] = h.score;
              d["text"] = h.chunk_text;
              d["source_id"] = h.metadata.source_id;
              d["seq"] = h.metadata.seq;
              out.append(d);
            }
            return out;
          },
          py::arg("query"), py::arg("k"))
      .def("__len__", &VectorIndex::size)
      .def("persist", [](const VectorIndex& self, const std::string& path) { self.persist(path); })
      .def_static("load", [](const std::string& path) { return VectorIndex::load(path); });
}
