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

#include "medipipe/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "medipipe/chunking.hpp"
#include "medipipe/corpus.hpp"
#include "medipipe/metrics.hpp"
#include "medipipe/providers.hpp"
#include "medipipe/rag.hpp"
#include "medipipe/service.hpp"
#include "medipipe/soap.hpp"
#include "medipipe/transcript.hpp"
#include "medipipe/tuning.hpp"
#include "medipipe/vindex.hpp"

namespace medipipe::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIo, "short write to " + path.string());
}

// Record id of a file: its name up to the first '.'.
std::string file_id(const fs::path& path) {
  const std::string name = path.filename().string();
  return name.substr(0, name.find('.'));
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(Errc::kValidation, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::shared_ptr<const Embedder> embedder_for(const std::string& spec, std::size_t dim) {
  if (spec == "mock") return std::make_shared<const MockEmbedder>(dim);
  return make_embedder(spec);
}

// Accepts either "[Speaker]: text" lines or the tab-separated session export.
TranscriptSession session_from_dialogue(const std::string& id, const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) lines.push_back(line);
  }
  if (lines.empty()) throw Error(Errc::kValidation, "dialogue file has no utterances");
  const bool tabular = std::all_of(lines.begin(), lines.end(), [](const std::string& l) {
    return std::count(l.begin(), l.end(), '\t') >= 3;
  });
  if (tabular) return import_session(id, text);

  TranscriptSession session(id);
  double t = 0.0;
  for (const auto& l : lines) {
    const auto close = l.find("]:");
    if (l.front() != '[' || close == std::string::npos) {
      throw Error(Errc::kValidation, "dialogue line is not '[Speaker]: text': " + l);
    }
    Segment seg;
    seg.speaker = Speaker::parse(l.substr(1, close - 1));
    seg.text = l.substr(close + 2);
    seg.start_s = t;
    seg.end_s = t + 1.0;
    t += 1.0;
    session.append(std::move(seg));
  }
  return session;
}

int fail(std::ostream& err, const std::string& msg, int code) {
  err << "error: " << msg << "\n";
  return code;
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kProvider:
    case Errc::kProtocol: return kExitProvider;
    case Errc::kIo: return kExitIo;
    default: return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"medipipe: clinical note pipeline tools"};
  app.require_subcommand(1);
  std::function<int()> action;

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Corpus validation and statistics");
  corpus->require_subcommand(1);
  std::string root;
  std::string manifest;
  for (const char* name : {"validate", "stats"}) {
    auto* sub = corpus->add_subcommand(name, std::string(name) + " a dialogue/note corpus");
    sub->add_option("--root", root, "Corpus directory")->required();
    sub->add_option("--manifest", manifest, "Manifest file (<id>\\t<split> per line)")->required();
    const bool stats = std::string(name) == "stats";
    sub->callback([&, stats] {
      action = [&, stats] {
        const Corpus c = load_corpus(root, fs::path(manifest));
        if (!stats) {
          out << "ok records=" << c.size() << "\n";
          return kExitOk;
        }
        const CorpusStats s = c.stats();
        out << "train=" << s.count(Split::kTrain) << " valid=" << s.count(Split::kValid)
            << " test=" << s.test_total() << "\n";
        out << "test1=" << s.count(Split::kTest1) << " test2=" << s.count(Split::kTest2)
            << " test3=" << s.count(Split::kTest3) << "\n";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "mean_dialogue_tokens=%.2f mean_note_tokens=%.2f\n",
                      s.mean_dialogue_tokens, s.mean_note_tokens);
        out << buf;
        return kExitOk;
      };
    });
  }

  // note generate
  auto* note = app.add_subcommand("note", "Offline note generation");
  note->require_subcommand(1);
  auto* gen = note->add_subcommand("generate", "Generate a note from a dialogue file");
  std::string dialogue_path;
  std::string provider = "mock";
  std::string note_out;
  std::string note_format = "text";
  gen->add_option("--dialogue", dialogue_path, "Dialogue file")->required();
  gen->add_option("--provider", provider, "'mock' or generator base URL");
  gen->add_option("--out", note_out, "Output note file")->required();
  gen->add_option("--format", note_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  gen->callback([&] {
    action = [&] {
      const std::string id = file_id(dialogue_path);
      TranscriptSession session = session_from_dialogue(id, read_file(dialogue_path));
      session.finalize();
      const auto generator = make_generator(provider);
      const SoapNote n = generate_note(session, *generator);
      write_file(note_out, export_note(n, note_format == "json" ? ExportFormat::kJson
                                                                 : ExportFormat::kText));
      return kExitOk;
    };
  });

  // chunk split
  auto* chunk = app.add_subcommand("chunk", "Text chunking");
  chunk->require_subcommand(1);
  auto* split = chunk->add_subcommand("split", "Split a text file into chunks (JSON lines)");
  std::string chunk_in;
  std::string chunk_out;
  ChunkConfig chunk_cfg;
  split->add_option("--in", chunk_in, "Input text file")->required();
  split->add_option("--out", chunk_out, "Output JSON lines file (stdout if omitted)");
  split->add_option("--chunk-size", chunk_cfg.chunk_size, "Maximum chunk length");
  split->add_option("--overlap", chunk_cfg.overlap, "Overlap budget");
  split->callback([&] {
    action = [&] {
      const auto chunks = split_text(read_file(chunk_in), chunk_cfg, file_id(chunk_in));
      std::string lines;
      for (const auto& c : chunks) {
        lines += json{{"source_id", c.source_id}, {"seq", c.seq}, {"start", c.span.start},
                      {"end", c.span.end}, {"text", c.text}}
                     .dump() +
                 "\n";
      }
      if (chunk_out.empty()) {
        out << lines;
      } else {
        write_file(chunk_out, lines);
      }
      return kExitOk;
    };
  });

  // index build / query
  auto* index = app.add_subcommand("index", "Vector index operations");
  index->require_subcommand(1);
  std::string embed_spec = "mock";
  std::size_t dim = kDefaultMockDim;
  auto* build = index->add_subcommand("build", "Embed chunks or notes into an index file");
  std::string build_in;
  std::string build_out;
  ChunkConfig build_cfg;
  build->add_option("--in", build_in, "Chunk JSON lines file or directory of notes")->required();
  build->add_option("--out", build_out, "Index file")->required();
  build->add_option("--embedder", embed_spec, "'mock' or embedder base URL");
  build->add_option("--dim", dim, "Mock embedding dimension");
  build->add_option("--chunk-size", build_cfg.chunk_size, "Chunk length for note inputs");
  build->add_option("--overlap", build_cfg.overlap, "Overlap budget for note inputs");
  build->callback([&] {
    action = [&] {
      std::vector<CandidateEntry> batch;
      auto add = [&](std::string text, const std::string& source, std::int64_t seq, bool is_note) {
        CandidateEntry e;
        e.chunk_text = std::move(text);
        e.metadata.source_id = source;
        if (is_note) e.metadata.note_id = source;
        e.metadata.seq = seq;
        batch.push_back(std::move(e));
      };
      if (fs::is_directory(build_in)) {
        for (const auto& path : sorted_files(build_in)) {
          std::string text = read_file(path);
          if (path.extension() == ".json") text = render_note(note_from_json(text));
          const std::string id = file_id(path);
          for (const auto& c : split_text(text, build_cfg, id)) {
            add(c.text, id, static_cast<std::int64_t>(c.seq), true);
          }
        }
      } else {
        std::istringstream in(read_file(build_in));
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          try {
            const json j = json::parse(line);
            add(j.at("text").get<std::string>(), j.at("source_id").get<std::string>(),
                j.value("seq", std::int64_t{0}), false);
          } catch (const json::exception& e) {
            throw Error(Errc::kParse, std::string("bad chunk line: ") + e.what());
          }
        }
      }
      if (batch.empty()) throw Error(Errc::kValidation, "no chunks to index");
      std::vector<std::string> texts;
      for (const auto& e : batch) texts.push_back(e.chunk_text);
      auto vectors = embedder_for(embed_spec, dim)->embed_texts(texts);
      for (std::size_t i = 0; i < batch.size(); ++i) batch[i].vector = std::move(vectors[i]);
      VectorIndex vi;
      vi.upsert_batch(std::move(batch));
      vi.persist(build_out);
      out << "indexed " << vi.size() << " chunks\n";
      return kExitOk;
    };
  });
  auto* query = index->add_subcommand("query", "Top-k search (JSON lines)");
  std::string index_path;
  std::string query_text;
  std::size_t k = 4;
  query->add_option("--index", index_path, "Index file")->required();
  query->add_option("--text", query_text, "Query text")->required();
  query->add_option("--k", k, "Number of results");
  query->add_option("--embedder", embed_spec, "'mock' or embedder base URL");
  query->add_option("--dim", dim, "Mock embedding dimension");
  query->callback([&] {
    action = [&] {
      if (!fs::exists(index_path)) {
        throw Error(Errc::kNotFound, "index file not found: " + index_path);
      }
      const VectorIndex vi = VectorIndex::load(index_path);
      const auto q = embedder_for(embed_spec, dim)->embed_texts({query_text}).front();
      std::size_t rank = 0;
      for (const auto& h : vi.knn(q, k)) {
        out << json{{"rank", ++rank},
                    {"entry_id", h.entry_id},
                    {"score", h.score},
                    {"source_id", h.metadata.source_id},
                    {"seq", h.metadata.seq},
                    {"text", h.chunk_text}}
                   .dump()
            << "\n";
      }
      return kExitOk;
    };
  });

  // eval run
  auto* eval = app.add_subcommand("eval", "Note quality evaluation");
  eval->require_subcommand(1);
  auto* eval_run = eval->add_subcommand("run", "Score predictions against references");
  std::string pred_dir;
  std::string ref_dir;
  std::string system_name;
  std::string csv_out;
  eval_run->add_option("--pred", pred_dir, "Directory of generated notes")->required();
  eval_run->add_option("--ref", ref_dir, "Directory of reference notes")->required();
  eval_run->add_option("--name", system_name, "System name for the report row")->required();
  eval_run->add_option("--out", csv_out, "CSV report path")->required();
  eval_run->add_option("--embedder", embed_spec, "'mock' or embedder base URL");
  eval_run->add_option("--dim", dim, "Mock embedding dimension");
  eval_run->callback([&] {
    action = [&] {
      std::map<std::string, fs::path> preds;
      std::map<std::string, fs::path> refs;
      for (const auto& p : sorted_files(pred_dir)) preds[file_id(p)] = p;
      for (const auto& p : sorted_files(ref_dir)) refs[file_id(p)] = p;
      std::vector<std::string> missing;
      for (const auto& [id, p] : refs) {
        if (!preds.count(id)) missing.push_back(id);
      }
      for (const auto& [id, p] : preds) {
        if (!refs.count(id)) missing.push_back(id);
      }
      if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        std::string msg = "prediction and reference ids differ:";
        for (const auto& id : missing) msg += " " + id;
        throw ValidationError(msg, missing);
      }
      if (refs.empty()) throw Error(Errc::kValidation, "no notes to evaluate");
      std::vector<TextPair> pairs;
      for (const auto& [id, p] : refs) {
        pairs.push_back({normalize_text(read_file(preds[id])), normalize_text(read_file(p))});
      }
      const EvalRow row = evaluate_system(pairs, system_name, *embedder_for(embed_spec, dim));
      const RenderedReport report = render_report({row});
      write_file(csv_out, report.csv);
      out << report.table;
      return kExitOk;
    };
  });

  // finetune-spec emit
  auto* ft = app.add_subcommand("finetune-spec", "Fine-tuning job specification");
  ft->require_subcommand(1);
  auto* emit = ft->add_subcommand("emit", "Write the job document");
  FinetuneSpec spec;
  std::string ft_out;
  emit->add_option("--base", spec.base_model, "Base model name")->required();
  emit->add_option("--out", ft_out, "Output JSON file")->required();
  emit->add_option("--dataset", spec.dataset_ref, "Dataset reference");
  emit->add_option("--rank", spec.rank_r, "LoRA rank");
  emit->add_option("--alpha", spec.lora_alpha, "LoRA alpha");
  emit->add_option("--quant-bits", spec.quant_bits, "Quantization bits (4, 8 or 16)");
  emit->add_option("--modules", spec.target_modules, "Target modules")->delimiter(',');
  emit->callback([&] {
    action = [&] {
      write_file(ft_out, emit_finetune_spec(spec));
      return kExitOk;
    };
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string config_path;
  serve->add_option("--config", config_path, "Config file (default: $MEDIPIPE_CONFIG)");
  serve->callback([&] {
    action = [&] {
      if (config_path.empty()) {
        if (const char* env = std::getenv(kConfigEnv)) config_path = env;
      }
      const ServiceConfig cfg =
          config_path.empty() ? ServiceConfig{} : load_service_config(config_path);
      Service service(cfg);
      const int port = service.bind();
      err << "listening on " << cfg.host() << ":" << port << "\n" << std::flush;
      service.listen();
      return kExitOk;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, e.what(), kExitUsage);
  }
  if (!action) return fail(err, "no command given", kExitUsage);

  try {
    return action();
  } catch (const ValidationError& e) {
    return fail(err, e.what(), exit_code_for(e.code()));
  } catch (const Error& e) {
    return fail(err, e.what(), exit_code_for(e.code()));
  } catch (const std::exception& e) {
    return fail(err, e.what(), kExitIo);
  }
}

}  // namespace medipipe::cli
