// Copyright 2026 The patcls Authors
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

// patcls: train, evaluate and query hierarchical patent classifiers.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "patcls/errors.hpp"
#include "patcls/kernels.hpp"
#include "patcls/model_io.hpp"
#include "patcls/synthetic.hpp"
#include "patcls/trainer.hpp"

namespace fs = std::filesystem;
using namespace patcls;

namespace {

std::vector<std::size_t> parse_ks(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      ks.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("bad K value '" + item + "' in --k");
    }
  }
  if (ks.empty()) throw ConfigError("--k needs at least one value");
  return ks;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << text;
}

CorpusSplit load_corpus_for(const LoadedModel& loaded, const std::string& override_dir) {
  const std::string dir = override_dir.empty() ? loaded.corpus_dir : override_dir;
  if (dir.empty()) throw ConfigError("checkpoint names no corpus; pass --corpus");
  CorpusSplit corpus = CorpusSplit::load_dir(dir, loaded.model.taxonomy());
  corpus.encode(loaded.vocab, loaded.model.config().N);
  return corpus;
}

struct TrainArgs {
  std::string config, corpus, taxonomy, out, pretrained;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> icl, history;
  std::optional<int> level;
  std::optional<std::size_t> workers;
  bool no_pe = false, no_text = false, no_label = false, quiet = false;
};

int run_train(const TrainArgs& a) {
  ModelConfig config = a.config.empty() ? ModelConfig{} : ModelConfig::load(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.icl) config.icl_mode = parse_icl_mode(*a.icl);
  if (a.history) config.history = parse_bool(*a.history);
  if (a.level) config.level = *a.level;
  if (a.workers) config.workers = *a.workers;
  if (a.no_pe) config.use_pe = false;
  if (a.no_text) config.use_text = false;
  if (a.no_label) config.use_label = false;

  const Taxonomy tax = Taxonomy::load(a.taxonomy);
  config.validate(tax.depth());
  CorpusSplit corpus = CorpusSplit::load_dir(a.corpus, tax);
  const Vocabulary vocab = build_vocab(corpus.train(), config.min_count);
  corpus.encode(vocab, config.N);

  std::optional<PretrainedVectors> pretrained;
  TrainOptions opts;
  if (!a.quiet) opts.log = &std::cerr;
  if (!a.pretrained.empty()) {
    pretrained = read_pretrained_vectors(a.pretrained);
    opts.pretrained = &*pretrained;
    opts.vocab = &vocab;
  }
  if (!a.quiet) {
    std::cerr << "kernels: " << kernels::isa_name(kernels::active().isa) << ", vocabulary: " << vocab.size()
              << " words, train patents: " << corpus.train().size() << '\n';
  }
  TrainResult result = train(config, corpus, tax, vocab.size(), opts);

  fs::create_directories(a.out);
  const fs::path ckpt = fs::path(a.out) / "model.ckpt";
  nlohmann::json extra{{"best_epoch", result.report.best_epoch}, {"best_score", result.report.best_score}};
  save_model(ckpt, result.model, vocab, fs::absolute(a.corpus).lexically_normal().string(), extra);
  write_text(fs::path(a.out) / "report.json", result.report.to_json().dump(2) + "\n");
  std::cout << "best epoch " << result.report.best_epoch << " of " << result.report.epochs.size()
            << ", " << split_name(result.report.selection_split) << " NDCG " << result.report.best_score
            << "\ncheckpoint " << ckpt.string() << '\n';
  return 0;
}

int run_evaluate(const std::string& checkpoint, const std::string& split, const std::string& k,
                 const std::string& corpus_dir, std::size_t workers, bool csv) {
  const auto ks = parse_ks(k);
  const LoadedModel loaded = load_model(checkpoint);
  const CorpusSplit corpus = load_corpus_for(loaded, corpus_dir);
  const MetricTable table = evaluate(loaded.model, corpus, parse_split(split), ks, workers);
  std::cout << (csv ? table.to_csv() : table.to_text());
  return 0;
}

int run_predict(const std::string& checkpoint, const std::string& input, std::size_t k,
                const std::string& corpus_dir, std::size_t workers) {
  const LoadedModel loaded = load_model(checkpoint);
  const PatentClassifier& model = loaded.model;
  if (k == 0 || k > model.num_codes()) {
    throw ConfigError("--k must lie in 1.." + std::to_string(model.num_codes()));
  }
  std::vector<PatentRecord> records = load_corpus(input, model.taxonomy());
  encode_records(records, loaded.vocab, model.config().N);
  // History lookups need the training corpus only when the model uses them.
  CorpusSplit corpus;
  if (model.config().history) corpus = load_corpus_for(loaded, corpus_dir);
  const auto probs = score_records(model, corpus, records, workers);
  const int level = model.config().level;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto ranking = rank_codes(probs[i]);
    nlohmann::json top = nlohmann::json::array();
    for (std::size_t r = 0; r < k; ++r) {
      const int c = ranking[r];
      top.push_back({{"code", model.taxonomy().code(level, c)}, {"prob", probs[i][static_cast<std::size_t>(c)]}});
    }
    std::cout << nlohmann::json{{"id", records[i].id}, {"topk", top}}.dump() << '\n';
  }
  return 0;
}

int run_synth(const std::string& spec_path, std::uint64_t seed, const std::string& out) {
  const SynthSpec spec = spec_path.empty() ? SynthSpec{} : SynthSpec::load(spec_path);
  const SyntheticCorpus corpus = generate_synthetic(spec, seed);
  write_synthetic(out, corpus);
  std::cout << "wrote " << corpus.split.train().size() << "/" << corpus.split.valid().size() << "/"
            << corpus.split.test().size() << " train/valid/test patents to " << out << '\n';
  return 0;
}

std::vector<float> row(const Tensor& t, std::size_t r) {
  const std::size_t w = t.cols();
  return {t.data() + r * w, t.data() + (r + 1) * w};
}

int run_export(const std::string& checkpoint, const std::string& out_path) {
  const LoadedModel loaded = load_model(checkpoint);
  const PatentClassifier& model = loaded.model;
  const Taxonomy& tax = model.taxonomy();
  const int level = model.config().level;
  Tensor hier;
  {
    NoGradGuard guard;
    hier = model.code_representations(ForwardContext::eval());
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + out_path + "'");
  // One line per vector: {"code", "level", "kind", "vector"}.
  auto emit = [&out, &tax](int l, std::size_t i, const char* kind, const Tensor& t) {
    out << nlohmann::json{{"code", tax.code(l, static_cast<int>(i))}, {"level", l}, {"kind", kind}, {"vector", row(t, i)}}
               .dump()
        << '\n';
  };
  const Tensor& stat = model.predictor().static_codes();
  for (std::size_t i = 0; i < tax.size(level); ++i) {
    emit(level, i, "static", stat);
    if (hier.defined()) emit(level, i, "hierarchical", hier);
  }
  if (const CodeCorrelation* icl = model.code_correlation()) {
    for (std::size_t l = 1; l <= icl->embeddings().levels.size(); ++l) {
      const Tensor& e = icl->embeddings().level(static_cast<int>(l));
      for (std::size_t i = 0; i < e.rows(); ++i) emit(static_cast<int>(l), i, "embedding", e);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical patent classification with taxonomy correlation and assignee history"};
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write model.ckpt and report.json");
  train_cmd->add_option("--config", ta.config, "key=value config file");
  train_cmd->add_option("--corpus", ta.corpus, "Directory with train/valid/test .jsonl")->required();
  train_cmd->add_option("--taxonomy", ta.taxonomy, "Taxonomy JSON")->required();
  train_cmd->add_option("--out", ta.out, "Output directory")->required();
  train_cmd->add_option("--seed", ta.seed);
  train_cmd->add_option("--icl", ta.icl)->check(CLI::IsMember({"none", "fixed", "adaptive_h", "adaptive_v", "adaptive_hv"}));
  train_cmd->add_option("--history", ta.history)->check(CLI::IsMember({"on", "off"}));
  train_cmd->add_flag("--no-pe", ta.no_pe);
  train_cmd->add_flag("--no-text", ta.no_text);
  train_cmd->add_flag("--no-label", ta.no_label);
  train_cmd->add_option("--level", ta.level)->check(CLI::Range(1, 9));
  train_cmd->add_option("--pretrained", ta.pretrained, "Word vectors, one 'word v1 v2 ...' per line");
  train_cmd->add_option("--workers", ta.workers, "Threads for validation passes");
  train_cmd->add_flag("--quiet", ta.quiet);

  std::string checkpoint, split = "test", k = "1,3,5", corpus_dir;
  std::size_t workers = 1;
  bool csv = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "Metric table for one split");
  eval_cmd->add_option("--checkpoint", checkpoint)->required();
  eval_cmd->add_option("--split", split)->check(CLI::IsMember({"train", "valid", "test"}));
  eval_cmd->add_option("--k", k, "Comma-separated cutoffs");
  eval_cmd->add_option("--corpus", corpus_dir, "Corpus directory (defaults to the one used in training)");
  eval_cmd->add_option("--workers", workers);
  eval_cmd->add_flag("--csv", csv);

  std::string input;
  std::size_t top_k = 5;
  auto* pred_cmd = app.add_subcommand("predict", "Top-K codes per patent as JSON Lines");
  pred_cmd->add_option("--checkpoint", checkpoint)->required();
  pred_cmd->add_option("--input", input)->required();
  pred_cmd->add_option("--k", top_k);
  pred_cmd->add_option("--corpus", corpus_dir, "Corpus directory for assignee histories");
  pred_cmd->add_option("--workers", workers);

  std::string spec_path, out;
  std::uint64_t seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a planted-signal corpus");
  synth_cmd->add_option("--spec", spec_path, "key=value generator spec");
  synth_cmd->add_option("--seed", seed);
  synth_cmd->add_option("--out", out)->required();

  auto* export_cmd = app.add_subcommand("export-embeddings", "Code embeddings as JSON Lines");
  export_cmd->add_option("--checkpoint", checkpoint)->required();
  export_cmd->add_option("--out", out)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train_cmd) return run_train(ta);
    if (*eval_cmd) return run_evaluate(checkpoint, split, k, corpus_dir, workers, csv);
    if (*pred_cmd) return run_predict(checkpoint, input, top_k, corpus_dir, workers);
    if (*synth_cmd) return run_synth(spec_path, seed, out);
    if (*export_cmd) return run_export(checkpoint, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
