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

#include "patcls/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "patcls/adam.hpp"
#include "patcls/errors.hpp"

namespace patcls {
namespace {

constexpr std::size_t kDefaultKs[] = {1, 3, 5};

}  // namespace

bool TrainReport::same_run(const TrainReport& other) const {
  return epochs == other.epochs && best_epoch == other.best_epoch && best_score == other.best_score &&
         selection_split == other.selection_split && stopped_early == other.stopped_early;
}

nlohmann::json TrainReport::to_json(bool include_wall_time) const {
  nlohmann::json j;
  j["best_epoch"] = best_epoch;
  j["best_score"] = best_score;
  j["selection_split"] = std::string(split_name(selection_split));
  j["stopped_early"] = stopped_early;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : epochs) {
    rows.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"score", e.score},
                    {"validation", e.validation.to_json()}});
  }
  j["epochs"] = rows;
  if (include_wall_time) j["wall_seconds"] = wall_seconds;
  return j;
}

std::vector<std::vector<float>> score_records(const PatentClassifier& model, const CorpusSplit& corpus,
                                              std::span<const PatentRecord> records, std::size_t workers) {
  Tensor code_repr;
  {
    NoGradGuard guard;
    code_repr = model.code_representations(ForwardContext::eval());
  }
  std::vector<std::vector<float>> out(records.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto history = model.history_for(records[i], corpus, HistoryScope::kAll);
      out[i] = model.probabilities(records[i], history, code_repr);
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(records.size(), 1));
  if (workers == 1) {
    run(0, records.size());
    return out;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (records.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(records.size(), w * chunk);
    const std::size_t end = std::min(records.size(), begin + chunk);
    threads.emplace_back([&, w, begin, end] {
      try {
        run(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<RankedPrediction> rank_records(const PatentClassifier& model, const CorpusSplit& corpus,
                                           std::span<const PatentRecord> records, std::size_t workers) {
  const auto probs = score_records(model, corpus, records, workers);
  std::vector<RankedPrediction> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i].id = records[i].id;
    out[i].ranking = rank_codes(probs[i]);
    out[i].truth = records[i].labels(model.config().level);
  }
  return out;
}

MetricTable evaluate(const PatentClassifier& model, const CorpusSplit& corpus, Split split,
                     std::span<const std::size_t> ks, std::size_t workers) {
  const auto& records = corpus.records(split);
  if (records.empty()) throw ContractError("cannot evaluate the empty " + std::string(split_name(split)) + " split");
  const std::size_t top = *std::max_element(ks.begin(), ks.end());
  if (top > model.num_codes()) {
    throw ConfigError("K = " + std::to_string(top) + " exceeds the " + std::to_string(model.num_codes()) +
                      " codes at level " + std::to_string(model.config().level));
  }
  const auto preds = rank_records(model, corpus, records, workers);
  return evaluate_run(preds, ks);
}

MetricTable evaluate(const PatentClassifier& model, const CorpusSplit& corpus, Split split, std::size_t workers) {
  return evaluate(model, corpus, split, kDefaultKs, workers);
}

TrainResult train(const ModelConfig& config, const CorpusSplit& corpus, const Taxonomy& tax,
                  std::size_t vocab_size, const TrainOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  config.validate(tax.depth());
  const auto& train_set = corpus.train();
  if (train_set.empty()) throw ConfigError("training split is empty");
  PatentClassifier model(config, tax, vocab_size);
  if (options.pretrained) {
    if (!options.vocab) throw ContractError("pretrained vectors need the vocabulary");
    const std::size_t n = model.load_pretrained(*options.pretrained, *options.vocab);
    if (options.log) *options.log << "loaded " << n << " pretrained word vectors\n";
  }

  TrainReport report;
  report.selection_split = corpus.valid().empty() ? Split::kTrain : Split::kValid;
  // Selection uses NDCG@5, or NDCG@|C| on levels with fewer than 5 codes.
  const std::size_t top_k = std::min<std::size_t>(5, model.num_codes());
  std::vector<std::size_t> eval_ks;
  for (std::size_t k : kDefaultKs) {
    if (k < top_k) eval_ks.push_back(k);
  }
  eval_ks.push_back(top_k);

  // Histories come from the train split only, cut at each patent's time.
  std::vector<std::vector<const PatentRecord*>> histories(train_set.size());
  std::vector<std::vector<float>> targets(train_set.size());
  for (std::size_t i = 0; i < train_set.size(); ++i) {
    histories[i] = model.history_for(train_set[i], corpus, HistoryScope::kTrainOnly);
    targets[i] = model.targets(train_set[i]);
  }

  Rng streams(config.seed ^ 0x9e3779b97f4a7c15ULL);
  Rng order_rng(streams.next());
  Rng drop_rng(streams.next());
  AdamState adam = AdamState::for_params(model.params(), config.lr);
  ForwardContext ctx{true, static_cast<float>(config.dropout), &drop_rng};

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<float>> best_values;
  std::size_t stale = 0;
  const std::size_t patience = std::max<std::size_t>(config.patience, 1);

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    order_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t b = 0; b < order.size(); b += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), b + config.batch_size);
      const Tensor code_repr = model.code_representations(ctx);
      std::vector<Tensor> losses;
      losses.reserve(end - b);
      for (std::size_t j = b; j < end; ++j) {
        const std::size_t i = order[j];
        const Tensor z = model.logits(train_set[i], histories[i], code_repr, ctx);
        losses.push_back(bce_with_logits(z, targets[i], config.loss_reduction));
      }
      Tensor loss = add_n(losses);
      if (config.loss_reduction == LossReduction::kMean) {
        loss = scale(loss, 1.0f / static_cast<float>(losses.size()));
      }
      const double value = loss.item();
      if (!std::isfinite(value)) {
        throw TrainingError("non-finite loss " + std::to_string(value) + " in epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(batch_index) + " (first patent '" +
                            train_set[order[b]].id + "')");
      }
      epoch_loss += value;
      loss.backward();
      adam_step(model.params(), adam);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_loss;
    rec.validation = evaluate(model, corpus, report.selection_split, eval_ks, config.workers);
    rec.score = rec.validation.value(Metric::kNdcg, top_k);
    report.epochs.push_back(rec);
    if (options.log) {
      *options.log << "epoch " << epoch << "  loss " << rec.train_loss << "  " << split_name(report.selection_split)
                   << " NDCG@" << top_k << " " << rec.score << '\n';
    }
    if (options.on_epoch) options.on_epoch(rec);
    if (rec.score > best) {
      best = rec.score;
      report.best_epoch = epoch;
      report.best_score = rec.score;
      best_values = model.params().snapshot();
      stale = 0;
    } else if (++stale >= patience) {
      report.stopped_early = true;
      break;
    }
  }

  model.params().restore(best_values);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return TrainResult{std::move(model), std::move(report)};
}

}  // namespace patcls
