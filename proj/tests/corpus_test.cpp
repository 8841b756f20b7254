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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "patcls/corpus.hpp"
#include "patcls/errors.hpp"
#include "patcls/key_values.hpp"

namespace patcls {
namespace {

Taxonomy ipc_taxonomy() {
  return Taxonomy({{"B", "F"}, {"B60", "F02"}, {"B60K", "B60L", "F02B"}},
                  {{"B60", "B"}, {"F02", "F"}, {"B60K", "B60"}, {"B60L", "B60"}, {"F02B", "F02"}});
}

std::vector<PatentRecord> parse(const std::string& text, const Taxonomy& tax) {
  std::istringstream in(text);
  return parse_corpus(in, tax, "mem");
}

std::vector<std::string> repeat(const std::string& w, std::size_t n) { return std::vector<std::string>(n, w); }

TEST(LoadCorpus, EmptyInputGivesNoRecords) {
  EXPECT_TRUE(parse("", ipc_taxonomy()).empty());
  EXPECT_TRUE(parse("\n  \n", ipc_taxonomy()).empty());
}

TEST(LoadCorpus, LeafLabelsCloseOverAncestors) {
  const Taxonomy tax = ipc_taxonomy();
  const auto recs =
      parse(R"({"id":"p1","assignee":"acme","time":3,"text":"Hybrid  ENGINE\tmount","labels":["B60K"]})", tax);
  ASSERT_EQ(recs.size(), 1u);
  const auto& r = recs[0];
  EXPECT_EQ(r.id, "p1");
  EXPECT_EQ(r.assignee, "acme");
  EXPECT_EQ(r.time, 3);
  EXPECT_EQ(r.words, (std::vector<std::string>{"hybrid", "engine", "mount"}));
  EXPECT_EQ(r.labels(3), (std::vector<int>{tax.lookup("B60K").index}));
  EXPECT_EQ(r.labels(2), (std::vector<int>{tax.lookup("B60").index}));
  EXPECT_EQ(r.labels(1), (std::vector<int>{tax.lookup("B").index}));
}

TEST(LoadCorpus, SharedAncestorsAppearOnce) {
  const Taxonomy tax = ipc_taxonomy();
  const auto r = parse(R"({"id":"p","assignee":"a","time":0,"text":"x","labels":["B60K","B60L","F02B"]})", tax)[0];
  EXPECT_EQ(r.labels(3).size(), 3u);
  EXPECT_EQ(r.labels(2).size(), 2u);
  EXPECT_EQ(r.labels(1).size(), 2u);
}

TEST(LoadCorpus, ErrorsNameRecordCodeAndLine) {
  const Taxonomy tax = ipc_taxonomy();
  try {
    parse("\n{\"id\":\"p9\",\"assignee\":\"a\",\"time\":0,\"text\":\"x\",\"labels\":[\"Q77\"]}", tax);
    FAIL() << "expected LookupError";
  } catch (const LookupError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("p9"), std::string::npos);
    EXPECT_NE(msg.find("Q77"), std::string::npos);
    EXPECT_NE(msg.find("mem:2"), std::string::npos);
  }
  try {
    parse("{\"id\":\"ok\",\"assignee\":\"a\",\"time\":0,\"text\":\"x\"}\n{not json", tax);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("mem:2"), std::string::npos);
  }
  EXPECT_THROW(parse(R"({"id":"p","assignee":"a","time":0,"text":"x","labels":["B60"]})", tax), FormatError);
  EXPECT_THROW(parse(R"({"id":"p","time":0,"text":"x","labels":[]})", tax), FormatError);
}

TEST(BuildVocab, MinCountThreshold) {
  auto text = repeat("engine", 5);
  auto flux = repeat("flux", 4);
  text.insert(text.end(), flux.begin(), flux.end());
  const std::vector<std::vector<std::string>> corpus{text};
  const Vocabulary v = build_vocab(corpus, 5);
  EXPECT_TRUE(v.find("engine").has_value());
  EXPECT_FALSE(v.find("flux").has_value());
  EXPECT_EQ(v.size(), 3u);
}

TEST(BuildVocab, EmptyCorpusAndMinCountOne) {
  const Vocabulary empty = build_vocab(std::span<const std::vector<std::string>>{}, 5);
  EXPECT_EQ(empty.size(), 2u);
  EXPECT_EQ(empty.word(Vocabulary::kMask), "<mask>");
  EXPECT_EQ(empty.word(Vocabulary::kPad), "<pad>");
  const std::vector<std::vector<std::string>> corpus{{"a", "b"}, {"c", "a"}};
  const Vocabulary all = build_vocab(corpus, 1);
  EXPECT_EQ(all.size(), 5u);
  // Most frequent first, ties alphabetical: ids are stable across rebuilds.
  EXPECT_EQ(all.word(2), "a");
  EXPECT_EQ(all.word(3), "b");
  EXPECT_EQ(all.word(4), "c");
  EXPECT_EQ(Vocabulary(all.words()).words(), all.words());
}

TEST(BuildVocab, RejectsMalformedWordList) {
  EXPECT_THROW(Vocabulary({"x", "<pad>"}), FormatError);
  EXPECT_THROW(Vocabulary({"<mask>", "<pad>", "a", "a"}), FormatError);
}

TEST(EncodeText, PadsTruncatesAndMasks) {
  const Vocabulary v({"<mask>", "<pad>", "gear", "shaft", "motor"});
  const std::vector<std::string> three{"gear", "shaft", "motor"};
  const EncodedText e = encode_text(three, v, 5);
  EXPECT_EQ(e.ids, (std::vector<std::int32_t>{2, 3, 4, 1, 1}));
  EXPECT_EQ(e.length, 3u);

  const auto long_text = repeat("gear", 150);
  const EncodedText cut = encode_text(long_text, v, 100);
  EXPECT_EQ(cut.ids.size(), 100u);
  EXPECT_EQ(cut.length, 100u);

  const std::vector<std::string> unknown{"gear", "warp"};
  EXPECT_EQ(encode_text(unknown, v, 3).ids, (std::vector<std::int32_t>{2, Vocabulary::kMask, 1}));
}

TEST(EncodeText, IdempotentOnEncodedInput) {
  const Vocabulary v({"<mask>", "<pad>", "gear", "shaft"});
  const std::vector<std::string> words{"gear", "shaft", "gear", "shaft"};
  const EncodedText once = encode_text(words, v, 4);
  std::vector<std::string> back;
  for (auto id : once.ids) back.push_back(v.word(id));
  EXPECT_EQ(encode_text(back, v, 4).ids, once.ids);
}

PatentRecord rec(const std::string& id, const std::string& assignee, std::int64_t time) {
  PatentRecord r;
  r.id = id;
  r.assignee = assignee;
  r.time = time;
  return r;
}

std::vector<std::string> ids(const std::vector<const PatentRecord*>& v) {
  std::vector<std::string> out;
  for (const auto* r : v) out.push_back(r->id);
  return out;
}

TEST(HistoryOf, FirstPatentHasNoHistory) {
  const CorpusSplit split({rec("a0", "A", 1), rec("a1", "A", 2)}, {}, {});
  EXPECT_TRUE(split.history_of("A", 1, 5).empty());
  EXPECT_TRUE(split.history_of("nobody", 100, 5).empty());
  EXPECT_TRUE(split.history_of("A", 100, 0).empty());
}

TEST(HistoryOf, LatestRecordsOldestFirst) {
  std::vector<PatentRecord> train;
  for (int t = 7; t >= 1; --t) train.push_back(rec("p" + std::to_string(t), "A", t));
  train.push_back(rec("p8", "A", 8));
  const CorpusSplit split(std::move(train), {}, {});
  EXPECT_EQ(ids(split.history_of("A", 8, 5)), (std::vector<std::string>{"p3", "p4", "p5", "p6", "p7"}));
}

TEST(HistoryOf, StrictlyBeforeWithCorpusOrderTies) {
  const CorpusSplit split({rec("x", "A", 1), rec("y", "A", 1), rec("same", "A", 2)}, {rec("v", "A", 1)},
                          {rec("t", "A", 2)});
  EXPECT_EQ(ids(split.history_of("A", 2, 10)), (std::vector<std::string>{"x", "y", "v"}));
  EXPECT_EQ(ids(split.history_of("A", 2, 2)), (std::vector<std::string>{"y", "v"}));
  EXPECT_EQ(ids(split.history_of("A", 2, 10, HistoryScope::kTrainOnly)), (std::vector<std::string>{"x", "y"}));
  for (const auto* r : split.history_of("A", 3, 10)) EXPECT_LT(r->time, 3);
}

TEST(CorpusSplit, RejectsDuplicateIdsAcrossSplits) {
  EXPECT_THROW(CorpusSplit({rec("x", "A", 1)}, {}, {rec("x", "B", 2)}), FormatError);
}

TEST(CorpusSplit, DirectoryRoundTrip) {
  const Taxonomy tax = ipc_taxonomy();
  const auto dir = std::filesystem::temp_directory_path() / "patcls_corpus_rt";
  std::filesystem::remove_all(dir);
  const auto train = parse(
      "{\"id\":\"a\",\"assignee\":\"u\",\"time\":1,\"text\":\"gear box\",\"labels\":[\"B60K\"]}\n"
      "{\"id\":\"b\",\"assignee\":\"u\",\"time\":2,\"text\":\"piston\",\"labels\":[\"F02B\",\"B60L\"]}",
      tax);
  CorpusSplit(train, {}, {}).write_dir(dir, tax);
  const CorpusSplit back = CorpusSplit::load_dir(dir, tax);
  ASSERT_EQ(back.train().size(), 2u);
  EXPECT_TRUE(back.valid().empty());
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.train()[i].words, train[i].words);
    EXPECT_EQ(back.train()[i].labels_by_level, train[i].labels_by_level);
  }
  EXPECT_THROW(CorpusSplit::load_dir(dir / "missing", tax), FormatError);
  std::filesystem::remove_all(dir);
}

TEST(Splits, NamesRoundTrip) {
  for (Split s : {Split::kTrain, Split::kValid, Split::kTest}) EXPECT_EQ(parse_split(split_name(s)), s);
  EXPECT_THROW(parse_split("dev"), ConfigError);
}

TEST(PretrainedVectors, ParsesHeaderAndRows) {
  const auto path = std::filesystem::temp_directory_path() / "patcls_vectors.txt";
  {
    std::ofstream out(path);
    out << "2 3\ngear 1 2 3\nshaft 0.5 0 -1\n";
  }
  const PretrainedVectors pv = read_pretrained_vectors(path);
  EXPECT_EQ(pv.dim, 3u);
  EXPECT_EQ(pv.vectors.at("shaft"), (std::vector<float>{0.5f, 0.0f, -1.0f}));
  {
    std::ofstream out(path);
    out << "2 3\ngear 1 2\n";
  }
  EXPECT_THROW(read_pretrained_vectors(path), FormatError);
  std::filesystem::remove(path);
}

TEST(KeyValues, ParsesCommentsAndWhitespace) {
  std::istringstream in("# comment\n\n F = 16 \nicl_mode=fixed\n");
  const KeyValues kv = parse_key_values(in);
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"F", "16"}));
  EXPECT_EQ(kv[1].second, "fixed");
  std::istringstream bad("F 16\n");
  EXPECT_THROW(parse_key_values(bad), ConfigError);
  std::istringstream empty_key("=3\n");
  EXPECT_THROW(parse_key_values(empty_key), ConfigError);
}

}  // namespace
}  // namespace patcls
