/*
 * Copyright 2026 The btp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "btp/corpus.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "btp/error.hpp"
#include "support/temp_dir.hpp"

namespace btp {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(CorpusTest, LoadsJsonlInOrder) {
  TempDir dir;
  write_file(dir / "c.jsonl",
             "{\"id\":\"b\",\"text\":\"second\",\"attribute\":\"AA\",\"utility\":null}\n"
             "{\"id\":\"a\",\"text\":\"first\"}\n"
             "{\"id\":\"c\",\"text\":\"third\",\"attribute\":null,\"utility\":\"pos\"}\n");
  auto c = load_corpus(dir / "c.jsonl", CorpusFormat::Jsonl);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.records[0].id, "b");
  EXPECT_EQ(c.records[1].id, "a");
  EXPECT_EQ(c.records[2].id, "c");
  EXPECT_EQ(c.records[0].attribute, "AA");
  EXPECT_FALSE(c.records[0].utility);
  EXPECT_FALSE(c.records[1].attribute);
  EXPECT_EQ(c.records[2].utility, "pos");
}

TEST(CorpusTest, DuplicateIdNamesIdAndBothLines) {
  std::istringstream in("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\",\"text\":\"y\"}\n{\"id\":\"a\",\"text\":\"z\"}\n");
  auto msg = error_of([&] { read_corpus(in, CorpusFormat::Jsonl, "dup.jsonl"); });
  EXPECT_NE(msg.find("\"a\""), std::string::npos) << msg;
  EXPECT_NE(msg.find("lines 1 and 3"), std::string::npos) << msg;
}

TEST(CorpusTest, RejectsEmptyTextUnknownFieldAndBadJson) {
  {
    std::istringstream in("{\"id\":\"a\",\"text\":\"   \"}\n");
    auto msg = error_of([&] { read_corpus(in, CorpusFormat::Jsonl, "f"); });
    EXPECT_NE(msg.find("empty text"), std::string::npos) << msg;
  }
  {
    std::istringstream in("{\"id\":\"a\",\"text\":\"t\",\"gender\":\"m\"}\n");
    auto msg = error_of([&] { read_corpus(in, CorpusFormat::Jsonl, "f"); });
    EXPECT_NE(msg.find("unknown field \"gender\""), std::string::npos) << msg;
  }
  {
    std::istringstream in("{\"id\":\"a\",\"text\":\"t\"}\n{\"id\": \"b\", \"text\": \n");
    auto msg = error_of([&] { read_corpus(in, CorpusFormat::Jsonl, "f"); });
    EXPECT_NE(msg.find("f:2: parse error"), std::string::npos) << msg;
  }
  {
    std::istringstream in("{\"id\":\"\",\"text\":\"t\"}\n");
    EXPECT_THROW(read_corpus(in, CorpusFormat::Jsonl), DataError);
  }
  {
    std::istringstream in("{\"id\":7,\"text\":\"t\"}\n");
    EXPECT_THROW(read_corpus(in, CorpusFormat::Jsonl), DataError);
  }
}

TEST(CorpusTest, TsvWithHeaderRoundTrips) {
  TempDir dir;
  write_file(dir / "c.tsv", "id\ttext\tattribute\tutility\nx1\thello there\tmale\tpos\nx2\tbye now\tfemale\tneg\n");
  auto c = load_corpus(dir / "c.tsv", CorpusFormat::Tsv);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.records[0].attribute, "male");
  EXPECT_EQ(c.records[1].utility, "neg");

  write_corpus(c, dir / "again.tsv", CorpusFormat::Tsv);
  auto reloaded = load_corpus(dir / "again.tsv", CorpusFormat::Tsv);
  ASSERT_EQ(reloaded.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(reloaded.records[i], c.records[i]);
}

TEST(CorpusTest, TsvNullsEscapesAndColumnSubsets) {
  std::istringstream in("text\tid\nhi\\tthere\\\\N\tq\n");
  auto c = read_corpus(in, CorpusFormat::Tsv);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.records[0].id, "q");
  EXPECT_EQ(c.records[0].text, "hi\tthere\\N");
  EXPECT_FALSE(c.records[0].attribute);

  std::istringstream nulls("id\ttext\tattribute\tutility\na\tt\t\\N\tpos\n");
  auto n = read_corpus(nulls, CorpusFormat::Tsv);
  EXPECT_FALSE(n.records[0].attribute);
  EXPECT_EQ(n.records[0].utility, "pos");

  std::istringstream unknown("id\ttext\tgender\n");
  EXPECT_THROW(read_corpus(unknown, CorpusFormat::Tsv), DataError);
  std::istringstream ragged("id\ttext\na\tb\tc\n");
  EXPECT_THROW(read_corpus(ragged, CorpusFormat::Tsv), DataError);
}

TEST(CorpusTest, EmptyCorpusWritesHeaderOnlyOrNothing) {
  Corpus empty;
  std::ostringstream tsv, jsonl;
  write_corpus(empty, tsv, CorpusFormat::Tsv);
  write_corpus(empty, jsonl, CorpusFormat::Jsonl);
  EXPECT_EQ(tsv.str(), "id\ttext\tattribute\tutility\n");
  EXPECT_EQ(jsonl.str(), "");
}

TEST(CorpusTest, SingleRecordWritesOneLine) {
  auto c = make_corpus({{"only", "just one", "a", std::nullopt}});
  std::ostringstream out;
  write_corpus(c, out, CorpusFormat::Jsonl);
  EXPECT_EQ(out.str(), "{\"id\":\"only\",\"text\":\"just one\",\"attribute\":\"a\",\"utility\":null}\n");
}

Corpus random_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::string alphabet[] = {"a", "b", "Z", " ", "\t", "\n", "\\", "\"", "é", "中", "N", "\\N", "{", ","};
  auto rand_text = [&](std::size_t len) {
    std::string s = "w";
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % std::size(alphabet)];
    return s;
  };
  std::vector<TextRecord> records;
  for (std::size_t i = 0; i < n; ++i) {
    TextRecord r{"id" + std::to_string(i) + rand_text(2), rand_text(rng() % 20), std::nullopt, std::nullopt};
    if (rng() % 3) r.attribute = rand_text(rng() % 4);
    if (rng() % 3) r.utility = rand_text(rng() % 4);
    records.push_back(std::move(r));
  }
  return make_corpus(std::move(records));
}

// Property: load(write(c, f), f) == c for random corpora in both formats.
TEST(CorpusTest, RoundTripProperty) {
  TempDir dir;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c = random_corpus(1 + seed * 5, seed);
    for (auto format : {CorpusFormat::Jsonl, CorpusFormat::Tsv}) {
      auto path = dir / ("c." + std::string(to_string(format)));
      write_corpus(c, path, format);
      auto back = load_corpus(path, format);
      ASSERT_EQ(back.records, c.records) << "seed " << seed << " format " << to_string(format);
    }
  }
}

TEST(CorpusTest, WritesAreByteStable) {
  TempDir dir;
  auto c = random_corpus(100, 99);
  for (auto format : {CorpusFormat::Jsonl, CorpusFormat::Tsv}) {
    write_corpus(c, dir / "one", format);
    write_corpus(c, dir / "two", format);
    EXPECT_EQ(read_file(dir / "one"), read_file(dir / "two"));
  }
}

TEST(CorpusTest, AlignIdenticalCorpora) {
  auto c = make_corpus({{"a", "x", "m", "p"}, {"b", "y", "f", "n"}});
  auto pairs = align_pairs(c, c);
  ASSERT_EQ(pairs.size(), 2u);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(pairs[i].first, c.records[i]);
    EXPECT_EQ(pairs[i].second, c.records[i]);
  }
}

TEST(CorpusTest, AlignReportsMissingId) {
  auto orig = make_corpus({{"a", "x"}, {"x", "y"}});
  auto trans = make_corpus({{"a", "x2"}});
  auto msg = error_of([&] { align_pairs(orig, trans); });
  EXPECT_NE(msg.find("\"x\""), std::string::npos) << msg;
  EXPECT_THROW(align_pairs(orig, Corpus{}), DataError);
}

TEST(CorpusTest, AlignTakesLabelsFromOriginalAndIgnoresOrder) {
  auto orig = random_corpus(30, 5);
  Corpus trans = orig;
  for (auto& r : trans.records) {
    r.text += " changed";
    r.attribute = "bogus";
  }
  auto base = align_pairs(orig, trans);
  std::mt19937_64 rng(3);
  std::shuffle(trans.records.begin(), trans.records.end(), rng);
  auto shuffled = align_pairs(orig, trans);
  ASSERT_EQ(base.size(), orig.size());
  EXPECT_EQ(base, shuffled);
  for (const auto& [o, t] : base) {
    EXPECT_EQ(o.id, t.id);
    EXPECT_EQ(o.attribute, t.attribute);
    EXPECT_EQ(t.text, o.text + " changed");
  }
}

TEST(CorpusTest, TestRoleRequiresBothLabels) {
  std::istringstream in("{\"id\":\"a\",\"text\":\"t\",\"attribute\":\"m\"}\n");
  EXPECT_THROW(read_corpus(in, CorpusFormat::Jsonl, "t", SplitRole::Test), DataError);
  std::istringstream ok("{\"id\":\"a\",\"text\":\"t\",\"attribute\":\"m\",\"utility\":\"p\"}\n");
  EXPECT_EQ(read_corpus(ok, CorpusFormat::Jsonl, "t", SplitRole::Test).size(), 1u);
}

TEST(CorpusTest, SplitManifestNeedsAllFiveRoles) {
  TempDir dir;
  write_file(dir / "test.jsonl", "{\"id\":\"a\",\"text\":\"t\",\"attribute\":\"m\",\"utility\":\"p\"}\n");
  write_file(dir / "train.tsv", "id\ttext\na\tt\n");
  write_file(dir / "full.json",
             R"({"attribute-train":"train.tsv","utility-train":"train.tsv","style-train":"train.tsv",
                 "dev":"train.tsv","test":"test.jsonl"})");
  auto manifest = load_split_manifest(dir / "full.json");
  EXPECT_EQ(manifest.files.size(), 5u);
  EXPECT_EQ(load_split(manifest, SplitRole::Test).size(), 1u);
  EXPECT_EQ(load_split(manifest, SplitRole::Dev).role, SplitRole::Dev);

  write_file(dir / "partial.json", R"({"attribute-train":"train.tsv","test":"test.jsonl"})");
  auto msg = error_of([&] { load_split_manifest(dir / "partial.json"); });
  EXPECT_NE(msg.find("utility-train"), std::string::npos) << msg;

  write_file(dir / "extra.json", R"({"validation":"x"})");
  EXPECT_THROW(load_split_manifest(dir / "extra.json"), DataError);
}

TEST(CorpusTest, FormatHelpers) {
  EXPECT_EQ(format_from_extension("a/b.tsv"), CorpusFormat::Tsv);
  EXPECT_EQ(format_from_extension("a/b.jsonl"), CorpusFormat::Jsonl);
  EXPECT_EQ(parse_split_role("style-train"), SplitRole::StyleTrain);
  EXPECT_THROW(parse_split_role("train"), UsageError);
  EXPECT_THROW(load_corpus("/nonexistent/file.jsonl", CorpusFormat::Jsonl), DataError);
}

}  // namespace
}  // namespace btp
