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

#include "btp/backend.hpp"

#include <gtest/gtest.h>

#include <random>

#include "btp/error.hpp"
#include "support/temp_dir.hpp"

namespace btp {
namespace {

const auto kRegistry = LanguageRegistry::with_defaults();

TEST(LanguageTest, DefaultsAndExtension) {
  auto registry = LanguageRegistry::with_defaults();
  for (auto code : {"en", "de", "es", "fr", "ja", "ru", "zh"}) EXPECT_TRUE(registry.contains(code));
  EXPECT_FALSE(registry.contains("ko"));
  EXPECT_THROW(registry.parse("ko"), UsageError);
  registry.add("ko");
  EXPECT_EQ(registry.parse("ko").str(), "ko");
  EXPECT_THROW(registry.add("Bad Code"), UsageError);
  EXPECT_TRUE(LanguageRegistry().contains("en"));
}

TEST(IdentityBackendTest, ReturnsInputVerbatim) {
  auto backend = identity_backend();
  std::vector<std::string> in{"thank u papi"};
  EXPECT_EQ(backend->translate_batch(in, kRegistry.parse("en"), kRegistry.parse("zh")), in);
  EXPECT_TRUE(backend->translate_batch({}, kRegistry.parse("en"), kRegistry.parse("de")).empty());
}

TEST(IdentityBackendTest, RandomStringsPreservedAndComposes) {
  std::mt19937_64 rng(11);
  std::vector<std::string> in;
  for (int i = 0; i < 50; ++i) {
    std::string s;
    for (std::uint64_t k = rng() % 30; k > 0; --k) s += static_cast<char>(32 + rng() % 95);
    in.push_back(s);
  }
  auto id = identity_backend();
  auto en = kRegistry.parse("en"), ja = kRegistry.parse("ja");
  auto once = id->translate_batch(in, en, ja);
  EXPECT_EQ(once, in);
  EXPECT_EQ(id->translate_batch(once, ja, en), once);
}

TEST(DictionaryBackendTest, PivotCollapse) {
  auto registry = LanguageRegistry::with_defaults();
  registry.add("zhsim");
  auto en = registry.parse("en"), zh = registry.parse("zhsim");
  Lexicon lexicon;
  lexicon.add(en, zh, "papi", "BABA");
  lexicon.add(zh, en, "BABA", "dad");
  auto backend = dictionary_backend(lexicon);
  std::vector<std::string> in{"thank u papi"};
  auto pivot = backend->translate_batch(in, en, zh);
  EXPECT_EQ(pivot, std::vector<std::string>{"thank u BABA"});
  EXPECT_EQ(backend->translate_batch(pivot, zh, en), std::vector<std::string>{"thank u dad"});
  // The reverse direction is not in the lexicon.
  EXPECT_EQ(backend->translate_batch(in, zh, en), in);
}

TEST(DictionaryBackendTest, EmptyLexiconActsAsIdentityOnNormalizedText) {
  auto backend = dictionary_backend(Lexicon{});
  std::vector<std::string> in{"a b  c", "  lead and trail  "};
  auto out = backend->translate_batch(in, kRegistry.parse("en"), kRegistry.parse("fr"));
  EXPECT_EQ(out, (std::vector<std::string>{"a b c", "lead and trail"}));
}

TEST(DictionaryBackendTest, SelfMappingLeavesTextUnchanged) {
  auto en = kRegistry.parse("en"), fr = kRegistry.parse("fr");
  Lexicon lexicon;
  lexicon.add(en, fr, "hello", "hello");
  std::vector<std::string> in{"hello world"};
  EXPECT_EQ(dictionary_backend(lexicon)->translate_batch(in, en, fr), in);
}

TEST(DictionaryBackendTest, LoadsLexiconFileAndRegistersCodes) {
  testing::TempDir dir;
  testing::write_file(dir / "lex.tsv", "# comment\nen\tzhsim\tpapi\tBABA\n\nzhsim\ten\tBABA\tdad\n");
  auto registry = LanguageRegistry::with_defaults();
  auto lexicon = Lexicon::load(dir / "lex.tsv", registry);
  EXPECT_EQ(lexicon.size(), 2u);
  EXPECT_TRUE(registry.contains("zhsim"));
  EXPECT_EQ(lexicon.lookup(registry.parse("zhsim"), registry.parse("en"), "BABA"), "dad");

  testing::write_file(dir / "bad.tsv", "en\tde\tonly-three\n");
  EXPECT_THROW(Lexicon::load(dir / "bad.tsv", registry), DataError);
}

TEST(AcceptabilityTest, ConstantAndScripted) {
  std::vector<std::string> texts(3, "x");
  EXPECT_EQ(constant_acceptability(1.0)->score_batch(texts), std::vector<double>(3, 1.0));
  EXPECT_THROW(constant_acceptability(1.5), UsageError);
  auto scripted = scripted_acceptability({0.9, 0.4, 0.5, 0.2});
  EXPECT_EQ(scripted->score_batch(texts), (std::vector<double>{0.9, 0.4, 0.5}));
  EXPECT_THROW(scripted->score_batch(std::vector<std::string>(5, "x")), BackendError);

  testing::TempDir dir;
  testing::write_file(dir / "s.txt", "0.9\n0.4\n\n0.5\n");
  EXPECT_EQ(load_scripted_acceptability(dir / "s.txt")->score_batch(texts), (std::vector<double>{0.9, 0.4, 0.5}));
  testing::write_file(dir / "bad.txt", "0.9\nhigh\n");
  EXPECT_THROW(load_scripted_acceptability(dir / "bad.txt"), DataError);
}

TEST(ContractChecksTest, DetectViolations) {
  EXPECT_THROW(check_translation({"a"}, 2), BackendError);
  EXPECT_NO_THROW(check_translation({"a", "b"}, 2));
  Classification ok{{"x"}, {{0.25, 0.75}}};
  EXPECT_NO_THROW(check_classification(ok, 1));
  Classification bad_sum{{"x"}, {{0.25, 0.7}}};
  EXPECT_THROW(check_classification(bad_sum, 1), BackendError);
  EXPECT_THROW(check_classification(ok, 2), BackendError);
  EXPECT_THROW(check_acceptability({0.5, 1.2}, 2), BackendError);
  EXPECT_THROW(check_acceptability({0.5}, 2), BackendError);
}

}  // namespace
}  // namespace btp
