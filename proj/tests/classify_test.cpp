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

#include "btp/linear_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "btp/error.hpp"
#include "btp/f1.hpp"
#include "btp/report.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

namespace btp {
namespace {

std::vector<std::string> texts_of(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& r : c.records) out.push_back(r.text);
  return out;
}

std::vector<std::string> labels_of(const Corpus& c, LabelField field) {
  std::vector<std::string> out;
  for (const auto& r : c.records) out.push_back(*label_of(r, field));
  return out;
}

FeatureSpec small_spec() {
  FeatureSpec spec;
  spec.hash_bits = 14;
  return spec;
}

std::string bytes_of(const LinearTextModel& m) {
  std::ostringstream out;
  m.save(out);
  return out.str();
}

TEST(FeaturesTest, StableHashIsFrozen) {
  // Changing these values invalidates every saved model. Reference values
  // come from a separate Python rendering of FNV-1a + splitmix64.
  EXPECT_EQ(stable_hash(""), 0x19ad2c178eab8a73ULL);
  EXPECT_EQ(stable_hash("papi"), 0xbd9f92db835de623ULL);
  EXPECT_EQ(stable_hash("wthank u"), 0x8af3739b84382ddfULL);
  EXPECT_NE(stable_hash("a"), stable_hash("b"));
}

TEST(FeaturesTest, CountsSortedByIndex) {
  auto f = extract_features("thank u papi", FeatureSpec{});
  ASSERT_FALSE(f.empty());
  double total = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    total += f[i].value;
    if (i > 0) {
      EXPECT_LT(f[i - 1].index, f[i].index);
    }
    EXPECT_LT(f[i].index, FeatureSpec{}.dimension());
  }
  // 3 + 2 word n-grams; "<thank>" 5 + 4 + 3, "<u>" 1, "<papi>" 4 + 3 + 2 char n-grams.
  EXPECT_EQ(total, 27.0);
  EXPECT_TRUE(extract_features("", FeatureSpec{}).empty());
  EXPECT_EQ(extract_features("Thank U PAPI", FeatureSpec{}), f);
}

TEST(FeaturesTest, SpecValidation) {
  FeatureSpec spec;
  spec.hash_bits = 9;
  EXPECT_THROW(spec.validate(), UsageError);
  spec = {};
  spec.char_ngrams = {4, 3};
  EXPECT_THROW(spec.validate(), UsageError);
}

TEST(TrainTest, SeparableMarkerCorpusReachesPerfectF1) {
  auto train_set = testing::marker_corpus(300, 1);
  auto test_set = testing::marker_corpus(100, 2, "t");
  for (auto field : {LabelField::Attribute, LabelField::Utility}) {
    auto model = train(train_set, field, small_spec(), {.seed = 4});
    auto texts = texts_of(test_set);
    auto truth = labels_of(test_set, field);
    EXPECT_DOUBLE_EQ(f1_score(truth, predict(model, texts).labels).macro_f1, 100.0);
  }
}

TEST(TrainTest, BitIdenticalForSameSeed) {
  auto data = testing::marker_corpus(120, 3);
  auto a = train(data, LabelField::Attribute, small_spec(), {.seed = 9});
  auto b = train(data, LabelField::Attribute, small_spec(), {.seed = 9});
  EXPECT_EQ(bytes_of(a), bytes_of(b));
  auto c = train(data, LabelField::Attribute, small_spec(), {.seed = 10});
  EXPECT_NE(bytes_of(a), bytes_of(c));
}

TEST(TrainTest, RequiresTwoClassesAndLabels) {
  auto one = make_corpus({{"1", "a", "X"}, {"2", "b", "X"}});
  EXPECT_THROW(train(one, LabelField::Attribute, small_spec()), DataError);
  auto missing = make_corpus({{"1", "a", "X"}, {"2", "b"}});
  EXPECT_THROW(train(missing, LabelField::Attribute, small_spec()), DataError);
  EXPECT_THROW(train(Corpus{}, LabelField::Attribute, small_spec()), DataError);
}

TEST(PredictTest, EmptyStringFallsBackToBias) {
  auto model = train(testing::marker_corpus(80, 5), LabelField::Utility, small_spec(), {.seed = 1});
  std::vector<std::string> texts{""};
  auto out = model.predict(texts);
  std::vector<double> biases;
  for (std::size_t i = 0; i < model.labels().size(); ++i) biases.push_back(model.bias(i));
  EXPECT_EQ(out.labels[0], model.labels()[argmax(biases)]);
  EXPECT_NEAR(std::accumulate(out.probabilities[0].begin(), out.probabilities[0].end(), 0.0), 1.0, 1e-12);
}

TEST(PredictTest, ProbabilitiesFollowScores) {
  auto model = train(testing::marker_corpus(80, 6), LabelField::Attribute, small_spec(), {.seed = 2});
  auto texts = texts_of(testing::marker_corpus(30, 7));
  auto out = model.predict(texts);
  check_classification(out, texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto s = model.scores(texts[i]);
    EXPECT_EQ(out.labels[i], model.labels()[argmax(s)]);
    EXPECT_EQ(argmax(out.probabilities[i]), argmax(s));
  }
}

TEST(ArgmaxTest, FirstWinsAndScaleInvariant) {
  std::vector<double> s{0.5, 2.0, 2.0, -1.0};
  EXPECT_EQ(argmax(s), 1u);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> v(1 + rng() % 6);
    for (auto& x : v) x = u(rng);
    auto scaled = v;
    double k = 0.1 + (rng() % 100);
    for (auto& x : scaled) x *= k;
    EXPECT_EQ(argmax(v), argmax(scaled));
  }
}

TEST(ModelIoTest, RoundTripIsExact) {
  testing::TempDir dir;
  auto model = train(testing::marker_corpus(60, 8), LabelField::Attribute, small_spec(), {.seed = 3});
  model.save(dir.path() / "m.bin");
  auto loaded = LinearTextModel::load(dir.path() / "m.bin");
  EXPECT_EQ(bytes_of(loaded), bytes_of(model));
  EXPECT_EQ(loaded.labels(), model.labels());
  EXPECT_EQ(loaded.seed(), 3u);
  auto texts = texts_of(testing::marker_corpus(20, 9));
  EXPECT_EQ(loaded.predict(texts).probabilities, model.predict(texts).probabilities);
}

TEST(ModelIoTest, RejectsCorruptFiles) {
  auto model = train(testing::marker_corpus(40, 8), LabelField::Attribute, small_spec(), {.seed = 3});
  auto bytes = bytes_of(model);
  {
    std::istringstream in("NOPE" + bytes.substr(4));
    EXPECT_THROW(LinearTextModel::load(in), DataError);
  }
  {
    std::istringstream in(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(LinearTextModel::load(in), DataError);
  }
  {
    std::istringstream in(bytes + "x");
    EXPECT_THROW(LinearTextModel::load(in), DataError);
  }
  EXPECT_THROW(LinearTextModel::load(std::filesystem::path("/nonexistent/model.bin")), DataError);
}

TEST(ClassifierBackendTest, WrapsModel) {
  auto model = std::make_shared<const LinearTextModel>(
      train(testing::marker_corpus(60, 8), LabelField::Attribute, small_spec(), {.seed = 3}));
  LinearModelClassifier clf(model, "attr.bin");
  EXPECT_EQ(clf.describe(), "attr.bin");
  std::vector<std::string> texts{"papi finna", "dad honestly"};
  auto out = clf.classify_batch(texts, "attribute");
  EXPECT_EQ(out.labels, model->predict(texts).labels);
}

TEST(F1Test, WorkedExample) {
  std::vector<std::string> truth{"A", "A", "B", "B"}, pred{"A", "B", "B", "B"};
  auto report = f1_score(truth, pred);
  EXPECT_NEAR(report.macro_f1, 100.0 * (2.0 / 3.0 + 0.8) / 2.0, 1e-12);
  EXPECT_EQ(format_fixed2(report.macro_f1), "73.33");
}

TEST(F1Test, MatchesCountingOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng() % 5;
    const std::size_t n = 1 + rng() % 40;
    std::vector<std::string> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = std::string(1, static_cast<char>('a' + rng() % k));
      pred[i] = std::string(1, static_cast<char>('a' + rng() % k));
    }
    ASSERT_NEAR(f1_score(truth, pred).macro_f1, testing::oracle_macro_f1(truth, pred), 1e-12);
  }
}

TEST(F1Test, PredictedOnlyClassesDoNotCountInMacro) {
  std::vector<std::string> truth{"A", "A"}, pred{"A", "Z"};
  auto r = f1_score(truth, pred);
  EXPECT_NEAR(r.macro_f1, 100.0 * 2.0 / 3.0, 1e-12);
  ASSERT_EQ(r.per_class.size(), 2u);
  EXPECT_EQ(r.per_class[1].label, "Z");
  EXPECT_EQ(r.per_class[1].support, 0u);
}

TEST(F1Test, Errors) {
  std::vector<std::string> a{"x"}, b{"x", "y"}, none;
  EXPECT_THROW(f1_score(a, b), DataError);
  EXPECT_THROW(f1_score(none, none), DataError);
}

TEST(F1Test, ConfusionMatrixCounts) {
  std::vector<std::string> truth{"b", "a", "a", "c"}, pred{"b", "b", "a", "a"};
  auto m = ConfusionMatrix::from_labels(truth, pred);
  EXPECT_EQ(m.labels(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(m.count(0, 1), 1u);
  EXPECT_EQ(m.row_total(0), 2u);
  EXPECT_EQ(m.column_total(0), 2u);
  EXPECT_EQ(m.total(), 4u);
}

}  // namespace
}  // namespace btp
