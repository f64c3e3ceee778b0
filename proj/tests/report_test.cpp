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

#include "btp/report.hpp"

#include <gtest/gtest.h>

#include <random>

#include <json.hpp>

#include "btp/back_translation.hpp"
#include "btp/error.hpp"
#include "btp/linear_model.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

namespace btp {
namespace {

EvaluationReport row(std::string method, double attr, double util, double meteor, double g,
                     bool original = false) {
  EvaluationReport r;
  r.method = std::move(method);
  r.attr_f1 = attr;
  r.util_f1 = util;
  r.meteor = meteor;
  r.gar = g;
  r.p_mean = p_mean(attr, util, meteor, g);
  r.original_row = original;
  r.records = 10;
  return r;
}

TEST(PMeanTest, ReferenceRows) {
  EXPECT_EQ(format_fixed2(p_mean(88.79, 75.13, 100.0, 48.40)), "58.69");
  EXPECT_NEAR(p_mean(66.65, 71.68, 27.61, 80.95), 53.3975, 1e-9);
  EXPECT_EQ(format_fixed2(p_mean(63.96, 51.70, 25.80, 91.79)), "51.33");
  EXPECT_NEAR(p_mean(82.37, 95.45, 52.42, 88.83), 63.5825, 1e-9);
}

TEST(PMeanTest, BoundsAndRange) {
  EXPECT_EQ(p_mean(100, 0, 0, 0), 0.0);
  EXPECT_EQ(p_mean(0, 100, 100, 100), 100.0);
  EXPECT_EQ(p_mean(0, 0, 0, 0), 25.0);
  EXPECT_THROW(p_mean(-0.1, 0, 0, 0), DataError);
  EXPECT_THROW(p_mean(0, 100.5, 0, 0), DataError);
  EXPECT_THROW(p_mean(0, 0, std::nan(""), 0), DataError);
}

TEST(FormatTest, HalfUpTwoDecimals) {
  EXPECT_EQ(format_fixed2(58.685), "58.69");
  EXPECT_EQ(format_fixed2(0.0), "0.00");
  EXPECT_EQ(format_fixed2(100.0), "100.00");
  EXPECT_EQ(format_fixed2(1.004999), "1.00");
  EXPECT_EQ(format_fixed2(1.005), "1.01");
  EXPECT_EQ(format_fixed2(-0.001), "0.00");
  EXPECT_THROW(format_fixed2(std::numeric_limits<double>::infinity()), DataError);
}

TEST(RenderTest, MarkdownBoldsBestTransformationValues) {
  std::vector<EvaluationReport> rows{row("Original", 88.79, 75.13, 100, 48.40, true),
                                     row("BT (ZH)", 66.65, 71.68, 27.61, 80.95),
                                     row("BT (DE)", 70.00, 72.00, 40.00, 80.00)};
  auto md = render(rows, ReportFormat::Markdown);
  EXPECT_EQ(md,
            "| Method | Attr.F1↓ | Util.F1↑ | METEOR↑ | GAR↑ | P_Mean↑ |\n"
            "|---|---:|---:|---:|---:|---:|\n"
            "| Original | 88.79 | 75.13 | 100.00 | 48.40 | 58.69 |\n"
            "| BT (ZH) | **66.65** | 71.68 | 27.61 | **80.95** | 53.40 |\n"
            "| BT (DE) | 70.00 | **72.00** | **40.00** | 80.00 | **55.50** |\n");
}

TEST(RenderTest, CsvQuotesAndRoundTrips) {
  std::vector<EvaluationReport> rows{row("a,\"b\"", 10, 20, 30, 40), row("plain", 1, 2, 3, 4)};
  auto csv = render(rows, ReportFormat::Csv);
  EXPECT_EQ(csv,
            "method,attr_f1,util_f1,meteor,gar,p_mean\n"
            "\"a,\"\"b\"\"\",10.00,20.00,30.00,40.00,45.00\n"
            "plain,1.00,2.00,3.00,4.00,27.00\n");
  auto back = parse_csv_report(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].method, "a,\"b\"");
  EXPECT_EQ(back[1].p_mean, 27.0);
}

TEST(RenderTest, CsvRoundTripAtTwoDecimals) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 100);
  std::vector<EvaluationReport> rows;
  for (int i = 0; i < 50; ++i)
    rows.push_back(row("m\n" + std::to_string(i), u(rng), u(rng), u(rng), u(rng)));
  auto back = parse_csv_report(render(rows, ReportFormat::Csv));
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].method, rows[i].method);
    EXPECT_EQ(format_fixed2(back[i].attr_f1), format_fixed2(rows[i].attr_f1));
    EXPECT_EQ(format_fixed2(back[i].util_f1), format_fixed2(rows[i].util_f1));
    EXPECT_EQ(format_fixed2(back[i].meteor), format_fixed2(rows[i].meteor));
    EXPECT_EQ(format_fixed2(back[i].gar), format_fixed2(rows[i].gar));
    EXPECT_EQ(format_fixed2(back[i].p_mean), format_fixed2(rows[i].p_mean));
  }
  EXPECT_THROW(parse_csv_report("method,x\n"), DataError);
  EXPECT_THROW(parse_csv_report("method,attr_f1,util_f1,meteor,gar,p_mean\nm,1,2,3,4\n"), DataError);
  EXPECT_THROW(parse_csv_report("method,attr_f1,util_f1,meteor,gar,p_mean\nm,1,2,3,4,x\n"), DataError);
}

TEST(RenderTest, JsonArrayAndErrors) {
  std::vector<EvaluationReport> rows{row("x", 10, 20, 30, 40)};
  auto parsed = nlohmann::json::parse(render(rows, ReportFormat::Json));
  ASSERT_TRUE(parsed.is_array());
  EXPECT_EQ(parsed[0]["method"], "x");
  EXPECT_THROW(render({}, ReportFormat::Markdown), UsageError);
  EXPECT_EQ(parse_report_format("md"), ReportFormat::Markdown);
  EXPECT_THROW(parse_report_format("xlsx"), UsageError);
}

TEST(ReportJsonTest, RoundTripAndValidation) {
  auto r = row("BT (ZH)", 66.65, 71.68, 27.61, 80.95);
  r.provenance.pivot_chain = "zh";
  r.provenance.seeds["attribute"] = 7;
  r.attr_per_class.push_back({"A", 0.5, 0.25, 1.0 / 3.0, 4});
  auto text = report_to_json(r);
  auto back = report_from_json(text);
  EXPECT_EQ(report_to_json(back), text);
  EXPECT_EQ(back.provenance, r.provenance);
  EXPECT_EQ(back.p_mean, r.p_mean);

  auto j = nlohmann::json::parse(text);
  j["p_mean"] = 99.0;
  EXPECT_THROW(report_from_json(j.dump()), DataError);
  EXPECT_THROW(report_from_json("{"), DataError);
  EXPECT_THROW(report_from_json("{}"), DataError);
}

TEST(ReportFileTest, SaveLoad) {
  testing::TempDir dir;
  auto r = row("m", 1, 2, 3, 4);
  save_report(r, dir.path() / "r.json");
  EXPECT_EQ(report_to_json(load_report(dir.path() / "r.json")), report_to_json(r));
  EXPECT_THROW(load_report(dir.path() / "missing.json"), DataError);
}

class EvaluateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    FeatureSpec spec;
    spec.hash_bits = 14;
    auto train_set = testing::marker_corpus(200, 21);
    attr_ = std::make_shared<LinearModelClassifier>(std::make_shared<const LinearTextModel>(
        train(train_set, LabelField::Attribute, spec, {.seed = 1})));
    util_ = std::make_shared<LinearModelClassifier>(std::make_shared<const LinearTextModel>(
        train(train_set, LabelField::Utility, spec, {.seed = 2})));
    test_ = testing::marker_corpus(60, 22, "t");
  }
  std::shared_ptr<LinearModelClassifier> attr_, util_;
  Corpus test_;
};

TEST_F(EvaluateTest, IdentityTransformMatchesOriginal) {
  auto acceptable = constant_acceptability(1.0);
  auto original = evaluate(test_, test_, *attr_, *util_, *acceptable, {.method = "Original", .original_row = true});
  auto same = evaluate(test_, test_, *attr_, *util_, *acceptable, {.method = "identity"});
  EXPECT_EQ(original.attr_f1, same.attr_f1);
  EXPECT_EQ(original.util_f1, same.util_f1);
  EXPECT_EQ(same.gar, 100.0);
  EXPECT_GE(same.meteor, 99.0);
  EXPECT_EQ(original.meteor, 100.0);
  EXPECT_EQ(same.records, test_.size());
  EXPECT_EQ(same.provenance.seeds.at("attribute_model"), 1u);
  EXPECT_EQ(same.provenance.seeds.at("utility_model"), 2u);
  EXPECT_EQ(same.provenance.backends.at("acceptability"), acceptable->describe());
  EXPECT_TRUE(same.provenance.hashes.contains("meteor"));
  EXPECT_EQ(report_to_json(same),
            report_to_json(evaluate(test_, test_, *attr_, *util_, *acceptable, {.method = "identity"})));
}

TEST_F(EvaluateTest, CollapseLowersAttributeOnly) {
  LanguageRegistry registry = LanguageRegistry::with_defaults();
  auto backend = dictionary_backend(testing::collapsing_lexicon(registry));
  auto transformed = transform_corpus(test_, PivotChain::parse("zhsim", registry), *backend).corpus;
  auto acceptable = constant_acceptability(1.0);
  auto before = evaluate(test_, test_, *attr_, *util_, *acceptable, {.method = "Original", .original_row = true});
  auto after = evaluate(test_, transformed, *attr_, *util_, *acceptable, {.method = "BT"});
  EXPECT_GE(before.attr_f1, 95.0);
  EXPECT_GE(before.attr_f1 - after.attr_f1, 20.0);
  EXPECT_LE(std::abs(before.util_f1 - after.util_f1), 2.0);
  EXPECT_LT(after.meteor, 100.0);
}

TEST_F(EvaluateTest, RejectsMismatchedCorpora) {
  auto acceptable = constant_acceptability(1.0);
  auto other = testing::marker_corpus(60, 22, "x");
  EXPECT_THROW(evaluate(test_, other, *attr_, *util_, *acceptable, {}), DataError);
  auto unlabeled = test_;
  unlabeled.records[0].utility.reset();
  EXPECT_THROW(evaluate(unlabeled, test_, *attr_, *util_, *acceptable, {}), DataError);
}

}  // namespace
}  // namespace btp
