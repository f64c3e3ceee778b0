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

#include "btp/fluency.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "btp/error.hpp"

namespace btp {
namespace {

const std::vector<std::string> kTexts{"one", "two", "three", "four"};

class ThrowingAcceptability final : public AcceptabilityBackend {
 public:
  std::vector<double> score_batch(std::span<const std::string>) const override {
    throw BackendError("down");
  }
  std::string describe() const override { return "throwing"; }
};

TEST(GarTest, ConstantBackends) {
  EXPECT_EQ(gar(kTexts, *constant_acceptability(1.0)), 100.0);
  EXPECT_EQ(gar(kTexts, *constant_acceptability(0.0)), 0.0);
  EXPECT_EQ(gar(kTexts, *constant_acceptability(0.5)), 100.0);
}

TEST(GarTest, ScriptedCountsThreshold) {
  EXPECT_EQ(gar(kTexts, *scripted_acceptability({0.9, 0.1, 0.6, 0.49})), 50.0);
  EXPECT_EQ(gar(kTexts, *scripted_acceptability({0.9, 0.1, 0.6, 0.49}), {.threshold = 0.05}), 100.0);
}

TEST(GarTest, MonotoneAndPermutationInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> s(kTexts.size());
    for (auto& x : s) x = u(rng);
    double base = gar(kTexts, *scripted_acceptability(s));
    auto raised = s;
    raised[rng() % raised.size()] = 1.0;
    EXPECT_GE(gar(kTexts, *scripted_acceptability(raised)), base);
    auto shuffled = s;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(gar(kTexts, *scripted_acceptability(shuffled)), base);
  }
}

TEST(GarTest, Errors) {
  std::vector<std::string> none;
  EXPECT_THROW(gar(none, *constant_acceptability(1.0)), DataError);
  EXPECT_THROW(gar(kTexts, *constant_acceptability(1.0), {.threshold = 0.0}), UsageError);
  EXPECT_THROW(gar(kTexts, *constant_acceptability(1.0), {.threshold = 1.0}), UsageError);
  EXPECT_THROW(gar(kTexts, ThrowingAcceptability{}), BackendError);
  EXPECT_THROW(gar(kTexts, *scripted_acceptability({0.5})), BackendError);
}

}  // namespace
}  // namespace btp
