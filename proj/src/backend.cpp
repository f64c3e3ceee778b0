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

#include <cmath>
#include <fstream>
#include <sstream>

#include "btp/error.hpp"

namespace btp {

namespace {

class IdentityBackend final : public TranslationBackend {
 public:
  std::vector<std::string> translate_batch(std::span<const std::string> texts, const LanguageCode&,
                                           const LanguageCode&) const override {
    return {texts.begin(), texts.end()};
  }
  std::string describe() const override { return "identity"; }
};

class DictionaryBackend final : public TranslationBackend {
 public:
  explicit DictionaryBackend(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

  std::vector<std::string> translate_batch(std::span<const std::string> texts,
                                           const LanguageCode& source,
                                           const LanguageCode& target) const override {
    std::vector<std::string> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
      std::istringstream tokens(text);
      std::string token, joined;
      while (tokens >> token) {
        if (!joined.empty()) joined += ' ';
        auto mapped = lexicon_.lookup(source, target, token);
        joined += mapped ? std::string(*mapped) : token;
      }
      out.push_back(std::move(joined));
    }
    return out;
  }

  std::string describe() const override {
    return "dictionary(" + std::to_string(lexicon_.size()) + " entries)";
  }

 private:
  Lexicon lexicon_;
};

class ConstantAcceptability final : public AcceptabilityBackend {
 public:
  explicit ConstantAcceptability(double p) : p_(p) {}

  std::vector<double> score_batch(std::span<const std::string> texts) const override {
    return std::vector<double>(texts.size(), p_);
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "const:" << p_;
    return s.str();
  }

 private:
  double p_;
};

class ScriptedAcceptability final : public AcceptabilityBackend {
 public:
  explicit ScriptedAcceptability(std::vector<double> scores) : scores_(std::move(scores)) {}

  std::vector<double> score_batch(std::span<const std::string> texts) const override {
    if (texts.size() > scores_.size()) {
      throw BackendError("scripted acceptability has " + std::to_string(scores_.size()) +
                         " scores but was asked for " + std::to_string(texts.size()));
    }
    return {scores_.begin(), scores_.begin() + static_cast<std::ptrdiff_t>(texts.size())};
  }
  std::string describe() const override {
    return "script(" + std::to_string(scores_.size()) + " scores)";
  }

 private:
  std::vector<double> scores_;
};

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream s;
    s << what << " probability " << p << " outside [0, 1]";
    throw BackendError(s.str());
  }
}

}  // namespace

void check_translation(const std::vector<std::string>& output, std::size_t expected) {
  if (output.size() != expected) {
    throw BackendError("protocol violation: translation returned " + std::to_string(output.size()) +
                       " texts for " + std::to_string(expected) + " inputs");
  }
}

void check_classification(const Classification& output, std::size_t expected) {
  if (output.labels.size() != expected || output.probabilities.size() != expected) {
    throw BackendError("protocol violation: classification returned " +
                       std::to_string(output.labels.size()) + " labels and " +
                       std::to_string(output.probabilities.size()) + " probability rows for " +
                       std::to_string(expected) + " inputs");
  }
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& row = output.probabilities[i];
    if (row.empty()) throw BackendError("protocol violation: empty probability row " + std::to_string(i));
    double sum = 0.0;
    for (double p : row) {
      check_probability(p, "class");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw BackendError("protocol violation: probability row " + std::to_string(i) +
                         " sums to " + std::to_string(sum));
    }
  }
}

void check_acceptability(const std::vector<double>& output, std::size_t expected) {
  if (output.size() != expected) {
    throw BackendError("protocol violation: acceptability returned " + std::to_string(output.size()) +
                       " scores for " + std::to_string(expected) + " inputs");
  }
  for (double p : output) check_probability(p, "acceptability");
}

std::shared_ptr<const TranslationBackend> identity_backend() {
  static const auto instance = std::make_shared<const IdentityBackend>();
  return instance;
}

void Lexicon::add(const LanguageCode& source, const LanguageCode& target, std::string from,
                  std::string to) {
  entries_[{source.str(), target.str(), std::move(from)}] = std::move(to);
}

std::optional<std::string_view> Lexicon::lookup(const LanguageCode& source,
                                                const LanguageCode& target,
                                                std::string_view token) const {
  auto it = entries_.find(std::make_tuple(source.str(), target.str(), std::string(token)));
  if (it == entries_.end()) return std::nullopt;
  return std::string_view(it->second);
}

Lexicon Lexicon::load(const std::filesystem::path& path, LanguageRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon " + path.string());
  Lexicon lexicon;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string src, tgt, from, to, extra;
    if (!(fields >> src >> tgt >> from >> to) || (fields >> extra)) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected \"source target from to\"");
    }
    registry.add(src);
    registry.add(tgt);
    lexicon.add(registry.parse(src), registry.parse(tgt), from, to);
  }
  return lexicon;
}

std::shared_ptr<const TranslationBackend> dictionary_backend(Lexicon lexicon) {
  return std::make_shared<const DictionaryBackend>(std::move(lexicon));
}

std::shared_ptr<const AcceptabilityBackend> constant_acceptability(double probability) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw UsageError("constant acceptability must lie in [0, 1]");
  return std::make_shared<const ConstantAcceptability>(probability);
}

std::shared_ptr<const AcceptabilityBackend> scripted_acceptability(std::vector<double> scores) {
  for (double p : scores) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("scripted acceptability scores must lie in [0, 1]");
  }
  return std::make_shared<const ScriptedAcceptability>(std::move(scores));
}

std::shared_ptr<const AcceptabilityBackend> load_scripted_acceptability(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open acceptability script " + path.string());
  std::vector<double> scores;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      double p = std::stod(line, &used);
      if (line.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("");
      scores.push_back(p);
    } catch (const std::logic_error&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": not a probability");
    }
  }
  try {
    return scripted_acceptability(std::move(scores));
  } catch (const UsageError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace btp
