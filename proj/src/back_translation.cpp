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

#include "btp/back_translation.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "btp/error.hpp"

namespace btp {

namespace {

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\n\r\f\v") == std::string_view::npos;
}

std::vector<TransformResult> run_chain(std::span<const std::string> ids,
                                       std::span<const std::string> texts, const PivotChain& pivot,
                                       const TranslationBackend& backend) {
  std::vector<TransformResult> results;
  results.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i)
    results.push_back({ids[i], texts[i], texts[i], pivot, {}, false});

  const auto en = LanguageCode::english();
  std::vector<std::pair<LanguageCode, LanguageCode>> plan;
  for (const auto& hop : pivot.hops()) {
    plan.emplace_back(en, hop);
    plan.emplace_back(hop, en);
  }

  // Indices of results still being translated, and their current text.
  std::vector<std::size_t> live(results.size());
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;
  std::vector<std::string> current(texts.begin(), texts.end());

  for (std::size_t step = 0; step < plan.size() && !live.empty(); ++step) {
    const auto& [src, tgt] = plan[step];
    std::vector<std::string> output;
    try {
      output = backend.translate_batch(current, src, tgt);
      check_translation(output, current.size());
    } catch (const Error& e) {
      throw BackendError("translation step " + std::to_string(step + 1) + "/" +
                         std::to_string(plan.size()) + " (" + src.str() + "->" + tgt.str() +
                         "): " + e.what());
    }

    std::vector<std::size_t> next_live;
    std::vector<std::string> next_current;
    for (std::size_t k = 0; k < live.size(); ++k) {
      auto& r = results[live[k]];
      r.steps.push_back({src, tgt, output[k]});
      if (is_blank(output[k]) && !is_blank(current[k])) {
        r.degenerate = true;
        continue;
      }
      next_live.push_back(live[k]);
      next_current.push_back(std::move(output[k]));
    }
    live = std::move(next_live);
    current = std::move(next_current);
  }

  for (std::size_t k = 0; k < live.size(); ++k) results[live[k]].transformed = std::move(current[k]);
  return results;
}

}  // namespace

PivotChain::PivotChain(std::vector<LanguageCode> hops) : hops_(std::move(hops)) {
  if (hops_.empty()) throw UsageError("pivot chain must contain at least one language");
  for (const auto& hop : hops_) {
    if (hop.is_english()) throw UsageError("pivot chain may not contain \"en\"");
  }
}

PivotChain PivotChain::parse(std::string_view spec, const LanguageRegistry& registry) {
  std::vector<LanguageCode> hops;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto comma = spec.find(',', start);
    auto item = spec.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item.empty()) throw UsageError("empty language in pivot chain \"" + std::string(spec) + "\"");
    hops.push_back(registry.parse(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return PivotChain(std::move(hops));
}

std::string PivotChain::to_string() const {
  std::string out;
  for (const auto& hop : hops_) {
    if (!out.empty()) out += ',';
    out += hop.str();
  }
  return out;
}

std::vector<TransformResult> back_translate(std::span<const std::string> texts,
                                            const PivotChain& pivot,
                                            const TranslationBackend& backend) {
  for (const auto& t : texts) {
    if (is_blank(t)) throw UsageError("back_translate requires non-blank input texts");
  }
  std::vector<std::string> ids(texts.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = std::to_string(i);
  return run_chain(ids, texts, pivot, backend);
}

TransformedCorpus transform_corpus(const Corpus& corpus, const PivotChain& pivot,
                                   const TranslationBackend& backend) {
  validate_corpus(corpus);
  std::vector<std::string> ids, texts;
  ids.reserve(corpus.size());
  texts.reserve(corpus.size());
  for (const auto& r : corpus.records) {
    ids.push_back(r.id);
    texts.push_back(r.text);
  }
  auto results = run_chain(ids, texts, pivot, backend);

  std::vector<std::string> degenerate;
  for (const auto& r : results) {
    if (r.degenerate) degenerate.push_back(r.id);
  }
  if (!degenerate.empty()) {
    std::string list;
    for (const auto& id : degenerate) list += (list.empty() ? "\"" : ", \"") + id + "\"";
    throw DataError("back-translation produced empty output for " + std::to_string(degenerate.size()) +
                    " record(s): " + list);
  }

  TransformedCorpus out{corpus, std::move(results)};
  for (std::size_t i = 0; i < out.corpus.records.size(); ++i)
    out.corpus.records[i].text = out.provenance[i].transformed;
  return out;
}

void write_provenance(std::span<const TransformResult> results, std::ostream& out) {
  for (const auto& r : results) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    auto chain = nlohmann::ordered_json::array();
    for (const auto& hop : r.chain.hops()) chain.push_back(hop.str());
    obj["chain"] = std::move(chain);
    auto steps = nlohmann::ordered_json::array();
    for (const auto& s : r.steps) {
      nlohmann::ordered_json step;
      step["src"] = s.source.str();
      step["tgt"] = s.target.str();
      step["text"] = s.text;
      steps.push_back(std::move(step));
    }
    obj["steps"] = std::move(steps);
    if (r.degenerate) obj["degenerate"] = true;
    out << obj.dump() << '\n';
  }
}

void write_provenance(std::span<const TransformResult> results, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_provenance(results, out);
  out.flush();
  if (!out) throw DataError("write failure on " + path.string());
}

}  // namespace btp
