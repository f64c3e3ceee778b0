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

// btp: back-translation privacy pipeline command-line tool.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "btp/back_translation.hpp"
#include "btp/backend.hpp"
#include "btp/corpus.hpp"
#include "btp/error.hpp"
#include "btp/http_backend.hpp"
#include "btp/linear_model.hpp"
#include "btp/report.hpp"

namespace {

using namespace btp;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kBackend = 3 };

bool is_url(const std::string& s) { return s.starts_with("http://") || s.starts_with("https://"); }

bool strip_prefix(std::string& s, std::string_view prefix) {
  if (!s.starts_with(prefix)) return false;
  s.erase(0, prefix.size());
  return true;
}

std::string backend_url_or_env(const std::string& given, const char* option) {
  if (!given.empty()) return given;
  if (auto env = default_backend_url()) return *env;
  throw UsageError(std::string(option) + " not given and BT_BACKEND_URL is not set");
}

CorpusFormat corpus_format(const std::string& name, const std::filesystem::path& path) {
  return name.empty() ? format_from_extension(path) : parse_corpus_format(name);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DataError("write failure on " + path);
}

struct HttpSettings {
  std::size_t batch_size = 32;
  unsigned retries = 3;
};

void add_http_options(CLI::App* cmd, HttpSettings& http) {
  cmd->add_option("--batch-size", http.batch_size, "Texts per backend request")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--retries", http.retries, "Retries per failed backend request")->capture_default_str();
}

struct TransformArgs {
  std::string input, pivot, backend, output, provenance, format;
  std::vector<std::string> languages;
  HttpSettings http;
};

int run_transform(const TransformArgs& a) {
  auto registry = LanguageRegistry::with_defaults();
  for (const auto& code : a.languages) registry.add(code);

  std::string spec = backend_url_or_env(a.backend, "--backend");
  std::shared_ptr<const TranslationBackend> backend;
  if (spec == "identity") {
    backend = identity_backend();
  } else if (strip_prefix(spec, "dict:")) {
    backend = dictionary_backend(Lexicon::load(spec, registry));
  } else if (is_url(spec)) {
    backend = http_backend(spec, a.http.batch_size, a.http.retries);
  } else {
    throw UsageError("--backend must be a URL, identity or dict:LEXFILE, got \"" + spec + "\"");
  }
  const auto pivot = PivotChain::parse(a.pivot, registry);
  const auto format = corpus_format(a.format, a.input);

  auto corpus = load_corpus(a.input, format);
  auto result = transform_corpus(corpus, pivot, *backend);
  write_corpus(result.corpus, std::filesystem::path(a.output), corpus_format(a.format, a.output));
  if (!a.provenance.empty()) write_provenance(result.provenance, std::filesystem::path(a.provenance));
  std::cerr << "transformed " << result.corpus.size() << " records via " << pivot.to_string() << " ("
            << backend->describe() << ")\n";
  return kOk;
}

struct TrainArgs {
  std::string input, label, model, format;
  std::uint64_t seed = 0;
  int epochs = 5;
  int hash_bits = 18;
};

int run_train(const TrainArgs& a) {
  const auto field = parse_label_field(a.label);
  FeatureSpec spec;
  spec.hash_bits = a.hash_bits;
  spec.validate();
  auto corpus = load_corpus(a.input, corpus_format(a.format, a.input));
  auto model = train(corpus, field, spec, {.seed = a.seed, .epochs = a.epochs});
  model.save(std::filesystem::path(a.model));
  std::cerr << "trained " << a.label << " model on " << corpus.size() << " records, labels:";
  for (const auto& l : model.labels()) std::cerr << ' ' << l;
  std::cerr << '\n';
  return kOk;
}

struct EvaluateArgs {
  std::string original, transformed, attr_model, util_model, acceptability, method, out, format, pivot;
  std::string stages = "exact,stem";
  std::string synonyms;
  double threshold = 0.5;
  bool original_row = false;
  bool pooled = false;
  HttpSettings http;
};

std::shared_ptr<const ClassifierBackend> load_classifier(const std::string& spec, const HttpSettings& http) {
  if (is_url(spec)) return http_backend(spec, http.batch_size, http.retries);
  const std::filesystem::path path(spec);
  return std::make_shared<LinearModelClassifier>(
      std::make_shared<const LinearTextModel>(LinearTextModel::load(path)), path.filename().string());
}

std::shared_ptr<const AcceptabilityBackend> load_acceptability(const std::string& given, const HttpSettings& http) {
  std::string spec = backend_url_or_env(given, "--acceptability");
  if (strip_prefix(spec, "const:")) {
    std::size_t used = 0;
    double p = -1;
    try {
      p = std::stod(spec, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != spec.size()) throw UsageError("const: needs a probability, got \"" + spec + "\"");
    try {
      return constant_acceptability(p);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (strip_prefix(spec, "script:")) return load_scripted_acceptability(spec);
  if (is_url(spec)) return http_backend(spec, http.batch_size, http.retries);
  throw UsageError("--acceptability must be a URL, const:P or script:FILE, got \"" + spec + "\"");
}

int run_evaluate(const EvaluateArgs& a) {
  EvaluateOptions options;
  options.method = a.method;
  options.original_row = a.original_row;
  options.gar.threshold = a.threshold;
  options.meteor_aggregation = a.pooled ? CorpusAggregation::Pooled : CorpusAggregation::MacroAverage;
  options.meteor.stages.clear();
  for (const auto& name : CLI::detail::split(a.stages, ',')) options.meteor.stages.push_back(parse_match_stage(name));
  if (!a.synonyms.empty()) options.meteor.synonym_lexicon = a.synonyms;
  options.meteor.validate();
  options.gar.validate();
  if (!a.pivot.empty()) options.provenance.pivot_chain = a.pivot;

  auto attr = load_classifier(a.attr_model, a.http);
  auto util = load_classifier(a.util_model, a.http);
  auto acceptability = load_acceptability(a.acceptability, a.http);
  auto original = load_corpus(a.original, corpus_format(a.format, a.original), SplitRole::Test);
  auto transformed = a.original_row && a.transformed.empty()
                         ? original
                         : load_corpus(a.transformed, corpus_format(a.format, a.transformed));

  auto report = evaluate(original, transformed, *attr, *util, *acceptability, options);
  write_text(a.out, report_to_json(report));
  std::cerr << a.method << ": attr " << format_fixed2(report.attr_f1) << " util " << format_fixed2(report.util_f1)
            << " meteor " << format_fixed2(report.meteor) << " gar " << format_fixed2(report.gar) << " p_mean "
            << format_fixed2(report.p_mean) << '\n';
  return kOk;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string format = "markdown";
  std::string out;
};

int run_report(const ReportArgs& a) {
  const auto format = parse_report_format(a.format);
  std::vector<EvaluationReport> reports;
  for (const auto& path : a.inputs) reports.push_back(load_report(path));
  write_text(a.out, render(reports, format));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Back-translation text anonymization: transform, train, evaluate, report"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "btp 0.1.0");

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Back-translate a corpus through pivot languages");
  transform->add_option("--input", ta.input, "Input corpus (.jsonl or .tsv)")->required();
  transform->add_option("--pivot", ta.pivot, "Pivot chain, e.g. zh or zh,fr")->required();
  transform->add_option("--backend", ta.backend, "URL, identity or dict:LEXFILE (default: $BT_BACKEND_URL)");
  transform->add_option("--output", ta.output, "Transformed corpus")->required();
  transform->add_option("--provenance", ta.provenance, "JSONL sidecar with every intermediate translation");
  transform->add_option("--format", ta.format, "jsonl or tsv (default: from file extension)");
  transform->add_option("--language", ta.languages, "Extra language code to accept (repeatable)");
  add_http_options(transform, ta.http);

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a linear text classifier");
  train_cmd->add_option("--input", tr.input, "Training corpus")->required();
  train_cmd->add_option("--label", tr.label, "attribute or utility")->required();
  train_cmd->add_option("--seed", tr.seed, "Shuffle seed")->capture_default_str();
  train_cmd->add_option("--epochs", tr.epochs, "Training epochs")->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--hash-bits", tr.hash_bits, "log2 of the feature space size")->capture_default_str();
  train_cmd->add_option("--model", tr.model, "Output model file")->required();
  train_cmd->add_option("--format", tr.format, "jsonl or tsv (default: from file extension)");

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a transformed test corpus");
  evaluate_cmd->add_option("--original", ev.original, "Original labeled test corpus")->required();
  evaluate_cmd->add_option("--transformed", ev.transformed, "Transformed test corpus");
  evaluate_cmd->add_option("--attr-model", ev.attr_model, "Attribute model file or classifier URL")->required();
  evaluate_cmd->add_option("--util-model", ev.util_model, "Utility model file or classifier URL")->required();
  evaluate_cmd->add_option("--acceptability", ev.acceptability, "URL, const:P or script:FILE (default: $BT_BACKEND_URL)");
  evaluate_cmd->add_option("--method-name", ev.method, "Row label, e.g. \"BT (ZH)\"")->required();
  evaluate_cmd->add_option("--out", ev.out, "Report JSON (default: stdout)");
  evaluate_cmd->add_option("--pivot", ev.pivot, "Pivot chain to record in provenance");
  evaluate_cmd->add_option("--threshold", ev.threshold, "GAR acceptability threshold")->capture_default_str();
  evaluate_cmd->add_option("--stages", ev.stages, "METEOR stages")->capture_default_str();
  evaluate_cmd->add_option("--synonyms", ev.synonyms, "Synonym lexicon for the synonym stage");
  evaluate_cmd->add_flag("--original-row", ev.original_row, "Evaluate the untransformed corpus (METEOR = 100)");
  evaluate_cmd->add_flag("--pooled", ev.pooled, "Pool METEOR statistics instead of averaging sentences");
  evaluate_cmd->add_option("--format", ev.format, "jsonl or tsv (default: from file extension)");
  add_http_options(evaluate_cmd, ev.http);

  ReportArgs rp;
  auto* report_cmd = app.add_subcommand("report", "Render evaluation reports as a table");
  report_cmd->add_option("--inputs", rp.inputs, "Report JSON files")->required();
  report_cmd->add_option("--format", rp.format, "markdown, csv or json")->capture_default_str();
  report_cmd->add_option("--out", rp.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*transform) return run_transform(ta);
    if (*train_cmd) return run_train(tr);
    if (*evaluate_cmd) {
      if (!ev.original_row && ev.transformed.empty()) throw UsageError("--transformed is required");
      return run_evaluate(ev);
    }
    if (*report_cmd) return run_report(rp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const BackendError& e) {
    std::cerr << "backend error: " << e.what() << '\n';
    return kBackend;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
