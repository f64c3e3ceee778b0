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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <string>
#include <vector>

#include "btp/back_translation.hpp"
#include "btp/backend.hpp"
#include "btp/corpus.hpp"
#include "btp/error.hpp"
#include "btp/f1.hpp"
#include "btp/http_backend.hpp"
#include "btp/linear_model.hpp"
#include "btp/meteor.hpp"
#include "btp/porter_stemmer.hpp"
#include "btp/report.hpp"
#include "btp/text.hpp"

namespace py = pybind11;
using namespace btp;

namespace {

bool strip_prefix(std::string& s, std::string_view prefix) {
  if (!s.starts_with(prefix)) return false;
  s.erase(0, prefix.size());
  return true;
}

bool is_url(const std::string& s) { return s.starts_with("http://") || s.starts_with("https://"); }

std::shared_ptr<const TranslationBackend> translation_backend(std::string spec, LanguageRegistry& registry) {
  if (spec == "identity") return identity_backend();
  if (strip_prefix(spec, "dict:")) return dictionary_backend(Lexicon::load(spec, registry));
  if (is_url(spec)) return http_backend(spec);
  throw UsageError("backend must be a URL, identity or dict:LEXFILE, got \"" + spec + "\"");
}

std::shared_ptr<const AcceptabilityBackend> acceptability_backend(const py::object& spec) {
  if (py::isinstance<py::float_>(spec) || py::isinstance<py::int_>(spec))
    return constant_acceptability(spec.cast<double>());
  if (py::isinstance<py::list>(spec) || py::isinstance<py::tuple>(spec))
    return scripted_acceptability(spec.cast<std::vector<double>>());
  auto s = spec.cast<std::string>();
  if (strip_prefix(s, "const:")) return constant_acceptability(std::stod(s));
  if (strip_prefix(s, "script:")) return load_scripted_acceptability(s);
  if (is_url(s)) return http_backend(s);
  throw UsageError("acceptability must be a probability, a list of scores, const:P, script:FILE or a URL");
}

std::shared_ptr<const ClassifierBackend> classifier(const py::object& spec) {
  if (py::isinstance<LinearTextModel>(spec))
    return std::make_shared<LinearModelClassifier>(std::make_shared<const LinearTextModel>(spec.cast<LinearTextModel>()));
  auto s = spec.cast<std::string>();
  if (is_url(s)) return http_backend(s);
  const std::filesystem::path path(s);
  return std::make_shared<LinearModelClassifier>(std::make_shared<const LinearTextModel>(LinearTextModel::load(path)),
                                                 path.filename().string());
}

py::dict record_dict(const TextRecord& r) {
  py::dict d;
  d["id"] = r.id;
  d["text"] = r.text;
  d["attribute"] = r.attribute ? py::cast(*r.attribute) : py::none();
  d["utility"] = r.utility ? py::cast(*r.utility) : py::none();
  return d;
}

Corpus corpus_from(const py::iterable& records) {
  std::vector<TextRecord> out;
  for (const auto& item : records) {
    auto d = item.cast<py::dict>();
    TextRecord r;
    r.id = d["id"].cast<std::string>();
    r.text = d["text"].cast<std::string>();
    if (d.contains("attribute") && !d["attribute"].is_none()) r.attribute = d["attribute"].cast<std::string>();
    if (d.contains("utility") && !d["utility"].is_none()) r.utility = d["utility"].cast<std::string>();
    out.push_back(std::move(r));
  }
  return make_corpus(std::move(out));
}

py::list records_list(const Corpus& c) {
  py::list out;
  for (const auto& r : c.records) out.append(record_dict(r));
  return out;
}

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Back-translation text anonymization and its evaluation metrics";

  // Registered base first so that the more specific translators win.
  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<UsageError>(m, "UsageError", error.ptr());
  py::register_exception<DataError>(m, "DataError", error.ptr());
  py::register_exception<BackendError>(m, "BackendError", error.ptr());

  m.def("tokenize", &tokenize, py::arg("text"));
  m.def("porter_stem", &porter_stem, py::arg("word"));

  m.def("load_corpus", [](const std::filesystem::path& path) {
    return records_list(load_corpus(path, format_from_extension(path)));
  }, py::arg("path"), "Records of a .jsonl or .tsv corpus as dicts.");
  m.def("write_corpus", [](const py::iterable& records, const std::filesystem::path& path) {
    write_corpus(corpus_from(records), path, format_from_extension(path));
  }, py::arg("records"), py::arg("path"));

  m.def("back_translate", [](const std::vector<std::string>& texts, const std::string& pivot,
                             const std::string& backend, const std::vector<std::string>& languages) {
    auto registry = LanguageRegistry::with_defaults();
    for (const auto& code : languages) registry.add(code);
    auto b = translation_backend(backend, registry);
    std::vector<std::string> out;
    for (auto& r : back_translate(texts, PivotChain::parse(pivot, registry), *b)) out.push_back(std::move(r.transformed));
    return out;
  }, py::arg("texts"), py::arg("pivot"), py::arg("backend") = "identity",
     py::arg("languages") = std::vector<std::string>{},
     "Round-trips each text en -> pivot -> en (per hop) and returns the English results.");

  m.def("transform_corpus", [](const py::iterable& records, const std::string& pivot, const std::string& backend) {
    auto registry = LanguageRegistry::with_defaults();
    auto b = translation_backend(backend, registry);
    return records_list(transform_corpus(corpus_from(records), PivotChain::parse(pivot, registry), *b).corpus);
  }, py::arg("records"), py::arg("pivot"), py::arg("backend") = "identity");

  m.def("meteor_sentence", [](const std::string& hyp, const std::string& ref, double alpha, double beta,
                              double gamma, const std::vector<std::string>& stages) {
    MeteorParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.stages.clear();
    for (const auto& s : stages) p.stages.push_back(parse_match_stage(s));
    return meteor_sentence(hyp, ref, p);
  }, py::arg("hypothesis"), py::arg("reference"), py::arg("alpha") = 0.9, py::arg("beta") = 3.0,
     py::arg("gamma") = 0.5, py::arg("stages") = std::vector<std::string>{"exact", "stem"});
  m.def("meteor_corpus", [](const std::vector<std::pair<std::string, std::string>>& pairs, bool pooled) {
    return meteor_corpus(pairs, {}, pooled ? CorpusAggregation::Pooled : CorpusAggregation::MacroAverage);
  }, py::arg("pairs"), py::arg("pooled") = false, "Pairs are (original, transformed); returns 0-100.");

  m.def("f1_score", [](const std::vector<std::string>& truth, const std::vector<std::string>& predicted) {
    auto r = f1_score(truth, predicted);
    py::dict per_class;
    for (const auto& c : r.per_class) {
      py::dict d;
      d["precision"] = c.precision;
      d["recall"] = c.recall;
      d["f1"] = c.f1;
      d["support"] = c.support;
      per_class[py::str(c.label)] = d;
    }
    py::dict out;
    out["macro_f1"] = r.macro_f1;
    out["per_class"] = per_class;
    return out;
  }, py::arg("truth"), py::arg("predicted"));

  m.def("gar", [](const std::vector<std::string>& texts, const py::object& acceptability, double threshold) {
    return gar(texts, *acceptability_backend(acceptability), {.threshold = threshold});
  }, py::arg("texts"), py::arg("acceptability"), py::arg("threshold") = 0.5);

  m.def("p_mean", &p_mean, py::arg("attr"), py::arg("util"), py::arg("meteor"), py::arg("gar"));
  m.def("format_fixed2", &format_fixed2, py::arg("value"));

  py::class_<LinearTextModel>(m, "LinearTextModel")
      .def_static("train", [](const py::iterable& records, const std::string& label, std::uint64_t seed, int epochs,
                              int hash_bits) {
        FeatureSpec spec;
        spec.hash_bits = hash_bits;
        spec.validate();
        return train(corpus_from(records), parse_label_field(label), spec, {.seed = seed, .epochs = epochs});
      }, py::arg("records"), py::arg("label"), py::arg("seed") = 0, py::arg("epochs") = 5, py::arg("hash_bits") = 18)
      .def_static("load", py::overload_cast<const std::filesystem::path&>(&LinearTextModel::load), py::arg("path"))
      .def("save", py::overload_cast<const std::filesystem::path&>(&LinearTextModel::save, py::const_), py::arg("path"))
      .def_property_readonly("labels", &LinearTextModel::labels)
      .def_property_readonly("seed", &LinearTextModel::seed)
      .def_property_readonly("epochs", &LinearTextModel::epochs)
      .def("scores", &LinearTextModel::scores, py::arg("text"))
      .def("predict", [](const LinearTextModel& model, const std::vector<std::string>& texts) {
        auto c = model.predict(texts);
        return py::make_tuple(c.labels, c.probabilities);
      }, py::arg("texts"), "Returns (labels, probabilities).");

  m.def("evaluate", [](const py::iterable& original, const py::iterable& transformed, const py::object& attr_model,
                       const py::object& util_model, const py::object& acceptability, const std::string& method,
                       bool original_row, bool pooled, double threshold) {
    EvaluateOptions options;
    options.method = method;
    options.original_row = original_row;
    options.meteor_aggregation = pooled ? CorpusAggregation::Pooled : CorpusAggregation::MacroAverage;
    options.gar.threshold = threshold;
    auto report = evaluate(corpus_from(original), corpus_from(transformed), *classifier(attr_model),
                           *classifier(util_model), *acceptability_backend(acceptability), options);
    return json_loads(report_to_json(report));
  }, py::arg("original"), py::arg("transformed"), py::arg("attr_model"), py::arg("util_model"),
     py::arg("acceptability") = 1.0, py::arg("method") = "", py::arg("original_row") = false,
     py::arg("pooled") = false, py::arg("threshold") = 0.5,
     "Models are LinearTextModel objects, model file paths or classifier URLs. Returns the report as a dict.");

  m.def("render", [](const py::iterable& reports, const std::string& format) {
    auto dumps = py::module_::import("json").attr("dumps");
    std::vector<EvaluationReport> parsed;
    for (const auto& r : reports) parsed.push_back(report_from_json(dumps(r).cast<std::string>()));
    return render(parsed, parse_report_format(format));
  }, py::arg("reports"), py::arg("format") = "markdown");
}
