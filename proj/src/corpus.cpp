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

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "btp/error.hpp"

namespace btp {

namespace {

using nlohmann::json;

constexpr std::string_view kTsvNull = "\\N";
constexpr std::string_view kTsvHeader = "id\ttext\tattribute\tutility";

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

std::string where(std::string_view name, std::size_t line) {
  std::string out = name.empty() ? std::string("<corpus>") : std::string(name);
  out += ":" + std::to_string(line);
  return out;
}

void check_record(const TextRecord& r, const std::string& location) {
  if (r.id.empty()) throw DataError(location + ": empty id");
  if (is_blank(r.text)) throw DataError(location + ": empty text for id \"" + r.id + "\"");
  if (r.attribute && r.attribute->empty())
    throw DataError(location + ": empty attribute label for id \"" + r.id + "\"");
  if (r.utility && r.utility->empty())
    throw DataError(location + ": empty utility label for id \"" + r.id + "\"");
}

void check_role(const Corpus& corpus) {
  if (corpus.role != SplitRole::Test) return;
  for (const auto& r : corpus.records) {
    if (!r.attribute || !r.utility)
      throw DataError("test split record \"" + r.id +
                      "\" must carry both attribute and utility labels");
  }
}

// Tracks ids and the (1-based) line on which each was first seen.
class IdTracker {
 public:
  explicit IdTracker(std::string name) : name_(std::move(name)) {}

  void add(const std::string& id, std::size_t line) {
    auto [it, inserted] = seen_.emplace(id, line);
    if (!inserted) {
      throw DataError(where(name_, line) + ": duplicate id \"" + id + "\" (lines " +
                      std::to_string(it->second) + " and " + std::to_string(line) + ")");
    }
  }

 private:
  std::string name_;
  std::unordered_map<std::string, std::size_t> seen_;
};

std::optional<std::string> optional_string(const json& value, const char* key,
                                           const std::string& location) {
  if (value.is_null()) return std::nullopt;
  if (!value.is_string()) throw DataError(location + ": field \"" + key + "\" must be a string or null");
  return value.get<std::string>();
}

TextRecord parse_jsonl_line(const std::string& line, const std::string& location) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(location + ": parse error: " + e.what());
  }
  if (!obj.is_object()) throw DataError(location + ": expected a JSON object");

  TextRecord r;
  bool has_id = false, has_text = false;
  for (const auto& [key, value] : obj.items()) {
    if (key == "id") {
      if (!value.is_string()) throw DataError(location + ": field \"id\" must be a string");
      r.id = value.get<std::string>();
      has_id = true;
    } else if (key == "text") {
      if (!value.is_string()) throw DataError(location + ": field \"text\" must be a string");
      r.text = value.get<std::string>();
      has_text = true;
    } else if (key == "attribute") {
      r.attribute = optional_string(value, "attribute", location);
    } else if (key == "utility") {
      r.utility = optional_string(value, "utility", location);
    } else {
      throw DataError(location + ": unknown field \"" + key + "\"");
    }
  }
  if (!has_id) throw DataError(location + ": missing field \"id\"");
  if (!has_text) throw DataError(location + ": missing field \"text\"");
  return r;
}

std::string tsv_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::optional<std::string> tsv_unescape(std::string_view s, const std::string& location) {
  if (s == kTsvNull) return std::nullopt;
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (i + 1 == s.size()) throw DataError(location + ": dangling escape");
    switch (s[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw DataError(location + ": invalid escape \"\\" + std::string(1, s[i]) + "\"");
    }
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

Corpus read_jsonl(std::istream& in, std::string name) {
  Corpus corpus;
  corpus.name = name;
  IdTracker ids(name);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (is_blank(line)) continue;
    auto location = where(name, lineno);
    TextRecord r = parse_jsonl_line(line, location);
    check_record(r, location);
    ids.add(r.id, lineno);
    corpus.records.push_back(std::move(r));
  }
  if (in.bad()) throw DataError(where(name, lineno) + ": read failure");
  return corpus;
}

Corpus read_tsv(std::istream& in, std::string name) {
  Corpus corpus;
  corpus.name = name;
  std::string line;
  std::size_t lineno = 0;

  // Column index for each known field; -1 when absent.
  int col_id = -1, col_text = -1, col_attr = -1, col_util = -1;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (!line.empty()) break;
  }
  if (line.empty()) return corpus;  // empty file
  {
    auto header = split_tabs(line);
    ncols = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
      int* slot = nullptr;
      if (header[i] == "id") slot = &col_id;
      else if (header[i] == "text") slot = &col_text;
      else if (header[i] == "attribute") slot = &col_attr;
      else if (header[i] == "utility") slot = &col_util;
      else throw DataError(where(name, lineno) + ": unknown field \"" + std::string(header[i]) + "\"");
      if (*slot != -1)
        throw DataError(where(name, lineno) + ": repeated column \"" + std::string(header[i]) + "\"");
      *slot = static_cast<int>(i);
    }
    if (col_id < 0 || col_text < 0)
      throw DataError(where(name, lineno) + ": header must contain \"id\" and \"text\" columns");
  }

  IdTracker ids(name);
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto location = where(name, lineno);
    auto fields = split_tabs(line);
    if (fields.size() != ncols) {
      throw DataError(location + ": parse error: expected " + std::to_string(ncols) +
                      " fields, found " + std::to_string(fields.size()));
    }
    TextRecord r;
    r.id = tsv_unescape(fields[col_id], location).value_or("");
    r.text = tsv_unescape(fields[col_text], location).value_or("");
    if (col_attr >= 0) r.attribute = tsv_unescape(fields[col_attr], location);
    if (col_util >= 0) r.utility = tsv_unescape(fields[col_util], location);
    check_record(r, location);
    ids.add(r.id, lineno);
    corpus.records.push_back(std::move(r));
  }
  if (in.bad()) throw DataError(where(name, lineno) + ": read failure");
  return corpus;
}

}  // namespace

std::string_view to_string(SplitRole role) {
  switch (role) {
    case SplitRole::AttributeTrain: return "attribute-train";
    case SplitRole::UtilityTrain: return "utility-train";
    case SplitRole::StyleTrain: return "style-train";
    case SplitRole::Dev: return "dev";
    case SplitRole::Test: return "test";
  }
  return "unknown";
}

SplitRole parse_split_role(std::string_view name) {
  for (auto role : {SplitRole::AttributeTrain, SplitRole::UtilityTrain, SplitRole::StyleTrain,
                    SplitRole::Dev, SplitRole::Test}) {
    if (to_string(role) == name) return role;
  }
  throw UsageError("unknown split role \"" + std::string(name) + "\"");
}

std::string_view to_string(CorpusFormat format) {
  return format == CorpusFormat::Jsonl ? "jsonl" : "tsv";
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::Jsonl;
  if (name == "tsv") return CorpusFormat::Tsv;
  throw UsageError("unknown corpus format \"" + std::string(name) + "\"");
}

CorpusFormat format_from_extension(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? CorpusFormat::Tsv : CorpusFormat::Jsonl;
}

std::string_view to_string(LabelField field) {
  return field == LabelField::Attribute ? "attribute" : "utility";
}

LabelField parse_label_field(std::string_view name) {
  if (name == "attribute") return LabelField::Attribute;
  if (name == "utility") return LabelField::Utility;
  throw UsageError("unknown label field \"" + std::string(name) + "\"");
}

const std::optional<std::string>& label_of(const TextRecord& record, LabelField field) {
  return field == LabelField::Attribute ? record.attribute : record.utility;
}

void validate_corpus(const Corpus& corpus) {
  IdTracker ids(corpus.name);
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    auto location = where(corpus.name, i + 1);
    check_record(corpus.records[i], location);
    ids.add(corpus.records[i].id, i + 1);
  }
  check_role(corpus);
}

Corpus make_corpus(std::vector<TextRecord> records, std::string name,
                   std::optional<SplitRole> role) {
  Corpus corpus{std::move(name), role, std::move(records)};
  validate_corpus(corpus);
  return corpus;
}

Corpus read_corpus(std::istream& in, CorpusFormat format, std::string name,
                   std::optional<SplitRole> role) {
  Corpus corpus = format == CorpusFormat::Jsonl ? read_jsonl(in, std::move(name))
                                                : read_tsv(in, std::move(name));
  corpus.role = role;
  check_role(corpus);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::optional<SplitRole> role) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return read_corpus(in, format, path.string(), role);
}

void write_corpus(const Corpus& corpus, std::ostream& out, CorpusFormat format) {
  if (format == CorpusFormat::Jsonl) {
    for (const auto& r : corpus.records) {
      nlohmann::ordered_json obj;
      obj["id"] = r.id;
      obj["text"] = r.text;
      obj["attribute"] = r.attribute ? nlohmann::ordered_json(*r.attribute) : nullptr;
      obj["utility"] = r.utility ? nlohmann::ordered_json(*r.utility) : nullptr;
      out << obj.dump() << '\n';
    }
  } else {
    out << kTsvHeader << '\n';
    auto label = [](const std::optional<std::string>& v) {
      return v ? tsv_escape(*v) : std::string(kTsvNull);
    };
    for (const auto& r : corpus.records) {
      out << tsv_escape(r.id) << '\t' << tsv_escape(r.text) << '\t' << label(r.attribute) << '\t'
          << label(r.utility) << '\n';
    }
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_corpus(corpus, out, format);
  out.flush();
  if (!out) throw DataError("write failure on " + path.string());
}

std::vector<RecordPair> align_pairs(const Corpus& original, const Corpus& transformed) {
  if (original.empty()) throw DataError("cannot align: original corpus is empty");
  if (transformed.empty()) throw DataError("cannot align: transformed corpus is empty");

  std::unordered_map<std::string_view, const TextRecord*> by_id;
  by_id.reserve(transformed.size());
  for (const auto& r : transformed.records) by_id.emplace(r.id, &r);

  std::vector<std::string> missing;
  std::vector<RecordPair> pairs;
  pairs.reserve(original.size());
  std::set<std::string_view> used;
  for (const auto& r : original.records) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      missing.push_back(r.id);
      continue;
    }
    used.insert(r.id);
    TextRecord t = *it->second;
    t.attribute = r.attribute;
    t.utility = r.utility;
    pairs.emplace_back(r, std::move(t));
  }
  std::vector<std::string> extra;
  for (const auto& r : transformed.records) {
    if (!used.contains(r.id)) extra.push_back(r.id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream msg;
    msg << "cannot align corpora by id:";
    auto list = [&msg](const char* what, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      msg << ' ' << what << " [";
      for (std::size_t i = 0; i < ids.size() && i < 10; ++i) msg << (i ? ", " : "") << '"' << ids[i] << '"';
      if (ids.size() > 10) msg << ", ... (" << ids.size() << " total)";
      msg << ']';
    };
    list("missing from transformed", missing);
    list("missing from original", extra);
    throw DataError(msg.str());
  }
  return pairs;
}

const std::filesystem::path& SplitManifest::path_for(SplitRole role) const {
  auto it = files.find(role);
  if (it == files.end()) throw DataError("split manifest has no \"" + std::string(to_string(role)) + "\" entry");
  return it->second;
}

SplitManifest load_split_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open split manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": parse error: " + e.what());
  }
  if (!doc.is_object()) throw DataError(path.string() + ": manifest must be a JSON object");

  SplitManifest manifest;
  for (const auto& [key, value] : doc.items()) {
    SplitRole role;
    try {
      role = parse_split_role(key);
    } catch (const UsageError&) {
      throw DataError(path.string() + ": unknown split role \"" + key + "\"");
    }
    if (!value.is_string()) throw DataError(path.string() + ": path for \"" + key + "\" must be a string");
    std::filesystem::path file = value.get<std::string>();
    if (file.is_relative()) file = path.parent_path() / file;
    manifest.files[role] = file;
  }
  if (manifest.files.size() != 5) {
    std::string missing;
    for (auto role : {SplitRole::AttributeTrain, SplitRole::UtilityTrain, SplitRole::StyleTrain,
                      SplitRole::Dev, SplitRole::Test}) {
      if (!manifest.files.contains(role)) missing += " " + std::string(to_string(role));
    }
    throw DataError(path.string() + ": manifest is missing roles:" + missing);
  }
  return manifest;
}

Corpus load_split(const SplitManifest& manifest, SplitRole role) {
  const auto& file = manifest.path_for(role);
  return load_corpus(file, format_from_extension(file), role);
}

}  // namespace btp
