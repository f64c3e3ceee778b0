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

#include "btp/http_backend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "btp/error.hpp"

namespace btp {

namespace {

using nlohmann::json;

// Outcome of a single HTTP attempt.
struct Attempt {
  bool retryable = false;
  std::optional<std::string> body;  // set on success
  std::string error;
};

std::string error_detail(const httplib::Result& res) {
  std::string detail = "HTTP " + std::to_string(res->status);
  try {
    auto doc = json::parse(res->body);
    if (doc.is_object() && doc.contains("error") && doc["error"].is_string())
      detail += ": " + doc["error"].get<std::string>();
  } catch (const json::exception&) {
    if (!res->body.empty()) detail += ": " + res->body.substr(0, 200);
  }
  return detail;
}

Attempt classify_result(const httplib::Result& res) {
  Attempt a;
  if (!res) {
    a.retryable = true;
    a.error = "transport error: " + httplib::to_string(res.error());
    return a;
  }
  if (res->status == 200) {
    a.body = res->body;
    return a;
  }
  a.retryable = res->status == 503;
  a.error = error_detail(res);
  return a;
}

json parse_body(std::string_view body) {
  try {
    auto doc = json::parse(body);
    if (!doc.is_object()) throw BackendError("protocol violation: response is not a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw BackendError(std::string("protocol violation: malformed JSON response: ") + e.what());
  }
}

const json& require_array(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_array())
    throw BackendError(std::string("protocol violation: response lacks array \"") + key + "\"");
  return *it;
}

}  // namespace

namespace wire {

std::string translate_request(std::span<const std::string> texts, std::string_view source,
                              std::string_view target) {
  nlohmann::ordered_json body;
  body["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  body["source"] = source;
  body["target"] = target;
  return body.dump();
}

std::vector<std::string> parse_translate_response(std::string_view body, std::size_t expected) {
  auto doc = parse_body(body);
  const auto& texts = require_array(doc, "texts");
  std::vector<std::string> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    if (!t.is_string()) throw BackendError("protocol violation: \"texts\" must hold strings");
    out.push_back(t.get<std::string>());
  }
  check_translation(out, expected);
  return out;
}

std::string classify_request(std::span<const std::string> texts, std::string_view task) {
  nlohmann::ordered_json body;
  body["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  body["task"] = task;
  return body.dump();
}

Classification parse_classify_response(std::string_view body, std::size_t expected) {
  auto doc = parse_body(body);
  Classification out;
  for (const auto& label : require_array(doc, "labels")) {
    if (!label.is_string()) throw BackendError("protocol violation: \"labels\" must hold strings");
    out.labels.push_back(label.get<std::string>());
  }
  for (const auto& row : require_array(doc, "probabilities")) {
    if (!row.is_array()) throw BackendError("protocol violation: \"probabilities\" must hold arrays");
    std::vector<double> values;
    for (const auto& p : row) {
      if (!p.is_number()) throw BackendError("protocol violation: probabilities must be numbers");
      values.push_back(p.get<double>());
    }
    out.probabilities.push_back(std::move(values));
  }
  check_classification(out, expected);
  return out;
}

std::string acceptability_request(std::span<const std::string> texts) {
  nlohmann::ordered_json body;
  body["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  return body.dump();
}

std::vector<double> parse_acceptability_response(std::string_view body, std::size_t expected) {
  auto doc = parse_body(body);
  std::vector<double> out;
  for (const auto& p : require_array(doc, "probabilities")) {
    if (!p.is_number()) throw BackendError("protocol violation: probabilities must be numbers");
    out.push_back(p.get<double>());
  }
  check_acceptability(out, expected);
  return out;
}

HealthStatus parse_health_response(std::string_view body) {
  auto doc = parse_body(body);
  HealthStatus health;
  auto status = doc.find("status");
  if (status == doc.end() || !status->is_string())
    throw BackendError("protocol violation: health response lacks \"status\"");
  health.status = status->get<std::string>();
  if (auto models = doc.find("models"); models != doc.end()) {
    if (!models->is_array()) throw BackendError("protocol violation: \"models\" must be an array");
    for (const auto& m : *models) health.models.push_back(m.is_string() ? m.get<std::string>() : m.dump());
  }
  health.raw = std::string(body);
  return health;
}

}  // namespace wire

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  if (options_.batch_size == 0) throw UsageError("batch size must be positive");
  if (options_.parallelism == 0) throw UsageError("parallelism must be positive");
  if (options_.backoff_multiplier < 1.0) throw UsageError("backoff multiplier must be >= 1");

  std::string_view url = options_.base_url;
  constexpr std::string_view scheme = "http://";
  if (url.starts_with("https://"))
    throw UsageError("https backends are not supported; terminate TLS in front of the server");
  if (!url.starts_with(scheme)) throw UsageError("backend URL must start with http://: " + options_.base_url);
  auto rest = url.substr(scheme.size());
  auto slash = rest.find('/');
  auto authority = rest.substr(0, slash);
  if (authority.empty()) throw UsageError("backend URL has no host: " + options_.base_url);
  host_ = std::string(scheme) + std::string(authority);
  if (slash != std::string_view::npos) {
    prefix_ = std::string(rest.substr(slash));
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
}

std::string HttpBackend::describe() const { return "http:" + options_.base_url; }

HttpStats HttpBackend::stats() const { return {requests_.load(), attempts_.load()}; }

namespace {

template <typename Send>
std::string with_retries(const HttpBackendOptions& options, std::atomic<std::uint64_t>& attempts,
                         const std::string& what, Send send) {
  auto delay = std::chrono::duration<double, std::milli>(options.initial_backoff);
  std::string last_error;
  for (unsigned attempt = 0; attempt <= options.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay = std::min(delay * options.backoff_multiplier,
                       std::chrono::duration<double, std::milli>(options.max_backoff));
    }
    ++attempts;
    Attempt result = classify_result(send());
    if (result.body) return std::move(*result.body);
    last_error = result.error;
    if (!result.retryable) throw BackendError(what + " failed: " + last_error);
  }
  throw BackendError(what + " failed after " + std::to_string(options.retries + 1) +
                     " attempts: " + last_error);
}

}  // namespace

std::string HttpBackend::post(const std::string& route, const std::string& body) const {
  ++requests_;
  const std::string path = prefix_ + route;
  return with_retries(options_, attempts_, "POST " + options_.base_url + route, [&] {
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    return client.Post(path, body, "application/json");
  });
}

std::string HttpBackend::get(const std::string& route) const {
  ++requests_;
  const std::string path = prefix_ + route;
  return with_retries(options_, attempts_, "GET " + options_.base_url + route, [&] {
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    return client.Get(path);
  });
}

template <typename Result, typename Call>
std::vector<Result> HttpBackend::run_batched(std::span<const std::string> texts, Call call) const {
  const std::size_t batch = options_.batch_size;
  const std::size_t nbatches = (texts.size() + batch - 1) / batch;
  std::vector<std::vector<Result>> parts(nbatches);
  std::vector<std::exception_ptr> errors(nbatches);

  auto run_one = [&](std::size_t b) {
    auto chunk = texts.subspan(b * batch, std::min(batch, texts.size() - b * batch));
    parts[b] = call(chunk);
  };

  const std::size_t workers = std::min(options_.parallelism, nbatches);
  if (workers <= 1) {
    for (std::size_t b = 0; b < nbatches; ++b) run_one(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < nbatches && !failed; b = next++) {
          try {
            run_one(b);
          } catch (...) {
            errors[b] = std::current_exception();
            failed = true;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<Result> out;
  out.reserve(texts.size());
  for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(out));
  return out;
}

std::vector<std::string> HttpBackend::translate_batch(std::span<const std::string> texts,
                                                      const LanguageCode& source,
                                                      const LanguageCode& target) const {
  return run_batched<std::string>(texts, [&](std::span<const std::string> chunk) {
    auto body = post("/v1/translate", wire::translate_request(chunk, source.str(), target.str()));
    return wire::parse_translate_response(body, chunk.size());
  });
}

Classification HttpBackend::classify_batch(std::span<const std::string> texts,
                                           std::string_view task) const {
  using Row = std::pair<std::string, std::vector<double>>;
  auto rows = run_batched<Row>(texts, [&](std::span<const std::string> chunk) {
    auto parsed = wire::parse_classify_response(post("/v1/classify", wire::classify_request(chunk, task)),
                                                chunk.size());
    std::vector<Row> out;
    out.reserve(chunk.size());
    for (std::size_t i = 0; i < chunk.size(); ++i)
      out.emplace_back(std::move(parsed.labels[i]), std::move(parsed.probabilities[i]));
    return out;
  });
  Classification result;
  result.labels.reserve(rows.size());
  result.probabilities.reserve(rows.size());
  for (auto& [label, probs] : rows) {
    result.labels.push_back(std::move(label));
    result.probabilities.push_back(std::move(probs));
  }
  return result;
}

std::vector<double> HttpBackend::score_batch(std::span<const std::string> texts) const {
  return run_batched<double>(texts, [&](std::span<const std::string> chunk) {
    auto body = post("/v1/acceptability", wire::acceptability_request(chunk));
    return wire::parse_acceptability_response(body, chunk.size());
  });
}

HealthStatus HttpBackend::health() const { return wire::parse_health_response(get("/v1/health")); }

std::shared_ptr<HttpBackend> http_backend(std::string base_url, std::size_t batch_size,
                                          unsigned retries) {
  HttpBackendOptions options;
  options.base_url = std::move(base_url);
  options.batch_size = batch_size;
  options.retries = retries;
  return std::make_shared<HttpBackend>(std::move(options));
}

std::optional<std::string> default_backend_url() {
  const char* value = std::getenv("BT_BACKEND_URL");
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

}  // namespace btp
