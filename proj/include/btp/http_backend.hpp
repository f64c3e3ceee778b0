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

#ifndef BTP_HTTP_BACKEND_HPP
#define BTP_HTTP_BACKEND_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btp/backend.hpp"

namespace btp {

struct HttpBackendOptions {
  /// http://host[:port][/prefix]; the /v1/... routes are appended.
  std::string base_url;
  std::size_t batch_size = 32;
  /// Additional attempts after the first failure (so retries + 1 in total).
  unsigned retries = 3;
  std::chrono::milliseconds timeout{60'000};
  /// Maximum number of batches in flight per call.
  std::size_t parallelism = 4;
  std::chrono::milliseconds initial_backoff{200};
  double backoff_multiplier = 2.0;
  std::chrono::milliseconds max_backoff{10'000};
};

struct HttpStats {
  /// Logical batch requests issued.
  std::uint64_t requests = 0;
  /// HTTP attempts, including retries.
  std::uint64_t attempts = 0;
};

struct HealthStatus {
  std::string status;
  std::vector<std::string> models;
  /// The full response body, kept for report provenance.
  std::string raw;
};

/// Client for the model-server JSON protocol:
///
///   POST /v1/translate      {"texts":[...],"source":"en","target":"de"} -> {"texts":[...]}
///   POST /v1/classify       {"texts":[...],"task":"attribute"} -> {"labels":[...],"probabilities":[[...]]}
///   POST /v1/acceptability  {"texts":[...]} -> {"probabilities":[...]}
///   GET  /v1/health         -> {"status":"ok","models":[...]}
///
/// Inputs are split into batches of `batch_size`. Connection failures,
/// timeouts and 503 responses are retried with exponential backoff; any
/// other non-200 status fails immediately. A call either returns results
/// for every input or throws BackendError.
class HttpBackend final : public TranslationBackend,
                          public ClassifierBackend,
                          public AcceptabilityBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  std::vector<std::string> translate_batch(std::span<const std::string> texts,
                                           const LanguageCode& source,
                                           const LanguageCode& target) const override;
  Classification classify_batch(std::span<const std::string> texts,
                                std::string_view task) const override;
  std::vector<double> score_batch(std::span<const std::string> texts) const override;
  std::string describe() const override;

  HealthStatus health() const;
  HttpStats stats() const;
  const HttpBackendOptions& options() const { return options_; }

 private:
  std::string post(const std::string& route, const std::string& body) const;
  std::string get(const std::string& route) const;

  template <typename Result, typename Call>
  std::vector<Result> run_batched(std::span<const std::string> texts, Call call) const;

  HttpBackendOptions options_;
  std::string host_;    // scheme://host:port
  std::string prefix_;  // path prefix without trailing '/'
  mutable std::atomic<std::uint64_t> requests_{0};
  mutable std::atomic<std::uint64_t> attempts_{0};
};

std::shared_ptr<HttpBackend> http_backend(std::string base_url, std::size_t batch_size = 32,
                                          unsigned retries = 3);

/// Value of the BT_BACKEND_URL environment variable, if set and non-empty.
std::optional<std::string> default_backend_url();

/// Request encoders and response decoders for the wire protocol. Decoders
/// throw BackendError on malformed bodies or length mismatches.
namespace wire {

std::string translate_request(std::span<const std::string> texts, std::string_view source,
                              std::string_view target);
std::vector<std::string> parse_translate_response(std::string_view body, std::size_t expected);

std::string classify_request(std::span<const std::string> texts, std::string_view task);
Classification parse_classify_response(std::string_view body, std::size_t expected);

std::string acceptability_request(std::span<const std::string> texts);
std::vector<double> parse_acceptability_response(std::string_view body, std::size_t expected);

HealthStatus parse_health_response(std::string_view body);

}  // namespace wire

}  // namespace btp

#endif  // BTP_HTTP_BACKEND_HPP
