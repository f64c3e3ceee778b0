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

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "btp/error.hpp"

namespace btp {

namespace {

constexpr char kMagic[4] = {'B', 'T', 'L', 'M'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kMaxLabels = 1u << 16;
constexpr std::uint32_t kMaxLabelBytes = 1u << 16;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// Uniform integer in [0, n) from raw engine output; unlike
// std::uniform_int_distribution this is identical on every standard library.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void put_f32(std::ostream& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError("model file truncated");
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 |
         std::uint32_t{b[3]} << 24;
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t lo = get_u32(in);
  std::uint64_t hi = get_u32(in);
  return lo | hi << 32;
}

float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

double dot(std::span<const float> w, const FeatureVector& x) {
  double sum = 0.0;
  for (const auto& f : x) sum += static_cast<double>(w[f.index]) * f.value;
  return sum;
}

}  // namespace

LinearTextModel::LinearTextModel(FeatureSpec spec, std::vector<std::string> labels,
                                 std::vector<std::vector<float>> weights, std::vector<float> biases,
                                 std::uint64_t seed, int epochs)
    : spec_(spec),
      labels_(std::move(labels)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      seed_(seed),
      epochs_(epochs) {
  spec_.validate();
  if (labels_.size() < 2) throw DataError("a linear text model needs at least two labels");
  if (!std::is_sorted(labels_.begin(), labels_.end()) ||
      std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw DataError("model labels must be sorted and unique");
  if (weights_.size() != labels_.size() || biases_.size() != labels_.size())
    throw DataError("model needs one weight vector and bias per label");
  for (const auto& w : weights_) {
    if (w.size() != spec_.dimension()) throw DataError("model weight vector has the wrong dimension");
  }
}

std::vector<double> LinearTextModel::scores(std::string_view text) const {
  auto x = extract_features(text, spec_);
  std::vector<double> out(labels_.size());
  for (std::size_t k = 0; k < labels_.size(); ++k) out[k] = dot(weights_[k], x) + biases_[k];
  return out;
}

std::size_t argmax(std::span<const double> scores) {
  if (scores.empty()) throw UsageError("argmax of an empty score vector");
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

Classification LinearTextModel::predict(std::span<const std::string> texts) const {
  Classification out;
  out.labels.reserve(texts.size());
  out.probabilities.reserve(texts.size());
  for (const auto& text : texts) {
    auto s = scores(text);
    out.labels.push_back(labels_[argmax(s)]);
    std::vector<double> p(s.size());
    double total = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) total += (p[k] = sigmoid(s[k]));
    for (auto& v : p) v /= total;
    out.probabilities.push_back(std::move(p));
  }
  return out;
}

void LinearTextModel::save(std::ostream& out) const {
  out.write(kMagic, 4);
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(spec_.word_ngrams.min));
  put_u32(out, static_cast<std::uint32_t>(spec_.word_ngrams.max));
  put_u32(out, static_cast<std::uint32_t>(spec_.char_ngrams.min));
  put_u32(out, static_cast<std::uint32_t>(spec_.char_ngrams.max));
  put_u32(out, static_cast<std::uint32_t>(spec_.hash_bits));
  put_u64(out, seed_);
  put_u32(out, static_cast<std::uint32_t>(epochs_));
  put_u32(out, static_cast<std::uint32_t>(labels_.size()));
  for (const auto& label : labels_) {
    put_u32(out, static_cast<std::uint32_t>(label.size()));
    out.write(label.data(), static_cast<std::streamsize>(label.size()));
  }
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    put_f32(out, biases_[k]);
    for (float w : weights_[k]) put_f32(out, w);
  }
}

void LinearTextModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  save(out);
  out.flush();
  if (!out) throw DataError("write failure on " + path.string());
}

LinearTextModel LinearTextModel::load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic))
    throw DataError("not a BTLM model file");
  if (auto version = get_u32(in); version != kFormatVersion)
    throw DataError("unsupported BTLM format version " + std::to_string(version));
  FeatureSpec spec;
  spec.word_ngrams.min = static_cast<int>(get_u32(in));
  spec.word_ngrams.max = static_cast<int>(get_u32(in));
  spec.char_ngrams.min = static_cast<int>(get_u32(in));
  spec.char_ngrams.max = static_cast<int>(get_u32(in));
  spec.hash_bits = static_cast<int>(get_u32(in));
  try {
    spec.validate();
  } catch (const UsageError& e) {
    throw DataError(std::string("model file has an invalid feature spec: ") + e.what());
  }
  const std::uint64_t seed = get_u64(in);
  const int epochs = static_cast<int>(get_u32(in));
  const std::uint32_t nlabels = get_u32(in);
  if (nlabels < 2 || nlabels > kMaxLabels) throw DataError("model file has an invalid label count");
  std::vector<std::string> labels(nlabels);
  for (auto& label : labels) {
    std::uint32_t len = get_u32(in);
    if (len > kMaxLabelBytes) throw DataError("model file has an oversized label");
    label.resize(len);
    if (!in.read(label.data(), len)) throw DataError("model file truncated");
  }
  std::vector<std::vector<float>> weights(nlabels, std::vector<float>(spec.dimension()));
  std::vector<float> biases(nlabels);
  for (std::uint32_t k = 0; k < nlabels; ++k) {
    biases[k] = get_f32(in);
    for (auto& w : weights[k]) w = get_f32(in);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw DataError("trailing bytes after model");
  return LinearTextModel(spec, std::move(labels), std::move(weights), std::move(biases), seed, epochs);
}

LinearTextModel LinearTextModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  try {
    return load(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LinearTextModel train(const Corpus& corpus, LabelField field, const FeatureSpec& spec,
                      const TrainOptions& options) {
  spec.validate();
  if (options.epochs < 1) throw UsageError("epochs must be at least 1");
  if (!(options.learning_rate > 0)) throw UsageError("learning rate must be positive");
  if (!(options.l2 >= 0)) throw UsageError("L2 weight decay must be non-negative");

  std::set<std::string> label_set;
  for (const auto& r : corpus.records) {
    const auto& label = label_of(r, field);
    if (!label) {
      throw DataError("record \"" + r.id + "\" has no " + std::string(to_string(field)) + " label");
    }
    label_set.insert(*label);
  }
  if (label_set.size() < 2) {
    throw DataError("training needs at least two distinct " + std::string(to_string(field)) +
                    " labels, found " + std::to_string(label_set.size()));
  }
  std::vector<std::string> labels(label_set.begin(), label_set.end());

  const std::size_t n = corpus.size();
  const std::size_t K = labels.size();
  const std::size_t D = spec.dimension();
  std::vector<FeatureVector> features(n);
  std::vector<std::size_t> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    features[i] = extract_features(corpus.records[i].text, spec);
    targets[i] = static_cast<std::size_t>(
        std::lower_bound(labels.begin(), labels.end(), *label_of(corpus.records[i], field)) - labels.begin());
  }

  // The iterate is w = scale * v. `sum[k][j]` holds the running sum of w
  // over steps up to `mark[k][j]` (a value of the cumulative scale), so the
  // average can be maintained with sparse updates.
  std::vector<std::vector<double>> v(K, std::vector<double>(D, 0.0));
  std::vector<std::vector<double>> sum(K, std::vector<double>(D, 0.0));
  std::vector<std::vector<double>> mark(K, std::vector<double>(D, 0.0));
  std::vector<double> bias(K, 0.0), bias_sum(K, 0.0);
  double scale = 1.0;
  double cumulative_scale = 0.0;

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t t = 0;
  std::vector<double> gradient(K);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);

    for (std::size_t idx : order) {
      ++t;
      const double eta = options.learning_rate / std::sqrt(static_cast<double>(t));
      const auto& x = features[idx];
      for (std::size_t k = 0; k < K; ++k) {
        double z = bias[k];
        for (const auto& f : x) z += scale * v[k][f.index] * f.value;
        gradient[k] = sigmoid(z) - (targets[idx] == k ? 1.0 : 0.0);
      }
      scale *= 1.0 - eta * options.l2;
      for (std::size_t k = 0; k < K; ++k) {
        const double step = eta * gradient[k];
        for (const auto& f : x) {
          double& vj = v[k][f.index];
          double& mj = mark[k][f.index];
          sum[k][f.index] += vj * (cumulative_scale - mj);
          mj = cumulative_scale;
          vj -= step * f.value / scale;
        }
        bias[k] -= step;
      }
      cumulative_scale += scale;
      for (std::size_t k = 0; k < K; ++k) bias_sum[k] += bias[k];
    }
  }

  const double steps = static_cast<double>(t);
  std::vector<std::vector<float>> weights(K, std::vector<float>(D));
  std::vector<float> biases(K);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < D; ++j) {
      double total = sum[k][j] + v[k][j] * (cumulative_scale - mark[k][j]);
      weights[k][j] = static_cast<float>(total / steps);
    }
    biases[k] = static_cast<float>(bias_sum[k] / steps);
  }
  return LinearTextModel(spec, std::move(labels), std::move(weights), std::move(biases),
                         options.seed, options.epochs);
}

Classification predict(const LinearTextModel& model, std::span<const std::string> texts) {
  return model.predict(texts);
}

LinearModelClassifier::LinearModelClassifier(std::shared_ptr<const LinearTextModel> model,
                                             std::string name)
    : model_(std::move(model)), name_(std::move(name)) {
  if (!model_) throw UsageError("LinearModelClassifier needs a model");
}

Classification LinearModelClassifier::classify_batch(std::span<const std::string> texts,
                                                     std::string_view) const {
  return model_->predict(texts);
}

}  // namespace btp
