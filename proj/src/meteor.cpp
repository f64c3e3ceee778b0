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

#include "btp/meteor.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "btp/error.hpp"
#include "btp/porter_stemmer.hpp"

namespace btp {

namespace {

constexpr int kNone = -1;

using Bits = std::vector<std::uint64_t>;

bool test_bit(const Bits& bits, int i) { return (bits[i >> 6] >> (i & 63)) & 1U; }
void set_bit(Bits& bits, int i) { bits[i >> 6] |= std::uint64_t{1} << (i & 63); }
void clear_bit(Bits& bits, int i) { bits[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

// Matching problem for one stage over the tokens left by earlier stages.
struct StageGraph {
  int hyp_size = 0;
  int ref_size = 0;
  std::vector<int> fixed;               // hyp -> ref from earlier stages, or kNone
  std::vector<std::vector<int>> cand;   // unmatched hyp -> ascending unmatched refs
  // Set when the stage relation is an equivalence (exact, stem): every
  // candidate pair shares a key, and maximum matchings can be counted.
  bool keyed = false;
  int num_keys = 0;
  std::vector<int> hyp_key;                     // per hyp position, kNone if no candidates
  std::vector<int> ref_key;                     // per ref position, kNone if unavailable
  std::vector<int> ref_key_total;               // available refs per key
  std::vector<std::vector<int>> suffix_key;     // [h][k]: open hyp positions >= h with key k
};

struct State {
  std::vector<int> assign;  // new matches of this stage, hyp -> ref or kNone
  Bits used;                // refs taken by `assign`
  std::vector<int> key_used;
  int last = kNone;         // ref aligned to the previous hyp position
  int chunks = 0;
  long distance = 0;
  int matched = 0;
};

// Orders by chunks, then distance, then lexicographic assignment with
// "unmatched" sorting after every ref index.
bool better(const State& a, const State& b) {
  if (a.chunks != b.chunks) return a.chunks < b.chunks;
  if (a.distance != b.distance) return a.distance < b.distance;
  for (std::size_t i = 0; i < a.assign.size(); ++i) {
    int x = a.assign[i] == kNone ? INT_MAX : a.assign[i];
    int y = b.assign[i] == kNone ? INT_MAX : b.assign[i];
    if (x != y) return x < y;
  }
  return false;
}

class StageSearch {
 public:
  explicit StageSearch(const StageGraph& g) : g_(g) {
    initial_.assign.assign(g.hyp_size, kNone);
    initial_.used.assign((g.ref_size + 63) / 64, 0);
    if (g.keyed) initial_.key_used.assign(g.num_keys, 0);
    target_ = bound(0, initial_);
    // future_[h]: refs some position >= h may still take in this stage.
    future_.assign(g.hyp_size + 1, Bits(initial_.used.size(), 0));
    fixed_after_.assign(g.hyp_size + 1, false);
    for (int h = g.hyp_size - 1; h >= 0; --h) {
      future_[h] = future_[h + 1];
      for (int r : g.cand[h]) set_bit(future_[h], r);
      fixed_after_[h] = fixed_after_[h + 1] || g.fixed[h] != kNone;
    }
  }

  int target() const { return target_; }

  State exhaustive() {
    best_.reset();
    State s = initial_;
    dfs(0, s);
    return *best_;
  }

  State beam(std::size_t width) {
    std::vector<State> states{initial_};
    std::unordered_map<std::string, std::size_t> index;
    std::vector<State> next;
    std::vector<int> pending;  // lower bound on chunks still to open, per state in `next`
    for (int h = 0; h < g_.hyp_size; ++h) {
      index.clear();
      next.clear();
      pending.clear();
      auto insert = [&](State&& s) {
        normalize_last(s, h + 1);
        // States agreeing on the refs later positions can still use and on
        // a live run end have identical futures.
        std::string key;
        key.reserve(s.used.size() * 8 + sizeof(int));
        for (std::size_t w = 0; w < s.used.size(); ++w) {
          std::uint64_t bits = s.used[w] & future_[h + 1][w];
          key.append(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
        key.append(reinterpret_cast<const char*>(&s.last), sizeof(s.last));
        auto [it, inserted] = index.emplace(std::move(key), next.size());
        if (inserted) {
          pending.push_back(opens_chunk(s, h + 1));
          next.push_back(std::move(s));
        } else if (better(s, next[it->second])) {
          next[it->second] = std::move(s);
        }
      };
      for (const auto& s : states) {
        if (g_.fixed[h] != kNone || g_.cand[h].empty()) {
          State t = s;
          advance(t, h, g_.fixed[h]);
          insert(std::move(t));
          continue;
        }
        for (int r : g_.cand[h]) {
          if (test_bit(s.used, r)) continue;
          State t = s;
          take(t, h, r);
          if (t.matched + bound(h + 1, t) >= target_) {
            advance(t, h, r);
            insert(std::move(t));
          }
        }
        if (s.matched + bound(h + 1, s) >= target_) {
          State t = s;
          advance(t, h, kNone);
          insert(std::move(t));
        }
      }
      if (next.size() > width) {
        std::vector<std::size_t> order(next.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          int fa = next[a].chunks + pending[a], fb = next[b].chunks + pending[b];
          if (fa != fb) return fa < fb;
          return better(next[a], next[b]);
        });
        order.resize(width);
        states.clear();
        for (std::size_t i : order) states.push_back(std::move(next[i]));
      } else {
        states.swap(next);
      }
    }
    return *std::min_element(states.begin(), states.end(), better);
  }

 private:
  // Forgets a run end that position h cannot extend.
  void normalize_last(State& s, int h) const {
    if (s.last == kNone) return;
    const int r = s.last + 1;
    bool live = h < g_.hyp_size && r < g_.ref_size &&
                (g_.fixed[h] == r || (!test_bit(s.used, r) && std::binary_search(g_.cand[h].begin(), g_.cand[h].end(), r)));
    if (!live) s.last = kNone;
  }

  // 1 when some match at or after position h must start a new chunk.
  int opens_chunk(const State& s, int h) const {
    if (s.last != kNone) return 0;
    return (s.matched < target_ || fixed_after_[h]) ? 1 : 0;
  }

  static void advance(State& s, int h, int r) {
    if (r == kNone) {
      s.last = kNone;
      return;
    }
    if (s.last == kNone || r != s.last + 1) ++s.chunks;
    s.distance += std::abs(h - r);
    s.last = r;
  }

  void take(State& s, int h, int r) const {
    s.assign[h] = r;
    set_bit(s.used, r);
    if (g_.keyed) ++s.key_used[g_.ref_key[r]];
    ++s.matched;
  }

  void untake(State& s, int h, int r) const {
    s.assign[h] = kNone;
    clear_bit(s.used, r);
    if (g_.keyed) --s.key_used[g_.ref_key[r]];
    --s.matched;
  }

  // Size of a maximum matching between open hyp positions >= from and refs
  // not yet used by `s`.
  int bound(int from, const State& s) const {
    if (g_.keyed) {
      int total = 0;
      const auto& remaining = g_.suffix_key[from];
      for (int k = 0; k < g_.num_keys; ++k)
        total += std::min(remaining[k], g_.ref_key_total[k] - s.key_used[k]);
      return total;
    }
    std::vector<int> owner(g_.ref_size, kNone);
    std::vector<char> seen(g_.ref_size);
    int total = 0;
    for (int h = from; h < g_.hyp_size; ++h) {
      if (g_.fixed[h] != kNone || g_.cand[h].empty()) continue;
      std::fill(seen.begin(), seen.end(), 0);
      if (augment(h, s, owner, seen)) ++total;
    }
    return total;
  }

  bool augment(int h, const State& s, std::vector<int>& owner, std::vector<char>& seen) const {
    for (int r : g_.cand[h]) {
      if (seen[r] || test_bit(s.used, r)) continue;
      seen[r] = 1;
      if (owner[r] == kNone || augment(owner[r], s, owner, seen)) {
        owner[r] = h;
        return true;
      }
    }
    return false;
  }

  bool dominated(const State& s) const {
    if (!best_) return false;
    if (s.chunks != best_->chunks) return s.chunks > best_->chunks;
    return s.distance >= best_->distance;
  }

  void dfs(int h, State& s) {
    if (dominated(s)) return;
    if (h == g_.hyp_size) {
      best_ = s;
      return;
    }
    const int saved_last = s.last;
    const int saved_chunks = s.chunks;
    const long saved_distance = s.distance;
    auto restore = [&] {
      s.last = saved_last;
      s.chunks = saved_chunks;
      s.distance = saved_distance;
    };

    if (g_.fixed[h] != kNone || g_.cand[h].empty()) {
      advance(s, h, g_.fixed[h]);
      dfs(h + 1, s);
      restore();
      return;
    }
    for (int r : g_.cand[h]) {
      if (test_bit(s.used, r)) continue;
      take(s, h, r);
      if (s.matched + bound(h + 1, s) >= target_) {
        advance(s, h, r);
        dfs(h + 1, s);
        restore();
      }
      untake(s, h, r);
    }
    if (s.matched + bound(h + 1, s) >= target_) {
      advance(s, h, kNone);
      dfs(h + 1, s);
      restore();
    }
  }

  const StageGraph& g_;
  State initial_;
  int target_ = 0;
  std::vector<Bits> future_;
  std::vector<bool> fixed_after_;
  std::optional<State> best_;
};

// Assigns dense ids to the keys of open positions shared by both sides.
void attach_keys(StageGraph& g, std::span<const std::string> hyp_keys,
                 std::span<const std::string> ref_keys, const std::vector<bool>& ref_taken) {
  std::unordered_map<std::string_view, int> ids;
  g.hyp_key.assign(g.hyp_size, kNone);
  g.ref_key.assign(g.ref_size, kNone);
  for (int h = 0; h < g.hyp_size; ++h) {
    if (g.cand[h].empty()) continue;
    auto [it, inserted] = ids.emplace(hyp_keys[h], static_cast<int>(ids.size()));
    g.hyp_key[h] = it->second;
  }
  g.num_keys = static_cast<int>(ids.size());
  g.ref_key_total.assign(g.num_keys, 0);
  for (int r = 0; r < g.ref_size; ++r) {
    if (ref_taken[r]) continue;
    auto it = ids.find(ref_keys[r]);
    if (it == ids.end()) continue;
    g.ref_key[r] = it->second;
    ++g.ref_key_total[it->second];
  }
  g.suffix_key.assign(g.hyp_size + 1, std::vector<int>(g.num_keys, 0));
  for (int h = g.hyp_size - 1; h >= 0; --h) {
    g.suffix_key[h] = g.suffix_key[h + 1];
    if (g.hyp_key[h] != kNone) ++g.suffix_key[h][g.hyp_key[h]];
  }
  g.keyed = true;
}

}  // namespace

std::string_view to_string(MatchStage stage) {
  switch (stage) {
    case MatchStage::Exact: return "exact";
    case MatchStage::Stem: return "stem";
    case MatchStage::Synonym: return "synonym";
  }
  return "unknown";
}

MatchStage parse_match_stage(std::string_view name) {
  if (name == "exact") return MatchStage::Exact;
  if (name == "stem") return MatchStage::Stem;
  if (name == "synonym") return MatchStage::Synonym;
  throw UsageError("unknown METEOR stage \"" + std::string(name) + "\"");
}

SynonymLexicon SynonymLexicon::parse(std::istream& in) {
  SynonymLexicon lexicon;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::vector<std::string> lemmas;
    for (std::string w; words >> w;) lemmas.push_back(to_lower(w));
    if (!lemmas.empty()) lexicon.add_synset(std::move(lemmas));
  }
  return lexicon;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot load synonym lexicon " + path.string());
  return parse(in);
}

void SynonymLexicon::add_synset(std::vector<std::string> lemmas) {
  const std::size_t id = synsets_++;
  for (auto& lemma : lemmas) {
    auto& sets = membership_[std::move(lemma)];
    if (sets.empty() || sets.back() != id) sets.push_back(id);
  }
}

bool SynonymLexicon::synonyms(std::string_view a, std::string_view b) const {
  auto ia = membership_.find(a);
  auto ib = membership_.find(b);
  if (ia == membership_.end() || ib == membership_.end()) return false;
  // Both lists are ascending.
  const auto& x = ia->second;
  const auto& y = ib->second;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] == y[j]) return true;
    x[i] < y[j] ? ++i : ++j;
  }
  return false;
}

void MeteorParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("METEOR alpha must lie in (0, 1)");
  if (!(beta > 0.0)) throw UsageError("METEOR beta must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw UsageError("METEOR gamma must lie in [0, 1]");
  if (stages.empty()) throw UsageError("METEOR needs at least one matching stage");
  std::set<MatchStage> seen;
  for (auto s : stages) {
    if (!seen.insert(s).second) throw UsageError("METEOR stage \"" + std::string(to_string(s)) + "\" repeated");
  }
  if (beam_width == 0) throw UsageError("METEOR beam width must be positive");
  if (exhaustive_limit == 0) throw UsageError("METEOR exhaustive limit must be positive");
}

std::size_t count_chunks(std::span<const AlignedPair> matches) {
  std::size_t chunks = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    bool continues = i > 0 && matches[i].hyp == matches[i - 1].hyp + 1 &&
                     matches[i].ref == matches[i - 1].ref + 1;
    if (!continues) ++chunks;
  }
  return chunks;
}

MeteorScorer::MeteorScorer(MeteorParams params) : params_(std::move(params)) {
  params_.validate();
  bool wants_synonyms = std::find(params_.stages.begin(), params_.stages.end(),
                                  MatchStage::Synonym) != params_.stages.end();
  if (wants_synonyms) {
    if (!params_.synonym_lexicon)
      throw DataError("METEOR synonym stage requested but no synonym lexicon configured");
    synonyms_ = std::make_shared<const SynonymLexicon>(SynonymLexicon::load(*params_.synonym_lexicon));
  }
}

MeteorScorer::MeteorScorer(MeteorParams params, SynonymLexicon synonyms)
    : params_(std::move(params)),
      synonyms_(std::make_shared<const SynonymLexicon>(std::move(synonyms))) {
  params_.validate();
}

Alignment MeteorScorer::align(std::span<const std::string> hyp, std::span<const std::string> ref,
                              SearchMode mode) const {
  const int H = static_cast<int>(hyp.size());
  const int R = static_cast<int>(ref.size());
  std::vector<int> fixed(H, kNone);
  std::vector<MatchStage> fixed_stage(H, MatchStage::Exact);
  std::vector<bool> ref_taken(R, false);

  std::vector<std::string> hyp_stems, ref_stems;
  auto stems = [](std::span<const std::string> tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(porter_stem(t));
    return out;
  };

  for (MatchStage stage : params_.stages) {
    if (stage == MatchStage::Stem && hyp_stems.empty()) {
      hyp_stems = stems(hyp);
      ref_stems = stems(ref);
    }
    std::span<const std::string> hyp_keys = stage == MatchStage::Stem ? std::span<const std::string>(hyp_stems) : hyp;
    std::span<const std::string> ref_keys = stage == MatchStage::Stem ? std::span<const std::string>(ref_stems) : ref;

    StageGraph g;
    g.hyp_size = H;
    g.ref_size = R;
    g.fixed = fixed;
    g.cand.resize(H);
    bool any = false;
    for (int h = 0; h < H; ++h) {
      if (fixed[h] != kNone) continue;
      for (int r = 0; r < R; ++r) {
        if (ref_taken[r]) continue;
        bool match = stage == MatchStage::Synonym
                         ? (synonyms_ && synonyms_->synonyms(hyp[h], ref[r]))
                         : hyp_keys[h] == ref_keys[r];
        if (match) {
          g.cand[h].push_back(r);
          any = true;
        }
      }
    }
    if (!any) continue;
    if (stage != MatchStage::Synonym) attach_keys(g, hyp_keys, ref_keys, ref_taken);

    StageSearch search(g);
    if (search.target() == 0) continue;

    bool exhaustive = mode == SearchMode::Exhaustive;
    if (mode == SearchMode::Auto) {
      auto open_hyp = static_cast<std::size_t>(std::count(fixed.begin(), fixed.end(), kNone));
      auto open_ref = static_cast<std::size_t>(std::count(ref_taken.begin(), ref_taken.end(), false));
      exhaustive = open_hyp <= params_.exhaustive_limit && open_ref <= params_.exhaustive_limit;
    }
    State best = exhaustive ? search.exhaustive() : search.beam(params_.beam_width);
    for (int h = 0; h < H; ++h) {
      if (best.assign[h] == kNone) continue;
      fixed[h] = best.assign[h];
      fixed_stage[h] = stage;
      ref_taken[best.assign[h]] = true;
    }
  }

  Alignment alignment;
  for (int h = 0; h < H; ++h) {
    if (fixed[h] != kNone)
      alignment.matches.push_back({static_cast<std::size_t>(h), static_cast<std::size_t>(fixed[h]), fixed_stage[h]});
  }
  alignment.chunks = count_chunks(alignment.matches);
  return alignment;
}

namespace {

double fmean_with_penalty(const MeteorParams& p, double matches, double hyp_len, double ref_len,
                          double chunks) {
  if (matches <= 0.0 || hyp_len <= 0.0 || ref_len <= 0.0) return 0.0;
  const double precision = matches / hyp_len;
  const double recall = matches / ref_len;
  const double fmean = precision * recall / (p.alpha * precision + (1.0 - p.alpha) * recall);
  const double penalty = p.gamma * std::pow(chunks / matches, p.beta);
  return fmean * (1.0 - penalty);
}

}  // namespace

double MeteorScorer::sentence_tokens(std::span<const std::string> hyp,
                                     std::span<const std::string> ref) const {
  if (hyp.empty() || ref.empty()) return 0.0;
  auto a = align(hyp, ref);
  return fmean_with_penalty(params_, static_cast<double>(a.size()), static_cast<double>(hyp.size()),
                            static_cast<double>(ref.size()), static_cast<double>(a.chunks));
}

double MeteorScorer::sentence(std::string_view hyp, std::string_view ref) const {
  auto h = tokenize(hyp);
  auto r = tokenize(ref);
  return sentence_tokens(h, r);
}

double MeteorScorer::corpus(std::span<const std::pair<std::string, std::string>> pairs,
                            CorpusAggregation aggregation) const {
  if (pairs.empty()) throw DataError("METEOR corpus score needs at least one pair");
  if (aggregation == CorpusAggregation::MacroAverage) {
    double sum = 0.0;
    for (const auto& [original, transformed] : pairs) sum += sentence(transformed, original);
    return 100.0 * sum / static_cast<double>(pairs.size());
  }
  double matches = 0, hyp_len = 0, ref_len = 0, chunks = 0;
  for (const auto& [original, transformed] : pairs) {
    auto h = tokenize(transformed);
    auto r = tokenize(original);
    hyp_len += static_cast<double>(h.size());
    ref_len += static_cast<double>(r.size());
    if (h.empty() || r.empty()) continue;
    auto a = align(h, r);
    matches += static_cast<double>(a.size());
    chunks += static_cast<double>(a.chunks);
  }
  return 100.0 * fmean_with_penalty(params_, matches, hyp_len, ref_len, chunks);
}

Alignment align(std::span<const std::string> hyp, std::span<const std::string> ref,
                const MeteorParams& params) {
  return MeteorScorer(params).align(hyp, ref);
}

double meteor_sentence(std::string_view hyp, std::string_view ref, const MeteorParams& params) {
  return MeteorScorer(params).sentence(hyp, ref);
}

double meteor_corpus(std::span<const std::pair<std::string, std::string>> pairs,
                     const MeteorParams& params, CorpusAggregation aggregation) {
  return MeteorScorer(params).corpus(pairs, aggregation);
}

}  // namespace btp
