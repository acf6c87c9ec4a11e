#include "mcstego/markov.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>

#include "mcstego/errors.hpp"

namespace mcstego {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

namespace {
bool ends_sentence(const std::string& token) {
  char c = token.back();
  return c == '.' || c == '!' || c == '?';
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}
}  // namespace

MarkovModel MarkovModel::build(std::string_view corpus) {
  const std::vector<std::string> tokens = tokenize(corpus);
  if (tokens.size() < 2) throw CorpusError("corpus needs at least two tokens");

  MarkovModel model;
  std::set<std::string> vocab(tokens.begin(), tokens.end());
  model.vocabulary_.assign(vocab.begin(), vocab.end());

  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < model.vocabulary_.size(); ++i) index[model.vocabulary_[i]] = i;

  // Ordered maps keep successor lists lexicographic (vocab indices are sorted).
  std::vector<std::map<std::size_t, std::uint64_t>> counts(model.vocabulary_.size());
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    ++counts[index[tokens[i]]][index[tokens[i + 1]]];
  }
  model.transitions_.resize(model.vocabulary_.size());
  for (std::size_t t = 0; t < counts.size(); ++t) {
    std::uint64_t total = 0;
    for (const auto& [succ, n] : counts[t]) total += n;
    for (const auto& [succ, n] : counts[t]) {
      model.transitions_[t].push_back(
          {succ, static_cast<double>(n) / static_cast<double>(total)});
    }
  }

  std::set<std::size_t> starts{index[tokens.front()]};
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (ends_sentence(tokens[i])) starts.insert(index[tokens[i + 1]]);
  }
  model.start_tokens_.assign(starts.begin(), starts.end());
  return model;
}

std::size_t MarkovModel::find(std::string_view token) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), token);
  if (it == vocabulary_.end() || *it != token) return npos;
  return static_cast<std::size_t>(it - vocabulary_.begin());
}

double MarkovModel::probability(std::string_view prev, std::string_view next) const {
  std::size_t a = find(prev);
  std::size_t b = find(next);
  if (a == npos || b == npos) return 0.0;
  for (const auto& t : transitions_[a]) {
    if (t.successor == b) return t.probability;
  }
  return 0.0;
}

std::string MarkovModel::to_json() const {
  nlohmann::ordered_json j;
  j["vocabulary"] = vocabulary_;
  nlohmann::ordered_json starts = nlohmann::ordered_json::array();
  for (std::size_t s : start_tokens_) starts.push_back(vocabulary_[s]);
  j["start_tokens"] = starts;
  nlohmann::ordered_json trans = nlohmann::ordered_json::object();
  for (std::size_t t = 0; t < vocabulary_.size(); ++t) {
    if (transitions_[t].empty()) continue;
    nlohmann::ordered_json succ = nlohmann::ordered_json::array();
    for (const auto& tr : transitions_[t]) {
      succ.push_back(nlohmann::ordered_json::array({vocabulary_[tr.successor], tr.probability}));
    }
    trans[vocabulary_[t]] = succ;
  }
  j["transitions"] = trans;
  return j.dump(2);
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CoverText CoverText::from_text(std::string_view text) {
  CoverText c;
  c.words = tokenize(text);
  c.text = join_words(c.words);
  c.bits = BitVector::from_bytes(as_bytes(c.text));
  return c;
}

TextWalker::TextWalker(const MarkovModel& model, Seed seed) : model_(model), rng_(seed.value) {
  if (model.vocabulary().empty() || model.start_tokens().empty()) {
    throw ParameterError("empty Markov model");
  }
}

std::size_t TextWalker::pick_start() {
  const auto& starts = model_.start_tokens();
  auto idx = static_cast<std::size_t>(rng_.next_unit() * static_cast<double>(starts.size()));
  return starts[std::min(idx, starts.size() - 1)];
}

const std::string& TextWalker::next_word() {
  if (current_ == MarkovModel::npos || model_.successors(current_).empty()) {
    current_ = pick_start();
  } else {
    auto succ = model_.successors(current_);
    double u = rng_.next_unit();
    double cumulative = 0.0;
    std::size_t chosen = succ.back().successor;
    for (const auto& t : succ) {
      cumulative += t.probability;
      if (u < cumulative) {
        chosen = t.successor;
        break;
      }
    }
    current_ = chosen;
  }
  return model_.vocabulary()[current_];
}

CoverText generate_text(const MarkovModel& model, Seed seed, std::size_t n_words) {
  if (n_words == 0) throw ParameterError("n_words must be at least 1");
  TextWalker walker(model, seed);
  CoverText out;
  out.words.reserve(n_words);
  for (std::size_t i = 0; i < n_words; ++i) out.words.push_back(walker.next_word());
  out.text = join_words(out.words);
  out.bits = BitVector::from_bytes(as_bytes(out.text));
  return out;
}

namespace {
CoverText grow_cover(const MarkovModel& model, Seed seed, std::size_t n_bits) {
  TextWalker walker(model, seed);
  CoverText out;
  while (out.text.size() * 8 < n_bits) {
    const std::string& w = walker.next_word();
    if (!out.text.empty()) out.text.push_back(' ');
    out.text += w;
    out.words.push_back(w);
  }
  out.bits = BitVector::from_bytes(as_bytes(out.text), n_bits);
  return out;
}
}  // namespace

std::pair<CoverText, CoverText> synth_pair(const MasterSecret& key, const MarkovModel& model,
                                           std::size_t n_bits) {
  if (n_bits < 8) throw ParameterError("synth_pair needs at least 8 bits");
  return {grow_cover(model, derive_seed(key, kCoverLabel1), n_bits),
          grow_cover(model, derive_seed(key, kCoverLabel2), n_bits)};
}

std::pair<CoverText, CoverText> synth_pair(const MasterSecret& key, const MarkovModel& model,
                                           std::size_t n_bits, std::span<const std::uint8_t> salt1,
                                           std::span<const std::uint8_t> salt2) {
  if (n_bits < 8) throw ParameterError("synth_pair needs at least 8 bits");
  auto label = [](std::string_view base, std::span<const std::uint8_t> salt) {
    std::string l(base);
    l.append(salt.begin(), salt.end());
    return l;
  };
  return {grow_cover(model, derive_seed(key, label(kCoverLabel1, salt1)), n_bits),
          grow_cover(model, derive_seed(key, label(kCoverLabel2, salt2)), n_bits)};
}

}  // namespace mcstego
