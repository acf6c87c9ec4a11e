#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mcstego/bits.hpp"
#include "mcstego/crypto.hpp"

namespace mcstego {

/// First-order word-level Markov chain with maximum-likelihood bigram
/// probabilities. Vocabulary, successor lists and start tokens are kept in
/// lexicographic order so the model is a pure function of the corpus.
class MarkovModel {
 public:
  struct Transition {
    std::size_t successor;  // index into vocabulary()
    double probability;
  };

  /// Whitespace tokenization, punctuation stays attached. Throws CorpusError
  /// when fewer than two tokens are present.
  static MarkovModel build(std::string_view corpus);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<std::size_t>& start_tokens() const { return start_tokens_; }
  std::span<const Transition> successors(std::size_t token) const { return transitions_[token]; }

  /// Index of a token, or npos when it is not in the vocabulary.
  std::size_t find(std::string_view token) const;
  /// Pr(next | prev); zero for unknown tokens or absent transitions.
  double probability(std::string_view prev, std::string_view next) const;

  /// Deterministic JSON with ordered keys, for cross-implementation diffing.
  std::string to_json() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> vocabulary_;
  std::vector<std::vector<Transition>> transitions_;
  std::vector<std::size_t> start_tokens_;
};

inline MarkovModel build_chain(std::string_view corpus) { return MarkovModel::build(corpus); }

/// splitmix64; each draw is mapped to [0,1) from its top 53 bits.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct CoverText {
  std::vector<std::string> words;
  std::string text;  // words joined by single spaces
  BitVector bits;    // UTF-8 of text, MSB-first; may be truncated by synth_pair

  /// Rebuilds a cover from received text (bits = full UTF-8 view).
  static CoverText from_text(std::string_view text);
};

/// Sequential walk over the chain. Word i depends only on the seed and the
/// words before it, so a longer walk extends a shorter one.
class TextWalker {
 public:
  TextWalker(const MarkovModel& model, Seed seed);
  const std::string& next_word();

 private:
  std::size_t pick_start();

  const MarkovModel& model_;
  SplitMix64 rng_;
  std::size_t current_ = MarkovModel::npos;
};

CoverText generate_text(const MarkovModel& model, Seed seed, std::size_t n_words);

/// (gamma1, gamma2) from the "cover-1"/"cover-2" seeds; each grows word by
/// word until its UTF-8 view covers n_bits, then bits are truncated to n_bits.
std::pair<CoverText, CoverText> synth_pair(const MasterSecret& key, const MarkovModel& model,
                                           std::size_t n_bits);
/// Session-bound variant: the labels become "cover-1" || salt1 and
/// "cover-2" || salt2, so every session draws its own covers and hence its
/// own stego key stream. The sender salts with nonce_a and nonce_b.
std::pair<CoverText, CoverText> synth_pair(const MasterSecret& key, const MarkovModel& model,
                                           std::size_t n_bits, std::span<const std::uint8_t> salt1,
                                           std::span<const std::uint8_t> salt2);

std::vector<std::string> tokenize(std::string_view text);

}  // namespace mcstego
