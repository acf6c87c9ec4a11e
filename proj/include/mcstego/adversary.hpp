#pragma once

// Extraction attacks against the scheme and its components: direct LSB
// extraction (CMO), brute force over tiled candidate keys, known key with
// guessed covers, cover selection by fingerprint distance, replay and
// in-flight tampering.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcstego/markov.hpp"
#include "mcstego/masking.hpp"
#include "mcstego/metrics.hpp"
#include "mcstego/protocol.hpp"

namespace mcstego {

enum class AttackMethod { cmo, hybrid_bruteforce, hybrid_known_key, cse, replay, mitm };
std::string_view to_string(AttackMethod m);
/// "cmo", "hybrid", "known-key", "cse", "replay", "mitm"; throws ParameterError.
AttackMethod parse_attack_method(std::string_view name);

/// All 2^c patterns of c bits, each repeated to `length` bits and truncated.
/// Pattern i is the c-bit big-endian encoding of i.
class CandidateKeySpace {
 public:
  /// base_bits in [1, 20]; throws ParameterError.
  CandidateKeySpace(int base_bits, std::size_t length);
  int base_bits() const { return base_bits_; }
  std::size_t length() const { return length_; }
  std::size_t size() const { return std::size_t{1} << base_bits_; }
  BitVector pattern(std::size_t index) const;
  BitVector key(std::size_t index) const;

 private:
  int base_bits_;
  std::size_t length_;
};

struct AttackSummary {
  MeanStd ber;
  MeanStd correlation;  // over trials where it is defined
  std::size_t correlation_undefined = 0;
  MeanStd psnr_db;
  MeanStd ssim;
  double success_rate = 0.0;
};
AttackSummary summarize(std::span<const ExtractionReport> trials);

struct AttackResult {
  AttackMethod method = AttackMethod::cmo;
  std::vector<ExtractionReport> trials;
  std::optional<std::size_t> best_key;
  std::vector<double> candidate_ber;  // brute force: BER of every candidate
  std::vector<Verdict> verdicts;      // replay / mitm: one per delivered envelope
  std::size_t accepted = 0;
  std::optional<SessionStatus> final_status;  // mitm
  RejectReason reason = RejectReason::none;   // mitm
  bool plaintext_intact = false;              // mitm: plaintext equals the sent message

  AttackSummary summary() const { return summarize(trials); }
};

/// The legitimate receiver's extraction path without any unmasking:
/// extract the ECC-coded length for |ground_truth| and decode it, keeping raw
/// octets of blocks that fail. PSNR/SSIM are filled when the cover is given.
ExtractionReport attack_cmo(const RasterImage& stego, const BitVector& ground_truth,
                            int window_radius = kDefaultWindowRadius,
                            const RasterImage* cover = nullptr);

/// Masked payload as the attacker sees it: extract + lenient ECC decode.
MaskedPayload intercept_masked(const RasterImage& stego, std::size_t payload_bits,
                               int window_radius = kDefaultWindowRadius);

/// m(k) = b ^ cover(gamma1) ^ cover(gamma2) ^ k for every candidate k; the
/// best key minimizes BER against ground truth, ties to the lowest index.
/// When masked_b is absent it is intercepted from the stego image.
AttackResult attack_hybrid_bruteforce(const RasterImage& stego, const CoverText& gamma1,
                                      const CoverText& gamma2,
                                      const std::optional<MaskedPayload>& masked_b,
                                      const CandidateKeySpace& keyspace,
                                      const BitVector& ground_truth,
                                      int window_radius = kDefaultWindowRadius);

/// Unmasks with the true key stream but attacker-chosen covers.
ExtractionReport attack_known_key(const RasterImage& stego, const StegoKeyStream& true_keystream,
                                  const std::pair<CoverText, CoverText>& wrong_covers,
                                  const BitVector& ground_truth,
                                  int window_radius = kDefaultWindowRadius);

struct CseSelection {
  std::size_t index = 0;
  std::size_t distance = 0;  // Hamming distance between 256-bit digests
};
/// SHA-256(secret) against SHA-256 of each cover's file bytes; argmin
/// distance, ties to the lowest index. Throws ParameterError on an empty library.
CseSelection cse_select(std::span<const std::uint8_t> secret, std::span<const Bytes> cover_files);
/// Same, with covers serialized as PNG.
CseSelection cse_select(std::span<const std::uint8_t> secret, std::span<const RasterImage> library);

/// Stego identifier -> secret.
using CseMapping = std::map<std::string, Bytes>;
/// Throws MissingEntryError for an unmapped identifier.
Bytes cse_extract(const CseMapping& mapping, const std::string& stego_path);

/// Delivers the recorded envelopes to target in every arrival order
/// (all permutations of the list) and counts acceptances.
AttackResult run_replay_attack(const std::vector<ChannelEnvelope>& recorded, Receiver& target);

struct TamperSpec {
  std::vector<std::size_t> c3_bit_flips;  // bit offsets into nonce_c || PNG body
  std::optional<std::string> gamma1_text;  // substituted C1 body
  std::optional<std::string> gamma2_text;  // substituted C2 body
  bool empty() const { return c3_bit_flips.empty() && !gamma1_text && !gamma2_text; }
};

/// Sends a prepared session through a seeded simulated network whose tamper
/// hooks apply `tamper`, delivers everything to target and records verdicts,
/// the final session status and whether the plaintext survived.
AttackResult run_mitm_attack(const SessionRecord& session, std::span<const std::uint8_t> message,
                             Receiver& target, const TamperSpec& tamper,
                             std::uint64_t network_seed = 0);

/// Sessions whose key stream is a planted tiled candidate.
struct TiledKeyFixture {
  int base_bits = 8;
  std::size_t planted = 0;
  std::vector<BitVector> messages;
  std::vector<MaskedPayload> masked;
};
TiledKeyFixture make_tiled_fixture(int base_bits, std::size_t planted, std::size_t sessions,
                                   std::size_t length_bits, std::uint64_t seed);

struct SweepRow {
  std::size_t key = 0;
  std::string pattern;  // base bits as '0'/'1'
  double mean_ber = 0.0;
  std::optional<double> mean_correlation;
};
/// Per-candidate means over the fixture, sorted by (mean_ber, key).
std::vector<SweepRow> sweep_keyspace(const TiledKeyFixture& fixture);

}  // namespace mcstego
