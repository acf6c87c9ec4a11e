#pragma once

// Honest loopback sessions through the simulated network, and the payload
// sweep built on them.

#include <cstdint>
#include <vector>

#include "mcstego/metrics.hpp"
#include "mcstego/protocol.hpp"

namespace mcstego {

struct PhaseTimes {
  double sender_s = 0.0;    // synthesis, masking, ECC, embedding, PNG, MAC
  double transmit_s = 0.0;  // serialize, network, parse
  double receiver_s = 0.0;  // checks, extraction, decoding, unmasking
  double total_s() const { return sender_s + transmit_s + receiver_s; }
};

struct LoopbackResult {
  SessionRecord record;
  SessionStatus status = SessionStatus::pending;
  RejectReason reason = RejectReason::none;
  Bytes plaintext;
  ExtractionReport report;  // against the sent message; psnr/ssim vs the cover
  PhaseTimes times;
};

/// One session end to end on a fresh receiver (or `receiver` when given).
LoopbackResult run_loopback_session(const MasterSecret& vpri, std::span<const std::uint8_t> message,
                                    const RasterImage& cover, const MarkovModel& model,
                                    const ProtocolConfig& cfg = {}, Receiver* receiver = nullptr,
                                    bool quality = true);

/// Deterministic message of n octets for (seed, index).
Bytes bench_message(std::uint64_t seed, std::size_t index, std::size_t n_bytes);
/// Deterministic secret for seeded runs.
MasterSecret bench_secret(std::uint64_t seed);

struct BenchConfig {
  std::size_t trials = 100;  // per payload size
  std::vector<std::size_t> payload_bits{64, 128, 256, 512};
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  ProtocolConfig protocol;
};

struct BenchTrial {
  std::size_t payload_bits = 0;
  std::size_t cover_index = 0;
  ExtractionReport report;
  PhaseTimes times;
};

/// trials x payload sizes honest sessions; trial t uses cover t mod |covers|.
/// Results are ordered by (payload index, trial) regardless of jobs.
std::vector<BenchTrial> bench_protocol(const MasterSecret& vpri, const MarkovModel& model,
                                       const std::vector<RasterImage>& covers, const BenchConfig& cfg);

}  // namespace mcstego
