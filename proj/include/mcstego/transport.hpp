#pragma once

// Channel backends: an in-process simulated network with delay, drop and an
// in-flight tamper hook, and plain TCP with 4-octet big-endian length frames.

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mcstego/bits.hpp"
#include "mcstego/markov.hpp"
#include "mcstego/metrics.hpp"

namespace mcstego {

inline constexpr std::size_t kMaxFrameBytes = 64u << 20;

enum class Backend { sim, tcp };

using TamperHook = std::function<void(Bytes& frame)>;

struct ChannelConfig {
  Backend backend = Backend::sim;
  std::string address;  // "host:port" for tcp, queue id for sim
  double delay_min_ms = 0.0;
  double delay_max_ms = 0.0;
  double drop_prob = 0.0;
  TamperHook tamper_hook;  // attack scenarios only
};

struct DeliveryReceipt {
  bool delivered = false;
  std::size_t bytes = 0;
  double deliver_at_ms = 0.0;  // virtual time (sim); 0 for tcp
};

struct SimFrame {
  std::string queue;
  double deliver_at_ms = 0.0;
  std::uint64_t seq = 0;
  Bytes data;
};

/// Deterministic in-memory network. Each queue owns a generator seeded from
/// (seed, queue id), so the drop pattern and delays of a queue depend only on
/// the seed and the frames sent on it. Frames are released in order of
/// (deliver_at, queue, send sequence). Safe for concurrent senders.
class SimNetwork {
 public:
  explicit SimNetwork(std::uint64_t seed = 0) : seed_(seed) {}

  DeliveryReceipt send(const ChannelConfig& cfg, Bytes frame);
  /// Removes and returns every queued frame in delivery order and advances
  /// the clock to the last delivery time.
  std::vector<SimFrame> drain();
  /// Next frame for one queue, in delivery order.
  std::optional<SimFrame> poll(const std::string& queue);
  std::size_t pending() const;
  double now_ms() const;

 private:
  SplitMix64& rng_for(const std::string& queue);

  std::uint64_t seed_;
  mutable std::mutex mu_;
  double clock_ms_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::map<std::string, SplitMix64> rngs_;
  std::vector<SimFrame> queued_;
};

/// Throws ParameterError for frames over kMaxFrameBytes. The sim backend
/// needs a network; tcp connects to cfg.address, writes one frame and closes.
/// drop_prob and tamper_hook are honored by the sim backend; tcp applies the
/// tamper hook only.
DeliveryReceipt send_frame(const ChannelConfig& cfg, Bytes frame, SimNetwork* net = nullptr);

/// Connected TCP stream (move-only RAII).
class TcpStream {
 public:
  explicit TcpStream(int fd) : fd_(fd) {}
  TcpStream(TcpStream&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  TcpStream& operator=(TcpStream&& o) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;
  ~TcpStream();

  static TcpStream connect(const std::string& address);
  void write_frame(std::span<const std::uint8_t> frame);
  /// Throws TransportError on EOF mid-frame or an oversize length prefix.
  Bytes read_frame();

 private:
  int fd_ = -1;
};

class TcpListener {
 public:
  /// "host:port"; port 0 picks an ephemeral port.
  explicit TcpListener(const std::string& address);
  TcpListener(TcpListener&& o) noexcept : fd_(std::exchange(o.fd_, -1)), port_(o.port_) {}
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener();

  std::uint16_t port() const { return port_; }
  TcpStream accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Splits "host:port"; throws ParameterError.
std::pair<std::string, std::uint16_t> split_address(const std::string& address);

struct LatencyRow {
  std::size_t frame_bytes = 0;
  MeanStd serialize_ms;
  MeanStd transmit_ms;
  MeanStd deserialize_ms;
  MeanStd total_ms;
};

/// Wall-clock per phase for envelopes with bodies of the given sizes. The
/// tcp backend measures against an in-process loopback listener when
/// cfg.address is empty.
std::vector<LatencyRow> measure_latency(const ChannelConfig& cfg,
                                        const std::vector<std::size_t>& frame_sizes,
                                        std::size_t trials = 100);

}  // namespace mcstego
