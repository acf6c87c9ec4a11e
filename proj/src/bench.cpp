#include "mcstego/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "mcstego/errors.hpp"
#include "mcstego/transport.hpp"

namespace mcstego {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

LoopbackResult run_loopback_session(const MasterSecret& vpri, std::span<const std::uint8_t> message,
                                    const RasterImage& cover, const MarkovModel& model,
                                    const ProtocolConfig& cfg, Receiver* receiver, bool quality) {
  LoopbackResult out;
  auto t0 = Clock::now();
  out.record = prepare_session(vpri, message, cover, model, cfg);
  out.times.sender_s = seconds_since(t0);

  // Transmission: serialize, queue on three simulated links, parse.
  t0 = Clock::now();
  SimNetwork net(0);
  ChannelTriple sinks;
  for (std::size_t i = 0; i < 3; ++i) {
    ChannelConfig link;
    link.address = std::string(channel_name(kChannels[i]));
    sinks[i] = [&net, link](const std::string& frame) { net.send(link, Bytes(frame.begin(), frame.end())); };
  }
  dispatch_session(out.record, sinks);
  if (out.record.failed) throw TransportError("loopback dispatch failed");
  std::vector<ChannelEnvelope> arrived;
  for (const SimFrame& f : net.drain()) {
    arrived.push_back(parse_envelope(std::string_view(reinterpret_cast<const char*>(f.data.data()), f.data.size())));
  }
  out.times.transmit_s = seconds_since(t0);

  t0 = Clock::now();
  std::optional<Receiver> local;
  if (!receiver) receiver = &local.emplace(vpri, cfg);
  for (const auto& env : arrived) receiver->deliver(env);
  const auto state = receiver->session(out.record.session_id);
  out.times.receiver_s = seconds_since(t0);

  out.status = state->status;
  out.reason = state->reason;
  if (state->plaintext) out.plaintext = *state->plaintext;
  const BitVector truth = BitVector::from_bytes(message);
  if (out.plaintext.size() == message.size()) {
    out.report = compare_bits(BitVector::from_bytes(out.plaintext), truth);
  } else {
    out.report.ber = 1.0;
  }
  out.report.latency_s = out.times.total_s();
  if (quality) {
    out.report.psnr_db = psnr(cover, out.record.stego);
    out.report.ssim = ssim(cover, out.record.stego);
  }
  return out;
}

Bytes bench_message(std::uint64_t seed, std::size_t index, std::size_t n_bytes) {
  SplitMix64 rng(seed ^ (0xA5A5A5A5ull + 0x9E3779B97F4A7C15ull * (index + 1)));
  Bytes m(n_bytes);
  for (auto& b : m) b = static_cast<std::uint8_t>(rng.next() >> 56);
  return m;
}

MasterSecret bench_secret(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x6b65796b65796b65ull);
  Bytes k(32);
  for (auto& b : k) b = static_cast<std::uint8_t>(rng.next() >> 56);
  return MasterSecret(std::move(k));
}

std::vector<BenchTrial> bench_protocol(const MasterSecret& vpri, const MarkovModel& model,
                                       const std::vector<RasterImage>& covers, const BenchConfig& cfg) {
  if (cfg.trials == 0) throw ParameterError("trials must be at least 1");
  if (covers.empty()) throw ParameterError("no covers");
  for (std::size_t bits : cfg.payload_bits) {
    if (bits < 8 || bits % 8 != 0) throw ParameterError("payload sizes must be positive multiples of 8");
  }
  const std::size_t total = cfg.trials * cfg.payload_bits.size();
  std::vector<BenchTrial> out(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < total;) {
      try {
        const std::size_t p = i / cfg.trials, t = i % cfg.trials;
        const std::size_t bits = cfg.payload_bits[p];
        const Bytes m = bench_message(cfg.seed, i, bits / 8);
        const std::size_t ci = t % covers.size();
        LoopbackResult r = run_loopback_session(vpri, m, covers[ci], model, cfg.protocol);
        out[i] = BenchTrial{bits, ci, r.report, r.times};
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, total));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace mcstego
