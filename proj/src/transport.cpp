#include "mcstego/transport.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <future>

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include "mcstego/crypto.hpp"
#include "mcstego/envelope.hpp"
#include "mcstego/errors.hpp"

namespace mcstego {

SplitMix64& SimNetwork::rng_for(const std::string& queue) {
  auto it = rngs_.find(queue);
  if (it == rngs_.end()) {
    const Digest d = sha256(as_bytes(queue));
    std::uint64_t mix = 0;
    for (int i = 0; i < 8; ++i) mix = (mix << 8) | d[i];
    it = rngs_.emplace(queue, SplitMix64(seed_ ^ mix)).first;
  }
  return it->second;
}

DeliveryReceipt SimNetwork::send(const ChannelConfig& cfg, Bytes frame) {
  if (frame.size() > kMaxFrameBytes) throw ParameterError("frame exceeds 64 MiB");
  if (cfg.drop_prob < 0.0 || cfg.drop_prob > 1.0) throw ParameterError("drop_prob outside [0, 1]");
  if (cfg.delay_min_ms < 0.0 || cfg.delay_max_ms < cfg.delay_min_ms) {
    throw ParameterError("invalid delay range");
  }
  std::lock_guard lock(mu_);
  SplitMix64& rng = rng_for(cfg.address);
  // Both draws happen for every frame so the schedule does not depend on
  // earlier drop outcomes.
  const double u_drop = rng.next_unit();
  const double u_delay = rng.next_unit();
  DeliveryReceipt receipt;
  receipt.bytes = frame.size();
  if (u_drop < cfg.drop_prob) return receipt;
  if (cfg.tamper_hook) cfg.tamper_hook(frame);
  receipt.delivered = true;
  receipt.deliver_at_ms = clock_ms_ + cfg.delay_min_ms + u_delay * (cfg.delay_max_ms - cfg.delay_min_ms);
  queued_.push_back(SimFrame{cfg.address, receipt.deliver_at_ms, next_seq_++, std::move(frame)});
  return receipt;
}

namespace {

bool delivery_order(const SimFrame& a, const SimFrame& b) {
  return std::tie(a.deliver_at_ms, a.queue, a.seq) < std::tie(b.deliver_at_ms, b.queue, b.seq);
}

}  // namespace

std::vector<SimFrame> SimNetwork::drain() {
  std::lock_guard lock(mu_);
  std::vector<SimFrame> out = std::move(queued_);
  queued_.clear();
  std::sort(out.begin(), out.end(), delivery_order);
  if (!out.empty()) clock_ms_ = std::max(clock_ms_, out.back().deliver_at_ms);
  return out;
}

std::optional<SimFrame> SimNetwork::poll(const std::string& queue) {
  std::lock_guard lock(mu_);
  auto best = queued_.end();
  for (auto it = queued_.begin(); it != queued_.end(); ++it) {
    if (it->queue == queue && (best == queued_.end() || delivery_order(*it, *best))) best = it;
  }
  if (best == queued_.end()) return std::nullopt;
  SimFrame f = std::move(*best);
  queued_.erase(best);
  clock_ms_ = std::max(clock_ms_, f.deliver_at_ms);
  return f;
}

std::size_t SimNetwork::pending() const {
  std::lock_guard lock(mu_);
  return queued_.size();
}

double SimNetwork::now_ms() const {
  std::lock_guard lock(mu_);
  return clock_ms_;
}

DeliveryReceipt send_frame(const ChannelConfig& cfg, Bytes frame, SimNetwork* net) {
  if (frame.size() > kMaxFrameBytes) throw ParameterError("frame exceeds 64 MiB");
  if (cfg.backend == Backend::sim) {
    if (!net) throw ParameterError("sim backend needs a network");
    return net->send(cfg, std::move(frame));
  }
  if (cfg.tamper_hook) cfg.tamper_hook(frame);
  TcpStream stream = TcpStream::connect(cfg.address);
  stream.write_frame(frame);
  return DeliveryReceipt{true, frame.size(), 0.0};
}

std::pair<std::string, std::uint16_t> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw ParameterError("address must be host:port: " + address);
  const std::string host = address.substr(0, colon);
  const std::string port = address.substr(colon + 1);
  if (port.empty() || port.size() > 5 ||
      !std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParameterError("bad port in " + address);
  }
  const unsigned long value = std::stoul(port);
  if (value > 65535) throw ParameterError("bad port in " + address);
  return {host.empty() ? "127.0.0.1" : host, static_cast<std::uint16_t>(value)};
}

namespace {

std::string sys_error(const std::string& what) { return what + ": " + std::strerror(errno); }

struct AddrInfo {
  addrinfo* head = nullptr;
  AddrInfo(const std::string& host, std::uint16_t port, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) hints.ai_flags = AI_PASSIVE;
    const std::string service = std::to_string(port);
    const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &head);
    if (rc != 0) throw TransportError("resolve " + host + ": " + ::gai_strerror(rc));
  }
  ~AddrInfo() {
    if (head) ::freeaddrinfo(head);
  }
};

void write_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw TransportError(sys_error("send"));
    }
    data += w;
    n -= static_cast<std::size_t>(w);
  }
}

// False on clean EOF before any byte was read.
bool read_all(int fd, std::uint8_t* data, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, data + got, n - got, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(sys_error("recv"));
    }
    if (r == 0) {
      if (got == 0) return false;
      throw TransportError("connection closed mid-frame");
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

TcpStream& TcpStream::operator=(TcpStream&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(o.fd_, -1);
  }
  return *this;
}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

TcpStream TcpStream::connect(const std::string& address) {
  const auto [host, port] = split_address(address);
  AddrInfo info(host, port, false);
  int last_errno = 0;
  for (addrinfo* ai = info.head; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_errno = errno;
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return TcpStream(fd);
    }
    last_errno = errno;
    ::close(fd);
  }
  throw TransportError("connect " + address + ": " + std::strerror(last_errno));
}

void TcpStream::write_frame(std::span<const std::uint8_t> frame) {
  if (frame.size() > kMaxFrameBytes) throw ParameterError("frame exceeds 64 MiB");
  const auto n = static_cast<std::uint32_t>(frame.size());
  const std::uint8_t header[4] = {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                                  static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
  write_all(fd_, header, 4);
  write_all(fd_, frame.data(), frame.size());
}

Bytes TcpStream::read_frame() {
  std::uint8_t header[4];
  if (!read_all(fd_, header, 4)) throw TransportError("connection closed");
  const std::uint32_t n = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                          (std::uint32_t{header[2]} << 8) | header[3];
  if (n > kMaxFrameBytes) throw TransportError("frame length " + std::to_string(n) + " exceeds 64 MiB");
  Bytes frame(n);
  if (n > 0 && !read_all(fd_, frame.data(), n)) throw TransportError("connection closed mid-frame");
  return frame;
}

TcpListener::TcpListener(const std::string& address) {
  const auto [host, port] = split_address(address);
  AddrInfo info(host, port, true);
  int last_errno = 0;
  for (addrinfo* ai = info.head; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_errno = errno;
      continue;
    }
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      sockaddr_storage bound{};
      socklen_t len = sizeof bound;
      ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
      port_ = ntohs(bound.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port
                                                : reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
      fd_ = fd;
      return;
    }
    last_errno = errno;
    ::close(fd);
  }
  throw TransportError("listen " + address + ": " + std::strerror(last_errno));
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

TcpStream TcpListener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return TcpStream(fd);
    if (errno != EINTR) throw TransportError(sys_error("accept"));
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::vector<LatencyRow> measure_latency(const ChannelConfig& cfg,
                                        const std::vector<std::size_t>& frame_sizes,
                                        std::size_t trials) {
  if (trials == 0) throw ParameterError("need at least one trial");
  SimNetwork net(0);
  std::optional<TcpListener> listener;
  std::optional<TcpStream> client, server;
  if (cfg.backend == Backend::tcp) {
    if (cfg.address.empty()) {
      listener.emplace("127.0.0.1:0");
      client.emplace(TcpStream::connect("127.0.0.1:" + std::to_string(listener->port())));
      server.emplace(listener->accept());
    } else {
      client.emplace(TcpStream::connect(cfg.address));
    }
  }

  SplitMix64 fill(0x5eed);
  std::vector<LatencyRow> rows;
  for (std::size_t size : frame_sizes) {
    ChannelEnvelope env;
    env.channel = Channel::C1;
    env.body.resize(size);
    for (auto& byte : env.body) byte = static_cast<std::uint8_t>(fill.next());

    std::vector<double> ser, tx, de, total;
    for (std::size_t t = 0; t < trials; ++t) {
      auto t0 = Clock::now();
      const std::string json = serialize_envelope(env);
      Bytes frame(json.begin(), json.end());
      const double t_ser = ms_since(t0);

      auto t1 = Clock::now();
      Bytes received;
      if (cfg.backend == Backend::sim) {
        ChannelConfig sim = cfg;
        sim.drop_prob = 0.0;
        if (sim.address.empty()) sim.address = "latency";
        net.send(sim, std::move(frame));
        received = net.poll(sim.address)->data;
      } else if (server) {
        auto reader = std::async(std::launch::async, [&] { return server->read_frame(); });
        client->write_frame(frame);
        received = reader.get();
      } else {
        client->write_frame(frame);
        received = std::move(frame);
      }
      const double t_tx = ms_since(t1);

      auto t2 = Clock::now();
      const ChannelEnvelope back =
          parse_envelope(std::string_view(reinterpret_cast<const char*>(received.data()), received.size()));
      const double t_de = ms_since(t2);
      if (back.body.size() != size) throw TransportError("latency probe corrupted in transit");

      ser.push_back(t_ser);
      tx.push_back(t_tx);
      de.push_back(t_de);
      total.push_back(t_ser + t_tx + t_de);
    }
    rows.push_back(LatencyRow{size, mean_std(ser), mean_std(tx), mean_std(de), mean_std(total)});
  }
  return rows;
}

}  // namespace mcstego
