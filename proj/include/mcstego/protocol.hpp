#pragma once

// Three-channel sender/receiver. The sender ships gamma1 on C1, gamma2 on C2
// and the stego image on C3 with HMAC(vpri, nonce_c || PNG(s)). The receiver
// rejects reused nonces and bad MACs, then rebuilds the key stream from
// gamma1, extracts, error-corrects and unmasks.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include "mcstego/ecc.hpp"
#include "mcstego/embedding.hpp"
#include "mcstego/envelope.hpp"
#include "mcstego/image.hpp"
#include "mcstego/markov.hpp"
#include "mcstego/masking.hpp"

namespace mcstego {

struct ProtocolConfig {
  int window_radius = kDefaultWindowRadius;
  int png_compression = 3;
};

/// Everything the sender derived for one session, kept for audit and for the
/// attack harness.
struct SessionRecord {
  SessionId session_id;
  Nonce nonce_a, nonce_b, nonce_c;
  CoverText gamma1, gamma2;
  StegoKeyStream key_stream;
  MaskedPayload masked;
  EccPayload coded;
  RasterImage stego;
  Bytes stego_png;
  Digest mac{};
  std::array<ChannelEnvelope, 3> envelopes;  // indexed by channel
  std::array<std::optional<std::string>, 3> send_errors;
  bool failed = false;
};

/// MAC input: nonce_c || PNG bytes.
Digest c3_mac(const MasterSecret& vpri, const Nonce& nonce_c, std::span<const std::uint8_t> png);

/// Runs the sender pipeline without transmitting. Throws CapacityError before
/// anything else when the ECC-expanded payload does not fit the cover, and
/// ParameterError for an empty message.
SessionRecord prepare_session(const MasterSecret& vpri, std::span<const std::uint8_t> message,
                              const RasterImage& cover, const MarkovModel& model,
                              const ProtocolConfig& cfg = {});

/// One outbound channel: receives the serialized envelope, throws on failure.
using ChannelSink = std::function<void(const std::string& frame)>;
using ChannelTriple = std::array<ChannelSink, 3>;

/// prepare_session, then dispatches the three envelopes concurrently. A
/// failing channel is recorded in send_errors and marks the record failed.
SessionRecord send_session(const MasterSecret& vpri, std::span<const std::uint8_t> message,
                           const RasterImage& cover, const MarkovModel& model,
                           const ChannelTriple& channels, const ProtocolConfig& cfg = {});
/// Dispatch step alone, for an already prepared record.
void dispatch_session(SessionRecord& record, const ChannelTriple& channels);

/// Every nonce ever accepted. Safe for concurrent use.
class NonceRegistry {
 public:
  bool contains(const Nonce& n) const;
  /// Records n; false when it was already present.
  bool try_insert(const Nonce& n);
  std::size_t size() const;
  void clear();
  /// Text file of lowercase hex nonces, one per line.
  void load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mu_;
  std::set<Nonce> seen_;
};

enum class SessionStatus { pending, complete, rejected };
enum class RejectReason { none, replay, mac, corruption, malformed };
enum class Verdict { accepted, rejected_replay, rejected_mac, session_closed };

std::string_view to_string(SessionStatus s);
std::string_view to_string(RejectReason r);
std::string_view to_string(Verdict v);

struct SessionState {
  SessionId session_id;
  std::array<std::optional<ChannelEnvelope>, 3> received;
  SessionStatus status = SessionStatus::pending;
  RejectReason reason = RejectReason::none;
  std::optional<Bytes> plaintext;
};

/// Checks, in order: replay (nonce already seen), duplicate channel
/// (ProtocolError), C3 MAC. A rejection while pending ends the session with
/// that reason; status never moves backwards. An accepted envelope records its
/// nonce; the third accepted envelope triggers finalize_session.
/// Throws ProtocolError when env.session_id differs from state.session_id.
Verdict receive_envelope(SessionState& state, NonceRegistry& nonces, const MasterSecret& vpri,
                         const ChannelEnvelope& env, const ProtocolConfig& cfg = {});

/// Recovers the message from three accepted envelopes. Throws
/// UncorrectableError when a block exceeds the ECC bound and LengthError /
/// FormatError on inconsistent lengths or an undecodable image.
Bytes finalize_session(const SessionState& state, const MasterSecret& vpri,
                       const ProtocolConfig& cfg = {});

/// Multi-session receiver with a shared nonce history and per-session locks.
class Receiver {
 public:
  explicit Receiver(MasterSecret vpri, ProtocolConfig cfg = {},
                    std::shared_ptr<NonceRegistry> nonces = nullptr);

  Verdict deliver(const ChannelEnvelope& env);
  /// Parses a serialized envelope first; FormatError propagates.
  Verdict deliver_frame(std::string_view frame);

  std::optional<SessionState> session(const SessionId& id) const;
  NonceRegistry& nonces() { return *nonces_; }
  /// Drops all session state and nonce history (models a receiver restart
  /// without persistent storage).
  void reset();

 private:
  struct Slot {
    std::mutex mu;
    SessionState state;
  };
  std::shared_ptr<Slot> slot_for(const SessionId& id);

  MasterSecret vpri_;
  ProtocolConfig cfg_;
  std::shared_ptr<NonceRegistry> nonces_;
  mutable std::mutex map_mu_;
  std::map<SessionId, std::shared_ptr<Slot>> sessions_;
};

}  // namespace mcstego
