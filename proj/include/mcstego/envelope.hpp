#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mcstego/bits.hpp"
#include "mcstego/crypto.hpp"

namespace mcstego {

enum class Channel : std::uint8_t { C1 = 0, C2 = 1, C3 = 2 };

inline constexpr std::array<Channel, 3> kChannels{Channel::C1, Channel::C2, Channel::C3};

std::string_view channel_name(Channel c);
/// Throws FormatError for anything but "C1", "C2", "C3".
Channel parse_channel(std::string_view name);
inline std::size_t channel_index(Channel c) { return static_cast<std::size_t>(c); }

struct SessionId {
  std::array<std::uint8_t, 16> bytes{};
  std::string hex() const { return to_hex(bytes); }
  static SessionId fresh();
  friend auto operator<=>(const SessionId&, const SessionId&) = default;
};

/// One wire message. Cover channels carry UTF-8 text, C3 carries PNG bytes
/// plus the MAC and the payload-length header.
struct ChannelEnvelope {
  SessionId session_id;
  Channel channel = Channel::C1;
  Nonce nonce;
  std::optional<std::uint64_t> payload_bits;
  std::optional<std::uint64_t> pad_bits;
  Bytes body;
  std::optional<Digest> mac;

  friend bool operator==(const ChannelEnvelope&, const ChannelEnvelope&) = default;
};

/// Throws FormatError when the per-channel field rules are violated: mac,
/// payload_bits and pad_bits present exactly on C3, payload_bits >= 8,
/// pad_bits < 8.
void validate_envelope(const ChannelEnvelope& env);

/// Canonical JSON: keys in the order session_id, channel, nonce,
/// payload_bits, pad_bits, body, mac; absent fields omitted; hex lowercase;
/// body base64. No whitespace.
std::string serialize_envelope(const ChannelEnvelope& env);
/// Inverse of serialize_envelope; validates. Throws FormatError.
ChannelEnvelope parse_envelope(std::string_view json);

}  // namespace mcstego
