#include "mcstego/envelope.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "mcstego/errors.hpp"

namespace mcstego {

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::C1: return "C1";
    case Channel::C2: return "C2";
    case Channel::C3: return "C3";
  }
  return "?";
}

Channel parse_channel(std::string_view name) {
  if (name == "C1") return Channel::C1;
  if (name == "C2") return Channel::C2;
  if (name == "C3") return Channel::C3;
  throw FormatError("unknown channel '" + std::string(name) + "'");
}

SessionId SessionId::fresh() {
  SessionId id;
  secure_random(id.bytes);
  return id;
}

void validate_envelope(const ChannelEnvelope& env) {
  const bool c3 = env.channel == Channel::C3;
  if (env.mac.has_value() != c3) throw FormatError("mac must be present exactly on C3");
  if (env.payload_bits.has_value() != c3 || env.pad_bits.has_value() != c3) {
    throw FormatError("payload_bits/pad_bits must be present exactly on C3");
  }
  if (c3 && *env.payload_bits < 8) throw FormatError("payload_bits must be at least 8");
  if (c3 && *env.pad_bits >= 8) throw FormatError("pad_bits must be below 8");
}

namespace {

template <std::size_t N>
std::array<std::uint8_t, N> fixed_hex(const nlohmann::ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw FormatError(std::string(key) + " must be a hex string");
  const auto s = v.get<std::string>();
  if (std::any_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'F'; })) {
    throw FormatError(std::string(key) + " must be lowercase hex");
  }
  const Bytes raw = from_hex(s);
  if (raw.size() != N) throw FormatError(std::string(key) + " has the wrong length");
  std::array<std::uint8_t, N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

std::uint64_t unsigned_field(const nlohmann::ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) throw FormatError(std::string(key) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

std::string serialize_envelope(const ChannelEnvelope& env) {
  validate_envelope(env);
  nlohmann::ordered_json j;
  j["session_id"] = env.session_id.hex();
  j["channel"] = channel_name(env.channel);
  j["nonce"] = env.nonce.hex();
  if (env.payload_bits) j["payload_bits"] = *env.payload_bits;
  if (env.pad_bits) j["pad_bits"] = *env.pad_bits;
  j["body"] = base64_encode(env.body);
  if (env.mac) j["mac"] = to_hex(*env.mac);
  return j.dump();
}

ChannelEnvelope parse_envelope(std::string_view json) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("envelope is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("envelope must be a JSON object");
  static constexpr std::array<std::string_view, 7> kKeys{
      "session_id", "channel", "nonce", "payload_bits", "pad_bits", "body", "mac"};
  for (const auto& item : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), item.key()) == kKeys.end()) {
      throw FormatError("unexpected envelope field '" + item.key() + "'");
    }
  }
  ChannelEnvelope env;
  try {
    env.session_id.bytes = fixed_hex<16>(j, "session_id");
    if (!j.at("channel").is_string()) throw FormatError("channel must be a string");
    env.channel = parse_channel(j.at("channel").get<std::string>());
    env.nonce.bytes = fixed_hex<Nonce::kBytes>(j, "nonce");
    if (j.contains("payload_bits")) env.payload_bits = unsigned_field(j, "payload_bits");
    if (j.contains("pad_bits")) env.pad_bits = unsigned_field(j, "pad_bits");
    if (!j.at("body").is_string()) throw FormatError("body must be a base64 string");
    env.body = base64_decode(j.at("body").get<std::string>());
    if (j.contains("mac")) env.mac = fixed_hex<32>(j, "mac");
  } catch (const nlohmann::json::out_of_range& e) {
    throw FormatError(std::string("envelope field missing: ") + e.what());
  }
  validate_envelope(env);
  return env;
}

}  // namespace mcstego
