#include <gtest/gtest.h>

#include "mcstego/envelope.hpp"
#include "mcstego/errors.hpp"

using namespace mcstego;

namespace {

ChannelEnvelope sample_c3() {
  ChannelEnvelope env;
  for (std::size_t i = 0; i < 16; ++i) {
    env.session_id.bytes[i] = static_cast<std::uint8_t>(i);
    env.nonce.bytes[i] = static_cast<std::uint8_t>(0xA0 + i);
  }
  env.channel = Channel::C3;
  env.payload_bits = 64;
  env.pad_bits = 0;
  env.body = {0x89, 'P', 'N', 'G'};
  Digest mac{};
  mac[0] = 0xAB;
  env.mac = mac;
  return env;
}

}  // namespace

TEST(Envelope, CanonicalKeyOrderAndEncoding) {
  const std::string json = serialize_envelope(sample_c3());
  EXPECT_EQ(json,
            "{\"session_id\":\"000102030405060708090a0b0c0d0e0f\",\"channel\":\"C3\","
            "\"nonce\":\"a0a1a2a3a4a5a6a7a8a9aaabacadaeaf\",\"payload_bits\":64,\"pad_bits\":0,"
            "\"body\":\"iVBORw==\",\"mac\":\"ab000000000000000000000000000000000000000000000000000000000000"
            "00\"}");
}

TEST(Envelope, RoundTrip) {
  const ChannelEnvelope c3 = sample_c3();
  EXPECT_EQ(parse_envelope(serialize_envelope(c3)), c3);
  ChannelEnvelope c1;
  c1.channel = Channel::C1;
  c1.body = {'h', 'i'};
  const std::string json = serialize_envelope(c1);
  EXPECT_EQ(json.find("mac"), std::string::npos);
  EXPECT_EQ(json.find("payload_bits"), std::string::npos);
  EXPECT_EQ(parse_envelope(json), c1);
}

TEST(Envelope, FieldRulesPerChannel) {
  ChannelEnvelope env = sample_c3();
  env.channel = Channel::C2;
  EXPECT_THROW(serialize_envelope(env), FormatError);
  env = sample_c3();
  env.mac.reset();
  EXPECT_THROW(validate_envelope(env), FormatError);
  env = sample_c3();
  env.payload_bits = 7;
  EXPECT_THROW(validate_envelope(env), FormatError);
  env = sample_c3();
  env.pad_bits = 8;
  EXPECT_THROW(validate_envelope(env), FormatError);
}

TEST(Envelope, MalformedInputIsRejected) {
  const std::string good = serialize_envelope(sample_c3());
  EXPECT_THROW(parse_envelope("not json"), FormatError);
  EXPECT_THROW(parse_envelope("[]"), FormatError);
  EXPECT_THROW(parse_envelope("{\"channel\":\"C1\"}"), FormatError);
  std::string upper = good;
  upper.replace(upper.find("a0a1"), 4, "A0A1");
  EXPECT_THROW(parse_envelope(upper), FormatError);
  std::string bad_channel = good;
  bad_channel.replace(bad_channel.find("\"C3\""), 4, "\"C4\"");
  EXPECT_THROW(parse_envelope(bad_channel), FormatError);
  std::string extra = good;
  extra.insert(1, "\"x\":1,");
  EXPECT_THROW(parse_envelope(extra), FormatError);
  std::string negative = good;
  negative.replace(negative.find("\"payload_bits\":64"), 17, "\"payload_bits\":-64");
  EXPECT_THROW(parse_envelope(negative), FormatError);
}

TEST(Envelope, ChannelNames) {
  for (Channel c : kChannels) EXPECT_EQ(parse_channel(channel_name(c)), c);
  EXPECT_THROW(parse_channel("c1"), FormatError);
}
