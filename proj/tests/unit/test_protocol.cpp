#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "mcstego/bench.hpp"
#include "mcstego/errors.hpp"
#include "mcstego/fixtures.hpp"
#include "mcstego/metrics.hpp"
#include "mcstego/protocol.hpp"

using namespace mcstego;

namespace {

struct World {
  MasterSecret vpri = bench_secret(7);
  MarkovModel model = MarkovModel::build(bundled_corpus());
  RasterImage cover = synthetic_cover(3, 128, 128);
};

World& world() {
  static World w;
  return w;
}

Bytes message_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

}  // namespace

TEST(Protocol, LoopbackRecoversMessage) {
  auto& w = world();
  const Bytes msg = message_of("attack at dawn, bring snacks");
  const SessionRecord rec = prepare_session(w.vpri, msg, w.cover, w.model);
  Receiver rx(w.vpri);
  EXPECT_EQ(rx.deliver(rec.envelopes[0]), Verdict::accepted);
  EXPECT_EQ(rx.deliver(rec.envelopes[1]), Verdict::accepted);
  EXPECT_EQ(rx.session(rec.session_id)->status, SessionStatus::pending);
  EXPECT_EQ(rx.deliver(rec.envelopes[2]), Verdict::accepted);
  const auto state = rx.session(rec.session_id);
  ASSERT_TRUE(state);
  EXPECT_EQ(state->status, SessionStatus::complete);
  EXPECT_EQ(*state->plaintext, msg);
}

TEST(Protocol, EveryArrivalOrderCompletes) {
  auto& w = world();
  const Bytes msg = message_of("order independence");
  std::array<std::size_t, 3> order{0, 1, 2};
  int orders = 0;
  do {
    const SessionRecord rec = prepare_session(w.vpri, msg, w.cover, w.model);
    Receiver rx(w.vpri);
    for (std::size_t i : order) EXPECT_EQ(rx.deliver(rec.envelopes[i]), Verdict::accepted);
    const auto state = rx.session(rec.session_id);
    ASSERT_TRUE(state);
    EXPECT_EQ(state->status, SessionStatus::complete);
    EXPECT_EQ(*state->plaintext, msg);
    ++orders;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(orders, 6);
}

TEST(Protocol, SerializedFramesRoundTripThroughReceiver) {
  auto& w = world();
  const Bytes msg = message_of("framed");
  const SessionRecord rec = prepare_session(w.vpri, msg, w.cover, w.model);
  Receiver rx(w.vpri);
  for (const auto& env : rec.envelopes) EXPECT_EQ(rx.deliver_frame(serialize_envelope(env)), Verdict::accepted);
  EXPECT_EQ(*rx.session(rec.session_id)->plaintext, msg);
  EXPECT_THROW(rx.deliver_frame("{}"), FormatError);
}

TEST(Protocol, ReplayedEnvelopesAreRejected) {
  auto& w = world();
  const SessionRecord rec = prepare_session(w.vpri, message_of("once only"), w.cover, w.model);
  auto history = std::make_shared<NonceRegistry>();
  Receiver rx(w.vpri, {}, history);
  for (const auto& env : rec.envelopes) rx.deliver(env);
  EXPECT_EQ(history->size(), 3u);
  for (const auto& env : rec.envelopes) EXPECT_EQ(rx.deliver(env), Verdict::rejected_replay);
  EXPECT_EQ(rx.session(rec.session_id)->status, SessionStatus::complete);

  // Shared history catches the replay even on a second receiver.
  Receiver other(w.vpri, {}, history);
  EXPECT_EQ(other.deliver(rec.envelopes[2]), Verdict::rejected_replay);
  EXPECT_EQ(other.session(rec.session_id)->reason, RejectReason::replay);
}

TEST(Protocol, DuplicateChannelWithFreshNonceIsProtocolError) {
  auto& w = world();
  const SessionRecord rec = prepare_session(w.vpri, message_of("dup"), w.cover, w.model);
  Receiver rx(w.vpri);
  rx.deliver(rec.envelopes[0]);
  ChannelEnvelope again = rec.envelopes[0];
  again.nonce = fresh_nonce();
  EXPECT_THROW(rx.deliver(again), ProtocolError);
}

TEST(Protocol, C3BitFlipFailsMac) {
  auto& w = world();
  const SessionRecord rec = prepare_session(w.vpri, message_of("integrity"), w.cover, w.model);
  for (std::size_t pos : {std::size_t{0}, std::size_t{127}, std::size_t{128}, std::size_t{4000}}) {
    ChannelEnvelope bad = rec.envelopes[2];
    if (pos < 128) {
      bad.nonce.bytes[pos / 8] ^= static_cast<std::uint8_t>(0x80u >> (pos % 8));
    } else {
      const std::size_t b = pos - 128;
      bad.body[b / 8] ^= static_cast<std::uint8_t>(0x80u >> (b % 8));
    }
    Receiver rx(w.vpri);
    rx.deliver(rec.envelopes[0]);
    rx.deliver(rec.envelopes[1]);
    EXPECT_EQ(rx.deliver(bad), Verdict::rejected_mac) << pos;
    const auto state = rx.session(rec.session_id);
    EXPECT_EQ(state->status, SessionStatus::rejected);
    EXPECT_EQ(state->reason, RejectReason::mac);
    EXPECT_FALSE(state->plaintext);
    // Status is final once rejected.
    EXPECT_EQ(rx.deliver(rec.envelopes[2]), Verdict::session_closed);
  }
}

TEST(Protocol, WrongSecretFailsMac) {
  auto& w = world();
  const SessionRecord rec = prepare_session(w.vpri, message_of("who are you"), w.cover, w.model);
  Receiver rx(bench_secret(8));
  EXPECT_EQ(rx.deliver(rec.envelopes[2]), Verdict::rejected_mac);
}

TEST(Protocol, CapacityAndEmptyMessageChecks) {
  auto& w = world();
  const RasterImage tiny(8, 8, 1, 128);
  EXPECT_THROW(prepare_session(w.vpri, message_of("too long for 64 samples"), tiny, w.model),
               CapacityError);
  EXPECT_THROW(prepare_session(w.vpri, Bytes{}, w.cover, w.model), ParameterError);
}

TEST(Protocol, ChannelErrorsStayWithinEcc) {
  // Corrupting up to 16 coded octets in one block still decodes; 17 does not.
  auto& w = world();
  const Bytes msg = message_of("survives some noise");
  const SessionRecord rec = prepare_session(w.vpri, msg, w.cover, w.model);
  const EmbeddingPlan plan = plan_embedding(w.cover, rec.coded.coded_bits.size());
  for (std::size_t bad_octets : {16u, 17u}) {
    RasterImage stego = rec.stego;
    for (std::size_t o = 0; o < bad_octets; ++o) {
      const Slot& slot = plan.slots[o * 8];
      stego.at(slot.row, slot.col, slot.channel) ^= 1;
    }
    SessionState state;
    state.session_id = rec.session_id;
    state.received = {rec.envelopes[0], rec.envelopes[1], rec.envelopes[2]};
    state.received[2]->body = encode_png(stego);
    if (bad_octets == 16) {
      EXPECT_EQ(finalize_session(state, w.vpri), msg);
    } else {
      EXPECT_THROW(finalize_session(state, w.vpri), UncorrectableError);
    }
  }
}

TEST(Protocol, SubstitutedCoverTextGivesWrongPlaintext) {
  // The MAC only covers C3, so a replaced C1 body still completes the session
  // but unmasks to garbage.
  auto& w = world();
  const Bytes msg = message_of("cover swap");
  const SessionRecord rec = prepare_session(w.vpri, msg, w.cover, w.model);
  ChannelEnvelope c2 = rec.envelopes[1];
  c2.body = message_of("the quiet river bends past the old mill");
  Receiver rx(w.vpri);
  rx.deliver(rec.envelopes[0]);
  rx.deliver(c2);
  rx.deliver(rec.envelopes[2]);
  const auto state = rx.session(rec.session_id);
  EXPECT_EQ(state->status, SessionStatus::complete);
  EXPECT_NE(*state->plaintext, msg);
}

TEST(Protocol, SendSessionDispatchesAllChannels) {
  auto& w = world();
  const Bytes msg = message_of("dispatch");
  std::array<std::string, 3> got;
  ChannelTriple sinks;
  for (std::size_t i = 0; i < 3; ++i) sinks[i] = [&got, i](const std::string& f) { got[i] = f; };
  const SessionRecord rec = send_session(w.vpri, msg, w.cover, w.model, sinks);
  EXPECT_FALSE(rec.failed);
  Receiver rx(w.vpri);
  for (const auto& f : got) rx.deliver_frame(f);
  EXPECT_EQ(*rx.session(rec.session_id)->plaintext, msg);

  sinks[1] = [](const std::string&) { throw TransportError("link down"); };
  const SessionRecord broken = send_session(w.vpri, msg, w.cover, w.model, sinks);
  EXPECT_TRUE(broken.failed);
  EXPECT_TRUE(broken.send_errors[1]);
  EXPECT_FALSE(broken.send_errors[0]);
}

TEST(Protocol, NonceRegistryPersists) {
  NonceRegistry reg;
  const Nonce a = fresh_nonce(), b = fresh_nonce();
  EXPECT_TRUE(reg.try_insert(a));
  EXPECT_FALSE(reg.try_insert(a));
  EXPECT_TRUE(reg.try_insert(b));
  const auto path = std::filesystem::temp_directory_path() / "mcstego_nonces_test.txt";
  reg.save(path);
  NonceRegistry loaded;
  loaded.load(path);
  EXPECT_EQ(loaded.size(), 2u);
  EXPECT_TRUE(loaded.contains(a));
  EXPECT_TRUE(loaded.contains(b));
  std::filesystem::remove(path);
}

TEST(Protocol, SessionNoncesAreDistinct) {
  auto& w = world();
  const SessionRecord r1 = prepare_session(w.vpri, message_of("a"), w.cover, w.model);
  const SessionRecord r2 = prepare_session(w.vpri, message_of("a"), w.cover, w.model);
  EXPECT_NE(r1.session_id, r2.session_id);
  EXPECT_NE(r1.nonce_a, r1.nonce_b);
  EXPECT_NE(r1.nonce_c, r2.nonce_c);
}

TEST(Protocol, MaskIsFreshPerSession) {
  // Same secret, same message: covers and key stream are session bound, so the
  // masked payloads differ and their XOR does not cancel to m1 ^ m2.
  auto& w = world();
  const Bytes msg = message_of("same words twice");
  const SessionRecord r1 = prepare_session(w.vpri, msg, w.cover, w.model);
  const SessionRecord r2 = prepare_session(w.vpri, msg, w.cover, w.model);
  EXPECT_NE(r1.gamma1.text, r2.gamma1.text);
  EXPECT_NE(r1.key_stream.bits, r2.key_stream.bits);
  const double diff = ber(r1.masked.bits, r2.masked.bits);
  EXPECT_GT(diff, 0.3);
  EXPECT_LT(diff, 0.7);
}

TEST(Bench, QualityColumnsIgnoreJobCount) {
  auto& w = world();
  const std::vector<RasterImage> covers{synthetic_cover(1, 96, 96), synthetic_cover(2, 96, 96)};
  BenchConfig cfg;
  cfg.trials = 3;
  cfg.payload_bits = {64, 128};
  auto run = [&](std::size_t jobs) {
    cfg.jobs = jobs;
    return bench_protocol(w.vpri, w.model, covers, cfg);
  };
  const auto a = run(1), b = run(3);
  ASSERT_EQ(a.size(), 6u);
  ASSERT_EQ(b.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].payload_bits, b[i].payload_bits);
    EXPECT_EQ(a[i].cover_index, b[i].cover_index);
    EXPECT_TRUE(a[i].report.success);
    EXPECT_TRUE(b[i].report.success);
    EXPECT_EQ(a[i].report.ber, b[i].report.ber);
  }
}
