#include "mcstego/protocol.hpp"

#include <fstream>
#include <future>

#include "mcstego/errors.hpp"

namespace mcstego {

Digest c3_mac(const MasterSecret& vpri, const Nonce& nonce_c, std::span<const std::uint8_t> png) {
  Bytes input(nonce_c.bytes.begin(), nonce_c.bytes.end());
  input.insert(input.end(), png.begin(), png.end());
  return hmac_sha256(vpri.bytes(), input);
}

SessionRecord prepare_session(const MasterSecret& vpri, std::span<const std::uint8_t> message,
                              const RasterImage& cover, const MarkovModel& model,
                              const ProtocolConfig& cfg) {
  if (message.empty()) throw ParameterError("message must not be empty");
  const std::size_t n = message.size() * 8;
  const std::size_t coded_len = ecc_coded_bits(n);
  if (coded_len > cover.capacity()) {
    throw CapacityError("coded payload of " + std::to_string(coded_len) +
                        " bits exceeds cover capacity of " + std::to_string(cover.capacity()));
  }

  SessionRecord rec;
  rec.session_id = SessionId::fresh();
  rec.nonce_a = fresh_nonce();
  rec.nonce_b = fresh_nonce();
  rec.nonce_c = fresh_nonce();

  std::tie(rec.gamma1, rec.gamma2) = synth_pair(vpri, model, n, rec.nonce_a.bytes, rec.nonce_b.bytes);
  rec.key_stream = derive_stego_key(vpri, rec.gamma1, n);
  rec.masked = protocol_mask(BitVector::from_bytes(message), rec.gamma1, rec.gamma2, rec.key_stream);
  rec.coded = ecc_encode(rec.masked);
  rec.stego = embed(cover, rec.coded.coded_bits, cfg.window_radius);
  rec.stego_png = encode_png(rec.stego, cfg.png_compression);
  rec.mac = c3_mac(vpri, rec.nonce_c, rec.stego_png);

  auto text_envelope = [&](Channel ch, const Nonce& nonce, const CoverText& gamma) {
    ChannelEnvelope env;
    env.session_id = rec.session_id;
    env.channel = ch;
    env.nonce = nonce;
    env.body.assign(gamma.text.begin(), gamma.text.end());
    return env;
  };
  rec.envelopes[0] = text_envelope(Channel::C1, rec.nonce_a, rec.gamma1);
  rec.envelopes[1] = text_envelope(Channel::C2, rec.nonce_b, rec.gamma2);

  ChannelEnvelope& c3 = rec.envelopes[2];
  c3.session_id = rec.session_id;
  c3.channel = Channel::C3;
  c3.nonce = rec.nonce_c;
  c3.payload_bits = n;
  c3.pad_bits = rec.coded.pad_bits;
  c3.body = rec.stego_png;
  c3.mac = rec.mac;
  return rec;
}

void dispatch_session(SessionRecord& record, const ChannelTriple& channels) {
  std::array<std::future<void>, 3> pending;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!channels[i]) throw ParameterError("channel sink missing");
    const std::string frame = serialize_envelope(record.envelopes[i]);
    pending[i] = std::async(std::launch::async, [&sink = channels[i], frame] { sink(frame); });
  }
  for (std::size_t i = 0; i < 3; ++i) {
    try {
      pending[i].get();
    } catch (const std::exception& e) {
      record.send_errors[i] = e.what();
      record.failed = true;
    }
  }
}

SessionRecord send_session(const MasterSecret& vpri, std::span<const std::uint8_t> message,
                           const RasterImage& cover, const MarkovModel& model,
                           const ChannelTriple& channels, const ProtocolConfig& cfg) {
  SessionRecord rec = prepare_session(vpri, message, cover, model, cfg);
  dispatch_session(rec, channels);
  return rec;
}

bool NonceRegistry::contains(const Nonce& n) const {
  std::lock_guard lock(mu_);
  return seen_.count(n) != 0;
}

bool NonceRegistry::try_insert(const Nonce& n) {
  std::lock_guard lock(mu_);
  return seen_.insert(n).second;
}

std::size_t NonceRegistry::size() const {
  std::lock_guard lock(mu_);
  return seen_.size();
}

void NonceRegistry::clear() {
  std::lock_guard lock(mu_);
  seen_.clear();
}

void NonceRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return;  // no history yet
  std::string line;
  std::lock_guard lock(mu_);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Bytes raw = from_hex(line);
    if (raw.size() != Nonce::kBytes) throw FormatError("bad nonce in " + path.string());
    Nonce n;
    std::copy(raw.begin(), raw.end(), n.bytes.begin());
    seen_.insert(n);
  }
}

void NonceRegistry::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  std::lock_guard lock(mu_);
  for (const Nonce& n : seen_) out << n.hex() << '\n';
}

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::pending: return "pending";
    case SessionStatus::complete: return "complete";
    case SessionStatus::rejected: return "rejected";
  }
  return "?";
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::replay: return "replay";
    case RejectReason::mac: return "mac";
    case RejectReason::corruption: return "corruption";
    case RejectReason::malformed: return "malformed";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::accepted: return "accepted";
    case Verdict::rejected_replay: return "rejected_replay";
    case Verdict::rejected_mac: return "rejected_mac";
    case Verdict::session_closed: return "session_closed";
  }
  return "?";
}

namespace {

void reject(SessionState& state, RejectReason reason) {
  if (state.status != SessionStatus::pending) return;
  state.status = SessionStatus::rejected;
  state.reason = reason;
}

}  // namespace

Verdict receive_envelope(SessionState& state, NonceRegistry& nonces, const MasterSecret& vpri,
                         const ChannelEnvelope& env, const ProtocolConfig& cfg) {
  if (env.session_id != state.session_id) {
    throw ProtocolError("envelope belongs to session " + env.session_id.hex());
  }
  if (nonces.contains(env.nonce)) {
    reject(state, RejectReason::replay);
    return Verdict::rejected_replay;
  }
  if (state.status != SessionStatus::pending) return Verdict::session_closed;

  auto& slot = state.received[channel_index(env.channel)];
  if (slot.has_value()) {
    throw ProtocolError("duplicate delivery on channel " + std::string(channel_name(env.channel)));
  }
  validate_envelope(env);
  if (env.channel == Channel::C3 &&
      !constant_time_equal(c3_mac(vpri, env.nonce, env.body), *env.mac)) {
    reject(state, RejectReason::mac);
    return Verdict::rejected_mac;
  }
  if (!nonces.try_insert(env.nonce)) {
    // Lost a race against a concurrent delivery of the same nonce.
    reject(state, RejectReason::replay);
    return Verdict::rejected_replay;
  }
  slot = env;

  const bool all = std::all_of(state.received.begin(), state.received.end(),
                               [](const auto& e) { return e.has_value(); });
  if (all) {
    try {
      state.plaintext = finalize_session(state, vpri, cfg);
      state.status = SessionStatus::complete;
    } catch (const UncorrectableError&) {
      reject(state, RejectReason::corruption);
    } catch (const Error&) {
      reject(state, RejectReason::malformed);
    }
  }
  return Verdict::accepted;
}

Bytes finalize_session(const SessionState& state, const MasterSecret& vpri,
                       const ProtocolConfig& cfg) {
  for (const auto& e : state.received) {
    if (!e) throw ProtocolError("session is missing a channel");
  }
  const ChannelEnvelope& c1 = *state.received[0];
  const ChannelEnvelope& c2 = *state.received[1];
  const ChannelEnvelope& c3 = *state.received[2];
  const std::size_t n = *c3.payload_bits;
  if (*c3.pad_bits != (8 - n % 8) % 8) throw LengthError("pad_bits inconsistent with payload_bits");

  const auto text = [](const Bytes& body) { return std::string(body.begin(), body.end()); };
  const CoverText gamma1 = CoverText::from_text(text(c1.body));
  const CoverText gamma2 = CoverText::from_text(text(c2.body));

  const RasterImage stego = decode_png(c3.body);
  const std::size_t coded_len = ecc_coded_bits(n);
  if (coded_len > stego.capacity()) throw LengthError("payload_bits exceed the image capacity");
  const BitVector coded = extract(stego, coded_len, cfg.window_radius);
  const MaskedPayload b = ecc_decode(coded, n);
  const StegoKeyStream ks = derive_stego_key(vpri, gamma1, n);
  return protocol_unmask(b, gamma1, gamma2, ks).to_bytes();
}

Receiver::Receiver(MasterSecret vpri, ProtocolConfig cfg, std::shared_ptr<NonceRegistry> nonces)
    : vpri_(std::move(vpri)),
      cfg_(cfg),
      nonces_(nonces ? std::move(nonces) : std::make_shared<NonceRegistry>()) {}

std::shared_ptr<Receiver::Slot> Receiver::slot_for(const SessionId& id) {
  std::lock_guard lock(map_mu_);
  auto& slot = sessions_[id];
  if (!slot) {
    slot = std::make_shared<Slot>();
    slot->state.session_id = id;
  }
  return slot;
}

Verdict Receiver::deliver(const ChannelEnvelope& env) {
  auto slot = slot_for(env.session_id);
  std::lock_guard lock(slot->mu);
  return receive_envelope(slot->state, *nonces_, vpri_, env, cfg_);
}

Verdict Receiver::deliver_frame(std::string_view frame) { return deliver(parse_envelope(frame)); }

std::optional<SessionState> Receiver::session(const SessionId& id) const {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(map_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    slot = it->second;
  }
  std::lock_guard lock(slot->mu);
  return slot->state;
}

void Receiver::reset() {
  std::lock_guard lock(map_mu_);
  sessions_.clear();
  nonces_->clear();
}

}  // namespace mcstego
