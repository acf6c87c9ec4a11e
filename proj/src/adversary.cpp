#include "mcstego/adversary.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <numeric>

#include "mcstego/ecc.hpp"
#include "mcstego/embedding.hpp"
#include "mcstego/errors.hpp"
#include "mcstego/transport.hpp"

namespace mcstego {

std::string_view to_string(AttackMethod m) {
  switch (m) {
    case AttackMethod::cmo: return "cmo";
    case AttackMethod::hybrid_bruteforce: return "hybrid";
    case AttackMethod::hybrid_known_key: return "known-key";
    case AttackMethod::cse: return "cse";
    case AttackMethod::replay: return "replay";
    case AttackMethod::mitm: return "mitm";
  }
  return "?";
}

AttackMethod parse_attack_method(std::string_view name) {
  for (auto m : {AttackMethod::cmo, AttackMethod::hybrid_bruteforce, AttackMethod::hybrid_known_key,
                 AttackMethod::cse, AttackMethod::replay, AttackMethod::mitm}) {
    if (to_string(m) == name) return m;
  }
  throw ParameterError("unknown attack method '" + std::string(name) + "'");
}

CandidateKeySpace::CandidateKeySpace(int base_bits, std::size_t length)
    : base_bits_(base_bits), length_(length) {
  if (base_bits < 1 || base_bits > 20) throw ParameterError("key-space bits must be in [1, 20]");
  if (length == 0) throw ParameterError("candidate key length must be positive");
}

BitVector CandidateKeySpace::pattern(std::size_t index) const {
  if (index >= size()) throw ParameterError("candidate index out of range");
  BitVector p(static_cast<std::size_t>(base_bits_));
  for (int i = 0; i < base_bits_; ++i) p.set(static_cast<std::size_t>(i), (index >> (base_bits_ - 1 - i)) & 1);
  return p;
}

BitVector CandidateKeySpace::key(std::size_t index) const {
  const BitVector p = pattern(index);
  BitVector k(length_);
  for (std::size_t i = 0; i < length_; ++i) k.set(i, p[i % p.size()]);
  return k;
}

AttackSummary summarize(std::span<const ExtractionReport> trials) {
  AttackSummary s;
  std::vector<double> ber, corr, psnr_v, ssim_v;
  std::vector<bool> ok;
  for (const auto& t : trials) {
    ber.push_back(t.ber);
    if (t.correlation) {
      corr.push_back(*t.correlation);
    } else {
      ++s.correlation_undefined;
    }
    psnr_v.push_back(t.psnr_db);
    ssim_v.push_back(t.ssim);
  }
  s.ber = mean_std(ber);
  s.correlation = mean_std(corr);
  s.psnr_db = mean_std(psnr_v);
  s.ssim = mean_std(ssim_v);
  if (!trials.empty()) {
    const auto hits = std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.success; });
    s.success_rate = static_cast<double>(hits) / static_cast<double>(trials.size());
  }
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void fill_quality(ExtractionReport& r, const RasterImage* cover, const RasterImage& stego) {
  if (!cover) return;
  r.psnr_db = psnr(*cover, stego);
  r.ssim = ssim(*cover, stego);
}

}  // namespace

MaskedPayload intercept_masked(const RasterImage& stego, std::size_t payload_bits, int window_radius) {
  const BitVector coded = extract(stego, ecc_coded_bits(payload_bits), window_radius);
  return ecc_decode_lenient(coded, payload_bits).payload;
}

ExtractionReport attack_cmo(const RasterImage& stego, const BitVector& ground_truth,
                            int window_radius, const RasterImage* cover) {
  const auto t0 = Clock::now();
  const MaskedPayload recovered = intercept_masked(stego, ground_truth.size(), window_radius);
  ExtractionReport r = compare_bits(recovered.bits, ground_truth);
  r.latency_s = seconds_since(t0);
  fill_quality(r, cover, stego);
  return r;
}

AttackResult attack_hybrid_bruteforce(const RasterImage& stego, const CoverText& gamma1,
                                      const CoverText& gamma2,
                                      const std::optional<MaskedPayload>& masked_b,
                                      const CandidateKeySpace& keyspace,
                                      const BitVector& ground_truth, int window_radius) {
  const auto t0 = Clock::now();
  const std::size_t n = ground_truth.size();
  if (keyspace.length() != n) throw ParameterError("candidate length differs from the payload");
  const MaskedPayload b = masked_b ? *masked_b : intercept_masked(stego, n, window_radius);
  if (b.length() != n) throw ParameterError("masked payload length differs from the ground truth");

  BitVector base = b.bits;
  base ^= cover_parameter(gamma1, n);
  base ^= cover_parameter(gamma2, n);

  AttackResult result;
  result.method = AttackMethod::hybrid_bruteforce;
  result.candidate_ber.reserve(keyspace.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < keyspace.size(); ++i) {
    const double e = ber(base ^ keyspace.key(i), ground_truth);
    result.candidate_ber.push_back(e);
    if (e < result.candidate_ber[best]) best = i;
  }
  result.best_key = best;
  ExtractionReport r = compare_bits(base ^ keyspace.key(best), ground_truth);
  r.latency_s = seconds_since(t0);
  result.trials.push_back(r);
  return result;
}

ExtractionReport attack_known_key(const RasterImage& stego, const StegoKeyStream& true_keystream,
                                  const std::pair<CoverText, CoverText>& wrong_covers,
                                  const BitVector& ground_truth, int window_radius) {
  const auto t0 = Clock::now();
  const std::size_t n = ground_truth.size();
  const MaskedPayload b = intercept_masked(stego, n, window_radius);
  const BitVector guess = protocol_unmask(b, wrong_covers.first, wrong_covers.second, true_keystream);
  ExtractionReport r = compare_bits(guess, ground_truth);
  r.latency_s = seconds_since(t0);
  return r;
}

CseSelection cse_select(std::span<const std::uint8_t> secret, std::span<const Bytes> cover_files) {
  if (cover_files.empty()) throw ParameterError("cover library is empty");
  const Digest fingerprint = sha256(secret);
  CseSelection best{0, 257};
  for (std::size_t i = 0; i < cover_files.size(); ++i) {
    const Digest d = sha256(cover_files[i]);
    std::size_t dist = 0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      dist += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(d[k] ^ fingerprint[k])));
    }
    if (dist < best.distance) best = {i, dist};
  }
  return best;
}

CseSelection cse_select(std::span<const std::uint8_t> secret, std::span<const RasterImage> library) {
  std::vector<Bytes> files;
  files.reserve(library.size());
  for (const auto& img : library) files.push_back(encode_png(img));
  return cse_select(secret, files);
}

Bytes cse_extract(const CseMapping& mapping, const std::string& stego_path) {
  auto it = mapping.find(stego_path);
  if (it == mapping.end()) throw MissingEntryError("no mapping entry for " + stego_path);
  return it->second;
}

AttackResult run_replay_attack(const std::vector<ChannelEnvelope>& recorded, Receiver& target) {
  AttackResult result;
  result.method = AttackMethod::replay;
  std::vector<std::size_t> order(recorded.size());
  std::iota(order.begin(), order.end(), 0);
  do {
    for (std::size_t i : order) {
      Verdict v;
      try {
        v = target.deliver(recorded[i]);
      } catch (const ProtocolError&) {
        v = Verdict::session_closed;
      }
      result.verdicts.push_back(v);
      if (v == Verdict::accepted) ++result.accepted;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return result;
}

namespace {

TamperHook envelope_hook(std::function<void(ChannelEnvelope&)> edit) {
  return [edit = std::move(edit)](Bytes& frame) {
    ChannelEnvelope env = parse_envelope(std::string_view(reinterpret_cast<const char*>(frame.data()), frame.size()));
    edit(env);
    const std::string json = serialize_envelope(env);
    frame.assign(json.begin(), json.end());
  };
}

}  // namespace

AttackResult run_mitm_attack(const SessionRecord& session, std::span<const std::uint8_t> message,
                             Receiver& target, const TamperSpec& tamper, std::uint64_t network_seed) {
  AttackResult result;
  result.method = AttackMethod::mitm;

  std::array<ChannelConfig, 3> links;
  for (std::size_t i = 0; i < 3; ++i) {
    links[i].backend = Backend::sim;
    links[i].address = std::string(channel_name(kChannels[i]));
    links[i].delay_min_ms = 1.0;
    links[i].delay_max_ms = 20.0;
  }
  if (tamper.gamma1_text) {
    links[0].tamper_hook = envelope_hook([text = *tamper.gamma1_text](ChannelEnvelope& env) {
      env.body.assign(text.begin(), text.end());
    });
  }
  if (tamper.gamma2_text) {
    links[1].tamper_hook = envelope_hook([text = *tamper.gamma2_text](ChannelEnvelope& env) {
      env.body.assign(text.begin(), text.end());
    });
  }
  if (!tamper.c3_bit_flips.empty()) {
    links[2].tamper_hook = envelope_hook([flips = tamper.c3_bit_flips](ChannelEnvelope& env) {
      constexpr std::size_t kNonceBits = Nonce::kBytes * 8;
      for (std::size_t pos : flips) {
        const auto mask = static_cast<std::uint8_t>(0x80u >> (pos % 8));
        if (pos < kNonceBits) {
          env.nonce.bytes[pos / 8] ^= mask;
        } else if (pos - kNonceBits < env.body.size() * 8) {
          env.body[(pos - kNonceBits) / 8] ^= mask;
        } else {
          throw ParameterError("tamper offset beyond nonce_c || body");
        }
      }
    });
  }

  SimNetwork net(network_seed);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string json = serialize_envelope(session.envelopes[i]);
    net.send(links[i], Bytes(json.begin(), json.end()));
  }
  for (const SimFrame& f : net.drain()) {
    Verdict v;
    try {
      v = target.deliver_frame(std::string_view(reinterpret_cast<const char*>(f.data.data()), f.data.size()));
    } catch (const Error&) {
      v = Verdict::session_closed;
    }
    result.verdicts.push_back(v);
    if (v == Verdict::accepted) ++result.accepted;
  }

  if (auto state = target.session(session.session_id)) {
    result.final_status = state->status;
    result.reason = state->reason;
    if (state->plaintext) {
      const Bytes& got = *state->plaintext;
      result.plaintext_intact = std::equal(got.begin(), got.end(), message.begin(), message.end());
      if (got.size() == message.size()) {
        result.trials.push_back(compare_bits(BitVector::from_bytes(got), BitVector::from_bytes(message)));
      }
    }
  }
  return result;
}

TiledKeyFixture make_tiled_fixture(int base_bits, std::size_t planted, std::size_t sessions,
                                   std::size_t length_bits, std::uint64_t seed) {
  const CandidateKeySpace space(base_bits, length_bits);
  if (planted >= space.size()) throw ParameterError("planted key outside the key space");
  if (sessions == 0) throw ParameterError("fixture needs at least one session");
  TiledKeyFixture fx;
  fx.base_bits = base_bits;
  fx.planted = planted;
  SplitMix64 rng(seed);
  const BitVector key = space.key(planted);
  for (std::size_t s = 0; s < sessions; ++s) {
    BitVector m(length_bits);
    for (std::size_t i = 0; i < length_bits; ++i) m.set(i, rng.next() >> 63);
    fx.masked.push_back(mask(m, key));
    fx.messages.push_back(std::move(m));
  }
  return fx;
}

std::vector<SweepRow> sweep_keyspace(const TiledKeyFixture& fixture) {
  if (fixture.messages.empty()) throw ParameterError("empty fixture");
  const CandidateKeySpace space(fixture.base_bits, fixture.messages.front().size());
  std::vector<SweepRow> rows;
  rows.reserve(space.size());
  for (std::size_t k = 0; k < space.size(); ++k) {
    const BitVector key = space.key(k);
    double ber_sum = 0.0, corr_sum = 0.0;
    std::size_t corr_n = 0;
    for (std::size_t s = 0; s < fixture.messages.size(); ++s) {
      const BitVector guess = unmask(fixture.masked[s], key);
      ber_sum += ber(guess, fixture.messages[s]);
      if (auto c = pearson(guess, fixture.messages[s])) {
        corr_sum += *c;
        ++corr_n;
      }
    }
    SweepRow row;
    row.key = k;
    row.pattern = space.pattern(k).to_string();
    row.mean_ber = ber_sum / static_cast<double>(fixture.messages.size());
    if (corr_n > 0) row.mean_correlation = corr_sum / static_cast<double>(corr_n);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.mean_ber, a.key) < std::tie(b.mean_ber, b.key);
  });
  return rows;
}

}  // namespace mcstego
