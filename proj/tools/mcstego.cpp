// Command-line front end: key handling, the sender/receiver pipeline over TCP,
// the simulated network, the attack harness and the benchmark sweep.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mcstego/adversary.hpp"
#include "mcstego/bench.hpp"
#include "mcstego/ecc.hpp"
#include "mcstego/embedding.hpp"
#include "mcstego/errors.hpp"
#include "mcstego/fixtures.hpp"
#include "mcstego/report.hpp"
#include "mcstego/transport.hpp"

using namespace mcstego;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string key_path;
  std::string corpus_path;
  std::string covers_dir;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  int window_radius = kDefaultWindowRadius;
  int keyspace_bits = 8;
  std::string format = "csv";
  std::string command_line;
};

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

fs::path corpus_file(const Common& c) {
  return c.corpus_path.empty() ? fixtures_dir() / "corpus.txt" : fs::path(c.corpus_path);
}

MarkovModel load_model(const Common& c) { return MarkovModel::build(load_corpus(corpus_file(c))); }

MasterSecret load_key(const Common& c) {
  if (c.key_path.empty()) throw ParameterError("--key is required");
  return MasterSecret::load(c.key_path);
}

std::string read_text(const fs::path& p) {
  const Bytes b = read_file(p);
  return std::string(b.begin(), b.end());
}

void write_text(const fs::path& p, std::string_view text) { write_file(p, as_bytes(text)); }

// Writes to --out when given, stdout otherwise.
void emit(const Common& c, std::string_view text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text(c.out, text);
  }
}

std::vector<fs::path> image_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".png" || ext == ".ppm" || ext == ".pgm")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw CorpusError("no cover images in " + dir.string());
  return files;
}

// Covers from --covers DIR, or the synthetic library when none is given.
std::vector<RasterImage> load_covers(const Common& c, std::size_t count, RunManifest* manifest) {
  std::vector<RasterImage> covers;
  if (c.covers_dir.empty()) return cover_library(count, c.seed);
  for (const auto& f : image_files(c.covers_dir)) {
    covers.push_back(load_image(f));
    if (manifest) manifest->fixture_checksums[f.filename().string()] = file_checksum(f);
  }
  return covers;
}

RunManifest make_manifest(const Common& c) {
  RunManifest m;
  m.command_line = c.command_line;
  m.seeds = {c.seed};
  m.config["window_radius"] = c.window_radius;
  m.config["jobs"] = c.jobs;
  m.config["keyspace_bits"] = c.keyspace_bits;
  m.config["covers"] = c.covers_dir.empty() ? "synthetic" : c.covers_dir;
  const fs::path corpus = corpus_file(c);
  m.fixture_checksums[corpus.filename().string()] = file_checksum(corpus);
  return m;
}

std::vector<std::size_t> parse_sizes(const std::vector<std::size_t>& sizes) {
  for (std::size_t s : sizes) {
    if (s < 8 || s % 8 != 0) throw ParameterError("payload sizes must be positive multiples of 8 bits");
  }
  return sizes;
}

// Runs body(i) for i in [0, n) on up to `jobs` threads; the first exception wins.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < std::max<std::size_t>(1, std::min(jobs, n)); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string render(const Common& c, const RunManifest& manifest, const std::vector<TrialRow>& rows) {
  if (c.format == "json") return summary_json(manifest, rows).dump(2) + "\n";
  return render_csv(manifest, rows);
}

// ---- keygen / synth / mask / embed / extract --------------------------------

int cmd_keygen(const Common& c, int bits) {
  if (c.out.empty()) throw ParameterError("--out is required");
  setup(bits).save(c.out);
  std::cerr << "wrote " << bits << "-bit key to " << c.out << '\n';
  return 0;
}

int cmd_synth(const Common& c, std::size_t bits) {
  const auto [g1, g2] = synth_pair(load_key(c), load_model(c), bits);
  nlohmann::ordered_json j;
  j["bits"] = bits;
  j["gamma1"] = g1.text;
  j["gamma2"] = g2.text;
  emit(c, j.dump(2));
  return 0;
}

int cmd_mask(const Common& c, const std::string& in) {
  const MasterSecret key = load_key(c);
  const Bytes msg = read_file(in);
  if (msg.empty()) throw ParameterError("empty message");
  const std::size_t n = msg.size() * 8;
  const Nonce a = fresh_nonce(), b = fresh_nonce();
  const auto [g1, g2] = synth_pair(key, load_model(c), n, a.bytes, b.bytes);
  const MaskedPayload masked = protocol_mask(BitVector::from_bytes(msg), g1, g2, derive_stego_key(key, g1, n));
  nlohmann::ordered_json j;
  j["payload_bits"] = n;
  j["gamma1"] = g1.text;
  j["gamma2"] = g2.text;
  j["masked"] = to_hex(masked.bits.to_bytes());
  emit(c, j.dump(2));
  return 0;
}

int cmd_unmask(const Common& c, const std::string& in) {
  const auto j = nlohmann::json::parse(read_text(in));
  const std::size_t n = j.at("payload_bits").get<std::size_t>();
  const MaskedPayload b{BitVector::from_bytes(from_hex(j.at("masked").get<std::string>()), n)};
  const CoverText g1 = CoverText::from_text(j.at("gamma1").get<std::string>());
  const CoverText g2 = CoverText::from_text(j.at("gamma2").get<std::string>());
  const BitVector m = protocol_unmask(b, g1, g2, derive_stego_key(load_key(c), g1, n));
  const Bytes out = m.to_bytes();
  if (c.out.empty()) {
    std::cout.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  } else {
    write_file(c.out, out);
  }
  return 0;
}

int cmd_embed(const Common& c, const std::string& cover_path, const std::string& payload_path) {
  if (c.out.empty()) throw ParameterError("--out is required");
  const Bytes payload = read_file(payload_path);
  const EccPayload coded = ecc_encode(MaskedPayload{BitVector::from_bytes(payload)});
  const RasterImage stego = embed(load_image(cover_path), coded.coded_bits, c.window_radius);
  save_image(stego, c.out);
  std::cerr << "embedded " << payload.size() * 8 << " payload bits (" << coded.coded_bits.size()
            << " coded) into " << c.out << '\n';
  return 0;
}

int cmd_extract(const Common& c, const std::string& stego_path, std::size_t bits) {
  const RasterImage stego = load_image(stego_path);
  const BitVector coded = extract(stego, ecc_coded_bits(bits), c.window_radius);
  const Bytes out = ecc_decode(coded, bits).bits.to_bytes();
  if (c.out.empty()) {
    std::cout.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  } else {
    write_file(c.out, out);
  }
  return 0;
}

// ---- send / recv ------------------------------------------------------------

int cmd_send(const Common& c, const std::string& cover_path, const std::string& message_path,
             const std::array<std::string, 3>& addresses) {
  const MasterSecret key = load_key(c);
  const Bytes msg = read_file(message_path);
  ChannelTriple sinks;
  for (std::size_t i = 0; i < 3; ++i) {
    ChannelConfig cfg;
    cfg.backend = Backend::tcp;
    cfg.address = addresses[i];
    sinks[i] = [cfg](const std::string& frame) { send_frame(cfg, Bytes(frame.begin(), frame.end())); };
  }
  ProtocolConfig pcfg;
  pcfg.window_radius = c.window_radius;
  const SessionRecord rec = send_session(key, msg, load_image(cover_path), load_model(c), sinks, pcfg);
  for (std::size_t i = 0; i < 3; ++i) {
    std::cerr << channel_name(kChannels[i]) << ": " << (rec.send_errors[i] ? *rec.send_errors[i] : "sent") << '\n';
  }
  std::cout << rec.session_id.hex() << '\n';
  return rec.failed ? 1 : 0;
}

int cmd_recv(const Common& c, const std::string& listen, const std::string& nonce_file) {
  auto history = std::make_shared<NonceRegistry>();
  if (!nonce_file.empty() && fs::exists(nonce_file)) history->load(nonce_file);
  ProtocolConfig pcfg;
  pcfg.window_radius = c.window_radius;
  Receiver rx(load_key(c), pcfg, history);
  TcpListener listener(listen);
  std::cerr << "listening on port " << listener.port() << '\n';

  std::optional<SessionId> id;
  for (int frames = 0; frames < 3; ++frames) {
    const Bytes frame = listener.accept().read_frame();
    const std::string_view text(reinterpret_cast<const char*>(frame.data()), frame.size());
    const ChannelEnvelope env = parse_envelope(text);
    if (id && env.session_id != *id) throw ProtocolError("frame from another session");
    id = env.session_id;
    const Verdict v = rx.deliver(env);
    std::cerr << channel_name(env.channel) << ": " << to_string(v) << '\n';
    if (rx.session(*id)->status != SessionStatus::pending) break;
  }
  if (!nonce_file.empty()) history->save(nonce_file);

  const auto state = rx.session(*id);
  if (state->status != SessionStatus::complete) {
    std::cerr << "session " << to_string(state->status) << ": " << to_string(state->reason) << '\n';
    return 1;
  }
  if (c.out.empty()) {
    std::cout.write(reinterpret_cast<const char*>(state->plaintext->data()),
                    static_cast<std::streamsize>(state->plaintext->size()));
  } else {
    write_file(c.out, *state->plaintext);
  }
  return 0;
}

// ---- sim --------------------------------------------------------------------

struct SimOptions {
  double drop = 0.0;
  double delay_min = 0.0;
  double delay_max = 0.0;
  std::size_t sessions = 10;
  std::size_t payload_bits = 256;
  bool latency = false;
  std::string backend = "sim";
};

int cmd_sim(const Common& c, const SimOptions& o) {
  if (o.latency) {
    ChannelConfig cfg;
    cfg.backend = o.backend == "tcp" ? Backend::tcp : Backend::sim;
    if (cfg.backend == Backend::sim) cfg.address = "lat";
    const auto rows = measure_latency(cfg, {1024, 16384, 262144, 1048576});
    std::ostringstream out;
    out << "frame_bytes,serialize_ms,transmit_ms,deserialize_ms,total_ms\n";
    for (const auto& r : rows) {
      out << r.frame_bytes << ',' << r.serialize_ms.mean << ',' << r.transmit_ms.mean << ','
          << r.deserialize_ms.mean << ',' << r.total_ms.mean << '\n';
    }
    emit(c, out.str());
    return 0;
  }

  const MasterSecret key = c.key_path.empty() ? bench_secret(c.seed) : load_key(c);
  const MarkovModel model = load_model(c);
  const auto covers = load_covers(c, std::min<std::size_t>(o.sessions, 8), nullptr);
  ProtocolConfig pcfg;
  pcfg.window_radius = c.window_radius;
  SimNetwork net(c.seed);
  std::size_t complete = 0, incomplete = 0;
  std::ostringstream out;
  out << "session,status,reason,frames_delivered,deliver_at_ms\n";
  for (std::size_t s = 0; s < o.sessions; ++s) {
    const Bytes msg = bench_message(c.seed, s, o.payload_bits / 8);
    const SessionRecord rec = prepare_session(key, msg, covers[s % covers.size()], model, pcfg);
    std::size_t delivered = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      ChannelConfig link;
      link.address = std::string(channel_name(kChannels[i]));
      link.drop_prob = o.drop;
      link.delay_min_ms = o.delay_min;
      link.delay_max_ms = o.delay_max;
      const std::string json = serialize_envelope(rec.envelopes[i]);
      delivered += net.send(link, Bytes(json.begin(), json.end())).delivered ? 1 : 0;
    }
    Receiver rx(key, pcfg);
    double last = 0.0;
    for (const SimFrame& f : net.drain()) {
      rx.deliver_frame(std::string_view(reinterpret_cast<const char*>(f.data.data()), f.data.size()));
      last = f.deliver_at_ms;
    }
    const auto state = rx.session(rec.session_id);
    const bool ok = state && state->status == SessionStatus::complete && state->plaintext == msg;
    (ok ? complete : incomplete)++;
    out << rec.session_id.hex() << ',' << (state ? to_string(state->status) : "lost") << ','
        << (state ? to_string(state->reason) : "none") << ',' << delivered << ',' << last << '\n';
  }
  emit(c, out.str());
  std::cerr << complete << " complete, " << incomplete << " incomplete\n";
  return 0;
}

// ---- attack -----------------------------------------------------------------

struct AttackOptions {
  std::string method = "hybrid";
  std::size_t trials = 30;
  std::vector<std::size_t> payload_bits{64, 128, 256, 512};
  std::size_t c3_flips = 1;
};

void fill_quality(ExtractionReport& r, const RasterImage& cover, const RasterImage& stego) {
  r.psnr_db = psnr(cover, stego);
  r.ssim = ssim(cover, stego);
}

ExtractionReport run_attack_trial(AttackMethod method, const Common& c, const AttackOptions& o,
                                  const MasterSecret& key, const MarkovModel& model,
                                  const MarkovModel& attacker, const std::vector<RasterImage>& covers,
                                  std::size_t bits, std::size_t t) {
  const Bytes msg = bench_message(c.seed, bits * 100000 + t, bits / 8);
  const BitVector truth = BitVector::from_bytes(msg);
  const RasterImage& cover = covers[t % covers.size()];
  ProtocolConfig pcfg;
  pcfg.window_radius = c.window_radius;

  if (method == AttackMethod::cse) {
    // The sender picks the library image closest to the secret's fingerprint
    // and records the mapping; the attacker holds the mapping.
    const CseSelection sel = cse_select(msg, std::span<const RasterImage>(covers));
    const std::string id = "cover_" + std::to_string(sel.index);
    const CseMapping mapping{{id, msg}};
    ExtractionReport r = compare_bits(BitVector::from_bytes(cse_extract(mapping, id)), truth);
    fill_quality(r, covers[sel.index], covers[sel.index]);
    return r;
  }

  const SessionRecord rec = prepare_session(key, msg, cover, model, pcfg);
  switch (method) {
    case AttackMethod::cmo: {
      ExtractionReport r = attack_cmo(rec.stego, rec.masked.bits, c.window_radius, &cover);
      return r;
    }
    case AttackMethod::hybrid_bruteforce: {
      const AttackResult res = attack_hybrid_bruteforce(rec.stego, rec.gamma1, rec.gamma2, std::nullopt,
                                                        CandidateKeySpace(c.keyspace_bits, bits), truth,
                                                        c.window_radius);
      ExtractionReport r = res.trials.front();
      fill_quality(r, cover, rec.stego);
      return r;
    }
    case AttackMethod::hybrid_known_key: {
      const auto guesses = synth_pair(bench_secret(c.seed + 1000 + t), attacker, bits);
      ExtractionReport r = attack_known_key(rec.stego, rec.key_stream, guesses, truth, c.window_radius);
      fill_quality(r, cover, rec.stego);
      return r;
    }
    case AttackMethod::replay: {
      // success = at least one replayed envelope accepted.
      Receiver rx(key, pcfg);
      for (const auto& env : rec.envelopes) rx.deliver(env);
      const AttackResult res = run_replay_attack({rec.envelopes.begin(), rec.envelopes.end()}, rx);
      ExtractionReport r;
      r.ber = 1.0;
      r.success = res.accepted > 0;
      fill_quality(r, cover, rec.stego);
      return r;
    }
    case AttackMethod::mitm: {
      // success = the receiver completed the session with a plaintext other
      // than the one sent; ber compares that plaintext with the message.
      Receiver rx(key, pcfg);
      TamperSpec spec;
      SplitMix64 rng(c.seed ^ (t + 1));
      const std::size_t span_bits = (Nonce::kBytes + rec.envelopes[2].body.size()) * 8;
      for (std::size_t i = 0; i < o.c3_flips; ++i) spec.c3_bit_flips.push_back(rng.next() % span_bits);
      const AttackResult res = run_mitm_attack(rec, msg, rx, spec, c.seed + t);
      ExtractionReport r = res.trials.empty() ? ExtractionReport{} : res.trials.front();
      if (res.trials.empty()) r.ber = 1.0;
      r.success = res.final_status == SessionStatus::complete && !res.plaintext_intact;
      fill_quality(r, cover, rec.stego);
      return r;
    }
    case AttackMethod::cse:
      break;
  }
  throw ParameterError("unsupported attack");
}

int cmd_attack(const Common& c, const AttackOptions& o) {
  const AttackMethod method = parse_attack_method(o.method);
  const auto sizes = parse_sizes(o.payload_bits);
  RunManifest manifest = make_manifest(c);
  manifest.config["method"] = o.method;
  manifest.config["trials"] = o.trials;
  manifest.config["payload_bits"] = sizes;
  const MasterSecret key = c.key_path.empty() ? bench_secret(c.seed) : load_key(c);
  const MarkovModel model = load_model(c);
  const MarkovModel attacker = MarkovModel::build(attacker_corpus());
  const auto covers = load_covers(c, std::min<std::size_t>(o.trials, 30), &manifest);

  std::vector<TrialRow> rows(sizes.size() * o.trials);
  parallel_for(rows.size(), c.jobs, [&](std::size_t i) {
    const std::size_t bits = sizes[i / o.trials], t = i % o.trials;
    rows[i] = TrialRow{o.method, bits, run_attack_trial(method, c, o, key, model, attacker, covers, bits, t)};
  });
  emit(c, render(c, manifest, rows));
  return 0;
}

// ---- metrics ----------------------------------------------------------------

int cmd_metrics(const Common& c, const std::string& ref, const std::string& test, const std::string& text) {
  nlohmann::ordered_json j;
  if (!ref.empty()) {
    if (test.empty()) throw ParameterError("--test is required with --ref");
    const RasterImage a = load_image(ref), b = load_image(test);
    j["psnr_db"] = psnr(a, b);
    j["ssim"] = ssim(a, b);
  }
  if (!text.empty()) {
    j["entropy"] = shannon_entropy(text);
    j["flesch_reading_ease"] = flesch_reading_ease(text);
    j["flesch_kincaid_grade"] = flesch_kincaid_grade(text);
  }
  if (j.empty()) throw ParameterError("give --ref/--test or --text");
  emit(c, j.dump(2));
  return 0;
}

// ---- bench ------------------------------------------------------------------

int cmd_bench(const Common& c, std::size_t trials, const std::vector<std::size_t>& payload_bits, bool plot) {
  if (trials < 1) throw ParameterError("--trials must be at least 1");
  BenchConfig cfg;
  cfg.trials = trials;
  cfg.payload_bits = parse_sizes(payload_bits);
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  cfg.protocol.window_radius = c.window_radius;
  RunManifest manifest = make_manifest(c);
  manifest.config["trials"] = trials;
  manifest.config["payload_bits"] = cfg.payload_bits;
  const auto covers = load_covers(c, std::min<std::size_t>(trials, 30), &manifest);
  const MasterSecret key = c.key_path.empty() ? bench_secret(c.seed) : load_key(c);
  const auto results = bench_protocol(key, load_model(c), covers, cfg);

  std::vector<TrialRow> rows;
  for (const auto& r : results) rows.push_back({"honest", r.payload_bits, r.report});

  if (c.out.empty()) {
    std::cout << render(c, manifest, rows);
    return 0;
  }
  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_text(dir / "bench.csv", render_csv(manifest, rows));
  write_text(dir / "summary.json", summary_json(manifest, rows).dump(2) + "\n");

  // Per-phase latency in milliseconds, one row per payload size.
  std::ostringstream phases;
  phases << "# manifest: " << manifest.to_json().dump() << '\n'
         << "payload_bits,sender_ms,sender_sd,transmit_ms,transmit_sd,receiver_ms,receiver_sd,total_ms,total_sd\n";
  PlotSeries ber_series{"BER", {}}, psnr_series{"PSNR (dB)", {}};
  for (std::size_t bits : cfg.payload_bits) {
    std::vector<double> snd, tx, rcv, tot, bers, psnrs;
    for (const auto& r : results) {
      if (r.payload_bits != bits) continue;
      snd.push_back(r.times.sender_s * 1e3);
      tx.push_back(r.times.transmit_s * 1e3);
      rcv.push_back(r.times.receiver_s * 1e3);
      tot.push_back(r.times.total_s() * 1e3);
      bers.push_back(r.report.ber);
      psnrs.push_back(r.report.psnr_db);
    }
    phases << bits;
    for (const auto* v : {&snd, &tx, &rcv, &tot}) {
      const MeanStd m = mean_std(*v);
      phases << ',' << m.mean << ',' << m.stddev;
    }
    phases << '\n';
    ber_series.points.emplace_back(static_cast<double>(bits), mean_std(bers).mean);
    psnr_series.points.emplace_back(static_cast<double>(bits), mean_std(psnrs).mean);
  }
  write_text(dir / "phases.csv", phases.str());
  if (plot) {
    write_text(dir / "ber_vs_payload.svg",
               render_svg_plot("BER vs payload", "payload bits", "BER", std::span(&ber_series, 1)));
    write_text(dir / "psnr_vs_payload.svg",
               render_svg_plot("PSNR vs payload", "payload bits", "PSNR (dB)", std::span(&psnr_series, 1)));
  }
  const auto failed = std::count_if(results.begin(), results.end(), [](const BenchTrial& r) { return !r.report.success; });
  std::cerr << results.size() << " sessions, " << failed << " without exact recovery; reports in " << dir << '\n';
  return failed == 0 ? 0 : 1;
}

// ---- gen-covers -------------------------------------------------------------

int cmd_gen_covers(const Common& c, std::size_t count, std::size_t width, std::size_t height) {
  if (c.out.empty()) throw ParameterError("--out is required");
  fs::create_directories(c.out);
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "cover_%03zu.png", i);
    save_image(synthetic_cover(c.seed + i, width, height), fs::path(c.out) / name);
  }
  std::cerr << "wrote " << count << " covers to " << c.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-channel hybrid steganography toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Common c;
  c.command_line = join_args(argc, argv);
  auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--key", c.key_path, "Master secret file");
    sub->add_option("--corpus", c.corpus_path, "Cover-text corpus (default: bundled)");
    sub->add_option("--out", c.out, "Output file or directory");
    sub->add_option("--seed", c.seed, "Seed for messages, covers and the simulated network");
    sub->add_option("--jobs", c.jobs, "Parallel trials")->check(CLI::PositiveNumber);
    sub->add_option("--window-radius", c.window_radius, "Variance window radius")->check(CLI::Range(1, 64));
    sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  };

  int key_bits = 256;
  auto* keygen = app.add_subcommand("keygen", "Generate a master secret");
  add_common(keygen);
  keygen->add_option("--bits", key_bits, "Security level")->check(CLI::IsMember({128, 192, 256}));

  std::size_t synth_bits = 256;
  auto* synth = app.add_subcommand("synth", "Generate the two cover texts for a payload size");
  add_common(synth);
  synth->add_option("--bits", synth_bits, "Payload bits")->check(CLI::Range(8, 1 << 20));

  std::string in_path;
  auto* mask_cmd = app.add_subcommand("mask", "Mask a message file with fresh covers");
  add_common(mask_cmd);
  mask_cmd->add_option("--in", in_path, "Message file")->required();

  auto* unmask_cmd = app.add_subcommand("unmask", "Invert mask output");
  add_common(unmask_cmd);
  unmask_cmd->add_option("--in", in_path, "JSON written by mask")->required();

  std::string cover_path, payload_path;
  auto* embed_cmd = app.add_subcommand("embed", "ECC-encode a payload file and embed it into a cover");
  add_common(embed_cmd);
  embed_cmd->add_option("--cover", cover_path, "Cover image")->required();
  embed_cmd->add_option("--payload", payload_path, "Payload file")->required();

  std::string stego_path;
  std::size_t extract_bits = 0;
  auto* extract_cmd = app.add_subcommand("extract", "Extract and ECC-decode a payload");
  add_common(extract_cmd);
  extract_cmd->add_option("--stego", stego_path, "Stego image")->required();
  extract_cmd->add_option("--bits", extract_bits, "Payload bits")->required()->check(CLI::Range(8, 1 << 24));

  std::string message_path;
  std::array<std::string, 3> addresses;
  auto* send = app.add_subcommand("send", "Run the sender and ship the three channels over TCP");
  add_common(send);
  send->add_option("--cover", cover_path, "Cover image")->required();
  send->add_option("--message", message_path, "Message file")->required();
  send->add_option("--c1", addresses[0], "host:port for C1")->required();
  send->add_option("--c2", addresses[1], "host:port for C2")->required();
  send->add_option("--c3", addresses[2], "host:port for C3")->required();

  std::string listen = "127.0.0.1:0", nonce_file;
  auto* recv = app.add_subcommand("recv", "Receive one session over TCP and print the message");
  add_common(recv);
  recv->add_option("--listen", listen, "host:port to accept all three channels on");
  recv->add_option("--nonces", nonce_file, "Persistent nonce history file");

  SimOptions sim_opts;
  auto* sim = app.add_subcommand("sim", "Run sessions through the simulated network");
  add_common(sim);
  sim->add_option("--covers", c.covers_dir, "Directory of cover images");
  sim->add_option("--drop", sim_opts.drop, "Drop probability")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--delay-min", sim_opts.delay_min, "Minimum delay in ms");
  sim->add_option("--delay-max", sim_opts.delay_max, "Maximum delay in ms");
  sim->add_option("--sessions", sim_opts.sessions, "Number of sessions")->check(CLI::PositiveNumber);
  sim->add_option("--payload-bits", sim_opts.payload_bits, "Payload bits per session");
  sim->add_flag("--latency", sim_opts.latency, "Measure per-phase frame latency instead");
  sim->add_option("--backend", sim_opts.backend, "Backend for --latency")->check(CLI::IsMember({"sim", "tcp"}));

  AttackOptions attack_opts;
  auto* attack = app.add_subcommand("attack", "Run an attack over seeded sessions");
  add_common(attack);
  attack->add_option("--method", attack_opts.method, "cmo, hybrid, known-key, cse, replay or mitm");
  attack->add_option("--trials", attack_opts.trials, "Trials per payload size")->check(CLI::PositiveNumber);
  attack->add_option("--payload-bits", attack_opts.payload_bits, "Payload sizes")->delimiter(',');
  attack->add_option("--keyspace-bits", c.keyspace_bits, "Base bits of tiled candidates")->check(CLI::Range(1, 20));
  attack->add_option("--covers", c.covers_dir, "Directory of cover images");
  attack->add_option("--c3-flips", attack_opts.c3_flips, "Bit flips per mitm trial");

  std::string ref, test, text;
  auto* metrics = app.add_subcommand("metrics", "Image quality or text statistics");
  add_common(metrics);
  metrics->add_option("--ref", ref, "Reference image");
  metrics->add_option("--test", test, "Test image");
  metrics->add_option("--text", text, "Text to score");

  std::size_t bench_trials = 100;
  std::vector<std::size_t> bench_bits{64, 128, 256, 512};
  bool plot = false;
  auto* bench = app.add_subcommand("bench", "Honest loopback sweep over payload sizes");
  add_common(bench);
  bench->add_option("--trials", bench_trials, "Trials per payload size");
  bench->add_option("--payload-bits", bench_bits, "Payload sizes")->delimiter(',');
  bench->add_option("--covers", c.covers_dir, "Directory of cover images");
  bench->add_flag("--plot", plot, "Write SVG plots next to the reports");

  std::size_t cover_count = 30, width = 512, height = 512;
  auto* gen = app.add_subcommand("gen-covers", "Write synthetic cover images");
  add_common(gen);
  gen->add_option("--count", cover_count, "Number of covers");
  gen->add_option("--width", width, "Width")->check(CLI::Range(8, 8192));
  gen->add_option("--height", height, "Height")->check(CLI::Range(8, 8192));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) return cmd_keygen(c, key_bits);
    if (*synth) return cmd_synth(c, synth_bits);
    if (*mask_cmd) return cmd_mask(c, in_path);
    if (*unmask_cmd) return cmd_unmask(c, in_path);
    if (*embed_cmd) return cmd_embed(c, cover_path, payload_path);
    if (*extract_cmd) return cmd_extract(c, stego_path, extract_bits);
    if (*send) return cmd_send(c, cover_path, message_path, addresses);
    if (*recv) return cmd_recv(c, listen, nonce_file);
    if (*sim) return cmd_sim(c, sim_opts);
    if (*attack) return cmd_attack(c, attack_opts);
    if (*metrics) return cmd_metrics(c, ref, test, text);
    if (*bench) return cmd_bench(c, bench_trials, bench_bits, plot);
    if (*gen) return cmd_gen_covers(c, cover_count, width, height);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
