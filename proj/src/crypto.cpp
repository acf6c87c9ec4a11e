#include "mcstego/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <fstream>
#include <iterator>

#include "mcstego/errors.hpp"

namespace mcstego {

MasterSecret::MasterSecret(Bytes bytes) : bytes_(std::move(bytes)) {
  if (bytes_.size() < kMinBytes || bytes_.size() > kMaxBytes) {
    throw ParameterError("master secret must be 16..64 octets, got " +
                         std::to_string(bytes_.size()));
  }
}

MasterSecret MasterSecret::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open key file " + path.string());
  Bytes bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return MasterSecret(std::move(bytes));
}

void MasterSecret::save(const std::filesystem::path& path) const {
  namespace fs = std::filesystem;
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write key file " + path.string());
    out.write(reinterpret_cast<const char*>(bytes_.data()),
              static_cast<std::streamsize>(bytes_.size()));
  }
  std::error_code ec;
  fs::permissions(path, fs::perms::owner_read, fs::perm_options::replace, ec);
}

MasterSecret setup(int security_bits) {
  if (security_bits != 128 && security_bits != 192 && security_bits != 256) {
    throw ParameterError("security_bits must be 128, 192 or 256");
  }
  Bytes bytes(static_cast<std::size_t>(security_bits / 8));
  secure_random(bytes);
  return MasterSecret(std::move(bytes));
}

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  static const std::uint8_t kEmpty = 0;
  const std::uint8_t* d = data.empty() ? &kEmpty : data.data();
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), d, data.size(), out.data(),
           &len) == nullptr) {
    throw Error("HMAC computation failed");
  }
  return out;
}

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  return out;
}

BitVector prng_stream(std::span<const std::uint8_t> key, std::size_t n_bits) {
  const std::size_t n_bytes = (n_bits + 7) / 8;
  Bytes stream;
  stream.reserve(n_bytes + 32);
  for (std::uint64_t counter = 0; stream.size() < n_bytes; ++counter) {
    std::array<std::uint8_t, 8> be{};
    for (int i = 0; i < 8; ++i) be[i] = static_cast<std::uint8_t>(counter >> (56 - 8 * i));
    Digest block = hmac_sha256(key, be);
    stream.insert(stream.end(), block.begin(), block.end());
  }
  return BitVector::from_bytes(stream, n_bits);
}

void secure_random(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error("system randomness unavailable");
  }
}

Nonce fresh_nonce() {
  Nonce n;
  secure_random(n.bytes);
  return n;
}

Seed derive_seed(const MasterSecret& key, std::string_view label) {
  Digest tag = hmac_sha256(key.bytes(), as_bytes(label));
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | tag[i];
  return Seed{v};
}

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) return false;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

}  // namespace mcstego
