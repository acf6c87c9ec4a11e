#include "mcstego/ecc.hpp"

#include <algorithm>
#include <vector>

#include "mcstego/errors.hpp"

namespace mcstego {
namespace rs {

GaloisField::GaloisField() {
  int x = 1;
  for (int i = 0; i < 255; ++i) {
    exp_[i] = static_cast<std::uint8_t>(x);
    log_[x] = i;
    x <<= 1;
    if (x & 0x100) x ^= 0x11D;
  }
  for (int i = 255; i < 512; ++i) exp_[i] = exp_[i - 255];
  log_[0] = -1;
}

const GaloisField& GaloisField::instance() {
  static const GaloisField field;
  return field;
}

std::uint8_t GaloisField::div(std::uint8_t a, std::uint8_t b) const {
  if (b == 0) throw ParameterError("GF(256) division by zero");
  if (a == 0) return 0;
  return exp_[(log_[a] + 255 - log_[b]) % 255];
}

std::uint8_t GaloisField::pow_alpha(int power) const {
  int p = power % 255;
  if (p < 0) p += 255;
  return exp_[p];
}

namespace {

using Poly = std::vector<std::uint8_t>;  // coefficient i multiplies x^i

const Poly& generator() {
  static const Poly g = [] {
    const auto& gf = GaloisField::instance();
    Poly p{1};
    for (std::size_t j = 0; j < kParity; ++j) {
      // p *= (x - alpha^j)
      const std::uint8_t root = gf.pow_alpha(static_cast<int>(j));
      Poly next(p.size() + 1, 0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        next[i + 1] ^= p[i];
        next[i] ^= gf.mul(p[i], root);
      }
      p = std::move(next);
    }
    return p;
  }();
  return g;
}

std::uint8_t eval(const Poly& p, std::uint8_t x) {
  const auto& gf = GaloisField::instance();
  std::uint8_t y = 0;
  for (std::size_t i = p.size(); i-- > 0;) y = static_cast<std::uint8_t>(gf.mul(y, x) ^ p[i]);
  return y;
}

}  // namespace

std::array<std::uint8_t, kParity> encode_block(std::span<const std::uint8_t> data) {
  if (data.empty() || data.size() > kK) {
    throw ParameterError("RS data block must hold 1..223 octets");
  }
  const auto& gf = GaloisField::instance();
  const Poly& g = generator();
  // LFSR division of data(x) * x^32 by g(x); reg[0] holds the x^31 term.
  std::array<std::uint8_t, kParity> reg{};
  for (std::uint8_t d : data) {
    const std::uint8_t feedback = d ^ reg[0];
    for (std::size_t i = 0; i + 1 < kParity; ++i) {
      reg[i] = reg[i + 1] ^ gf.mul(feedback, g[kParity - 1 - i]);
    }
    reg[kParity - 1] = gf.mul(feedback, g[0]);
  }
  return reg;
}

std::size_t decode_block(std::span<std::uint8_t> codeword) {
  const std::size_t n = codeword.size();
  if (n <= kParity || n > kN) throw LengthError("RS codeword must hold 33..255 octets");
  const auto& gf = GaloisField::instance();

  // Octet i is the coefficient of x^(n-1-i).
  auto position_power = [n](std::size_t i) { return static_cast<int>(n - 1 - i); };

  std::array<std::uint8_t, kParity> syndromes{};
  bool clean = true;
  for (std::size_t j = 0; j < kParity; ++j) {
    const std::uint8_t x = gf.pow_alpha(static_cast<int>(j));
    std::uint8_t s = 0;
    for (std::uint8_t c : codeword) s = static_cast<std::uint8_t>(gf.mul(s, x) ^ c);
    syndromes[j] = s;
    clean = clean && s == 0;
  }
  if (clean) return 0;

  // Berlekamp-Massey: error locator lambda(x) with lambda(0) = 1.
  Poly lambda{1}, prev{1};
  std::size_t degree = 0;
  std::size_t shift = 1;
  std::uint8_t prev_discrepancy = 1;
  for (std::size_t k = 0; k < kParity; ++k) {
    std::uint8_t delta = syndromes[k];
    for (std::size_t i = 1; i <= degree && i < lambda.size(); ++i) {
      delta ^= gf.mul(lambda[i], syndromes[k - i]);
    }
    if (delta == 0) {
      ++shift;
      continue;
    }
    const std::uint8_t scale = gf.div(delta, prev_discrepancy);
    Poly updated = lambda;
    if (updated.size() < prev.size() + shift) updated.resize(prev.size() + shift, 0);
    for (std::size_t i = 0; i < prev.size(); ++i) updated[i + shift] ^= gf.mul(scale, prev[i]);
    if (2 * degree <= k) {
      prev = lambda;
      degree = k + 1 - degree;
      prev_discrepancy = delta;
      shift = 1;
    } else {
      ++shift;
    }
    lambda = std::move(updated);
  }
  while (lambda.size() > 1 && lambda.back() == 0) lambda.pop_back();
  const std::size_t n_errors = lambda.size() - 1;
  if (n_errors == 0 || n_errors > kMaxErrors || n_errors != degree) {
    throw UncorrectableError("RS block has more errors than the code can correct");
  }

  // Chien search restricted to positions that exist in this (possibly shortened) codeword.
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < n; ++i) {
    if (eval(lambda, gf.pow_alpha(-position_power(i))) == 0) positions.push_back(i);
  }
  if (positions.size() != n_errors) {
    throw UncorrectableError("RS error locator roots do not match its degree");
  }

  // Forney with first consecutive root alpha^0: e = X * omega(X^-1) / lambda'(X^-1).
  Poly syndrome_poly(syndromes.begin(), syndromes.end());
  Poly omega(kParity, 0);
  for (std::size_t i = 0; i < syndrome_poly.size(); ++i) {
    for (std::size_t j = 0; j < lambda.size() && i + j < kParity; ++j) {
      omega[i + j] ^= gf.mul(syndrome_poly[i], lambda[j]);
    }
  }
  Poly lambda_prime(lambda.size() > 1 ? lambda.size() - 1 : 1, 0);
  for (std::size_t i = 1; i < lambda.size(); i += 2) lambda_prime[i - 1] = lambda[i];

  for (std::size_t i : positions) {
    const std::uint8_t x = gf.pow_alpha(position_power(i));
    const std::uint8_t x_inv = gf.inverse(x);
    const std::uint8_t denom = eval(lambda_prime, x_inv);
    if (denom == 0) throw UncorrectableError("RS Forney denominator vanished");
    codeword[i] ^= gf.mul(x, gf.div(eval(omega, x_inv), denom));
  }

  for (std::size_t j = 0; j < kParity; ++j) {
    const std::uint8_t x = gf.pow_alpha(static_cast<int>(j));
    std::uint8_t s = 0;
    for (std::uint8_t c : codeword) s = static_cast<std::uint8_t>(gf.mul(s, x) ^ c);
    if (s != 0) throw UncorrectableError("RS correction did not yield a codeword");
  }
  return n_errors;
}

}  // namespace rs

std::size_t ecc_coded_bits(std::size_t data_len_bits) {
  const std::size_t data_bytes = (data_len_bits + 7) / 8;
  const std::size_t blocks = (data_bytes + rs::kK - 1) / rs::kK;
  return (data_bytes + blocks * rs::kParity) * 8;
}

EccPayload ecc_encode(const MaskedPayload& b) {
  if (b.length() < 8) throw ParameterError("ECC payload must hold at least 8 bits");
  EccPayload out;
  out.data_bits = b.bits;
  out.pad_bits = (8 - b.length() % 8) % 8;
  const Bytes data = b.bits.to_bytes();
  Bytes coded;
  coded.reserve(ecc_coded_bits(b.length()) / 8);
  for (std::size_t off = 0; off < data.size(); off += rs::kK) {
    const std::size_t len = std::min(rs::kK, data.size() - off);
    std::span<const std::uint8_t> block(data.data() + off, len);
    coded.insert(coded.end(), block.begin(), block.end());
    const auto parity = rs::encode_block(block);
    coded.insert(coded.end(), parity.begin(), parity.end());
  }
  out.coded_bits = BitVector::from_bytes(coded);
  return out;
}

namespace {
EccDecodeStats decode_impl(const BitVector& coded, std::size_t data_len_bits, bool strict) {
  if (data_len_bits == 0 || coded.size() != ecc_coded_bits(data_len_bits)) {
    throw LengthError("coded length " + std::to_string(coded.size()) +
                      " inconsistent with payload of " + std::to_string(data_len_bits) + " bits");
  }
  Bytes bytes = coded.to_bytes();
  const std::size_t data_bytes = (data_len_bits + 7) / 8;
  Bytes data;
  data.reserve(data_bytes);
  EccDecodeStats stats;
  std::size_t pos = 0;
  for (std::size_t remaining = data_bytes; remaining > 0;) {
    const std::size_t len = std::min(rs::kK, remaining);
    const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(pos);
    Bytes codeword(first, first + static_cast<std::ptrdiff_t>(len + rs::kParity));
    try {
      stats.corrected_symbols += rs::decode_block(codeword);
    } catch (const UncorrectableError&) {
      if (strict) throw;
      ++stats.failed_blocks;
      codeword.assign(first, first + static_cast<std::ptrdiff_t>(len + rs::kParity));
    }
    data.insert(data.end(), codeword.begin(), codeword.begin() + static_cast<std::ptrdiff_t>(len));
    pos += len + rs::kParity;
    remaining -= len;
  }
  stats.payload = MaskedPayload{BitVector::from_bytes(data, data_len_bits)};
  return stats;
}
}  // namespace

MaskedPayload ecc_decode(const BitVector& coded, std::size_t data_len_bits) {
  return decode_impl(coded, data_len_bits, true).payload;
}

EccDecodeStats ecc_decode_lenient(const BitVector& coded, std::size_t data_len_bits) {
  return decode_impl(coded, data_len_bits, false);
}

}  // namespace mcstego
