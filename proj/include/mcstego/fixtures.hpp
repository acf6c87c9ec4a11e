#pragma once

// Bundled data and deterministic synthetic covers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mcstego/image.hpp"

namespace mcstego {

/// STEGO_FIXTURES when set, otherwise the data directory of the source tree.
std::filesystem::path fixtures_dir();

/// Reads a UTF-8 text file; throws CorpusError when it is missing or empty.
std::string load_corpus(const std::filesystem::path& path);
std::string bundled_corpus();
/// A second corpus with different vocabulary, used as the attacker's guess
/// at the cover distribution.
std::string attacker_corpus();

/// Procedural photo-like cover: smooth gradients, a few flat shapes,
/// multi-scale value noise and fine grain. Pure function of its arguments.
RasterImage synthetic_cover(std::uint64_t seed, std::size_t width = 512, std::size_t height = 512,
                            std::size_t channels = 3);

/// synthetic_cover for seeds first_seed .. first_seed + count - 1.
std::vector<RasterImage> cover_library(std::size_t count, std::uint64_t first_seed = 1,
                                       std::size_t width = 512, std::size_t height = 512);

/// Lowercase hex SHA-256 of a file's contents.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace mcstego
