#pragma once

// On-disk segment cache.
//
// File layout (all integers little-endian):
//   "CHEB1"            5 bytes
//   lo                 u64
//   hi                 u64
//   packed odd flags   ceil(odd_count / 8) bytes, LSB first within each byte
//
// Readers reject anything that does not match this layout exactly, including
// nonzero padding bits in the final byte.

#include "cheb/sieve.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace cheb {

inline constexpr char kCacheMagic[5] = {'C', 'H', 'E', 'B', '1'};

std::vector<std::uint8_t> encode_cache(const PrimeRange& range);
std::optional<PrimeRange> decode_cache(std::span<const std::uint8_t> bytes);

std::filesystem::path cache_file_path(const std::filesystem::path& dir, std::uint64_t lo,
                                      std::uint64_t hi);

// Returns nullopt for missing, unreadable, corrupt, or mismatched files.
std::optional<PrimeRange> read_cache_file(const std::filesystem::path& path, std::uint64_t lo,
                                          std::uint64_t hi);

// Best effort: writes via a temporary file and rename. Returns false on failure.
bool write_cache_file(const std::filesystem::path& path, const PrimeRange& range);

}  // namespace cheb
