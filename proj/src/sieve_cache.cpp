#include "cheb/sieve_cache.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <system_error>
#include <thread>

namespace cheb {

namespace {

constexpr std::size_t kHeaderSize = sizeof(kCacheMagic) + 2 * sizeof(std::uint64_t);

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_cache(const PrimeRange& range) {
    const std::uint64_t nbits = range.odd_count();
    const std::size_t nbytes = static_cast<std::size_t>((nbits + 7) / 8);
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + nbytes);
    out.insert(out.end(), std::begin(kCacheMagic), std::end(kCacheMagic));
    put_u64(out, range.lo());
    put_u64(out, range.hi());
    const auto words = range.words();
    for (std::size_t b = 0; b < nbytes; ++b) {
        out.push_back(static_cast<std::uint8_t>(words[b / 8] >> (8 * (b % 8))));
    }
    return out;
}

std::optional<PrimeRange> decode_cache(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize ||
        !std::equal(std::begin(kCacheMagic), std::end(kCacheMagic), bytes.begin())) {
        return std::nullopt;
    }
    const std::uint64_t lo = get_u64(bytes.subspan(5));
    const std::uint64_t hi = get_u64(bytes.subspan(13));
    if (lo > hi || hi > kSieveLimit) return std::nullopt;
    const std::uint64_t nbits = hi / 2 - lo / 2;
    const std::uint64_t nbytes = (nbits + 7) / 8;
    if (bytes.size() - kHeaderSize != nbytes) return std::nullopt;

    const auto payload = bytes.subspan(kHeaderSize);
    if (nbits % 8 != 0 && (payload.back() >> (nbits % 8)) != 0) return std::nullopt;

    std::vector<std::uint64_t> words(PrimeRange::words_for(nbits), 0);
    for (std::size_t b = 0; b < payload.size(); ++b) {
        words[b / 8] |= static_cast<std::uint64_t>(payload[b]) << (8 * (b % 8));
    }
    return PrimeRange(lo, hi, std::move(words));
}

std::filesystem::path cache_file_path(const std::filesystem::path& dir, std::uint64_t lo, std::uint64_t hi) {
    return dir / ("cheb1_" + std::to_string(lo) + "_" + std::to_string(hi) + ".bin");
}

std::optional<PrimeRange> read_cache_file(const std::filesystem::path& path, std::uint64_t lo, std::uint64_t hi) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto range = decode_cache(bytes);
    if (!range || range->lo() != lo || range->hi() != hi) return std::nullopt;
    return range;
}

bool write_cache_file(const std::filesystem::path& path, const PrimeRange& range) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) return false;

    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        const auto bytes = encode_cache(range);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return false;
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            out.close();
            std::filesystem::remove(tmp, ec);
            return false;
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        return false;
    }
    return true;
}

}  // namespace cheb
