#include "cheb/error.hpp"
#include "cheb/sieve.hpp"
#include "cheb/sieve_cache.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <vector>

using namespace cheb;

namespace {

std::vector<std::uint64_t> primes_of(const PrimeRange& r) {
    std::vector<std::uint64_t> out;
    r.for_each_prime([&](std::uint64_t p) { out.push_back(p); });
    return out;
}

std::vector<std::uint64_t> collect(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts = {}) {
    std::vector<std::uint64_t> out;
    iterate_primes(lo, hi, [&](std::uint64_t p) { out.push_back(p); }, opts);
    return out;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::invalid_range;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("cheb_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

const std::vector<std::uint32_t>& td_table() {
    static const auto table = oracle::prime_count_table_td(1'000'000);
    return table;
}

}  // namespace

TEST_SUITE("sieve") {

TEST_CASE("sieve_range examples") {
    const PrimeRange r = sieve_range(0, 10);
    CHECK(r.odd_count() == 5);
    // Odd bits for 1,3,5,7,9.
    CHECK(r.words()[0] == 0b01110);
    CHECK(primes_of(r) == std::vector<std::uint64_t>{2, 3, 5, 7});

    const PrimeRange empty = sieve_range(10, 10);
    CHECK(empty.empty());
    CHECK(empty.odd_count() == 0);
    CHECK(empty.words().empty());
    CHECK(empty.count() == 0);

    CHECK(primes_of(sieve_range(100, 120)) == std::vector<std::uint64_t>{101, 103, 107, 109, 113});
}

TEST_CASE("sieve_range errors") {
    CHECK(code_of([] { sieve_range(11, 10); }) == Errc::invalid_range);
    CHECK(code_of([] { sieve_range(0, kSieveLimit + 1); }) == Errc::range_overflow);
    SieveOptions small;
    small.segment_odds = 8;
    small.max_segments = 4;
    CHECK_NOTHROW(sieve_range(0, 64, small));
    CHECK(code_of([&] { sieve_range(0, 65, small); }) == Errc::range_overflow);
}

TEST_CASE("bits match trial division in windows") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint64_t lo = rng() % 10'000'000;
        const std::uint64_t hi = lo + rng() % 3000;
        SieveOptions opts;
        opts.segment_odds = 1 + rng() % 700;
        const PrimeRange r = sieve_range(lo, hi, opts);
        std::uint64_t expected = 0;
        for (std::uint64_t m = lo; m < hi; ++m) {
            const bool prime = oracle::is_prime_td(m);
            expected += prime ? 1 : 0;
            REQUIRE_MESSAGE(r.is_prime(m) == prime, "m = " << m);
        }
        REQUIRE(r.count() == expected);
    }
}

TEST_CASE("far window near 10^12") {
    const std::uint64_t lo = 1'000'000'000'000ULL - 500;
    const PrimeRange r = sieve_range(lo, lo + 1000);
    for (std::uint64_t m = lo; m < lo + 1000; ++m) REQUIRE(r.is_prime(m) == oracle::is_prime_td(m));
}

TEST_CASE("prime_count examples") {
    CHECK(prime_count(10) == 4);
    CHECK(prime_count(2) == 0);
    CHECK(prime_count(0) == 0);
    CHECK(prime_count(3) == 1);
    CHECK(prime_count(1e6) == 78498);
    // Strict bound with real arguments.
    CHECK(prime_count(11) == 4);
    CHECK(prime_count(11.0001) == 5);
    CHECK(prime_count(10.5) == 4);
    CHECK(code_of([] { prime_count(-1); }) == Errc::invalid_range);
    CHECK(code_of([] { prime_count(std::nan("")); }) == Errc::invalid_range);
    CHECK(code_of([] { prime_count(1e19); }) == Errc::range_overflow);
}

TEST_CASE("prime_count equals trial-division oracle") {
    const auto& table = td_table();
    for (std::uint64_t x : {0u, 1u, 2u, 3u, 4u, 5u, 100u, 1000u, 7919u, 7920u, 65536u, 999'983u, 1'000'000u}) {
        REQUIRE(prime_count(static_cast<double>(x)) == table[x]);
    }
    std::mt19937_64 rng(3);
    SieveOptions opts;
    opts.segment_odds = 4096;
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t x = rng() % 1'000'001;
        REQUIRE(prime_count(static_cast<double>(x), opts) == table[x]);
    }
}

TEST_CASE("monotone in x") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        double x = static_cast<double>(rng() % 200000) + 0.25 * (rng() % 4);
        double y = static_cast<double>(rng() % 200000) + 0.25 * (rng() % 4);
        if (x > y) std::swap(x, y);
        REQUIRE(prime_count(x) <= prime_count(y));
    }
}

TEST_CASE("segment independence") {
    const std::uint64_t N = 300'001;
    SieveOptions one;
    one.segment_odds = N;  // single segment
    const PrimeRange whole = sieve_range(0, N, one);
    for (std::uint64_t seg : {1u, 3u, 64u, 100u, 1000u, 4096u, 65536u}) {
        for (unsigned workers : {1u, 4u}) {
            SieveOptions opts;
            opts.segment_odds = seg;
            opts.workers = workers;
            opts.max_segments = N;
            REQUIRE_MESSAGE(sieve_range(0, N, opts) == whole, "segment_odds " << seg);
        }
    }
    // Unaligned start.
    SieveOptions opts;
    opts.segment_odds = 77;
    opts.max_segments = N;
    const PrimeRange part = sieve_range(12'345, N, opts);
    for (std::uint64_t m = 12'345; m < N; ++m) REQUIRE(part.is_prime(m) == whole.is_prime(m));
}

TEST_CASE("counting is independent of workers and segment size") {
    const std::uint64_t expected = prime_count(2e6);
    for (unsigned workers : {1u, 2u, 8u}) {
        SieveOptions opts;
        opts.workers = workers;
        opts.segment_odds = 10'000;
        REQUIRE(prime_count(2e6, opts) == expected);
        REQUIRE(primes_in_ap_count(2e6, 12, 5, opts) == primes_in_ap_count(2e6, 12, 5));
    }
}

TEST_CASE("count_below masks partial words") {
    const PrimeRange r = sieve_range(0, 1000);
    const auto& table = td_table();
    for (std::uint64_t x = 0; x <= 1100; ++x) {
        REQUIRE(r.count_below(x) == table[std::min<std::uint64_t>(x, 1000)]);
    }
}

TEST_CASE("primes_in_ap_count examples") {
    CHECK(primes_in_ap_count(10, 4, 1) == 1);
    CHECK(primes_in_ap_count(10, 4, 3) == 2);
    CHECK(primes_in_ap_count(2, 3, 1) == 0);
    CHECK(primes_in_ap_count(100, 1, 0) == 25);
    CHECK(code_of([] { primes_in_ap_count(10, 4, 4); }) == Errc::invalid_residue);
    CHECK(code_of([] { primes_in_ap_count(10, 0, 0); }) == Errc::invalid_parameter);
}

TEST_CASE("AP counts partition prime_count") {
    std::mt19937_64 rng(9);
    for (std::uint64_t q : {1u, 2u, 3u, 4u, 6u, 10u, 12u, 30u, 64u, 97u, 210u}) {
        const double x = static_cast<double>(rng() % 100000);
        std::uint64_t sum = 0;
        for (std::uint64_t d = 0; d < q; ++d) {
            if (std::gcd(d, q) == 1) sum += primes_in_ap_count(x, q, d);
        }
        for (std::uint64_t p = 2; p <= q && static_cast<double>(p) < x; ++p) {
            if (q % p == 0 && oracle::is_prime_td(p)) ++sum;
        }
        REQUIRE_MESSAGE(sum == prime_count(x), "q = " << q);
    }
}

TEST_CASE("iterate_primes examples") {
    CHECK(collect(0, 6) == std::vector<std::uint64_t>{2, 3, 5});
    CHECK(collect(4, 5).empty());
    CHECK(collect(89, 98) == std::vector<std::uint64_t>{89, 97});
    CHECK(code_of([] { collect(5, 4); }) == Errc::invalid_range);
}

TEST_CASE("iterate_primes is ordered across segments and workers") {
    SieveOptions opts;
    opts.segment_odds = 50;
    opts.workers = 4;
    const auto got = collect(0, 100'000, opts);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t m = 0; m < 100'000; ++m) {
        if (oracle::is_prime_td(m)) expected.push_back(m);
    }
    CHECK(got == expected);
}

TEST_CASE("find_first_prime stops at the first match") {
    SieveOptions opts;
    opts.segment_odds = 16;
    opts.workers = 3;
    CHECK(find_first_prime(0, 10'000, [](std::uint64_t p) { return p % 100 == 1; }, opts) == 101);
    CHECK_FALSE(find_first_prime(0, 100, [](std::uint64_t p) { return p > 1000; }, opts).has_value());
}

TEST_CASE("worker exceptions propagate") {
    SieveOptions opts;
    opts.segment_odds = 16;
    opts.workers = 4;
    CHECK_THROWS_AS(count_primes_if(0, 10'000,
                                    [](std::uint64_t p) -> bool {
                                        if (p == 4099) throw std::runtime_error("boom");
                                        return true;
                                    },
                                    opts),
                    std::runtime_error);
}

TEST_CASE("cache file layout") {
    const PrimeRange r = sieve_range(0, 20);  // odds 1..19, 10 bits
    const auto bytes = encode_cache(r);
    REQUIRE(bytes.size() == 5 + 16 + 2);
    CHECK(std::string(bytes.begin(), bytes.begin() + 5) == "CHEB1");
    CHECK(bytes[5] == 0);
    CHECK(bytes[13] == 20);
    for (int i = 14; i < 21; ++i) CHECK(bytes[i] == 0);
    // 3,5,7 -> bits 1,2,3; 11,13 -> bits 5,6; 17,19 -> bits 8,9.
    CHECK(bytes[21] == 0b01101110);
    CHECK(bytes[22] == 0b00000011);
}

TEST_CASE("cache encoding round-trips") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t lo = rng() % 100'000;
        const PrimeRange r = sieve_range(lo, lo + rng() % 5000);
        const auto decoded = decode_cache(encode_cache(r));
        REQUIRE(decoded.has_value());
        REQUIRE(*decoded == r);
    }
}

TEST_CASE("cache decoding rejects malformed input") {
    const auto good = encode_cache(sieve_range(0, 20));
    auto bad_magic = good;
    bad_magic[0] = 'X';
    CHECK_FALSE(decode_cache(bad_magic).has_value());
    auto short_payload = good;
    short_payload.pop_back();
    CHECK_FALSE(decode_cache(short_payload).has_value());
    auto long_payload = good;
    long_payload.push_back(0);
    CHECK_FALSE(decode_cache(long_payload).has_value());
    auto padding = good;
    padding.back() |= 0x80;
    CHECK_FALSE(decode_cache(padding).has_value());
    auto inverted = good;
    inverted[5] = 30;  // lo = 30 > hi = 20
    CHECK_FALSE(decode_cache(inverted).has_value());
    CHECK_FALSE(decode_cache(std::span<const std::uint8_t>{}).has_value());
}

TEST_CASE("disk cache stores full grid segments and survives corruption") {
    TempDir dir;
    SieveOptions opts;
    opts.segment_odds = 64;  // width 128
    opts.cache_dir = dir.path;
    const PrimeRange fresh = sieve_range(0, 1000, opts);

    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir.path)) {
        (void)entry;
        ++files;
    }
    CHECK(files == 7);  // [0,128) .. [768,896); the tail [896,1000) is partial
    const auto seg_path = cache_file_path(dir.path, 128, 256);
    REQUIRE(std::filesystem::exists(seg_path));
    CHECK(std::filesystem::file_size(seg_path) == 5 + 16 + 8);
    const auto cached = read_cache_file(seg_path, 128, 256);
    REQUIRE(cached.has_value());
    CHECK(*cached == sieve_range(128, 256));
    CHECK_FALSE(read_cache_file(seg_path, 0, 128).has_value());

    // Second run reads the cache.
    CHECK(sieve_range(0, 1000, opts) == fresh);

    // Corrupt one file, truncate another: both are recomputed and rewritten.
    {
        std::ofstream out(seg_path, std::ios::binary | std::ios::trunc);
        out << "garbage";
    }
    std::filesystem::resize_file(cache_file_path(dir.path, 256, 384), 10);
    CHECK(sieve_range(0, 1000, opts) == fresh);
    CHECK(prime_count(1000, opts) == 168);
    CHECK(read_cache_file(seg_path, 128, 256).has_value());
    CHECK(read_cache_file(cache_file_path(dir.path, 256, 384), 256, 384).has_value());
}

TEST_CASE("unwritable cache directory is ignored") {
    SieveOptions opts;
    opts.segment_odds = 64;
    opts.cache_dir = std::filesystem::path("/proc/definitely/not/writable");
    CHECK(prime_count(1000, opts) == 168);
}

TEST_CASE("cache directory from the environment") {
    ::setenv("CHEB_CACHE_DIR", "/tmp/cheb-env-test", 1);
    CHECK(SieveOptions::from_env().cache_dir == std::filesystem::path("/tmp/cheb-env-test"));
    ::unsetenv("CHEB_CACHE_DIR");
    CHECK_FALSE(SieveOptions::from_env().cache_dir.has_value());
}

TEST_CASE("base primes") {
    CHECK(base_primes(9).empty());
    CHECK(base_primes(10) == std::vector<std::uint32_t>{3});
    CHECK(base_primes(50) == std::vector<std::uint32_t>{3, 5, 7});
    CHECK(base_primes(122) == std::vector<std::uint32_t>{3, 5, 7, 11});
}

}
