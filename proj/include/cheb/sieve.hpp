#pragma once

// Segmented sieve of Eratosthenes over odd integers.
//
// A PrimeRange covers the half-open interval [lo, hi) and stores one bit per
// odd integer in it:
//   bit index i  ->  odd number first_odd() + 2*i
// The prime 2 has no bit; queries add it back when lo <= 2 < hi.
//
// All counting queries take a real bound x and count primes strictly below x.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cheb {

// Largest supported exclusive upper bound.
inline constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 63;

struct SieveOptions {
    // Odd entries per segment (2^20 keeps the inner loop cache-resident).
    std::uint64_t segment_odds = std::uint64_t{1} << 20;
    // Upper bound on segments materialized by a single sieve_range call.
    std::uint64_t max_segments = 4096;
    unsigned workers = 1;
    // Segment cache directory; no caching when empty.
    std::optional<std::filesystem::path> cache_dir;

    // Defaults, with cache_dir taken from CHEB_CACHE_DIR when set.
    static SieveOptions from_env();
};

class PrimeRange {
public:
    PrimeRange() = default;
    // Takes ownership of already-sieved flags; words.size() must equal
    // words_for(hi/2 - lo/2) and padding bits must be zero.
    PrimeRange(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> words);

    std::uint64_t lo() const noexcept { return lo_; }
    std::uint64_t hi() const noexcept { return hi_; }
    bool empty() const noexcept { return lo_ == hi_; }

    // Smallest odd integer >= lo (may be >= hi for tiny ranges).
    std::uint64_t first_odd() const noexcept { return lo_ | 1; }
    // Number of odd integers in [lo, hi).
    std::uint64_t odd_count() const noexcept { return hi_ / 2 - lo_ / 2; }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    // Raw flag for an odd m in [lo, hi).
    bool bit(std::uint64_t odd_m) const noexcept {
        std::uint64_t i = (odd_m - first_odd()) / 2;
        return (words_[i / 64] >> (i % 64)) & 1U;
    }

    // Primality of any m in [lo, hi), including 2.
    bool is_prime(std::uint64_t m) const noexcept {
        if (m % 2 == 0) return m == 2;
        return bit(m);
    }

    // Number of primes in [lo, min(x_excl, hi)), including 2.
    std::uint64_t count_below(std::uint64_t x_excl) const noexcept;
    std::uint64_t count() const noexcept { return count_below(hi_); }

    // Calls visit(p) for every prime in [lo, hi), ascending.
    template <typename Visit>
    void for_each_prime(Visit&& visit) const {
        if (lo_ <= 2 && 2 < hi_) visit(std::uint64_t{2});
        const std::uint64_t base = first_odd();
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const int tz = std::countr_zero(bits);
                visit(base + 2 * (static_cast<std::uint64_t>(w) * 64 + static_cast<std::uint64_t>(tz)));
                bits &= bits - 1;
            }
        }
    }

    static std::size_t words_for(std::uint64_t odd_count) noexcept {
        return static_cast<std::size_t>((odd_count + 63) / 64);
    }

    friend bool operator==(const PrimeRange&, const PrimeRange&) = default;

private:
    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::vector<std::uint64_t> words_;
};

// Odd primes p with p*p < hi, as needed to sieve any segment below hi.
std::vector<std::uint32_t> base_primes(std::uint64_t hi);

// Materialized sieve of [lo, hi). Errors: invalid_range when lo > hi,
// range_overflow when hi > kSieveLimit or the span exceeds
// 2 * segment_odds * max_segments.
PrimeRange sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts = {});

// #{p prime : p < x}.
std::uint64_t prime_count(double x, const SieveOptions& opts = {});

// #{p prime : p < x, p = d (mod q)}. Errors: invalid_residue when d >= q,
// invalid_parameter when q == 0.
std::uint64_t primes_in_ap_count(double x, std::uint64_t q, std::uint64_t d,
                                 const SieveOptions& opts = {});

// Visits every prime in [lo, hi) in increasing order. Not bounded by
// max_segments: the range is streamed segment by segment.
void iterate_primes(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& visitor,
                    const SieveOptions& opts = {});

// #{p prime in [lo, hi) : pred(p)}. Segments are processed by opts.workers
// threads; pred must be safe to call concurrently.
std::uint64_t count_primes_if(std::uint64_t lo, std::uint64_t hi,
                              const std::function<bool(std::uint64_t)>& pred,
                              const SieveOptions& opts = {});

// Smallest prime p in [lo, hi) with pred(p), scanning segment by segment.
std::optional<std::uint64_t> find_first_prime(std::uint64_t lo, std::uint64_t hi,
                                              const std::function<bool(std::uint64_t)>& pred,
                                              const SieveOptions& opts = {});

// Converts a real bound x (count p < x) into an exclusive integer bound,
// validating x against the supported range.
std::uint64_t checked_bound(double x);

}  // namespace cheb
