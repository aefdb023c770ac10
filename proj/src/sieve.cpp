#include "cheb/sieve.hpp"

#include "cheb/error.hpp"
#include "cheb/int_math.hpp"
#include "cheb/sieve_cache.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace cheb {

namespace {

struct Segment {
    std::uint64_t lo;
    std::uint64_t hi;
};

std::uint64_t segment_width(const SieveOptions& opts) {
    if (opts.segment_odds == 0 || opts.segment_odds > (std::uint64_t{1} << 40)) {
        throw Error(Errc::invalid_parameter, "segment_odds must be in [1, 2^40]");
    }
    return 2 * opts.segment_odds;
}

void validate_range(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) {
        throw Error(Errc::invalid_range, "lo " + std::to_string(lo) + " > hi " + std::to_string(hi));
    }
    if (hi > kSieveLimit) {
        throw Error(Errc::range_overflow, "hi " + std::to_string(hi) + " exceeds 2^63");
    }
}

// [lo, hi) cut on the global grid of multiples of the segment width, so
// cached segments are shared between calls with different bounds.
std::vector<Segment> plan_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
    const std::uint64_t width = segment_width(opts);
    std::vector<Segment> out;
    std::uint64_t cur = lo;
    while (cur < hi) {
        const std::uint64_t grid_end = (cur / width + 1) * width;
        const std::uint64_t end = std::min(hi, grid_end);
        out.push_back({cur, end});
        cur = end;
    }
    return out;
}

PrimeRange sieve_segment(Segment seg, std::span<const std::uint32_t> base) {
    const std::uint64_t odd_count = seg.hi / 2 - seg.lo / 2;
    std::vector<std::uint64_t> words(PrimeRange::words_for(odd_count), ~std::uint64_t{0});
    if (odd_count % 64 != 0) {
        words.back() = (std::uint64_t{1} << (odd_count % 64)) - 1;
    }
    const std::uint64_t first = seg.lo | 1;

    for (const std::uint32_t p32 : base) {
        const std::uint64_t p = p32;
        const std::uint64_t square = p * p;
        if (square >= seg.hi) break;
        std::uint64_t start = std::max(square, (seg.lo + p - 1) / p * p);
        if (start % 2 == 0) start += p;
        for (std::uint64_t i = (start - first) / 2; i < odd_count; i += p) {
            words[i / 64] &= ~(std::uint64_t{1} << (i % 64));
        }
    }
    if (seg.lo <= 1 && 1 < seg.hi) {
        words[0] &= ~std::uint64_t{1};
    }
    return PrimeRange(seg.lo, seg.hi, std::move(words));
}

bool cacheable(Segment seg, const SieveOptions& opts) {
    const std::uint64_t width = 2 * opts.segment_odds;
    return opts.cache_dir.has_value() && seg.lo % width == 0 && seg.hi - seg.lo == width;
}

PrimeRange load_or_sieve(Segment seg, std::span<const std::uint32_t> base, const SieveOptions& opts) {
    if (!cacheable(seg, opts)) return sieve_segment(seg, base);
    const auto path = cache_file_path(*opts.cache_dir, seg.lo, seg.hi);
    if (auto cached = read_cache_file(path, seg.lo, seg.hi)) return std::move(*cached);
    PrimeRange fresh = sieve_segment(seg, base);
    write_cache_file(path, fresh);
    return fresh;
}

// Runs task(i) for i in [0, count) on up to `workers` threads. The first
// exception thrown by any task is rethrown on the calling thread.
template <typename Task>
void run_parallel(std::size_t count, unsigned workers, Task&& task) {
    const std::size_t threads = std::min<std::size_t>(std::max(1U, workers), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

// Sum of per_segment(range) over all segments of [lo, hi).
template <typename PerSegment>
std::uint64_t reduce_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts,
                              PerSegment&& per_segment) {
    validate_range(lo, hi);
    if (lo == hi) return 0;
    const auto segments = plan_segments(lo, hi, opts);
    const auto base = base_primes(hi);
    std::vector<std::uint64_t> partial(segments.size(), 0);
    run_parallel(segments.size(), opts.workers, [&](std::size_t i) {
        partial[i] = per_segment(load_or_sieve(segments[i], base, opts));
    });
    std::uint64_t total = 0;
    for (const auto v : partial) total += v;
    return total;
}

// Visits segments of [lo, hi) in order, sieving batches of `workers`
// segments concurrently. Stops early when visit returns false.
template <typename Visit>
void stream_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts, Visit&& visit) {
    validate_range(lo, hi);
    if (lo == hi) return;
    const auto segments = plan_segments(lo, hi, opts);
    const auto base = base_primes(hi);
    const std::size_t batch = std::max(1U, opts.workers);
    std::vector<PrimeRange> sieved(batch);
    for (std::size_t start = 0; start < segments.size(); start += batch) {
        const std::size_t len = std::min(batch, segments.size() - start);
        run_parallel(len, opts.workers, [&](std::size_t i) {
            sieved[i] = load_or_sieve(segments[start + i], base, opts);
        });
        for (std::size_t i = 0; i < len; ++i) {
            if (!visit(sieved[i])) return;
        }
    }
}

// ORs nbits bits of src into dst starting at bit offset dst_bit.
void splice_bits(std::vector<std::uint64_t>& dst, std::uint64_t dst_bit,
                 std::span<const std::uint64_t> src, std::uint64_t nbits) {
    const std::uint64_t shift = dst_bit % 64;
    std::size_t w = static_cast<std::size_t>(dst_bit / 64);
    const std::size_t src_words = PrimeRange::words_for(nbits);
    for (std::size_t i = 0; i < src_words; ++i, ++w) {
        const std::uint64_t v = src[i];
        dst[w] |= v << shift;
        if (shift != 0 && w + 1 < dst.size()) dst[w + 1] |= v >> (64 - shift);
    }
}

}  // namespace

SieveOptions SieveOptions::from_env() {
    SieveOptions opts;
    if (const char* dir = std::getenv("CHEB_CACHE_DIR"); dir != nullptr && *dir != '\0') {
        opts.cache_dir = std::filesystem::path(dir);
    }
    return opts;
}

PrimeRange::PrimeRange(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> words)
    : lo_(lo), hi_(hi), words_(std::move(words)) {
    if (lo > hi || words_.size() != words_for(odd_count())) {
        throw Error(Errc::invalid_range, "flag storage does not match [lo, hi)");
    }
}

std::uint64_t PrimeRange::count_below(std::uint64_t x_excl) const noexcept {
    const std::uint64_t end = std::min(x_excl, hi_);
    if (end <= lo_) return 0;
    std::uint64_t total = (lo_ <= 2 && 2 < end) ? 1 : 0;
    // Odd integers in [lo, end).
    const std::uint64_t nbits = end / 2 - lo_ / 2;
    const std::size_t full = static_cast<std::size_t>(nbits / 64);
    for (std::size_t w = 0; w < full; ++w) total += std::popcount(words_[w]);
    if (const std::uint64_t rest = nbits % 64; rest != 0) {
        total += std::popcount(words_[full] & ((std::uint64_t{1} << rest) - 1));
    }
    return total;
}

std::vector<std::uint32_t> base_primes(std::uint64_t hi) {
    std::vector<std::uint32_t> primes;
    if (hi <= 9) return primes;  // 3*3 >= hi
    const std::uint64_t limit = isqrt(hi - 1);
    // composite[i] describes the odd number 2*i + 1.
    std::vector<bool> composite(static_cast<std::size_t>(limit / 2 + 1), false);
    for (std::uint64_t m = 3; m <= limit; m += 2) {
        if (composite[m / 2]) continue;
        primes.push_back(static_cast<std::uint32_t>(m));
        for (std::uint64_t k = m * m; k <= limit; k += 2 * m) composite[k / 2] = true;
    }
    return primes;
}

PrimeRange sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
    validate_range(lo, hi);
    const std::uint64_t width = segment_width(opts);
    if ((hi - lo + width - 1) / width > opts.max_segments) {
        throw Error(Errc::range_overflow, "span " + std::to_string(hi - lo) +
                                              " exceeds segment_odds * max_segments odd entries");
    }
    const std::uint64_t odd_count = hi / 2 - lo / 2;
    std::vector<std::uint64_t> words(PrimeRange::words_for(odd_count), 0);
    const std::uint64_t first = lo | 1;
    stream_segments(lo, hi, opts, [&](const PrimeRange& seg) {
        if (seg.odd_count() != 0) {
            splice_bits(words, (seg.first_odd() - first) / 2, seg.words(), seg.odd_count());
        }
        return true;
    });
    return PrimeRange(lo, hi, std::move(words));
}

std::uint64_t checked_bound(double x) {
    if (std::isnan(x) || x < 0) {
        throw Error(Errc::invalid_range, "bound must be a nonnegative real");
    }
    if (x > static_cast<double>(kSieveLimit)) {
        throw Error(Errc::range_overflow, "bound exceeds 2^63");
    }
    return exclusive_bound(x);
}

std::uint64_t prime_count(double x, const SieveOptions& opts) {
    return reduce_segments(0, checked_bound(x), opts, [](const PrimeRange& seg) { return seg.count(); });
}

std::uint64_t primes_in_ap_count(double x, std::uint64_t q, std::uint64_t d, const SieveOptions& opts) {
    if (q == 0) throw Error(Errc::invalid_parameter, "modulus must be positive");
    if (d >= q) {
        throw Error(Errc::invalid_residue,
                    "residue " + std::to_string(d) + " not in [0, " + std::to_string(q) + ")");
    }
    const std::uint64_t hi = checked_bound(x);
    if (q == 1) return prime_count(x, opts);
    return reduce_segments(0, hi, opts, [q, d](const PrimeRange& seg) {
        std::uint64_t n = 0;
        seg.for_each_prime([&](std::uint64_t p) { n += (p % q == d); });
        return n;
    });
}

void iterate_primes(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& visitor,
                    const SieveOptions& opts) {
    stream_segments(lo, hi, opts, [&](const PrimeRange& seg) {
        seg.for_each_prime(visitor);
        return true;
    });
}

std::uint64_t count_primes_if(std::uint64_t lo, std::uint64_t hi, const std::function<bool(std::uint64_t)>& pred,
                              const SieveOptions& opts) {
    return reduce_segments(lo, hi, opts, [&](const PrimeRange& seg) {
        std::uint64_t n = 0;
        seg.for_each_prime([&](std::uint64_t p) { n += pred(p) ? 1 : 0; });
        return n;
    });
}

std::optional<std::uint64_t> find_first_prime(std::uint64_t lo, std::uint64_t hi,
                                              const std::function<bool(std::uint64_t)>& pred,
                                              const SieveOptions& opts) {
    std::optional<std::uint64_t> found;
    stream_segments(lo, hi, opts, [&](const PrimeRange& seg) {
        seg.for_each_prime([&](std::uint64_t p) {
            if (!found && pred(p)) found = p;
        });
        return !found;
    });
    return found;
}

}  // namespace cheb
