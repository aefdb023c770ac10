#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace cheb {

// Floor of the square root, exact over the whole 64-bit range.
constexpr std::uint64_t isqrt(std::uint64_t v) noexcept {
    if (v < 2) return v;
    // Newton from an overestimate; monotonically decreasing to floor(sqrt(v)).
    std::uint64_t x = std::uint64_t{1} << ((std::bit_width(v) + 1) / 2);
    while (true) {
        std::uint64_t y = (x + v / x) / 2;
        if (y >= x) return x;
        x = y;
    }
}

constexpr bool is_perfect_square(std::uint64_t v) noexcept {
    std::uint64_t s = isqrt(v);
    return s * s == v;
}

constexpr bool is_power_of_two(std::uint64_t v) noexcept { return std::has_single_bit(v); }

// Smallest integer h with (p < x  <=>  p < h) for every integer p >= 0.
// Assumes x is finite and 0 <= x <= 2^63.
inline std::uint64_t exclusive_bound(double x) noexcept {
    return static_cast<std::uint64_t>(std::ceil(x));
}

}  // namespace cheb
