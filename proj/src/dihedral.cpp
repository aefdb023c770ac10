#include "cheb/dihedral.hpp"

#include "cheb/error.hpp"
#include "cheb/int_math.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace cheb {

DihedralInstance make_dihedral_instance(int r) {
    if (r < 2 || r > kDihedralMaxR) {
        throw Error(Errc::invalid_parameter, "r must be in [2, 31], got " + std::to_string(r));
    }
    DihedralInstance inst;
    inst.r = r;
    inst.n = std::uint64_t{1} << r;
    inst.alpha_classes = alpha_dihedral(inst.n);
    return inst;
}

void require_dihedral_order(std::uint64_t n) {
    if (!is_power_of_two(n) || n < 4 || n > (std::uint64_t{1} << kDihedralMaxR)) {
        throw Error(Errc::invalid_parameter, "n must be 2^r with 2 <= r <= 31, got " + std::to_string(n));
    }
}

bool is_totally_split(std::uint64_t p, std::uint64_t n) {
    require_dihedral_order(n);
    if (p % 2 == 0) throw Error(Errc::invalid_parameter, "p must be odd, got " + std::to_string(p));
    if (p < 2) return false;
    const std::uint64_t n2 = n * n;
    // n^2 b^2 <= p - 1 keeps a >= 1; a = 0 would make p a square.
    const std::uint64_t b_max = isqrt(p - 1) / n;
    for (std::uint64_t b = 1; b <= b_max; ++b) {
        if (is_perfect_square(p - n2 * b * b)) return true;
    }
    return false;
}

std::uint64_t pi_D_dihedral(std::uint64_t n, double x, const SieveOptions& opts) {
    require_dihedral_order(n);
    const std::uint64_t hi = checked_bound(x);
    return count_primes_if(0, hi, [n](std::uint64_t p) { return p % 2 == 1 && is_totally_split(p, n); },
                           opts);
}

std::uint64_t default_split_search_ceiling(std::uint64_t n) {
    require_dihedral_order(n);
    const std::uint64_t n2 = n * n;
    return n2 > kSieveLimit / 64 ? kSieveLimit : 64 * n2;
}

std::uint64_t min_split_prime(std::uint64_t n, std::optional<std::uint64_t> ceiling, const SieveOptions& opts) {
    require_dihedral_order(n);
    const std::uint64_t hi = std::min(ceiling.value_or(default_split_search_ceiling(n)), kSieveLimit);
    // Scans from 0 so the bound p > n^2 is observed rather than assumed.
    const auto found =
        find_first_prime(0, hi, [n](std::uint64_t p) { return p % 2 == 1 && is_totally_split(p, n); }, opts);
    if (!found) {
        throw Error(Errc::search_limit,
                    "no split prime below " + std::to_string(hi) + " for n = " + std::to_string(n));
    }
    return *found;
}

std::uint64_t alpha_dihedral(std::uint64_t n) {
    require_dihedral_order(n);
    // Rotation subgroup of order m = n/2, m even: classes {1}, {r^(m/2)},
    // (m-2)/2 pairs {r^k, r^-k}, and two classes of reflections.
    return n / 4 + 3;
}

std::uint64_t conjugacy_count_bruteforce(std::uint64_t n) {
    if (n > kBruteforceMaxOrder) {
        throw Error(Errc::size_limit, "order " + std::to_string(n) + " above 4096");
    }
    if (n < 4 || n % 2 != 0) {
        throw Error(Errc::invalid_parameter, "order must be even and >= 4, got " + std::to_string(n));
    }
    // Element r^k s^e is encoded as k + m*e.
    const std::uint64_t m = n / 2;
    const auto mul = [m](std::uint64_t x, std::uint64_t y) {
        const std::uint64_t kx = x % m, ex = x / m, ky = y % m, ey = y / m;
        // s r^k = r^-k s
        const std::uint64_t k = (kx + (ex != 0 ? m - ky : ky)) % m;
        return k + m * (ex ^ ey);
    };
    const auto inv = [m](std::uint64_t x) {
        const std::uint64_t k = x % m;
        return x / m != 0 ? x : (m - k) % m;
    };

    std::vector<bool> seen(n, false);
    std::uint64_t classes = 0;
    for (std::uint64_t x = 0; x < n; ++x) {
        if (seen[x]) continue;
        ++classes;
        for (std::uint64_t g = 0; g < n; ++g) seen[mul(mul(g, x), inv(g))] = true;
    }
    return classes;
}

}  // namespace cheb
