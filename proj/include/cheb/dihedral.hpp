#pragma once

// Ring class field of the order Z[n i], n = 2^r, with D = {1}.
//
// Galois group: dihedral of order n. Only 2 ramifies, so M = 2. An odd prime
// splits completely iff p = a^2 + n^2 b^2 for integers a, b; in particular no
// prime <= n^2 splits. (The conductor of Z[n i] is n and its class number is
// n/2; these only enter the derivation of the splitting criterion and are not
// computed here.)

#include "cheb/sieve.hpp"

#include <cstdint>
#include <optional>

namespace cheb {

inline constexpr int kDihedralMaxR = 31;  // keeps n^2 below 2^63

struct DihedralInstance {
    int r = 2;
    std::uint64_t n = 4;              // |G|
    std::uint64_t M = 2;              // product of ramified primes
    std::uint64_t alpha_classes = 4;  // number of conjugacy classes
    std::uint64_t D_size = 1;
};

// Throws Error(invalid_parameter) unless 2 <= r <= kDihedralMaxR.
DihedralInstance make_dihedral_instance(int r);

// Throws Error(invalid_parameter) unless n = 2^r with 2 <= r <= kDihedralMaxR.
void require_dihedral_order(std::uint64_t n);

// Whether the odd prime p is represented by a^2 + n^2 b^2. Primality of p is
// the caller's responsibility; evenness is rejected.
bool is_totally_split(std::uint64_t p, std::uint64_t n);

// Number of odd primes p < x that split completely (2 is ramified).
std::uint64_t pi_D_dihedral(std::uint64_t n, double x, const SieveOptions& opts = {});

// Default search ceiling for min_split_prime: 64 n^2, clamped to the sieve limit.
std::uint64_t default_split_search_ceiling(std::uint64_t n);

// Least completely split prime, searched below `ceiling` (default
// 64 n^2). Throws Error(search_limit) if there is none.
std::uint64_t min_split_prime(std::uint64_t n, std::optional<std::uint64_t> ceiling = std::nullopt,
                              const SieveOptions& opts = {});

// Number of conjugacy classes of the dihedral group of order n = 2^r: n/4 + 3.
std::uint64_t alpha_dihedral(std::uint64_t n);

inline constexpr std::uint64_t kBruteforceMaxOrder = 4096;

// Conjugacy classes of the dihedral group of order n (n even, 4 <= n <= 4096)
// counted by explicit orbit enumeration.
std::uint64_t conjugacy_count_bruteforce(std::uint64_t n);

}  // namespace cheb
