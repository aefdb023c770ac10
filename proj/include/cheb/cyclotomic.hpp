#pragma once

// Cyclotomic family L = Q(mu_{2n}), n = 2^r, G = (Z/2nZ)^* of order n, M = 2.
// Frobenius of an odd prime p is p mod 2n. D is the set of odd residues d mod
// 2n whose progression d + 2nZ contains no prime below T = n (log n)^alpha,
// so pi_D(T) = 0 by construction.

#include "cheb/sieve.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cheb {

// q = 2^(r+1) <= 2^25.
inline constexpr int kCyclotomicMaxR = 24;

// Subset of the odd residues mod q, as a sorted list plus a membership
// bitmap indexed by (d - 1) / 2.
class ResidueSet {
public:
    ResidueSet() = default;
    explicit ResidueSet(std::uint64_t q);

    std::uint64_t modulus() const noexcept { return q_; }
    std::uint64_t size() const noexcept { return residues_.size(); }
    std::span<const std::uint64_t> residues() const noexcept { return residues_; }

    // True iff residue (already reduced mod q) is a member.
    bool contains(std::uint64_t residue) const noexcept {
        return residue % 2 == 1 && residue < q_ && member_[residue / 2];
    }

    static ResidueSet all_odd(std::uint64_t q);
    // Removes every listed residue present in the set.
    void remove(std::span<const std::uint64_t> residues);

private:
    std::uint64_t q_ = 0;
    std::vector<std::uint64_t> residues_;
    std::vector<bool> member_;
};

struct CyclotomicInstance {
    int r = 2;
    std::uint64_t n = 4;  // |G| = phi(q)
    std::uint64_t q = 8;
    double alpha = 0.5;
    double T = 0.0;
    std::uint64_t M = 2;
    ResidueSet D;

    std::uint64_t D_size() const noexcept { return D.size(); }
    // Odd residues outside D.
    std::uint64_t complement_size() const noexcept { return n - D.size(); }
};

// p mod q for an odd prime p; q must be 2^(r+1) with r >= 2.
std::uint64_t frobenius_class(std::uint64_t p, std::uint64_t q);

// n (log n)^alpha with the natural logarithm.
double cyclotomic_threshold(std::uint64_t n, double alpha);

// D for modulus 2n and the given alpha at threshold T = n (log n)^alpha.
CyclotomicInstance build_D(std::uint64_t n, double alpha, const SieveOptions& opts = {});

// As build_D, but with an explicit threshold in place of n (log n)^alpha.
CyclotomicInstance build_cyclotomic_instance(std::uint64_t n, double alpha, double threshold,
                                             const SieveOptions& opts = {});

// #{p odd prime < x : p mod q in D}.
std::uint64_t pi_D_cyclotomic(const CyclotomicInstance& inst, double x, const SieveOptions& opts = {});

// |D| / n.
double density_ratio(const CyclotomicInstance& inst);

}  // namespace cheb
