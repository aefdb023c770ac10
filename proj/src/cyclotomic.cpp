#include "cheb/cyclotomic.hpp"

#include "cheb/error.hpp"
#include "cheb/int_math.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace cheb {

namespace {

int validated_exponent(std::uint64_t n) {
    if (!is_power_of_two(n) || n < 4 || n > (std::uint64_t{1} << kCyclotomicMaxR)) {
        throw Error(Errc::invalid_parameter, "n must be 2^r with 2 <= r <= 24, got " + std::to_string(n));
    }
    return std::countr_zero(n);
}

void validate_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(Errc::invalid_parameter, "alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

}  // namespace

ResidueSet::ResidueSet(std::uint64_t q) : q_(q), member_(static_cast<std::size_t>(q / 2), false) {}

ResidueSet ResidueSet::all_odd(std::uint64_t q) {
    ResidueSet set(q);
    set.residues_.reserve(static_cast<std::size_t>(q / 2));
    for (std::uint64_t d = 1; d < q; d += 2) {
        set.residues_.push_back(d);
        set.member_[d / 2] = true;
    }
    return set;
}

void ResidueSet::remove(std::span<const std::uint64_t> residues) {
    bool changed = false;
    for (const auto d : residues) {
        if (contains(d)) {
            member_[d / 2] = false;
            changed = true;
        }
    }
    if (!changed) return;
    std::erase_if(residues_, [this](std::uint64_t d) { return !member_[d / 2]; });
}

std::uint64_t frobenius_class(std::uint64_t p, std::uint64_t q) {
    if (!is_power_of_two(q) || q < 8) {
        throw Error(Errc::invalid_parameter, "q must be 2^(r+1) with r >= 2, got " + std::to_string(q));
    }
    if (p % 2 == 0) throw Error(Errc::invalid_parameter, "p must be odd (2 is ramified)");
    return p % q;
}

double cyclotomic_threshold(std::uint64_t n, double alpha) {
    const double nd = static_cast<double>(n);
    return nd * std::pow(std::log(nd), alpha);
}

CyclotomicInstance build_D(std::uint64_t n, double alpha, const SieveOptions& opts) {
    validated_exponent(n);
    validate_alpha(alpha);
    return build_cyclotomic_instance(n, alpha, cyclotomic_threshold(n, alpha), opts);
}

CyclotomicInstance build_cyclotomic_instance(std::uint64_t n, double alpha, double threshold,
                                             const SieveOptions& opts) {
    CyclotomicInstance inst;
    inst.r = validated_exponent(n);
    validate_alpha(alpha);
    inst.n = n;
    inst.q = 2 * n;
    inst.alpha = alpha;
    inst.T = threshold;

    // Strict p < T against the real threshold.
    std::vector<std::uint64_t> hit;
    const std::uint64_t q = inst.q;
    iterate_primes(0, checked_bound(threshold), [&](std::uint64_t p) {
        if (p % 2 == 1) hit.push_back(p % q);
    }, opts);
    inst.D = ResidueSet::all_odd(q);
    inst.D.remove(hit);
    return inst;
}

std::uint64_t pi_D_cyclotomic(const CyclotomicInstance& inst, double x, const SieveOptions& opts) {
    const std::uint64_t q = inst.q;
    const ResidueSet& D = inst.D;
    return count_primes_if(0, checked_bound(x), [q, &D](std::uint64_t p) { return p % 2 == 1 && D.contains(p % q); },
                           opts);
}

double density_ratio(const CyclotomicInstance& inst) {
    return static_cast<double>(inst.D_size()) / static_cast<double>(inst.n);
}

}  // namespace cheb
