#pragma once

// Error-term templates for pi_D(x) - (|D|/|G|) Li(x) and the scans that test
// them against the dihedral and cyclotomic families.
//
// Templates (eps > 0, log natural):
//   C       x^(1/2+eps) |D|^a |G|^(b+eps)      log M
//   Cprime  x^(1/2+eps) |D|^a alpha(G)^b |G|^eps log M
//   FG      x^(1/2+eps) q^(-1/2)               (cyclotomic, |D| = 1, q = 2n)
//
// The implied constant of a sample is |error| / template. A template is
// empirically falsified on a family when the implied constant grows with n.

#include "cheb/cyclotomic.hpp"
#include "cheb/sieve.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace cheb {

enum class Family { dihedral, cyclotomic };
enum class Variant { C, Cprime, FG };
enum class Verdict { diverges, bounded };

std::string_view to_string(Family f);
std::string_view to_string(Variant v);
std::string_view to_string(Verdict v);

struct ChebotarevSample {
    Family family = Family::dihedral;
    int r = 0;
    std::uint64_t n = 0;  // |G|
    double x = 0.0;
    std::uint64_t pi_D = 0;
    double li_x = 0.0;
    std::uint64_t D_size = 0;
    std::uint64_t alpha_G = 0;
    std::uint64_t M = 2;
};

struct BoundFamily {
    Variant variant = Variant::C;
    double a = 0.5;
    double b = 0.0;
    double epsilon = 0.01;
};

// Throws Error(invalid_parameter) unless epsilon > 0 and a, b are finite.
void validate(const BoundFamily& f);

// Sample at x = n^2 for the dihedral family member 2^r.
ChebotarevSample make_dihedral_sample(int r, const SieveOptions& opts = {});
// Sample at x = T for a built cyclotomic instance.
ChebotarevSample make_cyclotomic_sample(const CyclotomicInstance& inst, const SieveOptions& opts = {});

// (|D| / |G|) Li(x).
double main_term(const ChebotarevSample& s);
// |pi_D - main_term|.
double abs_error(const ChebotarevSample& s);
double bound_denominator(const BoundFamily& f, const ChebotarevSample& s);
// abs_error / bound_denominator; Error(division_by_zero) if the denominator is not positive.
double implied_constant(const BoundFamily& f, const ChebotarevSample& s);

// x > n (log n)^range_alpha.
bool range_check(const ChebotarevSample& s, double range_alpha);

struct ScanPolicy {
    double range_alpha = 0.5;
    // Verdict policy of this tool; not part of any of the bound statements.
    double slope_threshold = 0.05;
    double ratio_threshold = 2.0;
};

struct ScanRow {
    int r = 0;
    std::uint64_t n = 0;
    double x = 0.0;
    double error = 0.0;
    double denominator = 0.0;
    double implied_constant = 0.0;
    // Cyclotomic sample taken on the closed boundary x = n (log n)^range_alpha.
    bool boundary_waived = false;
};

struct ScanReport {
    BoundFamily family;
    ScanPolicy policy;
    std::vector<ScanRow> rows;
    // Least-squares slope of log(implied constant) against log(n); NaN when a
    // constant is zero.
    double slope = 0.0;
    double ratio = 0.0;  // last / first implied constant
    Verdict verdict = Verdict::bounded;
    bool any_boundary_waived = false;
};

// Samples must be ordered by nondecreasing n and number at least 3.
// Dihedral samples must pass range_check; cyclotomic samples may sit on the
// closed boundary (flagged in the rows).
ScanReport falsification_scan(const BoundFamily& f, std::span<const ChebotarevSample> samples,
                              const ScanPolicy& policy = {});

struct SplitPoint {
    std::uint64_t n = 0;
    std::uint64_t p_min = 0;
};

struct SerreFit {
    double exponent_e = 0.0;
    double constant_c = 0.0;
    std::vector<SplitPoint> points;
    // Fewer than three points: the fit is an exact interpolation.
    bool low_confidence = false;
};

// Least squares of log p_min = e log n + log c. Requires every p_min > n^2,
// distinct n, and at least min_points (>= 2) points.
SerreFit serre_fit(std::span<const SplitPoint> points, std::size_t min_points = 3);

// Bracket (|G| log M / 2, (|G| - 1) log M + |G| log |G|) for log d_K.
std::pair<double, double> discriminant_bracket(std::uint64_t n, std::uint64_t M);

}  // namespace cheb
