#include "cheb/bounds.hpp"

#include "cheb/analytic.hpp"
#include "cheb/dihedral.hpp"
#include "cheb/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cheb {

namespace {

double dbl(std::uint64_t v) { return static_cast<double>(v); }

struct LineFit {
    double slope;
    double intercept;
};

// Ordinary least squares of ys against xs; xs must not all coincide.
LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    const double count = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw Error(Errc::degenerate_fit, "all abscissae coincide");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

// Relative slack for the closed-boundary comparison x >= n (log n)^alpha,
// where x was itself computed as that product.
constexpr double kBoundarySlack = 1e-12;

}  // namespace

std::string_view to_string(Family f) {
    return f == Family::dihedral ? "dihedral" : "cyclotomic";
}

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::C: return "C";
    case Variant::Cprime: return "Cprime";
    case Variant::FG: return "FG";
    }
    return "?";
}

std::string_view to_string(Verdict v) {
    return v == Verdict::diverges ? "DIVERGES" : "BOUNDED";
}

void validate(const BoundFamily& f) {
    if (!(f.epsilon > 0) || !std::isfinite(f.epsilon)) {
        throw Error(Errc::invalid_parameter, "epsilon must be a positive real");
    }
    if (!std::isfinite(f.a) || !std::isfinite(f.b)) {
        throw Error(Errc::invalid_parameter, "exponents a, b must be finite");
    }
}

ChebotarevSample make_dihedral_sample(int r, const SieveOptions& opts) {
    const DihedralInstance inst = make_dihedral_instance(r);
    ChebotarevSample s;
    s.family = Family::dihedral;
    s.r = r;
    s.n = inst.n;
    s.x = dbl(inst.n) * dbl(inst.n);
    s.pi_D = pi_D_dihedral(inst.n, s.x, opts);
    s.li_x = li(s.x);
    s.D_size = inst.D_size;
    s.alpha_G = inst.alpha_classes;
    s.M = inst.M;
    return s;
}

ChebotarevSample make_cyclotomic_sample(const CyclotomicInstance& inst, const SieveOptions& opts) {
    ChebotarevSample s;
    s.family = Family::cyclotomic;
    s.r = inst.r;
    s.n = inst.n;
    s.x = inst.T;
    s.pi_D = pi_D_cyclotomic(inst, inst.T, opts);
    s.li_x = li(inst.T);
    s.D_size = inst.D_size();
    s.alpha_G = inst.n;  // abelian
    s.M = inst.M;
    return s;
}

double main_term(const ChebotarevSample& s) {
    if (s.n == 0) throw Error(Errc::invalid_parameter, "sample with |G| = 0");
    return dbl(s.D_size) / dbl(s.n) * s.li_x;
}

double abs_error(const ChebotarevSample& s) {
    return std::fabs(dbl(s.pi_D) - main_term(s));
}

double bound_denominator(const BoundFamily& f, const ChebotarevSample& s) {
    validate(f);
    const double x_part = std::pow(s.x, 0.5 + f.epsilon);
    const double log_m = std::log(dbl(s.M));
    switch (f.variant) {
    case Variant::C:
        return x_part * std::pow(dbl(s.D_size), f.a) * std::pow(dbl(s.n), f.b + f.epsilon) * log_m;
    case Variant::Cprime:
        return x_part * std::pow(dbl(s.D_size), f.a) * std::pow(dbl(s.alpha_G), f.b) *
               std::pow(dbl(s.n), f.epsilon) * log_m;
    case Variant::FG:
        if (s.family != Family::cyclotomic || s.D_size != 1) {
            throw Error(Errc::incompatible_variant, "FG needs a cyclotomic sample with |D| = 1");
        }
        return x_part / std::sqrt(2.0 * dbl(s.n));
    }
    throw Error(Errc::invalid_parameter, "unknown bound variant");
}

double implied_constant(const BoundFamily& f, const ChebotarevSample& s) {
    const double denom = bound_denominator(f, s);
    if (!(denom > 0)) throw Error(Errc::division_by_zero, "bound denominator is not positive");
    return abs_error(s) / denom;
}

bool range_check(const ChebotarevSample& s, double range_alpha) {
    const double nd = dbl(s.n);
    return s.x > nd * std::pow(std::log(nd), range_alpha);
}

ScanReport falsification_scan(const BoundFamily& f, std::span<const ChebotarevSample> samples,
                              const ScanPolicy& policy) {
    validate(f);
    if (samples.size() < 3) {
        throw Error(Errc::too_few_samples, "need at least 3 samples, got " + std::to_string(samples.size()));
    }
    ScanReport report;
    report.family = f;
    report.policy = policy;

    bool all_positive = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const ChebotarevSample& s = samples[i];
        if (i > 0 && s.n < samples[i - 1].n) {
            throw Error(Errc::invalid_parameter, "samples must be ordered by n");
        }
        ScanRow row;
        if (!range_check(s, policy.range_alpha)) {
            const double nd = dbl(s.n);
            const double edge = nd * std::pow(std::log(nd), policy.range_alpha);
            const bool on_closed_boundary = s.x >= edge * (1 - kBoundarySlack);
            if (s.family != Family::cyclotomic || !on_closed_boundary) {
                throw Error(Errc::out_of_range_sample, "sample n = " + std::to_string(s.n) +
                                                           " has x outside the admissible range");
            }
            row.boundary_waived = true;
            report.any_boundary_waived = true;
        }
        row.r = s.r;
        row.n = s.n;
        row.x = s.x;
        row.error = abs_error(s);
        row.denominator = bound_denominator(f, s);
        row.implied_constant = implied_constant(f, s);
        all_positive = all_positive && row.implied_constant > 0;
        report.rows.push_back(row);
    }

    report.ratio = report.rows.back().implied_constant / report.rows.front().implied_constant;
    if (all_positive) {
        std::vector<double> xs, ys;
        for (const auto& row : report.rows) {
            xs.push_back(std::log(dbl(row.n)));
            ys.push_back(std::log(row.implied_constant));
        }
        report.slope = least_squares(xs, ys).slope;
    } else {
        report.slope = std::numeric_limits<double>::quiet_NaN();
    }
    const bool grows = report.slope > policy.slope_threshold && report.ratio > policy.ratio_threshold;
    report.verdict = grows ? Verdict::diverges : Verdict::bounded;
    return report;
}

SerreFit serre_fit(std::span<const SplitPoint> points, std::size_t min_points) {
    if (min_points < 2) throw Error(Errc::invalid_parameter, "a line fit needs at least 2 points");
    if (points.size() < min_points) {
        throw Error(Errc::too_few_samples, "need at least " + std::to_string(min_points) + " points, got " +
                                               std::to_string(points.size()));
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const SplitPoint& pt = points[i];
        if (pt.n < 2) throw Error(Errc::invalid_parameter, "n must be >= 2");
        const double n2 = dbl(pt.n) * dbl(pt.n);
        if (!(dbl(pt.p_min) > n2)) {
            throw Error(Errc::invalid_parameter, "p_min = " + std::to_string(pt.p_min) + " is not above n^2");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (points[j].n == pt.n) throw Error(Errc::degenerate_fit, "repeated n = " + std::to_string(pt.n));
        }
        xs.push_back(std::log(dbl(pt.n)));
        ys.push_back(std::log(dbl(pt.p_min)));
    }
    const LineFit line = least_squares(xs, ys);
    SerreFit fit;
    fit.exponent_e = line.slope;
    fit.constant_c = std::exp(line.intercept);
    fit.points.assign(points.begin(), points.end());
    fit.low_confidence = points.size() < 3;
    return fit;
}

std::pair<double, double> discriminant_bracket(std::uint64_t n, std::uint64_t M) {
    if (n < 2 || M < 2) throw Error(Errc::invalid_parameter, "need n >= 2 and M >= 2");
    const double nd = dbl(n);
    const double log_m = std::log(dbl(M));
    return {nd * log_m / 2.0, (nd - 1.0) * log_m + nd * std::log(nd)};
}

}  // namespace cheb
