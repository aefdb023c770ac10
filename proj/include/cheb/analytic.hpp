#pragma once

#include <cstdint>

namespace cheb {

// Offset logarithmic integral: the integral of dt / log t from 2 to x, so
// Li(2) = 0. This differs from the principal-value li(x) (integral from 0)
// by the constant li(2) = 1.04516378011749...; log is the natural logarithm.
//
// Relative error <= 1e-10 for all x >= 2. Throws Error(domain_error) for
// x < 2 or NaN.
double li(double x);

// Principal-value li(2), the offset between the two normalizations.
long double li_offset();

struct LiValue {
    double x;
    double value;
};

LiValue evaluate_li(double x);

// Li(n^2) * 2 log n / n^2, which tends to 1 as n grows.
double li_ratio_to_asymptote(std::uint64_t n);

}  // namespace cheb
