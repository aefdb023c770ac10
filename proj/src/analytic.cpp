#include "cheb/analytic.hpp"

#include "cheb/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace cheb {

namespace {

// Principal-value li(x) for x > 1 via Ramanujan's series
//   li(x) = gamma + ln u + sqrt(x) * sum_{n>=1} (-1)^(n-1) u^n / (n! 2^(n-1))
//                                   * sum_{k=0}^{floor((n-1)/2)} 1/(2k+1),
// with u = ln x. The alternating terms peak near sqrt(x), so cancellation
// costs about log10(u) digits.
long double li_principal(long double x) {
    const long double u = std::log(x);
    long double term = u;  // u^n / (n! 2^(n-1)) at n = 1
    long double inner = 1;
    long double sum = term;
    for (int n = 2; n < 1000; ++n) {
        term *= u / (2.0L * n);
        if (n % 2 == 1) inner += 1.0L / n;
        const long double contrib = (n % 2 == 0 ? -term : term) * inner;
        sum += contrib;
        if (n > u && std::fabs(contrib) <= 1e-21L * std::fabs(sum)) break;
    }
    return std::numbers::egamma_v<long double> + std::log(u) + std::sqrt(x) * sum;
}

// 20-point Gauss-Legendre rule on [-1, 1], nodes from Newton iteration on P_20.
struct GaussLegendre20 {
    std::array<long double, 20> nodes{};
    std::array<long double, 20> weights{};

    GaussLegendre20() {
        constexpr int n = 20;
        for (int i = 0; i < n; ++i) {
            long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
            long double dp = 0;
            for (int iter = 0; iter < 100; ++iter) {
                long double p0 = 1, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1);
                const long double dz = p1 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-19L) break;
            }
            nodes[i] = z;
            weights[i] = 2 / ((1 - z * z) * dp * dp);
        }
    }
};

// Near x = 2 the series route loses relative precision to the subtraction of
// li(2); there 1/log t is analytic well beyond [2, 4] and one Gauss-Legendre
// panel is exact to long double precision.
long double li_near_two(long double x) {
    static const GaussLegendre20 rule;
    const long double mid = (x + 2) / 2;
    const long double half = (x - 2) / 2;
    long double acc = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] / std::log(mid + half * rule.nodes[i]);
    }
    return acc * half;
}

}  // namespace

long double li_offset() {
    static const long double offset = li_principal(2.0L);
    return offset;
}

double li(double x) {
    if (std::isnan(x) || x < 2) {
        throw Error(Errc::domain_error, "Li(x) requires x >= 2, got " + std::to_string(x));
    }
    if (x == 2) return 0.0;
    if (x <= 4) return static_cast<double>(li_near_two(x));
    return static_cast<double>(li_principal(x) - li_offset());
}

LiValue evaluate_li(double x) { return {x, li(x)}; }

double li_ratio_to_asymptote(std::uint64_t n) {
    if (n < 2) throw Error(Errc::domain_error, "n must be >= 2");
    const double nd = static_cast<double>(n);
    const double square = nd * nd;
    return li(square) * 2.0 * std::log(nd) / square;
}

}  // namespace cheb
