#include "cheb/analytic.hpp"
#include "cheb/error.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <utility>

using namespace cheb;

namespace {

// Integral of dt/log t from 2 to x at 40 digits (mpmath quad and li(x) - li(2)
// agree to all printed digits).
constexpr std::pair<double, double> kLiReference[] = {
    {10.0, 5.120435724669805152678393},
    {16.0, 7.474552683593566293639224},
    {100.0, 29.08097780396213714105715},
    {256.0, 59.46790155779983855779674},
    {1e3, 176.564494210034733902796},
    {1e4, 1245.092052119270966907927},
    {1e6, 78626.50399568206442707807},
    {1e8, 5762208.330284251350076289},
};

// li(n^2) * 2 log n / n^2 for n = 2^r, r = 8..20, same oracle.
constexpr double kRatioReference[] = {
    1.114000829539613337,  1.0979201921842657505, 1.0859045269185904641, 1.0765777701277065213,
    1.0691150766967829651, 1.0629992294497573947, 1.0578904005577736011, 1.0535557396419798519,
    1.04982992683578306,   1.0465920722617189055, 1.0437515753462378185, 1.0412391137338482587,
    1.0390006971520947798,
};

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("li at the lower endpoint and domain") {
    CHECK(li(2.0) == 0.0);
    CHECK_THROWS_AS(li(1.999), Error);
    CHECK_THROWS_AS(li(0.0), Error);
    CHECK_THROWS_AS(li(std::nan("")), Error);
    try {
        li(1.0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::domain_error);
    }
    CHECK(evaluate_li(10.0).value == li(10.0));
    CHECK(std::fabs(static_cast<double>(li_offset()) - 1.0451637801174927848) < 1e-15);
}

TEST_CASE("li matches the high-precision reference") {
    for (const auto& [x, want] : kLiReference) {
        CHECK_MESSAGE(rel(li(x), want) <= 1e-10, "x = " << x);
    }
}

TEST_CASE("li agrees with adaptive Simpson quadrature") {
    for (double x : {2.0001, 2.5, 3.0, 3.999, 4.0, 4.0001, 5.0, 10.0, 100.0, 1e4, 1e6, 1e8, 1e12}) {
        const double oracle_value = oracle::li_simpson(x);
        CHECK_MESSAGE(rel(li(x), oracle_value) <= 1e-9, "x = " << x);
    }
}

TEST_CASE("li derivative is 1/log x") {
    for (double x : {10.0, 1e3, 1e6}) {
        const double h = x * 1e-6;
        const double slope = (li(x + h) - li(x)) / h;
        CHECK(rel(slope, 1.0 / std::log(x)) <= 1e-6);
    }
}

TEST_CASE("li is increasing, nonnegative and below x") {
    double prev = li(2.0);
    for (double x = 2.01; x < 1e7; x *= 1.07) {
        const double v = li(x);
        REQUIRE(v > prev);
        REQUIRE(v >= 0);
        REQUIRE(v < x);
        prev = v;
    }
}

TEST_CASE("li_ratio_to_asymptote") {
    CHECK_THROWS_AS(li_ratio_to_asymptote(1), Error);
    const double small = li_ratio_to_asymptote(4);
    CHECK(small > 0);
    CHECK(small == doctest::Approx(li(16.0) * 2 * std::log(4.0) / 16.0).epsilon(1e-15));

    double prev = 0;
    for (int r = 8; r <= 20; ++r) {
        const double v = li_ratio_to_asymptote(std::uint64_t{1} << r);
        CHECK_MESSAGE(rel(v, kRatioReference[r - 8]) <= 1e-9, "r = " << r);
        CHECK(v > 1.0);
        if (r > 8) CHECK(v < prev);
        prev = v;
    }
    const double at20 = li_ratio_to_asymptote(std::uint64_t{1} << 20);
    CHECK(at20 > 0.9);
    CHECK(at20 < 1.1);
}

}
