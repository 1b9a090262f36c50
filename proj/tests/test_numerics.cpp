#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "bonlab/numerics.hpp"

using namespace bonlab;

namespace {

// Independent oracle for integer-parameter incomplete beta:
// I_x(j, n-j+1) = P(Bin(n, x) >= j), summed directly from the pmf.
double binomial_tail(std::int64_t n, std::int64_t j, double x) {
    long double pmf = std::pow(1.0L - static_cast<long double>(x), static_cast<long double>(n));
    long double cdf_below = 0.0L; // P(X < j)
    for (std::int64_t i = 0; i < j; ++i) {
        cdf_below += pmf;
        pmf *= static_cast<long double>(n - i) / static_cast<long double>(i + 1);
        pmf *= static_cast<long double>(x) / (1.0L - static_cast<long double>(x));
    }
    return static_cast<double>(1.0L - cdf_below);
}

} // namespace

TEST_CASE("regularized incomplete beta matches the binomial-tail oracle") {
    const std::vector<double> xs{0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99};
    for (std::int64_t n : {4, 16, 64, 256}) {
        for (std::int64_t j : {std::int64_t{1}, n / 4 + 1, n / 2, n}) {
            for (double x : xs) {
                const double want = binomial_tail(n, j, x);
                const double got = reg_inc_beta(x, static_cast<double>(j),
                                                static_cast<double>(n - j + 1));
                CHECK(std::fabs(got - want) <= 1e-13);
            }
        }
    }
}

TEST_CASE("incomplete beta basics") {
    CHECK(reg_inc_beta(0.0, 3, 2) == 0.0);
    CHECK(reg_inc_beta(1.0, 3, 2) == 1.0);
    CHECK(reg_inc_beta(0.3, 1, 1) == doctest::Approx(0.3).epsilon(1e-14));
    // Symmetry identity.
    CHECK(reg_inc_beta(0.3, 5, 2) ==
          doctest::Approx(1.0 - reg_inc_beta(0.7, 2, 5)).epsilon(1e-13));
    CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), validation_error);
}

TEST_CASE("degraded tolerance degrades the answer") {
    // The continued fraction stopped at 1e-3 must be visibly off somewhere;
    // the negative-control acceptance test relies on this knob.
    double worst = 0.0;
    for (double x : {0.2, 0.35, 0.5, 0.65}) {
        const double exact = reg_inc_beta(x, 40, 25);
        const double sloppy = reg_inc_beta(x, 40, 25, 1e-3, 400);
        worst = std::max(worst, std::fabs(exact - sloppy));
    }
    CHECK(worst > 1e-9);
}

TEST_CASE("regularized gamma Q spot values") {
    // Exponential special case: Q(1, x) = exp(-x).
    for (double x : {0.1, 1.0, 5.0}) {
        CHECK(reg_gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
    }
    // Chi-square with 2 dof: sf(x) = exp(-x/2).
    CHECK(chi_square_sf(4.0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    // Erlang tail: Q(2, x) = (1 + x) exp(-x).
    CHECK(reg_gamma_q(2.0, 3.0) == doctest::Approx(4.0 * std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("hoeffding half-width arithmetic") {
    // 10^6 trials at 95% stay under 0.002.
    CHECK(hoeffding_half_width(1000000, 0.95) < 0.002);
    CHECK(hoeffding_half_width(1000000, 0.99) ==
          doctest::Approx(std::sqrt(std::log(200.0) / 2e6)).epsilon(1e-12));
    CHECK_THROWS_AS(hoeffding_half_width(0, 0.95), validation_error);
    CHECK_THROWS_AS(hoeffding_half_width(10, 1.0), validation_error);
}

TEST_CASE("bisection solves a monotone kink function") {
    auto f = [](double x) { return (x < 1.0 ? 1.0 - x : 0.0) + (x < 3.0 ? 3.0 - x : 0.0) - 1.7; };
    const double root = bisect_nonincreasing(f, -10.0, 10.0);
    CHECK(std::fabs(f(root)) <= 1e-12);
    CHECK_THROWS_AS(bisect_nonincreasing([](double) { return 1.0; }, 0.0, 1.0), numeric_error);
}

TEST_CASE("stable sum compensates") {
    StableSum s;
    for (int i = 0; i < 4096; ++i) s.add(1.0 / 4096.0);
    CHECK(std::fabs(s.value() - 1.0) < 1e-14);
}
