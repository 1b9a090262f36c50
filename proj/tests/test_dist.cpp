#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "bonlab/dist.hpp"
#include "bonlab/numerics.hpp"

using namespace bonlab;

TEST_CASE("constructor normalizes within tolerance and rejects beyond it") {
    // Slightly off mass is renormalized; the stored sum is exactly 1.
    FiniteDist d({0, 1}, {0.5 + 4e-10, 0.5});
    StableSum s;
    for (double p : d.probs()) s.add(p);
    CHECK(std::fabs(s.value() - 1.0) <= 1e-15);

    CHECK_THROWS_AS(FiniteDist({0, 1}, {0.5, 0.5 + 1e-8}), validation_error);
    CHECK_THROWS_AS(FiniteDist({0, 1}, {-0.1, 1.1}), validation_error);
    CHECK_THROWS_AS(FiniteDist({1, 0}, {0.5, 0.5}), validation_error);
    CHECK_THROWS_AS(FiniteDist({0, 0}, {0.5, 0.5}), validation_error);
    CHECK_THROWS_AS(FiniteDist({}, {}), validation_error);
}

TEST_CASE("normalization survives large grids") {
    FiniteDist d = FiniteDist::uniform_grid(4096);
    StableSum s;
    for (double p : d.probs()) s.add(p);
    CHECK(std::fabs(s.value() - 1.0) <= 1e-12);
}

TEST_CASE("point mass sampling is deterministic in value") {
    FiniteDist d = FiniteDist::point_mass(7);
    Rng rng(3, 0);
    for (OutcomeId y : sample(d, rng, 5)) CHECK(y == 7);
}

TEST_CASE("law of large numbers on a fair coin") {
    FiniteDist d({0, 1}, {0.5, 0.5});
    Rng rng(42, 0);
    std::size_t zeros = 0;
    const std::size_t n = 1000000;
    DistSampler sampler(d);
    for (std::size_t i = 0; i < n; ++i) zeros += sampler.draw(rng) == 0;
    CHECK(std::fabs(zeros / static_cast<double>(n) - 0.5) < 0.002);
}

TEST_CASE("chi-square goodness of fit on a three-point law") {
    FiniteDist d({0, 1, 2}, {0.5, 0.3, 0.2});
    Rng rng(2024, 0);
    const std::size_t n = 1000000;
    std::vector<std::size_t> counts(3, 0);
    DistSampler sampler(d);
    for (std::size_t i = 0; i < n; ++i) counts[sampler.draw_index(rng)]++;
    double stat = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double expect = d.probs()[i] * static_cast<double>(n);
        stat += (counts[i] - expect) * (counts[i] - expect) / expect;
    }
    // Threshold fixed ahead of time: reject only below p = 1e-6.
    CHECK(chi_square_sf(stat, 2) > 1e-6);
}

TEST_CASE("zero-mass outcomes are never sampled") {
    FiniteDist d({0, 1, 2}, {0.5, 0.0, 0.5});
    Rng rng(5, 0);
    for (OutcomeId y : sample(d, rng, 10000)) CHECK(y != 1);
}

TEST_CASE("conditional restriction") {
    FiniteDist d({0, 1, 2}, {0.8, 0.19, 0.01});

    SUBCASE("full support is a no-op") {
        FiniteDist c = conditional(d, {0, 1, 2});
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(c.probs()[i] == doctest::Approx(d.probs()[i]).epsilon(1e-15));
        }
    }
    SUBCASE("two-outcome restriction renormalizes proportionally") {
        FiniteDist c = conditional(d, {1, 2});
        CHECK(c.size() == 2);
        CHECK(c.prob_of(1) == doctest::Approx(0.95).epsilon(1e-14));
        CHECK(c.prob_of(2) == doctest::Approx(0.05).epsilon(1e-14));
    }
    SUBCASE("single outcome gives a point mass") {
        FiniteDist c = conditional(FiniteDist({0, 1}, {0.5, 0.5}), {0});
        CHECK(c.size() == 1);
        CHECK(c.prob_of(0) == 1.0);
    }
    SUBCASE("zero-mass keep set is an error") {
        CHECK_THROWS_AS(conditional(d, std::set<OutcomeId>{9}), validation_error);
        CHECK_THROWS_AS(conditional(FiniteDist({0, 1}, {1.0, 0.0}), std::set<OutcomeId>{1}),
                        validation_error);
    }
}

TEST_CASE("density ratio") {
    FiniteDist base({0, 1, 2}, {0.5, 0.3, 0.2});

    SUBCASE("identity has unit ratios") {
        DensityRatio dr = density_ratio(base, base);
        for (double r : dr.ratios) CHECK(r == 1.0);
    }
    SUBCASE("ratios integrate to one under the base") {
        FiniteDist target({0, 1, 2}, {0.1, 0.6, 0.3});
        DensityRatio dr = density_ratio(target, base);
        StableSum s;
        for (std::size_t i = 0; i < base.size(); ++i) s.add(base.probs()[i] * dr.ratios[i]);
        CHECK(std::fabs(s.value() - 1.0) <= 1e-12);
    }
    SUBCASE("reweighting the base recovers the target") {
        FiniteDist target({0, 1, 2}, {0.25, 0.25, 0.5});
        DensityRatio dr = density_ratio(target, base);
        for (std::size_t i = 0; i < base.size(); ++i) {
            const double back = base.probs()[i] * dr.ratios[i];
            CHECK(std::fabs(back - target.probs()[i]) <= 1e-15 * std::max(1.0, target.probs()[i]));
        }
    }
    SUBCASE("two-level ratio comes out exactly") {
        // Up-weighted set of mass 0.05 at ratio 8, the rest at the filling level.
        const double m_star = 8.0, eps = 0.05;
        const double c = (1.0 - m_star * eps) / (1.0 - eps);
        FiniteDist target({0, 1}, {m_star * eps, c * (1.0 - eps)});
        FiniteDist b2({0, 1}, {eps, 1.0 - eps});
        DensityRatio dr = density_ratio(target, b2);
        CHECK(dr.ratios[0] == doctest::Approx(m_star).epsilon(1e-14));
        CHECK(dr.ratios[1] == doctest::Approx(c).epsilon(1e-14));
    }
    SUBCASE("domination failure names the outcome") {
        FiniteDist target({0, 1, 3}, {0.5, 0.3, 0.2});
        try {
            density_ratio(target, base);
            FAIL("expected domination_error");
        } catch (const domination_error& e) {
            CHECK(std::string(e.what()).find("3") != std::string::npos);
        }
    }
}

TEST_CASE("sample requires at least one draw") {
    FiniteDist d({0}, {1.0});
    Rng rng(1, 0);
    CHECK_THROWS_AS(sample(d, rng, 0), validation_error);
}
