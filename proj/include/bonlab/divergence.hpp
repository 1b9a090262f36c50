#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bonlab/dist.hpp"
#include "bonlab/errors.hpp"
#include "bonlab/numerics.hpp"

namespace bonlab {

namespace detail {

// Aligns target mass to the base outcome list and checks domination.
inline std::vector<double> aligned_target_mass(const FiniteDist& target, const FiniteDist& base) {
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (target.probs()[i] > 0.0 && base.prob_of(target.outcomes()[i]) <= 0.0) {
            throw domination_error("divergence: target has mass on outcome " +
                                   std::to_string(target.outcomes()[i]) +
                                   " where the base has none");
        }
    }
    std::vector<double> t(base.size(), 0.0);
    for (std::size_t i = 0; i < base.size(); ++i) t[i] = target.prob_of(base.outcomes()[i]);
    return t;
}

} // namespace detail

// Expected excess of the density ratio above the cap m, under the base:
// sum of (target_i - m * base_i)_+. Nonincreasing and convex in m; equals
// 1 exactly at m = 0 and 0 whenever the ratio is capped by m.
inline double excess_mass(const FiniteDist& target, const FiniteDist& base, double m) {
    if (!(m >= 0.0)) throw validation_error("excess_mass: cap must be >= 0");
    const std::vector<double> t = detail::aligned_target_mass(target, base);
    if (m == 0.0) return 1.0; // the whole target mass; exact by normalization
    StableSum s;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double e = t[i] - m * base.probs()[i];
        if (e > 0.0) s.add(e);
    }
    return s.value();
}

// Probability, under the target, that the density ratio is >= m.
inline double coverage(const FiniteDist& target, const FiniteDist& base, double m) {
    if (!(m >= 0.0)) throw validation_error("coverage: cap must be >= 0");
    const std::vector<double> t = detail::aligned_target_mass(target, base);
    StableSum s;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (t[i] > 0.0 && t[i] >= m * base.probs()[i]) s.add(t[i]);
    }
    return s.value();
}

enum class FDivKind { ChiSquare, Kl, Tv, Custom };

// A convex generator f with f(1) = 0, f'(1) = 0. Custom generators supply
// the value callable and pass a fixed 64-point midpoint-convexity screen;
// deeper convexity validation is the caller's burden.
struct FDivSpec {
    FDivKind kind = FDivKind::ChiSquare;
    std::function<double(double)> generator; // set for Custom
    std::string name() const {
        switch (kind) {
            case FDivKind::ChiSquare: return "chi_square";
            case FDivKind::Kl: return "kl";
            case FDivKind::Tv: return "tv";
            case FDivKind::Custom: return "custom";
        }
        return "?";
    }

    static FDivSpec chi_square() { return FDivSpec{FDivKind::ChiSquare, {}}; }
    static FDivSpec kl() { return FDivSpec{FDivKind::Kl, {}}; }
    static FDivSpec tv() { return FDivSpec{FDivKind::Tv, {}}; }

    static FDivSpec custom(std::function<double(double)> f) {
        FDivSpec spec{FDivKind::Custom, std::move(f)};
        if (std::fabs(spec.f(1.0)) > 1e-12) {
            throw validation_error("FDivSpec: generator must vanish at 1");
        }
        // Midpoint-convexity screen on a fixed grid.
        for (int i = 0; i < 64; ++i) {
            const double a = 0.05 + 0.15 * i;
            const double b = a + 0.35;
            const double mid = 0.5 * (a + b);
            if (spec.f(mid) > 0.5 * (spec.f(a) + spec.f(b)) + 1e-10) {
                throw validation_error("FDivSpec: generator failed the midpoint-convexity screen");
            }
        }
        return spec;
    }

    // Generator value at t >= 0. KL uses the natural log with t*log(t) -> 0
    // at t = 0.
    double f(double t) const {
        switch (kind) {
            case FDivKind::ChiSquare: return (t - 1.0) * (t - 1.0);
            case FDivKind::Kl: return (t == 0.0) ? 1.0 : t * std::log(t) - t + 1.0;
            case FDivKind::Tv: return 0.5 * std::fabs(t - 1.0);
            case FDivKind::Custom: return generator(t);
        }
        return 0.0;
    }
};

// E_base[f(d target / d base)]. The KL kind additionally requires the
// target to cover the whole base support.
inline double f_divergence(const FiniteDist& target, const FiniteDist& base, const FDivSpec& spec) {
    const std::vector<double> t = detail::aligned_target_mass(target, base);
    if (spec.kind == FDivKind::Kl) {
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (base.probs()[i] > 0.0 && t[i] <= 0.0) {
                throw domination_error("f_divergence(kl): target support must equal base support; "
                                       "outcome " + std::to_string(base.outcomes()[i]) +
                                       " has zero target mass");
            }
        }
    }
    StableSum s;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double b = base.probs()[i];
        if (b > 0.0) s.add(b * spec.f(t[i] / b));
    }
    return std::max(0.0, s.value());
}

struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// Checks excess_mass <= m * D_f / f(m) for a convex generator with f(m) > 0.
inline BoundReport excess_mass_fdiv_bound_check(const FiniteDist& target, const FiniteDist& base,
                                                const FDivSpec& spec, double m) {
    if (!(m > 1.0)) throw validation_error("excess_mass_fdiv_bound_check: requires m > 1");
    const double fm = spec.f(m);
    if (!(fm > 0.0)) {
        throw numeric_error("excess_mass_fdiv_bound_check: f(m) = 0, bound undefined");
    }
    BoundReport r;
    r.name = "excess_mass_vs_" + spec.name();
    r.lhs = excess_mass(target, base, m);
    r.rhs = m * f_divergence(target, base, spec) / fm;
    r.holds = r.lhs <= r.rhs + 1e-12;
    return r;
}

// The closest ratio-capped approximation of the target: the ratio is
// clipped at m and the clipped-off mass is reinstated proportionally to
// the pointwise slack (m - ratio)_+. Total variation to the target equals
// the excess mass at m exactly, and no capped policy can do better.
struct ProjectionResult {
    FiniteDist projected;
    double tv_to_target = 0.0;
    double cap = 0.0;
};

inline ProjectionResult tv_projection(const FiniteDist& target, const FiniteDist& base, double m) {
    if (!(m >= 1.0)) {
        throw validation_error("tv_projection: caps below 1 are infeasible (no sub-uniform "
                               "density integrates to 1)");
    }
    const std::vector<double> t = detail::aligned_target_mass(target, base);
    StableSum excess_s;
    StableSum slack_s;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double cap_mass = m * base.probs()[i];
        if (t[i] > cap_mass) excess_s.add(t[i] - cap_mass);
        else slack_s.add(cap_mass - t[i]);
    }
    const double excess = excess_s.value();
    if (excess <= 0.0) {
        // Already capped.
        FiniteDist proj(base.outcomes(), t);
        return ProjectionResult{std::move(proj), 0.0, m};
    }
    const double slack = slack_s.value();
    std::vector<double> proj(base.size(), 0.0);
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double cap_mass = m * base.probs()[i];
        if (t[i] > cap_mass) {
            proj[i] = cap_mass;
        } else {
            proj[i] = t[i] + excess * (cap_mass - t[i]) / slack;
        }
    }
    FiniteDist projected(base.outcomes(), std::move(proj));
    StableSum tv;
    for (std::size_t i = 0; i < base.size(); ++i) {
        tv.add(std::fabs(t[i] - projected.probs()[i]));
    }
    return ProjectionResult{std::move(projected), 0.5 * tv.value(), m};
}

// Total variation distance between two mass functions (any outcome sets).
inline double total_variation(const FiniteDist& a, const FiniteDist& b) {
    StableSum s;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a.outcomes()[i] < b.outcomes()[j])) {
            s.add(std::fabs(a.probs()[i]));
            ++i;
        } else if (i >= a.size() || b.outcomes()[j] < a.outcomes()[i]) {
            s.add(std::fabs(b.probs()[j]));
            ++j;
        } else {
            s.add(std::fabs(a.probs()[i] - b.probs()[j]));
            ++i;
            ++j;
        }
    }
    return 0.5 * s.value();
}

} // namespace bonlab
