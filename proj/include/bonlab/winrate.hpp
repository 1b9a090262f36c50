#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "bonlab/dist.hpp"
#include "bonlab/numerics.hpp"
#include "bonlab/ranking.hpp"
#include "bonlab/reward.hpp"

namespace bonlab {

// Monte-Carlo estimate with a distribution-free (Hoeffding) interval.
struct MCEstimate {
    double mean = 0.0;
    double half_width = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

enum class EvalMethod { Exact, MonteCarlo };

// A win-rate value together with how it was obtained.
struct WinRateReport {
    double value = 0.0;
    FiniteDist comparator;
    EvalMethod method = EvalMethod::Exact;
    std::optional<MCEstimate> estimate;
};

namespace detail {

inline void check_supported(const FiniteDist& dist, const RewardModel& reward, const char* who) {
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs()[i] > 0.0 && !reward.contains(dist.outcomes()[i])) {
            throw unknown_outcome_error(std::string(who) + ": outcome " +
                                        std::to_string(dist.outcomes()[i]) +
                                        " missing from reward table");
        }
    }
}

// Reward values aligned with the support (zero-mass entries untouched at 0).
inline std::vector<double> values_on_support(const FiniteDist& dist, const RewardModel& reward) {
    std::vector<double> vals(dist.size(), 0.0);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs()[i] > 0.0) vals[i] = reward.value(dist.outcomes()[i]);
    }
    return vals;
}

inline double win_rate_double_sum(const FiniteDist& policy, const RewardModel& reward,
                                  const FiniteDist& comparator) {
    const std::vector<double> pv = values_on_support(policy, reward);
    const std::vector<double> cv = values_on_support(comparator, reward);
    StableSum s;
    for (std::size_t i = 0; i < policy.size(); ++i) {
        const double p = policy.probs()[i];
        if (p <= 0.0) continue;
        const double vy = pv[i];
        StableSum row;
        for (std::size_t j = 0; j < comparator.size(); ++j) {
            const double q = comparator.probs()[j];
            if (q <= 0.0) continue;
            if (vy > cv[j]) row.add(q);
            else if (vy == cv[j]) row.add(0.5 * q);
        }
        s.add(p * row.value());
    }
    return s.value();
}

inline double win_rate_mid_cdf(const FiniteDist& policy, const RewardModel& reward,
                               const RankedClasses& comparator_ranks) {
    StableSum s;
    for (std::size_t i = 0; i < policy.size(); ++i) {
        const double p = policy.probs()[i];
        if (p <= 0.0) continue;
        s.add(p * comparator_ranks.mid_cdf(reward.value(policy.outcomes()[i])));
    }
    return s.value();
}

} // namespace detail

// P(policy draw beats an independent comparator draw under `reward`),
// ties counted half. Two evaluation routes: the quadratic double sum for
// small supports and the sorted mid-CDF route above 4096 points; they
// agree to 1e-12 and the tests cross-check them.
inline double win_rate_value(const FiniteDist& policy, const RewardModel& reward,
                             const FiniteDist& comparator) {
    detail::check_supported(policy, reward, "win_rate");
    detail::check_supported(comparator, reward, "win_rate");
    if (policy.size() < 4096 && comparator.size() < 4096) {
        return detail::win_rate_double_sum(policy, reward, comparator);
    }
    RankedClasses rc(comparator, reward);
    return detail::win_rate_mid_cdf(policy, reward, rc);
}

inline WinRateReport win_rate_exact(const FiniteDist& policy, const RewardModel& reward,
                                    const FiniteDist& comparator) {
    WinRateReport r{win_rate_value(policy, reward, comparator), comparator, EvalMethod::Exact, std::nullopt};
    return r;
}

// Both routes exposed for the cross-agreement tests.
inline double win_rate_value_double_sum(const FiniteDist& policy, const RewardModel& reward,
                                        const FiniteDist& comparator) {
    detail::check_supported(policy, reward, "win_rate");
    detail::check_supported(comparator, reward, "win_rate");
    return detail::win_rate_double_sum(policy, reward, comparator);
}

inline double win_rate_value_mid_cdf(const FiniteDist& policy, const RewardModel& reward,
                                     const FiniteDist& comparator) {
    detail::check_supported(policy, reward, "win_rate");
    detail::check_supported(comparator, reward, "win_rate");
    RankedClasses rc(comparator, reward);
    return detail::win_rate_mid_cdf(policy, reward, rc);
}

// Expected absolute disagreement of the two tables' pairwise outcomes on
// i.i.d. reference pairs. Quadratic double sum; symmetric in the tables;
// zero exactly when they induce the same weak ordering on the support.
inline double pairwise_error_exact(const RewardModel& r_hat, const RewardModel& r_star,
                                   const FiniteDist& ref) {
    detail::check_supported(ref, r_hat, "pairwise_error");
    detail::check_supported(ref, r_star, "pairwise_error");
    const std::vector<double> hv = detail::values_on_support(ref, r_hat);
    const std::vector<double> sv = detail::values_on_support(ref, r_star);
    auto outcome = [](double a, double b) { return a > b ? 1.0 : (a == b ? 0.5 : 0.0); };
    StableSum s;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double p = ref.probs()[i];
        if (p <= 0.0) continue;
        StableSum row;
        for (std::size_t j = 0; j < ref.size(); ++j) {
            const double q = ref.probs()[j];
            if (q <= 0.0) continue;
            const double d = outcome(hv[i], hv[j]) - outcome(sv[i], sv[j]);
            if (d != 0.0) row.add(q * std::fabs(d));
        }
        s.add(p * row.value());
    }
    return s.value();
}

// Mean squared difference of the two tables under the reference measure.
inline double mse_error(const RewardModel& r_hat, const RewardModel& r_star,
                        const FiniteDist& ref) {
    detail::check_supported(ref, r_hat, "mse_error");
    detail::check_supported(ref, r_star, "mse_error");
    StableSum s;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double p = ref.probs()[i];
        if (p <= 0.0) continue;
        const double d = r_hat.value(ref.outcomes()[i]) - r_star.value(ref.outcomes()[i]);
        s.add(p * d * d);
    }
    return s.value();
}

} // namespace bonlab
