#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bonlab/dist.hpp"
#include "bonlab/errors.hpp"
#include "bonlab/reward.hpp"

namespace bonlab {

// Tie classes of a distribution under a reward table, sorted by ascending
// reward value (bit-exact grouping). Each class c occupies the CDF interval
// [below[c], below[c] + mass[c]); the intervals partition [0, 1) up to the
// zero-mass outcomes, which belong to no class.
//
// mid_cdf(v) = P(value < v) + P(value == v) / 2 is the half-tie rank of a
// reward value against this distribution.
class RankedClasses {
public:
    RankedClasses(const FiniteDist& dist, const RewardModel& reward) : dist_(&dist) {
        for (std::size_t i = 0; i < dist.size(); ++i) {
            if (!reward.contains(dist.outcomes()[i])) {
                throw unknown_outcome_error("RankedClasses: outcome " +
                                            std::to_string(dist.outcomes()[i]) +
                                            " missing from reward table");
            }
        }
        std::vector<std::size_t> order;
        order.reserve(dist.size());
        for (std::size_t i = 0; i < dist.size(); ++i) {
            if (dist.probs()[i] > 0.0) order.push_back(i);
        }
        std::vector<double> vals(dist.size());
        for (std::size_t i = 0; i < dist.size(); ++i) vals[i] = reward.value(dist.outcomes()[i]);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (vals[a] != vals[b]) return vals[a] < vals[b];
            return dist.outcomes()[a] < dist.outcomes()[b];
        });
        class_of_.assign(dist.size(), npos_class);
        double acc = 0.0;
        std::size_t i = 0;
        while (i < order.size()) {
            const double v = vals[order[i]];
            StableSum t;
            std::size_t j = i;
            while (j < order.size() && vals[order[j]] == v) {
                t.add(dist.probs()[order[j]]);
                class_of_[order[j]] = values_.size();
                members_.push_back(order[j]); // grouped contiguously per class
                ++j;
            }
            member_end_.push_back(members_.size());
            values_.push_back(v);
            below_.push_back(acc);
            mass_.push_back(t.value());
            acc += t.value();
            i = j;
        }
        // The top class ends at exactly 1.
        if (!mass_.empty()) mass_.back() = 1.0 - below_.back();
    }

    static constexpr std::size_t npos_class = static_cast<std::size_t>(-1);

    std::size_t num_classes() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& mass() const { return mass_; }
    const std::vector<double>& below() const { return below_; }
    double upper(std::size_t c) const {
        return c + 1 < values_.size() ? below_[c + 1] : 1.0;
    }
    std::size_t class_of(std::size_t dist_index) const { return class_of_[dist_index]; }

    // Dist indices of the members of class c.
    std::pair<std::size_t, std::size_t> member_range(std::size_t c) const {
        return {c == 0 ? 0 : member_end_[c - 1], member_end_[c]};
    }
    std::size_t member(std::size_t k) const { return members_[k]; }

    // Mass strictly below reward value v.
    double cdf_below(double v) const {
        auto it = std::lower_bound(values_.begin(), values_.end(), v);
        const std::size_t c = static_cast<std::size_t>(it - values_.begin());
        return c < values_.size() ? below_[c] : 1.0;
    }

    // Mass at exactly reward value v (0 if v is not a class value).
    double mass_at(double v) const {
        auto it = std::lower_bound(values_.begin(), values_.end(), v);
        if (it == values_.end() || *it != v) return 0.0;
        return mass_[static_cast<std::size_t>(it - values_.begin())];
    }

    double mid_cdf(double v) const { return cdf_below(v) + 0.5 * mass_at(v); }

    const FiniteDist& dist() const { return *dist_; }

private:
    const FiniteDist* dist_;
    std::vector<double> values_; // ascending class reward values
    std::vector<double> mass_;   // class masses
    std::vector<double> below_;  // cumulative mass strictly below the class
    std::vector<std::size_t> class_of_;
    std::vector<std::size_t> members_;
    std::vector<std::size_t> member_end_;
};

// Randomized rank of outcome y with auxiliary uniform v: the CDF jump of
// y's reward value, linearly interpolated by v. With y ~ dist and
// v ~ Unif[0,1] the output is itself Unif[0,1], ties or not.
inline double randomized_rank(const RankedClasses& rc, const RewardModel& reward,
                              OutcomeId y, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw validation_error("randomized_rank: v must lie in [0, 1]");
    const std::size_t idx = rc.dist().index_of(y);
    if (idx == FiniteDist::npos || rc.dist().probs()[idx] <= 0.0) {
        throw unknown_outcome_error("randomized_rank: outcome " + std::to_string(y) +
                                    " is outside the support");
    }
    const double val = reward.value(y);
    return rc.cdf_below(val) + v * rc.mass_at(val);
}

inline double randomized_rank(const FiniteDist& dist, const RewardModel& reward,
                              OutcomeId y, double v) {
    RankedClasses rc(dist, reward);
    return randomized_rank(rc, reward, y, v);
}

} // namespace bonlab
