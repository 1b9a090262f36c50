#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bonlab/dist.hpp"
#include "bonlab/errors.hpp"

namespace bonlab {

// Table mapping outcome ids to bounded reward values. Ties are detected by
// exact bit equality of the stored doubles: tables are authored, not
// computed, so no epsilon knob exists.
class RewardModel {
public:
    RewardModel(std::vector<std::pair<OutcomeId, double>> values, double r_max)
        : values_(std::move(values)), r_max_(r_max) {
        if (!(r_max_ > 0.0)) throw validation_error("RewardModel: r_max must be > 0");
        std::sort(values_.begin(), values_.end());
        for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
            if (values_[i].first == values_[i + 1].first) {
                throw validation_error("RewardModel: duplicate outcome id " +
                                       std::to_string(values_[i].first));
            }
        }
        for (const auto& [id, v] : values_) {
            if (!(v >= 0.0) || !(v <= r_max_) || !std::isfinite(v)) {
                throw validation_error("RewardModel: value for outcome " + std::to_string(id) +
                                       " outside [0, r_max]");
            }
        }
    }

    // Convenience: table over ids 0..n-1.
    static RewardModel from_dense(const std::vector<double>& vals, double r_max) {
        std::vector<std::pair<OutcomeId, double>> kv;
        kv.reserve(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) kv.emplace_back(static_cast<OutcomeId>(i), vals[i]);
        return RewardModel(std::move(kv), r_max);
    }

    double value(OutcomeId id) const {
        auto it = std::lower_bound(values_.begin(), values_.end(), id,
                                   [](const auto& kv, OutcomeId key) { return kv.first < key; });
        if (it == values_.end() || it->first != id) {
            throw unknown_outcome_error("RewardModel: unknown outcome id " + std::to_string(id));
        }
        return it->second;
    }

    bool contains(OutcomeId id) const {
        auto it = std::lower_bound(values_.begin(), values_.end(), id,
                                   [](const auto& kv, OutcomeId key) { return kv.first < key; });
        return it != values_.end() && it->first == id;
    }

    double r_max() const { return r_max_; }
    const std::vector<std::pair<OutcomeId, double>>& values() const { return values_; }

    // New table with every value mapped through fn (used by the
    // monotone-transform properties in the tests).
    template <typename Fn>
    RewardModel transformed(Fn&& fn, double new_r_max) const {
        std::vector<std::pair<OutcomeId, double>> kv = values_;
        for (auto& [id, v] : kv) v = fn(v);
        return RewardModel(std::move(kv), new_r_max);
    }

private:
    std::vector<std::pair<OutcomeId, double>> values_;
    double r_max_;
};

// Outcome of one pairwise comparison under a reward: 1 if y beats y2,
// 1/2 on an exact tie, 0 otherwise.
inline double pairwise_outcome(const RewardModel& reward, OutcomeId y, OutcomeId y2) {
    const double a = reward.value(y);
    const double b = reward.value(y2);
    if (a > b) return 1.0;
    if (a == b) return 0.5;
    return 0.0;
}

inline double expectation(const FiniteDist& dist, const RewardModel& reward) {
    StableSum s;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs()[i] > 0.0) s.add(dist.probs()[i] * reward.value(dist.outcomes()[i]));
    }
    return s.value();
}

inline double second_moment(const FiniteDist& dist, const RewardModel& reward) {
    StableSum s;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs()[i] > 0.0) {
            const double v = reward.value(dist.outcomes()[i]);
            s.add(dist.probs()[i] * v * v);
        }
    }
    return s.value();
}

inline double variance(const FiniteDist& dist, const RewardModel& reward) {
    const double m = expectation(dist, reward);
    return second_moment(dist, reward) - m * m;
}

} // namespace bonlab
