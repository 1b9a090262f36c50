#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bonlab/errors.hpp"
#include "bonlab/numerics.hpp"
#include "bonlab/rng.hpp"

namespace bonlab {

using OutcomeId = std::int64_t;

// Explicit probability mass function over integer outcome ids.
// Ids are strictly increasing; masses may be zero. Constructors accept
// masses whose sum is within 1e-9 of 1, renormalize, and then move the
// remaining rounding residual onto the largest mass so the stored sum is
// exactly 1.0.
class FiniteDist {
public:
    FiniteDist(std::vector<OutcomeId> outcomes, std::vector<double> probs)
        : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
        validate_and_normalize();
    }

    static FiniteDist point_mass(OutcomeId id) { return FiniteDist({id}, {1.0}); }

    static FiniteDist uniform(const std::vector<OutcomeId>& ids) {
        return FiniteDist(ids, std::vector<double>(ids.size(), 1.0 / static_cast<double>(ids.size())));
    }

    // Uniform over ids 0..n-1; the stand-in for a continuous reference on a grid.
    static FiniteDist uniform_grid(std::size_t n) {
        std::vector<OutcomeId> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<OutcomeId>(i);
        return uniform(ids);
    }

    const std::vector<OutcomeId>& outcomes() const { return outcomes_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return outcomes_.size(); }

    // Index of id in the outcome list, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(OutcomeId id) const {
        auto it = std::lower_bound(outcomes_.begin(), outcomes_.end(), id);
        if (it == outcomes_.end() || *it != id) return npos;
        return static_cast<std::size_t>(it - outcomes_.begin());
    }

    double prob_of(OutcomeId id) const {
        const std::size_t i = index_of(id);
        return i == npos ? 0.0 : probs_[i];
    }

    bool contains(OutcomeId id) const { return index_of(id) != npos; }

    std::size_t support_size() const {
        std::size_t n = 0;
        for (double p : probs_) n += (p > 0.0);
        return n;
    }

    bool operator==(const FiniteDist& other) const {
        return outcomes_ == other.outcomes_ && probs_ == other.probs_;
    }

private:
    void validate_and_normalize() {
        if (outcomes_.empty() || outcomes_.size() != probs_.size()) {
            throw validation_error("FiniteDist: outcomes/probs must be non-empty and equal length");
        }
        for (std::size_t i = 0; i + 1 < outcomes_.size(); ++i) {
            if (outcomes_[i] >= outcomes_[i + 1]) {
                throw validation_error("FiniteDist: outcome ids must be strictly increasing");
            }
        }
        if (outcomes_.front() < 0) {
            throw validation_error("FiniteDist: outcome ids must be nonnegative");
        }
        StableSum s;
        for (double p : probs_) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw validation_error("FiniteDist: probabilities must be finite and >= 0");
            }
            s.add(p);
        }
        const double total = s.value();
        if (std::fabs(total - 1.0) > 1e-9) {
            throw validation_error("FiniteDist: mass sums to " + std::to_string(total) +
                                   ", outside the 1e-9 ingestion tolerance");
        }
        if (total != 1.0) {
            for (double& p : probs_) p /= total;
        }
        // Land the residual on the largest mass; keeps the stored sum at exactly 1.
        StableSum s2;
        for (double p : probs_) s2.add(p);
        const double residual = 1.0 - s2.value();
        if (residual != 0.0) {
            auto it = std::max_element(probs_.begin(), probs_.end());
            *it += residual;
            if (*it < 0.0) throw validation_error("FiniteDist: normalization failed");
        }
    }

    std::vector<OutcomeId> outcomes_;
    std::vector<double> probs_;
};

// Precomputed inverse-CDF sampler. Zero-mass outcomes are never returned.
class DistSampler {
public:
    explicit DistSampler(const FiniteDist& dist) : dist_(&dist) {
        cum_.reserve(dist.size());
        double acc = 0.0;
        for (double p : dist.probs()) {
            acc += p;
            cum_.push_back(acc);
        }
        cum_.back() = 1.0;
    }

    OutcomeId draw(Rng& rng) const { return dist_->outcomes()[draw_index(rng)]; }

    // First index with cumulative mass > u. Since u < 1 and zero-mass slots
    // have zero-width steps, this never lands on a zero-mass outcome.
    std::size_t draw_index(Rng& rng) const {
        const double u = rng.next_unit();
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
        if (i >= cum_.size()) i = cum_.size() - 1;
        return i;
    }

private:
    const FiniteDist* dist_;
    std::vector<double> cum_;
};

// n i.i.d. draws.
inline std::vector<OutcomeId> sample(const FiniteDist& dist, Rng& rng, std::size_t n) {
    if (n == 0) throw validation_error("sample: n must be >= 1");
    DistSampler sampler(dist);
    std::vector<OutcomeId> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.draw(rng));
    return out;
}

// Renormalized restriction of `dist` to the `keep` set.
inline FiniteDist conditional(const FiniteDist& dist, const std::set<OutcomeId>& keep) {
    std::vector<OutcomeId> ids;
    std::vector<double> ps;
    StableSum mass;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (keep.count(dist.outcomes()[i])) {
            ids.push_back(dist.outcomes()[i]);
            ps.push_back(dist.probs()[i]);
            mass.add(dist.probs()[i]);
        }
    }
    if (ids.empty() || mass.value() <= 0.0) {
        throw validation_error("conditional: keep set has zero mass");
    }
    for (double& p : ps) p /= mass.value();
    return FiniteDist(std::move(ids), std::move(ps));
}

// Density ratio d(target)/d(base), defined on the base outcome list.
// Requires target << base; the violating outcome is named otherwise.
struct DensityRatio {
    const FiniteDist* base;
    const FiniteDist* target;
    std::vector<double> ratios; // aligned with base->outcomes()
};

inline DensityRatio density_ratio(const FiniteDist& target, const FiniteDist& base) {
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (target.probs()[i] > 0.0 && base.prob_of(target.outcomes()[i]) <= 0.0) {
            throw domination_error("density_ratio: target has mass on outcome " +
                                   std::to_string(target.outcomes()[i]) +
                                   " where the base has none");
        }
    }
    DensityRatio dr{&base, &target, {}};
    dr.ratios.resize(base.size(), 0.0);
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double b = base.probs()[i];
        if (b > 0.0) dr.ratios[i] = target.prob_of(base.outcomes()[i]) / b;
    }
    return dr;
}

// Largest pointwise ratio over the base support.
inline double max_density_ratio(const FiniteDist& target, const FiniteDist& base) {
    const DensityRatio dr = density_ratio(target, base);
    double m = 0.0;
    for (double r : dr.ratios) m = std::max(m, r);
    return m;
}

} // namespace bonlab
