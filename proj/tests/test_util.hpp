#pragma once

// Seeded random-instance helpers shared by the property tests.

#include <set>
#include <utility>
#include <vector>

#include "bonlab/dist.hpp"
#include "bonlab/reward.hpp"
#include "bonlab/rng.hpp"

namespace testutil {

using namespace bonlab;

// Random distribution over ids 0..size-1 with strictly positive masses.
inline FiniteDist random_dist(Rng& rng, std::size_t min_size, std::size_t max_size) {
    const std::size_t size = min_size + rng.next_below(max_size - min_size + 1);
    std::vector<OutcomeId> ids(size);
    std::vector<double> probs(size);
    double total = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        ids[i] = static_cast<OutcomeId>(i);
        probs[i] = 0.05 + rng.next_unit();
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return FiniteDist(std::move(ids), std::move(probs));
}

// Random policy dominated by ref (possibly with zero masses).
inline FiniteDist random_dominated(Rng& rng, const FiniteDist& ref) {
    std::vector<double> probs(ref.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double keep = rng.next_unit() < 0.8 ? 1.0 : 0.0;
        probs[i] = keep * rng.next_unit() * ref.probs()[i];
        total += probs[i];
    }
    if (total <= 0.0) {
        probs = ref.probs();
        total = 1.0;
    }
    for (double& p : probs) p /= total;
    return FiniteDist(ref.outcomes(), std::move(probs));
}

// Random reward table over the dist's ids, drawing values from `levels`
// distinct levels so exact ties occur regularly.
inline RewardModel random_reward(Rng& rng, const FiniteDist& dist, std::size_t levels,
                                 double r_max = 1.0) {
    std::vector<double> level_vals(levels);
    for (std::size_t i = 0; i < levels; ++i) level_vals[i] = rng.next_unit() * r_max;
    std::vector<std::pair<OutcomeId, double>> kv;
    kv.reserve(dist.size());
    for (OutcomeId id : dist.outcomes()) {
        kv.emplace_back(id, level_vals[rng.next_below(levels)]);
    }
    return RewardModel(std::move(kv), r_max);
}

} // namespace testutil
