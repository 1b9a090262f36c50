#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "bonlab/dist.hpp"
#include "bonlab/numerics.hpp"
#include "bonlab/rng.hpp"
#include "bonlab/selector.hpp"
#include "bonlab/winrate.hpp"

namespace bonlab {

namespace detail {

// Runs `trials` independent trials, each on its own substream of `base`,
// accumulating integer counters. Work is split into fixed blocks handed to
// a small thread pool; per-block counters are merged in block order, and
// every trial's stream depends only on (base, trial index), so the result
// is byte-identical regardless of thread count or scheduling.
//
// MakeWorker: () -> worker; worker(trial_index, Rng&, counters&).
template <typename MakeWorker>
std::vector<std::uint64_t> run_counting_trials(std::uint64_t trials, const Rng& base,
                                               std::size_t num_counters, MakeWorker make_worker,
                                               unsigned threads = 0) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::uint64_t block_size = 1u << 15;
    const std::uint64_t num_blocks = (trials + block_size - 1) / block_size;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, num_blocks));

    std::vector<std::vector<std::uint64_t>> block_counts(
        num_blocks, std::vector<std::uint64_t>(num_counters, 0));

    std::atomic<std::uint64_t> next_block{0};
    auto work = [&]() {
        auto worker = make_worker();
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= num_blocks) break;
            const std::uint64_t lo = b * block_size;
            const std::uint64_t hi = std::min(trials, lo + block_size);
            auto& counts = block_counts[b];
            for (std::uint64_t t = lo; t < hi; ++t) {
                Rng trial_rng = base.substream(t);
                worker(t, trial_rng, counts);
            }
        }
    };

    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    std::vector<std::uint64_t> total(num_counters, 0);
    for (const auto& counts : block_counts) {
        for (std::size_t i = 0; i < num_counters; ++i) total[i] += counts[i];
    }
    return total;
}

} // namespace detail

// Monte-Carlo estimate of the randomized-rank win-rate of a rank selector:
// the output's (score, carried V) is compared lexicographically against a
// fresh comparator draw. This is the convention under which the
// order-statistics formulas are exact.
inline MCEstimate rank_win_rate_mc(const SelectorSpec& spec, const FiniteDist& ref,
                                   const RewardModel& r_hat, const FiniteDist& comparator,
                                   std::uint64_t trials, const Rng& rng, double confidence,
                                   const FiniteDist* rejection_target = nullptr,
                                   unsigned threads = 0) {
    if (trials == 0) throw validation_error("rank_win_rate_mc: trials must be >= 1");
    auto make_worker = [&]() {
        struct Worker {
            SelectorSampler sampler;
            DistSampler opp;
            const FiniteDist* comp;
            const RewardModel* reward;
            void operator()(std::uint64_t, Rng& r, std::vector<std::uint64_t>& counts) {
                const SelectorDraw d = sampler.draw(r);
                const std::size_t j = opp.draw_index(r);
                const double v2 = r.next_unit();
                const double a = reward->value(d.outcome);
                const double b = reward->value(comp->outcomes()[j]);
                if (a > b || (a == b && d.tie_v > v2)) counts[0]++;
            }
        };
        return Worker{SelectorSampler(spec, ref, &r_hat, rejection_target),
                      DistSampler(comparator), &comparator, &r_hat};
    };
    const auto counts = detail::run_counting_trials(trials, rng, 1, make_worker, threads);
    MCEstimate est;
    est.mean = static_cast<double>(counts[0]) / static_cast<double>(trials);
    est.half_width = hoeffding_half_width(trials, confidence);
    est.trials = trials;
    est.seed = rng.seed();
    return est;
}

// Monte-Carlo estimate of the plain half-tie win-rate of the selector's
// marginal output law under `eval_reward` (the selection tie-break V plays
// no role here).
inline MCEstimate plain_win_rate_mc(const SelectorSpec& spec, const FiniteDist& ref,
                                    const RewardModel* r_hat, const RewardModel& eval_reward,
                                    const FiniteDist& comparator, std::uint64_t trials,
                                    const Rng& rng, double confidence,
                                    const FiniteDist* rejection_target = nullptr,
                                    unsigned threads = 0) {
    if (trials == 0) throw validation_error("plain_win_rate_mc: trials must be >= 1");
    auto make_worker = [&]() {
        struct Worker {
            SelectorSampler sampler;
            DistSampler opp;
            const FiniteDist* comp;
            const RewardModel* reward;
            void operator()(std::uint64_t, Rng& r, std::vector<std::uint64_t>& counts) {
                const SelectorDraw d = sampler.draw(r);
                const std::size_t j = opp.draw_index(r);
                const double a = reward->value(d.outcome);
                const double b = reward->value(comp->outcomes()[j]);
                // counts[0] holds twice-wins so ties can add exactly one half.
                if (a > b) counts[0] += 2;
                else if (a == b) counts[0] += 1;
            }
        };
        return Worker{SelectorSampler(spec, ref, r_hat, rejection_target),
                      DistSampler(comparator), &comparator, &eval_reward};
    };
    const auto counts = detail::run_counting_trials(trials, rng, 1, make_worker, threads);
    MCEstimate est;
    est.mean = static_cast<double>(counts[0]) / (2.0 * static_cast<double>(trials));
    est.half_width = hoeffding_half_width(trials, confidence);
    est.trials = trials;
    est.seed = rng.seed();
    return est;
}

// Per-outcome occurrence counts of the selector's marginal output law,
// aligned with ref.outcomes().
inline std::vector<std::uint64_t> mc_marginal(const SelectorSpec& spec, const FiniteDist& ref,
                                              const RewardModel* r_hat, std::uint64_t trials,
                                              const Rng& rng,
                                              const FiniteDist* rejection_target = nullptr,
                                              unsigned threads = 0) {
    auto make_worker = [&]() {
        struct Worker {
            SelectorSampler sampler;
            const FiniteDist* ref;
            void operator()(std::uint64_t, Rng& r, std::vector<std::uint64_t>& counts) {
                const SelectorDraw d = sampler.draw(r);
                counts[ref->index_of(d.outcome)]++;
            }
        };
        return Worker{SelectorSampler(spec, ref, r_hat, rejection_target), &ref};
    };
    return detail::run_counting_trials(trials, rng, ref.size(), make_worker, threads);
}

} // namespace bonlab
