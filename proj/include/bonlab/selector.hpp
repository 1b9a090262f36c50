#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bonlab/dist.hpp"
#include "bonlab/errors.hpp"
#include "bonlab/numerics.hpp"
#include "bonlab/ranking.hpp"
#include "bonlab/reward.hpp"

namespace bonlab {

enum class SelectorKind { Bon, EmBon, ChiBon, Rejection, TopQuantile };

// Tagged description of a selection policy. Tie-breaking is the
// auxiliary-uniform lexicographic rule everywhere: candidates are ordered
// by (score, V) with V ~ Unif[0,1] i.i.d. per candidate.
struct SelectorSpec {
    SelectorKind kind = SelectorKind::Bon;
    double m = 0.0;        // em_bon / rejection / top_quantile
    std::int64_t n = 0;    // bon / em_bon / rejection
    double beta = 0.0;     // chi_bon

    // Batch rank count k = ceil(n / m), clamped to [1, n]. Floating
    // division can land one ulp above an integer, so quotients within
    // 1e-9 of an integer snap to it first.
    std::int64_t em_bon_k() const {
        const double q = static_cast<double>(n) / m;
        const double r = std::round(q);
        double k = (std::fabs(q - r) <= 1e-9) ? r : std::ceil(q);
        k = std::max(1.0, std::min(k, static_cast<double>(n)));
        return static_cast<std::int64_t>(k);
    }

    std::string to_string() const;
    static SelectorSpec parse(const std::string& text);

    static SelectorSpec bon(std::int64_t n) {
        SelectorSpec s;
        s.kind = SelectorKind::Bon;
        s.n = n;
        s.validate();
        return s;
    }
    static SelectorSpec em_bon(double m, std::int64_t n) {
        SelectorSpec s;
        s.kind = SelectorKind::EmBon;
        s.m = m;
        s.n = n;
        s.validate();
        return s;
    }
    static SelectorSpec chi_bon(double beta) {
        SelectorSpec s;
        s.kind = SelectorKind::ChiBon;
        s.beta = beta;
        s.validate();
        return s;
    }
    static SelectorSpec rejection(double m, std::int64_t n) {
        SelectorSpec s;
        s.kind = SelectorKind::Rejection;
        s.m = m;
        s.n = n;
        s.validate();
        return s;
    }
    static SelectorSpec top_quantile(double m) {
        SelectorSpec s;
        s.kind = SelectorKind::TopQuantile;
        s.m = m;
        s.validate();
        return s;
    }

    void validate() const {
        switch (kind) {
            case SelectorKind::Bon:
                if (n < 1) throw configuration_error("selector 'bon': field n must be >= 1");
                break;
            case SelectorKind::EmBon:
                if (!(m >= 1.0)) throw configuration_error("selector 'em_bon': field m must be >= 1");
                if (n < 1) throw configuration_error("selector 'em_bon': field n must be >= 1");
                break;
            case SelectorKind::ChiBon:
                if (!(beta > 0.0)) throw configuration_error("selector 'chi_bon': field beta must be > 0");
                break;
            case SelectorKind::Rejection:
                if (!(m >= 1.0)) throw configuration_error("selector 'rejection': field m must be >= 1");
                if (n < 1) throw configuration_error("selector 'rejection': field n must be >= 1");
                break;
            case SelectorKind::TopQuantile:
                if (!(m >= 1.0)) throw configuration_error("selector 'top_quantile': field m must be >= 1");
                break;
        }
    }
};

// A selection policy's exact output law over outcomes, with the pointwise
// density-ratio cap it certifies against the reference (when one exists).
struct InducedPolicy {
    FiniteDist dist;
    std::optional<double> ratio_cap_claim;
};

namespace detail {

// Mass the averaged top-k-of-n rank laws place on the rank interval [a, b]:
// (1/k) * sum_{j=n-k+1..n} [I_b(j, n-j+1) - I_a(j, n-j+1)].
inline double topk_mass_on(std::int64_t n, std::int64_t k, double a, double b, double beta_tol) {
    StableSum s;
    for (std::int64_t j = n - k + 1; j <= n; ++j) {
        const double aa = static_cast<double>(j);
        const double bb = static_cast<double>(n - j + 1);
        s.add(reg_inc_beta(b, aa, bb, beta_tol) - reg_inc_beta(a, aa, bb, beta_tol));
    }
    return s.value() / static_cast<double>(k);
}

// Integral of u against the same law over [a, b], via
// u * Beta(j, n-j+1) density = (j/(n+1)) * Beta(j+1, n-j+1) density.
inline double topk_rank_integral_on(std::int64_t n, std::int64_t k, double a, double b,
                                    double beta_tol) {
    StableSum s;
    for (std::int64_t j = n - k + 1; j <= n; ++j) {
        const double aa = static_cast<double>(j);
        const double bb = static_cast<double>(n - j + 1);
        const double w = aa / static_cast<double>(n + 1);
        s.add(w * (reg_inc_beta(b, aa + 1.0, bb, beta_tol) - reg_inc_beta(a, aa + 1.0, bb, beta_tol)));
    }
    return s.value() / static_cast<double>(k);
}

// Distributes a class mass over its members proportionally to their
// reference masses.
inline void split_class_mass(const RankedClasses& rc, std::size_t c, double class_mass,
                             std::vector<double>& out) {
    const auto [lo, hi] = rc.member_range(c);
    const double t = rc.mass()[c];
    for (std::size_t k = lo; k < hi; ++k) {
        const std::size_t i = rc.member(k);
        out[i] = class_mass * (rc.dist().probs()[i] / t);
    }
}

} // namespace detail

// Exact output law of best-of-n selection under r_hat with uniform
// tie-breaking: a value class occupies the rank interval [A, A+T), and the
// batch maximum lands in it with probability (A+T)^n - A^n.
inline InducedPolicy bon_induced_exact(const FiniteDist& ref, const RewardModel& r_hat,
                                       std::int64_t n) {
    if (n < 1) throw validation_error("bon_induced_exact: n must be >= 1");
    if (n == 1) return InducedPolicy{ref, 1.0};
    RankedClasses rc(ref, r_hat);
    std::vector<double> out(ref.size(), 0.0);
    for (std::size_t c = 0; c < rc.num_classes(); ++c) {
        const double a = rc.below()[c];
        const double b = rc.upper(c);
        const double class_mass = std::pow(b, static_cast<double>(n)) -
                                  std::pow(a, static_cast<double>(n));
        detail::split_class_mass(rc, c, class_mass, out);
    }
    return InducedPolicy{FiniteDist(ref.outcomes(), std::move(out)),
                         static_cast<double>(n)};
}

// Exact output law of em_bon: rank the batch by (r_hat, V), return a
// uniform draw from the top k = ceil(n/m). The output rank follows the
// average of the top-k order-statistic Beta laws; each class receives the
// law's mass on its rank interval, split within the class by reference
// mass. Certifies ratio cap n/k <= m.
inline InducedPolicy em_bon_induced_exact(const FiniteDist& ref, const RewardModel& r_hat,
                                          double m, std::int64_t n, double beta_tol = 1e-15) {
    if (!(m >= 1.0) || n < 1) throw validation_error("em_bon_induced_exact: requires m >= 1, n >= 1");
    const std::int64_t k = SelectorSpec::em_bon(m, n).em_bon_k();
    if (k == n) return InducedPolicy{ref, m}; // uniform over the whole batch
    RankedClasses rc(ref, r_hat);
    std::vector<double> out(ref.size(), 0.0);
    for (std::size_t c = 0; c < rc.num_classes(); ++c) {
        const double class_mass =
            detail::topk_mass_on(n, k, rc.below()[c], rc.upper(c), beta_tol);
        detail::split_class_mass(rc, c, class_mass, out);
    }
    return InducedPolicy{FiniteDist(ref.outcomes(), std::move(out)), m};
}

// The population policy selecting the top 1/m of rank space under r_hat:
// full classes above the cutoff keep ratio m, the boundary class is
// included fractionally so the selected mass is exactly 1/m.
inline InducedPolicy top_quantile_policy(const FiniteDist& ref, const RewardModel& r_hat,
                                         double m) {
    if (!(m >= 1.0)) throw validation_error("top_quantile_policy: m must be >= 1");
    RankedClasses rc(ref, r_hat);
    const double t = 1.0 - 1.0 / m;
    std::vector<double> out(ref.size(), 0.0);
    for (std::size_t c = 0; c < rc.num_classes(); ++c) {
        const double a = rc.below()[c];
        const double b = rc.upper(c);
        double included;
        if (a >= t) included = rc.mass()[c];
        else if (b <= t) included = 0.0;
        else included = b - t;
        if (included <= 0.0) continue;
        if (included == rc.mass()[c]) {
            // Fully included class: masses scale by exactly m.
            const auto [lo, hi] = rc.member_range(c);
            for (std::size_t kk = lo; kk < hi; ++kk) {
                const std::size_t i = rc.member(kk);
                out[i] = m * ref.probs()[i];
            }
        } else {
            detail::split_class_mass(rc, c, m * included, out);
        }
    }
    return InducedPolicy{FiniteDist(ref.outcomes(), std::move(out)), m};
}

// Score-tilted policy proportional to ref * (r_hat - lambda)_+ / beta,
// where lambda solves E_ref[(r_hat - lambda)_+] = beta. The map is
// monotone nonincreasing in lambda and bracketed by [mean - beta, max
// support score], so plain bisection suffices. The residual meets 1e-12
// in absolute terms for beta up to order 1; for very large beta it is
// limited by the ulp of lambda itself (the masses are unaffected because
// they are renormalized by the achieved sum).
inline InducedPolicy chi_bon_policy(const FiniteDist& ref, const RewardModel& r_hat,
                                    double beta) {
    if (!(beta > 0.0)) throw validation_error("chi_bon_policy: beta must be > 0");
    std::vector<double> vals(ref.size());
    double vmax = 0.0;
    StableSum mean_s;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        vals[i] = r_hat.value(ref.outcomes()[i]);
        if (ref.probs()[i] > 0.0) {
            vmax = std::max(vmax, vals[i]);
            mean_s.add(ref.probs()[i] * vals[i]);
        }
    }
    const double mean = mean_s.value();
    auto residual = [&](double lambda) {
        StableSum s;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double e = vals[i] - lambda;
            if (ref.probs()[i] > 0.0 && e > 0.0) s.add(ref.probs()[i] * e);
        }
        return s.value() - beta;
    };
    // The root lies in [mean - beta, max score]; the lower end is widened a
    // hair because the residual there is mathematically >= 0 but can round
    // just below it when every score is active.
    const double lo = mean - beta - 1e-9 * std::max(1.0, beta);
    const double lambda = bisect_nonincreasing(residual, lo, vmax);
    const double res = residual(lambda);
    if (std::fabs(res) > 1e-12 * std::max(1.0, beta)) {
        throw numeric_error("chi_bon_policy: bisection residual " + std::to_string(res));
    }
    std::vector<double> out(ref.size(), 0.0);
    StableSum total;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double e = vals[i] - lambda;
        if (ref.probs()[i] > 0.0 && e > 0.0) {
            out[i] = ref.probs()[i] * e;
            total.add(out[i]);
        }
    }
    if (!(total.value() > 0.0)) throw numeric_error("chi_bon_policy: degenerate solution");
    for (double& p : out) p /= total.value();
    return InducedPolicy{FiniteDist(ref.outcomes(), std::move(out)), std::nullopt};
}

// Exact output law of approximate rejection sampling: propose up to n
// draws from ref, accept with probability min(ratio/m, 1), return the
// first accepted proposal, or the first proposal when all are rejected.
// The all-rejected branch therefore contributes the rejected-conditional
// law, not ref.
inline InducedPolicy rejection_induced_exact(const FiniteDist& ref, const FiniteDist& target,
                                             double m, std::int64_t n) {
    if (!(m >= 1.0) || n < 1) throw validation_error("rejection_induced_exact: requires m >= 1, n >= 1");
    const DensityRatio dr = density_ratio(target, ref);
    std::vector<double> accept(ref.size(), 0.0);
    StableSum a_s;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        accept[i] = std::min(dr.ratios[i] / m, 1.0);
        a_s.add(ref.probs()[i] * accept[i]);
    }
    const double a = a_s.value();
    if (!(a > 0.0)) throw numeric_error("rejection_induced_exact: acceptance probability is zero");
    const double fail = std::pow(1.0 - a, static_cast<double>(n));
    std::vector<double> out(ref.size(), 0.0);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double acc_part = ref.probs()[i] * accept[i] / a;
        double rej_part = 0.0;
        if (fail > 0.0 && a < 1.0) {
            rej_part = ref.probs()[i] * (1.0 - accept[i]) / (1.0 - a);
        }
        out[i] = (1.0 - fail) * acc_part + fail * rej_part;
    }
    return InducedPolicy{FiniteDist(ref.outcomes(), std::move(out)), std::nullopt};
}

// Output law after infinitely many proposals: the acceptance-tilted law.
inline FiniteDist rejection_acceptance_law(const FiniteDist& ref, const FiniteDist& target,
                                           double m) {
    const DensityRatio dr = density_ratio(target, ref);
    std::vector<double> out(ref.size(), 0.0);
    StableSum a_s;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        out[i] = ref.probs()[i] * std::min(dr.ratios[i] / m, 1.0);
        a_s.add(out[i]);
    }
    for (double& p : out) p /= a_s.value();
    return FiniteDist(ref.outcomes(), std::move(out));
}

// ---------------------------------------------------------------------------
// Randomized-rank win-rate of a rank selector against the reference.
//
// The selector's tie-break V is part of the comparison: the output
// (score, V) pair is compared lexicographically against a fresh reference
// draw. Equivalently this is the expected randomized rank of the output,
// which the order-statistics laws give in closed form; here it is
// accumulated per value class through the incomplete-beta integrals so the
// numerical path is exercised end to end.
// ---------------------------------------------------------------------------
inline double selector_rank_win_rate(const FiniteDist& ref, const RewardModel& r_hat,
                                     const SelectorSpec& spec, double beta_tol = 1e-15) {
    RankedClasses rc(ref, r_hat);
    StableSum s;
    switch (spec.kind) {
        case SelectorKind::Bon:
        case SelectorKind::EmBon: {
            const std::int64_t n = spec.n;
            const std::int64_t k = spec.kind == SelectorKind::Bon ? 1 : spec.em_bon_k();
            for (std::size_t c = 0; c < rc.num_classes(); ++c) {
                s.add(detail::topk_rank_integral_on(n, k, rc.below()[c], rc.upper(c), beta_tol));
            }
            return s.value();
        }
        case SelectorKind::TopQuantile: {
            const double t = 1.0 - 1.0 / spec.m;
            for (std::size_t c = 0; c < rc.num_classes(); ++c) {
                const double lo = std::max(rc.below()[c], t);
                const double hi = rc.upper(c);
                if (lo < hi) s.add(spec.m * 0.5 * (hi * hi - lo * lo));
            }
            return s.value();
        }
        default:
            throw configuration_error(
                "selector_rank_win_rate: defined for rank selectors (bon, em_bon, top_quantile)");
    }
}

// ---------------------------------------------------------------------------
// Sampling implementations.
// ---------------------------------------------------------------------------

struct SelectorDraw {
    OutcomeId outcome;
    double tie_v; // the V carried by the output (fresh for chi_bon/rejection)
};

// One-shot selection calls. Hot loops should use
// SelectorSampler below, which precomputes the inverse CDF once.

class SelectorSampler {
public:
    // `r_hat` is required for every kind except rejection; `target` is
    // required for rejection and ignored otherwise.
    SelectorSampler(const SelectorSpec& spec, const FiniteDist& ref, const RewardModel* r_hat,
                    const FiniteDist* target = nullptr)
        : spec_(spec), ref_(&ref), r_hat_(r_hat) {
        spec_.validate();
        if (spec_.kind != SelectorKind::Rejection && r_hat == nullptr) {
            throw configuration_error("selector: reward table required");
        }
        switch (spec_.kind) {
            case SelectorKind::Bon:
            case SelectorKind::EmBon: {
                for (std::size_t i = 0; i < ref.size(); ++i) {
                    if (ref.probs()[i] > 0.0 && !r_hat->contains(ref.outcomes()[i])) {
                        throw unknown_outcome_error("selector: outcome " +
                                                    std::to_string(ref.outcomes()[i]) +
                                                    " missing from reward table");
                    }
                }
                ref_sampler_.emplace(ref);
                k_ = spec_.kind == SelectorKind::Bon ? 1 : spec_.em_bon_k();
                break;
            }
            case SelectorKind::TopQuantile: {
                ranks_.emplace(ref, *r_hat);
                // Per-class member cumulative masses for the within-class draw.
                member_cum_.resize(ranks_->num_classes());
                for (std::size_t c = 0; c < ranks_->num_classes(); ++c) {
                    const auto [lo, hi] = ranks_->member_range(c);
                    double acc = 0.0;
                    for (std::size_t kk = lo; kk < hi; ++kk) {
                        acc += ref.probs()[ranks_->member(kk)];
                        member_cum_[c].push_back(acc);
                    }
                }
                break;
            }
            case SelectorKind::ChiBon: {
                policy_ = chi_bon_policy(ref, *r_hat, spec_.beta).dist;
                policy_sampler_.emplace(*policy_);
                break;
            }
            case SelectorKind::Rejection: {
                if (target == nullptr) {
                    throw configuration_error("selector 'rejection': requires a target policy");
                }
                const DensityRatio dr = density_ratio(*target, ref);
                accept_.resize(ref.size());
                for (std::size_t i = 0; i < ref.size(); ++i) {
                    accept_[i] = std::min(dr.ratios[i] / spec_.m, 1.0);
                }
                ref_sampler_.emplace(ref);
                break;
            }
        }
    }

    SelectorDraw draw(Rng& rng) const {
        switch (spec_.kind) {
            case SelectorKind::Bon:
            case SelectorKind::EmBon: {
                scratch_.clear();
                for (std::int64_t i = 0; i < spec_.n; ++i) {
                    const std::size_t idx = ref_sampler_->draw_index(rng);
                    scratch_.push_back(Candidate{r_hat_->value(ref_->outcomes()[idx]),
                                                 rng.next_unit(), ref_->outcomes()[idx]});
                }

                auto higher = [](const Candidate& a, const Candidate& b) {
                    if (a.value != b.value) return a.value > b.value;
                    return a.v > b.v;
                };
                const std::size_t k = static_cast<std::size_t>(k_);
                if (k < scratch_.size()) {
                    std::nth_element(scratch_.begin(), scratch_.begin() + (k - 1), scratch_.end(),
                                     higher);
                }
                const std::size_t pick = static_cast<std::size_t>(
                    rng.next_below(std::min(k, scratch_.size())));
                return SelectorDraw{scratch_[pick].outcome, scratch_[pick].v};
            }
            case SelectorKind::TopQuantile: {
                const double t = 1.0 - 1.0 / spec_.m;
                const double u = t + (1.0 - t) * rng.next_unit();
                // Class containing rank u.
                const auto& below = ranks_->below();
                std::size_t c = static_cast<std::size_t>(
                    std::upper_bound(below.begin(), below.end(), u) - below.begin());
                c = (c == 0) ? 0 : c - 1;
                const double v = (u - below[c]) / ranks_->mass()[c];
                // Outcome within the class, independent of the rank position.
                const auto& cum = member_cum_[c];
                const double u2 = rng.next_unit() * cum.back();
                const std::size_t k = static_cast<std::size_t>(
                    std::upper_bound(cum.begin(), cum.end(), u2) - cum.begin());
                const auto [lo, hi] = ranks_->member_range(c);
                const std::size_t i = ranks_->member(lo + std::min(k, hi - lo - 1));
                return SelectorDraw{ref_->outcomes()[i], std::min(v, 1.0)};
            }
            case SelectorKind::ChiBon: {
                const OutcomeId y = policy_sampler_->draw(rng);
                return SelectorDraw{y, rng.next_unit()};
            }
            case SelectorKind::Rejection: {
                std::size_t first = 0;
                for (std::int64_t i = 0; i < spec_.n; ++i) {
                    const std::size_t idx = ref_sampler_->draw_index(rng);
                    if (i == 0) first = idx;
                    if (rng.next_unit() < accept_[idx]) {
                        return SelectorDraw{ref_->outcomes()[idx], rng.next_unit()};
                    }
                }
                return SelectorDraw{ref_->outcomes()[first], rng.next_unit()};
            }
        }
        throw configuration_error("SelectorSampler: unreachable");
    }

private:
    struct Candidate {
        double value;
        double v;
        OutcomeId outcome;
    };

    SelectorSpec spec_;
    const FiniteDist* ref_;
    const RewardModel* r_hat_;
    std::optional<DistSampler> ref_sampler_;
    std::optional<RankedClasses> ranks_;
    std::vector<std::vector<double>> member_cum_;
    std::optional<FiniteDist> policy_;
    std::optional<DistSampler> policy_sampler_;
    std::vector<double> accept_;
    std::int64_t k_ = 1;
    mutable std::vector<Candidate> scratch_;
};

inline OutcomeId bon_select(const FiniteDist& ref, const RewardModel& r_hat, std::int64_t n,
                            Rng& rng) {
    SelectorSampler s(SelectorSpec::bon(n), ref, &r_hat);
    return s.draw(rng).outcome;
}

inline OutcomeId em_bon_select(const FiniteDist& ref, const RewardModel& r_hat, double m,
                               std::int64_t n, Rng& rng) {
    SelectorSampler s(SelectorSpec::em_bon(m, n), ref, &r_hat);
    return s.draw(rng).outcome;
}

inline OutcomeId rejection_select(const FiniteDist& ref, const FiniteDist& target, double m,
                                  std::int64_t n, Rng& rng) {
    SelectorSampler s(SelectorSpec::rejection(m, n), ref, nullptr, &target);
    return s.draw(rng).outcome;
}

// --------------------------- spec string form -------------------------------

inline std::string SelectorSpec::to_string() const {
    switch (kind) {
        case SelectorKind::Bon: return "bon:n=" + std::to_string(n);
        case SelectorKind::EmBon: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "em_bon:m=%.17g,n=%lld", m, static_cast<long long>(n));
            return buf;
        }
        case SelectorKind::ChiBon: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "chi_bon:beta=%.17g", beta);
            return buf;
        }
        case SelectorKind::Rejection: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "rejection:m=%.17g,n=%lld", m, static_cast<long long>(n));
            return buf;
        }
        case SelectorKind::TopQuantile: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "top_quantile:m=%.17g", m);
            return buf;
        }
    }
    return "?";
}

inline SelectorSpec SelectorSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    SelectorSpec spec;
    if (name == "bon") spec.kind = SelectorKind::Bon;
    else if (name == "em_bon") spec.kind = SelectorKind::EmBon;
    else if (name == "chi_bon") spec.kind = SelectorKind::ChiBon;
    else if (name == "rejection") spec.kind = SelectorKind::Rejection;
    else if (name == "top_quantile") spec.kind = SelectorKind::TopQuantile;
    else throw configuration_error("selector: unknown kind '" + name + "'");

    bool saw_m = false, saw_n = false, saw_beta = false;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            const std::string kv = rest.substr(pos, comma - pos);
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw configuration_error("selector '" + name + "': malformed field '" + kv + "'");
            }
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            try {
                std::size_t used = 0;
                if (key == "m") { spec.m = std::stod(val, &used); saw_m = true; }
                else if (key == "n") { spec.n = std::stoll(val, &used); saw_n = true; }
                else if (key == "beta") { spec.beta = std::stod(val, &used); saw_beta = true; }
                else throw configuration_error("selector '" + name + "': unknown field '" + key + "'");
                if (used != val.size()) {
                    throw configuration_error("selector '" + name + "': field " + key +
                                              " has trailing characters in '" + val + "'");
                }
            } catch (const std::invalid_argument&) {
                throw configuration_error("selector '" + name + "': field " + key +
                                          " is not a number: '" + val + "'");
            } catch (const std::out_of_range&) {
                throw configuration_error("selector '" + name + "': field " + key +
                                          " is out of range: '" + val + "'");
            }
            pos = comma + 1;
        }
    }
    auto require = [&](bool saw, const char* field) {
        if (!saw) {
            throw configuration_error("selector '" + name + "': missing field " +
                                      std::string(field));
        }
    };
    switch (spec.kind) {
        case SelectorKind::Bon: require(saw_n, "n"); break;
        case SelectorKind::EmBon: require(saw_m, "m"); require(saw_n, "n"); break;
        case SelectorKind::ChiBon: require(saw_beta, "beta"); break;
        case SelectorKind::Rejection: require(saw_m, "m"); require(saw_n, "n"); break;
        case SelectorKind::TopQuantile: require(saw_m, "m"); break;
    }
    spec.validate();
    return spec;
}

} // namespace bonlab
