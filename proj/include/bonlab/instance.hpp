#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bonlab/dist.hpp"
#include "bonlab/divergence.hpp"
#include "bonlab/errors.hpp"
#include "bonlab/reward.hpp"
#include "bonlab/selector.hpp"
#include "bonlab/winrate.hpp"

namespace bonlab {

enum class TruthKind { Exact, LowerBound, UpperBound };

struct Truth {
    double value = 0.0;
    TruthKind kind = TruthKind::Exact;
};

// A bundled problem: reference policy, authored reward pair, optional
// benchmark comparator and comparison measure, plus the closed-form
// quantities the construction guarantees. Every attached exact truth must
// be reproduced by the generic evaluators within 1e-9 (self_check).
struct Instance {
    std::string name;
    FiniteDist ref;
    RewardModel r_hat;
    RewardModel r_star;
    std::optional<FiniteDist> comparator_star;
    std::optional<FiniteDist> q;
    double q_l_bound = 0.0;
    std::map<std::string, Truth> truths;
    std::map<std::string, double> params;

    Instance(std::string name_, FiniteDist ref_, RewardModel r_hat_, RewardModel r_star_)
        : name(std::move(name_)), ref(std::move(ref_)), r_hat(std::move(r_hat_)),
          r_star(std::move(r_star_)) {}

    double param(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end()) {
            throw validation_error("instance '" + name + "': missing param '" + key + "'");
        }
        return it->second;
    }

    const FiniteDist& comparator() const {
        if (!comparator_star) {
            throw validation_error("instance '" + name + "': no comparator policy attached");
        }
        return *comparator_star;
    }
};

namespace detail {

inline void require(bool ok, const std::string& inequality) {
    if (!ok) throw validation_error("instance parameters violate: " + inequality);
}

// grid * fraction must be an exact atom count; generators reject rather
// than round so the attached truths stay exact.
inline std::size_t exact_atom_count(double fraction, std::size_t grid, const char* what) {
    const double x = fraction * static_cast<double>(grid);
    const double r = std::round(x);
    if (std::fabs(x - r) > 1e-9 || r < 1.0 || r > static_cast<double>(grid)) {
        throw validation_error(std::string("instance: ") + what +
                               " is not exactly representable on the requested grid");
    }
    return static_cast<std::size_t>(r);
}

} // namespace detail

// Three-outcome instance with a spuriously top-scored spike P of tiny mass,
// a genuinely best outcome C just below it in score, and a large background
// B: the score-proportional tilt overweights P while the top-quantile
// policy only pays the unavoidable contamination.
inline Instance make_separation(double c, double k, double delta, double epsilon) {
    detail::require(c > 1.0, "c > 1");
    detail::require(k >= std::sqrt(2.0 * c), "k >= sqrt(2c)");
    detail::require(delta > 0.0 && delta < 1.0, "0 < delta < 1");
    detail::require(delta >= 1.0 - 1.0 / (2.0 * c), "delta >= 1 - 1/(2c)");
    detail::require(epsilon > 0.0, "epsilon > 0");
    detail::require(epsilon <= 1.0 / (4.0 * k * k), "epsilon <= 1/(4 k^2)");
    const double alpha = k * std::sqrt(epsilon);
    const double mu = alpha * (1.0 - delta) + epsilon * delta;

    FiniteDist ref({0, 1, 2}, {1.0 - alpha, alpha - epsilon, epsilon});
    RewardModel r_hat = RewardModel::from_dense({0.0, 1.0 - delta, 1.0}, 1.0);
    RewardModel r_star = RewardModel::from_dense({0.5, 1.0, 0.0}, 1.0);

    Instance inst("separation", std::move(ref), std::move(r_hat), std::move(r_star));
    inst.comparator_star = FiniteDist({0, 1, 2}, {0.0, 1.0, 0.0});
    inst.params = {{"c", c},       {"k", k},         {"delta", delta}, {"epsilon", epsilon},
                   {"alpha", alpha}, {"mu", mu},     {"m_quantile", 1.0 / alpha}};
    inst.truths["eps_pw"] = {2.0 * epsilon * (1.0 - epsilon), TruthKind::Exact};
    inst.truths["mu"] = {mu, TruthKind::Exact};
    inst.truths["winrate_comparator"] = {1.0 - (alpha - epsilon) / 2.0, TruthKind::Exact};
    inst.truths["reg_em"] = {(1.0 - alpha / 2.0) * epsilon / alpha, TruthKind::Exact};
    inst.truths["reg_chi_at_mu"] = {(1.0 - alpha / 2.0) * epsilon / mu, TruthKind::Exact};
    inst.truths["reg_chi_regime1"] = {1.0 - alpha / 2.0, TruthKind::Exact};
    inst.truths["reg_ref"] = {(1.0 - alpha + epsilon) / 2.0, TruthKind::Exact};
    inst.truths["ratio_at_mu"] = {alpha / mu, TruthKind::Exact};
    inst.truths["chi_mass_c_at_mu"] =
        {(1.0 - epsilon / alpha) * (1.0 - epsilon * delta / mu), TruthKind::Exact};
    inst.truths["chi_mass_p_at_mu"] = {epsilon / mu, TruthKind::Exact};
    return inst;
}

// Discretized uniform reference with an indistinguishable top set I of mass
// 1/m and r_hat = r_star = indicator of I: finding I at all requires on the
// order of m draws, though the comparator is ratio-capped at m.
inline Instance make_computational_lb(double m, std::size_t grid) {
    detail::require(m >= 2.0, "m >= 2");
    detail::require(static_cast<double>(grid) >= 2.0 * m, "grid >= 2m");
    const std::size_t top = detail::exact_atom_count(1.0 / m, grid, "mass 1/m");

    FiniteDist ref = FiniteDist::uniform_grid(grid);
    std::vector<double> ind(grid, 0.0);
    for (std::size_t i = grid - top; i < grid; ++i) ind[i] = 1.0;
    RewardModel r_hat = RewardModel::from_dense(ind, 1.0);
    RewardModel r_star = r_hat;

    Instance inst("computational_lb", std::move(ref), std::move(r_hat), std::move(r_star));
    std::set<OutcomeId> top_ids;
    for (std::size_t i = grid - top; i < grid; ++i) top_ids.insert(static_cast<OutcomeId>(i));
    inst.comparator_star = conditional(inst.ref, top_ids);
    inst.params = {{"m", m}, {"grid", static_cast<double>(grid)},
                   {"top_count", static_cast<double>(top)}};
    inst.truths["winrate_comparator"] = {1.0 - 1.0 / (2.0 * m), TruthKind::Exact};
    inst.truths["em_comparator"] = {0.0, TruthKind::Exact};
    inst.truths["eps_pw"] = {0.0, TruthKind::Exact};
    inst.truths["reg_bon_n20"] = {0.5 * std::pow(1.0 - 1.0 / m, 20.0), TruthKind::Exact};
    return inst;
}

// Constant learned score with a hidden valuable set A of mass
// eps' = min(eps, 1/m_star); the comparator up-weights A by m_star. No
// score-based selector can find A, so its regret tracks the excess mass.
inline Instance make_skyline(double m_star, double epsilon, std::size_t grid) {
    detail::require(m_star >= 4.0, "m_star >= 4");
    detail::require(epsilon > 0.0 && epsilon < 0.5, "0 < epsilon < 1/2");
    const double eps_prime = std::min(epsilon, 1.0 / m_star);
    const std::size_t a_count = detail::exact_atom_count(eps_prime, grid, "mass eps'");
    const double c_out = (1.0 - m_star * eps_prime) / (1.0 - eps_prime);

    FiniteDist ref = FiniteDist::uniform_grid(grid);
    std::vector<double> r_star_vals(grid, 0.0);
    for (std::size_t i = 0; i < a_count; ++i) r_star_vals[i] = 1.0;
    RewardModel r_star = RewardModel::from_dense(r_star_vals, 1.0);
    RewardModel r_hat = RewardModel::from_dense(std::vector<double>(grid, 0.0), 1.0);

    std::vector<double> comp(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        comp[i] = (i < a_count ? m_star : c_out) / static_cast<double>(grid);
    }
    Instance inst("skyline", std::move(ref), std::move(r_hat), std::move(r_star));
    inst.comparator_star = FiniteDist(inst.ref.outcomes(), std::move(comp));
    inst.params = {{"m_star", m_star}, {"epsilon", epsilon}, {"eps_prime", eps_prime},
                   {"grid", static_cast<double>(grid)}, {"a_count", static_cast<double>(a_count)},
                   {"c_out", c_out}};
    inst.truths["eps_pw"] = {eps_prime * (1.0 - eps_prime), TruthKind::Exact};
    inst.truths["pi_star_mass_a"] = {m_star * eps_prime, TruthKind::Exact};
    inst.truths["em_at_2"] = {(m_star - 2.0) * eps_prime, TruthKind::Exact};
    inst.truths["coverage_at_2"] = {m_star * eps_prime, TruthKind::Exact};
    inst.truths["tv_at_2"] = {(m_star - 2.0) * eps_prime, TruthKind::Exact};
    inst.truths["reg_ref"] = {0.5 * eps_prime * (m_star - 1.0), TruthKind::Exact};
    return inst;
}

// A top-score plateau S of mass 1/m hides a poisoned subset P of mass eps;
// the true value sits on C = S \ P with a magnitude chosen so the
// expected-reward regret floor is gamma while both error metrics stay small.
inline Instance make_impossibility(double m, double epsilon, double gamma, std::size_t grid) {
    detail::require(m >= 2.0, "m >= 2");
    detail::require(epsilon > 0.0 && epsilon < 1.0 / m, "0 < epsilon < 1/m");
    detail::require(gamma > 0.0, "gamma > 0");
    const std::size_t s_count = detail::exact_atom_count(1.0 / m, grid, "mass 1/m");
    const std::size_t p_count = detail::exact_atom_count(epsilon, grid, "mass epsilon");
    detail::require(p_count < s_count, "epsilon < 1/m (atom counts)");
    const std::size_t b_count = grid - s_count;
    const double r_max_hat = 1.0;
    const double c_scale = gamma / (r_max_hat * epsilon * m);

    FiniteDist ref = FiniteDist::uniform_grid(grid);
    std::vector<double> hat_vals(grid, 0.0);
    std::vector<double> star_vals(grid, 0.0);
    for (std::size_t i = b_count; i < grid; ++i) hat_vals[i] = r_max_hat;
    for (std::size_t i = b_count + p_count; i < grid; ++i) star_vals[i] = c_scale * r_max_hat;
    RewardModel r_hat = RewardModel::from_dense(hat_vals, r_max_hat);
    RewardModel r_star =
        RewardModel::from_dense(star_vals, std::max(c_scale * r_max_hat, r_max_hat));

    Instance inst("impossibility", std::move(ref), std::move(r_hat), std::move(r_star));
    std::set<OutcomeId> c_ids;
    for (std::size_t i = b_count + p_count; i < grid; ++i) c_ids.insert(static_cast<OutcomeId>(i));
    inst.comparator_star = conditional(inst.ref, c_ids);
    inst.params = {{"m", m}, {"epsilon", epsilon}, {"gamma", gamma},
                   {"grid", static_cast<double>(grid)}, {"s_count", static_cast<double>(s_count)},
                   {"p_count", static_cast<double>(p_count)}};
    inst.truths["em_at_m"] = {epsilon * m, TruthKind::Exact};
    inst.truths["eps_pw"] = {epsilon * (1.0 - epsilon), TruthKind::Exact};
    inst.truths["exp_reward_star"] = {gamma / (epsilon * m), TruthKind::Exact};
    inst.truths["exp_regret_unif_s"] = {gamma, TruthKind::Exact};
    return inst;
}

// r_hat = c * r_star: the pairwise error vanishes for every c > 0 while the
// squared error grows like (c-1)^2.
inline Instance make_scale_gap(double c, const FiniteDist& base, const RewardModel& r_star) {
    detail::require(c > 0.0, "c > 0");
    RewardModel r_hat = r_star.transformed([&](double v) { return c * v; }, c * r_star.r_max());
    const double second = second_moment(base, r_star);
    Instance inst("scale_gap", base, std::move(r_hat), r_star);
    inst.params = {{"c", c}};
    inst.truths["eps_pw"] = {0.0, TruthKind::Exact};
    inst.truths["mse"] = {(c - 1.0) * (c - 1.0) * second, TruthKind::Exact};
    return inst;
}

// A heavy atom H at the top plus a sliver of low scores; the learned score
// is the truth plus a +/-eps offset realized by splitting each low outcome
// into two halves (so the evaluators stay deterministic). The squared error
// is exactly eps^2 while the pairwise error stays bounded away from zero.
// Both tables carry a common +eps shift to keep all values nonnegative;
// every attached truth is invariant under that shift.
inline Instance make_mse_small_pw_large(double p, double r_max, double epsilon,
                                        std::size_t grid) {
    detail::require(p > 0.0 && p < 1.0, "0 < p < 1");
    detail::require(r_max > 0.0, "r_max > 0");
    detail::require(epsilon > 0.0 && epsilon <= r_max / 2.0, "0 < epsilon <= r_max/2");
    detail::require(grid >= 1, "grid >= 1");

    std::vector<OutcomeId> ids;
    std::vector<double> probs;
    std::vector<std::pair<OutcomeId, double>> star_kv;
    std::vector<std::pair<OutcomeId, double>> hat_kv;
    ids.push_back(0);
    probs.push_back(p);
    star_kv.push_back({0, r_max + epsilon});
    hat_kv.push_back({0, r_max + 2.0 * epsilon});
    const double low_mass = (1.0 - p) / (2.0 * static_cast<double>(grid));
    for (std::size_t i = 0; i < grid; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * (epsilon / 2.0) /
                         static_cast<double>(grid);
        const OutcomeId plus = static_cast<OutcomeId>(1 + 2 * i);
        const OutcomeId minus = plus + 1;
        ids.push_back(plus);
        ids.push_back(minus);
        probs.push_back(low_mass);
        probs.push_back(low_mass);
        star_kv.push_back({plus, u + epsilon});
        star_kv.push_back({minus, u + epsilon});
        hat_kv.push_back({plus, u + 2.0 * epsilon});
        hat_kv.push_back({minus, u});
    }
    RewardModel r_star(std::move(star_kv), r_max + epsilon);
    RewardModel r_hat(std::move(hat_kv), r_max + 2.0 * epsilon);
    Instance inst("mse_pw", FiniteDist(std::move(ids), std::move(probs)), std::move(r_hat),
                  std::move(r_star));
    inst.params = {{"p", p}, {"r_max", r_max}, {"epsilon", epsilon},
                   {"grid", static_cast<double>(grid)}};
    inst.truths["mse"] = {epsilon * epsilon, TruthKind::Exact};
    inst.truths["eps_pw_lb"] = {(1.0 - p) * (1.0 - p) / 4.0, TruthKind::LowerBound};
    inst.truths["var_rstar_lb"] =
        {p * (1.0 - p) * (r_max - epsilon / 4.0) * (r_max - epsilon / 4.0), TruthKind::LowerBound};
    return inst;
}

// Background / good region / spike on three atoms: the spike outscores the
// good region under r_hat but is worthless under r_star, so best-of-n
// regret dips and then climbs again as n grows.
inline Instance make_corrupted(double good_mass, double spike_mass) {
    detail::require(good_mass > 0.0, "good_mass > 0");
    detail::require(spike_mass > 0.0, "spike_mass > 0");
    detail::require(good_mass + spike_mass < 1.0, "good_mass + spike_mass < 1");
    const double bg = 1.0 - good_mass - spike_mass;

    FiniteDist ref({0, 1, 2}, {bg, good_mass, spike_mass});
    RewardModel r_hat = RewardModel::from_dense({0.0, 1.0, 2.0}, 2.0);
    RewardModel r_star = RewardModel::from_dense({0.0, 1.0, 0.0}, 1.0);
    Instance inst("corrupted", std::move(ref), std::move(r_hat), std::move(r_star));
    inst.comparator_star = FiniteDist({0, 1, 2}, {0.0, 1.0, 0.0});
    inst.params = {{"good_mass", good_mass}, {"spike_mass", spike_mass}};
    inst.truths["winrate_comparator"] = {1.0 - good_mass / 2.0, TruthKind::Exact};
    inst.truths["eps_pw"] =
        {spike_mass * bg + 2.0 * spike_mass * good_mass, TruthKind::Exact};
    inst.truths["reg_bon_n1"] = {(1.0 - good_mass) / 2.0, TruthKind::Exact};
    return inst;
}

// Fine uniform grid with strictly increasing r_hat = r_star and an exactly
// representable top-1/m quantile; optionally a comparison measure q whose
// density concentrates (with ratio exactly l) on a window around the
// quantile cutoff.
inline Instance make_smooth(double m, std::size_t grid, bool with_q = false, double l = 4.0,
                            std::size_t window = 64) {
    detail::require(m >= 2.0, "m >= 2");
    const std::size_t top = detail::exact_atom_count(1.0 / m, grid, "mass 1/m");
    FiniteDist ref = FiniteDist::uniform_grid(grid);
    std::vector<double> vals(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        vals[i] = static_cast<double>(i + 1) / static_cast<double>(grid);
    }
    RewardModel r_hat = RewardModel::from_dense(vals, 1.0);
    RewardModel r_star = r_hat;
    Instance inst(with_q ? "smooth_q" : "smooth", std::move(ref), std::move(r_hat),
                  std::move(r_star));
    inst.comparator_star = top_quantile_policy(inst.ref, inst.r_hat, m).dist;
    inst.params = {{"m", m}, {"grid", static_cast<double>(grid)}};
    inst.truths["winrate_comparator"] = {1.0 - 1.0 / (2.0 * m), TruthKind::Exact};
    inst.truths["eps_pw"] = {0.0, TruthKind::Exact};
    inst.truths["reg_top_quantile"] = {0.0, TruthKind::Exact};
    if (with_q) {
        const std::size_t cut = grid - top;
        detail::require(window >= 1 && 2 * window < grid, "1 <= window, 2*window < grid");
        const std::size_t lo = cut > window ? cut - window : 0;
        const std::size_t hi = std::min(grid, cut + window);
        const double win_mass = static_cast<double>(hi - lo) / static_cast<double>(grid);
        detail::require(l >= 1.0, "l >= 1");
        detail::require(l * win_mass < 1.0, "l * window mass < 1");
        const double off = (1.0 - l * win_mass) / (1.0 - win_mass);
        std::vector<double> qmass(grid);
        for (std::size_t i = 0; i < grid; ++i) {
            qmass[i] = ((i >= lo && i < hi) ? l : off) / static_cast<double>(grid);
        }
        inst.q = FiniteDist(inst.ref.outcomes(), std::move(qmass));
        inst.q_l_bound = l;
        inst.params["q_l"] = l;
        inst.params["q_window"] = static_cast<double>(window);
        inst.truths["l_bound"] = {l, TruthKind::Exact};
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Self-check: recompute every attached truth with the generic evaluators.
// ---------------------------------------------------------------------------

namespace detail {

inline double regret_of_policy(const Instance& inst, const FiniteDist& policy) {
    return win_rate_value(inst.comparator(), inst.r_star, inst.ref) -
           win_rate_value(policy, inst.r_star, inst.ref);
}

inline double evaluate_truth(const Instance& inst, const std::string& name) {
    if (name == "eps_pw" || name == "eps_pw_lb") {
        return pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
    }
    if (name == "mu") return expectation(inst.ref, inst.r_hat);
    if (name == "mse") return mse_error(inst.r_hat, inst.r_star, inst.ref);
    if (name == "winrate_comparator") {
        return win_rate_value(inst.comparator(), inst.r_star, inst.ref);
    }
    if (name == "reg_em") {
        return regret_of_policy(
            inst, top_quantile_policy(inst.ref, inst.r_hat, inst.param("m_quantile")).dist);
    }
    if (name == "reg_top_quantile") {
        return regret_of_policy(inst, top_quantile_policy(inst.ref, inst.r_hat, inst.param("m")).dist);
    }
    if (name == "reg_chi_at_mu") {
        const double mu = expectation(inst.ref, inst.r_hat);
        return regret_of_policy(inst, chi_bon_policy(inst.ref, inst.r_hat, mu).dist);
    }
    if (name == "reg_chi_regime1") {
        const double beta = inst.param("epsilon") * inst.param("delta");
        return regret_of_policy(inst, chi_bon_policy(inst.ref, inst.r_hat, beta).dist);
    }
    if (name == "reg_ref") return regret_of_policy(inst, inst.ref);
    if (name == "ratio_at_mu") {
        const double mu = expectation(inst.ref, inst.r_hat);
        const double chi = regret_of_policy(inst, chi_bon_policy(inst.ref, inst.r_hat, mu).dist);
        const double em = regret_of_policy(
            inst, top_quantile_policy(inst.ref, inst.r_hat, inst.param("m_quantile")).dist);
        return chi / em;
    }
    if (name == "chi_mass_c_at_mu" || name == "chi_mass_p_at_mu") {
        const double mu = expectation(inst.ref, inst.r_hat);
        const FiniteDist pol = chi_bon_policy(inst.ref, inst.r_hat, mu).dist;
        return pol.prob_of(name == "chi_mass_c_at_mu" ? 1 : 2);
    }
    if (name == "em_comparator" || name == "em_at_m") {
        return excess_mass(inst.comparator(), inst.ref, inst.param("m"));
    }
    if (name == "em_at_2") return excess_mass(inst.comparator(), inst.ref, 2.0);
    if (name == "coverage_at_2") return coverage(inst.comparator(), inst.ref, 2.0);
    if (name == "tv_at_2") return tv_projection(inst.comparator(), inst.ref, 2.0).tv_to_target;
    if (name == "pi_star_mass_a") {
        const auto a_count = static_cast<std::size_t>(inst.param("a_count"));
        StableSum s;
        const FiniteDist& comp = inst.comparator();
        for (std::size_t i = 0; i < a_count && i < comp.size(); ++i) s.add(comp.probs()[i]);
        return s.value();
    }
    if (name == "reg_bon_n1") {
        return regret_of_policy(inst, bon_induced_exact(inst.ref, inst.r_hat, 1).dist);
    }
    if (name == "reg_bon_n20") {
        return regret_of_policy(inst, bon_induced_exact(inst.ref, inst.r_hat, 20).dist);
    }
    if (name == "exp_reward_star") return expectation(inst.comparator(), inst.r_star);
    if (name == "exp_regret_unif_s") {
        const auto grid = static_cast<std::size_t>(inst.param("grid"));
        const auto s_count = static_cast<std::size_t>(inst.param("s_count"));
        std::set<OutcomeId> s_ids;
        for (std::size_t i = grid - s_count; i < grid; ++i) s_ids.insert(static_cast<OutcomeId>(i));
        const FiniteDist unif_s = conditional(inst.ref, s_ids);
        return expectation(inst.comparator(), inst.r_star) - expectation(unif_s, inst.r_star);
    }
    if (name == "var_rstar_lb") return variance(inst.ref, inst.r_star);
    if (name == "l_bound") {
        if (!inst.q) throw validation_error("l_bound: instance has no q");
        return max_density_ratio(*inst.q, inst.ref);
    }
    throw validation_error("self_check: no evaluator for truth '" + name + "'");
}

} // namespace detail

struct TruthCheck {
    std::string name;
    double expected = 0.0;
    double observed = 0.0;
    TruthKind kind = TruthKind::Exact;
    bool pass = false;
};

struct SelfCheckReport {
    std::vector<TruthCheck> entries;
    double max_abs_dev = 0.0;
    bool pass = true;
    std::string first_failure;
};

inline SelfCheckReport self_check(const Instance& inst, double exact_tol = 1e-9) {
    SelfCheckReport report;
    for (const auto& [name, truth] : inst.truths) {
        TruthCheck c;
        c.name = name;
        c.expected = truth.value;
        c.kind = truth.kind;
        c.observed = detail::evaluate_truth(inst, name);
        switch (truth.kind) {
            case TruthKind::Exact:
                c.pass = std::fabs(c.observed - c.expected) <= exact_tol;
                report.max_abs_dev = std::max(report.max_abs_dev,
                                              std::fabs(c.observed - c.expected));
                break;
            case TruthKind::LowerBound:
                c.pass = c.observed >= c.expected - 1e-12;
                break;
            case TruthKind::UpperBound:
                c.pass = c.observed <= c.expected + 1e-12;
                break;
        }
        if (!c.pass && report.pass) {
            report.pass = false;
            report.first_failure = name;
        }
        report.entries.push_back(std::move(c));
    }
    return report;
}

// Default instance of each shipped family, keyed by name.
inline std::vector<Instance> catalog() {
    std::vector<Instance> out;
    out.push_back(make_separation(2.0, 2.0, 0.75, 0.01));
    {
        Instance strong = make_separation(4.0, 3.0, 0.875, 0.005);
        strong.name = "separation_strong";
        out.push_back(std::move(strong));
    }
    out.push_back(make_computational_lb(10.0, 100));
    out.push_back(make_skyline(8.0, 0.05, 100));
    out.push_back(make_impossibility(5.0, 0.05, 1.0, 100));
    out.push_back(make_scale_gap(3.0, FiniteDist({0, 1, 2}, {0.5, 0.3, 0.2}),
                                 RewardModel::from_dense({0.2, 0.5, 1.0}, 1.0)));
    out.push_back(make_mse_small_pw_large(0.5, 1.0, 0.1, 8));
    out.push_back(make_corrupted(0.3, 0.01));
    out.push_back(make_smooth(4.0, 4096));
    out.push_back(make_smooth(4.0, 4096, true, 4.0, 64));
    return out;
}

inline Instance catalog_instance(const std::string& name) {
    for (auto& inst : catalog()) {
        if (inst.name == name) return inst;
    }
    throw configuration_error("catalog: no instance named '" + name + "'");
}

} // namespace bonlab
