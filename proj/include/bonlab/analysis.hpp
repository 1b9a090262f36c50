#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bonlab/divergence.hpp"
#include "bonlab/instance.hpp"
#include "bonlab/mc.hpp"
#include "bonlab/selector.hpp"
#include "bonlab/winrate.hpp"

namespace bonlab {

struct RegretReport {
    double regret = 0.0;
    double comparator_winrate = 0.0;
    double policy_winrate = 0.0;
    EvalMethod method = EvalMethod::Exact;
    std::optional<std::array<double, 3>> decomposition;
    std::optional<MCEstimate> estimate;
};

struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    std::map<std::string, double> params;
};

// Exact output law of a selector on an instance. Rejection selectors
// approximate the instance comparator, so one must be attached.
inline InducedPolicy induced_policy_for(const SelectorSpec& spec, const Instance& inst) {
    switch (spec.kind) {
        case SelectorKind::Bon:
            return bon_induced_exact(inst.ref, inst.r_hat, spec.n);
        case SelectorKind::EmBon:
            return em_bon_induced_exact(inst.ref, inst.r_hat, spec.m, spec.n);
        case SelectorKind::TopQuantile:
            return top_quantile_policy(inst.ref, inst.r_hat, spec.m);
        case SelectorKind::ChiBon:
            return chi_bon_policy(inst.ref, inst.r_hat, spec.beta);
        case SelectorKind::Rejection:
            if (!inst.comparator_star) {
                throw configuration_error("rejection selector needs an instance comparator");
            }
            return rejection_induced_exact(inst.ref, *inst.comparator_star, spec.m, spec.n);
    }
    throw configuration_error("induced_policy_for: unreachable");
}

enum class RewardChoice { RHat, RStar };

inline const RewardModel& choose_reward(const Instance& inst, RewardChoice which) {
    return which == RewardChoice::RHat ? inst.r_hat : inst.r_star;
}

// Monte-Carlo win-rate of a selector on an instance. Under the selection
// score the randomized-rank convention applies (carried tie V); under the
// true reward the plain half-tie functional of the marginal law is
// estimated.
inline WinRateReport win_rate_mc(const SelectorSpec& spec, const Instance& inst,
                                 RewardChoice which, const FiniteDist& comparator,
                                 std::uint64_t trials, const Rng& rng, double confidence,
                                 unsigned threads = 0) {
    if (spec.kind == SelectorKind::Rejection && !inst.comparator_star) {
        throw configuration_error("win_rate_mc: rejection selector needs an instance comparator");
    }
    const FiniteDist* target =
        spec.kind == SelectorKind::Rejection ? &inst.comparator() : nullptr;
    MCEstimate est;
    if (which == RewardChoice::RHat) {
        est = rank_win_rate_mc(spec, inst.ref, inst.r_hat, comparator, trials, rng, confidence,
                               target, threads);
    } else {
        est = plain_win_rate_mc(spec, inst.ref, &inst.r_hat, inst.r_star, comparator, trials, rng,
                                confidence, target, threads);
    }
    WinRateReport report{est.mean, comparator, EvalMethod::MonteCarlo, est};
    return report;
}

// True-reward regret of a selector against the instance comparator:
// R(comparator) - R(selector output law), both against the reference.
inline RegretReport regret(const Instance& inst, const SelectorSpec& spec,
                           EvalMethod method = EvalMethod::Exact, std::uint64_t trials = 1000000,
                           const Rng& rng = Rng(1), double confidence = 0.99) {
    RegretReport report;
    report.comparator_winrate = win_rate_value(inst.comparator(), inst.r_star, inst.ref);
    report.method = method;
    if (method == EvalMethod::Exact) {
        const InducedPolicy pol = induced_policy_for(spec, inst);
        report.policy_winrate = win_rate_value(pol.dist, inst.r_star, inst.ref);
    } else {
        const WinRateReport wr =
            win_rate_mc(spec, inst, RewardChoice::RStar, inst.ref, trials, rng, confidence);
        report.policy_winrate = wr.value;
        report.estimate = wr.estimate;
    }
    report.regret = report.comparator_winrate - report.policy_winrate;
    return report;
}

// Three-term split of the regret through the ratio-capped projection of the
// comparator: reward mismatch above the cap, selection shortfall under the
// learned score, and reward mismatch on the selector's own law. The terms
// telescope to the total regret identically.
inline RegretReport regret_decomposition(const Instance& inst, const SelectorSpec& spec,
                                         double m) {
    const FiniteDist capped = tv_projection(inst.comparator(), inst.ref, m).projected;
    const InducedPolicy pol = induced_policy_for(spec, inst);
    const double r_star_comp = win_rate_value(inst.comparator(), inst.r_star, inst.ref);
    const double r_hat_capped = win_rate_value(capped, inst.r_hat, inst.ref);
    const double r_hat_pol = win_rate_value(pol.dist, inst.r_hat, inst.ref);
    const double r_star_pol = win_rate_value(pol.dist, inst.r_star, inst.ref);
    RegretReport report;
    report.comparator_winrate = r_star_comp;
    report.policy_winrate = r_star_pol;
    report.regret = r_star_comp - r_star_pol;
    report.decomposition = {{r_star_comp - r_hat_capped, r_hat_capped - r_hat_pol,
                             r_hat_pol - r_star_pol}};
    return report;
}

namespace detail {

inline double clamp_eps(double eps) {
    return std::min(std::max(eps, 0.0), 1.0 - 1e-12);
}

// Bracket of the best-of-n bound: n * eps * log(1/eps) plus the excess
// mass at the tuned cap n / log(1/eps). As eps -> 0 the tuned cap tends to
// 0 and the bracket degenerates to the excess mass at cap 0, which is
// exactly 1; that limit is used verbatim when eps == 0.
inline double bon_bound_bracket(const Instance& inst, std::int64_t n, double eps, double l_mult) {
    eps = clamp_eps(eps);
    if (eps == 0.0) return excess_mass(inst.comparator(), inst.ref, 0.0);
    const double log_term = std::log(1.0 / eps);
    const double cap = static_cast<double>(n) / log_term;
    return l_mult * static_cast<double>(n) * eps * log_term +
           excess_mass(inst.comparator(), inst.ref, cap);
}

inline double em_bon_bound_bracket(const Instance& inst, double m, std::int64_t n, double eps,
                                   double l_mult, bool sqrt_rate) {
    const double tail = sqrt_rate ? std::sqrt(m / static_cast<double>(n))
                                  : 1.0 / static_cast<double>(n);
    return l_mult * excess_mass(inst.comparator(), inst.ref, m) + l_mult * m * eps + tail;
}

} // namespace detail

// Best-of-n regret bound check with the multiplicative constant exposed.
// eps_pw may be supplied to avoid recomputing the quadratic double sum in
// grid sweeps.
inline BoundCheck check_bon_regret_bound(const Instance& inst, std::int64_t n, double constant = 8.0,
                              std::optional<double> eps_pw = std::nullopt) {
    const double eps =
        eps_pw ? *eps_pw : pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
    BoundCheck c;
    c.name = "bon_regret_bound";
    c.lhs = regret(inst, SelectorSpec::bon(n)).regret;
    c.rhs = constant * detail::bon_bound_bracket(inst, n, eps, 1.0);
    c.holds = c.lhs <= c.rhs + 1e-9;
    c.params = {{"n", static_cast<double>(n)}, {"constant", constant}, {"eps_pw", eps}};
    return c;
}

// Regularized-selector regret bound check (cap decoupled from batch size).
inline BoundCheck check_em_bon_regret_bound(const Instance& inst, double m, std::int64_t n,
                              double constant = 8.0,
                              std::optional<double> eps_pw = std::nullopt) {
    const double eps =
        eps_pw ? *eps_pw : pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
    BoundCheck c;
    c.name = "em_bon_regret_bound";
    c.lhs = regret(inst, SelectorSpec::em_bon(m, n)).regret;
    c.rhs = constant * detail::em_bon_bound_bracket(inst, m, n, eps, 1.0, false);
    c.holds = c.lhs <= c.rhs + 1e-9;
    c.params = {{"m", m}, {"n", static_cast<double>(n)}, {"constant", constant}, {"eps_pw", eps}};
    return c;
}

// Same bounds with an arbitrary comparison measure q (certified pointwise
// ratio bound l): the mismatch terms scale by l and the regularized
// selector pays a sqrt(m/n) estimation term.
inline BoundCheck check_general_q(const Instance& inst, const SelectorSpec& spec,
                                  double constant = 8.0,
                                  std::optional<double> eps_pw = std::nullopt) {
    if (!inst.q) throw configuration_error("check_general_q: instance has no comparison measure q");
    const double l = inst.q_l_bound > 0.0 ? inst.q_l_bound : max_density_ratio(*inst.q, inst.ref);
    const double eps =
        eps_pw ? *eps_pw : pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
    const InducedPolicy pol = induced_policy_for(spec, inst);
    BoundCheck c;
    c.lhs = win_rate_value(inst.comparator(), inst.r_star, *inst.q) -
            win_rate_value(pol.dist, inst.r_star, *inst.q);
    if (spec.kind == SelectorKind::Bon) {
        c.name = "bon_regret_bound_q";
        c.rhs = constant * detail::bon_bound_bracket(inst, spec.n, eps, l);
        c.params = {{"n", static_cast<double>(spec.n)}};
    } else if (spec.kind == SelectorKind::EmBon) {
        c.name = "em_bon_regret_bound_q";
        c.rhs = constant * detail::em_bon_bound_bracket(inst, spec.m, spec.n, eps, l, true);
        c.params = {{"m", spec.m}, {"n", static_cast<double>(spec.n)}};
    } else {
        throw configuration_error("check_general_q: selector must be bon or em_bon");
    }
    c.params["constant"] = constant;
    c.params["l"] = l;
    c.params["eps_pw"] = eps;
    c.holds = c.lhs <= c.rhs + 1e-9;
    return c;
}

// Smallest constant that makes the best-of-n bound hold over an n-grid.
inline double bon_bound_min_constant(const Instance& inst, const std::vector<std::int64_t>& n_grid) {
    const double eps = pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
    double worst = 0.0;
    for (std::int64_t n : n_grid) {
        const double lhs = regret(inst, SelectorSpec::bon(n)).regret;
        const double bracket = detail::bon_bound_bracket(inst, n, eps, 1.0);
        if (bracket > 0.0) worst = std::max(worst, lhs / bracket);
    }
    return worst;
}

inline double em_bon_bound_min_constant(const Instance& inst, const std::vector<double>& m_grid,
                                 const std::vector<std::int64_t>& n_grid) {
    const double eps = pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
    double worst = 0.0;
    for (double m : m_grid) {
        for (std::int64_t n : n_grid) {
            const double lhs = regret(inst, SelectorSpec::em_bon(m, n)).regret;
            const double bracket = detail::em_bon_bound_bracket(inst, m, n, eps, 1.0, false);
            if (bracket > 0.0) worst = std::max(worst, lhs / bracket);
        }
    }
    return worst;
}

// ------------------------------- sweeps -------------------------------------

struct CurveRow {
    std::int64_t n = 0;
    double bon_regret = 0.0;
    double em_bon_regret = 0.0;
};

// Exact (n, regret) curves for best-of-n and the capped selector at fixed m.
inline std::vector<CurveRow> reward_hacking_curve(const Instance& inst,
                                                  const std::vector<std::int64_t>& n_grid,
                                                  double m) {
    std::vector<CurveRow> rows;
    rows.reserve(n_grid.size());
    for (std::int64_t n : n_grid) {
        CurveRow row;
        row.n = n;
        row.bon_regret = regret(inst, SelectorSpec::bon(n)).regret;
        row.em_bon_regret = regret(inst, SelectorSpec::em_bon(m, n)).regret;
        rows.push_back(row);
    }
    return rows;
}

struct SweepPoint {
    double beta = 0.0; // +inf encodes the limiting reference policy
    int regime = 0;    // 1, 2, 3; 0 for the limit row
    double chi_regret = 0.0;
};

struct SeparationSweepReport {
    std::vector<SweepPoint> points;
    double em_regret = 0.0;
    double min_chi_regret = 0.0;
    double ratio = 0.0;
};

// Closed-form score-tilt regret on the separation construction, by regime.
// Serves as the oracle the generic solver is cross-checked against.
inline double separation_regime_regret(const Instance& inst, double beta) {
    const double alpha = inst.param("alpha");
    const double eps = inst.param("epsilon");
    const double delta = inst.param("delta");
    const double mu = inst.param("mu");
    if (beta <= eps * delta) {
        return 1.0 - alpha / 2.0;
    }
    if (beta <= mu) {
        return (1.0 - alpha / 2.0) *
               (eps / alpha + (eps * delta / beta) * (1.0 - eps / alpha));
    }
    // Affine in 1/beta: v(C) - R(ref) - S/beta with S the score-weighted
    // win-value covariance under the reference.
    const double v_b = win_rate_value(FiniteDist::point_mass(0), inst.r_star, inst.ref);
    const double v_c = win_rate_value(FiniteDist::point_mass(1), inst.r_star, inst.ref);
    const double v_p = win_rate_value(FiniteDist::point_mass(2), inst.r_star, inst.ref);
    const double pb = inst.ref.probs()[0], pc = inst.ref.probs()[1], pp = inst.ref.probs()[2];
    const double s = pb * (inst.r_hat.value(0) - mu) * v_b +
                     pc * (inst.r_hat.value(1) - mu) * v_c +
                     pp * (inst.r_hat.value(2) - mu) * v_p;
    const double r_ref = pb * v_b + pc * v_c + pp * v_p;
    return v_c - r_ref - s / beta;
}

inline int separation_regime_of(const Instance& inst, double beta) {
    const double eps_delta = inst.param("epsilon") * inst.param("delta");
    if (beta <= eps_delta) return 1;
    if (beta <= inst.param("mu")) return 2;
    return 3;
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0 && hi > lo) || points < 2) {
        throw validation_error("log_spaced: requires 0 < lo < hi and points >= 2");
    }
    std::vector<double> out;
    out.reserve(points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < points; ++i) {
        out.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                         static_cast<double>(points - 1)));
    }
    return out;
}

// Evaluates the score-tilted family over a beta grid (endpoints of the
// analytic regimes added when asked; minima sit there) plus the
// infinite-beta limit, and compares the grid infimum to the top-quantile
// selector's regret.
inline SeparationSweepReport separation_sweep(const Instance& inst, std::vector<double> beta_grid,
                                              bool include_endpoints = true) {
    if (include_endpoints) {
        beta_grid.push_back(inst.param("epsilon") * inst.param("delta"));
        beta_grid.push_back(inst.param("mu"));
    }
    std::sort(beta_grid.begin(), beta_grid.end());
    beta_grid.erase(std::unique(beta_grid.begin(), beta_grid.end()), beta_grid.end());

    SeparationSweepReport report;
    report.em_regret =
        regret(inst, SelectorSpec::top_quantile(inst.param("m_quantile"))).regret;
    double min_chi = std::numeric_limits<double>::infinity();
    for (double beta : beta_grid) {
        SweepPoint pt;
        pt.beta = beta;
        pt.regime = separation_regime_of(inst, beta);
        pt.chi_regret = regret(inst, SelectorSpec::chi_bon(beta)).regret;
        min_chi = std::min(min_chi, pt.chi_regret);
        report.points.push_back(pt);
    }
    // beta -> infinity limit: the tilt flattens to the reference policy.
    SweepPoint limit;
    limit.beta = std::numeric_limits<double>::infinity();
    limit.regime = 0;
    limit.chi_regret = win_rate_value(inst.comparator(), inst.r_star, inst.ref) -
                       win_rate_value(inst.ref, inst.r_star, inst.ref);
    min_chi = std::min(min_chi, limit.chi_regret);
    report.points.push_back(limit);
    report.min_chi_regret = min_chi;
    report.ratio = min_chi / report.em_regret;
    return report;
}

struct DivergenceRow {
    double m = 0.0;
    double em = 0.0;
    double coverage = 0.0;
    double chi2 = 0.0;
    double bound_rhs = 0.0; // NaN when the bound is undefined (m <= 1)
};

inline std::vector<DivergenceRow> divergence_sweep(const FiniteDist& target,
                                                   const FiniteDist& base,
                                                   const std::vector<double>& m_grid) {
    const double chi2 = f_divergence(target, base, FDivSpec::chi_square());
    std::vector<DivergenceRow> rows;
    rows.reserve(m_grid.size());
    for (double m : m_grid) {
        DivergenceRow row;
        row.m = m;
        row.em = excess_mass(target, base, m);
        row.coverage = bonlab::coverage(target, base, m);
        row.chi2 = chi2;
        row.bound_rhs = m > 1.0 ? m * chi2 / ((m - 1.0) * (m - 1.0))
                                : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

} // namespace bonlab
