#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "bonlab/errors.hpp"

namespace bonlab {

// Fixed-order compensated accumulator. Reductions that feed 1e-12
// assertions go through this so the result does not depend on the
// summand count eating the tolerance.
class StableSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x, double tol, int max_iter) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < tol) return h;
    }
    throw numeric_error("incomplete beta: continued fraction did not converge (a=" +
                        std::to_string(a) + ", b=" + std::to_string(b) +
                        ", x=" + std::to_string(x) + ")");
}

} // namespace detail

// Regularized incomplete beta I_x(a, b), continued fraction with the
// symmetric-argument switch. `tol` is the continued-fraction stopping
// tolerance; the default meets an absolute error well below 1e-13 for the
// integer parameters used by the order-statistics evaluators.
inline double reg_inc_beta(double x, double a, double b, double tol = 1e-15, int max_iter = 400) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw validation_error("reg_inc_beta: parameters must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::betacf(a, b, x, tol, max_iter) / a;
    }
    return 1.0 - front * detail::betacf(b, a, 1.0 - x, tol, max_iter) / b;
}

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
// Series for x < a + 1, continued fraction otherwise.
inline double reg_gamma_q(double a, double x, double tol = 1e-15, int max_iter = 500) {
    if (!(a > 0.0) || x < 0.0) {
        throw validation_error("reg_gamma_q: requires a > 0, x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // P(a, x) by series, then Q = 1 - P.
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int n = 0; n < max_iter; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * tol) {
                const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
                return 1.0 - p;
            }
        }
        throw numeric_error("reg_gamma_q: series did not converge");
    }
    // Lentz continued fraction for Q directly.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < tol) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw numeric_error("reg_gamma_q: continued fraction did not converge");
}

// Survival function of a chi-square statistic with `dof` degrees of freedom.
inline double chi_square_sf(double stat, int dof) {
    if (dof <= 0) throw validation_error("chi_square_sf: dof must be positive");
    return reg_gamma_q(0.5 * dof, 0.5 * stat);
}

// Distribution-free two-sided confidence half-width for a mean of
// [0,1]-valued trials: sqrt(ln(2 / (1 - confidence)) / (2 n)).
inline double hoeffding_half_width(std::size_t trials, double confidence) {
    if (trials == 0) throw validation_error("hoeffding_half_width: trials must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw validation_error("hoeffding_half_width: confidence must be in (0, 1)");
    }
    return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(trials)));
}

// Bisection for a continuous nonincreasing function with f(lo) >= 0 >= f(hi).
// Returns the abscissa; the caller checks the residual.
template <typename F>
double bisect_nonincreasing(F&& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo < 0.0 || fhi > 0.0) {
        throw numeric_error("bisection: bracket does not enclose a root");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int i = 0; i < iters && hi > lo; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm >= 0.0) lo = mid; else hi = mid;
    }
    return lo;
}

} // namespace bonlab
