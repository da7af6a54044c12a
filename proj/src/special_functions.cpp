#include "urdiv/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace urdiv::sf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// log of the smallest positive normal double, with margin
constexpr double kLogTiny = -700.0;

[[noreturn]] void domain_fail(const char* fn, const char* what) {
    throw std::domain_error(std::string(fn) + ": " + what);
}

void require_finite_nonneg(const char* fn, const char* name, double v) {
    if (!(v >= 0.0) || std::isinf(v)) {
        domain_fail(fn, name);
    }
}

// Series terms of I_nu(z): t_k = (z/2)^(2k+nu) / (k! Gamma(k+nu+1)).
// Index of the largest term (argmax over k), clamped to >= 0.
long long bessel_peak_index(double nu, double z) {
    const double k_hat = 0.5 * (std::hypot(nu, z) - nu - 2.0);
    if (!(k_hat > 0.0)) return 0;
    return static_cast<long long>(std::floor(k_hat));
}

// log t_k for the Bessel series above.
double bessel_log_term(double nu, double z, long long k) {
    const double kd = static_cast<double>(k);
    return (2.0 * kd + nu) * std::log(0.5 * z) - std::lgamma(kd + 1.0) -
           std::lgamma(kd + nu + 1.0);
}

// Sum of the Bessel series relative to its peak term; returns {log_peak, sum}.
struct AnchoredSum {
    double log_peak;
    double sum;
};

AnchoredSum bessel_anchored_sum(double nu, double z) {
    const long long k0 = bessel_peak_index(nu, z);
    const double log_peak = bessel_log_term(nu, z, k0);

    double sum = 1.0;  // the peak term itself
    // Upward from the peak: t_{k+1}/t_k = (z/2)^2 / ((k+1)(k+nu+1)),
    // factored to stay finite even when z^2 would overflow.
    double cur = 1.0;
    for (long long k = k0;; ++k) {
        const double kd = static_cast<double>(k);
        const double ratio = (0.5 * z / (kd + 1.0)) * (0.5 * z / (kd + nu + 1.0));
        cur *= ratio;
        sum += cur;
        if (cur < sum * 1e-18 && ratio < 1.0) break;
        if (k - k0 > 100000000LL) {
            throw std::runtime_error("bessel_i: series did not converge");
        }
    }
    // Downward: t_{k-1}/t_k = 4k(k+nu) / z^2, decreasing toward k = 0.
    cur = 1.0;
    for (long long k = k0; k >= 1; --k) {
        const double kd = static_cast<double>(k);
        cur *= (2.0 * kd / z) * (2.0 * (kd + nu) / z);
        sum += cur;
        if (cur < sum * 1e-18) break;
    }
    return {log_peak, sum};
}

// log D(a, x) where D(a, x) = x^a e^-x / Gamma(a+1), the dominant factor of
// the incomplete-gamma series and the Poisson-like increment P(a,x)-P(a+1,x).
double log_gamma_increment(double a, double x) {
    return a * std::log(x) - x - std::lgamma(a + 1.0);
}

struct GammaParts {
    double log_value;  // ln P(shape, x)
    double value;      // P(shape, x)
};

// P(shape, x) via the lower series (x < shape+1) or the upper continued
// fraction (x >= shape+1); both the linear and log value come out of one pass.
GammaParts reg_lower_gamma_parts(double shape, double x) {
    if (x == 0.0) return {-kInf, 0.0};
    if (std::isinf(x)) return {0.0, 1.0};

    if (x < shape + 1.0) {
        // P(a,x) = D(a,x) * sum_{n>=0} x^n / ((a+1)...(a+n))
        double term = 1.0;
        double sum = 1.0;
        for (int n = 1; n <= 100000; ++n) {
            term *= x / (shape + static_cast<double>(n));
            sum += term;
            if (term < sum * 1e-17) {
                const double log_p = log_gamma_increment(shape, x) + std::log(sum);
                return {log_p, std::exp(log_p)};
            }
        }
        throw std::runtime_error("reg_lower_gamma: series did not converge");
    }

    // Q(a,x) = e^(-x) x^a / Gamma(a) * CF, modified Lentz evaluation.
    const double tiny = 1e-300;
    double b = x + 1.0 - shape;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 100000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - shape);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) {
            const double log_q = shape * std::log(x) - x - std::lgamma(shape) + std::log(h);
            const double q = std::exp(log_q);
            const double p = std::min(1.0, std::max(0.0, 1.0 - q));
            // x >= shape+1 keeps Q away from 1, so log1p stays accurate.
            return {std::log1p(-std::min(q, 1.0)), p};
        }
    }
    throw std::runtime_error("reg_lower_gamma: continued fraction did not converge");
}

void check_gamma_args(const char* fn, double shape, double x) {
    if (!(shape > 0.0) || std::isinf(shape)) domain_fail(fn, "shape must be positive and finite");
    if (!(x >= 0.0)) domain_fail(fn, "x must be non-negative");
}

// Poisson increment state for the Marcum recurrences. Tracks the term
// D(order+k, x) which may start below the smallest double while still needing
// to surface later; while underflowed, the log is advanced instead.
struct IncrementTracker {
    double linear;  // 0 while underflowed
    double log_val;

    void init(double log_d) {
        log_val = log_d;
        linear = log_d > kLogTiny ? std::exp(log_d) : 0.0;
    }
    // ratio = next/current, applied once per recurrence step
    void step(double ratio) {
        if (linear > 0.0) {
            linear *= ratio;  // may legitimately decay to 0; stays there
        } else if (ratio > 1.0) {
            log_val += std::log(ratio);
            if (log_val > kLogTiny) linear = std::exp(log_val);
        }
    }
};

double marcum_p_linear(double order, double noncentrality, double x) {
    // Anchor at the Poisson mode k0 = floor(noncentrality) and spread both ways:
    //   P = sum_k w_k g_k,  w_k = e^-nc nc^k / k!,  g_k = P(order+k, x).
    const long long k0 = static_cast<long long>(std::floor(noncentrality));
    const double log_w0 = -noncentrality +
                          static_cast<double>(k0) * std::log(noncentrality) -
                          std::lgamma(static_cast<double>(k0) + 1.0);
    const double w0 = std::exp(log_w0);
    const GammaParts g0 = reg_lower_gamma_parts(order + static_cast<double>(k0), x);
    const double log_d0 = log_gamma_increment(order + static_cast<double>(k0), x);

    double sum = w0 * g0.value;

    // Upward in k: g shrinks by D, w scales by nc/k.
    {
        double w = w0;
        double g = g0.value;
        IncrementTracker d;
        d.init(log_d0);
        for (long long k = k0 + 1; k <= k0 + 100000000LL; ++k) {
            g = std::max(0.0, g - d.linear);
            d.step(x / (order + static_cast<double>(k)));
            w *= noncentrality / static_cast<double>(k);
            const double term = w * g;
            sum += term;
            if (g == 0.0 || term < sum * 1e-17) break;
        }
    }
    // Downward in k: g grows by D, w scales by k+1 over nc.
    {
        double w = w0;
        double g = g0.value;
        IncrementTracker d;
        d.init(log_d0);
        for (long long k = k0 - 1; k >= 0; --k) {
            w *= static_cast<double>(k + 1) / noncentrality;
            d.step((order + static_cast<double>(k) + 1.0) / x);
            g = std::min(1.0, g + d.linear);
            const double term = w * g;
            sum += term;
            if (term < sum * 1e-17) break;
        }
    }
    return std::min(1.0, sum);
}

// ln of the k-th mixture term: ln w_k + ln P(order+k, x).
double marcum_log_term(double order, double noncentrality, double x, long long k) {
    const double kd = static_cast<double>(k);
    return -noncentrality + kd * std::log(noncentrality) - std::lgamma(kd + 1.0) +
           reg_lower_gamma_parts(order + kd, x).log_value;
}

double marcum_p_log_impl(double order, double noncentrality, double x) {
    // The log-term is concave in k; locate its mode by ternary search, then
    // log-sum-exp outward until terms fall kCut nats below the running max.
    constexpr double kCut = 42.0;  // exp(-42) ~ 5e-19, below double rounding

    long long lo = 0;
    long long hi = static_cast<long long>(
        std::ceil(noncentrality + 50.0 * std::sqrt(noncentrality + 1.0) + 200.0));
    while (hi - lo > 2) {
        const long long m1 = lo + (hi - lo) / 3;
        const long long m2 = hi - (hi - lo) / 3;
        if (marcum_log_term(order, noncentrality, x, m1) <
            marcum_log_term(order, noncentrality, x, m2)) {
            lo = m1 + 1;
        } else {
            hi = m2 - 1;
        }
    }
    long long k_mode = lo;
    double peak = marcum_log_term(order, noncentrality, x, k_mode);
    for (long long k = lo + 1; k <= hi; ++k) {
        const double v = marcum_log_term(order, noncentrality, x, k);
        if (v > peak) {
            peak = v;
            k_mode = k;
        }
    }

    double sum = 1.0;  // mode term
    for (long long k = k_mode + 1; k <= k_mode + 100000000LL; ++k) {
        const double v = marcum_log_term(order, noncentrality, x, k);
        if (v > peak) {  // ternary landed off the true mode; rebase
            sum *= std::exp(peak - v);
            sum += 1.0;
            peak = v;
            continue;
        }
        if (v < peak - kCut) break;
        sum += std::exp(v - peak);
    }
    for (long long k = k_mode - 1; k >= 0; --k) {
        const double v = marcum_log_term(order, noncentrality, x, k);
        if (v > peak) {
            sum *= std::exp(peak - v);
            sum += 1.0;
            peak = v;
            continue;
        }
        if (v < peak - kCut) break;
        sum += std::exp(v - peak);
    }
    return std::min(0.0, peak + std::log(sum));
}

}  // namespace

void MarcumArgs::validate() const {
    if (!(order >= 1.0) || std::isinf(order)) {
        domain_fail("marcum_p", "order must be finite and >= 1");
    }
    require_finite_nonneg("marcum_p", "noncentrality must be finite and >= 0", noncentrality);
    require_finite_nonneg("marcum_p", "x must be finite and >= 0", x);
}

double bessel_i(double nu, double z) {
    if (!(nu >= 0.0)) domain_fail("bessel_i", "order must be >= 0");
    if (!(z >= 0.0)) domain_fail("bessel_i", "argument must be >= 0");
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    const AnchoredSum s = bessel_anchored_sum(nu, z);
    return std::exp(s.log_peak) * s.sum;
}

double log_bessel_i(double nu, double z) {
    if (!(nu >= 0.0)) domain_fail("log_bessel_i", "order must be >= 0");
    if (!(z >= 0.0)) domain_fail("log_bessel_i", "argument must be >= 0");
    if (z == 0.0) return nu == 0.0 ? 0.0 : -kInf;
    const AnchoredSum s = bessel_anchored_sum(nu, z);
    return s.log_peak + std::log(s.sum);
}

double reg_lower_gamma(double shape, double x) {
    check_gamma_args("reg_lower_gamma", shape, x);
    return reg_lower_gamma_parts(shape, x).value;
}

double log_reg_lower_gamma(double shape, double x) {
    check_gamma_args("log_reg_lower_gamma", shape, x);
    return reg_lower_gamma_parts(shape, x).log_value;
}

double marcum_p(const MarcumArgs& args) {
    args.validate();
    if (args.noncentrality == 0.0) {
        return reg_lower_gamma_parts(args.order, args.x).value;
    }
    if (args.x == 0.0) return 0.0;
    return marcum_p_linear(args.order, args.noncentrality, args.x);
}

double marcum_p(double order, double noncentrality, double x) {
    return marcum_p(MarcumArgs{order, noncentrality, x});
}

double marcum_p_log(const MarcumArgs& args) {
    args.validate();
    if (args.noncentrality == 0.0) {
        return reg_lower_gamma_parts(args.order, args.x).log_value;
    }
    if (args.x == 0.0) return -kInf;
    return marcum_p_log_impl(args.order, args.noncentrality, args.x);
}

double marcum_p_log(double order, double noncentrality, double x) {
    return marcum_p_log(MarcumArgs{order, noncentrality, x});
}

}  // namespace urdiv::sf
