#include "urdiv/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "urdiv/special_functions.hpp"

namespace urdiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_gain(const char* fn, double q) {
    if (!(q >= 0.0) || std::isinf(q)) {
        throw std::domain_error(std::string(fn) + ": gain must be finite and >= 0");
    }
}

double order_of(const ChannelSpec& spec) {
    return static_cast<double>(spec.antennas());
}

}  // namespace

ChannelSpec::ChannelSpec(std::vector<double> k_factors, double p_dif)
    : k_factors_(std::move(k_factors)), p_dif_(p_dif) {
    if (k_factors_.empty()) {
        throw std::domain_error("ChannelSpec: need at least one antenna");
    }
    if (!(p_dif_ > 0.0) || std::isinf(p_dif_)) {
        throw std::domain_error("ChannelSpec: p_dif must be finite and > 0");
    }
    k_sum_ = 0.0;
    for (double k : k_factors_) {
        if (!(k >= 0.0) || std::isinf(k)) {
            throw std::domain_error("ChannelSpec: K-factors must be finite and >= 0");
        }
        k_sum_ += k;
    }
}

ChannelSpec ChannelSpec::uniform(double k_factor, std::size_t antennas, double p_dif) {
    return ChannelSpec(std::vector<double>(antennas, k_factor), p_dif);
}

ChannelSpec ChannelSpec::uniform_db(double k_db, std::size_t antennas, double p_dif) {
    const double k = (std::isinf(k_db) && k_db < 0.0) ? 0.0 : std::pow(10.0, k_db / 10.0);
    return uniform(k, antennas, p_dif);
}

double gain_cdf(const ChannelSpec& spec, double q) {
    check_gain("gain_cdf", q);
    return sf::marcum_p(order_of(spec), spec.k_sum(), q / spec.p_dif());
}

double gain_log_cdf(const ChannelSpec& spec, double q) {
    check_gain("gain_log_cdf", q);
    return sf::marcum_p_log(order_of(spec), spec.k_sum(), q / spec.p_dif());
}

double gain_log_pdf(const ChannelSpec& spec, double q) {
    check_gain("gain_log_pdf", q);
    const double m = order_of(spec);
    const double kappa = spec.k_sum();
    const double u = q / spec.p_dif();
    const double log_scale = std::log(spec.p_dif());

    if (q == 0.0) {
        // only the single-antenna density is positive at the origin
        return m == 1.0 ? -kappa - log_scale : -kInf;
    }
    if (kappa == 0.0) {
        return (m - 1.0) * std::log(u) - u - std::lgamma(m) - log_scale;
    }
    return -kappa - u + 0.5 * (m - 1.0) * (std::log(u) - std::log(kappa)) +
           sf::log_bessel_i(m - 1.0, 2.0 * std::sqrt(kappa * u)) - log_scale;
}

double gain_pdf(const ChannelSpec& spec, double q) {
    return std::exp(gain_log_pdf(spec, q));
}

double gain_quantile(const ChannelSpec& spec, double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("gain_quantile: probability must lie in (0, 1)");
    }
    const double target = std::log(p);
    const double m = order_of(spec);

    // in log-gain coordinates ln F is smooth and near-linear in the left tail
    // (slope ~ M), so a secant step converges quickly once bracketed
    const auto g = [&](double u) { return gain_log_cdf(spec, std::exp(u)) - target; };

    double u = std::log(mean_gain(spec)) + target / m;  // mean * p^(1/M)
    double gu = g(u);
    if (gu == 0.0) return std::exp(u);

    const double step = std::log(10.0);
    double u_lo, g_lo, u_hi, g_hi;
    if (gu < 0.0) {
        u_lo = u;
        g_lo = gu;
        u_hi = u;
        g_hi = gu;
        for (int i = 0; g_hi < 0.0; ++i) {
            if (i >= 800) throw std::runtime_error("gain_quantile: bracketing failed");
            u_lo = u_hi;
            g_lo = g_hi;
            u_hi += step;
            g_hi = g(u_hi);
        }
    } else {
        u_hi = u;
        g_hi = gu;
        u_lo = u;
        g_lo = gu;
        for (int i = 0; g_lo > 0.0; ++i) {
            if (i >= 800) throw std::runtime_error("gain_quantile: bracketing failed");
            u_hi = u_lo;
            g_hi = g_lo;
            u_lo -= step;
            g_lo = g(u_lo);
        }
    }

    int last_side = 0;
    for (int it = 0; it < 200; ++it) {
        double u_new;
        if (g_hi > g_lo) {
            u_new = u_lo + (u_hi - u_lo) * (-g_lo) / (g_hi - g_lo);
        } else {
            u_new = 0.5 * (u_lo + u_hi);
        }
        // keep the proposal strictly interior, else bisect
        if (!(u_new > u_lo) || !(u_new < u_hi)) {
            u_new = 0.5 * (u_lo + u_hi);
        }
        const double g_new = g(u_new);
        if (std::fabs(g_new) <= 1e-11) return std::exp(u_new);
        // Illinois update: halving the retained endpoint's value stops the
        // secant from stalling where ln F is flat (p close to 1)
        if (g_new < 0.0) {
            u_lo = u_new;
            g_lo = g_new;
            if (last_side < 0) g_hi *= 0.5;
            last_side = -1;
        } else {
            u_hi = u_new;
            g_hi = g_new;
            if (last_side > 0) g_lo *= 0.5;
            last_side = 1;
        }
        if (u_hi - u_lo < 1e-15 * (1.0 + std::fabs(u_lo))) {
            // bracket exhausted at floating-point resolution
            const double best = std::fabs(g_lo) < std::fabs(g_hi) ? u_lo : u_hi;
            if (std::fabs(g(best)) <= 1e-9) return std::exp(best);
            throw std::runtime_error("gain_quantile: no convergence at fp resolution");
        }
    }
    throw std::runtime_error("gain_quantile: iteration budget exhausted");
}

double mean_gain(const ChannelSpec& spec) {
    return spec.p_dif() * (order_of(spec) + spec.k_sum());
}

ChannelSpec normalize_unit_mean(const ChannelSpec& spec) {
    return ChannelSpec(spec.k_factors(), spec.p_dif() / mean_gain(spec));
}

double sc_cdf(const ChannelSpec& spec, std::size_t branches, double q) {
    if (spec.antennas() != 1) {
        throw std::domain_error("sc_cdf: selection combining needs a single-antenna spec");
    }
    if (branches < 1) {
        throw std::domain_error("sc_cdf: need at least one branch");
    }
    return std::exp(static_cast<double>(branches) * gain_log_cdf(spec, q));
}

}  // namespace urdiv
