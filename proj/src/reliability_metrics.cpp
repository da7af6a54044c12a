#include "urdiv/reliability_metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "urdiv/special_functions.hpp"

namespace urdiv {

namespace {

void check_positive_gain(const char* fn, double q) {
    if (!(q > 0.0) || std::isinf(q)) {
        throw std::domain_error(std::string(fn) + ": gain must be finite and > 0");
    }
}

}  // namespace

double local_diversity(const ChannelSpec& spec, double q) {
    check_positive_gain("local_diversity", q);
    return q * std::exp(gain_log_pdf(spec, q) - gain_log_cdf(spec, q));
}

double local_diversity_marcum(const ChannelSpec& spec, double q) {
    check_positive_gain("local_diversity_marcum", q);
    if (spec.antennas() < 2) {
        throw std::domain_error("local_diversity_marcum: needs at least two antennas");
    }
    const double m = static_cast<double>(spec.antennas());
    const double u = q / spec.p_dif();
    const double delta = sf::marcum_p_log(m - 1.0, spec.k_sum(), u) -
                         sf::marcum_p_log(m, spec.k_sum(), u);
    if (delta < 1e-5) {
        throw std::runtime_error(
            "local_diversity_marcum: CDF ratio too close to 1, subtraction has "
            "lost precision; use local_diversity instead");
    }
    return u * std::expm1(delta);
}

LocalDiversityPoint local_diversity_at_probability(const ChannelSpec& spec, double p) {
    const double q = gain_quantile(spec, p);
    const double d = local_diversity(spec, q);
    return {q, p, d, d / static_cast<double>(spec.antennas())};
}

double fading_margin(const ChannelSpec& spec, double p_target) {
    if (!(p_target > 0.0) || !(p_target < 0.5)) {
        throw std::domain_error("fading_margin: target probability must lie in (0, 0.5)");
    }
    const double median = gain_quantile(spec, 0.5);
    const double q_p = gain_quantile(spec, p_target);
    return 10.0 * std::log10(median / q_p);
}

double dkw_epsilon(std::uint64_t samples, double confidence) {
    if (samples < 1) {
        throw std::domain_error("dkw_epsilon: need at least one sample");
    }
    if (!(confidence > 0.0) || !(confidence < 1.0)) {
        throw std::domain_error("dkw_epsilon: confidence must lie in (0, 1)");
    }
    return std::sqrt(std::log(2.0 / (1.0 - confidence)) /
                     (2.0 * static_cast<double>(samples)));
}

DkwBound dkw_bound(std::uint64_t samples, double confidence) {
    return {samples, confidence, dkw_epsilon(samples, confidence)};
}

}  // namespace urdiv
