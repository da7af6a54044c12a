#pragma once

#include <cstdint>

#include "urdiv/channel_model.hpp"

namespace urdiv {

/// Local diversity evaluated at one outage probability.
struct LocalDiversityPoint {
    double gain;         // quantile q with F(q) = probability
    double probability;  // outage target p
    double diversity;    // q f(q) / F(q)
    double normalized;   // diversity / antenna count
};

/// Local (effective) diversity order at gain q: the log-log slope of the CDF,
/// d ln F / d ln q = q f(q) / F(q). Requires q > 0.
double local_diversity(const ChannelSpec& spec, double q);

/// Same quantity through the Marcum recurrence identity
///   d = (q/p_dif) (P_{M-1}/P_M - 1),
/// valid for M >= 2. Used as a cross-check path; throws std::runtime_error
/// when the two CDFs agree to better than ~1e-5 in the log, where the
/// subtraction has lost too many digits to be trusted.
double local_diversity_marcum(const ChannelSpec& spec, double q);

/// Local diversity at the gain where the outage probability equals p.
LocalDiversityPoint local_diversity_at_probability(const ChannelSpec& spec, double p);

/// Fading margin in dB between the median and the p-quantile of the gain,
/// 10 log10(median / quantile(p)). Requires 0 < p < 0.5.
double fading_margin(const ChannelSpec& spec, double p_target);

/// Two-sided Dvoretzky-Kiefer-Wolfowitz half-width: with r samples the ECDF
/// stays within eps of the true CDF everywhere, with confidence xi.
double dkw_epsilon(std::uint64_t samples, double confidence);

/// The DKW statement as a record: epsilon always satisfies the defining
/// formula for (samples, confidence).
struct DkwBound {
    std::uint64_t samples;
    double confidence;
    double epsilon;
};

DkwBound dkw_bound(std::uint64_t samples, double confidence);

}  // namespace urdiv
