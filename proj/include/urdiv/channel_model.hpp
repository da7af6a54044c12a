#pragma once

#include <cstddef>
#include <vector>

namespace urdiv {

/// Uncorrelated multi-antenna Rician channel: antenna m sees a fixed
/// line-of-sight component with power ratio K_m over a diffuse part of power
/// p_dif (same for every antenna). The effective gain is the sum of the
/// per-antenna gains |h_m|^2.
class ChannelSpec {
  public:
    ChannelSpec(std::vector<double> k_factors, double p_dif);

    /// All antennas share one linear K-factor.
    static ChannelSpec uniform(double k_factor, std::size_t antennas, double p_dif = 1.0);
    /// Same, K given in dB; -inf dB maps to exactly K = 0 (Rayleigh).
    static ChannelSpec uniform_db(double k_db, std::size_t antennas, double p_dif = 1.0);

    std::size_t antennas() const { return k_factors_.size(); }
    double p_dif() const { return p_dif_; }
    const std::vector<double>& k_factors() const { return k_factors_; }
    /// Sum of the K-factors; together with the antenna count this is the only
    /// thing the gain distribution depends on.
    double k_sum() const { return k_sum_; }

  private:
    std::vector<double> k_factors_;
    double p_dif_;
    double k_sum_;
};

/// CDF of the effective gain, F(q) = marcum_p(M, sum K, q / p_dif).
double gain_cdf(const ChannelSpec& spec, double q);

/// ln F(q); finite far into the left tail where F underflows.
double gain_log_cdf(const ChannelSpec& spec, double q);

/// Density of the effective gain (non-central gamma with integer shape M).
double gain_pdf(const ChannelSpec& spec, double q);

/// ln f(q), evaluated directly in the log domain.
double gain_log_pdf(const ChannelSpec& spec, double q);

/// Inverse CDF. Solves ln F(q) = ln p by bracketed secant/bisection from the
/// starting guess mean * p^(1/M); throws std::runtime_error if the solver
/// fails to converge within its iteration budget.
double gain_quantile(const ChannelSpec& spec, double p);

/// E[Q] = p_dif * (M + sum K).
double mean_gain(const ChannelSpec& spec);

/// Same channel rescaled so mean_gain == 1: the CDF of the result at q equals
/// the original CDF at q * mean.
ChannelSpec normalize_unit_mean(const ChannelSpec& spec);

/// Selection combining over `branches` independent copies of a single-antenna
/// channel: F_sc(q) = F_1(q)^branches, computed in the log domain. `spec`
/// must have exactly one antenna.
double sc_cdf(const ChannelSpec& spec, std::size_t branches, double q);

}  // namespace urdiv
