#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "urdiv/channel_model.hpp"

namespace urdiv {

/// Monte-Carlo run description. Results depend only on (spec, phases, seed,
/// n_samples): the stream count changes scheduling, never the sample set.
struct SamplerConfig {
    ChannelSpec spec;
    std::uint64_t seed = 0;
    std::size_t n_samples = 0;
    unsigned n_streams = 1;
    /// Per-antenna phases of the line-of-sight components; empty means all 0.
    /// The gain distribution is provably phase-invariant, so these exist only
    /// to demonstrate that.
    std::vector<double> phases;

    void validate() const;
};

/// Sorted empirical sample of effective gains.
class EcdfResult {
  public:
    explicit EcdfResult(std::vector<double> sorted_gains);

    /// Empirical CDF: fraction of samples <= q.
    double evaluate(double q) const;
    std::size_t size() const { return gains_.size(); }
    const std::vector<double>& gains() const { return gains_; }

  private:
    std::vector<double> gains_;
};

/// Draw n_samples effective gains. Work is split into fixed 65536-sample
/// blocks; block b uses its own mt19937_64 seeded from splitmix64(seed, b),
/// antennas are filled with Gaussians from the Marsaglia polar method over
/// 53-bit uniforms. This pins the sample multiset for a given seed across
/// platforms and stream counts. Refuses runs above 1e8 samples.
EcdfResult sample_effective_gains(const SamplerConfig& config);

/// Distribution-free confidence band around an ECDF.
class DkwBand {
  public:
    DkwBand(const EcdfResult& ecdf, double confidence);

    double epsilon() const { return epsilon_; }
    double upper(double q) const;  // clipped to [0, 1]
    double lower(double q) const;

  private:
    const EcdfResult* ecdf_;
    double epsilon_;
};

DkwBand dkw_band(const EcdfResult& ecdf, double confidence);

/// Empirical check that line-of-sight phases do not move the gain law: two
/// runs differing only in phases, compared at 100 probe gains against twice
/// the DKW half-width at 99% confidence.
struct PhaseInvarianceReport {
    bool pass;
    double max_abs_deviation;
    double threshold;
    std::size_t probes;
};

PhaseInvarianceReport phase_invariance_check(const ChannelSpec& spec,
                                             std::uint64_t seed,
                                             std::size_t n_samples);

/// Binary gain dump: 4-byte magic "URDV", little-endian u32 version (1),
/// little-endian u64 count, then count little-endian f64 sorted gains.
void write_gain_dump(const std::string& path, const EcdfResult& ecdf);
EcdfResult read_gain_dump(const std::string& path);

}  // namespace urdiv
