#include "urdiv/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <thread>

#include "urdiv/reliability_metrics.hpp"

namespace urdiv {

namespace {

constexpr std::size_t kBlockSize = 65536;
constexpr std::size_t kMaxSamples = 100000000;  // 1e8, ~800 MB of gains
constexpr char kDumpMagic[4] = {'U', 'R', 'D', 'V'};
constexpr std::uint32_t kDumpVersion = 1;

std::uint64_t splitmix_round(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Per-block seed: fixed mixing of (run seed, block index), so the sample
// multiset is a pure function of the config regardless of thread scheduling.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
    return splitmix_round(splitmix_round(seed + (block + 1) * 0x9E3779B97F4A7C15ULL));
}

double uniform53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Marsaglia polar method; fixed algorithm (not std::normal_distribution) so
// golden seeds reproduce across standard libraries.
class PolarGaussian {
  public:
    explicit PolarGaussian(std::mt19937_64& rng) : rng_(rng) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double v1, v2, s;
        do {
            v1 = 2.0 * uniform53(rng_) - 1.0;
            v2 = 2.0 * uniform53(rng_) - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v2 * f;
        have_spare_ = true;
        return v1 * f;
    }

  private:
    std::mt19937_64& rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

void put_u32_le(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}

void put_u64_le(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

std::uint64_t get_u64_le(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void SamplerConfig::validate() const {
    if (n_samples < 1) {
        throw std::domain_error("SamplerConfig: need at least one sample");
    }
    if (n_samples > kMaxSamples) {
        throw std::length_error("SamplerConfig: sample count exceeds the 1e8 cap");
    }
    if (n_streams < 1) {
        throw std::domain_error("SamplerConfig: need at least one stream");
    }
    if (!phases.empty() && phases.size() != spec.antennas()) {
        throw std::domain_error("SamplerConfig: phase list must match the antenna count");
    }
    for (double p : phases) {
        if (!std::isfinite(p)) {
            throw std::domain_error("SamplerConfig: phases must be finite");
        }
    }
}

EcdfResult::EcdfResult(std::vector<double> sorted_gains) : gains_(std::move(sorted_gains)) {
    if (gains_.empty()) {
        throw std::domain_error("EcdfResult: empty sample");
    }
    double prev = 0.0;
    for (double g : gains_) {
        if (!(g >= prev) || std::isinf(g)) {
            throw std::domain_error(
                "EcdfResult: gains must be finite, non-negative and sorted");
        }
        prev = g;
    }
}

double EcdfResult::evaluate(double q) const {
    const auto it = std::upper_bound(gains_.begin(), gains_.end(), q);
    return static_cast<double>(it - gains_.begin()) / static_cast<double>(gains_.size());
}

EcdfResult sample_effective_gains(const SamplerConfig& config) {
    config.validate();
    const std::size_t n = config.n_samples;
    const std::size_t m = config.spec.antennas();
    const double sigma = std::sqrt(0.5 * config.spec.p_dif());

    // fixed line-of-sight component per antenna
    std::vector<double> mean_re(m), mean_im(m);
    for (std::size_t a = 0; a < m; ++a) {
        const double amp = std::sqrt(config.spec.k_factors()[a] * config.spec.p_dif());
        const double phase = config.phases.empty() ? 0.0 : config.phases[a];
        mean_re[a] = amp * std::cos(phase);
        mean_im[a] = amp * std::sin(phase);
    }

    std::vector<double> out(n);
    const std::size_t n_blocks = (n + kBlockSize - 1) / kBlockSize;

    const auto run_blocks = [&](std::size_t first_block, std::size_t stride) {
        for (std::size_t b = first_block; b < n_blocks; b += stride) {
            std::mt19937_64 rng(block_seed(config.seed, b));
            PolarGaussian gauss(rng);
            const std::size_t lo = b * kBlockSize;
            const std::size_t hi = std::min(n, lo + kBlockSize);
            for (std::size_t i = lo; i < hi; ++i) {
                double q = 0.0;
                for (std::size_t a = 0; a < m; ++a) {
                    const double re = mean_re[a] + sigma * gauss.next();
                    const double im = mean_im[a] + sigma * gauss.next();
                    q += re * re + im * im;
                }
                out[i] = q;
            }
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(config.n_streams, n_blocks);
    if (workers <= 1) {
        run_blocks(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(run_blocks, w, workers);
        }
        for (auto& t : pool) t.join();
    }

    std::sort(out.begin(), out.end());
    return EcdfResult(std::move(out));
}

DkwBand::DkwBand(const EcdfResult& ecdf, double confidence)
    : ecdf_(&ecdf), epsilon_(dkw_epsilon(ecdf.size(), confidence)) {}

double DkwBand::upper(double q) const {
    return std::min(1.0, ecdf_->evaluate(q) + epsilon_);
}

double DkwBand::lower(double q) const {
    return std::max(0.0, ecdf_->evaluate(q) - epsilon_);
}

DkwBand dkw_band(const EcdfResult& ecdf, double confidence) {
    return DkwBand(ecdf, confidence);
}

PhaseInvarianceReport phase_invariance_check(const ChannelSpec& spec,
                                             std::uint64_t seed,
                                             std::size_t n_samples) {
    SamplerConfig base{spec, seed, n_samples, 1, {}};
    base.validate();

    // arbitrary but reproducible phases, decoupled from the sample stream
    std::mt19937_64 phase_rng(splitmix_round(seed ^ 0x9E3779B97F4A7C15ULL));
    std::vector<double> phases(spec.antennas());
    for (double& p : phases) {
        p = 2.0 * 3.141592653589793 * uniform53(phase_rng);
    }
    SamplerConfig shifted = base;
    shifted.phases = std::move(phases);

    const EcdfResult a = sample_effective_gains(base);
    const EcdfResult b = sample_effective_gains(shifted);

    const std::size_t probes = 100;
    double worst = 0.0;
    for (std::size_t i = 0; i < probes; ++i) {
        const std::size_t idx = static_cast<std::size_t>(
            (static_cast<double>(i) + 0.5) / static_cast<double>(probes) *
            static_cast<double>(n_samples));
        const double q = a.gains()[std::min(idx, n_samples - 1)];
        worst = std::max(worst, std::fabs(a.evaluate(q) - b.evaluate(q)));
    }
    const double threshold = 2.0 * dkw_epsilon(n_samples, 0.99);
    return {worst <= threshold, worst, threshold, probes};
}

void write_gain_dump(const std::string& path, const EcdfResult& ecdf) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("write_gain_dump: cannot open " + path);
    }
    os.write(kDumpMagic, 4);
    put_u32_le(os, kDumpVersion);
    put_u64_le(os, ecdf.size());
    for (double g : ecdf.gains()) {
        std::uint64_t bits;
        std::memcpy(&bits, &g, 8);
        put_u64_le(os, bits);
    }
    if (!os) {
        throw std::runtime_error("write_gain_dump: write failed on " + path);
    }
}

EcdfResult read_gain_dump(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("read_gain_dump: cannot open " + path);
    }
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kDumpMagic, 4) != 0) {
        throw std::runtime_error("read_gain_dump: bad magic in " + path);
    }
    unsigned char vb[4];
    is.read(reinterpret_cast<char*>(vb), 4);
    std::uint32_t version = 0;
    for (int i = 0; i < 4; ++i) version |= static_cast<std::uint32_t>(vb[i]) << (8 * i);
    if (!is || version != kDumpVersion) {
        throw std::runtime_error("read_gain_dump: unsupported version in " + path);
    }
    const std::uint64_t count = get_u64_le(is);
    if (!is || count == 0 || count > kMaxSamples) {
        throw std::runtime_error("read_gain_dump: bad sample count in " + path);
    }
    std::vector<double> gains(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t bits = get_u64_le(is);
        std::memcpy(&gains[i], &bits, 8);
    }
    if (!is) {
        throw std::runtime_error("read_gain_dump: truncated file " + path);
    }
    return EcdfResult(std::move(gains));
}

}  // namespace urdiv
