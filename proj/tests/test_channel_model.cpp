#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "urdiv/channel_model.hpp"
#include "urdiv/special_functions.hpp"

using namespace urdiv;

namespace {
const double inf_v = std::numeric_limits<double>::infinity();

double rel_diff(double a, double b) {
    if (a == b) return 0.0;
    return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}
}  // namespace

TEST_CASE("ChannelSpec validation") {
    CHECK_THROWS_AS(ChannelSpec({}, 1.0), std::domain_error);
    CHECK_THROWS_AS(ChannelSpec({1.0}, 0.0), std::domain_error);
    CHECK_THROWS_AS(ChannelSpec({1.0}, -2.0), std::domain_error);
    CHECK_THROWS_AS(ChannelSpec({1.0}, inf_v), std::domain_error);
    CHECK_THROWS_AS(ChannelSpec({-0.5}, 1.0), std::domain_error);
    CHECK_THROWS_AS(ChannelSpec({std::nan("")}, 1.0), std::domain_error);
    CHECK_THROWS_AS(ChannelSpec::uniform(1.0, 0, 1.0), std::domain_error);

    const ChannelSpec ok = ChannelSpec::uniform(2.0, 3, 0.5);
    CHECK(ok.antennas() == 3);
    CHECK(ok.k_sum() == 6.0);
    CHECK(ok.p_dif() == 0.5);
}

TEST_CASE("uniform_db maps -inf dB to exactly zero K") {
    const ChannelSpec rayleigh = ChannelSpec::uniform_db(-inf_v, 4, 1.0);
    for (double k : rayleigh.k_factors()) CHECK(k == 0.0);
    CHECK(rayleigh.k_sum() == 0.0);
    CHECK(ChannelSpec::uniform_db(0.0, 2, 1.0).k_sum() == 2.0);
    CHECK(rel_diff(ChannelSpec::uniform_db(10.0, 1, 1.0).k_sum(), 10.0) < 1e-15);
}

TEST_CASE("mean_gain") {
    CHECK(mean_gain(ChannelSpec::uniform(1.0, 64, 1.0)) == 128.0);
    CHECK(mean_gain(ChannelSpec::uniform(4.0, 32, 1.0)) == 160.0);
    CHECK(mean_gain(ChannelSpec::uniform(0.0, 5, 2.0)) == 10.0);
    CHECK(mean_gain(ChannelSpec({1.0, 2.0, 3.0}, 2.0)) == 18.0);
}

TEST_CASE("gain_cdf closed forms") {
    const ChannelSpec rayleigh = ChannelSpec::uniform(0.0, 1, 1.0);
    CHECK(rel_diff(gain_cdf(rayleigh, std::log(2.0)), 0.5) < 1e-13);
    for (double q : {0.1, 1.0, 3.0}) {
        CHECK(rel_diff(gain_cdf(rayleigh, q), -std::expm1(-q)) < 1e-13);
    }
    // two-antenna Rayleigh is Erlang-2
    const ChannelSpec erlang2 = ChannelSpec::uniform(0.0, 2, 1.0);
    for (double q : {0.5, 2.0, 6.0}) {
        CHECK(rel_diff(gain_cdf(erlang2, q), 1.0 - std::exp(-q) * (1.0 + q)) < 1e-12);
    }
    // deep-tail spot pinned by the 58.4 dB margin
    const double q_tail = std::log(2.0) * std::pow(10.0, -5.84);
    CHECK(gain_cdf(rayleigh, q_tail) == doctest::Approx(1e-6).epsilon(0.02));
}

TEST_CASE("gain_cdf delegates to the noncentral gamma CDF") {
    const ChannelSpec spec = ChannelSpec::uniform(0.5, 2, 2.0);
    CHECK(gain_cdf(spec, 3.0) == sf::marcum_p(2.0, 1.0, 1.5));
    CHECK(gain_log_cdf(spec, 3.0) == sf::marcum_p_log(2.0, 1.0, 1.5));
    const ChannelSpec mrc4 = ChannelSpec::uniform(1.0, 4, 2.0);
    CHECK(rel_diff(gain_cdf(mrc4, 3.0), oracle::marcum_mixture(4.0, 4.0, 1.5)) < 1e-9);
}

TEST_CASE("gain domain checks") {
    const ChannelSpec spec = ChannelSpec::uniform(1.0, 2, 1.0);
    CHECK_THROWS_AS(gain_cdf(spec, -1.0), std::domain_error);
    CHECK_THROWS_AS(gain_cdf(spec, inf_v), std::domain_error);
    CHECK_THROWS_AS(gain_log_cdf(spec, std::nan("")), std::domain_error);
    CHECK_THROWS_AS(gain_pdf(spec, -0.5), std::domain_error);
    CHECK(gain_cdf(spec, 0.0) == 0.0);
    CHECK(gain_log_cdf(spec, 0.0) == -inf_v);
}

TEST_CASE("gain_pdf reference points") {
    // exponential density at the origin
    CHECK(gain_pdf(ChannelSpec::uniform(0.0, 1, 1.0), 0.0) == 1.0);
    // single-antenna Rician closed form at q=1
    const double expect = std::exp(-3.0) * sf::bessel_i(0.0, 2.0 * std::sqrt(2.0));
    CHECK(rel_diff(gain_pdf(ChannelSpec::uniform(2.0, 1, 1.0), 1.0), expect) < 1e-13);
    // density at origin: zero for M > 1, e^-K / p_dif for M = 1
    CHECK(gain_pdf(ChannelSpec::uniform(3.0, 2, 1.0), 0.0) == 0.0);
    CHECK(rel_diff(gain_pdf(ChannelSpec::uniform(2.0, 1, 4.0), 0.0),
                   std::exp(-2.0) / 4.0) < 1e-15);
    // frozen eight-antenna reference (50-digit arithmetic)
    const ChannelSpec m8 = ChannelSpec::uniform(0.375, 8, 1.0);
    CHECK(m8.k_sum() == 3.0);
    CHECK(rel_diff(gain_pdf(m8, 20.0), 0.008613102013170268) < 1e-12);
    CHECK(rel_diff(gain_cdf(m8, 20.0), 0.9807570049699708) < 1e-12);
}

TEST_CASE("gain_pdf matches a finite difference of the CDF") {
    struct Case {
        ChannelSpec spec;
        double q;
    };
    const Case cases[] = {
        {ChannelSpec::uniform(0.0, 1, 1.0), 0.5},
        {ChannelSpec::uniform(2.5, 4, 1.5), 6.0},
        {ChannelSpec::uniform(0.375, 8, 1.0), 20.0},
        {ChannelSpec::uniform(10.0, 2, 1.0), 1.0},
    };
    for (const auto& c : cases) {
        const double h = 1e-5 * c.q;
        const double fd = (gain_cdf(c.spec, c.q + h) - gain_cdf(c.spec, c.q - h)) / (2.0 * h);
        CHECK(rel_diff(gain_pdf(c.spec, c.q), fd) < 1e-6);
    }
}

TEST_CASE("gain_pdf integrates to gain_cdf") {
    struct Case {
        ChannelSpec spec;
        double q;
    };
    const Case cases[] = {
        {ChannelSpec({1.2, 0.3, 2.0}, 0.7), 2.5},
        {ChannelSpec::uniform(10.0, 1, 1.0), 8.0},
        {ChannelSpec::uniform(1.0, 4, 2.0), 9.0},
    };
    for (const auto& c : cases) {
        const auto pdf = [&](double t) { return gain_pdf(c.spec, t); };
        const double integral = oracle::integrate(pdf, 0.0, c.q);
        CHECK(rel_diff(integral, gain_cdf(c.spec, c.q)) < 1e-9);
    }
}

TEST_CASE("mean of the density matches mean_gain") {
    for (const ChannelSpec& spec :
         {ChannelSpec::uniform(3.0, 2, 1.5), ChannelSpec({0.5, 4.0}, 1.0),
          ChannelSpec::uniform(0.0, 16, 0.25)}) {
        const double mean = mean_gain(spec);
        const double sd = std::sqrt(static_cast<double>(spec.antennas()) *
                                    (2.0 * spec.k_sum() / spec.antennas() + 1.0)) *
                          spec.p_dif();
        const auto integrand = [&](double t) { return t * gain_pdf(spec, t); };
        const double est = oracle::integrate(integrand, 0.0, mean + 40.0 * sd + 40.0);
        CHECK(rel_diff(est, mean) < 1e-6);
    }
}

TEST_CASE("Marcum-difference identity for the density") {
    const ChannelSpec spec = ChannelSpec::uniform(1.0, 4, 2.0);
    const double u = 3.0 / spec.p_dif();
    const double diff =
        sf::marcum_p(3.0, spec.k_sum(), u) - sf::marcum_p(4.0, spec.k_sum(), u);
    CHECK(std::fabs(spec.p_dif() * gain_pdf(spec, 3.0) - diff) < 1e-12);
}

TEST_CASE("per-antenna K lists only matter through their sum") {
    const ChannelSpec a({1.0, 3.0}, 1.0);
    const ChannelSpec b({2.0, 2.0}, 1.0);
    const ChannelSpec c = ChannelSpec::uniform(2.0, 2, 1.0);
    CHECK(a.k_sum() == b.k_sum());
    CHECK(b.k_factors() == c.k_factors());
    for (double q : {0.3, 1.0, 4.0, 9.0}) {
        CHECK(gain_cdf(a, q) == gain_cdf(b, q));
        CHECK(gain_cdf(b, q) == gain_cdf(c, q));
        CHECK(gain_pdf(a, q) == gain_pdf(b, q));
    }
}

TEST_CASE("scaling the diffuse power rescales gains") {
    const ChannelSpec base = ChannelSpec::uniform(1.5, 3, 1.0);
    const ChannelSpec x4 = ChannelSpec::uniform(1.5, 3, 4.0);  // exact scale
    const ChannelSpec x37 = ChannelSpec::uniform(1.5, 3, 3.7);
    for (double q : {0.5, 2.0, 7.0}) {
        CHECK(gain_cdf(x4, 4.0 * q) == gain_cdf(base, q));
        CHECK(rel_diff(gain_cdf(x37, 3.7 * q), gain_cdf(base, q)) < 1e-13);
    }
}

TEST_CASE("gain_quantile closed forms and round trips") {
    const ChannelSpec rayleigh = ChannelSpec::uniform(0.0, 1, 1.0);
    CHECK(rel_diff(gain_quantile(rayleigh, 0.5), std::log(2.0)) < 1e-10);
    CHECK(rel_diff(gain_quantile(rayleigh, 1e-6), 1.0000005000003333e-6) < 1e-10);

    const ChannelSpec cases[] = {
        rayleigh,
        ChannelSpec::uniform(10.0, 2, 1.0),
        ChannelSpec::uniform(1.0, 64, 1.0),
        ChannelSpec::uniform(100.0, 128, 1.0),
    };
    for (const auto& spec : cases) {
        for (double p : {1e-9, 1e-6, 1e-3, 0.5}) {
            const double q = gain_quantile(spec, p);
            CHECK(std::fabs(std::exp(gain_log_cdf(spec, q)) - p) <= 1e-10 * p);
        }
    }
}

TEST_CASE("gain_quantile scales linearly with p_dif") {
    const ChannelSpec base = ChannelSpec::uniform(2.0, 4, 1.0);
    const ChannelSpec scaled = ChannelSpec::uniform(2.0, 4, 5.25);
    for (double p : {1e-6, 0.02, 0.5}) {
        CHECK(rel_diff(gain_quantile(scaled, p), 5.25 * gain_quantile(base, p)) < 1e-9);
    }
}

TEST_CASE("gain_quantile rejects out-of-range probabilities") {
    const ChannelSpec spec = ChannelSpec::uniform(0.0, 1, 1.0);
    CHECK_THROWS_AS(gain_quantile(spec, 0.0), std::domain_error);
    CHECK_THROWS_AS(gain_quantile(spec, 1.0), std::domain_error);
    CHECK_THROWS_AS(gain_quantile(spec, -0.2), std::domain_error);
    CHECK_THROWS_AS(gain_quantile(spec, std::nan("")), std::domain_error);
}

TEST_CASE("normalize_unit_mean") {
    const ChannelSpec spec = ChannelSpec::uniform(10.0, 16, 2.3);
    const ChannelSpec unit = normalize_unit_mean(spec);
    CHECK(std::fabs(mean_gain(unit) - 1.0) < 1e-14);
    // Rayleigh with p_dif=3 normalizes to the standard exponential
    const ChannelSpec ray3 = normalize_unit_mean(ChannelSpec::uniform(0.0, 1, 3.0));
    CHECK(rel_diff(gain_cdf(ray3, std::log(2.0)), 0.5) < 1e-13);
    // CDF of the normalized channel at q equals the original at q * mean
    const double mean = mean_gain(spec);
    for (double q : {0.2, 1.0, 1.4}) {
        CHECK(rel_diff(gain_cdf(unit, q), gain_cdf(spec, q * mean)) < 1e-12);
    }
}

TEST_CASE("sc_cdf selection combining") {
    const ChannelSpec rayleigh = ChannelSpec::uniform(0.0, 1, 1.0);
    const double q_med = std::log(2.0);
    CHECK(rel_diff(sc_cdf(rayleigh, 1, q_med), gain_cdf(rayleigh, q_med)) < 1e-15);
    CHECK(rel_diff(sc_cdf(rayleigh, 2, q_med), 0.25) < 1e-13);

    // deep tail stays representable through the log domain
    const double q_small = gain_quantile(rayleigh, 1e-2);
    CHECK(rel_diff(sc_cdf(rayleigh, 8, q_small), 1e-16) < 1e-9);

    // selection combining is the pessimistic bound: SC outage >= MRC outage
    const ChannelSpec mrc8 = ChannelSpec::uniform(0.0, 8, 1.0);
    for (double q : {0.1, 1.0, 4.0}) {
        CHECK(sc_cdf(rayleigh, 8, q) >= gain_cdf(mrc8, q));
    }

    CHECK_THROWS_AS(sc_cdf(ChannelSpec::uniform(0.0, 2, 1.0), 2, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(sc_cdf(rayleigh, 0, 1.0), std::domain_error);
}
