// urdiv: analytic reliability metrics for multi-antenna Rician channels.
// Regenerates the metric tables, figure curves, the ECDF/DKW demonstration
// and the deployment comparison as CSV/JSON on stdout (or a file via -o).

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "urdiv/channel_model.hpp"
#include "urdiv/monte_carlo.hpp"
#include "urdiv/reliability_metrics.hpp"
#include "urdiv/reporting.hpp"

namespace {

using namespace urdiv;

std::size_t parse_count(double v, const char* what) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e18) {
        throw std::domain_error(std::string(what) + " must be a positive integer");
    }
    return static_cast<std::size_t>(v);
}

GridSpec parse_grid(const std::string& text) {
    std::istringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
        !std::getline(ss, c)) {
        throw std::domain_error("grid must look like start:stop:points");
    }
    try {
        return {std::stod(a), std::stod(b),
                static_cast<std::size_t>(std::stoul(c))};
    } catch (const std::exception&) {
        throw std::domain_error("grid must look like start:stop:points");
    }
}

// all commands assemble their full output before anything is written
void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open output file " + out_path);
    }
    os << payload;
    if (!os) {
        throw std::runtime_error("write failed on " + out_path);
    }
}

struct TableOpts {
    std::string metric;
    double p = 1e-6;
    std::vector<std::string> k_db;
    std::vector<std::size_t> m;
    bool round = false;
    std::string out;
};

std::string run_table(const TableOpts& o) {
    std::vector<double> k_grid;
    if (o.k_db.empty()) {
        k_grid = default_k_db_grid();
    } else {
        for (const auto& s : o.k_db) k_grid.push_back(parse_k_db(s));
    }
    const std::vector<std::size_t> m_grid = o.m.empty() ? default_antenna_grid() : o.m;
    const TableMetric metric = o.metric == "nld"
                                   ? TableMetric::normalized_local_diversity
                                   : TableMetric::fading_margin_db;
    return metric_table_csv(build_metric_table(metric, o.p, k_grid, m_grid), o.round);
}

struct CurveOpts {
    std::string kind;
    std::size_t m = 1;
    std::string k_db;
    double p_dif = 1.0;
    bool normalize = false;
    std::string grid;
    std::string out;
};

std::string run_curve(const CurveOpts& o) {
    const CurveKind kind = o.kind == "cdf"       ? CurveKind::cdf
                           : o.kind == "ld-gain" ? CurveKind::ld_gain
                                                 : CurveKind::ld_prob;
    const ChannelSpec spec = ChannelSpec::uniform_db(parse_k_db(o.k_db), o.m, o.p_dif);
    const GridSpec grid = o.grid.empty() ? default_curve_grid(kind) : parse_grid(o.grid);
    return curve_csv(build_curve(kind, spec, o.normalize, grid));
}

struct DkwOpts {
    double r = 1e6;
    double xi = 0.99;
    std::uint64_t seed = 42;
    std::string grid;
    std::string out;
};

std::string run_dkw(const DkwOpts& o) {
    const GridSpec grid =
        o.grid.empty() ? GridSpec{-60.0, 20.0, 200} : parse_grid(o.grid);
    return curve_csv(
        build_dkw_demo(parse_count(o.r, "--r"), o.xi, o.seed, grid));
}

struct ScenarioOpts {
    std::string config;
    std::string out;
};

std::string run_scenario(const ScenarioOpts& o) {
    if (o.config.empty()) {
        return scenario_report_json(default_scenario());
    }
    std::ifstream is(o.config);
    if (!is) {
        throw std::runtime_error("cannot open config file " + o.config);
    }
    std::ostringstream buf;
    buf << is.rdbuf();
    return scenario_report_json(parse_scenario_config(buf.str()));
}

struct McOpts {
    std::size_t m = 1;
    std::string k_db;
    double n = 1e6;
    std::uint64_t seed = 42;
    double p_dif = 1.0;
    unsigned streams = 1;
    std::string dump;
    std::string out;
};

std::string run_mc(const McOpts& o) {
    const ChannelSpec spec = ChannelSpec::uniform_db(parse_k_db(o.k_db), o.m, o.p_dif);
    SamplerConfig config{spec, o.seed, parse_count(o.n, "--n"), o.streams, {}};
    const EcdfResult ecdf = sample_effective_gains(config);

    double sum = 0.0;
    for (double g : ecdf.gains()) sum += g;
    const double sample_mean = sum / static_cast<double>(ecdf.size());

    if (!o.dump.empty()) {
        write_gain_dump(o.dump, ecdf);
    }

    std::string out = "key,value\n";
    const auto kv = [&out](const std::string& k, const std::string& v) {
        out += k;
        out += ',';
        out += v;
        out += '\n';
    };
    kv("samples", std::to_string(ecdf.size()));
    kv("seed", std::to_string(o.seed));
    kv("streams", std::to_string(o.streams));
    kv("antennas", std::to_string(spec.antennas()));
    kv("k_sum", format_sig6(spec.k_sum()));
    kv("p_dif", format_sig6(spec.p_dif()));
    kv("sample_mean", format_sig6(sample_mean));
    kv("analytic_mean", format_sig6(mean_gain(spec)));
    kv("sample_min", format_sig6(ecdf.gains().front()));
    kv("sample_max", format_sig6(ecdf.gains().back()));
    kv("dkw_epsilon_99", format_sig6(dkw_epsilon(ecdf.size(), 0.99)));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Reliability metrics (local diversity, fading margins, DKW bands) for "
        "M-antenna Rician channels"};
    app.require_subcommand(1);

    TableOpts table_opts;
    auto* table = app.add_subcommand(
        "table", "Metric grid over K-factor rows and antenna-count columns (CSV)");
    table->add_option("--metric", table_opts.metric,
                      "nld (normalized local diversity) or margin (fading margin, dB)")
        ->required()
        ->check(CLI::IsMember({"nld", "margin"}));
    table->add_option("--p", table_opts.p, "target outage probability")
        ->capture_default_str();
    table->add_option("--k-db", table_opts.k_db,
                      "K-factor rows in dB; -inf for Rayleigh (use --k-db=-inf)")
        ->delimiter(',');
    table->add_option("--m", table_opts.m, "antenna-count columns")->delimiter(',');
    table->add_flag("--round", table_opts.round,
                    "round like the reference tables (2 decimals nld, 1 margin)");
    table->add_option("-o,--output", table_opts.out, "write to file instead of stdout");

    CurveOpts curve_opts;
    auto* curve = app.add_subcommand("curve", "CDF or local-diversity curve (CSV)");
    curve->add_option("--kind", curve_opts.kind, "cdf, ld-gain or ld-prob")
        ->required()
        ->check(CLI::IsMember({"cdf", "ld-gain", "ld-prob"}));
    curve->add_option("--m", curve_opts.m, "antenna count")->required();
    curve->add_option("--k-db", curve_opts.k_db, "K-factor in dB (-inf for Rayleigh)")
        ->required();
    curve->add_option("--p-dif", curve_opts.p_dif, "diffuse power per antenna")
        ->capture_default_str();
    curve->add_flag("--normalize", curve_opts.normalize,
                    "gain axis relative to the mean gain");
    curve->add_option("--grid", curve_opts.grid,
                      "start:stop:points (dB for gain axes, probability for ld-prob)");
    curve->add_option("-o,--output", curve_opts.out, "write to file instead of stdout");

    DkwOpts dkw_opts;
    auto* dkw = app.add_subcommand(
        "dkw", "ECDF of a Rayleigh element vs analytic CDF with DKW upper band (CSV)");
    dkw->add_option("--r", dkw_opts.r, "number of observations")->capture_default_str();
    dkw->add_option("--xi", dkw_opts.xi, "band confidence")->capture_default_str();
    dkw->add_option("--seed", dkw_opts.seed, "sampler seed")->capture_default_str();
    dkw->add_option("--grid", dkw_opts.grid, "gain grid start:stop:points in dB");
    dkw->add_option("-o,--output", dkw_opts.out, "write to file instead of stdout");

    ScenarioOpts scenario_opts;
    auto* scenario = app.add_subcommand(
        "scenario", "Deployment comparison report (JSON, schema 1)");
    scenario->add_option("--config", scenario_opts.config,
                         "JSON scenario description (default: built-in comparison)");
    scenario->add_option("-o,--output", scenario_opts.out,
                         "write to file instead of stdout");

    McOpts mc_opts;
    auto* mc = app.add_subcommand(
        "mc", "Seeded Monte-Carlo effective-gain run, summary plus optional dump");
    mc->add_option("--m", mc_opts.m, "antenna count")->required();
    mc->add_option("--k-db", mc_opts.k_db, "K-factor in dB (-inf for Rayleigh)")
        ->required();
    mc->add_option("--n", mc_opts.n, "sample count")->capture_default_str();
    mc->add_option("--seed", mc_opts.seed, "run seed")->capture_default_str();
    mc->add_option("--p-dif", mc_opts.p_dif, "diffuse power per antenna")
        ->capture_default_str();
    mc->add_option("--streams", mc_opts.streams,
                   "worker threads (never changes the sample set)");
    mc->add_option("--dump", mc_opts.dump, "write sorted gains as a binary dump");
    mc->add_option("-o,--output", mc_opts.out, "write summary to file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*table) {
            emit(run_table(table_opts), table_opts.out);
        } else if (*curve) {
            emit(run_curve(curve_opts), curve_opts.out);
        } else if (*dkw) {
            emit(run_dkw(dkw_opts), dkw_opts.out);
        } else if (*scenario) {
            emit(run_scenario(scenario_opts), scenario_opts.out);
        } else if (*mc) {
            emit(run_mc(mc_opts), mc_opts.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
