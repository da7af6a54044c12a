#include "urdiv/reporting.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "urdiv/monte_carlo.hpp"
#include "urdiv/reliability_metrics.hpp"

namespace urdiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// presentation label for a K row: "-inf" or plain decimal
std::string k_label(double k_db) {
    if (std::isinf(k_db) && k_db < 0.0) return "-inf";
    return format_sig6(k_db);
}

void check_grid(const GridSpec& grid, bool probability_axis) {
    if (grid.points < 1) {
        throw std::domain_error("grid: need at least one point");
    }
    if (!std::isfinite(grid.start) || !std::isfinite(grid.stop) ||
        grid.start > grid.stop) {
        throw std::domain_error("grid: endpoints must be finite with start <= stop");
    }
    if (probability_axis &&
        (!(grid.start > 0.0) || !(grid.stop < 1.0))) {
        throw std::domain_error("grid: probabilities must lie in (0, 1)");
    }
}

double grid_point(const GridSpec& grid, std::size_t i, bool log_axis) {
    if (grid.points == 1) return grid.start;
    const double t = static_cast<double>(i) / static_cast<double>(grid.points - 1);
    if (log_axis) {
        return std::pow(10.0, std::log10(grid.start) +
                                  t * (std::log10(grid.stop) - std::log10(grid.start)));
    }
    return grid.start + t * (grid.stop - grid.start);
}

// 6-significant-digit round trip used to keep JSON artifacts byte-stable
double rounded6(double v) {
    return std::strtod(format_sig6(v).c_str(), nullptr);
}

nlohmann::json deployment_report(const Deployment& dep, double p_target) {
    const ChannelSpec& spec = dep.spec;
    const double mean = mean_gain(spec);
    const double median = gain_quantile(spec, 0.5);
    const LocalDiversityPoint pt = local_diversity_at_probability(spec, p_target);
    const double margin = 10.0 * std::log10(median / pt.gain);

    nlohmann::json curve_gain = nlohmann::json::array();
    nlohmann::json curve_prob = nlohmann::json::array();
    const GridSpec grid{-60.0, 20.0, 200};
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double rel_db = grid_point(grid, i, false);
        const double q = mean * std::pow(10.0, rel_db / 10.0);
        curve_gain.push_back(rounded6(10.0 * std::log10(q)));
        curve_prob.push_back(rounded6(std::exp(gain_log_cdf(spec, q))));
    }

    nlohmann::json j;
    j["name"] = dep.name;
    j["antennas"] = spec.antennas();
    j["k_factors_sum"] = rounded6(spec.k_sum());
    j["p_dif"] = rounded6(spec.p_dif());
    j["mean_gain"] = mean;  // exact: the headline comparison is on this value
    j["median_gain"] = rounded6(median);
    j["gain_at_target"] = rounded6(pt.gain);
    j["fading_margin_db"] = rounded6(margin);
    j["local_diversity_at_target"] = rounded6(pt.diversity);
    j["normalized_local_diversity"] = rounded6(pt.normalized);
    j["cdf_curve"] = {{"gain_db", curve_gain}, {"probability", curve_prob}};
    return j;
}

ChannelSpec spec_from_json(const nlohmann::json& d) {
    const double p_dif = d.value("p_dif", 1.0);
    if (d.contains("k_factors")) {
        std::vector<double> ks = d.at("k_factors").get<std::vector<double>>();
        if (d.contains("antennas") &&
            d.at("antennas").get<std::size_t>() != ks.size()) {
            throw std::domain_error(
                "scenario config: antennas does not match k_factors length");
        }
        return ChannelSpec(std::move(ks), p_dif);
    }
    const std::size_t antennas = d.at("antennas").get<std::size_t>();
    if (d.contains("k_factor")) {
        return ChannelSpec::uniform(d.at("k_factor").get<double>(), antennas, p_dif);
    }
    if (d.contains("k_db")) {
        const auto& kdb = d.at("k_db");
        const double v = kdb.is_string() ? parse_k_db(kdb.get<std::string>())
                                         : kdb.get<double>();
        return ChannelSpec::uniform_db(v, antennas, p_dif);
    }
    throw std::domain_error(
        "scenario config: deployment needs k_db, k_factor or k_factors");
}

}  // namespace

std::string format_sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double parse_k_db(const std::string& text) {
    if (text == "-inf") return -kInf;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw std::domain_error("K-factor in dB must be a decimal number or -inf: '" +
                                text + "'");
    }
    return v;
}

std::vector<double> default_k_db_grid() {
    return {-kInf, 0.0, 3.0, 6.0, 10.0, 20.0};
}

std::vector<std::size_t> default_antenna_grid() {
    return {1, 2, 4, 8, 16, 32, 64, 128};
}

MetricTable build_metric_table(TableMetric metric, double probability,
                               const std::vector<double>& k_db,
                               const std::vector<std::size_t>& antennas) {
    if (!(probability > 0.0) || !(probability < 0.5)) {
        throw std::domain_error("metric table: probability must lie in (0, 0.5)");
    }
    if (k_db.empty() || antennas.empty()) {
        throw std::domain_error("metric table: empty grid");
    }
    for (double k : k_db) {
        if (std::isnan(k) || k == kInf) {
            throw std::domain_error("metric table: K dB must be finite or -inf");
        }
    }
    MetricTable table{metric, probability, k_db, antennas, {}};
    table.cells.reserve(k_db.size());
    for (double k : k_db) {
        std::vector<double> row;
        row.reserve(antennas.size());
        for (std::size_t m : antennas) {
            const ChannelSpec spec = ChannelSpec::uniform_db(k, m, 1.0);
            if (metric == TableMetric::normalized_local_diversity) {
                row.push_back(local_diversity_at_probability(spec, probability).normalized);
            } else {
                row.push_back(fading_margin(spec, probability));
            }
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

std::string metric_table_csv(const MetricTable& table, bool rounded) {
    const int decimals =
        table.metric == TableMetric::normalized_local_diversity ? 2 : 1;
    std::string out = "k_db";
    for (std::size_t m : table.antennas) {
        out += ',';
        out += std::to_string(m);
    }
    out += '\n';
    for (std::size_t r = 0; r < table.k_db.size(); ++r) {
        out += k_label(table.k_db[r]);
        for (double cell : table.cells[r]) {
            out += ',';
            out += rounded ? format_fixed(cell, decimals) : format_sig6(cell);
        }
        out += '\n';
    }
    return out;
}

GridSpec default_curve_grid(CurveKind kind) {
    if (kind == CurveKind::ld_prob) {
        // figure axes run to 1; the quantile needs p < 1, so stop just short
        return {1e-9, 0.999, 200};
    }
    return {-60.0, 20.0, 200};
}

Curve build_curve(CurveKind kind, const ChannelSpec& spec, bool normalize,
                  const GridSpec& grid) {
    check_grid(grid, kind == CurveKind::ld_prob);
    const double mean = mean_gain(spec);
    const double m = static_cast<double>(spec.antennas());
    const char* gain_col = normalize ? "gain_rel_mean_db" : "gain_db";

    Curve curve;
    if (kind == CurveKind::cdf) {
        curve.columns = {gain_col, "cdf"};
    } else if (kind == CurveKind::ld_gain) {
        curve.columns = {gain_col, "local_diversity", "normalized_local_diversity"};
    } else {
        curve.columns = {"probability", gain_col, "local_diversity",
                         "normalized_local_diversity"};
    }
    curve.rows.reserve(grid.points);

    for (std::size_t i = 0; i < grid.points; ++i) {
        if (kind == CurveKind::ld_prob) {
            const double p = grid_point(grid, i, true);
            const LocalDiversityPoint pt = local_diversity_at_probability(spec, p);
            const double shown = normalize ? pt.gain / mean : pt.gain;
            curve.rows.push_back(
                {p, 10.0 * std::log10(shown), pt.diversity, pt.normalized});
        } else {
            const double x_db = grid_point(grid, i, false);
            const double q = (normalize ? mean : 1.0) * std::pow(10.0, x_db / 10.0);
            if (kind == CurveKind::cdf) {
                curve.rows.push_back({x_db, std::exp(gain_log_cdf(spec, q))});
            } else {
                const double d = local_diversity(spec, q);
                curve.rows.push_back({x_db, d, d / m});
            }
        }
    }
    return curve;
}

std::string curve_csv(const Curve& curve) {
    std::string out;
    for (std::size_t c = 0; c < curve.columns.size(); ++c) {
        if (c) out += ',';
        out += curve.columns[c];
    }
    out += '\n';
    for (const auto& row : curve.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_sig6(row[c]);
        }
        out += '\n';
    }
    return out;
}

Curve build_dkw_demo(std::size_t samples, double confidence, std::uint64_t seed,
                     const GridSpec& grid_db) {
    check_grid(grid_db, false);
    const ChannelSpec element = ChannelSpec::uniform(0.0, 1, 1.0);
    SamplerConfig config{element, seed, samples, 1, {}};
    const EcdfResult ecdf = sample_effective_gains(config);
    const DkwBand band = dkw_band(ecdf, confidence);

    Curve curve;
    curve.columns = {"gain_db", "analytic_cdf", "ecdf", "dkw_upper"};
    curve.rows.reserve(grid_db.points);
    for (std::size_t i = 0; i < grid_db.points; ++i) {
        const double x_db = grid_point(grid_db, i, false);
        const double q = std::pow(10.0, x_db / 10.0);
        curve.rows.push_back({x_db, std::exp(gain_log_cdf(element, q)),
                              ecdf.evaluate(q), band.upper(q)});
    }
    return curve;
}

ScenarioSpec default_scenario() {
    ScenarioSpec s;
    s.p_target = 1e-6;
    s.deployments.push_back({"colocated_64", ChannelSpec::uniform(1.0, 64, 1.0)});
    s.deployments.push_back({"distributed_32", ChannelSpec::uniform(4.0, 32, 1.0)});
    return s;
}

ScenarioSpec parse_scenario_config(const std::string& json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::domain_error(std::string("scenario config: invalid JSON: ") + e.what());
    }
    try {
        ScenarioSpec s;
        s.p_target = root.value("p_target", 1e-6);
        if (!(s.p_target > 0.0) || !(s.p_target < 0.5)) {
            throw std::domain_error("scenario config: p_target must lie in (0, 0.5)");
        }
        if (!root.contains("deployments") || !root.at("deployments").is_array() ||
            root.at("deployments").empty()) {
            throw std::domain_error("scenario config: needs a non-empty deployments list");
        }
        for (const auto& d : root.at("deployments")) {
            s.deployments.push_back({d.at("name").get<std::string>(), spec_from_json(d)});
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw std::domain_error(std::string("scenario config: ") + e.what());
    }
}

std::string scenario_report_json(const ScenarioSpec& scenario) {
    if (scenario.deployments.empty()) {
        throw std::domain_error("scenario: needs at least one deployment");
    }
    if (!(scenario.p_target > 0.0) || !(scenario.p_target < 0.5)) {
        throw std::domain_error("scenario: p_target must lie in (0, 0.5)");
    }
    nlohmann::json j;
    j["schema"] = 1;
    j["p_target"] = rounded6(scenario.p_target);
    j["deployments"] = nlohmann::json::array();
    for (const auto& dep : scenario.deployments) {
        j["deployments"].push_back(deployment_report(dep, scenario.p_target));
    }
    return j.dump(2) + "\n";
}

}  // namespace urdiv
