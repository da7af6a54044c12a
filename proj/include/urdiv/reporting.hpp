#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "urdiv/channel_model.hpp"

namespace urdiv {

enum class TableMetric { normalized_local_diversity, fading_margin_db };

/// A summary metric evaluated over a (K dB, antenna count) grid.
struct MetricTable {
    TableMetric metric;
    double probability;
    std::vector<double> k_db;            // row labels; -inf means Rayleigh
    std::vector<std::size_t> antennas;   // column labels
    std::vector<std::vector<double>> cells;  // [row][column]
};

MetricTable build_metric_table(TableMetric metric, double probability,
                               const std::vector<double>& k_db,
                               const std::vector<std::size_t>& antennas);

/// CSV with header "k_db,1,2,4,...". Values at 6 significant digits, or with
/// presentation rounding (2 decimals for normalized diversity, 1 for margins)
/// when rounded is set.
std::string metric_table_csv(const MetricTable& table, bool rounded);

std::vector<double> default_k_db_grid();          // -inf, 0, 3, 6, 10, 20
std::vector<std::size_t> default_antenna_grid();  // 1 .. 128 in octaves

/// Inclusive endpoint grid; for probability axes the spacing is logarithmic,
/// for dB axes linear.
struct GridSpec {
    double start;
    double stop;
    std::size_t points;
};

enum class CurveKind { cdf, ld_gain, ld_prob };

struct Curve {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Figure-style curves. For gain-indexed kinds the grid is in dB and
/// `normalize` makes it relative to the mean gain; for ld_prob the grid is in
/// outage probability and `normalize` only affects the reported gain column.
Curve build_curve(CurveKind kind, const ChannelSpec& spec, bool normalize,
                  const GridSpec& grid);
GridSpec default_curve_grid(CurveKind kind);
std::string curve_csv(const Curve& curve);

/// ECDF-vs-analytic-CDF band demonstration (single-antenna Rayleigh element):
/// columns gain_db, analytic_cdf, ecdf, dkw_upper. The upper band floors at
/// dkw_epsilon(samples, confidence) left of the smallest sample.
Curve build_dkw_demo(std::size_t samples, double confidence, std::uint64_t seed,
                     const GridSpec& grid_db);

struct Deployment {
    std::string name;
    ChannelSpec spec;
};

struct ScenarioSpec {
    double p_target;
    std::vector<Deployment> deployments;
};

/// Co-located 64-antenna (K=1) vs distributed 32-antenna (K=4) comparison at
/// p = 1e-6, both with unit diffuse power.
ScenarioSpec default_scenario();

/// JSON config: {"p_target": ..., "deployments": [{"name", "antennas",
/// "k_db" | "k_factor" | "k_factors", "p_dif"}]}; "k_db" accepts the string
/// "-inf".
ScenarioSpec parse_scenario_config(const std::string& json_text);

/// Versioned JSON report ("schema": 1) with margins, means, local diversity
/// at the target, and a CDF curve per deployment.
std::string scenario_report_json(const ScenarioSpec& scenario);

/// Accepts "-inf" or a decimal dB value.
double parse_k_db(const std::string& text);

/// Shortest fixed formatting used across all CSV/JSON output: 6 significant
/// digits, "%g" style.
std::string format_sig6(double v);

}  // namespace urdiv
