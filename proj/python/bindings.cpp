#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "urdiv/channel_model.hpp"
#include "urdiv/monte_carlo.hpp"
#include "urdiv/reliability_metrics.hpp"
#include "urdiv/reporting.hpp"
#include "urdiv/special_functions.hpp"

namespace py = pybind11;
using namespace urdiv;

namespace {

TableMetric metric_from_name(const std::string& name) {
    if (name == "nld") return TableMetric::normalized_local_diversity;
    if (name == "margin") return TableMetric::fading_margin_db;
    throw std::domain_error("metric must be 'nld' or 'margin': '" + name + "'");
}

CurveKind kind_from_name(const std::string& name) {
    if (name == "cdf") return CurveKind::cdf;
    if (name == "ld-gain") return CurveKind::ld_gain;
    if (name == "ld-prob") return CurveKind::ld_prob;
    throw std::domain_error("kind must be 'cdf', 'ld-gain' or 'ld-prob': '" + name +
                            "'");
}

GridSpec grid_from_tuple(const std::tuple<double, double, std::size_t>& t) {
    return GridSpec{std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

}  // namespace

PYBIND11_MODULE(_urdiv, m) {
    m.doc() = "Analytic outage / local-diversity toolkit for multi-antenna "
              "Rician fading channels";

    // special functions
    m.def("bessel_i", &sf::bessel_i, py::arg("order"), py::arg("z"),
          "Modified Bessel function of the first kind I_order(z)");
    m.def("log_bessel_i", &sf::log_bessel_i, py::arg("order"), py::arg("z"));
    m.def("reg_lower_gamma", &sf::reg_lower_gamma, py::arg("shape"), py::arg("x"),
          "Regularized lower incomplete gamma P(shape, x)");
    m.def("log_reg_lower_gamma", &sf::log_reg_lower_gamma, py::arg("shape"),
          py::arg("x"));
    m.def(
        "marcum_p",
        [](double order, double noncentrality, double x) {
            return sf::marcum_p(order, noncentrality, x);
        },
        py::arg("order"), py::arg("noncentrality"), py::arg("x"),
        "CDF of the unit-scale noncentral gamma law (complementary Marcum Q)");
    m.def(
        "marcum_p_log",
        [](double order, double noncentrality, double x) {
            return sf::marcum_p_log(order, noncentrality, x);
        },
        py::arg("order"), py::arg("noncentrality"), py::arg("x"));

    // channel model
    py::class_<ChannelSpec>(m, "ChannelSpec")
        .def(py::init<std::vector<double>, double>(), py::arg("k_factors"),
             py::arg("p_dif") = 1.0)
        .def_static("uniform", &ChannelSpec::uniform, py::arg("k_factor"),
                    py::arg("antennas"), py::arg("p_dif") = 1.0)
        .def_static("uniform_db", &ChannelSpec::uniform_db, py::arg("k_db"),
                    py::arg("antennas"), py::arg("p_dif") = 1.0)
        .def_property_readonly("antennas", &ChannelSpec::antennas)
        .def_property_readonly("p_dif", &ChannelSpec::p_dif)
        .def_property_readonly("k_factors", &ChannelSpec::k_factors)
        .def_property_readonly("k_sum", &ChannelSpec::k_sum)
        .def("__repr__", [](const ChannelSpec& s) {
            return "ChannelSpec(antennas=" + std::to_string(s.antennas()) +
                   ", k_sum=" + format_sig6(s.k_sum()) +
                   ", p_dif=" + format_sig6(s.p_dif()) + ")";
        });

    m.def("gain_cdf", &gain_cdf, py::arg("spec"), py::arg("q"));
    m.def("gain_log_cdf", &gain_log_cdf, py::arg("spec"), py::arg("q"));
    m.def("gain_pdf", &gain_pdf, py::arg("spec"), py::arg("q"));
    m.def("gain_log_pdf", &gain_log_pdf, py::arg("spec"), py::arg("q"));
    m.def("gain_quantile", &gain_quantile, py::arg("spec"), py::arg("p"));
    m.def("mean_gain", &mean_gain, py::arg("spec"));
    m.def("normalize_unit_mean", &normalize_unit_mean, py::arg("spec"));
    m.def("sc_cdf", &sc_cdf, py::arg("spec"), py::arg("branches"), py::arg("q"),
          "Selection-combining CDF from a single-antenna element spec");

    // reliability metrics
    py::class_<LocalDiversityPoint>(m, "LocalDiversityPoint")
        .def_readonly("gain", &LocalDiversityPoint::gain)
        .def_readonly("probability", &LocalDiversityPoint::probability)
        .def_readonly("diversity", &LocalDiversityPoint::diversity)
        .def_readonly("normalized", &LocalDiversityPoint::normalized)
        .def("__repr__", [](const LocalDiversityPoint& p) {
            return "LocalDiversityPoint(gain=" + format_sig6(p.gain) +
                   ", probability=" + format_sig6(p.probability) +
                   ", diversity=" + format_sig6(p.diversity) +
                   ", normalized=" + format_sig6(p.normalized) + ")";
        });

    m.def("local_diversity", &local_diversity, py::arg("spec"), py::arg("q"));
    m.def("local_diversity_marcum", &local_diversity_marcum, py::arg("spec"),
          py::arg("q"));
    m.def("local_diversity_at_probability", &local_diversity_at_probability,
          py::arg("spec"), py::arg("p"));
    m.def("fading_margin", &fading_margin, py::arg("spec"), py::arg("p_target"));
    m.def("dkw_epsilon", &dkw_epsilon, py::arg("samples"), py::arg("confidence"));

    py::class_<DkwBound>(m, "DkwBound")
        .def_readonly("samples", &DkwBound::samples)
        .def_readonly("confidence", &DkwBound::confidence)
        .def_readonly("epsilon", &DkwBound::epsilon);
    m.def("dkw_bound", &dkw_bound, py::arg("samples"), py::arg("confidence"));

    // Monte Carlo
    py::class_<EcdfResult>(m, "EcdfResult")
        .def(py::init<std::vector<double>>(), py::arg("sorted_gains"))
        .def("evaluate", &EcdfResult::evaluate, py::arg("q"))
        .def("__len__", &EcdfResult::size)
        .def_property_readonly("gains",
                               [](const EcdfResult& e) { return e.gains(); });

    m.def(
        "sample_gains",
        [](const ChannelSpec& spec, std::uint64_t seed, std::size_t n_samples,
           unsigned n_streams, const std::vector<double>& phases) {
            SamplerConfig config{spec, seed, n_samples, n_streams, phases};
            return sample_effective_gains(config);
        },
        py::arg("spec"), py::arg("seed"), py::arg("n_samples"),
        py::arg("n_streams") = 1, py::arg("phases") = std::vector<double>{},
        "Seed-reproducible effective-gain sample, sorted ascending");

    py::class_<DkwBand>(m, "DkwBand")
        .def_property_readonly("epsilon", &DkwBand::epsilon)
        .def("upper", &DkwBand::upper, py::arg("q"))
        .def("lower", &DkwBand::lower, py::arg("q"));
    m.def("dkw_band", &dkw_band, py::arg("ecdf"), py::arg("confidence"),
          py::keep_alive<0, 1>());

    py::class_<PhaseInvarianceReport>(m, "PhaseInvarianceReport")
        .def_readonly("passed", &PhaseInvarianceReport::pass)
        .def_readonly("max_abs_deviation", &PhaseInvarianceReport::max_abs_deviation)
        .def_readonly("threshold", &PhaseInvarianceReport::threshold)
        .def_readonly("probes", &PhaseInvarianceReport::probes);
    m.def("phase_invariance_check", &phase_invariance_check, py::arg("spec"),
          py::arg("seed"), py::arg("n_samples"));

    m.def("write_gain_dump", &write_gain_dump, py::arg("path"), py::arg("ecdf"));
    m.def("read_gain_dump", &read_gain_dump, py::arg("path"));

    // reporting
    m.def(
        "metric_table_csv",
        [](const std::string& metric, double probability,
           std::optional<std::vector<double>> k_db,
           std::optional<std::vector<std::size_t>> antennas, bool rounded) {
            const MetricTable t = build_metric_table(
                metric_from_name(metric), probability,
                k_db ? *k_db : default_k_db_grid(),
                antennas ? *antennas : default_antenna_grid());
            return metric_table_csv(t, rounded);
        },
        py::arg("metric"), py::arg("probability") = 1e-6,
        py::arg("k_db") = py::none(), py::arg("antennas") = py::none(),
        py::arg("rounded") = false,
        "CSV of normalized local diversity ('nld') or fading margin ('margin') "
        "over a (K dB, antenna count) grid");
    m.def(
        "curve_csv",
        [](const std::string& kind, const ChannelSpec& spec, bool normalize,
           std::optional<std::tuple<double, double, std::size_t>> grid) {
            const CurveKind k = kind_from_name(kind);
            const Curve c = build_curve(
                k, spec, normalize,
                grid ? grid_from_tuple(*grid) : default_curve_grid(k));
            return curve_csv(c);
        },
        py::arg("kind"), py::arg("spec"), py::arg("normalize") = false,
        py::arg("grid") = py::none());
    m.def(
        "dkw_demo_csv",
        [](std::size_t samples, double confidence, std::uint64_t seed,
           std::optional<std::tuple<double, double, std::size_t>> grid) {
            return curve_csv(build_dkw_demo(
                samples, confidence, seed,
                grid ? grid_from_tuple(*grid) : GridSpec{-60.0, 20.0, 200}));
        },
        py::arg("samples"), py::arg("confidence") = 0.99, py::arg("seed") = 42,
        py::arg("grid") = py::none());
    m.def(
        "scenario_report",
        [](std::optional<std::string> config_json) {
            return scenario_report_json(config_json ? parse_scenario_config(*config_json)
                                                    : default_scenario());
        },
        py::arg("config_json") = py::none(),
        "Versioned JSON deployment comparison; None runs the built-in "
        "64-colocated vs 32-distributed scenario");
    m.def("parse_k_db", &parse_k_db, py::arg("text"));
    m.def("format_sig6", &format_sig6, py::arg("v"));
}
