#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "gbcheck/config.hpp"
#include "gbcheck/errors.hpp"
#include "gbcheck/logcalc.hpp"
#include "gbcheck/metric.hpp"
#include "gbcheck/quad.hpp"
#include "gbcheck/sks.hpp"
#include "gbcheck/surface.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace lc = gbcheck::logcalc;
namespace mt = gbcheck::metric;
namespace qd = gbcheck::quad;
namespace sf = gbcheck::surface;
namespace sk = gbcheck::sks;
namespace cfg = gbcheck::config;
using nlohmann::json;

namespace {

mt::ConformalPatchMetric make_patch(double alpha, const std::vector<double>& betas,
                                    const std::string& smooth_json, double chart_radius,
                                    bool puncture) {
    mt::SingularProfile p;
    p.alpha = alpha;
    p.betas = betas;
    if (!smooth_json.empty()) p.smooth = cfg::smooth_term_from_json(json::parse(smooth_json));
    if (chart_radius == 0.0)
        chart_radius = mt::ConformalPatchMetric::default_chart_radius(p.depth());
    return mt::ConformalPatchMetric(p, chart_radius, puncture);
}

py::dict ladder_dict(const qd::LadderResult& l) {
    py::dict d;
    d["radii"] = l.radii;
    d["values"] = l.values;
    d["error_estimates"] = l.error_estimates;
    d["liminf_estimate"] = l.liminf_estimate;
    d["log_fit_coefficient"] = l.log_fit_coefficient;
    d["log_fit_rms"] = l.log_fit_rms;
    return d;
}

std::string verify_json(const std::string& config_text) {
    const cfg::RunConfig run = cfg::run_config_from_json(json::parse(config_text));
    const sf::Surface surf = sf::build_surface(run.surface);
    sf::LadderParams ladder;
    ladder.eps0 = run.quadrature.ladder_eps0;
    ladder.count = run.quadrature.ladder_count;
    const sf::GaussBonnetReport rep =
        sf::gauss_bonnet_defect(surf, run.quadrature.tolerances(), ladder);
    return cfg::report_to_json(rep, run.output.precision_digits).dump();
}

qd::Tolerances tols(double rel, double abs) {
    qd::Tolerances t;
    t.rel_tol = rel;
    t.abs_tol = abs;
    return t;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gauss-Bonnet verification for conformal metrics with iterated-log "
              "singularities";

    py::register_exception<gbcheck::ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<gbcheck::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<gbcheck::NonConvergenceError>(m, "NonConvergenceError",
                                                         PyExc_RuntimeError);
    py::register_exception<gbcheck::OverflowError>(m, "EvaluationOverflowError",
                                                   PyExc_OverflowError);

    // iterated logarithms
    m.def("iterlog_domain_limit", &lc::domain_limit, "k"_a);
    m.def("iterlog_eval", &lc::iterlog_eval, "k"_a, "r"_a);
    m.def("iterlog_dr", &lc::iterlog_dr, "k"_a, "r"_a);
    m.def("iterlog_laplacian", &lc::iterlog_laplacian, "k"_a, "r"_a);
    m.def(
        "iterlog_abs_laplacian_integral",
        [](int k, double eps, double rel, double abs) {
            return lc::iterlog_abs_laplacian_integral(k, eps, tols(rel, abs));
        },
        "k"_a, "eps"_a, "rel_tol"_a = 1e-10, "abs_tol"_a = 1e-12);
    m.def("abs_laplacian_integral_closed_form", &lc::abs_laplacian_integral_closed_form,
          "k"_a, "eps"_a);

    // conformal patch metrics
    py::class_<mt::ConformalPatchMetric>(m, "Patch")
        .def_property_readonly("chart_radius", &mt::ConformalPatchMetric::chart_radius)
        .def_property_readonly("alpha",
                               [](const mt::ConformalPatchMetric& p) { return p.profile().alpha; })
        .def_property_readonly("betas",
                               [](const mt::ConformalPatchMetric& p) { return p.profile().betas; });
    m.def("make_patch", &make_patch, "alpha"_a, "betas"_a = std::vector<double>{},
          "smooth_json"_a = std::string{}, "chart_radius"_a = 0.0, "puncture"_a = true,
          "build a conformal patch metric u = alpha log r + sum_i betas[i] log^(i+1) r + v");
    m.def("eval_u", &mt::eval_u, "patch"_a, "r"_a, "theta"_a);
    m.def("laplacian_u", &mt::laplacian_u, "patch"_a, "r"_a, "theta"_a);
    m.def("curvature", &mt::curvature_K, "patch"_a, "r"_a, "theta"_a);
    m.def("curvature_density", &mt::euclidean_curvature_density, "patch"_a, "r"_a, "theta"_a);
    m.def("order_of", &mt::order_of, "patch"_a);
    m.def(
        "flux",
        [](const mt::ConformalPatchMetric& p, double eps, double rel, double abs) {
            return mt::flux(p, eps, tols(rel, abs));
        },
        "patch"_a, "eps"_a, "rel_tol"_a = 1e-10, "abs_tol"_a = 1e-12);
    m.def(
        "flux_ladder",
        [](const mt::ConformalPatchMetric& p, double eps0, int count) {
            return ladder_dict(qd::flux_ladder(p, eps0, count));
        },
        "patch"_a, "eps0"_a, "count"_a = 8);
    m.def(
        "dirichlet_energy_ladder",
        [](const mt::ConformalPatchMetric& p, double eps0, int count) {
            return ladder_dict(qd::dirichlet_energy_ladder(p, eps0, count));
        },
        "patch"_a, "eps0"_a, "count"_a = 8);

    // special Kahler local models
    py::class_<sk::SKModel>(m, "SKModel")
        .def_static("model_a", &sk::SKModel::model_a, "c"_a, "n"_a)
        .def_static("model_b_disk", &sk::SKModel::model_b_disk, "a"_a, "n"_a, "c"_a = 0.25)
        .def_static("model_b_asymptotic", &sk::SKModel::model_b_asymptotic, "beta"_a, "C"_a,
                    "n"_a)
        .def_property_readonly("exact", &sk::SKModel::exact);
    m.def("sks_order", &sk::sks_order, "model"_a);
    m.def("sks_patch", &sk::sks_patch, "model"_a);
    m.def(
        "sks_pde_residual",
        [](const sk::SKModel& model, double r, double theta) {
            return sk::pde_residual(sk::model_potential(model), sk::model_cubic(model), r,
                                    theta);
        },
        "model"_a, "r"_a, "theta"_a);
    m.def(
        "sks_curvature_density",
        [](const sk::SKModel& model, double r, double theta) {
            return sk::sk_curvature_density(sk::model_potential(model), sk::model_cubic(model),
                                            r, theta);
        },
        "model"_a, "r"_a, "theta"_a);
    m.def(
        "sks_l1_check",
        [](const sk::SKModel& model, double eps, double rel, double abs) {
            return sk::sks_l1_check(model, eps, tols(rel, abs));
        },
        "model"_a, "eps"_a, "rel_tol"_a = 1e-10, "abs_tol"_a = 1e-12);

    // whole-surface verification; config and report travel as JSON text
    m.def("verify_json", &verify_json, "config_json"_a,
          "run the Gauss-Bonnet verification for a JSON run configuration and "
          "return the report as JSON text");

#ifdef GBCHECK_VERSION
    m.attr("__version__") = GBCHECK_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
