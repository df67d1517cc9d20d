#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbcheck/config.hpp"
#include "gbcheck/errors.hpp"
#include "gbcheck/logcalc.hpp"
#include "gbcheck/metric.hpp"
#include "gbcheck/quad.hpp"
#include "gbcheck/sks.hpp"
#include "gbcheck/surface.hpp"

namespace lc = gbcheck::logcalc;
namespace mt = gbcheck::metric;
namespace qd = gbcheck::quad;
namespace sf = gbcheck::surface;
namespace sk = gbcheck::sks;
namespace cfg = gbcheck::config;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;
constexpr double kTwoPi = 6.283185307179586476925286766559;

struct CommonOpts {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int ladder_count = 0;
    std::string csv_dir;
    bool as_json = false;
};

qd::Tolerances tolerances(const CommonOpts& c) {
    qd::Tolerances t;
    t.rel_tol = c.rel_tol;
    t.abs_tol = c.abs_tol;
    return t;
}

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");
    cmd->add_option("--abs-tol", c.abs_tol, "absolute quadrature tolerance");
    cmd->add_flag("--json", c.as_json, "emit the result as JSON on stdout");
}

double fd_radial_laplacian(int k, double r) {
    const double h = r * 1e-4;
    const double fp = lc::iterlog_eval(k, r + h);
    const double f0 = lc::iterlog_eval(k, r);
    const double fm = lc::iterlog_eval(k, r - h);
    return (fp - 2.0 * f0 + fm) / (h * h) + (fp - fm) / (2.0 * h * r);
}

int cmd_laplacian(int k, const std::vector<double>& radii, const CommonOpts& opts) {
    json rows = json::array();
    if (!opts.as_json)
        std::printf("%14s %22s %22s %22s %12s\n", "r", "laplacian", "numerator",
                    "fd_check", "rel_diff");
    for (double r : radii) {
        const double lap = lc::iterlog_laplacian(k, r);
        // numerator of the closed form over the squared chain denominator
        double numerator = 0.0;
        if (k >= 1) {
            double denom = r;
            for (int j = 0; j < k; ++j) denom *= lc::iterlog_eval(j, r);
            numerator = lap * denom * denom;
        }
        const double fd = fd_radial_laplacian(k, r);
        const double rel = std::abs(lap - fd) / std::max(1.0, std::abs(fd));
        if (opts.as_json) {
            rows.push_back({{"r", r},
                            {"laplacian", lap},
                            {"numerator", numerator},
                            {"fd_check", fd},
                            {"rel_diff", rel}});
        } else {
            std::printf("%14.8g %22.15g %22.15g %22.15g %12.3e\n", r, lap, numerator, fd, rel);
        }
    }
    if (opts.as_json) {
        json out = {{"k", k}, {"rows", rows}};
        std::cout << out.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_integrate(int k, const std::vector<double>& eps_list, const CommonOpts& opts) {
    json rows = json::array();
    const char* note =
        "closed_form = 2*pi / prod_j log^{(j)}(eps); the bare radial antiderivative "
        "(-1/log eps for depth 1) omits the 2*pi angular factor";
    if (!opts.as_json)
        std::printf("%14s %22s %22s %14s\n", "eps", "integral", "closed_form", "abs_diff");
    for (double eps : eps_list) {
        const double value = lc::iterlog_abs_laplacian_integral(k, eps, tolerances(opts));
        const double closed = lc::abs_laplacian_integral_closed_form(k, eps);
        if (opts.as_json) {
            rows.push_back({{"eps", eps},
                            {"value", value},
                            {"closed_form", closed},
                            {"abs_diff", std::abs(value - closed)}});
        } else {
            std::printf("%14.8g %22.15g %22.15g %14.3e\n", eps, value, closed,
                        std::abs(value - closed));
        }
    }
    if (opts.as_json) {
        json out = {{"k", k}, {"rows", rows}, {"notes", json::array({note})}};
        std::cout << out.dump(2) << '\n';
    } else {
        std::printf("note: %s\n", note);
    }
    return kExitOk;
}

int cmd_flux(double alpha, const std::vector<double>& betas, const std::string& smooth_json,
             double chart_radius, double eps0, int count, const CommonOpts& opts) {
    mt::SingularProfile p;
    p.alpha = alpha;
    p.betas = betas;
    if (!smooth_json.empty()) p.smooth = cfg::smooth_term_from_json(json::parse(smooth_json));
    if (chart_radius == 0.0)
        chart_radius = mt::ConformalPatchMetric::default_chart_radius(p.depth());
    const mt::ConformalPatchMetric m(p, chart_radius, true);
    if (eps0 == 0.0) eps0 = 0.5 * chart_radius;
    if (count == 0) count = 8;
    const qd::LadderResult ladder = qd::flux_ladder(m, eps0, count, tolerances(opts));

    if (!opts.csv_dir.empty()) {
        std::filesystem::create_directories(opts.csv_dir);
        std::ofstream out(std::filesystem::path(opts.csv_dir) / "flux_ladder.csv");
        out << cfg::ladder_to_csv(ladder);
    }
    if (opts.as_json) {
        std::cout << cfg::ladder_to_json(ladder, 12).dump(2) << '\n';
    } else {
        std::printf("%14s %22s %22s\n", "eps", "flux", "flux/2pi");
        for (std::size_t i = 0; i < ladder.radii.size(); ++i)
            std::printf("%14.8g %22.15g %22.15g\n", ladder.radii[i], ladder.values[i],
                        ladder.values[i] / kTwoPi);
        std::printf("liminf |flux| = %.12g    C/log(eps) fit: C = %.6g (rms %.2e)\n",
                    ladder.liminf_estimate, ladder.log_fit_coefficient, ladder.log_fit_rms);
    }
    return kExitOk;
}

int cmd_sks(const std::string& variant, int n, double c, double a, double beta, double cap_c,
            const std::vector<double>& eps_list, const CommonOpts& opts) {
    sk::SKModel model;
    if (variant == "A" || variant == "a") {
        model = sk::SKModel::model_a(c, n);
    } else if (variant == "B" || variant == "b") {
        model = beta == 0.0 ? sk::SKModel::model_b_disk(a, n, c)
                            : sk::SKModel::model_b_asymptotic(beta, cap_c, n);
    } else {
        throw gbcheck::ValidationError("--variant must be A or B");
    }

    json out;
    out["variant"] = variant;
    out["order"] = sk::sks_order(model);

    double residual_max = 0.0;
    if (model.exact()) {
        const sk::PotentialField field = sk::model_potential(model);
        const sk::CubicMonomial theta0 = sk::model_cubic(model);
        const double rmax = sk::model_domain_radius(model);
        for (int i = 0; i < 40; ++i) {
            const double r = rmax * (0.05 + 0.9 * static_cast<double>(i) / 39.0);
            for (int j = 0; j < 16; ++j) {
                const double th = kTwoPi * static_cast<double>(j) / 16.0;
                residual_max =
                    std::max(residual_max, std::abs(sk::pde_residual(field, theta0, r, th)));
            }
        }
        out["residual_grid_max"] = residual_max;
    } else {
        out["residual_grid_max"] = nullptr; // asymptotic data carries no exact solution
    }

    json l1 = json::array();
    for (double eps : eps_list) {
        json row = {{"eps", eps}, {"value", sk::sks_l1_check(model, eps, tolerances(opts))}};
        if (model.variant == sk::SKModel::Variant::A)
            row["closed_form"] = sk::sks_l1_closed_form_a(eps);
        l1.push_back(row);
    }
    out["l1_checks"] = l1;

    if (opts.as_json) {
        std::cout << out.dump(2) << '\n';
    } else {
        std::printf("order = %.12g\n", out["order"].get<double>());
        if (model.exact())
            std::printf("residual grid max (40x16) = %.3e\n", residual_max);
        else
            std::printf("asymptotic data: no exact solution, residual grid skipped\n");
        for (const json& row : l1) {
            std::printf("L1(|K|, eps=%g) = %.12g", row["eps"].get<double>(),
                        row["value"].get<double>());
            if (row.contains("closed_form"))
                std::printf("   closed form %.12g", row["closed_form"].get<double>());
            std::printf("\n");
        }
    }
    return kExitOk;
}

int cmd_verify(const std::string& config_path, const CommonOpts& opts, bool rel_set,
               bool abs_set) {
    cfg::RunConfig run = cfg::load_run_config(config_path);
    if (rel_set) run.quadrature.rel_tol = opts.rel_tol;
    if (abs_set) run.quadrature.abs_tol = opts.abs_tol;
    if (opts.ladder_count > 0) run.quadrature.ladder_count = opts.ladder_count;
    if (!opts.csv_dir.empty()) run.output.csv_dir = opts.csv_dir;

    const sf::Surface surf = sf::build_surface(run.surface);
    sf::LadderParams ladder;
    ladder.eps0 = run.quadrature.ladder_eps0;
    ladder.count = run.quadrature.ladder_count;
    const sf::GaussBonnetReport rep =
        sf::gauss_bonnet_defect(surf, run.quadrature.tolerances(), ladder);

    const json report_json = cfg::report_to_json(rep, run.output.precision_digits);
    if (!run.output.report_path.empty()) {
        std::ofstream out(run.output.report_path);
        if (!out)
            throw gbcheck::ValidationError("cannot write report to '" +
                                           run.output.report_path + "'");
        out << report_json.dump(2) << '\n';
    }
    if (!run.output.csv_dir.empty()) {
        std::filesystem::create_directories(run.output.csv_dir);
        for (std::size_t i = 0; i < rep.flux_ladders.size(); ++i) {
            std::ostringstream name;
            name << "flux_ladder_" << i << ".csv";
            std::ofstream out(std::filesystem::path(run.output.csv_dir) / name.str());
            out << cfg::ladder_to_csv(rep.flux_ladders[i]);
        }
    }
    if (opts.as_json) std::cout << report_json.dump(2) << '\n';

    if (!rep.quadrature_meta.total_converged || !rep.quadrature_meta.l1_converged) {
        std::fprintf(stderr, "verification inconclusive: quadrature did not converge\n");
        return kExitNonConvergence;
    }
    const double gate =
        10.0 * std::max(rep.quadrature_meta.summed_error_estimate, run.quadrature.abs_tol);
    if (!(std::abs(rep.defect) <= gate)) {
        std::fprintf(stderr, "defect %.6e exceeds the error gate %.6e\n", rep.defect, gate);
        return kExitVerifyFailed;
    }
    if (!opts.as_json)
        std::printf("defect = %.6e (gate %.6e), total/2pi = %.12g, chi = %d\n", rep.defect,
                    gate, rep.total_curvature_over_2pi, rep.chi);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical Gauss-Bonnet verification for conformal metrics with "
                 "iterated-log singularities"};
    app.require_subcommand(1);

    auto* lap = app.add_subcommand("laplacian", "closed-form iterated-log Laplacians "
                                                "with a finite-difference cross-check");
    int lap_k = 1;
    std::vector<double> lap_r;
    CommonOpts lap_opts;
    lap->add_option("--k", lap_k, "iteration depth")->required();
    lap->add_option("--r", lap_r, "radii")->required()->delimiter(',');
    add_common(lap, lap_opts);

    auto* integ = app.add_subcommand(
        "integrate", "integral of |Laplacian of log^{(k)} r| over a punctured disk");
    int int_k = 1;
    std::vector<double> int_eps;
    CommonOpts int_opts;
    integ->add_option("--k", int_k, "iteration depth")->required();
    integ->add_option("--eps", int_eps, "disk radii")->required()->delimiter(',');
    add_common(integ, int_opts);

    auto* flux = app.add_subcommand("flux", "boundary flux ladder of a singular profile");
    double fl_alpha = 0.0, fl_chart = 0.0, fl_eps0 = 0.0;
    std::vector<double> fl_betas;
    std::string fl_smooth;
    CommonOpts fl_opts;
    flux->add_option("--alpha", fl_alpha, "coefficient of log r");
    flux->add_option("--betas", fl_betas, "iterated-log coefficients")->delimiter(',');
    flux->add_option("--smooth", fl_smooth, "smooth term as inline JSON");
    flux->add_option("--chart-radius", fl_chart, "chart radius (default: guard-safe)");
    flux->add_option("--eps0", fl_eps0, "largest ladder radius");
    flux->add_option("--ladder-count", fl_opts.ladder_count, "number of ladder rungs");
    flux->add_option("--csv-dir", fl_opts.csv_dir, "write the ladder as CSV here");
    add_common(flux, fl_opts);

    auto* verify = app.add_subcommand("verify", "assemble a surface from a config and "
                                                "check the Gauss-Bonnet identity");
    std::string cfg_path;
    CommonOpts v_opts;
    verify->add_option("--config", cfg_path, "run configuration (JSON)")->required();
    auto* relopt = verify->add_option("--rel-tol", v_opts.rel_tol, "override rel_tol");
    auto* absopt = verify->add_option("--abs-tol", v_opts.abs_tol, "override abs_tol");
    verify->add_option("--ladder-count", v_opts.ladder_count, "override ladder rung count");
    verify->add_option("--csv-dir", v_opts.csv_dir, "override the CSV output directory");
    verify->add_flag("--json", v_opts.as_json, "print the report to stdout");

    auto* sks = app.add_subcommand("sks", "special Kahler local models: residuals, "
                                          "orders, L1 curvature");
    std::string sk_variant = "A";
    int sk_n = 0;
    double sk_c = 0.25, sk_a = 0.5, sk_beta = 0.0, sk_C = 1.0;
    std::vector<double> sk_eps;
    CommonOpts sk_opts;
    sks->add_option("--variant", sk_variant, "A or B")->required();
    sks->add_option("--n", sk_n, "cubic-form order at the puncture");
    sks->add_option("--c", sk_c, "cubic coefficient");
    sks->add_option("--a", sk_a, "disk parameter for the exact model B");
    sks->add_option("--beta", sk_beta, "model-B exponent (nonzero -> asymptotic data)");
    sks->add_option("--C", sk_C, "model-B leading coefficient (asymptotic data)");
    sks->add_option("--eps", sk_eps, "L1-check radii")->delimiter(',');
    add_common(sks, sk_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (lap->parsed()) return cmd_laplacian(lap_k, lap_r, lap_opts);
        if (integ->parsed()) return cmd_integrate(int_k, int_eps, int_opts);
        if (flux->parsed())
            return cmd_flux(fl_alpha, fl_betas, fl_smooth, fl_chart, fl_eps0,
                            fl_opts.ladder_count, fl_opts);
        if (verify->parsed())
            return cmd_verify(cfg_path, v_opts, relopt->count() > 0, absopt->count() > 0);
        if (sks->parsed()) {
            if (sk_eps.empty()) sk_eps = {0.1};
            return cmd_sks(sk_variant, sk_n, sk_c, sk_a, sk_beta, sk_C, sk_eps, sk_opts);
        }
    } catch (const gbcheck::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const gbcheck::DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return kExitValidation;
    } catch (const gbcheck::NonConvergenceError& e) {
        std::fprintf(stderr, "non-convergence: %s\n", e.what());
        return kExitNonConvergence;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "json error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
