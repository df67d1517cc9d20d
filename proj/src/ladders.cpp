#include <cmath>
#include <vector>

#include "gbcheck/errors.hpp"
#include "gbcheck/metric.hpp"
#include "gbcheck/quad.hpp"

namespace gbcheck::quad {

namespace {

void fit_log_model(LadderResult& ladder) {
    // least squares through the origin of value ~ C * (1/log eps), tail half
    const std::size_t start = ladder.values.size() / 2;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < ladder.values.size(); ++i) {
        const double x = 1.0 / std::log(ladder.radii[i]);
        sxx += x * x;
        sxy += x * ladder.values[i];
    }
    ladder.log_fit_coefficient = sxx > 0.0 ? sxy / sxx : 0.0;
    double ss = 0.0;
    for (std::size_t i = start; i < ladder.values.size(); ++i) {
        const double x = 1.0 / std::log(ladder.radii[i]);
        const double res = ladder.values[i] - ladder.log_fit_coefficient * x;
        ss += res * res;
    }
    const auto n = static_cast<double>(ladder.values.size() - start);
    ladder.log_fit_rms = n > 0.0 ? std::sqrt(ss / n) : 0.0;
}

void check_ladder_args(const metric::ConformalPatchMetric& m, double eps0, int count) {
    if (count < 3) throw ValidationError("ladder needs at least 3 rungs");
    if (!(eps0 > 0.0) || !(eps0 < m.chart_radius()))
        throw ValidationError("ladder start radius must lie inside the chart");
}

} // namespace

LadderResult flux_ladder(const metric::ConformalPatchMetric& m, double eps0, int count,
                         const Tolerances& tol) {
    check_ladder_args(m, eps0, count);
    LadderResult out;
    double eps = eps0;
    for (int i = 0; i < count; ++i) {
        const QuadResult q = integrate_circle(
            [&m, eps](double theta) { return metric::radial_slope(m, eps, theta); }, tol);
        if (!q.converged) throw NonConvergenceError("flux ladder rung did not converge");
        out.radii.push_back(eps);
        out.values.push_back(q.value);
        out.error_estimates.push_back(q.error_estimate);
        eps *= 0.5;
    }
    out.liminf_estimate = liminf_tail_estimate(out.values);
    fit_log_model(out);
    return out;
}

LadderResult dirichlet_energy_ladder(const metric::ConformalPatchMetric& m, double eps0,
                                     int count, const Tolerances& tol) {
    check_ladder_args(m, eps0, count);
    const metric::SmoothTerm& v = m.profile().smooth;
    auto grad_sq = [&v](double r, double theta) {
        const metric::TermBundle b = v.eval(r, theta);
        return (b.r_dr * b.r_dr + b.dtheta * b.dtheta) / (r * r);
    };

    LadderResult out;
    // incremental annuli keep the sequence increasing by construction
    double outer = m.chart_radius();
    double eps = eps0;
    double acc = 0.0;
    double err = 0.0;
    for (int i = 0; i < count; ++i) {
        const QuadResult q = integrate_chart_2d(grad_sq, eps, outer, tol);
        if (!q.converged)
            throw NonConvergenceError("Dirichlet energy annulus integral did not converge");
        acc += q.value;
        err += q.error_estimate;
        out.radii.push_back(eps);
        out.values.push_back(acc);
        out.error_estimates.push_back(err);
        outer = eps;
        eps *= 0.5;
    }
    out.liminf_estimate = liminf_tail_estimate(out.values);
    fit_log_model(out);
    return out;
}

} // namespace gbcheck::quad
