#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gbcheck::metric {
class ConformalPatchMetric;
}

namespace gbcheck::quad {

struct Tolerances {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_evaluations = std::size_t{1} << 20;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0; // absolute
    std::size_t evaluations = 0;
    bool converged = false;
};

/// A radial 2D density f(r); integrals are always of the area form f(r) r dr.
/// `log_density` is the same density expressed in the variable t = log r,
/// scaled by the area element: g(t) = r^2 f(r) at r = e^t. The engine works in
/// t (and s = log|t| near 0), so integrands that blow up like iterated logs
/// must supply `log_density` to stay evaluable below the underflow radius.
struct RadialIntegrand {
    std::function<double(double)> density;     // f(r)
    std::function<double(double)> log_density; // g(t) = e^{2t} f(e^t)
};

RadialIntegrand from_density(std::function<double(double)> f);
RadialIntegrand from_log_density(std::function<double(double)> g);

/// ∫_a^b f(r) r dr in the log variable. a == 0 is allowed only when
/// depth_hint >= 0, which declares the integrand integrable at the origin
/// with iterated-log depth `depth_hint` (0 = bounded density).
QuadResult integrate_radial_singular(const RadialIntegrand& f, double a, double b,
                                     int depth_hint, const Tolerances& tol = {});

/// ∫_0^{2π} h(θ) dθ by the periodic trapezoid rule with node doubling
/// (spectrally accurate for smooth periodic h). Starts at 16 nodes.
QuadResult integrate_circle(const std::function<double(double)>& h, const Tolerances& tol = {});

/// ∫∫ F(r,θ) r dr dθ over the annulus r_inner < r < r_outer: circle rule in θ
/// of an adaptive radial integral. F must be bounded on the closed annulus.
QuadResult integrate_chart_2d(const std::function<double(double, double)>& density,
                              double r_inner, double r_outer, const Tolerances& tol = {});

/// Values of a quantity along a dyadic ladder of shrinking radii
/// eps_i = eps0 * 2^{-i}, plus the tail-half minimum of |value| used as the
/// numeric stand-in for a liminf.
struct LadderResult {
    std::vector<double> radii;
    std::vector<double> values;
    std::vector<double> error_estimates;
    double liminf_estimate = 0.0;
    // least-squares fit of the tail values against the model C / log(eps)
    double log_fit_coefficient = 0.0;
    double log_fit_rms = 0.0;
};

double liminf_tail_estimate(const std::vector<double>& values);

LadderResult flux_ladder(const metric::ConformalPatchMetric& m, double eps0, int count,
                         const Tolerances& tol = {});

/// Dirichlet energy ∫ ||∇v||^2 dx dy of the smooth remainder v over the
/// annuli eps_i < r < chart_radius; values form an increasing sequence.
LadderResult dirichlet_energy_ladder(const metric::ConformalPatchMetric& m, double eps0,
                                     int count, const Tolerances& tol = {});

} // namespace gbcheck::quad
