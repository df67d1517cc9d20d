#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gbcheck/metric.hpp"
#include "gbcheck/quad.hpp"

namespace gbcheck::surface {

enum class SurfaceKind { Sphere, Torus };

/// Sphere punctures sit at a chart center (z = 0 or z = ∞, the rotationally
/// symmetric catalog); torus punctures at plane positions in the fundamental
/// parallelogram. A blended puncture interpolates u between the profile and
/// the base factor across [blend_r0, blend_r1]; an unblended one replaces the
/// chart factor outright (sphere only, chart_radius = 1) and is checked for
/// transition consistency against the opposite chart.
struct PunctureSpec {
    enum class Location { Zero, Infinity, Plane };
    Location location = Location::Zero;
    std::complex<double> position{0.0, 0.0}; // torus only
    metric::SingularProfile profile;
    double chart_radius = 0.0; // 0 -> default
    bool blended = true;
    double blend_r0 = 0.0;
    double blend_r1 = 0.0;
};

struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::Sphere;
    std::complex<double> tau{0.0, 1.0}; // torus modulus, Im tau > 0
    std::vector<PunctureSpec> punctures;
};

/// One polar integration chart of the assembled surface. The conformal
/// factor is u = u0 + W·(s + v - u0) with u0 the catalog base factor, s + v
/// the puncture profile and W the blend weight (1 inside blend_r0, 0 outside
/// blend_r1, identically 1 for unblended punctures).
struct Chart {
    std::string name;
    double extent = 1.0; // outer radius in chart coordinates
    bool round_base = false; // round-sphere base factor vs flat
    std::optional<metric::ConformalPatchMetric> puncture;
    bool blended = true;
    metric::SmoothTerm blend_weight; // constant 1 when not blended
    double blend_r0 = 0.0, blend_r1 = 0.0;
    int spec_index = -1; // index into SurfaceSpec::punctures
};

class Surface {
public:
    const SurfaceSpec& spec() const { return spec_; }
    int euler_characteristic() const { return chi_; }
    const std::vector<Chart>& charts() const { return charts_; }

    /// -r²·Δu at t = log r on the given chart.
    double chart_density_logvar(const Chart& chart, double t, double theta) const;
    double chart_density(const Chart& chart, double r, double theta) const;
    /// r ∂_r u on the given chart.
    double chart_radial_slope(const Chart& chart, double r, double theta) const;
    double chart_u(const Chart& chart, double r, double theta) const;

private:
    friend Surface build_surface(const SurfaceSpec&);
    SurfaceSpec spec_;
    std::vector<Chart> charts_;
    int chi_ = 2;
};

/// Validates the spec and assembles the chart cover. Throws ValidationError
/// on overlapping charts, guard violations, or transition-inconsistent
/// unblended profiles.
Surface build_surface(const SurfaceSpec& spec);

struct CurvatureBreakdown {
    double value_over_2pi = 0.0;
    double summed_error = 0.0; // absolute, before the 1/2π normalization
    std::size_t evaluations = 0;
    bool converged = false;
};

/// (1/2π) ∫ K dA, chart by chart: a log-variable radial integral over each
/// puncture disk (split radius = split_scale · blend_r0, or a quarter chart
/// for unblended punctures) plus a 2D rule over the remainder. A nonzero
/// inner_cutoff integrates over the complement of the eps-disks around the
/// punctures instead, the shrinking-boundary form of the identity.
CurvatureBreakdown total_curvature_detail(const Surface& s, const quad::Tolerances& tol = {},
                                          double split_scale = 1.0, double inner_cutoff = 0.0);
CurvatureBreakdown l1_curvature_detail(const Surface& s, const quad::Tolerances& tol = {},
                                       double split_scale = 1.0, double inner_cutoff = 0.0);
double total_curvature(const Surface& s, const quad::Tolerances& tol = {});
double l1_curvature(const Surface& s, const quad::Tolerances& tol = {});

struct QuadratureMeta {
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    std::size_t max_evaluations = 0;
    std::size_t total_evaluations = 0;
    double summed_error_estimate = 0.0;
    bool total_converged = false;
    bool l1_converged = false;
    std::vector<std::string> notes;
};

struct GaussBonnetReport {
    int chi = 0;
    std::vector<double> orders;
    double total_curvature_over_2pi = 0.0;
    double l1_curvature = 0.0;
    double defect = 0.0; // total/2π - chi - Σ orders
    std::vector<quad::LadderResult> flux_ladders;
    QuadratureMeta quadrature_meta;
};

struct LadderParams {
    double eps0 = 0.0; // 0 -> per-puncture default (just inside the pure-profile region)
    int count = 8;
};

GaussBonnetReport gauss_bonnet_defect(const Surface& s, const quad::Tolerances& tol = {},
                                      const LadderParams& ladder = {});

} // namespace gbcheck::surface
