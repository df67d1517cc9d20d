#include "gbcheck/surface.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "gbcheck/errors.hpp"
#include "gbcheck/logcalc.hpp"

namespace gbcheck::surface {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

metric::SmoothTerm round_base_term() {
    return metric::SmoothTerm::constant(std::log(2.0)) +
           metric::SmoothTerm::scale(-1.0, metric::SmoothTerm::log_one_plus(1.0));
}

metric::TermBundle base_bundle(const Chart& chart, double r) {
    if (!chart.round_base) return {};
    static const metric::SmoothTerm round = round_base_term();
    return round.eval(r, 0.0);
}

struct ProfileParts {
    double h = 0.0;      // s + v - u0
    double r_hr = 0.0;   // r ∂_r h
    double r2_lap = 0.0; // r² Δh
};

ProfileParts profile_parts(const metric::SingularProfile& p, const metric::TermBundle& u0,
                           double t, double theta) {
    ProfileParts out;
    const double r = std::exp(t);
    out.h = p.alpha * t - u0.value;
    out.r_hr = p.alpha - u0.r_dr;
    out.r2_lap = -(u0.r2_drr + u0.r_dr + u0.dtheta2);
    for (int l = 1; l <= p.depth(); ++l) {
        const double beta = p.betas[static_cast<std::size_t>(l - 1)];
        out.h += beta * logcalc::eval_logvar(l, t);
        out.r_hr += beta * logcalc::r_dr_logvar(l, t);
        out.r2_lap += beta * logcalc::r2_laplacian_logvar(l, t);
    }
    const metric::TermBundle v = p.smooth.eval(r, theta);
    out.h += v.value;
    out.r_hr += v.r_dr;
    out.r2_lap += v.r2_drr + v.r_dr + v.dtheta2;
    return out;
}

double min_lattice_norm(const std::complex<double>& tau) {
    double m = std::abs(std::complex<double>(1.0, 0.0));
    m = std::min(m, std::abs(tau));
    m = std::min(m, std::abs(tau + 1.0));
    m = std::min(m, std::abs(tau - 1.0));
    return m;
}

double min_image_distance(const std::complex<double>& p, const std::complex<double>& q,
                          const std::complex<double>& tau) {
    double best = 1e300;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            best = std::min(best, std::abs(p - q + static_cast<double>(a) +
                                           static_cast<double>(b) * tau));
    return best;
}

void check_transition_consistency(const Surface& s, const Chart& z_chart,
                                  const Chart& w_chart) {
    for (double rho : {0.9, 0.95, 0.99}) {
        for (int i = 0; i < 8; ++i) {
            const double theta = kTwoPi * static_cast<double>(i) / 8.0;
            const double uw = s.chart_u(w_chart, rho, theta);
            const double uz = s.chart_u(z_chart, 1.0 / rho, -theta);
            if (std::abs(uw - (uz - 2.0 * std::log(rho))) > 1e-8) {
                std::ostringstream os;
                os << "chart factors disagree across the sphere overlap near |w| = " << rho
                   << "; an unblended profile must transform as u - 2 log|w| under z = 1/w";
                throw ValidationError(os.str());
            }
        }
    }
}

// evaluation-count bookkeeping shared by the split integrals
struct PanelAccumulator {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
    void add(const quad::QuadResult& q, std::size_t real_evals = 0) {
        value += q.value;
        error += q.error_estimate;
        evaluations += real_evals ? real_evals : q.evaluations;
        converged = converged && q.converged;
    }
};

quad::Tolerances scaled(const quad::Tolerances& tol, double rel_f, double abs_f) {
    quad::Tolerances out = tol;
    out.rel_tol *= rel_f;
    out.abs_tol *= abs_f;
    return out;
}

void chart_curvature(const Surface& s, const Chart& chart, bool absolute,
                     const quad::Tolerances& tol, double split_scale, double inner_cutoff,
                     PanelAccumulator& acc) {
    auto dens = [&](double r, double theta) {
        const double d = s.chart_density(chart, r, theta);
        return absolute ? std::abs(d) : d;
    };
    if (!chart.puncture) {
        acc.add(quad::integrate_chart_2d(dens, 0.0, chart.extent, tol));
        return;
    }

    double rs = split_scale * (chart.blended ? chart.blend_r0 : 0.25 * chart.extent);
    rs = std::min(rs, 0.9 * chart.extent);

    // puncture disk in the log variable; the θ average is a cheap spectral rule
    const quad::Tolerances circle_tol = scaled(tol, 1e-2, 1e-2);
    std::size_t circle_evals = 0;
    bool circle_ok = true;
    auto ring_average = [&](double t) {
        const quad::QuadResult ring = quad::integrate_circle(
            [&](double theta) {
                const double d = s.chart_density_logvar(chart, t, theta);
                return absolute ? std::abs(d) : d;
            },
            circle_tol);
        circle_evals += ring.evaluations;
        circle_ok = circle_ok && ring.converged;
        return ring.value;
    };
    const int depth = chart.puncture->profile().depth();
    quad::QuadResult disk = quad::integrate_radial_singular(
        quad::from_log_density(ring_average), inner_cutoff, rs, depth, scaled(tol, 0.5, 0.5));
    disk.converged = disk.converged && circle_ok;
    acc.add(disk, circle_evals);

    acc.add(quad::integrate_chart_2d(dens, rs, chart.extent, scaled(tol, 0.5, 0.5)));
}

// Periodic trapezoid over the fundamental parallelogram with puncture charts
// masked out (they are integrated in polar form). With the catalog's flat
// base the masked density vanishes identically.
quad::QuadResult torus_bulk(const Surface& s, [[maybe_unused]] bool absolute,
                            const quad::Tolerances& tol) {
    const std::complex<double> tau = s.spec().tau;
    const double jac = tau.imag();
    auto masked = [&](double a, double b) {
        const std::complex<double> p(a + b * tau.real(), b * tau.imag());
        for (const Chart& chart : s.charts()) {
            const PunctureSpec& ps = s.spec().punctures[static_cast<std::size_t>(chart.spec_index)];
            const double d = min_image_distance(p, ps.position, tau);
            if (d < chart.extent) return 0.0;
        }
        return 0.0; // flat catalog base: nothing outside the charts either
    };
    quad::QuadResult out;
    std::size_t n = 8;
    double prev = 0.0;
    bool have_prev = false;
    while (out.evaluations + n * n <= tol.max_evaluations) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                sum += masked((static_cast<double>(i) + 0.5) / static_cast<double>(n),
                              (static_cast<double>(j) + 0.5) / static_cast<double>(n));
        out.evaluations += n * n;
        const double cur = jac * sum / static_cast<double>(n * n);
        out.value = cur;
        if (have_prev) {
            out.error_estimate = std::abs(cur - prev);
            if (out.error_estimate <= std::max(tol.abs_tol, tol.rel_tol * std::abs(cur))) {
                out.converged = true;
                return out;
            }
        }
        prev = cur;
        have_prev = true;
        n *= 2;
        if (n > 512) break;
    }
    return out;
}

CurvatureBreakdown curvature_detail(const Surface& s, bool absolute,
                                    const quad::Tolerances& tol, double split_scale,
                                    double inner_cutoff) {
    PanelAccumulator acc;
    for (const Chart& chart : s.charts())
        chart_curvature(s, chart, absolute, tol, split_scale, inner_cutoff, acc);
    if (s.spec().kind == SurfaceKind::Torus) acc.add(torus_bulk(s, absolute, tol));
    CurvatureBreakdown out;
    out.value_over_2pi = acc.value / kTwoPi;
    out.summed_error = acc.error;
    out.evaluations = acc.evaluations;
    out.converged = acc.converged;
    return out;
}

} // namespace

double Surface::chart_u(const Chart& chart, double r, double theta) const {
    const metric::TermBundle u0 = base_bundle(chart, r);
    if (!chart.puncture) return u0.value;
    if (chart.blended && r >= chart.blend_r1) return u0.value;
    const ProfileParts h = profile_parts(chart.puncture->profile(), u0, std::log(r), theta);
    const double w = chart.blended ? chart.blend_weight.value(r, theta) : 1.0;
    return u0.value + w * h.h;
}

double Surface::chart_radial_slope(const Chart& chart, double r, double theta) const {
    const metric::TermBundle u0 = base_bundle(chart, r);
    if (!chart.puncture) return u0.r_dr;
    if (chart.blended && r >= chart.blend_r1) return u0.r_dr;
    const ProfileParts h = profile_parts(chart.puncture->profile(), u0, std::log(r), theta);
    if (!chart.blended) return u0.r_dr + h.r_hr;
    const metric::TermBundle w = chart.blend_weight.eval(r, theta);
    return u0.r_dr + w.value * h.r_hr + w.r_dr * h.h;
}

double Surface::chart_density_logvar(const Chart& chart, double t, double theta) const {
    const double r = std::exp(t);
    const metric::TermBundle u0 = base_bundle(chart, r);
    const double base_lap = u0.r2_drr + u0.r_dr + u0.dtheta2;
    if (!chart.puncture) return -base_lap;
    if (chart.blended && r >= chart.blend_r1) return -base_lap;
    const ProfileParts h = profile_parts(chart.puncture->profile(), u0, t, theta);
    if (!chart.blended) return -(base_lap + h.r2_lap);
    const metric::TermBundle w = chart.blend_weight.eval(r, theta);
    const double blend_lap =
        w.value * h.r2_lap + 2.0 * w.r_dr * h.r_hr + h.h * (w.r2_drr + w.r_dr);
    return -(base_lap + blend_lap);
}

double Surface::chart_density(const Chart& chart, double r, double theta) const {
    if (!(r > 0.0)) throw DomainError("chart density in radius form requires r > 0");
    return chart_density_logvar(chart, std::log(r), theta) / (r * r);
}

Surface build_surface(const SurfaceSpec& spec) {
    Surface s;
    s.spec_ = spec;

    if (spec.kind == SurfaceKind::Sphere) {
        s.chi_ = 2;
        Chart z, w;
        z.name = "z";
        w.name = "w";
        z.round_base = w.round_base = true;
        z.extent = w.extent = 1.0;

        int zi = -1, wi = -1;
        for (std::size_t i = 0; i < spec.punctures.size(); ++i) {
            const PunctureSpec& p = spec.punctures[i];
            if (p.location == PunctureSpec::Location::Plane)
                throw ValidationError("sphere punctures sit at z = 0 or z = infinity only");
            int& slot = p.location == PunctureSpec::Location::Zero ? zi : wi;
            if (slot >= 0) throw ValidationError("two punctures at the same sphere chart center");
            slot = static_cast<int>(i);
        }

        auto fill = [&spec](Chart& chart, int idx) {
            if (idx < 0) return;
            PunctureSpec p = spec.punctures[static_cast<std::size_t>(idx)];
            const int depth = p.profile.depth();
            if (p.chart_radius == 0.0)
                p.chart_radius =
                    p.blended ? metric::ConformalPatchMetric::default_chart_radius(depth) : 1.0;
            if (!p.blended && p.chart_radius != 1.0)
                throw ValidationError("an unblended profile must cover its whole chart "
                                      "(chart_radius = 1)");
            if (p.chart_radius > 1.0)
                throw ValidationError("sphere puncture chart must fit in the unit disk");
            if (p.blended) {
                if (p.blend_r0 == 0.0 && p.blend_r1 == 0.0) {
                    p.blend_r0 = 0.3 * p.chart_radius;
                    p.blend_r1 = 0.7 * p.chart_radius;
                }
                if (!(0.0 < p.blend_r0 && p.blend_r0 < p.blend_r1 &&
                      p.blend_r1 < p.chart_radius))
                    throw ValidationError("blend radii must satisfy 0 < r0 < r1 < chart radius");
                chart.blend_weight = metric::SmoothTerm::bump(p.blend_r0, p.blend_r1);
            } else {
                chart.blend_weight = metric::SmoothTerm::constant(1.0);
            }
            chart.puncture.emplace(p.profile, p.chart_radius, true);
            chart.blended = p.blended;
            chart.blend_r0 = p.blend_r0;
            chart.blend_r1 = p.blend_r1;
            chart.spec_index = idx;
        };
        fill(z, zi);
        fill(w, wi);

        const double cz = z.puncture ? z.puncture->chart_radius() : 0.0;
        const double cw = w.puncture ? w.puncture->chart_radius() : 0.0;
        if (cz > 0.0 && cw > 0.0 && cz * cw > 1.0)
            throw ValidationError("puncture charts at 0 and infinity overlap");

        s.charts_ = {z, w};
        if ((z.puncture && !z.blended) || (w.puncture && !w.blended))
            check_transition_consistency(s, s.charts_[0], s.charts_[1]);
        return s;
    }

    // torus
    s.chi_ = 0;
    if (!(spec.tau.imag() > 0.0)) throw ValidationError("torus modulus needs Im tau > 0");
    const double inj = min_lattice_norm(spec.tau);
    for (std::size_t i = 0; i < spec.punctures.size(); ++i) {
        PunctureSpec p = spec.punctures[i];
        if (p.location != PunctureSpec::Location::Plane)
            throw ValidationError("torus punctures are plane positions");
        if (!p.blended)
            throw ValidationError("torus punctures must be blended into the flat base");
        const int depth = p.profile.depth();
        if (p.chart_radius == 0.0)
            p.chart_radius = std::min(metric::ConformalPatchMetric::default_chart_radius(depth),
                                      0.45 * inj);
        if (!(2.0 * p.chart_radius < inj))
            throw ValidationError("puncture chart does not embed in the torus");
        if (p.blend_r0 == 0.0 && p.blend_r1 == 0.0) {
            p.blend_r0 = 0.3 * p.chart_radius;
            p.blend_r1 = 0.7 * p.chart_radius;
        }
        if (!(0.0 < p.blend_r0 && p.blend_r0 < p.blend_r1 && p.blend_r1 < p.chart_radius))
            throw ValidationError("blend radii must satisfy 0 < r0 < r1 < chart radius");

        Chart c;
        std::ostringstream name;
        name << "puncture_" << i;
        c.name = name.str();
        c.round_base = false;
        c.extent = p.chart_radius;
        c.blend_weight = metric::SmoothTerm::bump(p.blend_r0, p.blend_r1);
        c.blended = true;
        c.blend_r0 = p.blend_r0;
        c.blend_r1 = p.blend_r1;
        c.puncture.emplace(p.profile, p.chart_radius, true);
        c.spec_index = static_cast<int>(i);
        s.charts_.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < spec.punctures.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.punctures.size(); ++j) {
            const double d = min_image_distance(spec.punctures[i].position,
                                                spec.punctures[j].position, spec.tau);
            if (!(d > s.charts_[i].extent + s.charts_[j].extent))
                throw ValidationError("torus puncture charts overlap (or coincide mod lattice)");
        }
    }
    return s;
}

CurvatureBreakdown total_curvature_detail(const Surface& s, const quad::Tolerances& tol,
                                          double split_scale, double inner_cutoff) {
    return curvature_detail(s, false, tol, split_scale, inner_cutoff);
}

CurvatureBreakdown l1_curvature_detail(const Surface& s, const quad::Tolerances& tol,
                                       double split_scale, double inner_cutoff) {
    return curvature_detail(s, true, tol, split_scale, inner_cutoff);
}

double total_curvature(const Surface& s, const quad::Tolerances& tol) {
    const CurvatureBreakdown b = total_curvature_detail(s, tol);
    if (!b.converged)
        throw NonConvergenceError("total curvature integral did not reach tolerance");
    return b.value_over_2pi;
}

double l1_curvature(const Surface& s, const quad::Tolerances& tol) {
    const CurvatureBreakdown b = l1_curvature_detail(s, tol);
    if (!b.converged)
        throw NonConvergenceError("|K| integral did not reach tolerance; the integrability "
                                  "hypothesis is numerically unverified");
    return b.value_over_2pi;
}

GaussBonnetReport gauss_bonnet_defect(const Surface& s, const quad::Tolerances& tol,
                                      const LadderParams& ladder) {
    GaussBonnetReport rep;
    rep.chi = s.euler_characteristic();

    const CurvatureBreakdown total = total_curvature_detail(s, tol);
    const CurvatureBreakdown l1 = l1_curvature_detail(s, tol);
    rep.total_curvature_over_2pi = total.value_over_2pi;
    rep.l1_curvature = l1.value_over_2pi;

    double order_sum = 0.0;
    for (const Chart& chart : s.charts()) {
        if (!chart.puncture) continue;
        const double ord = metric::order_of(*chart.puncture);
        rep.orders.push_back(ord);
        order_sum += ord;

        const double safe = chart.blended ? 0.9 * chart.blend_r0
                                          : 0.45 * chart.puncture->chart_radius();
        const double eps0 = ladder.eps0 > 0.0 ? std::min(ladder.eps0, safe) : safe;
        rep.flux_ladders.push_back(quad::flux_ladder(*chart.puncture, eps0, ladder.count, tol));
    }

    rep.defect = rep.total_curvature_over_2pi - static_cast<double>(rep.chi) - order_sum;

    rep.quadrature_meta.rel_tol = tol.rel_tol;
    rep.quadrature_meta.abs_tol = tol.abs_tol;
    rep.quadrature_meta.max_evaluations = tol.max_evaluations;
    rep.quadrature_meta.total_evaluations = total.evaluations + l1.evaluations;
    rep.quadrature_meta.summed_error_estimate = total.summed_error;
    rep.quadrature_meta.total_converged = total.converged;
    rep.quadrature_meta.l1_converged = l1.converged;
    if (!l1.converged)
        rep.quadrature_meta.notes.push_back(
            "the |K| integral did not converge: the integrability hypothesis is "
            "numerically unverified");
    return rep;
}

} // namespace gbcheck::surface
