#include "gbcheck/sks.hpp"

#include <cmath>
#include <sstream>

#include "gbcheck/errors.hpp"
#include "gbcheck/logcalc.hpp"

namespace gbcheck::sks {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void validate(const SKModel& m) {
    if (m.variant == SKModel::Variant::A) {
        if (!(m.c > 0.0)) throw ValidationError("model A requires c > 0");
        if (m.n < -1)
            throw ValidationError("model A pole orders n <= -2 have no exact realization; "
                                  "use asymptotic data");
    } else {
        if (!(m.C > 0.0)) throw ValidationError("model B requires C > 0");
        if (!(m.beta < m.n + 1))
            throw ValidationError("model B requires beta < n + 1");
        if (m.beta == 0.0 && m.a != 0.0) {
            if (!(m.a > 0.0 && m.a < 1.0))
                throw ValidationError("disk parameter a must lie in (0,1)");
            if (m.n < 0) throw ValidationError("exact model B requires n >= 0");
        }
    }
}

} // namespace

SKModel SKModel::model_a(double c, int n) {
    SKModel m;
    m.variant = Variant::A;
    m.c = c;
    m.n = n;
    validate(m);
    return m;
}

SKModel SKModel::model_b_disk(double a, int n, double c) {
    SKModel m;
    m.variant = Variant::B;
    m.a = a;
    m.n = n;
    m.c = c;
    m.beta = 0.0;
    if (!(c > 0.0)) throw ValidationError("model B disk realization requires c > 0");
    if (n < 0) throw ValidationError("exact model B requires n >= 0");
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("disk parameter a must lie in (0,1)");
    m.C = 2.0 * c / (a * static_cast<double>(n + 1));
    validate(m);
    return m;
}

SKModel SKModel::model_b_asymptotic(double beta, double C, int n) {
    SKModel m;
    m.variant = Variant::B;
    m.beta = beta;
    m.C = C;
    m.n = n;
    m.a = 0.0;
    validate(m);
    return m;
}

bool SKModel::exact() const {
    if (variant == Variant::A) return true;
    return beta == 0.0 && a > 0.0 && a < 1.0;
}

double model_domain_radius(const SKModel& m) {
    validate(m);
    if (m.variant == SKModel::Variant::A) return 1.0;
    if (!m.exact()) return 1.0;
    // keep 1 - a^2 r^{2(n+1)} positive: r < (1/a)^{1/(n+1)}
    return std::min(1.0, std::pow(1.0 / m.a, 1.0 / static_cast<double>(m.n + 1)));
}

CubicMonomial model_cubic(const SKModel& m) {
    validate(m);
    return {m.c, m.n};
}

PotentialField flat_potential(double u0) {
    return [u0](double, double) { return PotentialSample{u0, 0.0}; };
}

PotentialField model_potential(const SKModel& m) {
    validate(m);
    if (m.variant == SKModel::Variant::A) {
        // e^{-U} = 4c r^{n+1} (-log r):  U = -log(4c) - (n+1) log r - log^{(1)} r
        const double c = m.c;
        const int n = m.n;
        return [c, n](double r, double) {
            if (!(r > 0.0 && r < 1.0))
                throw DomainError("model A potential is defined on 0 < r < 1");
            const double t = std::log(r);
            PotentialSample s;
            s.u_pot = -std::log(4.0 * c) - static_cast<double>(n + 1) * t - std::log(-t);
            const double q = 1.0 / (r * t);
            s.laplacian = q * q; // -Δ log^{(1)} r
            return s;
        };
    }
    if (!m.exact())
        throw ValidationError("asymptotic model B carries no closed-form potential");
    // U = w/2 - log(4c r^n) with w the hyperbolic pull-back through f = a z^{n+1}:
    // U = log(a(n+1)/(2c)) - log(1 - a^2 r^{2(n+1)}),  ΔU = e^w.
    const double a = m.a;
    const double c = m.c;
    const int mm = m.n + 1;
    const double rmax = model_domain_radius(m);
    return [a, c, mm, rmax](double r, double) {
        if (!(r > 0.0 && r < rmax))
            throw DomainError("model B potential evaluated outside the disk preimage");
        const double w = a * a * std::pow(r, 2.0 * mm);
        const double den = 1.0 - w;
        PotentialSample s;
        s.u_pot = std::log(a * static_cast<double>(mm) / (2.0 * c)) - std::log(den);
        const double amr = a * static_cast<double>(mm) * std::pow(r, mm - 1);
        s.laplacian = 4.0 * amr * amr / (den * den);
        return s;
    };
}

double sks_order(const SKModel& m) {
    validate(m);
    if (m.variant == SKModel::Variant::A) return 0.5 * static_cast<double>(m.n + 1);
    return 0.5 * m.beta;
}

metric::SingularProfile sks_profile(const SKModel& m) {
    validate(m);
    metric::SingularProfile p;
    if (m.variant == SKModel::Variant::A) {
        p.alpha = 0.5 * static_cast<double>(m.n + 1);
        p.betas = {0.5};
        p.smooth = metric::SmoothTerm::constant(0.5 * std::log(4.0 * m.c));
        return p;
    }
    p.alpha = 0.5 * m.beta;
    if (m.exact()) {
        // u = (1/2) log C + (1/2) log(1 - a^2 r^{2(n+1)})
        p.smooth = metric::SmoothTerm::constant(0.5 * std::log(m.C)) +
                   metric::SmoothTerm::scale(
                       0.5, metric::SmoothTerm::log_one_plus(
                                static_cast<double>(m.n + 1), -m.a * m.a));
    } else {
        // leading order only; no exact realization for prescribed beta != 0
        p.smooth = metric::SmoothTerm::constant(0.5 * std::log(m.C));
    }
    return p;
}

metric::ConformalPatchMetric sks_patch(const SKModel& m) {
    metric::SingularProfile p = sks_profile(m);
    const double guard = metric::ConformalPatchMetric::default_chart_radius(p.depth());
    const double radius = std::min(guard, 0.5 * model_domain_radius(m));
    return metric::ConformalPatchMetric(std::move(p), radius, true);
}

double pde_residual(const PotentialField& field, const CubicMonomial& theta0, double r,
                    double theta) {
    const PotentialSample s = field(r, theta);
    if (2.0 * std::abs(s.u_pot) > 700.0)
        throw OverflowError("potential too large for a pointwise residual");
    const double rhs = 16.0 * theta0.c * theta0.c * std::pow(r, 2.0 * theta0.n);
    return s.laplacian * std::exp(-2.0 * s.u_pot) - rhs;
}

double sk_curvature_density(const PotentialField& field, const CubicMonomial& theta0,
                            double r, double theta) {
    const PotentialSample s = field(r, theta);
    if (2.0 * s.u_pot > 700.0)
        throw OverflowError("e^{2U} exceeds the floating-point range; integrate in the "
                            "log variable");
    return 8.0 * std::exp(2.0 * s.u_pot) * theta0.c * theta0.c *
           std::pow(r, 2.0 * theta0.n);
}

double sks_l1_closed_form_a(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("model A requires eps in (0,1)");
    return -kPi / std::log(eps);
}

double sks_l1_check(const SKModel& m, double eps, const quad::Tolerances& tol) {
    validate(m);
    if (!(eps > 0.0 && eps < model_domain_radius(m)))
        throw DomainError("eps outside the model domain");
    quad::QuadResult q;
    if (m.variant == SKModel::Variant::A) {
        // |K| dA has Euclidean density 1/(2 r^2 (log r)^2) independently of c, n
        auto g = quad::from_log_density([](double t) { return 0.5 / (t * t); });
        q = quad::integrate_radial_singular(g, 0.0, eps, 1, tol);
    } else {
        const PotentialField field = model_potential(m);
        const CubicMonomial theta0 = model_cubic(m);
        auto f = quad::from_density([field, theta0](double r) {
            return sk_curvature_density(field, theta0, r, 0.0);
        });
        q = quad::integrate_radial_singular(f, 0.0, eps, 0, tol);
    }
    if (!q.converged) {
        std::ostringstream os;
        os << "L1 curvature integral did not converge at eps = " << eps;
        throw NonConvergenceError(os.str());
    }
    return 2.0 * kPi * q.value;
}

} // namespace gbcheck::sks
