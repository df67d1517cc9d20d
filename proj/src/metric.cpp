#include "gbcheck/metric.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "gbcheck/errors.hpp"
#include "gbcheck/logcalc.hpp"

namespace gbcheck::metric {

namespace {

using Node = SmoothTerm::Node;
using Kind = Node::Kind;

// exp(-1/x) smoothstep pieces for the Bump transition
struct StepEval {
    double s, ds, dss;
};

StepEval smoothstep(double x) {
    if (x <= 0.0) return {0.0, 0.0, 0.0};
    if (x >= 1.0) return {1.0, 0.0, 0.0};
    const double p = std::exp(-1.0 / x);
    const double q = std::exp(-1.0 / (1.0 - x));
    if (p == 0.0) return {0.0, 0.0, 0.0};
    if (q == 0.0) return {1.0, 0.0, 0.0};
    const double x2 = x * x;
    const double y = 1.0 - x;
    const double y2 = y * y;
    const double dp = p / x2;
    const double dq = -q / y2;
    const double ddp = p * (1.0 - 2.0 * x) / (x2 * x2);
    const double ddq = q * (2.0 * x - 1.0) / (y2 * y2);
    const double den = p + q;
    const double s = p / den;
    const double ds = (dp * q - p * dq) / (den * den);
    const double dss =
        ((ddp * q - p * ddq) * den - 2.0 * (dp * q - p * dq) * (dp + dq)) / (den * den * den);
    return {s, ds, dss};
}

TermBundle eval_node(const Node& n, double r, double theta);

TermBundle eval_const(const Node& n) {
    TermBundle b;
    b.value = n.p0;
    return b;
}

TermBundle eval_pow_r(const Node& n, double r) {
    const double p = n.p0;
    const double v = std::pow(r, p);
    TermBundle b;
    b.value = v;
    b.r_dr = p * v;
    b.r2_drr = p * (p - 1.0) * v;
    return b;
}

TermBundle eval_log_one_plus(const Node& n, double r) {
    const double a = n.p0;
    const double c = n.p1;
    const double w = std::pow(r, 2.0 * a);
    const double den = 1.0 + c * w;
    if (!(den > 0.0)) throw DomainError("log_one_plus argument non-positive at this radius");
    TermBundle b;
    b.value = std::log1p(c * w);
    b.r_dr = 2.0 * a * c * w / den;
    b.r2_drr = 2.0 * a * c * w * ((2.0 * a - 1.0) - c * w) / (den * den);
    return b;
}

TermBundle eval_bump(const Node& n, double r) {
    const double r0 = n.p0;
    const double r1 = n.p1;
    TermBundle b;
    if (r <= r0) {
        b.value = 1.0;
        return b;
    }
    if (r >= r1) return b;
    const double width = r1 - r0;
    const double x = (r - r0) / width;
    const StepEval s = smoothstep(x);
    b.value = 1.0 - s.s;
    b.r_dr = -r * s.ds / width;
    b.r2_drr = -r * r * s.dss / (width * width);
    return b;
}

TermBundle eval_angular_harmonic(const Node& n, double r, double theta) {
    const double amp = n.p0;
    const int m = n.m;
    const double am = std::abs(static_cast<double>(m));
    const double rp = std::pow(r, am);
    const double cs = std::cos(m * theta);
    const double sn = std::sin(m * theta);
    TermBundle b;
    b.value = amp * rp * cs;
    b.r_dr = amp * am * rp * cs;
    b.r2_drr = amp * am * (am - 1.0) * rp * cs;
    b.dtheta = -amp * static_cast<double>(m) * rp * sn;
    b.dtheta2 = -amp * static_cast<double>(m) * static_cast<double>(m) * rp * cs;
    return b;
}

TermBundle eval_sum(const Node& n, double r, double theta) {
    TermBundle b;
    for (const SmoothTerm& t : n.children) {
        const TermBundle c = t.eval(r, theta);
        b.value += c.value;
        b.r_dr += c.r_dr;
        b.r2_drr += c.r2_drr;
        b.dtheta += c.dtheta;
        b.dtheta2 += c.dtheta2;
    }
    return b;
}

TermBundle eval_scale(const Node& n, double r, double theta) {
    TermBundle b = n.children.front().eval(r, theta);
    b.value *= n.factor;
    b.r_dr *= n.factor;
    b.r2_drr *= n.factor;
    b.dtheta *= n.factor;
    b.dtheta2 *= n.factor;
    return b;
}

TermBundle eval_product(const Node& n, double r, double theta) {
    const TermBundle a = n.children[0].eval(r, theta);
    const TermBundle c = n.children[1].eval(r, theta);
    TermBundle b;
    b.value = a.value * c.value;
    b.r_dr = a.r_dr * c.value + a.value * c.r_dr;
    b.r2_drr = a.r2_drr * c.value + 2.0 * a.r_dr * c.r_dr + a.value * c.r2_drr;
    b.dtheta = a.dtheta * c.value + a.value * c.dtheta;
    b.dtheta2 = a.dtheta2 * c.value + 2.0 * a.dtheta * c.dtheta + a.value * c.dtheta2;
    return b;
}

TermBundle eval_node(const Node& n, double r, double theta) {
    switch (n.kind) {
        case Kind::Const: return eval_const(n);
        case Kind::PowR: return eval_pow_r(n, r);
        case Kind::LogOnePlus: return eval_log_one_plus(n, r);
        case Kind::Bump: return eval_bump(n, r);
        case Kind::AngularHarmonic: return eval_angular_harmonic(n, r, theta);
        case Kind::Sum: return eval_sum(n, r, theta);
        case Kind::Scale: return eval_scale(n, r, theta);
        case Kind::Product: return eval_product(n, r, theta);
    }
    return {};
}

double node_max_radius(const Node& n) {
    switch (n.kind) {
        case Kind::LogOnePlus:
            if (n.p1 < 0.0) return std::pow(-1.0 / n.p1, 0.5 / n.p0);
            return std::numeric_limits<double>::infinity();
        case Kind::Sum:
        case Kind::Scale:
        case Kind::Product: {
            double m = std::numeric_limits<double>::infinity();
            for (const SmoothTerm& t : n.children) m = std::min(m, t.max_valid_radius());
            return m;
        }
        default: return std::numeric_limits<double>::infinity();
    }
}

std::shared_ptr<const Node> make_node(Node n) {
    return std::make_shared<const Node>(std::move(n));
}

} // namespace

SmoothTerm::SmoothTerm() : node_(make_node(Node{})) {}

SmoothTerm SmoothTerm::constant(double c) {
    Node n;
    n.kind = Kind::Const;
    n.p0 = c;
    return SmoothTerm(make_node(std::move(n)));
}

SmoothTerm SmoothTerm::pow_r(double p) {
    if (!(p > 0.0)) throw ValidationError("pow_r requires p > 0");
    Node n;
    n.kind = Kind::PowR;
    n.p0 = p;
    return SmoothTerm(make_node(std::move(n)));
}

SmoothTerm SmoothTerm::log_one_plus(double a, double coeff) {
    if (!(a > 0.0)) throw ValidationError("log_one_plus requires a > 0");
    Node n;
    n.kind = Kind::LogOnePlus;
    n.p0 = a;
    n.p1 = coeff;
    return SmoothTerm(make_node(std::move(n)));
}

SmoothTerm SmoothTerm::bump(double r0, double r1) {
    if (!(0.0 < r0 && r0 < r1)) throw ValidationError("bump requires 0 < r0 < r1");
    Node n;
    n.kind = Kind::Bump;
    n.p0 = r0;
    n.p1 = r1;
    return SmoothTerm(make_node(std::move(n)));
}

SmoothTerm SmoothTerm::angular_harmonic(int m, double amplitude) {
    Node n;
    n.kind = Kind::AngularHarmonic;
    n.m = m;
    n.p0 = amplitude;
    return SmoothTerm(make_node(std::move(n)));
}

SmoothTerm SmoothTerm::sum(std::vector<SmoothTerm> terms) {
    Node n;
    n.kind = Kind::Sum;
    n.children = std::move(terms);
    return SmoothTerm(make_node(std::move(n)));
}

SmoothTerm SmoothTerm::scale(double factor, SmoothTerm term) {
    Node n;
    n.kind = Kind::Scale;
    n.factor = factor;
    n.children.push_back(std::move(term));
    return SmoothTerm(make_node(std::move(n)));
}

SmoothTerm SmoothTerm::product(SmoothTerm lhs, SmoothTerm rhs) {
    Node n;
    n.kind = Kind::Product;
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return SmoothTerm(make_node(std::move(n)));
}

TermBundle SmoothTerm::eval(double r, double theta) const {
    return eval_node(*node_, r, theta);
}

double SmoothTerm::laplacian_times_r2(double r, double theta) const {
    const TermBundle b = eval(r, theta);
    return b.r2_drr + b.r_dr + b.dtheta2;
}

double SmoothTerm::laplacian(double r, double theta) const {
    if (!(r > 0.0)) throw DomainError("pointwise Laplacian requires r > 0");
    return laplacian_times_r2(r, theta) / (r * r);
}

double SmoothTerm::max_valid_radius() const { return node_max_radius(*node_); }

ConformalPatchMetric::ConformalPatchMetric(SingularProfile profile, double chart_radius,
                                           bool puncture)
    : profile_(std::move(profile)), chart_radius_(chart_radius), puncture_(puncture) {
    const int k = profile_.depth();
    if (k > kMaxProfileDepth) {
        std::ostringstream os;
        os << "profile depth " << k << " exceeds the double-precision cap "
           << kMaxProfileDepth;
        throw ValidationError(os.str());
    }
    if (!(chart_radius_ > 0.0)) throw ValidationError("chart radius must be positive");
    if (k >= 1 && !(chart_radius_ < logcalc::domain_limit(k))) {
        std::ostringstream os;
        os << "chart radius " << chart_radius_ << " violates the depth-" << k
           << " domain guard R_" << k << " = " << logcalc::domain_limit(k);
        throw ValidationError(os.str());
    }
    if (!(chart_radius_ <= profile_.smooth.max_valid_radius()))
        throw ValidationError("smooth term undefined somewhere inside the chart");
}

double ConformalPatchMetric::default_chart_radius(int depth) {
    if (depth <= 0) return 0.5;
    return std::min(0.5, 0.5 * logcalc::domain_limit(depth));
}

namespace {

void check_inside(const ConformalPatchMetric& m, double r) {
    if (!(r > 0.0) || !(r < m.chart_radius())) {
        std::ostringstream os;
        os << "radius " << r << " outside the punctured chart (0, " << m.chart_radius() << ")";
        throw DomainError(os.str());
    }
}

} // namespace

double eval_u(const ConformalPatchMetric& m, double r, double theta) {
    check_inside(m, r);
    const SingularProfile& p = m.profile();
    double u = p.alpha * std::log(r);
    for (int l = 1; l <= p.depth(); ++l)
        u += p.betas[static_cast<std::size_t>(l - 1)] * logcalc::iterlog_eval(l, r);
    return u + p.smooth.value(r, theta);
}

double laplacian_u(const ConformalPatchMetric& m, double r, double theta) {
    check_inside(m, r);
    const SingularProfile& p = m.profile();
    double lap = 0.0; // the alpha·log r part is harmonic
    for (int l = 1; l <= p.depth(); ++l)
        lap += p.betas[static_cast<std::size_t>(l - 1)] * logcalc::iterlog_laplacian(l, r);
    return lap + p.smooth.laplacian(r, theta);
}

double curvature_K(const ConformalPatchMetric& m, double r, double theta) {
    const double u = eval_u(m, r, theta);
    if (-2.0 * u > 700.0)
        throw OverflowError("e^{-2u} exceeds the floating-point range this close to the "
                            "singularity; integrate the density form instead");
    return -std::exp(-2.0 * u) * laplacian_u(m, r, theta);
}

double euclidean_curvature_density(const ConformalPatchMetric& m, double r, double theta) {
    return -laplacian_u(m, r, theta);
}

double euclidean_curvature_density_logvar(const ConformalPatchMetric& m, double t,
                                          double theta) {
    const SingularProfile& p = m.profile();
    double lap = 0.0;
    for (int l = 1; l <= p.depth(); ++l)
        lap += p.betas[static_cast<std::size_t>(l - 1)] * logcalc::r2_laplacian_logvar(l, t);
    const double r = std::exp(t);
    return -(lap + p.smooth.laplacian_times_r2(r, theta));
}

double radial_slope(const ConformalPatchMetric& m, double r, double theta) {
    check_inside(m, r);
    const SingularProfile& p = m.profile();
    double s = p.alpha;
    const double t = std::log(r);
    for (int l = 1; l <= p.depth(); ++l)
        s += p.betas[static_cast<std::size_t>(l - 1)] * logcalc::r_dr_logvar(l, t);
    return s + p.smooth.eval(r, theta).r_dr;
}

double order_of(const ConformalPatchMetric& m) {
    if (!m.is_puncture()) throw ValidationError("order is defined only at a puncture patch");
    return m.profile().alpha;
}

double flux(const ConformalPatchMetric& m, double eps, const quad::Tolerances& tol) {
    check_inside(m, eps);
    const quad::QuadResult q = quad::integrate_circle(
        [&m, eps](double theta) { return radial_slope(m, eps, theta); }, tol);
    if (!q.converged) {
        std::ostringstream os;
        os << "flux circle integral at eps = " << eps << " did not converge";
        throw NonConvergenceError(os.str());
    }
    return q.value;
}

} // namespace gbcheck::metric
