#pragma once

#include <memory>
#include <vector>

#include "gbcheck/quad.hpp"

namespace gbcheck::metric {

/// Value and derivatives of a smooth term, scaled so every entry stays finite
/// down to r = 0:
///   value = v, r_dr = r ∂_r v, r2_drr = r² ∂²_r v, dtheta = ∂_θ v, dtheta2 = ∂²_θ v.
/// The Euclidean Laplacian times r² is r2_drr + r_dr + dtheta2.
struct TermBundle {
    double value = 0.0;
    double r_dr = 0.0;
    double r2_drr = 0.0;
    double dtheta = 0.0;
    double dtheta2 = 0.0;
};

/// Closed catalog of bounded smooth remainders v(r, θ) with exact derivatives.
/// Immutable expression tree; copying shares nodes.
class SmoothTerm {
public:
    SmoothTerm(); // the zero term

    static SmoothTerm constant(double c);
    static SmoothTerm pow_r(double p);                           // r^p, p > 0
    static SmoothTerm log_one_plus(double a, double coeff = 1.0); // log(1 + coeff·r^{2a}), a > 0
    static SmoothTerm bump(double r0, double r1);                 // 1 on [0,r0], 0 on [r1,∞)
    static SmoothTerm angular_harmonic(int m, double amplitude);  // amplitude·r^{|m|}·cos(mθ)
    static SmoothTerm sum(std::vector<SmoothTerm> terms);
    static SmoothTerm scale(double factor, SmoothTerm term);
    static SmoothTerm product(SmoothTerm lhs, SmoothTerm rhs);

    TermBundle eval(double r, double theta) const;
    double value(double r, double theta) const { return eval(r, theta).value; }
    /// r²·Δv; exact at r = 0.
    double laplacian_times_r2(double r, double theta) const;
    /// Δv (r > 0).
    double laplacian(double r, double theta) const;

    /// Largest radius on which the term is defined and smooth (+inf unless a
    /// log_one_plus node with negative coefficient caps it).
    double max_valid_radius() const;

    struct Node;
    const Node& node() const { return *node_; }

private:
    explicit SmoothTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct SmoothTerm::Node {
    enum class Kind { Const, PowR, LogOnePlus, Bump, AngularHarmonic, Sum, Scale, Product };
    Kind kind = Kind::Const;
    double p0 = 0.0; // Const: c | PowR: p | LogOnePlus: a | Bump: r0 | AngularHarmonic: amplitude
    double p1 = 0.0; // LogOnePlus: coeff | Bump: r1
    int m = 0;       // AngularHarmonic order
    double factor = 1.0;
    std::vector<SmoothTerm> children;
};

inline SmoothTerm operator+(SmoothTerm a, SmoothTerm b) {
    return SmoothTerm::sum({std::move(a), std::move(b)});
}
inline SmoothTerm operator*(double c, SmoothTerm t) { return SmoothTerm::scale(c, std::move(t)); }
inline SmoothTerm operator*(SmoothTerm a, SmoothTerm b) {
    return SmoothTerm::product(std::move(a), std::move(b));
}

/// Local conformal-factor data at a puncture:
///   u = alpha·log r + Σ_ℓ betas[ℓ-1]·log^{(ℓ)} r + smooth(r, θ).
struct SingularProfile {
    double alpha = 0.0;
    std::vector<double> betas;
    SmoothTerm smooth;
    int depth() const { return static_cast<int>(betas.size()); }
};

/// Double precision cannot resolve chains deeper than this on any
/// representable radius interval.
inline constexpr int kMaxProfileDepth = 6;

/// A metric e^{2u}|dz|² on a punctured chart of given Euclidean radius.
class ConformalPatchMetric {
public:
    ConformalPatchMetric(SingularProfile profile, double chart_radius, bool puncture);

    /// min(0.5, R_k / 2) for a depth-k profile.
    static double default_chart_radius(int depth);

    const SingularProfile& profile() const { return profile_; }
    double chart_radius() const { return chart_radius_; }
    bool is_puncture() const { return puncture_; }

private:
    SingularProfile profile_;
    double chart_radius_ = 0.0;
    bool puncture_ = false;
};

double eval_u(const ConformalPatchMetric& m, double r, double theta);
double laplacian_u(const ConformalPatchMetric& m, double r, double theta);

/// Gaussian curvature K = -e^{-2u} Δu. Throws OverflowError when e^{-2u}
/// leaves the double range; integrate the density form instead.
double curvature_K(const ConformalPatchMetric& m, double r, double theta);

/// Euclidean density of K dA, i.e. -Δu; satisfies density = K e^{2u}.
double euclidean_curvature_density(const ConformalPatchMetric& m, double r, double theta);

/// r²·(-Δu) at t = log r; evaluable below the underflow radius.
double euclidean_curvature_density_logvar(const ConformalPatchMetric& m, double t, double theta);

/// r ∂_r u (the flux integrand at radius r).
double radial_slope(const ConformalPatchMetric& m, double r, double theta);

/// ord(g, p) = alpha. Errors unless the patch is flagged as a puncture.
double order_of(const ConformalPatchMetric& m);

/// ∮_{r=eps} ⋆du = eps ∫_0^{2π} ∂_r u dθ.
double flux(const ConformalPatchMetric& m, double eps, const quad::Tolerances& tol = {});

} // namespace gbcheck::metric
