#pragma once

#include <functional>

#include "gbcheck/metric.hpp"
#include "gbcheck/quad.hpp"

namespace gbcheck::sks {

/// Local coefficient of a meromorphic cubic differential, θ₀ = c z^n.
struct CubicMonomial {
    double c = 0.0; // |const| coefficient, >= 0 (0 is the flat limit)
    int n = 0;      // pole (n < 0) or zero (n > 0) order at the puncture
};

/// The two local models of a special Kähler metric g = e^{-U}|dz|² whose
/// cubic differential is meromorphic at the puncture.
///
///   A: g = -4c · r^{n+1} log r |dz|²  on r in (0,1). The coefficient 4c is
///      the unique normalization making the structure equation hold exactly.
///   B: g = r^β (C + o(1)) |dz|², β < n+1. The exact member built here pulls
///      the hyperbolic disk metric back through f(z) = a z^{n+1}, which lands
///      at β = 0 with C = 2c / (a(n+1)). Nonzero β is accepted as asymptotic
///      data only (orders, validation); no closed-form realization exists.
struct SKModel {
    enum class Variant { A, B };
    Variant variant = Variant::A;
    double c = 0.25; // cubic coefficient, > 0
    int n = 0;       // n >= -1 for A (profile realization), n >= 0 for exact B
    double a = 0.5;  // B: disk parameter in (0,1)
    double beta = 0.0; // B: metric exponent
    double C = 0.0;    // B: leading coefficient; derived for the exact family

    static SKModel model_a(double c, int n);
    static SKModel model_b_disk(double a, int n, double c = 0.25);
    static SKModel model_b_asymptotic(double beta, double C, int n);
    bool exact() const; // carries an exact closed-form solution
};

/// Conformal potential U and its Laplacian at a point, for g = e^{-U}|dz|².
struct PotentialSample {
    double u_pot = 0.0;
    double laplacian = 0.0;
};
using PotentialField = std::function<PotentialSample(double r, double theta)>;

/// Closed-form potential of an exact model (and of the flat c = 0 limit).
PotentialField model_potential(const SKModel& model);
PotentialField flat_potential(double u0 = 0.0);
CubicMonomial model_cubic(const SKModel& model);

/// Radius up to which the model metric is defined (A: 1; B: disk preimage).
double model_domain_radius(const SKModel& model);

/// ord(g, p): (n+1)/2 for model A, β/2 for model B.
double sks_order(const SKModel& model);

/// The singular-profile form of the model factor u = -U/2, exact for A and
/// for the disk realization of B. eval_u of the result reproduces
/// (1/2)·log(metric density).
metric::SingularProfile sks_profile(const SKModel& model);
metric::ConformalPatchMetric sks_patch(const SKModel& model);

/// Δ_{R²}U · e^{-2U} - 16 |θ₀|²; identically zero for exact data.
double pde_residual(const PotentialField& field, const CubicMonomial& theta0, double r,
                    double theta);

/// Euclidean density of K dA: 8 e^{2U} |θ₀|².
double sk_curvature_density(const PotentialField& field, const CubicMonomial& theta0,
                            double r, double theta);

/// ∫_{B_eps \ 0} |K| dA. For model A this equals -π / log eps.
double sks_l1_check(const SKModel& model, double eps, const quad::Tolerances& tol = {});
double sks_l1_closed_form_a(double eps);

} // namespace gbcheck::sks
