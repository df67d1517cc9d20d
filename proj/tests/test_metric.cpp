#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gbcheck/errors.hpp"
#include "gbcheck/logcalc.hpp"
#include "gbcheck/metric.hpp"

using namespace gbcheck;
namespace mt = gbcheck::metric;

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

mt::ConformalPatchMetric patch(double alpha, std::vector<double> betas,
                               mt::SmoothTerm smooth, double radius = 0.0,
                               bool puncture = true) {
    mt::SingularProfile p;
    p.alpha = alpha;
    p.betas = std::move(betas);
    p.smooth = std::move(smooth);
    if (radius == 0.0) radius = mt::ConformalPatchMetric::default_chart_radius(p.depth());
    return mt::ConformalPatchMetric(std::move(p), radius, puncture);
}

// round-sphere chart factor u = log 2 - log(1 + r^2)
mt::SmoothTerm round_sphere_term() {
    return mt::SmoothTerm::constant(std::log(2.0)) +
           mt::SmoothTerm::scale(-1.0, mt::SmoothTerm::log_one_plus(1.0));
}

double fd_r(const mt::SmoothTerm& v, double r, double th) {
    const double h = r * 1e-5;
    return (v.value(r + h, th) - v.value(r - h, th)) / (2.0 * h);
}

double fd_rr(const mt::SmoothTerm& v, double r, double th) {
    const double h = r * 1e-4;
    return (v.value(r + h, th) - 2.0 * v.value(r, th) + v.value(r - h, th)) / (h * h);
}

double fd_th(const mt::SmoothTerm& v, double r, double th) {
    const double h = 1e-5;
    return (v.value(r, th + h) - v.value(r, th - h)) / (2.0 * h);
}

double fd_thth(const mt::SmoothTerm& v, double r, double th) {
    const double h = 1e-4;
    return (v.value(r, th + h) - 2.0 * v.value(r, th) + v.value(r, th - h)) / (h * h);
}

// relative where the derivative has size, absolute floor where it vanishes
// (central differences bottom out near 1e-11 of the function scale)
void check_catalog_derivatives(const mt::SmoothTerm& v, double lo, double hi) {
    for (int i = 0; i < 50; ++i) {
        const double r = lo + (hi - lo) * static_cast<double>(i) / 49.0;
        const double th = 0.3 + 5.0 * static_cast<double>(i) / 49.0;
        const mt::TermBundle b = v.eval(r, th);
        CHECK(std::abs(b.r_dr / r - fd_r(v, r, th)) <=
              1e-6 * std::max(1.0, std::abs(b.r_dr / r)));
        const double drr = b.r2_drr / (r * r);
        CHECK(std::abs(drr - fd_rr(v, r, th)) <= 1e-5 * std::max(1.0, std::abs(drr)));
        CHECK(std::abs(b.dtheta - fd_th(v, r, th)) <=
              1e-6 * std::max(1.0, std::abs(b.dtheta)));
        CHECK(std::abs(b.dtheta2 - fd_thth(v, r, th)) <=
              1e-5 * std::max(1.0, std::abs(b.dtheta2)));
    }
}

} // namespace

TEST_SUITE_BEGIN("metric");

TEST_CASE("catalog closed-form derivatives match finite differences") {
    check_catalog_derivatives(mt::SmoothTerm::constant(1.7), 0.05, 0.45);
    check_catalog_derivatives(mt::SmoothTerm::pow_r(1.5), 0.05, 0.45);
    check_catalog_derivatives(mt::SmoothTerm::pow_r(0.75), 0.05, 0.45);
    check_catalog_derivatives(mt::SmoothTerm::log_one_plus(1.0), 0.05, 0.45);
    check_catalog_derivatives(mt::SmoothTerm::log_one_plus(0.5, -0.25), 0.05, 0.45);
    // the exp(-1/x) mollifier is exercised away from its flat tails, where a
    // finite-difference oracle still has digits to offer
    check_catalog_derivatives(mt::SmoothTerm::bump(0.1, 0.4), 0.16, 0.34);
    check_catalog_derivatives(mt::SmoothTerm::angular_harmonic(2, 0.8), 0.05, 0.45);
    check_catalog_derivatives(mt::SmoothTerm::angular_harmonic(-3, 0.4), 0.05, 0.45);
    check_catalog_derivatives(
        mt::SmoothTerm::product(mt::SmoothTerm::bump(0.1, 0.4),
                                mt::SmoothTerm::angular_harmonic(1, 0.5)),
        0.16, 0.34);
    check_catalog_derivatives(round_sphere_term(), 0.05, 0.45);
}

TEST_CASE("catalog validation") {
    CHECK_THROWS_AS(mt::SmoothTerm::pow_r(-1.0), ValidationError);
    CHECK_THROWS_AS(mt::SmoothTerm::bump(0.4, 0.1), ValidationError);
    CHECK_THROWS_AS(mt::SmoothTerm::log_one_plus(0.0), ValidationError);
    // log(1 - r^2) caps the valid radius at 1
    CHECK(mt::SmoothTerm::log_one_plus(1.0, -1.0).max_valid_radius() ==
          doctest::Approx(1.0));
}

TEST_CASE("angular harmonics are harmonic") {
    const auto v = mt::SmoothTerm::angular_harmonic(3, 0.7);
    for (double r : {0.1, 0.2, 0.4})
        CHECK(v.laplacian(r, 1.1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("eval_u examples") {
    const auto flat = patch(0.0, {}, mt::SmoothTerm::constant(0.0));
    CHECK(mt::eval_u(flat, 0.3, 1.0) == 0.0);

    const auto cone = patch(1.0, {}, mt::SmoothTerm::constant(0.0));
    CHECK(mt::eval_u(cone, std::exp(-1.0), 0.0) == doctest::Approx(-1.0).epsilon(1e-14));

    // the model-A profile of the special Kahler catalog with c = 1/4
    const double c = 0.25;
    const auto sks_a =
        patch(0.5, {0.5}, mt::SmoothTerm::constant(0.5 * std::log(4.0 * c)), 0.3);
    const double r = std::exp(-kE);
    CHECK(mt::eval_u(sks_a, r, 0.2) ==
          doctest::Approx(0.5 * -kE + 0.5 * 1.0 + 0.5 * std::log(4.0 * c)).epsilon(1e-13));
}

TEST_CASE("laplacian_u examples") {
    const auto flat = patch(0.0, {}, mt::SmoothTerm::constant(0.0));
    CHECK(mt::laplacian_u(flat, 0.2, 0.4) == 0.0);

    // any pure alpha log r part is harmonic
    const auto cone = patch(2.3, {}, mt::SmoothTerm::constant(1.0));
    for (double r : {0.1, 0.3, 0.45}) CHECK(mt::laplacian_u(cone, r, 0.0) == 0.0);

    const auto logsing = patch(0.0, {1.0}, mt::SmoothTerm::constant(0.0));
    CHECK(mt::laplacian_u(logsing, std::exp(-1.0), 0.0) ==
          doctest::Approx(-std::exp(2.0)).epsilon(1e-13));
}

TEST_CASE("curvature of the round-sphere patch is 1") {
    const auto sphere = patch(0.0, {}, round_sphere_term(), 0.5, false);
    for (double r : {0.05, 0.2, 0.45})
        for (double th : {0.0, 1.3})
            CHECK(mt::curvature_K(sphere, r, th) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("euclidean curvature density identity") {
    // density = K e^{2u} exactly: conformal factors cancel
    const auto sphere = patch(0.0, {}, round_sphere_term(), 0.999, false);
    const double r = 0.99;
    CHECK(mt::euclidean_curvature_density(sphere, r, 0.0) ==
          doctest::Approx(4.0 / ((1.0 + r * r) * (1.0 + r * r))).epsilon(1e-12));

    const auto logsing = patch(0.0, {1.0}, mt::SmoothTerm::constant(0.0));
    CHECK(mt::euclidean_curvature_density(logsing, std::exp(-1.0), 0.0) ==
          doctest::Approx(std::exp(2.0)).epsilon(1e-13));
}

TEST_CASE("conformal cancellation property") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> rad(0.02, 0.28);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    const std::vector<mt::ConformalPatchMetric> patches = {
        patch(0.4, {0.7}, round_sphere_term(), 0.3),
        patch(-0.3, {},
              mt::SmoothTerm::pow_r(1.2) + mt::SmoothTerm::angular_harmonic(2, 0.2), 0.3),
        patch(0.0, {0.5, 0.25}, mt::SmoothTerm::constant(0.1), 0.15),
    };
    for (const auto& m : patches) {
        for (int i = 0; i < 100; ++i) {
            const double r = rad(rng) * m.chart_radius() / 0.3;
            const double th = ang(rng);
            const double lap = mt::laplacian_u(m, r, th);
            const double u = mt::eval_u(m, r, th);
            const double k = mt::curvature_K(m, r, th);
            CHECK(std::abs(k * std::exp(2.0 * u) + lap) <= 1e-10 * (1.0 + std::abs(lap)));
        }
    }
}

TEST_CASE("density log-variable form matches the pointwise form") {
    const auto m = patch(0.4, {0.7}, round_sphere_term(), 0.3);
    for (double r : {0.25, 0.1, 1e-3, 1e-8}) {
        const double t = std::log(r);
        CHECK(mt::euclidean_curvature_density_logvar(m, t, 0.7) ==
              doctest::Approx(r * r * mt::euclidean_curvature_density(m, r, 0.7))
                  .epsilon(1e-11));
    }
}

TEST_CASE("order_of") {
    CHECK(mt::order_of(patch(0.5, {}, mt::SmoothTerm::constant(0.0))) == 0.5);
    // invariant under betas and smooth term
    CHECK(mt::order_of(patch(0.5, {0.9, -2.0}, mt::SmoothTerm::pow_r(2.0), 0.15)) == 0.5);
    CHECK_THROWS_AS(
        mt::order_of(patch(0.5, {}, mt::SmoothTerm::constant(0.0), 0.5, false)),
        ValidationError);
}

TEST_CASE("flux: pure cone factor is eps-independent") {
    for (double alpha : {1.0, 1.5, -0.5}) {
        const auto m = patch(alpha, {}, mt::SmoothTerm::constant(0.0));
        const double f1 = mt::flux(m, 0.3);
        const double f2 = mt::flux(m, 1e-6);
        CHECK(f1 == doctest::Approx(kTwoPi * alpha).epsilon(1e-14));
        CHECK(std::abs(f1 - f2) < 1e-10);
    }
}

TEST_CASE("flux: iterated-log factor decays like 2pi/log eps") {
    const auto m = patch(0.0, {1.0}, mt::SmoothTerm::constant(0.0));
    for (double eps : {0.3, 0.05, 1e-4}) {
        CHECK(mt::flux(m, eps) == doctest::Approx(kTwoPi / std::log(eps)).epsilon(1e-12));
    }
}

TEST_CASE("flux: angular harmonics contribute nothing") {
    const auto m = patch(0.0, {}, mt::SmoothTerm::angular_harmonic(1, 0.8));
    CHECK(mt::flux(m, 0.2) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("flux linearity") {
    const auto a = patch(0.7, {}, mt::SmoothTerm::pow_r(1.0), 0.3);
    const auto b = patch(0.0, {0.4}, round_sphere_term(), 0.3);
    mt::SingularProfile sum_p;
    sum_p.alpha = 0.7;
    sum_p.betas = {0.4};
    sum_p.smooth = mt::SmoothTerm::pow_r(1.0) + round_sphere_term();
    const mt::ConformalPatchMetric s(sum_p, 0.3, true);
    for (double eps : {0.2, 0.01}) {
        CHECK(std::abs(mt::flux(s, eps) - (mt::flux(a, eps) + mt::flux(b, eps))) < 1e-10);
    }
}

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(patch(0.0, {1, 1, 1, 1, 1, 1, 1}, mt::SmoothTerm(), 1e-10),
                    ValidationError);
    // depth-2 chart must stay under R_2
    CHECK_THROWS_AS(patch(0.0, {1.0, 1.0}, mt::SmoothTerm(), 0.4), ValidationError);
    CHECK_THROWS_AS(mt::eval_u(patch(0.0, {}, mt::SmoothTerm(), 0.3), 0.35, 0.0),
                    DomainError);
}

TEST_SUITE_END();
