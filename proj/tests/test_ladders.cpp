#include <doctest.h>

#include <cmath>
#include <vector>

#include "gbcheck/metric.hpp"
#include "gbcheck/quad.hpp"

using namespace gbcheck;
namespace mt = gbcheck::metric;
namespace q = gbcheck::quad;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

mt::ConformalPatchMetric patch(double alpha, std::vector<double> betas,
                               mt::SmoothTerm smooth, double radius = 0.5) {
    mt::SingularProfile p;
    p.alpha = alpha;
    p.betas = std::move(betas);
    p.smooth = std::move(smooth);
    return mt::ConformalPatchMetric(std::move(p), radius, true);
}

} // namespace

TEST_SUITE_BEGIN("ladders");

TEST_CASE("flux ladder of a pure cone profile") {
    const auto m = patch(0.8, {}, mt::SmoothTerm::constant(0.0));
    const q::LadderResult l = q::flux_ladder(m, 0.25, 6);
    REQUIRE(l.values.size() == 6);
    for (double v : l.values) CHECK(v == doctest::Approx(kTwoPi * 0.8).epsilon(1e-13));
    CHECK(l.liminf_estimate == doctest::Approx(kTwoPi * 0.8).epsilon(1e-13));
    for (std::size_t i = 1; i < l.radii.size(); ++i)
        CHECK(l.radii[i] == doctest::Approx(0.5 * l.radii[i - 1]));
}

TEST_CASE("flux ladder of an iterated-log profile decays like 2pi/log eps") {
    const auto m = patch(0.0, {1.0}, mt::SmoothTerm::constant(0.0));
    const q::LadderResult l = q::flux_ladder(m, 0.25, 10);
    double prev = 1e300;
    for (std::size_t i = 0; i < l.values.size(); ++i) {
        CHECK(l.values[i] ==
              doctest::Approx(kTwoPi / std::log(l.radii[i])).epsilon(1e-11));
        CHECK(std::abs(l.values[i]) < prev);
        prev = std::abs(l.values[i]);
    }
    CHECK(l.liminf_estimate == doctest::Approx(std::abs(l.values.back())).epsilon(1e-12));
    // the fitted C/log(eps) model should recover C = 2pi
    CHECK(l.log_fit_coefficient == doctest::Approx(kTwoPi).epsilon(1e-6));
}

TEST_CASE("flux ladder liminf goes to zero for alpha = 0 profiles") {
    const auto m = patch(0.0, {0.9, -0.4}, mt::SmoothTerm::constant(0.0), 0.15);
    const q::LadderResult small = q::flux_ladder(m, 0.1, 5);
    const q::LadderResult large = q::flux_ladder(m, 0.1, 25);
    CHECK(large.liminf_estimate < small.liminf_estimate);
    CHECK(large.liminf_estimate < 0.35);
}

TEST_CASE("flux ladder of a bump-localized smooth factor is eventually zero") {
    // u = 0.7 * bump(r) is constant near the puncture
    const auto m = patch(0.0, {}, mt::SmoothTerm::scale(0.7, mt::SmoothTerm::bump(0.05, 0.2)),
                         0.5);
    const q::LadderResult l = q::flux_ladder(m, 0.4, 8);
    for (std::size_t i = 0; i < l.values.size(); ++i)
        if (l.radii[i] < 0.05) CHECK(l.values[i] == 0.0);
    CHECK(l.liminf_estimate == 0.0);
}

TEST_CASE("dirichlet energy ladder: constants carry no energy") {
    const auto m = patch(0.3, {}, mt::SmoothTerm::constant(2.5));
    const q::LadderResult l = q::dirichlet_energy_ladder(m, 0.2, 4);
    for (double v : l.values) CHECK(v == 0.0);
}

TEST_CASE("dirichlet energy ladder: log(1+r^2) converges to the closed form") {
    // ||grad v||^2 = 4r^2/(1+r^2)^2, integral 4pi [ln(1+r^2) + 1/(1+r^2)]
    const auto m = patch(0.0, {}, mt::SmoothTerm::log_one_plus(1.0));
    const q::LadderResult l = q::dirichlet_energy_ladder(m, 0.05, 8);
    auto closed = [](double lo, double hi) {
        auto F = [](double r) { return std::log(1.0 + r * r) + 1.0 / (1.0 + r * r); };
        return 4.0 * kPi * (F(hi) - F(lo));
    };
    double prev = -1.0;
    for (std::size_t i = 0; i < l.values.size(); ++i) {
        CHECK(l.values[i] >= prev); // increasing toward the finite limit
        prev = l.values[i];
        CHECK(l.values[i] == doctest::Approx(closed(l.radii[i], 0.5)).epsilon(1e-9));
    }
    CHECK(l.values.back() == doctest::Approx(closed(0.0, 0.5)).epsilon(1e-4));
}

TEST_CASE("dirichlet energy ladder: bump-localized harmonic stays bounded") {
    const auto m = patch(0.0, {},
                         mt::SmoothTerm::product(mt::SmoothTerm::bump(0.05, 0.3),
                                                 mt::SmoothTerm::angular_harmonic(2, 0.5)),
                         0.5);
    const q::LadderResult l = q::dirichlet_energy_ladder(m, 0.1, 8);
    double prev = -1.0;
    for (double v : l.values) {
        CHECK(v >= prev);
        prev = v;
    }
    // below the bump plateau only the r^2 harmonic contributes; its annulus
    // energy shrinks 16x per rung, so the increments must collapse
    const std::size_t n = l.values.size();
    const double last_inc = l.values[n - 1] - l.values[n - 2];
    const double prev_inc = l.values[n - 2] - l.values[n - 3];
    CHECK(last_inc <= 0.25 * prev_inc + 1e-15);
}

TEST_SUITE_END();
