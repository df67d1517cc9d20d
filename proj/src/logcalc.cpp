#include "gbcheck/logcalc.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "gbcheck/errors.hpp"

namespace gbcheck::logcalc {

namespace {

constexpr int kMaxGuardDepth = 32;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// R_k by explicit nesting: R_{k} = exp(-exp(...exp(1)...)) with k-2 exps.
// Underflows to 0 from k = 5 on, which makes the guard reject every radius.
const std::array<double, kMaxGuardDepth + 1>& guard_table() {
    static const auto table = [] {
        std::array<double, kMaxGuardDepth + 1> t{};
        t[0] = 1.0;
        t[1] = 1.0;
        for (int k = 2; k <= kMaxGuardDepth; ++k) {
            double x = 1.0;
            for (int i = 0; i < k - 2; ++i) x = std::exp(x);
            t[k] = std::exp(-x);
        }
        return t;
    }();
    return table;
}

void check_depth(int k) {
    if (k < 0 || k > kMaxGuardDepth) {
        std::ostringstream os;
        os << "iterated-log depth " << k << " out of range [0, " << kMaxGuardDepth << "]";
        throw DomainError(os.str());
    }
}

void check_radius(int k, double r) {
    check_depth(k);
    const double rk = guard_table()[static_cast<std::size_t>(k)];
    if (!(r > 0.0) || !(r < rk)) {
        std::ostringstream os;
        os << "radius " << r << " outside the depth-" << k << " domain guard (0, R_" << k
           << ") with R_" << k << " = " << rk;
        throw DomainError(os.str());
    }
}

// Chain M_j = log^{(j)} r evaluated from t = log r: M_0 = -t, M_j = log(M_{j-1}).
// Fills chain[0..k] and returns false if any intermediate needed for depth k
// is non-positive (chain undefined).
bool chain_from_t(int k, double t, std::vector<double>& chain) {
    chain.resize(static_cast<std::size_t>(k) + 1);
    double v = -t;
    if (!(v > 0.0)) return false;
    chain[0] = v;
    for (int j = 1; j <= k; ++j) {
        if (!(v > 0.0)) return false;
        v = std::log(v);
        chain[static_cast<std::size_t>(j)] = v;
    }
    return true;
}

void require_chain(int k, double t, std::vector<double>& chain) {
    if (!chain_from_t(k, t, chain)) {
        std::ostringstream os;
        os << "iterated-log chain of depth " << k << " undefined at log r = " << t;
        throw DomainError(os.str());
    }
}

// Numerator of r^2 Δ log^{(k)} r for k >= 2 via suffix products:
//   N = -(S_0 + sum_{l=1}^{k-1} S_l),  S_l = prod_{j=l+1}^{k-1} M_j.
double laplacian_numerator(int k, const std::vector<double>& chain) {
    double suffix = 1.0; // S_{k-1}
    double acc = 1.0;    // sum of S_l, l = k-1 down
    for (int l = k - 2; l >= 1; --l) {
        suffix *= chain[static_cast<std::size_t>(l + 1)];
        acc += suffix;
    }
    const double s0 = suffix * chain[1]; // prod_{j=1}^{k-1} M_j
    return -(s0 + acc);
}

double chain_product(int upto, const std::vector<double>& chain) {
    double p = 1.0;
    for (int j = 0; j < upto; ++j) p *= chain[static_cast<std::size_t>(j)];
    return p;
}

} // namespace

double domain_limit(int k) {
    check_depth(k);
    return guard_table()[static_cast<std::size_t>(k)];
}

double iterlog_eval(int k, double r) {
    check_radius(k, r);
    std::vector<double> chain;
    require_chain(k, std::log(r), chain);
    return chain[static_cast<std::size_t>(k)];
}

double eval_logvar(int k, double t) {
    check_depth(k);
    std::vector<double> chain;
    require_chain(k, t, chain);
    return chain[static_cast<std::size_t>(k)];
}

double iterlog_dr(int k, double r) {
    if (k < 1) throw DomainError("iterlog_dr requires depth k >= 1");
    check_radius(k, r);
    std::vector<double> chain;
    require_chain(k - 1, std::log(r), chain);
    return -1.0 / (r * chain_product(k, chain));
}

double r_dr_logvar(int k, double t) {
    if (k < 1) throw DomainError("r_dr_logvar requires depth k >= 1");
    std::vector<double> chain;
    require_chain(k - 1, t, chain);
    return -1.0 / chain_product(k, chain);
}

double iterlog_laplacian(int k, double r) {
    check_radius(k, r);
    if (k == 0) return 0.0;
    const double t = std::log(r);
    std::vector<double> chain;
    require_chain(k - 1, t, chain);
    if (k == 1) {
        const double q = 1.0 / (r * t);
        return -q * q;
    }
    const double denom = r * chain_product(k, chain);
    return laplacian_numerator(k, chain) / (denom * denom);
}

double r2_laplacian_logvar(int k, double t) {
    check_depth(k);
    if (k == 0) return 0.0;
    std::vector<double> chain;
    require_chain(k - 1, t, chain);
    if (k == 1) return -1.0 / (t * t);
    const double denom = chain_product(k, chain);
    return laplacian_numerator(k, chain) / (denom * denom);
}

double abs_laplacian_integral_closed_form(int k, double eps) {
    if (k < 1) throw DomainError("abs_laplacian_integral requires depth k >= 1");
    check_radius(k, eps);
    std::vector<double> chain;
    require_chain(k - 1, std::log(eps), chain);
    return kTwoPi / chain_product(k, chain);
}

double iterlog_abs_laplacian_integral(int k, double eps, const quad::Tolerances& tol) {
    if (k < 1) throw DomainError("iterlog_abs_laplacian_integral requires depth k >= 1");
    check_radius(k, eps);

    // Sign-constancy precheck on (0, eps): sample the scaled Laplacian on a
    // wide logarithmic grid of t values below log(eps).
    const double t_eps = std::log(eps);
    {
        const double s_lo = std::log(-t_eps);
        double first_sign = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double s = s_lo + (40.0 - s_lo) * (static_cast<double>(i) / 64.0);
            const double v = r2_laplacian_logvar(k, -std::exp(s));
            if (v == 0.0) continue;
            const double sign = v > 0.0 ? 1.0 : -1.0;
            if (first_sign == 0.0) first_sign = sign;
            else if (sign != first_sign)
                throw DomainError("integrand changes sign on (0, eps); choose a smaller eps");
        }
    }

    auto integrand = quad::from_log_density(
        [k](double t) { return std::abs(r2_laplacian_logvar(k, t)); });
    const quad::QuadResult q = quad::integrate_radial_singular(integrand, 0.0, eps, k, tol);
    if (!q.converged) {
        std::ostringstream os;
        os << "abs-Laplacian integral (k=" << k << ", eps=" << eps
           << ") did not reach tolerance after " << q.evaluations << " evaluations";
        throw NonConvergenceError(os.str());
    }
    return kTwoPi * q.value;
}

} // namespace gbcheck::logcalc
