#pragma once

#include "gbcheck/quad.hpp"

namespace gbcheck::logcalc {

/// Iterated logarithms log^{(k)} r of a radius r in (0,1):
///   log^{(0)} r := |log r| = -log r,   log^{(k)} r := log(log^{(k-1)} r).
///
/// Depth-k values exist only for r in (0, R_k), where R_0 = R_1 = 1 and
/// R_{k+1} is the largest radius keeping every intermediate chain value
/// strictly positive (R_2 = e^{-1}, R_3 = e^{-e}, ...). R_5 already
/// underflows double precision, so depths >= 5 have no representable domain.

/// Domain guard radius R_k.
double domain_limit(int k);

/// log^{(k)} r. Throws DomainError outside (0, R_k).
double iterlog_eval(int k, double r);

/// d/dr log^{(k)} r = -1 / (r * prod_{j=0}^{k-1} log^{(j)} r), k >= 1.
double iterlog_dr(int k, double r);

/// Radial Laplacian f'' + f'/r of log^{(k)} r in closed form.
/// k = 0 gives 0; k = 1 gives -1/(r^2 (log r)^2); k >= 2 gives
/// [-(prod_{j=1}^{k-1} log^{(j)} r) - sum_{l=1}^{k-1} prod_{j=l+1}^{k-1} log^{(j)} r]
///   / (r * prod_{j=0}^{k-1} log^{(j)} r)^2.
double iterlog_laplacian(int k, double r);

/// ∫_{B_eps \ 0} |Δ log^{(k)} r| dx dy, computed adaptively in the t = log r
/// variable. Requires k >= 1 and eps < R_k; checks numerically that the
/// integrand has constant sign on (0, eps).
double iterlog_abs_laplacian_integral(int k, double eps, const quad::Tolerances& tol = {});

/// Closed antiderivative of the same integral:
///   2π / prod_{j=0}^{k-1} log^{(j)}(eps)  (the k = 1 case is 2π * (-1/log eps)).
/// Note the bare radial antiderivative -1/log(eps) must be multiplied by the
/// angular factor 2π.
double abs_laplacian_integral_closed_form(int k, double eps);

// --- log-variable forms, t = log r (t < 0). These stay evaluable far below
// --- the smallest representable radius and are what the singular
// --- integrators consume.

/// log^{(k)} r at t = log r.
double eval_logvar(int k, double t);

/// r * d/dr log^{(k)} r at t = log r (k >= 1).
double r_dr_logvar(int k, double t);

/// r^2 * Δ log^{(k)} r at t = log r.
double r2_laplacian_logvar(int k, double t);

} // namespace gbcheck::logcalc
