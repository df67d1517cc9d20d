#include "gbcheck/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "gbcheck/errors.hpp"

namespace gbcheck::quad {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a = 0.0, b = 0.0;
    double value = 0.0;
    double error = 0.0;
};

struct PanelOrder {
    bool operator()(const Panel& lhs, const Panel& rhs) const {
        if (lhs.error != rhs.error) return lhs.error < rhs.error;
        return lhs.a > rhs.a; // deterministic tie-break
    }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double xm = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(xm);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        fv1[j] = f(xm - h * kXgk[j]);
        fv2[j] = f(xm + h * kXgk[j]);
        const double fsum = fv1[j] + fv2[j];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * fsum;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    const double ah = std::abs(h);
    double abserr = std::abs((resk - resg) * h);
    resasc *= ah;
    resabs *= ah;
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    const double epmach = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * epmach))
        abserr = std::max(abserr, 50.0 * epmach * resabs);
    return {a, b, resk * h, abserr};
}

// Globally adaptive bisection on [a, b]; draws from a shared evaluation
// budget so composite integrals stay within one overall cap.
QuadResult adaptive_gk(const std::function<double(double)>& f, double a, double b,
                       const Tolerances& tol, std::size_t& budget) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    auto spend = [&budget](std::size_t n) {
        if (budget < n) return false;
        budget -= n;
        return true;
    };
    if (!spend(15)) return out;

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    std::vector<Panel> done;
    heap.push(gk15(f, a, b));
    out.evaluations = 15;
    double total_value = heap.top().value;
    double total_error = heap.top().error;

    auto within_tol = [&tol](double err, double val) {
        return err <= std::max(tol.abs_tol, tol.rel_tol * std::abs(val));
    };

    bool budget_hit = false;
    while (!within_tol(total_error, total_value)) {
        if (heap.empty()) break;
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval no longer bisectable at double resolution
            heap.pop();
            done.push_back(worst);
            continue;
        }
        if (!spend(30)) {
            budget_hit = true;
            break;
        }
        heap.pop();
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });
    KahanSum vs;
    KahanSum es;
    for (const Panel& p : done) {
        vs.add(p.value);
        es.add(p.error);
    }
    out.value = vs.value();
    out.error_estimate = es.value();
    out.converged = !budget_hit && within_tol(out.error_estimate, out.value);
    return out;
}

double wrapped_log_density(const RadialIntegrand& f, double t) {
    if (f.log_density) return f.log_density(t);
    const double r = std::exp(t);
    if (r == 0.0) return 0.0;
    return f.density(r) * r * r;
}

} // namespace

RadialIntegrand from_density(std::function<double(double)> f) {
    RadialIntegrand out;
    out.density = std::move(f);
    return out;
}

RadialIntegrand from_log_density(std::function<double(double)> g) {
    RadialIntegrand out;
    out.log_density = std::move(g);
    return out;
}

QuadResult integrate_radial_singular(const RadialIntegrand& f, double a, double b,
                                     int depth_hint, const Tolerances& tol) {
    if (!f.density && !f.log_density)
        throw ValidationError("radial integrand has no evaluator");
    if (!(b > 0.0) || a < 0.0 || !(a < b))
        throw DomainError("integrate_radial_singular requires 0 <= a < b");
    if (a == 0.0 && depth_hint < 0)
        throw DomainError("a = 0 requires an integrand declared integrable at the "
                          "origin (depth_hint >= 0)");

    auto g = [&f](double t) { return wrapped_log_density(f, t); };
    std::size_t budget = tol.max_evaluations;
    const double t_top = std::log(b);

    if (a > 0.0) {
        QuadResult r = adaptive_gk(g, std::log(a), t_top, tol, budget);
        return r;
    }

    // a = 0: finite part down to t1, then the tail in s = log(-t), where the
    // substitution turns iterated-log decay into (at least) exponential decay.
    const double t1 = std::min(t_top, -2.0);
    Tolerances part_tol = tol;
    part_tol.rel_tol = tol.rel_tol * 0.25;
    part_tol.abs_tol = tol.abs_tol * 0.25;

    QuadResult out;
    KahanSum value;
    KahanSum error;
    bool all_converged = true;

    if (t1 < t_top) {
        const QuadResult head = adaptive_gk(g, t1, t_top, part_tol, budget);
        value.add(head.value);
        error.add(head.error_estimate);
        out.evaluations += head.evaluations;
        all_converged = all_converged && head.converged;
    }

    auto g_in_s = [&g](double s) {
        const double exp_s = std::exp(s);
        return g(-exp_s) * exp_s;
    };
    const double s0 = std::log(-t1);
    const double block_width = 5.0;
    const int max_blocks = 139; // keeps -t = e^s inside double range
    double truncation_bound = 0.0;
    bool tail_resolved = false;
    for (int j = 0; j < max_blocks; ++j) {
        const double s_lo = s0 + block_width * j;
        const double s_hi = s_lo + block_width;
        const QuadResult block = adaptive_gk(g_in_s, s_lo, s_hi, part_tol, budget);
        value.add(block.value);
        error.add(block.error_estimate);
        out.evaluations += block.evaluations;
        all_converged = all_converged && block.converged;
        const double cut =
            0.05 * std::max(tol.abs_tol, tol.rel_tol * std::abs(value.value()));
        if (std::abs(block.value) <= cut) {
            truncation_bound = std::abs(block.value);
            tail_resolved = true;
            break;
        }
        if (budget == 0) break;
    }

    out.value = value.value();
    out.error_estimate = error.value() + truncation_bound;
    out.converged =
        all_converged && tail_resolved &&
        out.error_estimate <= std::max(tol.abs_tol, tol.rel_tol * std::abs(out.value));
    return out;
}

QuadResult integrate_circle(const std::function<double(double)>& h, const Tolerances& tol) {
    QuadResult out;
    std::size_t n = 16;
    KahanSum sum;
    for (std::size_t i = 0; i < n; ++i) sum.add(h(kTwoPi * static_cast<double>(i) / static_cast<double>(n)));
    out.evaluations = n;
    double t_prev = sum.value() * kTwoPi / static_cast<double>(n);

    while (out.evaluations + n <= tol.max_evaluations) {
        // add the odd nodes of the doubled rule
        for (std::size_t i = 0; i < n; ++i)
            sum.add(h(kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n)));
        out.evaluations += n;
        n *= 2;
        const double t_cur = sum.value() * kTwoPi / static_cast<double>(n);
        const double diff = std::abs(t_cur - t_prev);
        out.value = t_cur;
        out.error_estimate = diff;
        if (diff <= std::max(tol.abs_tol, tol.rel_tol * std::abs(t_cur))) {
            out.converged = true;
            return out;
        }
        t_prev = t_cur;
        if (n > (std::size_t{1} << 16)) break; // smooth periodic integrands never need this
    }
    return out;
}

QuadResult integrate_chart_2d(const std::function<double(double, double)>& density,
                              double r_inner, double r_outer, const Tolerances& tol) {
    if (!(r_outer > r_inner) || r_inner < 0.0)
        throw DomainError("integrate_chart_2d requires 0 <= r_inner < r_outer");

    Tolerances inner_tol;
    inner_tol.rel_tol = tol.rel_tol * 0.25;
    inner_tol.abs_tol = tol.abs_tol * 0.25 / kTwoPi;
    inner_tol.max_evaluations = tol.max_evaluations;

    std::size_t budget = tol.max_evaluations;
    std::size_t inner_evals = 0;
    double max_inner_err = 0.0;
    bool inner_converged = true;

    auto radial_slice = [&](double theta) {
        auto f = [&density, theta](double r) { return density(r, theta) * r; };
        const QuadResult q = adaptive_gk(f, r_inner, r_outer, inner_tol, budget);
        inner_evals += q.evaluations;
        max_inner_err = std::max(max_inner_err, q.error_estimate);
        inner_converged = inner_converged && q.converged;
        return q.value;
    };

    Tolerances outer_tol = tol;
    outer_tol.rel_tol = tol.rel_tol * 0.5;
    outer_tol.abs_tol = tol.abs_tol * 0.5;
    QuadResult out = integrate_circle(radial_slice, outer_tol);
    out.evaluations += inner_evals;
    out.error_estimate += kTwoPi * max_inner_err;
    out.converged = out.converged && inner_converged &&
                    out.error_estimate <=
                        std::max(tol.abs_tol, tol.rel_tol * std::abs(out.value));
    return out;
}

double liminf_tail_estimate(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const std::size_t start = values.size() / 2;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = start; i < values.size(); ++i) m = std::min(m, std::abs(values[i]));
    return m;
}

} // namespace gbcheck::quad
