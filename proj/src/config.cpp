#include "gbcheck/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gbcheck/errors.hpp"

namespace gbcheck::config {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        std::ostringstream os;
        os << "expected numeric field '" << key << "'";
        throw ValidationError(os.str());
    }
    return j.at(key).get<double>();
}

std::string term_kind(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw ValidationError("smooth term needs a string 'kind'");
    return j.at("kind").get<std::string>();
}

} // namespace

quad::Tolerances QuadratureConfig::tolerances() const {
    quad::Tolerances t;
    t.rel_tol = rel_tol;
    t.abs_tol = abs_tol;
    t.max_evaluations = max_evaluations;
    return t;
}

metric::SmoothTerm smooth_term_from_json(const json& j) {
    const std::string kind = term_kind(j);
    if (kind == "const") return metric::SmoothTerm::constant(require_number(j, "value"));
    if (kind == "pow_r") return metric::SmoothTerm::pow_r(require_number(j, "p"));
    if (kind == "log_one_plus") {
        const double coeff = j.contains("coeff") ? require_number(j, "coeff") : 1.0;
        return metric::SmoothTerm::log_one_plus(require_number(j, "a"), coeff);
    }
    if (kind == "bump")
        return metric::SmoothTerm::bump(require_number(j, "r0"), require_number(j, "r1"));
    if (kind == "angular_harmonic")
        return metric::SmoothTerm::angular_harmonic(
            static_cast<int>(require_number(j, "m")), require_number(j, "amplitude"));
    if (kind == "sum" || kind == "product") {
        if (!j.contains("terms") || !j.at("terms").is_array())
            throw ValidationError("'" + kind + "' needs a 'terms' array");
        std::vector<metric::SmoothTerm> terms;
        for (const json& t : j.at("terms")) terms.push_back(smooth_term_from_json(t));
        if (kind == "sum") return metric::SmoothTerm::sum(std::move(terms));
        if (terms.size() != 2) throw ValidationError("'product' takes exactly two terms");
        return metric::SmoothTerm::product(terms[0], terms[1]);
    }
    if (kind == "scale") {
        if (!j.contains("term")) throw ValidationError("'scale' needs a 'term'");
        return metric::SmoothTerm::scale(require_number(j, "factor"),
                                         smooth_term_from_json(j.at("term")));
    }
    throw ValidationError("unknown smooth term kind '" + kind + "'");
}

json to_json(const metric::SmoothTerm& term) {
    using Node = metric::SmoothTerm::Node;
    const Node& n = term.node();
    json j;
    switch (n.kind) {
        case Node::Kind::Const:
            j = {{"kind", "const"}, {"value", n.p0}};
            break;
        case Node::Kind::PowR:
            j = {{"kind", "pow_r"}, {"p", n.p0}};
            break;
        case Node::Kind::LogOnePlus:
            j = {{"kind", "log_one_plus"}, {"a", n.p0}, {"coeff", n.p1}};
            break;
        case Node::Kind::Bump:
            j = {{"kind", "bump"}, {"r0", n.p0}, {"r1", n.p1}};
            break;
        case Node::Kind::AngularHarmonic:
            j = {{"kind", "angular_harmonic"}, {"m", n.m}, {"amplitude", n.p0}};
            break;
        case Node::Kind::Sum: {
            j["kind"] = "sum";
            j["terms"] = json::array();
            for (const auto& t : n.children) j["terms"].push_back(to_json(t));
            break;
        }
        case Node::Kind::Product: {
            j["kind"] = "product";
            j["terms"] = json::array();
            for (const auto& t : n.children) j["terms"].push_back(to_json(t));
            break;
        }
        case Node::Kind::Scale:
            j = {{"kind", "scale"}, {"factor", n.factor}, {"term", to_json(n.children[0])}};
            break;
    }
    return j;
}

metric::SingularProfile profile_from_json(const json& j) {
    metric::SingularProfile p;
    if (!j.is_object()) throw ValidationError("profile must be an object");
    p.alpha = j.contains("alpha") ? require_number(j, "alpha") : 0.0;
    if (j.contains("betas")) {
        if (!j.at("betas").is_array()) throw ValidationError("'betas' must be an array");
        for (const json& b : j.at("betas")) {
            if (!b.is_number()) throw ValidationError("'betas' entries must be numbers");
            p.betas.push_back(b.get<double>());
        }
    }
    if (j.contains("smooth")) p.smooth = smooth_term_from_json(j.at("smooth"));
    return p;
}

json to_json(const metric::SingularProfile& p) {
    return {{"alpha", p.alpha}, {"betas", p.betas}, {"smooth", to_json(p.smooth)}};
}

surface::SurfaceSpec surface_spec_from_json(const json& j) {
    surface::SurfaceSpec spec;
    if (!j.is_object() || !j.contains("kind"))
        throw ValidationError("surface spec needs a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sphere") {
        spec.kind = surface::SurfaceKind::Sphere;
    } else if (kind == "torus") {
        spec.kind = surface::SurfaceKind::Torus;
        if (j.contains("torus_modulus")) {
            const json& t = j.at("torus_modulus");
            if (!t.is_array() || t.size() != 2)
                throw ValidationError("'torus_modulus' must be [re, im]");
            spec.tau = {t[0].get<double>(), t[1].get<double>()};
        }
    } else {
        throw ValidationError("unknown surface kind '" + kind + "'");
    }

    if (j.contains("punctures")) {
        if (!j.at("punctures").is_array()) throw ValidationError("'punctures' must be an array");
        for (const json& pj : j.at("punctures")) {
            surface::PunctureSpec p;
            if (!pj.contains("location")) throw ValidationError("puncture needs a 'location'");
            const json& loc = pj.at("location");
            if (loc.is_string()) {
                const std::string l = loc.get<std::string>();
                if (l == "zero") p.location = surface::PunctureSpec::Location::Zero;
                else if (l == "infinity") p.location = surface::PunctureSpec::Location::Infinity;
                else throw ValidationError("sphere location must be 'zero' or 'infinity'");
            } else if (loc.is_array() && loc.size() == 2) {
                p.location = surface::PunctureSpec::Location::Plane;
                p.position = {loc[0].get<double>(), loc[1].get<double>()};
            } else {
                throw ValidationError("'location' must be 'zero', 'infinity' or [x, y]");
            }
            if (!pj.contains("profile")) throw ValidationError("puncture needs a 'profile'");
            p.profile = profile_from_json(pj.at("profile"));
            if (pj.contains("chart_radius")) p.chart_radius = require_number(pj, "chart_radius");
            if (pj.contains("blend")) {
                const json& b = pj.at("blend");
                if (b.is_null()) {
                    p.blended = false;
                } else {
                    p.blended = true;
                    p.blend_r0 = require_number(b, "r0");
                    p.blend_r1 = require_number(b, "r1");
                }
            } else if (pj.contains("blended")) {
                p.blended = pj.at("blended").get<bool>();
            }
            spec.punctures.push_back(std::move(p));
        }
    }
    return spec;
}

json to_json(const surface::SurfaceSpec& spec) {
    json j;
    j["kind"] = spec.kind == surface::SurfaceKind::Sphere ? "sphere" : "torus";
    if (spec.kind == surface::SurfaceKind::Torus)
        j["torus_modulus"] = {spec.tau.real(), spec.tau.imag()};
    j["punctures"] = json::array();
    for (const surface::PunctureSpec& p : spec.punctures) {
        json pj;
        switch (p.location) {
            case surface::PunctureSpec::Location::Zero: pj["location"] = "zero"; break;
            case surface::PunctureSpec::Location::Infinity: pj["location"] = "infinity"; break;
            case surface::PunctureSpec::Location::Plane:
                pj["location"] = {p.position.real(), p.position.imag()};
                break;
        }
        pj["profile"] = to_json(p.profile);
        if (p.chart_radius != 0.0) pj["chart_radius"] = p.chart_radius;
        if (p.blended) {
            if (p.blend_r0 != 0.0 || p.blend_r1 != 0.0)
                pj["blend"] = {{"r0", p.blend_r0}, {"r1", p.blend_r1}};
        } else {
            pj["blend"] = nullptr;
        }
        j["punctures"].push_back(std::move(pj));
    }
    return j;
}

RunConfig run_config_from_json(const json& j) {
    RunConfig cfg;
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    if (!j.contains("surface")) throw ValidationError("config needs a 'surface'");
    cfg.surface = surface_spec_from_json(j.at("surface"));
    if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        if (q.contains("rel_tol")) cfg.quadrature.rel_tol = require_number(q, "rel_tol");
        if (q.contains("abs_tol")) cfg.quadrature.abs_tol = require_number(q, "abs_tol");
        if (q.contains("max_evaluations"))
            cfg.quadrature.max_evaluations =
                static_cast<std::size_t>(q.at("max_evaluations").get<double>());
        if (q.contains("ladder_eps0")) cfg.quadrature.ladder_eps0 = require_number(q, "ladder_eps0");
        if (q.contains("ladder_count"))
            cfg.quadrature.ladder_count = static_cast<int>(require_number(q, "ladder_count"));
        if (!(cfg.quadrature.rel_tol > 0.0) || !(cfg.quadrature.abs_tol > 0.0))
            throw ValidationError("tolerances must be positive");
        if (cfg.quadrature.ladder_count < 3)
            throw ValidationError("ladder_count must be at least 3");
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        if (o.contains("report_path")) cfg.output.report_path = o.at("report_path").get<std::string>();
        if (o.contains("csv_dir")) cfg.output.csv_dir = o.at("csv_dir").get<std::string>();
        if (o.contains("precision_digits"))
            cfg.output.precision_digits = static_cast<int>(require_number(o, "precision_digits"));
    }
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json j;
    j["surface"] = to_json(cfg.surface);
    j["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                       {"abs_tol", cfg.quadrature.abs_tol},
                       {"max_evaluations", cfg.quadrature.max_evaluations},
                       {"ladder_eps0", cfg.quadrature.ladder_eps0},
                       {"ladder_count", cfg.quadrature.ladder_count}};
    j["output"] = {{"report_path", cfg.output.report_path},
                   {"csv_dir", cfg.output.csv_dir},
                   {"precision_digits", cfg.output.precision_digits}};
    return j;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return run_config_from_json(j);
}

double round_sig(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const double mag = std::floor(std::log10(std::abs(x)));
    const double scale = std::pow(10.0, static_cast<double>(digits - 1) - mag);
    return std::round(x * scale) / scale;
}

namespace {

json rounded(double x, int digits) { return round_sig(x, digits); }

json rounded(const std::vector<double>& xs, int digits) {
    json out = json::array();
    for (double x : xs) out.push_back(round_sig(x, digits));
    return out;
}

} // namespace

json ladder_to_json(const quad::LadderResult& l, int digits) {
    json j;
    j["radii"] = rounded(l.radii, digits);
    j["values"] = rounded(l.values, digits);
    j["error_estimates"] = rounded(l.error_estimates, digits);
    j["liminf_estimate"] = rounded(l.liminf_estimate, digits);
    j["log_fit_coefficient"] = rounded(l.log_fit_coefficient, digits);
    j["log_fit_rms"] = rounded(l.log_fit_rms, digits);
    return j;
}

std::string ladder_to_csv(const quad::LadderResult& l) {
    std::ostringstream os;
    os.precision(17);
    os << "eps,value,error_estimate\n";
    for (std::size_t i = 0; i < l.radii.size(); ++i)
        os << l.radii[i] << ',' << l.values[i] << ',' << l.error_estimates[i] << '\n';
    return os.str();
}

json report_to_json(const surface::GaussBonnetReport& rep, int digits) {
    json j;
    j["chi"] = rep.chi;
    j["orders"] = rounded(rep.orders, digits);
    j["total_curvature_over_2pi"] = rounded(rep.total_curvature_over_2pi, digits);
    j["l1_curvature"] = rounded(rep.l1_curvature, digits);
    j["defect"] = rounded(rep.defect, digits);
    j["flux_ladders"] = json::array();
    for (const quad::LadderResult& l : rep.flux_ladders)
        j["flux_ladders"].push_back(ladder_to_json(l, digits));
    const surface::QuadratureMeta& m = rep.quadrature_meta;
    j["quadrature_meta"] = {{"rel_tol", m.rel_tol},
                            {"abs_tol", m.abs_tol},
                            {"max_evaluations", m.max_evaluations},
                            {"total_evaluations", m.total_evaluations},
                            {"summed_error_estimate", rounded(m.summed_error_estimate, digits)},
                            {"total_converged", m.total_converged},
                            {"l1_converged", m.l1_converged},
                            {"notes", m.notes}};
    return j;
}

} // namespace gbcheck::config
