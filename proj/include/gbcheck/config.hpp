#pragma once

#include <string>

#include <json.hpp>

#include "gbcheck/metric.hpp"
#include "gbcheck/quad.hpp"
#include "gbcheck/surface.hpp"

namespace gbcheck::config {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    std::size_t max_evaluations = std::size_t{1} << 20;
    double ladder_eps0 = 0.0; // 0 -> per-puncture default
    int ladder_count = 8;
    quad::Tolerances tolerances() const;
};

struct OutputConfig {
    std::string report_path = "report.json";
    std::string csv_dir;
    int precision_digits = 12;
};

struct RunConfig {
    surface::SurfaceSpec surface;
    QuadratureConfig quadrature;
    OutputConfig output;
};

// parsing throws ValidationError on malformed input
metric::SmoothTerm smooth_term_from_json(const nlohmann::json& j);
nlohmann::json to_json(const metric::SmoothTerm& term);

metric::SingularProfile profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const metric::SingularProfile& profile);

surface::SurfaceSpec surface_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const surface::SurfaceSpec& spec);

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);
RunConfig load_run_config(const std::string& path);

/// Report emission; all floats rounded to precision_digits significant digits
/// so equal configs produce byte-identical documents.
nlohmann::json report_to_json(const surface::GaussBonnetReport& rep, int precision_digits);
nlohmann::json ladder_to_json(const quad::LadderResult& ladder, int precision_digits);
std::string ladder_to_csv(const quad::LadderResult& ladder);

double round_sig(double x, int digits);

} // namespace gbcheck::config
