#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wasserlim/curvature.hpp"
#include "wasserlim/limits.hpp"

namespace wasserlim::io {

using json = nlohmann::json;

// 17 significant digits, the precision used for all text output.
std::string format_double(double x);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// {"points": [names], "base": i, "metric": [[...]]}
// {"points": [names], "base": i, "edges": [[u, v, w], ...]}  (u, v: index or name)
// Optional "coordinates": [...] attaches real-line positions.
SpacePtr space_from_json(const json& j);
json space_to_json(const FiniteMetricSpace& space);

// {"space": <inline space or path>, "weights": [...]}; relative paths are
// resolved against base_dir.
DiscreteMeasure measure_from_json(const json& j, const std::filesystem::path& base_dir = {});
DiscreteMeasure load_measure(const std::filesystem::path& path);
json measure_to_json(const DiscreteMeasure& mu);

// {"reference": <measure or path>, "values": [... | null]}
Density density_from_json(const json& j, const std::filesystem::path& base_dir = {});
json density_to_json(const Density& f);

// {"p": p, "cost": W_p, "plan": [[i, j, mass], ...]}
json coupling_to_json(const Coupling& c);

json path_to_json(const WassersteinPath& path);
json curvature_report_to_json(const CurvatureReport& report);
json verdict_to_json(const StabilizationVerdict& verdict);

// index,label,value
std::string verdict_to_csv(const StabilizationVerdict& verdict);

}  // namespace wasserlim::io
