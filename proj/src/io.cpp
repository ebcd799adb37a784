#include "wasserlim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wasserlim::io {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) parse_error(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

PointId point_ref(const json& j, const std::vector<std::string>& names) {
  if (j.is_number_unsigned()) return j.get<PointId>();
  if (j.is_string()) {
    for (PointId i = 0; i < names.size(); ++i)
      if (names[i] == j.get<std::string>()) return i;
    parse_error("unknown point \"" + j.get<std::string>() + "\"");
  }
  parse_error("edge endpoints must be indices or point names");
}

// Either an inline object or a path relative to base_dir.
json resolve(const json& j, const fs::path& base_dir, fs::path& dir_out) {
  if (j.is_string()) {
    fs::path p = j.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    dir_out = p.parent_path();
    return read_json_file(p);
  }
  dir_out = base_dir;
  return j;
}

}  // namespace

SpacePtr space_from_json(const json& j) {
  const json& pts = field(j, "points");
  std::vector<std::string> names;
  if (pts.is_number_unsigned()) {
    for (std::size_t i = 0; i < pts.get<std::size_t>(); ++i) names.push_back(std::to_string(i));
  } else if (pts.is_array()) {
    for (const auto& p : pts) names.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  } else {
    parse_error("\"points\" must be an array of names");
  }
  PointId base = 0;
  if (j.contains("base")) {
    if (!j["base"].is_number_unsigned()) parse_error("\"base\" must be a point index");
    base = j["base"].get<PointId>();
  }
  if (base >= names.size()) throw Error(ErrorCode::InvalidArgument, "base point out of range");

  SpacePtr space;
  if (j.contains("metric")) {
    std::vector<std::vector<double>> m;
    if (!j["metric"].is_array()) parse_error("\"metric\" must be a matrix");
    for (const auto& row : j["metric"]) m.push_back(numbers(row, "metric entry"));
    if (m.size() != names.size())
      throw Error(ErrorCode::NotSquare, "metric has " + std::to_string(m.size()) + " rows for " +
                                            std::to_string(names.size()) + " points");
    space = validate_metric(m, base, names);
  } else if (j.contains("edges")) {
    std::vector<Edge> edges;
    if (!j["edges"].is_array()) parse_error("\"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 3) parse_error("each edge is [u, v, w]");
      Edge edge{point_ref(e[0], names), point_ref(e[1], names), number(e[2], "edge weight")};
      if (edge.u >= names.size() || edge.v >= names.size())
        throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
      edges.push_back(edge);
    }
    space = graph_metric(names.size(), edges, base, names);
  } else {
    parse_error("space needs \"metric\" or \"edges\"");
  }
  if (j.contains("coordinates")) space = with_coordinates(space, numbers(j["coordinates"], "coordinate"));
  return space;
}

json space_to_json(const FiniteMetricSpace& space) {
  json j;
  j["points"] = space.names();
  j["base"] = space.base_point();
  if (space.has_geodesic_structure()) {
    json edges = json::array();
    for (const Edge& e : space.edges()) edges.push_back({e.u, e.v, e.weight});
    j["edges"] = std::move(edges);
  } else {
    json m = json::array();
    for (PointId i = 0; i < space.size(); ++i) m.push_back(space.row(i));
    j["metric"] = std::move(m);
  }
  if (space.coordinates()) j["coordinates"] = *space.coordinates();
  return j;
}

DiscreteMeasure measure_from_json(const json& j, const fs::path& base_dir) {
  fs::path dir;
  const json space_json = resolve(field(j, "space"), base_dir, dir);
  SpacePtr space = space_from_json(space_json);
  auto w = numbers(field(j, "weights"), "weight");
  if (w.size() != space->size())
    throw Error(ErrorCode::SizeMismatch, std::to_string(w.size()) + " weights for " +
                                             std::to_string(space->size()) + " points");
  return DiscreteMeasure(std::move(space), std::move(w));
}

DiscreteMeasure load_measure(const fs::path& path) {
  return measure_from_json(read_json_file(path), path.parent_path());
}

json measure_to_json(const DiscreteMeasure& mu) {
  json j;
  j["space"] = space_to_json(mu.space());
  j["weights"] = std::vector<double>(mu.weights().begin(), mu.weights().end());
  return j;
}

Density density_from_json(const json& j, const fs::path& base_dir) {
  fs::path dir;
  const json ref = resolve(field(j, "reference"), base_dir, dir);
  DiscreteMeasure lambda = measure_from_json(ref, dir);
  const json& vals = field(j, "values");
  if (!vals.is_array() || vals.size() != lambda.size())
    throw Error(ErrorCode::SizeMismatch, "density needs one value per point");
  std::vector<std::optional<double>> values;
  for (const auto& v : vals) {
    if (v.is_null()) values.emplace_back();
    else values.emplace_back(number(v, "density value"));
  }
  const bool normalized = j.value("normalized", false);
  return Density(std::move(lambda), std::move(values), normalized);
}

json density_to_json(const Density& f) {
  json values = json::array();
  for (const auto& v : f.values()) values.push_back(v ? json(*v) : json(nullptr));
  return {{"reference", measure_to_json(f.reference())}, {"values", values}, {"normalized", f.normalized()}};
}

json coupling_to_json(const Coupling& c) {
  json plan = json::array();
  for (const PlanEntry& e : c.plan) plan.push_back({e.source, e.target, e.mass});
  return {{"p", c.p}, {"cost", c.cost}, {"plan", plan}};
}

json path_to_json(const WassersteinPath& path) {
  json measures = json::array();
  for (const auto& m : path.measures)
    measures.push_back(std::vector<double>(m.weights().begin(), m.weights().end()));
  json j;
  j["space"] = space_to_json(path.measures.front().space());
  j["times"] = path.times;
  j["weights"] = std::move(measures);
  j["w2"] = path.endpoints_cost;
  j["coupling"] = coupling_to_json(path.coupling_used);
  j["speed_defects"] = path.speed_defects;
  j["constant_speed_defect"] = path.constant_speed_defect;
  j["rounding_defect"] = path.rounding_defect;
  return j;
}

namespace {

std::vector<double> weights_of(const DiscreteMeasure& m) {
  return std::vector<double>(m.weights().begin(), m.weights().end());
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json curvature_report_to_json(const CurvatureReport& report) {
  json j;
  j["k_witnessed"] = report.k_witnessed;
  j["pairs_tested"] = report.pairs_tested;
  j["pairs_skipped"] = report.pairs_skipped;
  j["tolerance"] = report.tolerance;
  if (report.worst_pair) {
    const WorstPair& w = *report.worst_pair;
    j["worst_pair"] = {{"index", w.index},
                       {"nu0", weights_of(w.nu0)},
                       {"nu1", weights_of(w.nu1)},
                       {"midpoint", weights_of(w.midpoint)},
                       {"lhs", finite_or_null(w.lhs)},
                       {"rhs", finite_or_null(w.rhs)},
                       {"lhs_phi", finite_or_null(w.lhs_phi)},
                       {"w2", w.w2}};
  }
  json pairs = json::array();
  for (const PairRecord& r : report.pairs) {
    json p = {{"index", r.index}, {"skipped", r.skipped}, {"w2", r.w2}};
    if (!r.skipped) {
      p["k"] = r.k;
      p["h0"] = r.h0;
      p["h1"] = r.h1;
      p["h_mid"] = r.h_mid;
      p["slack"] = r.slack_at_hint;
      p["used_alternate"] = r.used_alternate;
    }
    pairs.push_back(std::move(p));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

json verdict_to_json(const StabilizationVerdict& v) {
  return {{"quantity", v.quantity},         {"labels", v.labels},
          {"values", v.values},             {"stabilized", v.stabilized},
          {"limit_estimate", v.limit_estimate}, {"tail_start", v.tail_start},
          {"tolerance", v.tolerance}};
}

std::string verdict_to_csv(const StabilizationVerdict& v) {
  std::ostringstream out;
  out << "index,label,value\n";
  for (std::size_t i = 0; i < v.values.size(); ++i)
    out << i << ',' << v.labels[i] << ',' << format_double(v.values[i]) << '\n';
  return out.str();
}

}  // namespace wasserlim::io
