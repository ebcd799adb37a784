#include "wasserlim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wasserlim/io.hpp"
#include "wasserlim/parallel.hpp"
#include "wasserlim/svg.hpp"

namespace wasserlim::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

const std::vector<std::string> kSubcommands = {"transport", "geodesic",   "cd",      "sequence",
                                               "counterexample", "quantize", "validate"};

std::unique_ptr<CLI::App> build_app(RunConfig& c) {
  auto app = std::make_unique<CLI::App>("Optimal transport and curvature checks on finite metric measure spaces",
                                        "wasserlim");
  app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app->require_subcommand(1);
  app->set_help_all_flag("--help-all", "Help for every subcommand");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "JSON file of flag values; explicit flags win");
    sub->add_flag("-v,--verbose", c.verbosity, "Diagnostics on stderr (repeatable)");
  };
  const CLI::Validator p_range(
      [](std::string& text) {
        double p = 0.0;
        try {
          p = std::stod(text);
        } catch (const std::exception&) {
          return std::string("not a number: ") + text;
        }
        return p >= 1.0 && std::isfinite(p) ? std::string() : "p must be >= 1, got " + text;
      },
      "p >= 1");

  auto* t = app->add_subcommand("transport", "Exact W_p distance and optimal coupling");
  t->add_option("--mu", c.mu, "Source measure JSON")->required();
  t->add_option("--nu", c.nu, "Target measure JSON")->required();
  t->add_option("--p", c.p, "Order p >= 1")->capture_default_str()->check(p_range);
  t->add_option("--coupling", c.coupling, "Write the coupling JSON here");
  t->add_option("--out", c.out, "Write a result JSON here");
  common(t);

  auto* g = app->add_subcommand("geodesic", "Displacement interpolation over a time grid");
  g->add_option("--mu0", c.mu0, "Start measure JSON")->required();
  g->add_option("--mu1", c.mu1, "End measure JSON")->required();
  g->add_option("--grid", c.grid, "Comma-separated times in [0,1], including 0 and 1")->capture_default_str();
  g->add_option("--out", c.out, "Write the path JSON here");
  common(g);

  auto* cd = app->add_subcommand("cd", "Witnessed CD(K,inf) constant from seeded pairs");
  cd->add_option("--lambda", c.lambda, "Reference measure JSON")->required();
  cd->add_option("--pairs", c.pairs, "Number of endpoint pairs")->capture_default_str()->check(CLI::PositiveNumber);
  cd->add_option("--seed", c.seed, "Pair generator seed")->capture_default_str();
  cd->add_option("--k-hint", c.k_hint, "K for per-pair slacks and alternate-coupling search")->capture_default_str();
  cd->add_option("--family", c.family, "Density family: auto, random or bump")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "random", "bump"}));
  cd->add_option("--tol", c.entropy_tol, "Absolute tolerance on entropy comparisons")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cd->add_option("--out", c.out, "Write the report JSON here");
  common(cd);

  auto* s = app->add_subcommand("sequence", "Stabilization verdict along an indexed family");
  auto* dir = s->add_option("--dir", c.dir, "Directory of JSON instances, taken in filename order");
  auto* dy = s->add_option("--dyadic", c.dyadic, "Dyadic interval levels FIRST,LAST with uniform reference");
  dir->excludes(dy);
  s->add_option("--quantity", c.quantity, "w, w<p>, tv, k or quantize")->capture_default_str();
  s->add_option("--p", c.p, "Order p >= 1 for w and quantize")->capture_default_str()->check(p_range);
  s->add_option("--tol", c.tol, "Stabilization tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--delta", c.delta, "Quantization error target")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--pairs", c.pairs, "Pairs per entry for k")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--seed", c.seed, "Pair generator seed for k")->capture_default_str();
  s->add_option("--k-hint", c.k_hint, "K hint for k")->capture_default_str();
  s->add_option("--family", c.family, "Density family for k: auto, random or bump")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "random", "bump"}));
  s->add_option("--csv", c.csv, "Write index,label,value CSV here");
  s->add_option("--svg", c.svg, "Write a value-vs-index chart here");
  s->add_option("--out", c.out, "Write the summary JSON here");
  common(s);

  auto* ce = app->add_subcommand("counterexample", "Escaping-mass table: W2 and TV against N");
  ce->add_option("--n", c.n_values, "Comma-separated positive integers N")->capture_default_str();
  ce->add_option("--tol", c.tol, "Stabilization tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  ce->add_option("--csv", c.csv, "Write N,w2,tv CSV here");
  ce->add_option("--svg", c.svg, "Write a W2-vs-index chart here");
  ce->add_option("--out", c.out, "Write the summary JSON here");
  common(ce);

  auto* q = app->add_subcommand("quantize", "Uniform Dirac cloud within delta in W_p");
  q->add_option("--mu", c.mu, "Measure JSON")->required();
  q->add_option("--delta", c.delta, "Error target")->capture_default_str()->check(CLI::PositiveNumber);
  q->add_option("--p", c.p, "Order p >= 1")->capture_default_str()->check(p_range);
  q->add_option("--out", c.out, "Write the cloud JSON here");
  common(q);

  auto* v = app->add_subcommand("validate", "Check the metric axioms of a space");
  v->add_option("--space", c.space, "Space JSON (a measure JSON is accepted too)")->required();
  common(v);
  return app;
}

// Flag values from --config, placed before the explicit flags so that the
// later (explicit) occurrence wins.
std::vector<std::string> config_args(const fs::path& path) {
  const json j = io::read_json_file(path);
  if (!j.is_object()) throw Error(ErrorCode::ParseError, path.string() + ": config must be an object");
  std::vector<std::string> args;
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(io::format_double(value.get<double>()));
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& x : value) {
        if (!joined.empty()) joined += ',';
        joined += x.is_number_float() ? io::format_double(x.get<double>()) : x.is_string() ? x.get<std::string>() : x.dump();
      }
      args.push_back(flag);
      args.push_back(joined);
    } else {
      throw Error(ErrorCode::ParseError, "config key \"" + key + "\" has an unsupported value");
    }
  }
  return args;
}

std::vector<double> parse_doubles(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(x))
      throw UsageError(std::string(flag) + ": \"" + item + "\" is not a number");
    out.push_back(x);
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  for (double x : parse_doubles(text, flag)) {
    if (x < 1.0 || x != std::floor(x) || x > 1e15)
      throw UsageError(std::string(flag) + ": values must be positive integers");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

void require(const std::string& value, const char* flag, const std::string& sub) {
  if (value.empty()) throw UsageError(sub + ": " + flag + " is required");
}

void check_p(double p, const char* flag) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw UsageError(std::string(flag) + ": p must be >= 1");
}

void check_positive(double x, const char* flag) {
  if (!(x > 0.0) || !std::isfinite(x)) throw UsageError(std::string(flag) + ": must be positive");
}

DensityFamily parse_family(const std::string& name) {
  if (name == "auto") return DensityFamily::Auto;
  if (name == "random") return DensityFamily::Random;
  if (name == "bump") return DensityFamily::Bump;
  throw UsageError("--family: expected auto, random or bump");
}

std::string fmt3(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string fmt_p(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

void write_json(const std::string& path, const json& j) {
  if (!path.empty()) io::write_text_file(path, j.dump(2) + "\n");
}

int cmd_transport(const RunConfig& c, std::ostream& out) {
  const DiscreteMeasure mu = io::load_measure(c.mu);
  const DiscreteMeasure nu = io::load_measure(c.nu);
  const TransportResult r = wasserstein_p(mu, nu, c.p);
  write_json(c.coupling, io::coupling_to_json(r.coupling));
  write_json(c.out, {{"p", c.p}, {"distance", r.distance}, {"plan_size", r.coupling.plan.size()},
                     {"alternative_optimum_possible", r.coupling.alternative_optimum_possible}});
  out << "W_" << fmt_p(c.p) << " = " << io::format_double(r.distance) << " (" << r.coupling.plan.size()
      << " plan entries)\n";
  return 0;
}

int cmd_geodesic(const RunConfig& c, std::ostream& out) {
  const DiscreteMeasure mu0 = io::load_measure(c.mu0);
  const DiscreteMeasure mu1 = io::load_measure(c.mu1);
  const WassersteinPath path = displacement_path(mu0, mu1, parse_doubles(c.grid, "--grid"));
  write_json(c.out, io::path_to_json(path));
  out << "W_2 = " << io::format_double(path.endpoints_cost)
      << ", constant-speed defect = " << io::format_double(path.constant_speed_defect)
      << ", rounding defect = " << io::format_double(path.rounding_defect) << "\n";
  return 0;
}

int cmd_cd(const RunConfig& c, std::ostream& out) {
  const DiscreteMeasure lambda = io::load_measure(c.lambda);
  PairGeneratorSpec spec{c.pairs, c.seed, parse_family(c.family)};
  EstimateOptions options;
  options.tolerance = c.entropy_tol;
  options.k_hint = c.k_hint;
  const CurvatureReport report = estimate_k(lambda, spec, options);
  json j = io::curvature_report_to_json(report);
  j["seed"] = c.seed;
  j["k_hint"] = c.k_hint;
  write_json(c.out, j);
  const bool holds = std::all_of(report.pairs.begin(), report.pairs.end(), [&](const PairRecord& r) {
    return r.skipped || r.slack_at_hint >= -c.entropy_tol;
  });
  out << "k_witnessed = " << fmt3(report.k_witnessed) << " over " << report.pairs_tested << " pairs ("
      << report.pairs_skipped << " skipped); worst pair " << report.worst_pair->index << "; CD("
      << fmt3(c.k_hint) << ") midpoint inequality " << (holds ? "holds" : "fails") << "\n";
  return 0;
}

struct Instance {
  std::string label;
  std::optional<DiscreteMeasure> reference, mu, nu;
};

std::optional<DiscreteMeasure> measure_field(const json& j, const char* key, const fs::path& dir) {
  if (!j.contains(key)) return std::nullopt;
  const json& v = j.at(key);
  if (v.is_string()) {
    fs::path p = v.get<std::string>();
    if (p.is_relative()) p = dir / p;
    return io::load_measure(p);
  }
  return io::measure_from_json(v, dir);
}

std::vector<Instance> load_instances(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  if (files.empty()) throw Error(ErrorCode::InvalidArgument, "no .json instances in " + dir.string());
  std::vector<Instance> out;
  for (const auto& f : files) {
    const json j = io::read_json_file(f);
    Instance inst;
    inst.label = j.value("label", f.stem().string());
    inst.reference = measure_field(j, "reference", dir);
    inst.mu = measure_field(j, "mu", dir);
    inst.nu = measure_field(j, "nu", dir);
    if (!inst.reference) inst.reference = inst.mu;
    if (!inst.reference)
      throw Error(ErrorCode::ParseError, f.string() + ": needs \"reference\" or \"mu\"");
    out.push_back(std::move(inst));
  }
  return out;
}

int cmd_sequence(const RunConfig& c, std::ostream& out) {
  if (c.dir.empty() && c.dyadic.empty()) throw UsageError("sequence: --dir or --dyadic is required");
  if (!c.dir.empty() && !c.dyadic.empty()) throw UsageError("sequence: --dir and --dyadic are exclusive");

  std::string quantity = c.quantity;
  double p = c.p;
  if (quantity.size() > 1 && quantity[0] == 'w' && quantity != "wp") {
    p = parse_doubles(quantity.substr(1), "--quantity").front();
    check_p(p, "--quantity");
    quantity = "w";
  } else if (quantity == "wp") {
    quantity = "w";
  }
  if (quantity != "w" && quantity != "tv" && quantity != "k" && quantity != "quantize")
    throw UsageError("--quantity: expected w, w<p>, tv, k or quantize");

  std::vector<Instance> instances;
  std::optional<SpaceSequence> seq;
  if (!c.dir.empty()) {
    instances = load_instances(c.dir);
    std::vector<SpaceSequence::Entry> entries;
    for (const auto& inst : instances) entries.push_back({*inst.reference, inst.label});
    seq.emplace(std::move(entries));
  } else {
    const auto levels = parse_counts(c.dyadic, "--dyadic");
    if (levels.size() != 2 || levels[0] > levels[1] || levels[1] > 16)
      throw UsageError("--dyadic: expected FIRST,LAST with FIRST <= LAST <= 16");
    if (quantity != "k" && quantity != "quantize")
      throw UsageError("--dyadic: only the k and quantize quantities are available");
    seq.emplace(dyadic_sequence(static_cast<int>(levels[0]), static_cast<int>(levels[1])));
  }

  json summary;
  StabilizationVerdict verdict;
  if (quantity == "w" || quantity == "tv") {
    MeasureFamily mu, nu;
    for (const auto& inst : instances) {
      if (!inst.mu || !inst.nu) throw Error(ErrorCode::ParseError, inst.label + ": needs \"mu\" and \"nu\"");
      mu.push_back(*inst.mu);
      nu.push_back(*inst.nu);
    }
    verdict = quantity == "w" ? sequence_wasserstein(*seq, mu, nu, p, c.tol)
                              : sequence_total_variation(*seq, mu, nu, c.tol);
  } else if (quantity == "k") {
    EstimateOptions options;
    options.k_hint = c.k_hint;
    const auto result = sequence_cd(*seq, PairGeneratorSpec{c.pairs, c.seed, parse_family(c.family)}, c.tol, options);
    verdict = result.verdict;
    summary["tail_min"] = result.tail_min;
    summary["seed"] = c.seed;
  } else {
    check_positive(c.delta, "--delta");
    const auto audit = quantization_uniformity_audit(*seq, c.delta, p);
    std::vector<double> counts;
    json rows = json::array();
    for (const auto& row : audit.rows) {
      counts.push_back(static_cast<double>(row.atom_count));
      rows.push_back({{"label", row.label},
                      {"atom_count", row.atom_count},
                      {"covering_k", row.covering_k},
                      {"covering_budget", row.covering_budget},
                      {"achieved_error", row.achieved_error}});
    }
    verdict = stabilization_verdict("atom_count", counts, c.tol, seq->labels());
    summary["uniform_n"] = audit.uniform_n;
    summary["delta"] = audit.delta;
    summary["p"] = audit.p;
    summary["rows"] = std::move(rows);
  }
  summary["verdict"] = io::verdict_to_json(verdict);

  if (!c.csv.empty()) io::write_text_file(c.csv, io::verdict_to_csv(verdict));
  if (!c.svg.empty()) io::write_text_file(c.svg, svg::line_chart(verdict.values, verdict.quantity, verdict.labels));
  write_json(c.out, summary);
  out << json{{"quantity", verdict.quantity},
              {"stabilized", verdict.stabilized},
              {"limit_estimate", verdict.limit_estimate},
              {"tail_start", verdict.tail_start}}
             .dump()
      << "\n";
  return 0;
}

int cmd_counterexample(const RunConfig& c, std::ostream& out) {
  const auto ns = parse_counts(c.n_values, "--n");
  const EscapingMassFamily fam = escaping_mass_family(ns);
  const auto w2 = sequence_wasserstein(fam.sequence, fam.dirac, fam.escaping, 2.0, c.tol);
  const auto tv = sequence_total_variation(fam.sequence, fam.dirac, fam.escaping, c.tol);
  if (!c.csv.empty()) {
    std::ostringstream csv;
    csv << "N,w2,tv\n";
    for (std::size_t i = 0; i < ns.size(); ++i)
      csv << ns[i] << ',' << io::format_double(w2.values[i]) << ',' << io::format_double(tv.values[i]) << '\n';
    io::write_text_file(c.csv, csv.str());
  }
  if (!c.svg.empty()) io::write_text_file(c.svg, svg::line_chart(w2.values, "W2 to the Dirac mass", w2.labels));
  write_json(c.out, {{"w2", io::verdict_to_json(w2)}, {"tv", io::verdict_to_json(tv)}});
  out << "W2 " << (w2.stabilized ? "stabilized at " + io::format_double(w2.limit_estimate) : std::string("not stabilized"))
      << "; TV " << (tv.stabilized ? "stabilized at " + io::format_double(tv.limit_estimate) : std::string("not stabilized"))
      << "\n";
  return 0;
}

int cmd_quantize(const RunConfig& c, std::ostream& out) {
  const DiscreteMeasure mu = io::load_measure(c.mu);
  const QuantizationResult q = uniform_quantization(mu, c.delta, c.p);
  write_json(c.out, {{"atom_count", q.atom_count},
                     {"achieved_error", q.achieved_error},
                     {"delta", c.delta},
                     {"p", c.p},
                     {"covering_k", q.covering_k},
                     {"covering_budget", q.covering_budget},
                     {"atoms", q.cloud.atoms},
                     {"cloud", io::measure_to_json(q.cloud.to_measure())}});
  out << "N = " << q.atom_count << ", W_" << fmt_p(c.p) << " error = " << io::format_double(q.achieved_error)
      << " (delta = " << io::format_double(c.delta) << ")\n";
  return 0;
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const json j = io::read_json_file(c.space);
  SpacePtr space;
  if (j.contains("space")) space = io::measure_from_json(j, fs::path(c.space).parent_path()).space_ptr();
  else space = io::space_from_json(j);
  out << "metric OK (n=" << space->size() << ", diam=" << io::format_double(diameter(*space)) << ")\n";
  return 0;
}

void validate_config(const RunConfig& c) {
  const std::string& s = c.subcommand;
  if (s == "transport") {
    require(c.mu, "--mu", s);
    require(c.nu, "--nu", s);
    check_p(c.p, "--p");
  } else if (s == "geodesic") {
    require(c.mu0, "--mu0", s);
    require(c.mu1, "--mu1", s);
    const auto grid = parse_doubles(c.grid, "--grid");
    for (double t : grid)
      if (t < 0.0 || t > 1.0) throw UsageError("--grid: times must lie in [0,1]");
    if (std::count(grid.begin(), grid.end(), 0.0) == 0 || std::count(grid.begin(), grid.end(), 1.0) == 0)
      throw UsageError("--grid: must contain 0 and 1");
  } else if (s == "cd") {
    require(c.lambda, "--lambda", s);
    if (c.pairs == 0) throw UsageError("--pairs: must be positive");
    check_positive(c.entropy_tol, "--tol");
    parse_family(c.family);
  } else if (s == "sequence") {
    check_p(c.p, "--p");
    check_positive(c.tol, "--tol");
    check_positive(c.delta, "--delta");
    parse_family(c.family);
  } else if (s == "counterexample") {
    check_positive(c.tol, "--tol");
    parse_counts(c.n_values, "--n");
  } else if (s == "quantize") {
    require(c.mu, "--mu", s);
    check_p(c.p, "--p");
    check_positive(c.delta, "--delta");
  } else if (s == "validate") {
    require(c.space, "--space", s);
  } else {
    throw UsageError("unknown subcommand \"" + s + "\"");
  }
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate_config(c);
  if (c.verbosity > 0) err << "wasserlim " << c.subcommand << ": " << worker_count() << " worker(s)\n";
  try {
    if (c.subcommand == "transport") return cmd_transport(c, out);
    if (c.subcommand == "geodesic") return cmd_geodesic(c, out);
    if (c.subcommand == "cd") return cmd_cd(c, out);
    if (c.subcommand == "sequence") return cmd_sequence(c, out);
    if (c.subcommand == "counterexample") return cmd_counterexample(c, out);
    if (c.subcommand == "quantize") return cmd_quantize(c, out);
    return cmd_validate(c, out);
  } catch (const Error& e) {
    out << json{{"error", std::string(e.name())}, {"message", e.message()}}.dump() << "\n";
    return 1;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  auto app = build_app(config);

  std::vector<std::string> merged = args;
  const auto sub = std::find_if(merged.begin(), merged.end(), [](const std::string& a) {
    return std::find(kSubcommands.begin(), kSubcommands.end(), a) != kSubcommands.end();
  });
  if (sub != merged.end()) {
    std::string config_path;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (merged[i] == "--config" && i + 1 < merged.size()) config_path = merged[i + 1];
      else if (merged[i].rfind("--config=", 0) == 0) config_path = merged[i].substr(9);
    }
    if (!config_path.empty()) {
      try {
        const auto extra = config_args(config_path);
        merged.insert(sub + 1, extra.begin(), extra.end());
      } catch (const Error& e) {
        out << json{{"error", std::string(e.name())}, {"message", e.message()}}.dump() << "\n";
        return 1;
      }
    }
  }

  // CLI11 wants the arguments reversed when given as a vector.
  std::vector<std::string> reversed(merged.rbegin(), merged.rend());
  try {
    app->parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app->exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app->exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app->exit(e, out, err);
    return 2;
  }
  config.subcommand = app->get_subcommands().front()->get_name();
  try {
    return run(config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace wasserlim::cli
