#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace wasserlim::cli {

struct RunConfig {
  std::string subcommand;

  // inputs
  std::string space;
  std::string mu;
  std::string nu;
  std::string mu0;
  std::string mu1;
  std::string lambda;
  std::string dir;
  std::string dyadic;  // "first,last" level range for sequence
  std::string config;  // JSON flag file, already merged by main_entry

  // numeric parameters
  double p = 2.0;
  double k_hint = 0.0;  // K for the per-pair cd slacks
  double delta = 0.1;
  double tol = 1e-3;          // stabilization tolerance
  double entropy_tol = 1e-7;  // cd entropy comparisons
  std::uint64_t seed = 7;
  std::size_t pairs = 50;
  std::string grid = "0,0.5,1";
  std::string n_values = "4,16,256,65536";
  std::string quantity = "w2";
  std::string family = "auto";

  // outputs
  std::string out;
  std::string csv;
  std::string svg;
  std::string coupling;

  int verbosity = 0;
};

// Invalid flag values or missing inputs; exit status 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Executes a parsed configuration. Returns 0 on success and 1 on domain
// errors (an error JSON line goes to `out`); throws UsageError.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full entry point: parses args (without the program name), merges the
// --config file under explicit flags, and runs. Usage errors return 2.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wasserlim::cli
