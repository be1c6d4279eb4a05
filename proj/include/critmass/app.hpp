#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "critmass/criteria.hpp"
#include "critmass/errors.hpp"
#include "critmass/serialize.hpp"
#include "critmass/solver.hpp"
#include "critmass/variational.hpp"

namespace critmass {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitConfig = 2,
  kExitNoConvergence = 3,
  kExitMissingConstants = 4,
  kExitOverflow = 5,
};

// Command-specific records parsed from a JSON file; every field has a default.
struct RunConfig {
  Json source;  // effective document after overrides

  Parameters params;
  double M1 = 1.0;
  double M2 = 1.0;

  struct Datum {
    double lm1, lm2, F0;
  };
  std::optional<Datum> datum;  // explicit norms for classify
  Json initial;                // {"u1": {...}, "u2": {...}} or {"pair": {...}}; empty when absent

  struct Constants {
    std::optional<double> lambda_star, pi_star, c_star, alpha, beta;
    bool compute = false;  // estimate missing constants with the maximizer
  } constants;

  std::optional<ObjectiveSpec> objective;  // explicit [objective] section
  MaximizeOptions maximizer;
  std::size_t seeds = 4;

  SolverConfig solver;
  T12Options criteria;
  bool alpha_scan = false;

  struct Sweep {
    std::vector<double> M1, M2;  // mass grid at fixed exponents
    std::vector<double> m1, m2;  // exponent grid at fixed masses
    std::optional<double> mu;    // rescaling of the maximizer data; fitted to the solver grid when absent
  } sweep;

  std::uint64_t seed = 1;
  std::size_t parallel = 1;
  std::optional<std::filesystem::path> out_dir;
  bool verbose = false;
  std::vector<std::string> sections;  // verify sections, empty for all
};

// Applies "a.b.c=value" to the document; value is parsed as JSON when possible, else kept as a string.
void apply_override(Json& doc, const std::string& assignment);

// Throws ConfigInvalid.
RunConfig parse_config(Json doc);
Json read_config_file(const std::filesystem::path& path);

// Each command prints its main result to out, writes files under out_dir when set,
// and returns its exit code. Library errors are mapped by exit_code_for.
int cmd_classify(const RunConfig& cfg, std::ostream& out);
int cmd_constant(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);

int exit_code_for(ErrorKind kind) noexcept;

// Verdict for one configuration. Throws MissingConstants when a constant is needed but neither
// given nor marked for computation.
struct Classification {
  Json json;
  Outcome outcome = Outcome::Indeterminate;
};
Classification classify(const RunConfig& cfg);

}  // namespace critmass
