#ifndef OPD_CONFIG_HPP
#define OPD_CONFIG_HPP

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "opd/dynamics.hpp"
#include "opd/io.hpp"
#include "opd/sweep.hpp"

// Configuration files.
//
// Format (version 1): one `key = value` per line, `#` starts a comment,
// dotted keys group related settings. Lists are comma-separated.
//
//   format_version = 1            optional, must be 1
//   b = 1.6                       temptation T (required for runs)
//   A = 0.3                       initial aspiration (required for runs)
//   seed = 42                     required; base seed for sweeps
//   R, S, P, l, K, a              payoffs, noise, aspiration rate
//   size = 100                    lattice side L
//   steps = 5000                  default: 5000 if A <= 1.2 else 20000
//   protocol = desk | paper       paper: 100000 steps by default
//   window = 1000                 trailing averaging window
//   snapshots = 0, 10, 100        steps at which to dump snapshots
//   init.kind = random | bands | clusters | explicit
//   init.rc0, init.rd0, init.rl0  initial fractions (default thirds)
//   init.clusters = 5             patch count for init.kind = clusters
//   init.grid = path              strategy snapshot for init.kind = explicit
//   sweep.A = 0, 0.4, 0.8         presence of any sweep.* key makes a sweep
//   sweep.b = 1.1, 1.2
//   sweep.replicates = 20
namespace opd {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

// Parses the text form. `origin` prefixes error messages.
KeyValues parse_key_values(const std::string& text, const std::string& origin = "config");

using AnyConfig = std::variant<RunConfig, SweepConfig>;

// Builds and validates a configuration. Relative init.grid paths resolve against base_dir.
AnyConfig config_from_key_values(const KeyValues& kv, const std::filesystem::path& base_dir = {});

AnyConfig load_config(const std::filesystem::path& path);

// Canonical key/value echo; loading it back reproduces the configuration.
Provenance describe(const RunConfig& config);
Provenance describe(const SweepConfig& config);

}  // namespace opd

#endif  // OPD_CONFIG_HPP
