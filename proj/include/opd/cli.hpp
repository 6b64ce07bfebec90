#ifndef OPD_CLI_HPP
#define OPD_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "opd/dynamics.hpp"

namespace opd {

// Preset run for one of the named scenarios fig3 ... fig9.
// Throws std::invalid_argument for an unknown name.
RunConfig scenario_config(const std::string& name, std::uint64_t seed = 1);
std::vector<std::string> scenario_names();

// Entry point of the `opd` tool. Subcommands: run, sweep, scan, predict, scenario.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opd

#endif  // OPD_CLI_HPP
