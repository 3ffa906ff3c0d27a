// cli_app.hpp
// The wvsim command-line front end. Each subcommand has a declarative
// parameter schema; values resolve as CLI flag > config file > default.
// Everything numeric is emitted through a locale-independent formatter so
// identical configs produce byte-identical CSV.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace wvsim::cli {

// start:stop:step, inclusive of stop when it lies on the lattice within
// 1e-9; a bare number is a one-point grid. Throws std::invalid_argument on
// malformed specs.
std::vector<double> parse_grid(const std::string& spec);

// 12 significant digits, '.' decimal point, no locale involvement.
std::string format_number(double value);
std::string format_integer(std::uint64_t value);

// Flat `key = value` config document; '#' starts a comment line.
std::map<std::string, std::string> load_config(const std::string& path);

// Full application: parses argv (plus optional config file), runs exactly
// one command, writes CSV to --output (or `out`) and a JSON summary sidecar
// next to it (or to `err`). Returns the process exit code:
//   0 success, 2 validation error, 3 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wvsim::cli
