#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "entangle/optimizer.hpp"
#include "entangle/states.hpp"

namespace entangle::cli {

enum class Command { Ppt, Entropy, Chsh, Collective, Scan, Examples };
enum class Format { Csv, Json };

struct RunConfig {
  Command command = Command::Examples;
  std::optional<std::string> input;
  std::optional<double> werner;
  std::optional<GisinParams> gisin;
  std::optional<double> polarized;
  std::vector<std::size_t> n_list;
  std::vector<double> x_grid;
  Strategy strategy = Strategy::Xor;
  std::size_t restarts = 64;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  Format format = Format::Csv;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

/// "min:max:steps" (steps evenly spaced points, ends included), a single
/// value, or a comma-separated list. Throws InvalidArgument.
std::vector<double> parse_grid(const std::string& text);
std::vector<std::size_t> parse_n_list(const std::string& text);
GisinParams parse_gisin(const std::string& text);

/// Parses argv-style arguments (without the program name). Throws
/// InvalidArgument on unknown flags or out-of-range values.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes a parsed command, writing the report to out.
void execute(const RunConfig& cfg, std::ostream& out);

/// Parses, executes and maps failures to exit codes; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixed-point with ten decimals, the scan CSV number format.
std::string format_number(double v);

}  // namespace entangle::cli
