#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ptscat {

// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIdentityFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Environment variable overriding the default identity tolerance.
inline constexpr const char* kTolEnvVar = "PTSCAT_TOL";

enum class Command { sweep, verify, scan };
enum class BackendChoice { automatic, stack, ode, both };
enum class OutputFormat { csv, json };

struct RunConfig {
  Command command = Command::verify;
  std::string potential_path;
  std::string builtin;
  std::vector<std::pair<std::string, double>> builtin_params;
  double k_min = 0.0;
  double k_max = 0.0;
  std::size_t k_count = 1;
  BackendChoice backend = BackendChoice::automatic;
  double tol = 1e-8;
  double ode_tol = 1e-11;
  std::optional<double> grid_step;  ///< scan only; defaults to the k-range spacing
  OutputFormat format = OutputFormat::csv;
  std::string out_path;  ///< empty for standard output
};

/// Parses argv, dispatches the subcommand, writes tables to `out` (or --out) and diagnostics to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptscat
