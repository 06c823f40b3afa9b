#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "volent/config.hpp"
#include "volent/rational.hpp"

namespace volent::cli {

enum class OutputFormat { human, structured };

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kNumericalFailure = 2,
  kUsageError = 3,
};

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string subcommand;  // validate volume entropy minimize oracle gog-entropy
                           // gog-minimize cover-check reduce
  std::string input;
  double tol_root = Defaults::root_tolerance;
  double tol_residual = Defaults::residual_tolerance;
  Rational r_max = Defaults::r_max;
  std::string base_vertex;  // oracle; empty selects the first vertex
  std::size_t samples = Defaults::samples;
  std::uint64_t seed = Defaults::seed;
  OutputFormat format = OutputFormat::human;
  bool dump_matrix = false;
};

struct RunResult {
  int exit_code = kSuccess;
  std::string output;  // report or structured document
  std::string error;   // diagnostics for stderr
};

/// Executes one subcommand. Never throws; failures map to exit codes.
RunResult run(const RunConfig& config);

/// Parses argv into a RunConfig and runs it. Writes to stdout/stderr.
int main_entry(int argc, char** argv);

}  // namespace volent::cli
