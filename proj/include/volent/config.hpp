#pragma once

#include <cstddef>
#include <cstdint>

#include "volent/rational.hpp"

namespace volent {

/// Power iteration controls for the Perron root.
struct PowerIterationOptions {
  double rayleigh_tolerance = 1e-14;  // relative change between estimates
  double residual_tolerance = 1e-12;  // max-norm residual, max-normalized vector
  std::size_t max_iterations = 1'000'000;
  // Plain iterations allowed before switching to M + I.
  std::size_t plain_budget = 1000;
};

struct EntropyOptions {
  double root_tolerance = 1e-12;      // absolute width of the final h bracket
  double residual_tolerance = 1e-9;   // fixed-point residual on the returned vector
  PowerIterationOptions power;
};

struct OracleOptions {
  std::size_t grid_points = 12;           // fit points spread over [r_max/2, r_max]
  double max_cells = 1e9;                 // DP cells (edges x integer grid span)
  double min_final_count = 1e3;           // N at r_max must reach this
};

/// Defaults exposed to the command line.
struct Defaults {
  static constexpr double root_tolerance = 1e-12;
  static constexpr double residual_tolerance = 1e-9;
  static constexpr int r_max = 30;
  static constexpr std::size_t samples = 200;
  static constexpr std::uint64_t seed = 0;
};

}  // namespace volent
