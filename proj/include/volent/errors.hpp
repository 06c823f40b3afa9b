#pragma once

#include <stdexcept>
#include <string>

namespace volent {

/// Input graph or document is unusable: bad lengths, dangling references,
/// disconnected graphs, violated structural hypotheses.
class InvalidGraph : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The graph is well formed but fails the hypotheses an operation needs
/// (terminal vertices, a single cycle, a valency below three, ...).
class HypothesisViolation : public InvalidGraph {
 public:
  using InvalidGraph::InvalidGraph;
};

/// Iterative numerics did not reach the requested tolerance, or an exact
/// computation exceeded its configured budget.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent routes to the same fact disagreed. Indicates a bug.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace volent
