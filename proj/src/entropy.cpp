#include "volent/entropy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "volent/errors.hpp"

namespace volent {

namespace {

class PerronRoot {
 public:
  PerronRoot(const EdgeAdjacency& pattern, std::span<const double> lengths,
             const PowerIterationOptions& options)
      : pattern_(pattern), lengths_(lengths), options_(options) {}

  PerronResult operator()(double h) {
    PerronResult r = spectral_radius(weighted_matrix(pattern_, lengths_, h), options_);
    iterations += r.iterations;
    ++evaluations;
    return r;
  }

  std::size_t iterations = 0;
  std::size_t evaluations = 0;

 private:
  const EdgeAdjacency& pattern_;
  std::span<const double> lengths_;
  PowerIterationOptions options_;
};

}  // namespace

EntropySolution solve_entropy(const EdgeAdjacency& pattern, std::span<const double> lengths,
                              const EntropyOptions& options) {
  PerronRoot lambda(pattern, lengths, options.power);

  Bracket bracket{0.0, 1.0};
  if (!(lambda(0.0).radius > 1.0)) {
    throw NumericalFailure("Perron root at h = 0 does not exceed 1; cannot bracket");
  }
  while (!(lambda(bracket.hi).radius < 1.0)) {
    bracket.lo = bracket.hi;
    bracket.hi *= 2.0;
    if (bracket.hi > 1e300) throw NumericalFailure("failed to bracket the entropy");
  }

  double h = 0.0;
  while (true) {
    h = 0.5 * (bracket.lo + bracket.hi);
    if (bracket.hi - bracket.lo < options.root_tolerance) break;
    const double r = lambda(h).radius;
    if (r > 1.0) {
      bracket.lo = h;
    } else if (r < 1.0) {
      bracket.hi = h;
    } else {
      break;
    }
    if (h == bracket.lo && h == bracket.hi) break;
  }

  const PerronResult at_root = lambda(h);
  EntropySolution solution;
  solution.h = h;
  solution.lambda = at_root.radius;
  solution.vector = at_root.vector;
  solution.bracket = bracket;
  solution.residual = verify_fixed_point(pattern, lengths, h, solution.vector).max;
  solution.iterations = lambda.iterations;
  solution.evaluations = lambda.evaluations;
  if (solution.residual > options.residual_tolerance) {
    std::ostringstream msg;
    msg << "fixed-point residual " << solution.residual << " exceeds tolerance "
        << options.residual_tolerance;
    throw NumericalFailure(msg.str());
  }
  return solution;
}

EntropySolution volume_entropy(const MetricGraph& g, const EntropyOptions& options) {
  require_entropy_hypotheses(g);
  if (!is_irreducible(g).irreducible) {
    throw HypothesisViolation("edge adjacency matrix is reducible");
  }
  const std::vector<double> lengths = g.oriented_lengths();
  return solve_entropy(edge_adjacency(g), lengths, options);
}

ResidualReport verify_fixed_point(const EdgeAdjacency& pattern, std::span<const double> lengths,
                                  double h, std::span<const double> x) {
  if (x.size() != pattern.order() || lengths.size() != pattern.order()) {
    throw std::invalid_argument("vector size does not match the edge count");
  }
  ResidualReport report;
  double total = 0.0;
  for (EdgeIndex e = 0; e < pattern.order(); ++e) {
    const auto cols = pattern.row(e);
    const auto mult = pattern.row_multiplicity(e);
    double sum = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      sum += static_cast<double>(mult[k]) * std::exp(-h * lengths[cols[k]]) * x[cols[k]];
    }
    const double r = std::abs(x[e] - sum);
    total += r;
    if (r > report.max) {
      report.max = r;
      report.worst_edge = e;
    }
  }
  report.mean = pattern.order() ? total / static_cast<double>(pattern.order()) : 0.0;
  return report;
}

ResidualReport verify_fixed_point(const MetricGraph& g, double h, std::span<const double> x) {
  const std::vector<double> lengths = g.oriented_lengths();
  return verify_fixed_point(edge_adjacency(g), lengths, h, x);
}

double entropy_volume_product(const MetricGraph& g, const EntropyOptions& options) {
  return volume_entropy(g, options).h * to_double(volume(g));
}

}  // namespace volent
