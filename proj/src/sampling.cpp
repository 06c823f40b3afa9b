#include "volent/sampling.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "volent/entropy.hpp"
#include "volent/optimizer.hpp"

namespace volent {

MetricGraph random_normalized_metric(const MetricGraph& g, Rng& rng) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> draw(g.unoriented_count());
  for (double& d : draw) {
    do {
      d = gamma(rng);
    } while (!(d > 0.0));
  }
  return normalize(with_lengths(g, std::span<const double>(draw)));
}

MetricGraph interpolate_lengths(const MetricGraph& g, std::span<const double> target, double t) {
  if (target.size() != g.unoriented_count()) {
    throw std::invalid_argument("target length vector size mismatch");
  }
  std::vector<double> mixed(target.size());
  for (std::size_t j = 0; j < target.size(); ++j) {
    mixed[j] = (1.0 - t) * g.length_value(2 * j) + t * target[j];
  }
  return normalize(with_lengths(g, std::span<const double>(mixed)));
}

MinimalitySample sample_minimality(const MetricGraph& g, std::size_t samples, std::uint64_t seed,
                                   double tolerance) {
  MinimalitySample out;
  out.samples = samples;
  out.h_min = minimal_entropy(g);
  out.lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(i)};
    Rng rng(seq);
    const double h = volume_entropy(random_normalized_metric(g, rng)).h;
    out.lowest = std::min(out.lowest, h);
    if (h < out.h_min - tolerance) ++out.violations;
  }
  return out;
}

}  // namespace volent
