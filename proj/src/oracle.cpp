#include "volent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "volent/errors.hpp"

namespace volent {

namespace {

struct SweepResult {
  std::vector<BigInt> totals;                    // per radius
  std::vector<std::vector<BigInt>> by_terminal;  // per radius, per edge (optional)
};

// Dynamic program over (terminal edge, exact length sum) on the common integer
// grid of all lengths and radii. A slot s holds the paths whose length sum is
// exactly s; such a path is counted for radius R when s - l(last) < R <= s and
// extended only while s < max R.
SweepResult sweep(const MetricGraph& g, std::span<const EdgeIndex> starts,
                  std::span<const Rational> radii, bool per_edge, const OracleOptions& options) {
  for (const Rational& r : radii) {
    if (r <= 0) throw std::invalid_argument("radius must be positive");
  }
  BigInt denominator = 1;
  for (const Rational& l : g.unoriented_lengths()) {
    denominator = boost::multiprecision::lcm(denominator, boost::multiprecision::denominator(l));
  }
  for (const Rational& r : radii) {
    denominator = boost::multiprecision::lcm(denominator, boost::multiprecision::denominator(r));
  }
  const Rational grid_max_r = *std::max_element(radii.begin(), radii.end()) * denominator;
  const Rational grid_l_max = g.l_max() * denominator;
  const double cells = static_cast<double>(g.edge_count()) * to_double(grid_max_r + grid_l_max);
  if (!(cells <= options.max_cells)) {
    std::ostringstream msg;
    msg << "path-count grid needs " << cells << " cells, above the cap of "
        << options.max_cells;
    throw NumericalFailure(msg.str());
  }

  const std::size_t n = g.edge_count();
  std::vector<long long> len(n);
  for (EdgeIndex e = 0; e < n; ++e) {
    const Rational scaled = g.length(e) * denominator;
    len[e] = static_cast<long long>(boost::multiprecision::numerator(scaled));
  }
  std::vector<long long> grid_r;
  for (const Rational& r : radii) {
    const Rational scaled = r * denominator;
    grid_r.push_back(static_cast<long long>(boost::multiprecision::numerator(scaled)));
  }
  const long long r_top = *std::max_element(grid_r.begin(), grid_r.end());
  const long long l_top = *std::max_element(len.begin(), len.end());

  std::vector<std::vector<EdgeIndex>> successors(n);
  for (EdgeIndex e = 0; e < n; ++e) {
    for (EdgeIndex f : g.outgoing(g.terminus(e))) {
      if (f != MetricGraph::reversal(e)) successors[e].push_back(f);
    }
  }

  const auto window = static_cast<std::size_t>(l_top + 1);
  std::vector<std::vector<BigInt>> slots(window, std::vector<BigInt>(n));
  for (EdgeIndex e : starts) slots[static_cast<std::size_t>(len[e]) % window][e] += 1;

  SweepResult out;
  out.totals.assign(radii.size(), 0);
  if (per_edge) out.by_terminal.assign(radii.size(), std::vector<BigInt>(n));

  for (long long s = 1; s < r_top + l_top; ++s) {
    auto& slot = slots[static_cast<std::size_t>(s) % window];
    for (EdgeIndex e = 0; e < n; ++e) {
      BigInt& count = slot[e];
      if (count == 0) continue;
      for (std::size_t i = 0; i < grid_r.size(); ++i) {
        if (s - len[e] < grid_r[i] && grid_r[i] <= s) {
          out.totals[i] += count;
          if (per_edge) out.by_terminal[i][e] += count;
        }
      }
      if (s < r_top) {
        for (EdgeIndex f : successors[e]) {
          slots[static_cast<std::size_t>(s + len[f]) % window][f] += count;
        }
      }
      count = 0;
    }
  }
  return out;
}

std::vector<EdgeIndex> starts_at(const MetricGraph& g, VertexIndex x0) {
  if (x0 >= g.vertex_count()) throw std::out_of_range("base vertex out of range");
  const auto out = g.outgoing(x0);
  return {out.begin(), out.end()};
}

}  // namespace

PathCount count_paths(const MetricGraph& g, VertexIndex x0, const Rational& r,
                      const OracleOptions& options) {
  require_entropy_hypotheses(g);
  const auto starts = starts_at(g, x0);
  const Rational radii[] = {r};
  SweepResult s = sweep(g, starts, radii, true, options);
  return {r, std::move(s.totals[0]), std::move(s.by_terminal[0])};
}

BigInt count_paths_between(const MetricGraph& g, EdgeIndex first, EdgeIndex last,
                           const Rational& r, const OracleOptions& options) {
  require_entropy_hypotheses(g);
  if (first >= g.edge_count() || last >= g.edge_count()) {
    throw std::out_of_range("edge index out of range");
  }
  const EdgeIndex starts[] = {first};
  const Rational radii[] = {r};
  SweepResult s = sweep(g, starts, radii, true, options);
  return s.by_terminal[0][last];
}

std::vector<BigInt> count_paths_at(const MetricGraph& g, VertexIndex x0,
                                   std::span<const Rational> radii,
                                   const OracleOptions& options) {
  require_entropy_hypotheses(g);
  if (radii.empty()) return {};
  return sweep(g, starts_at(g, x0), radii, false, options).totals;
}

GrowthEstimate estimate_entropy(const MetricGraph& g, VertexIndex x0, const Rational& r_max,
                                const OracleOptions& options) {
  if (options.grid_points < 4) {
    throw std::invalid_argument("degenerate fit: fewer than 4 grid points");
  }
  if (r_max <= g.l_max()) throw std::invalid_argument("r_max must exceed the longest edge");

  // N_r is constant on each interval (k/D, (k+1)/D] of the common-denominator
  // lattice, so every radius is rounded up to the lattice. This samples each
  // step at the same phase and removes the staircase bias from the slope.
  BigInt lattice = 1;
  for (const Rational& l : g.unoriented_lengths()) {
    lattice = boost::multiprecision::lcm(lattice, boost::multiprecision::denominator(l));
  }
  auto snap = [&](const Rational& r) {
    const Rational scaled = r * lattice;
    BigInt up = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
    if (Rational(up) < scaled) up += 1;
    return Rational(up, lattice);
  };

  GrowthEstimate est;
  const Rational start = r_max / 2;
  const auto steps = static_cast<long long>(options.grid_points - 1);
  for (long long i = 0; i <= steps; ++i) {
    est.radii.push_back(snap(start + start * Rational(i, steps)));
  }
  std::vector<Rational> radii = est.radii;
  radii.push_back(est.radii.back() - g.l_max());

  std::vector<BigInt> counts = count_paths_at(g, x0, radii, options);
  const BigInt before = counts.back();
  counts.pop_back();
  est.counts = counts;
  if (est.counts.back() < BigInt(static_cast<long long>(options.min_final_count))) {
    std::ostringstream msg;
    msg << "r_max too small: N at r_max is " << est.counts.back().str() << ", need at least "
        << options.min_final_count;
    throw std::invalid_argument(msg.str());
  }

  const std::size_t m = est.radii.size();
  std::vector<double> xs(m), ys(m);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = to_double(est.radii[i]);
    ys[i] = log_of(est.counts[i]);
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("degenerate fit: radii collapse onto one point");
  est.h_est = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double fit = mean_y + est.h_est * (xs[i] - mean_x);
    sse += (ys[i] - fit) * (ys[i] - fit);
  }
  est.slope_stderr = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
  est.apriori_width = (log_of(est.counts.back()) - log_of(before)) / to_double(est.radii.back());
  est.error_band = est.slope_stderr + est.apriori_width;
  return est;
}

}  // namespace volent
