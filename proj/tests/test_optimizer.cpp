#include <doctest.h>

#include <cmath>
#include <numeric>

#include "graphs.hpp"
#include "volent/entropy.hpp"
#include "volent/errors.hpp"
#include "volent/optimizer.hpp"
#include "volent/sampling.hpp"

using namespace volent;
using namespace volent::testing;

namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);

MetricGraph with_minimal(const MetricGraph& g, const MinimalMetricResult& m) {
  return with_lengths(g, m.lengths);
}

// Independent evaluation of (1/2) sum_x (k_x + 1) log k_x from an edge list.
double h_min_from_edges(const MetricGraph& g) {
  std::vector<int> valency(g.vertex_count(), 0);
  for (std::size_t j = 0; j < g.unoriented_count(); ++j) {
    ++valency[g.origin(2 * j)];
    ++valency[g.terminus(2 * j)];
  }
  double s = 0.0;
  for (int v : valency) s += v * std::log(v - 1.0);
  return s / 2;
}

}  // namespace

TEST_CASE("minimal_metric golden graphs") {
  SUBCASE("theta") {
    const MinimalMetricResult m = minimal_metric(theta());
    CHECK(m.h_min == doctest::Approx(3 * kLog2).epsilon(1e-12));
    for (double l : m.lengths) CHECK(l == doctest::Approx(1.0 / 3).epsilon(1e-14));
    for (double x : m.perron) CHECK(x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.canonical == Canonicity::unique);
  }
  SUBCASE("K4") {
    const MinimalMetricResult m = minimal_metric(complete(4));
    CHECK(m.h_min == doctest::Approx(6 * kLog2).epsilon(1e-12));
    for (double l : m.lengths) CHECK(l == doctest::Approx(1.0 / 6).epsilon(1e-14));
  }
  SUBCASE("K_{3,4}") {
    const MinimalMetricResult m = minimal_metric(complete_bipartite(3, 4));
    CHECK(m.h_min == doctest::Approx(6 * std::log(6.0)).epsilon(1e-12));
    for (double l : m.lengths) CHECK(l == doctest::Approx(1.0 / 12).epsilon(1e-14));
  }
  SUBCASE("dumbbell") {
    const MinimalMetricResult m = minimal_metric(dumbbell());
    CHECK(m.h_min == doctest::Approx(3 * kLog2).epsilon(1e-12));
    for (double l : m.lengths) CHECK(l == doctest::Approx(1.0 / 3).epsilon(1e-14));
  }
  SUBCASE("K5") {
    CHECK(minimal_entropy(complete(5)) == doctest::Approx(10 * kLog3).epsilon(1e-12));
  }
  SUBCASE("valency below three") {
    CHECK_THROWS_AS(minimal_metric(subdivided_theta(1, 1, 1, 1)), HypothesisViolation);
    CHECK_THROWS_AS(minimal_entropy(cycle(3)), HypothesisViolation);
  }
}

TEST_CASE("minimal metric consistency on irregular graphs") {
  // Mixed valencies: vertex a has valency 4, b and c valency 3.
  const MetricGraph mixed = make({"a", "b", "c"}, {{"a", "b", 1},
                                                   {"a", "b", 1},
                                                   {"a", "c", 1},
                                                   {"a", "c", 1},
                                                   {"b", "c", 1}});
  const MetricGraph petersen_like = make({"a", "b", "c", "d"}, {{"a", "a", 1},
                                                                {"a", "b", 1},
                                                                {"b", "c", 1},
                                                                {"b", "d", 1},
                                                                {"c", "d", 1},
                                                                {"c", "d", 1},
                                                                {"d", "c", 1}});
  for (const MetricGraph& g : {mixed, petersen_like, complete(5), complete_bipartite(3, 4),
                               complete_bipartite(3, 5), dumbbell()}) {
    const MinimalMetricResult m = minimal_metric(g);
    CHECK(m.h_min == doctest::Approx(h_min_from_edges(g)).epsilon(1e-12));
    CHECK(std::accumulate(m.lengths.begin(), m.lengths.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const MetricGraph at_min = with_minimal(g, m);
    const EntropySolution s = volume_entropy(at_min);
    CHECK(s.h == doctest::Approx(m.h_min).epsilon(1e-9));
    CHECK(verify_fixed_point(at_min, m.h_min, m.perron).max <= 1e-9);

    // y_f = exp(-h l(f)) x_f depends only on i(f).
    for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
      double lo = INFINITY, hi = 0.0;
      for (EdgeIndex f : g.outgoing(x)) {
        const double y = std::exp(-m.h_min * m.lengths[f / 2]) * m.perron[f];
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
      CHECK((hi - lo) / hi <= 1e-8);
    }
    // exp(h l(e)) z_{i(e)} = k_{t(e)} z_{t(e)}.
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      const double lhs = std::exp(m.h_min * m.lengths[e / 2]) * *m.z[g.origin(e)];
      const double rhs = static_cast<double>(g.k(g.terminus(e))) * *m.z[g.terminus(e)];
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
    // The solver's own Perron vector matches the closed form up to scale.
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      CHECK(s.vector[e] == doctest::Approx(m.perron[e]).epsilon(1e-7));
    }
  }
}

TEST_CASE("minimality against random normalized metrics") {
  for (const MetricGraph& g : {theta(), complete(4), dumbbell(), complete_bipartite(3, 4)}) {
    const MinimalitySample s = sample_minimality(g, 40, 11);
    CHECK(s.samples == 40);
    CHECK(s.violations == 0);
    CHECK(s.lowest >= s.h_min - 1e-9);
  }
}

TEST_CASE("minimize_with_reduction") {
  SUBCASE("subdivided theta splits the chain evenly") {
    const MetricGraph g = subdivided_theta(1, 1, 1, 1);
    const MinimalMetricResult m = minimize_with_reduction(g);
    CHECK(m.canonical == Canonicity::chain_totals_only);
    CHECK(m.h_min == doctest::Approx(3 * kLog2).epsilon(1e-12));
    CHECK(m.lengths[0] == doctest::Approx(1.0 / 3));
    CHECK(m.lengths[1] == doctest::Approx(1.0 / 3));
    CHECK(m.lengths[2] == doctest::Approx(1.0 / 6));
    CHECK(m.lengths[3] == doctest::Approx(1.0 / 6));
    REQUIRE(m.reduction.has_value());
    CHECK_FALSE(m.z[2].has_value());
    CHECK(m.z[0].has_value());

    const MetricGraph at_min = with_minimal(g, m);
    CHECK(volume_entropy(at_min).h == doctest::Approx(m.h_min).epsilon(1e-9));
    CHECK(verify_fixed_point(at_min, m.h_min, m.perron).max <= 1e-9);
  }
  SUBCASE("dumbbell with a cut bridge") {
    const MetricGraph g = dumbbell_subdivided({1, 1, 1});
    const MinimalMetricResult m = minimize_with_reduction(g);
    CHECK(m.h_min == doctest::Approx(3 * kLog2).epsilon(1e-12));
    const MetricGraph at_min = with_minimal(g, m);
    CHECK(verify_fixed_point(at_min, m.h_min, m.perron).max <= 1e-9);
    CHECK(to_double(volume(at_min)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("trivalent graph matches minimal_metric") {
    const MinimalMetricResult a = minimize_with_reduction(complete(4));
    const MinimalMetricResult b = minimal_metric(complete(4));
    CHECK(a.canonical == Canonicity::unique);
    CHECK(a.h_min == b.h_min);
    for (std::size_t j = 0; j < a.lengths.size(); ++j) CHECK(a.lengths[j] == b.lengths[j]);
  }
  SUBCASE("cycle") { CHECK_THROWS_AS(minimize_with_reduction(cycle(4)), HypothesisViolation); }
}

TEST_CASE("biregular_minimum") {
  const BiregularMinimum t = biregular_minimum(2, 2, 6);
  CHECK(t.h == doctest::Approx(3 * kLog2).epsilon(1e-12));
  CHECK(t.length == q(1, 3));
  const BiregularMinimum k34 = biregular_minimum(2, 3, 24);
  CHECK(k34.h == doctest::Approx(6 * std::log(6.0)).epsilon(1e-12));
  CHECK(k34.length == q(1, 12));
  const BiregularMinimum k5 = biregular_minimum(3, 3, 20);
  CHECK(k5.h == doctest::Approx(minimal_entropy(complete(5))).epsilon(1e-12));
  CHECK(k5.h == doctest::Approx(10 * kLog3).epsilon(1e-12));
  CHECK(k5.length == q(1, 10));
  CHECK(biregular_minimum(2, 3, 24).h ==
        doctest::Approx(minimal_entropy(complete_bipartite(3, 4))).epsilon(1e-12));
  CHECK_THROWS_AS(biregular_minimum(1, 2, 6), std::invalid_argument);
  CHECK_THROWS_AS(biregular_minimum(2, 2, 7), std::invalid_argument);
  CHECK_THROWS_AS(biregular_minimum(2, 2, 0), std::invalid_argument);
}

TEST_CASE("split_vertex") {
  const MetricGraph k5 = complete(5);
  const auto out = k5.outgoing(0);
  const MetricGraph split = split_vertex(k5, 0, {{out[0], out[1]}, {out[2], out[3]}});
  CHECK(split.vertex_count() == 6);
  CHECK(split.unoriented_count() == 11);
  CHECK(free_rank(split) == free_rank(k5));
  CHECK(split.valency(0) == 3);
  CHECK(split.valency(*split.find_vertex("v0'")) == 3);
  CHECK(split.find_unoriented("split_v0").has_value());
  CHECK(minimal_entropy(split) == doctest::Approx(8 * kLog3 + 3 * kLog2).epsilon(1e-12));
  CHECK(minimal_entropy(split) < minimal_entropy(k5));

  SUBCASE("loops may be moved whole or in part") {
    const MetricGraph g = make({"a", "b"}, {{"a", "a", 1, "l"}, {"a", "b", 1}, {"a", "b", 1}});
    const auto o = g.outgoing(0);
    REQUIRE(o.size() == 4);
    const MetricGraph whole = split_vertex(g, 0, {{o[2], o[3]}, {o[0], o[1]}});
    CHECK(free_rank(whole) == free_rank(g));
    CHECK(validate_entropy_hypotheses(whole).ok());
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(split_vertex(complete(4), 0, {{0}, {2}}), doctest::Contains("< 4"),
                         HypothesisViolation);
    CHECK_THROWS_AS(split_vertex(k5, 0, {{out[0]}, {out[1], out[2], out[3]}}),
                    HypothesisViolation);
    CHECK_THROWS_AS(split_vertex(k5, 0, {{out[0], out[1]}, {out[2], out[2]}}),
                    HypothesisViolation);
  }
}

TEST_CASE("trivalent resolution reaches the free-rank minimum") {
  const std::vector<MetricGraph> steps = trivalent_resolution(complete(5));
  CHECK(free_rank(steps.front()) == 6);
  REQUIRE(steps.size() == 6);
  for (std::size_t i = 1; i < steps.size(); ++i) {
    CHECK(free_rank(steps[i]) == 6);
    CHECK(minimal_entropy(steps[i]) < minimal_entropy(steps[i - 1]));
  }
  for (VertexIndex x = 0; x < steps.back().vertex_count(); ++x) CHECK(steps.back().valency(x) == 3);
  CHECK(minimal_entropy(steps.back()) == doctest::Approx(15 * kLog2).epsilon(1e-12));
  CHECK(min_entropy_free_rank(6) == doctest::Approx(15 * kLog2).epsilon(1e-12));
}

TEST_CASE("min_entropy_free_rank") {
  CHECK(min_entropy_free_rank(2) == doctest::Approx(3 * kLog2));
  CHECK(min_entropy_free_rank(2) == doctest::Approx(minimal_entropy(theta())));
  CHECK(min_entropy_free_rank(2) == doctest::Approx(minimal_entropy(dumbbell())));
  CHECK(min_entropy_free_rank(3) == doctest::Approx(6 * kLog2));
  CHECK(min_entropy_free_rank(3) == doctest::Approx(minimal_entropy(complete(4))));
  CHECK_THROWS_AS(min_entropy_free_rank(1), std::invalid_argument);
  CHECK(free_rank(theta()) == 2);
  CHECK(free_rank(complete(4)) == 3);
}
