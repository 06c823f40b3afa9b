#include <doctest.h>

#include <cmath>

#include "graphs.hpp"
#include "volent/entropy.hpp"
#include "volent/errors.hpp"
#include "volent/gog.hpp"
#include "volent/optimizer.hpp"
#include "volent/sampling.hpp"

using namespace volent;
using namespace volent::testing;

namespace {

const double kLog2 = std::log(2.0);

std::vector<MetricGraph> golden() {
  return {theta(), complete(4), complete_bipartite(3, 4), dumbbell(), theta(1, 1, 2),
          dumbbell(1, q(1, 2), 3)};
}

}  // namespace

TEST_CASE("make_graph_of_groups validates orders") {
  CHECK_NOTHROW(segment(3, 3));
  CHECK_THROWS_WITH_AS(make_graph_of_groups(make({"x", "y"}, {{"x", "y", 1, "e"}}), {3, 4}, {2}),
                       doctest::Contains("divide"), InvalidGraph);
  CHECK_THROWS_AS(make_graph_of_groups(make({"x", "y"}, {{"x", "y", 1, "e"}}), {0, 4}, {1}),
                  InvalidGraph);
  CHECK_THROWS_AS(make_graph_of_groups(make({"x", "y"}, {{"x", "y", 1, "e"}}), {3}, {1}),
                  InvalidGraph);
}

TEST_CASE("degree and volume") {
  const GraphOfGroups s = segment(3, 4);
  CHECK(degree(s, 0) == 3);
  CHECK(degree(s, 1) == 4);
  CHECK(gog_volume(s) == 1);

  // Loop with vertex group of order 2 and trivial edge group: both
  // orientations leave x, each contributing 2.
  const GraphOfGroups loop = make_graph_of_groups(make({"x"}, {{"x", "x", 1, "l"}}), {2}, {1});
  CHECK(degree(loop, 0) == 4);
  CHECK(gog_volume(loop) == 1);

  const GraphOfGroups halved = make_graph_of_groups(make({"x"}, {{"x", "x", 1, "l"}}), {2}, {2});
  CHECK(degree(halved, 0) == 2);
  CHECK(gog_volume(halved) == q(1, 2));

  GraphOfGroups unmetrized = segment(3, 3);
  unmetrized.has_lengths = false;
  CHECK_THROWS_AS(gog_volume(unmetrized), InvalidGraph);
}

TEST_CASE("multiplicity adjacency") {
  SUBCASE("segment 3,4") {
    const EdgeAdjacency a = multiplicity_adjacency(segment(3, 4));
    // Edge 0 runs x -> y; at y there are 4 continuations, 3 of them new.
    CHECK(a.at(0, 1) == 3);
    CHECK(a.at(1, 0) == 2);
    CHECK(a.at(0, 0) == 0);
    CHECK(a.row_sum(0) == degree(segment(3, 4), 1) - 1);
  }
  SUBCASE("trivial groups give the plain matrix") {
    for (const MetricGraph& g : golden()) {
      const EdgeAdjacency a = multiplicity_adjacency(trivial_groups(g));
      const EdgeAdjacency b = edge_adjacency(g);
      for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        for (EdgeIndex f = 0; f < g.edge_count(); ++f) CHECK(a.at(e, f) == b.at(e, f));
      }
    }
  }
}

TEST_CASE("gog entropy on segments") {
  CHECK(gog_entropy(segment(3, 3)).h == doctest::Approx(kLog2).epsilon(1e-10));
  CHECK(gog_entropy(segment(3, 4)).h == doctest::Approx(0.5 * std::log(6.0)).epsilon(1e-10));
  CHECK(gog_minimal_entropy(segment(3, 3)) == doctest::Approx(kLog2).epsilon(1e-12));
  CHECK(gog_minimal_entropy(segment(3, 4)) == doctest::Approx(0.5 * std::log(6.0)).epsilon(1e-12));
  CHECK(gog_entropy(segment(3, 3, 2)).h == doctest::Approx(kLog2 / 2).epsilon(1e-10));
  CHECK_THROWS_AS(gog_entropy(segment(2, 2)), HypothesisViolation);
}

TEST_CASE("trivial groups reduce to the plain graph") {
  for (const MetricGraph& g : golden()) {
    const GraphOfGroups t = trivial_groups(g);
    CHECK(gog_volume(t) == volume(g));
    for (VertexIndex x = 0; x < g.vertex_count(); ++x) CHECK(degree(t, x) == g.valency(x));
    CHECK(std::abs(gog_entropy(t).h - volume_entropy(g).h) <= 1e-12 * volume_entropy(g).h);
    CHECK(gog_minimal_entropy(t) == doctest::Approx(minimal_entropy(g)).epsilon(1e-14));
    const GogMinimalMetric m = gog_minimal_metric(t);
    const MinimalMetricResult plain = minimal_metric(g);
    for (std::size_t j = 0; j < m.lengths.size(); ++j) {
      CHECK(m.lengths[j] == doctest::Approx(plain.lengths[j]).epsilon(1e-13));
    }
  }
}

TEST_CASE("gog minimal metric is minimal") {
  const GraphOfGroups g = make_graph_of_groups(
      make({"x", "y"}, {{"x", "y", 1, "e"}, {"x", "y", 1, "f"}, {"y", "y", 1, "l"}}), {4, 2},
      {2, 1, 1});
  const GogMinimalMetric m = gog_minimal_metric(g);
  std::vector<Rational> lengths;
  for (double l : m.lengths) lengths.push_back(from_double(l));
  GraphOfGroups at_min = g;
  at_min.graph = with_lengths(g.graph, lengths);
  CHECK(to_double(gog_volume(at_min)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gog_entropy(at_min).h == doctest::Approx(m.h_min).epsilon(1e-9));
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    GraphOfGroups sample = g;
    sample.graph = random_normalized_metric(g.graph, rng);
    const Rational v = gog_volume(sample);
    sample.graph = scale_metric(sample.graph, 1 / v);
    CHECK(gog_entropy(sample).h >= m.h_min - 1e-9);
  }
}

TEST_CASE("covering checks") {
  const MetricGraph x = theta(q(1, 3), q(1, 3), q(1, 3));
  const MetricGraph y = theta_double_cover();
  const CoveringMap cover = theta_double_covering(y, x);
  const CoveringReport ok = check_covering(cover);
  CHECK(ok.valid);
  CHECK(ok.sheets == 2u);

  SUBCASE("edge map must commute with reversal") {
    CoveringMap bad = cover;
    bad.edge_map[1] = bad.edge_map[0];
    const CoveringReport r = check_covering(bad);
    CHECK_FALSE(r.valid);
    CHECK(r.violation.find("reversal") != std::string::npos);
  }
  SUBCASE("endpoints must match") {
    CoveringMap bad = cover;
    std::swap(bad.vertex_map[0], bad.vertex_map[2]);
    CHECK_FALSE(check_covering(bad).valid);
  }
  SUBCASE("local fiber condition") {
    CoveringMap bad = cover;
    // f5 crossing now maps onto e1 as well: e3 loses a preimage at a0.
    const EdgeIndex e1 = *x.find_edge("e1");
    bad.edge_map[8] = e1;
    bad.edge_map[9] = MetricGraph::reversal(e1);
    CHECK_FALSE(check_covering(bad).valid);
  }
  SUBCASE("sheet count with groups") {
    // Unit theta is a 3-sheeted cover of the segment with orders (3,3).
    const GraphOfGroups target = segment(3, 3);
    CoveringMap c{trivial_groups(theta()), target, {0, 1}, std::vector<EdgeIndex>(6, 0)};
    for (std::size_t j = 0; j < 3; ++j) c.edge_map[2 * j + 1] = 1;
    const CoveringReport r = check_covering(c);
    CHECK(r.valid);
    CHECK(r.sheets == 3u);
    const CoveringInequalityReport ineq = covering_inequality(c);
    CHECK(ineq.lhs == doctest::Approx(3 * kLog2).epsilon(1e-9));
    CHECK(ineq.rhs == doctest::Approx(3 * kLog2).epsilon(1e-9));
    CHECK(ineq.equality);

    // Groups too large on the source: the fibers no longer match.
    CoveringMap bad = c;
    bad.source = make_graph_of_groups(theta(), {3, 1}, {1, 1, 1});
    CHECK_FALSE(check_covering(bad).valid);
  }
}

TEST_CASE("covering inequality") {
  const MetricGraph x = theta();
  const MetricGraph y = theta_double_cover();
  const CoveringMap cover = theta_double_covering(y, x);

  SUBCASE("minimal cover metric gives equality") {
    const CoveringInequalityReport r = covering_inequality(cover);
    CHECK(r.sheets == 2);
    CHECK(r.lhs == doctest::Approx(6 * kLog2).epsilon(1e-9));
    CHECK(r.rhs == doctest::Approx(6 * kLog2).epsilon(1e-9));
    CHECK(r.equality);
    CHECK(r.proportional);
    REQUIRE(r.lambda.has_value());
    CHECK(*r.lambda == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("lift of the base minimizer is proportional with ratio 1") {
    const std::vector<Rational> lifted(6, q(1, 3));
    const CoveringInequalityReport r = covering_inequality(cover, lifted);
    CHECK(r.equality);
    CHECK(*r.lambda == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("perturbed metric gives a strict gap") {
    const std::vector<Rational> lengths{q(1, 5), q(1, 6), q(1, 6), q(1, 6), q(1, 6), q(2, 15)};
    const CoveringInequalityReport r = covering_inequality(cover, lengths);
    CHECK(r.gap > 1e-6);
    CHECK(r.lhs > r.rhs);
    CHECK_FALSE(r.equality);
    CHECK_FALSE(r.lambda.has_value());
  }
}
