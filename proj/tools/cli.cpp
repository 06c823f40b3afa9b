#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "volent/entropy.hpp"
#include "volent/errors.hpp"
#include "volent/gog.hpp"
#include "volent/graph_io.hpp"
#include "volent/metric_graph.hpp"
#include "volent/optimizer.hpp"
#include "volent/oracle.hpp"
#include "volent/sampling.hpp"
#include "volent/spectral.hpp"

namespace volent::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Report {
  Json body;
  int exit_code = kSuccess;
};

EntropyOptions entropy_options(const RunConfig& config) {
  EntropyOptions options;
  options.root_tolerance = config.tol_root;
  options.residual_tolerance = config.tol_residual;
  return options;
}

Json edge_values(const MetricGraph& g, const std::vector<double>& values) {
  Json out = Json::object();
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) out[g.edge_name(e)] = values[e];
  return out;
}

Json unoriented_values(const MetricGraph& g, const std::vector<double>& values) {
  Json out = Json::object();
  for (std::size_t j = 0; j < g.unoriented_count(); ++j) out[g.unoriented_name(j)] = values[j];
  return out;
}

Json matrix_rows(const MetricGraph& g, const WeightedEdgeMatrix& m) {
  Json rows = Json::array();
  const auto starts = m.base.row_start();
  const auto cols = m.base.columns();
  for (EdgeIndex e = 0; e < m.base.order(); ++e) {
    for (std::size_t k = starts[e]; k < starts[e + 1]; ++k) {
      rows.push_back({g.edge_name(e), g.edge_name(cols[k]), m.values[k]});
    }
  }
  return rows;
}

Json solution_fields(const MetricGraph& g, const EntropySolution& s) {
  return {{"h", s.h},
          {"vector", edge_values(g, s.vector)},
          {"residual", s.residual},
          {"bracket", {s.bracket.lo, s.bracket.hi}},
          {"lambda", s.lambda},
          {"iterations", s.iterations}};
}

Report cmd_validate(const RunConfig& config) {
  const MetricGraph g = graph_from_json(load_document(config.input));
  const HypothesisReport hyp = validate_entropy_hypotheses(g);
  Json terminals = Json::array();
  for (VertexIndex x : hyp.terminal_vertices) terminals.push_back(g.vertex_name(x));
  Json body{{"no_terminal_vertex", hyp.no_terminal_vertex},
            {"terminal_vertices", terminals},
            {"not_a_cycle", hyp.not_a_cycle},
            {"cycle_witness", hyp.cycle_witness},
            {"connected", hyp.connected},
            {"ok", hyp.ok()}};
  if (hyp.no_terminal_vertex) {
    const IrreducibilityReport irr = is_irreducible(g);
    body["irreducible"] = irr.irreducible;
    Json components = Json::array();
    for (const auto& c : irr.components) {
      Json names = Json::array();
      for (EdgeIndex e : c) names.push_back(g.edge_name(e));
      components.push_back(names);
    }
    body["components"] = components;
  }
  return {body, hyp.ok() ? kSuccess : kValidationFailure};
}

Report cmd_volume(const RunConfig& config) {
  const MetricGraph g = graph_from_json(load_document(config.input));
  const Rational vol = volume(g);
  return {{{"volume", to_string(vol)},
           {"volume_value", to_double(vol)},
           {"l_max", to_string(g.l_max())},
           {"l_min", to_string(g.l_min())},
           {"normalized", to_json(normalize(g))}},
          kSuccess};
}

Report cmd_entropy(const RunConfig& config) {
  const MetricGraph g = graph_from_json(load_document(config.input));
  const EntropySolution s = volume_entropy(g, entropy_options(config));
  Json body = solution_fields(g, s);
  body["volume"] = to_string(volume(g));
  body["entropy_volume_product"] = s.h * to_double(volume(g));
  if (config.dump_matrix) body["matrix"] = matrix_rows(g, weighted_matrix(g, s.h));
  return {body, kSuccess};
}

Report cmd_minimize(const RunConfig& config) {
  const MetricGraph g = graph_from_json(load_document(config.input));
  bool needs_reduction = false;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) needs_reduction |= g.valency(x) < 3;
  const MinimalMetricResult r = needs_reduction ? minimize_with_reduction(g) : minimal_metric(g);

  Json z = Json::object();
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    if (r.z[x]) z[g.vertex_name(x)] = *r.z[x];
  }
  Json body{{"h_min", r.h_min},
            {"lengths", unoriented_values(g, r.lengths)},
            {"perron", edge_values(g, r.perron)},
            {"z", z},
            {"canonical",
             r.canonical == Canonicity::unique ? "unique" : "chain-totals-only"}};
  if (r.reduction) {
    Json chains = Json::object();
    const MetricGraph& reduced = r.reduction->graph;
    for (std::size_t j = 0; j < reduced.unoriented_count(); ++j) {
      Json pieces = Json::array();
      for (EdgeIndex e : r.reduction->chains[j]) pieces.push_back(g.edge_name(e));
      chains[reduced.unoriented_name(j)] = pieces;
    }
    body["chains"] = chains;
  }
  int code = kSuccess;
  if (config.samples > 0) {
    const MetricGraph base = needs_reduction ? r.reduction->graph : g;
    const MinimalitySample sample = sample_minimality(base, config.samples, config.seed);
    body["minimality"] = {{"samples", sample.samples},
                          {"seed", config.seed},
                          {"lowest_sampled_h", sample.lowest},
                          {"violations", sample.violations}};
    if (sample.violations > 0) code = kNumericalFailure;
  }
  return {body, code};
}

VertexIndex base_vertex(const MetricGraph& g, const std::string& name) {
  if (name.empty()) return 0;
  auto x = g.find_vertex(name);
  if (!x) throw UsageError("unknown base vertex '" + name + "'");
  return *x;
}

Report cmd_oracle(const RunConfig& config) {
  const MetricGraph g = graph_from_json(load_document(config.input));
  const VertexIndex x0 = base_vertex(g, config.base_vertex);
  const GrowthEstimate est = estimate_entropy(g, x0, config.r_max);
  Json radii = Json::array(), counts = Json::array();
  for (std::size_t i = 0; i < est.radii.size(); ++i) {
    radii.push_back(to_string(est.radii[i]));
    counts.push_back(est.counts[i].str());
  }
  return {{{"base", g.vertex_name(x0)},
           {"r_max", to_string(config.r_max)},
           {"radii", radii},
           {"counts", counts},
           {"h_est", est.h_est},
           {"error_band", est.error_band},
           {"slope_stderr", est.slope_stderr},
           {"apriori_width", est.apriori_width}},
          kSuccess};
}

Json degrees(const GraphOfGroups& gog) {
  Json out = Json::object();
  for (VertexIndex x = 0; x < gog.graph.vertex_count(); ++x) {
    out[gog.graph.vertex_name(x)] = degree(gog, x);
  }
  return out;
}

Report cmd_gog_entropy(const RunConfig& config) {
  const GraphOfGroups gog = gog_from_json(load_document(config.input));
  const EntropySolution s = gog_entropy(gog, entropy_options(config));
  Json body = solution_fields(gog.graph, s);
  body["degrees"] = degrees(gog);
  body["volume"] = to_string(gog_volume(gog));
  if (config.dump_matrix) {
    const auto lengths = gog.graph.oriented_lengths();
    body["matrix"] = matrix_rows(gog.graph, weighted_matrix(multiplicity_adjacency(gog), lengths, s.h));
  }
  return {body, kSuccess};
}

Report cmd_gog_minimize(const RunConfig& config) {
  const GraphOfGroups gog = gog_from_json(load_document(config.input));
  const GogMinimalMetric m = gog_minimal_metric(gog);
  return {{{"h_min", m.h_min},
           {"lengths", unoriented_values(gog.graph, m.lengths)},
           {"degrees", degrees(gog)}},
          kSuccess};
}

Report cmd_cover_check(const RunConfig& config) {
  const CoveringMap cover = covering_from_json(load_document(config.input));
  const CoveringReport check = check_covering(cover);
  Json body{{"valid", check.valid}, {"violation", check.violation}};
  if (check.sheets) body["sheets"] = *check.sheets;
  if (!check.valid) return {body, kValidationFailure};

  bool degrees_ok = true;
  for (const GraphOfGroups* side : {&cover.source, &cover.target}) {
    for (VertexIndex x = 0; x < side->graph.vertex_count(); ++x) degrees_ok &= degree(*side, x) >= 3;
  }
  if (degrees_ok && cover.source.has_lengths) {
    const CoveringInequalityReport ineq = covering_inequality(cover, entropy_options(config));
    Json section{{"lhs", ineq.lhs},
                 {"rhs", ineq.rhs},
                 {"gap", ineq.gap},
                 {"equality", ineq.equality},
                 {"proportional", ineq.proportional},
                 {"lambda_spread", ineq.lambda_spread}};
    if (ineq.lambda) section["lambda"] = *ineq.lambda;
    body["inequality"] = section;
  }
  return {body, kSuccess};
}

Report cmd_reduce(const RunConfig& config) {
  const MetricGraph g = graph_from_json(load_document(config.input));
  const SeriesReduction r = series_reduce(g);
  Json chains = Json::object();
  for (std::size_t j = 0; j < r.graph.unoriented_count(); ++j) {
    Json pieces = Json::array();
    for (EdgeIndex e : r.chains[j]) pieces.push_back(g.edge_name(e));
    chains[r.graph.unoriented_name(j)] = pieces;
  }
  return {{{"graph", to_json(r.graph)}, {"chains", chains}}, kSuccess};
}

std::string scalar_text(const Json& v) {
  if (v.is_number_float()) {
    std::ostringstream out;
    out << std::setprecision(12) << v.get<double>();
    return out.str();
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void render_human(const Json& doc, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      out << pad << key << ":\n";
      render_human(value, out, indent + 2);
    } else if (value.is_array() && !value.empty() && value.front().is_array()) {
      out << pad << key << ":\n";
      for (const Json& row : value) {
        out << pad << " ";
        for (const Json& cell : row) out << ' ' << scalar_text(cell);
        out << '\n';
      }
    } else if (value.is_array()) {
      out << pad << key << ":";
      for (const Json& cell : value) out << ' ' << scalar_text(cell);
      out << '\n';
    } else {
      out << pad << key << ": " << scalar_text(value) << '\n';
    }
  }
}

Report dispatch(const RunConfig& config) {
  const std::string& c = config.subcommand;
  if (c == "validate") return cmd_validate(config);
  if (c == "volume") return cmd_volume(config);
  if (c == "entropy") return cmd_entropy(config);
  if (c == "minimize") return cmd_minimize(config);
  if (c == "oracle") return cmd_oracle(config);
  if (c == "gog-entropy") return cmd_gog_entropy(config);
  if (c == "gog-minimize") return cmd_gog_minimize(config);
  if (c == "cover-check") return cmd_cover_check(config);
  if (c == "reduce") return cmd_reduce(config);
  throw UsageError("unknown subcommand '" + c + "'");
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult result;
  if (!(config.tol_root > 0) || !(config.tol_residual > 0) || config.r_max <= 0) {
    result.exit_code = kUsageError;
    result.error = "tolerances and r_max must be positive";
    return result;
  }
  Report report;
  try {
    report = dispatch(config);
  } catch (const UsageError& e) {
    result.exit_code = kUsageError;
    result.error = e.what();
  } catch (const InvalidGraph& e) {
    result.exit_code = kValidationFailure;
    result.error = e.what();
  } catch (const NumericalFailure& e) {
    result.exit_code = kNumericalFailure;
    result.error = e.what();
  } catch (const InternalConsistencyError& e) {
    result.exit_code = kNumericalFailure;
    result.error = std::string("internal consistency failure: ") + e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = kUsageError;
    result.error = e.what();
  } catch (const std::exception& e) {
    // Unreadable input files land here.
    result.exit_code = kUsageError;
    result.error = e.what();
  }
  Json doc{{"schema_version", kSchemaVersion}, {"command", config.subcommand}};
  if (result.error.empty()) {
    result.exit_code = report.exit_code;
    for (auto& [key, value] : report.body.items()) doc[key] = value;
  } else {
    doc["error"] = result.error;
    doc["exit_status"] = result.exit_code;
  }
  if (config.format == OutputFormat::structured) {
    result.output = canonical_text(doc);
  } else if (result.error.empty()) {
    std::ostringstream out;
    render_human(doc, out, 0);
    result.output = out.str();
  }
  return result;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Volume entropy of metric graphs and graphs of finite groups"};
  app.require_subcommand(1, 1);
  app.fallthrough();  // global flags may follow the subcommand
  RunConfig config;
  std::string format = "human";
  std::string r_max = std::to_string(Defaults::r_max);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check the standing hypotheses and irreducibility"},
      {"volume", "exact volume and normalized lengths"},
      {"entropy", "volume entropy and Perron vector"},
      {"minimize", "entropy-minimizing normalized metric"},
      {"oracle", "exact path counts and growth-rate estimate"},
      {"gog-entropy", "entropy of a graph of finite groups"},
      {"gog-minimize", "minimizing metric of a graph of finite groups"},
      {"cover-check", "verify a covering and the entropy-volume inequality"},
      {"reduce", "eliminate valency-2 vertices"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", config.input, "graph or covering document (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->callback([&config, name = name] { config.subcommand = name; });
  }
  app.add_option("--tol-root", config.tol_root, "absolute bracket width for h")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-residual", config.tol_residual, "fixed-point residual threshold")
      ->check(CLI::PositiveNumber);
  app.add_option("--r-max", r_max, "oracle radius, integer or p/q");
  app.add_option("--base", config.base_vertex, "oracle base vertex (default: first)");
  app.add_option("--samples", config.samples, "random metrics for the minimality check");
  app.add_option("--seed", config.seed, "seed for the minimality check");
  app.add_option("--format", format, "human or structured")
      ->check(CLI::IsMember({"human", "structured"}));
  app.add_flag("--dump-matrix", config.dump_matrix, "include A'(h) entries as 'e f value'");

  try {
    app.parse(argc, argv);
    config.r_max = parse_rational(r_max);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: --r-max: " << e.what() << '\n';
    return kUsageError;
  }
  config.format = format == "structured" ? OutputFormat::structured : OutputFormat::human;

  const RunResult result = run(config);
  std::cout << result.output;
  if (!result.error.empty()) std::cerr << "error: " << result.error << '\n';
  return result.exit_code;
}

}  // namespace volent::cli
