#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "netident/identifiability.hpp"
#include "netident/oracle.hpp"
#include "netident/report.hpp"
#include "netident/simulation.hpp"

namespace netident::cli {
namespace {

enum class Format { Human, Json };

struct RunConfig {
  std::string command;
  std::string input;
  std::uint64_t seed = 42;
  int trials = GenericRankOracle::kDefaultTrials;
  int order = 3;
  int samples = 4000;
  Format format = Format::Human;
  bool explain = false;
  SearchMode mode = SearchMode::Exact;
  std::string node;
  std::string to;
  std::string dump;
};

constexpr double kRecoveryTolerance = 1e-6;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Format default_format() {
  const char* env = std::getenv(kFormatEnv);
  if (env && std::string(env) == "json") return Format::Json;
  return Format::Human;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& c, const Network& g, std::ostream& out) {
  IdentifiabilityReport r = full_report(g);
  if (c.format == Format::Json)
    emit(out, to_json(g, r, c.explain));
  else
    out << render(g, r, c.explain);
  return r.fully_identifiable ? kIdentifiable : kNotIdentifiable;
}

int cmd_node(const RunConfig& c, const Network& g, std::ostream& out) {
  NodeVerdict v = check_node(g, g.index_of(c.node));
  if (c.format == Format::Json)
    emit(out, to_json(g, v, c.explain));
  else
    out << render(g, v, c.explain) << "\n";
  return v.ok() ? kIdentifiable : kNotIdentifiable;
}

int cmd_edge(const RunConfig& c, const Network& g, std::ostream& out) {
  NodeIndex from = g.index_of(c.node);
  NodeIndex to = g.index_of(c.to);
  EdgeVerdict v = check_edge(g, from, to);
  bool by_oracle = v.status == EdgeStatus::Unknown;
  if (by_oracle) {
    bool ok = generic_edge_identifiable(g, from, to, c.trials, c.seed);
    v.status = ok ? EdgeStatus::Identifiable : EdgeStatus::NotIdentifiableColumn;
    v.bases = {EdgeBasis::Oracle};
  }
  if (c.format == Format::Json) {
    Json j = to_json(g, v);
    if (by_oracle) {
      j["trials"] = c.trials;
      j["seed"] = c.seed;
    }
    emit(out, j);
  } else {
    out << render(g, v) << "\n";
  }
  return v.status == EdgeStatus::Identifiable ? kIdentifiable
                                              : kNotIdentifiable;
}

int cmd_cover(const RunConfig& c, const Network& g, std::ostream& out) {
  NodeIndex j = g.index_of(c.node);
  if (!g.is_measured(j))
    throw InputError("node " + c.node + " is not measured");
  std::vector<Edge> edges = measured_cover(g, j);
  if (c.format == Format::Json) {
    Json a = Json::array();
    for (const Edge& e : edges) {
      Json je;
      je["from"] = g.label(e.from);
      je["to"] = g.label(e.to);
      a.push_back(std::move(je));
    }
    Json res;
    res["node"] = c.node;
    res["edges"] = std::move(a);
    emit(out, res);
  } else {
    out << "edges identified by measuring " << c.node << ":";
    if (edges.empty()) out << " none";
    for (const Edge& e : edges) out << " " << g.format_edge(e);
    out << "\n";
  }
  return kIdentifiable;
}

int cmd_minmeasure(const RunConfig& c, const Network& g, std::ostream& out) {
  if (c.mode == SearchMode::Exact && g.size() > kExactSearchMaxNodes)
    throw InputError("exact search is limited to " +
                     std::to_string(kExactSearchMaxNodes) +
                     " nodes; use --mode greedy");
  NodeSet set = min_measurement_set(g, c.mode);
  if (c.format == Format::Json) {
    Json res;
    res["mode"] = c.mode == SearchMode::Exact ? "exact" : "greedy";
    res["size"] = set.size();
    res["measured"] = to_json(g, set);
    emit(out, res);
  } else {
    out << (c.mode == SearchMode::Exact ? "minimum" : "greedy")
        << " measurement set (" << set.size() << "): " << g.format_set(set)
        << "\n";
  }
  return kIdentifiable;
}

int cmd_verify(const RunConfig& c, const Network& g, std::ostream& out) {
  GenericRankOracle oracle(g, c.trials, c.seed);
  bool all_agree = true;
  Json nodes = Json::array();
  Json edges = Json::array();
  std::ostringstream text;

  text << "node  paths    real  prime  agree\n";
  for (NodeIndex i = 0; i < g.size(); ++i) {
    bool paths = check_node(g, i).ok();
    auto fv = oracle.column_verdicts(i);
    bool agree = paths == fv.real && paths == fv.prime;
    all_agree = all_agree && agree;
    Json jn;
    jn["node"] = g.label(i);
    jn["paths"] = paths;
    jn["real"] = fv.real;
    jn["prime"] = fv.prime;
    jn["agree"] = agree;
    nodes.push_back(std::move(jn));
    text << std::left << std::setw(6) << g.label(i) << std::setw(9)
         << (paths ? "yes" : "no") << std::setw(6) << (fv.real ? "yes" : "no")
         << std::setw(7) << (fv.prime ? "yes" : "no") << (agree ? "yes" : "NO")
         << "\n";
  }

  text << "\nedge      graph                     oracle  agree\n";
  for (const Edge& e : g.edges()) {
    EdgeVerdict v = check_edge(g, e.from, e.to);
    bool generic = oracle.edge_identifiable(e.from, e.to);
    bool agree = v.status != EdgeStatus::Identifiable || generic;
    all_agree = all_agree && agree;
    Json je;
    je["from"] = g.label(e.from);
    je["to"] = g.label(e.to);
    je["graph"] = to_string(v.status);
    je["oracle"] = generic;
    je["agree"] = agree;
    edges.push_back(std::move(je));
    text << std::left << std::setw(10) << g.format_edge(e) << std::setw(26)
         << to_string(v.status) << std::setw(8) << (generic ? "yes" : "no")
         << (agree ? "yes" : "NO") << "\n";
  }
  text << "\n" << (all_agree ? "all agree" : "DISAGREEMENT") << "\n";

  if (c.format == Format::Json) {
    Json res;
    res["trials"] = c.trials;
    res["seed"] = c.seed;
    res["nodes"] = std::move(nodes);
    res["edges"] = std::move(edges);
    res["allAgree"] = all_agree;
    emit(out, res);
  } else {
    out << text.str();
  }
  return all_agree ? kIdentifiable : kDisagreement;
}

void dump_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << std::setprecision(17);
  for (Eigen::Index t = 0; t < m.cols(); ++t) {
    for (Eigen::Index k = 0; k < m.rows(); ++k)
      f << (k ? " " : "") << m(k, t);
    f << "\n";
  }
}

Json taps_json(const std::vector<double>& taps) {
  Json a = Json::array();
  for (double v : taps) a.push_back(v);
  return a;
}

int cmd_simulate(const RunConfig& c, const Network& g, std::ostream& out) {
  ExperimentOptions opt;
  opt.seed = c.seed;
  opt.order = c.order;
  opt.samples = c.samples;
  if (c.order < 1) throw InputError("--order must be at least 1");
  ExperimentReport rep = run_experiment(g, opt);
  GenericRankOracle oracle(g, c.trials, c.seed);

  bool all_ok = true;
  Json edges = Json::array();
  std::ostringstream text;
  text << std::setprecision(6);
  text << "FIR length " << rep.fir_length << ", samples " << c.samples
       << ", order " << c.order << ", seed " << c.seed << "\n";
  for (std::size_t k = 0; k < rep.estimation_residuals.size(); ++k)
    text << "residual row " << g.label(g.measured()[k]) << ": "
         << rep.estimation_residuals[k] << "\n";
  text << "\n";

  for (const EdgeOutcome& o : rep.edges) {
    EdgeVerdict v = check_edge(g, o.edge.from, o.edge.to);
    bool generic = oracle.edge_identifiable(o.edge.from, o.edge.to);
    bool flags_agree = o.unique == generic;
    bool accurate = !o.unique || o.relative_error <= kRecoveryTolerance;
    bool graph_ok = v.status != EdgeStatus::Identifiable || o.unique;
    bool ok = flags_agree && accurate && graph_ok;
    all_ok = all_ok && ok;

    Json je;
    je["from"] = g.label(o.edge.from);
    je["to"] = g.label(o.edge.to);
    je["graph"] = to_string(v.status);
    je["oracle"] = generic;
    je["unique"] = o.unique;
    je["truth"] = taps_json(o.truth);
    if (o.estimate) {
      je["estimate"] = taps_json(*o.estimate);
      je["relativeError"] = o.relative_error;
    }
    je["ok"] = ok;
    edges.push_back(std::move(je));

    text << g.format_edge(o.edge) << "  " << to_string(v.status) << ", oracle "
         << (generic ? "yes" : "no") << ", "
         << (o.unique ? "unique" : "non-unique");
    if (o.estimate) text << ", relative error " << o.relative_error;
    text << (ok ? "" : "  FAIL") << "\n    true";
    for (double t : o.truth) text << " " << t;
    if (o.estimate) {
      text << "\n    est ";
      for (double t : *o.estimate) text << " " << t;
    }
    text << "\n";
  }
  text << "\n" << (all_ok ? "recovery consistent" : "recovery INCONSISTENT")
       << "\n";

  if (!c.dump.empty()) {
    dump_matrix(c.dump + "_r.txt", rep.excitation);
    dump_matrix(c.dump + "_w.txt", rep.signals.w);
    dump_matrix(c.dump + "_y.txt", rep.signals.y);
  }

  if (c.format == Format::Json) {
    Json res;
    res["seed"] = c.seed;
    res["order"] = c.order;
    res["samples"] = c.samples;
    res["firLength"] = rep.fir_length;
    res["estimationResiduals"] = rep.estimation_residuals;
    Json cols = Json::object();
    for (NodeIndex i = 0; i < g.size(); ++i)
      cols[g.label(i)] = rep.column_residuals[static_cast<std::size_t>(i)];
    res["columnResiduals"] = std::move(cols);
    res["edges"] = std::move(edges);
    res["consistent"] = all_ok;
    emit(out, res);
  } else {
    out << text.str();
  }
  return all_ok ? kIdentifiable : kDisagreement;
}

int dispatch(const RunConfig& c, std::ostream& out) {
  Network g = load_network(c.input);
  if (c.command == "analyze") return cmd_analyze(c, g, out);
  if (c.command == "node") return cmd_node(c, g, out);
  if (c.command == "edge") return cmd_edge(c, g, out);
  if (c.command == "cover") return cmd_cover(c, g, out);
  if (c.command == "minmeasure") return cmd_minmeasure(c, g, out);
  if (c.command == "verify") return cmd_verify(c, g, out);
  if (c.command == "simulate") return cmd_simulate(c, g, out);
  out << to_dot(g);
  return kIdentifiable;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig c;
  c.format = default_format();

  CLI::App app{"Edge identifiability of linear dynamical networks"};
  app.name("netident");
  app.require_subcommand(1);
  std::map<std::string, Format> formats{{"human", Format::Human},
                                        {"json", Format::Json}};
  std::map<std::string, SearchMode> modes{{"exact", SearchMode::Exact},
                                          {"greedy", SearchMode::Greedy}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", c.input, "network document (JSON)")->required();
    sub->add_option("--format", c.format, "human or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };
  auto add_oracle = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_option("--trials", c.trials, "oracle trials per field")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  auto* analyze = app.add_subcommand("analyze", "full identifiability report");
  add_common(analyze);
  analyze->add_flag("--explain", c.explain, "include path certificates");

  auto* node = app.add_subcommand("node", "column test for one node");
  add_common(node);
  node->add_option("node", c.node, "node label")->required();
  node->add_flag("--explain", c.explain, "include path certificates");

  auto* edge = app.add_subcommand(
      "edge", "one edge; graph tests first, then the oracle");
  add_common(edge);
  edge->add_option("from", c.node, "tail label")->required();
  edge->add_option("to", c.to, "head label")->required();
  add_oracle(edge);

  auto* cover = app.add_subcommand(
      "cover", "edges identified by unique walks into a measured node");
  add_common(cover);
  cover->add_option("node", c.node, "measured node label")->required();

  auto* minm = app.add_subcommand("minmeasure", "smallest measurement set");
  add_common(minm);
  minm->add_option("--mode", c.mode, "exact or greedy")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));

  auto* verify = app.add_subcommand(
      "verify", "compare graph verdicts with the generic-rank oracle");
  add_common(verify);
  add_oracle(verify);

  auto* sim = app.add_subcommand(
      "simulate", "simulate, estimate and recover the network");
  add_common(sim);
  add_oracle(sim);
  sim->add_option("--order", c.order, "FIR order of every edge")
      ->capture_default_str();
  sim->add_option("--samples", c.samples, "samples per signal")
      ->capture_default_str();
  sim->add_option("--dump", c.dump,
                  "write PREFIX_r.txt, PREFIX_w.txt, PREFIX_y.txt");

  auto* dot = app.add_subcommand("dot", "Graphviz rendering");
  add_common(dot);

  std::vector<std::string> argv_store{"netident"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(c, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const OracleInconsistency& e) {
    err << "oracle: " << e.what() << "\n";
    return kDisagreement;
  } catch (const SimulationError& e) {
    err << "simulation: " << e.what() << "\n";
    return kDisagreement;
  } catch (const EstimationError& e) {
    err << "estimation: " << e.what() << "\n";
    return kDisagreement;
  }
}

}  // namespace netident::cli
