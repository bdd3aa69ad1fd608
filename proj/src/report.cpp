#include "netident/report.hpp"

#include <sstream>

namespace netident {

Json to_json(const Network& g, const NodeSet& nodes) {
  Json a = Json::array();
  for (NodeIndex v : nodes) a.push_back(g.label(v));
  return a;
}

Json to_json(const Network& g, const PathCertificate& cert) {
  Json a = Json::array();
  for (const NodeSet& p : cert.paths) a.push_back(to_json(g, p));
  return a;
}

Json to_json(const Network& g, const NodeVerdict& v, bool explain) {
  Json j;
  j["node"] = g.label(v.node);
  j["outDegree"] = v.out_degree;
  j["status"] = to_string(v.status);
  j["disjointPaths"] = static_cast<int>(v.paths.paths.size());
  if (v.bottleneck) j["bottleneck"] = to_json(g, v.bottleneck->nodes);
  if (explain && v.status != NodeStatus::NoOutEdges)
    j["paths"] = to_json(g, v.paths);
  return j;
}

Json to_json(const Network& g, const EdgeVerdict& v) {
  Json j;
  j["from"] = g.label(v.edge.from);
  j["to"] = g.label(v.edge.to);
  j["status"] = to_string(v.status);
  Json bases = Json::array();
  for (EdgeBasis b : v.bases) bases.push_back(to_string(b));
  j["bases"] = std::move(bases);
  return j;
}

Json to_json(const Network& g, const BoundChecks& b) {
  Json j;
  j["sinks"]["satisfied"] = b.sinks.satisfied;
  j["sinks"]["unmeasured"] = to_json(g, b.sinks.unmeasured_sinks);
  auto& c = j["countingBound"];
  c["satisfied"] = b.counting.satisfied;
  c["vacuous"] = b.counting.vacuous;
  c["L"] = b.counting.nodes;
  c["n"] = b.counting.edges;
  c["s"] = b.counting.sinks;
  c["m"] = b.counting.extra_measured;
  c["requiredMeasured"] = b.counting.required;
  auto& o = j["outDegree"];
  o["satisfied"] = b.out_degree.satisfied;
  o["p"] = b.out_degree.measured;
  o["maxOutDegree"] = b.out_degree.max_out_degree;
  return j;
}

Json to_json(const Network& g, const IdentifiabilityReport& r, bool explain) {
  Json j;
  j["fullyIdentifiable"] = r.fully_identifiable;
  auto& s = j["summary"];
  s["L"] = r.summary.nodes;
  s["n"] = r.summary.edges;
  s["p"] = r.summary.measured;
  s["f"] = r.summary.sources;
  s["s"] = r.summary.sinks;
  s["maxOutDegree"] = r.summary.max_out_degree;
  s["measured"] = to_json(g, g.measured());
  s["sources"] = to_json(g, r.roles.sources);
  s["sinks"] = to_json(g, r.roles.sinks);
  s["isolated"] = to_json(g, r.roles.isolated);
  j["nodes"] = Json::array();
  for (const auto& v : r.nodes) j["nodes"].push_back(to_json(g, v, explain));
  j["edges"] = Json::array();
  for (const auto& e : r.edges) j["edges"].push_back(to_json(g, e));
  j["checks"] = to_json(g, r.checks);
  auto& sc = j["shortcuts"];
  sc["multitree"] = r.shortcuts.multitree;
  sc["multitreeIdentifiable"] = r.shortcuts.multitree_identifiable;
  sc["isolatedCycles"] = Json::array();
  for (const auto& c : r.shortcuts.isolated_cycles) {
    Json jc;
    jc["cycle"] = to_json(g, c.cycle);
    jc["measured"] = to_json(g, c.measured);
    sc["isolatedCycles"].push_back(std::move(jc));
  }
  j["warnings"] = r.warnings;
  return j;
}

namespace {

std::string paths_text(const Network& g, const PathCertificate& cert) {
  std::string out;
  for (std::size_t k = 0; k < cert.paths.size(); ++k) {
    if (k) out += " ";
    out += "(";
    for (std::size_t t = 0; t < cert.paths[k].size(); ++t) {
      if (t) out += ",";
      out += g.label(cert.paths[k][t]);
    }
    out += ")";
  }
  return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string render(const Network& g, const NodeVerdict& v, bool explain) {
  std::ostringstream out;
  out << "node " << g.label(v.node) << ": out-degree " << v.out_degree << ", "
      << to_string(v.status);
  if (v.status != NodeStatus::NoOutEdges)
    out << " (" << v.paths.paths.size() << " disjoint path"
        << (v.paths.paths.size() == 1 ? "" : "s") << ")";
  if (v.bottleneck) out << "; bottleneck " << g.format_set(v.bottleneck->nodes);
  if (explain && !v.paths.paths.empty())
    out << "\n    paths " << paths_text(g, v.paths);
  return out.str();
}

std::string render(const Network& g, const EdgeVerdict& v) {
  std::ostringstream out;
  out << g.format_edge(v.edge) << "  " << to_string(v.status);
  if (!v.bases.empty()) {
    out << " [";
    for (std::size_t k = 0; k < v.bases.size(); ++k)
      out << (k ? ", " : "") << to_string(v.bases[k]);
    out << "]";
  }
  return out.str();
}

std::string render(const Network& g, const IdentifiabilityReport& r,
                   bool explain) {
  std::ostringstream out;
  const auto& s = r.summary;
  out << "network: L=" << s.nodes << " nodes, n=" << s.edges
      << " edges, measured " << g.format_set(g.measured()) << "\n";
  out << "sources " << g.format_set(r.roles.sources) << ", sinks "
      << g.format_set(r.roles.sinks);
  if (!r.roles.isolated.empty())
    out << ", isolated " << g.format_set(r.roles.isolated);
  out << "\n";
  out << (r.fully_identifiable ? "fully identifiable"
                               : "NOT fully identifiable")
      << "\n\nnodes:\n";
  for (const auto& v : r.nodes) out << "  " << render(g, v, explain) << "\n";
  out << "\nedges:\n";
  for (const auto& e : r.edges) out << "  " << render(g, e) << "\n";

  const auto& b = r.checks;
  out << "\nnecessary conditions:\n";
  out << "  all sinks measured: " << yes_no(b.sinks.satisfied);
  if (!b.sinks.satisfied)
    out << " (missing " << g.format_set(b.sinks.unmeasured_sinks) << ")";
  out << "\n  counting bound (m+s)(L-s) >= n: ";
  if (b.counting.vacuous) {
    out << "vacuous";
  } else {
    out << yes_no(b.counting.satisfied) << " ((" << b.counting.extra_measured
        << "+" << b.counting.sinks << ")*" << b.counting.nodes - b.counting.sinks
        << " vs " << b.counting.edges << "; at least " << b.counting.required
        << " measured)";
  }
  out << "\n  measured >= max out-degree: " << yes_no(b.out_degree.satisfied)
      << " (" << b.out_degree.measured << " vs " << b.out_degree.max_out_degree
      << ")\n";

  out << "\nshortcuts:\n  multitree: " << yes_no(r.shortcuts.multitree);
  if (r.shortcuts.multitree)
    out << " (identifiable by sinks: "
        << yes_no(r.shortcuts.multitree_identifiable) << ")";
  out << "\n";
  for (const auto& c : r.shortcuts.isolated_cycles)
    out << "  isolated cycle " << g.format_set(c.cycle) << ", measured "
        << g.format_set(c.measured) << "\n";
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace netident
