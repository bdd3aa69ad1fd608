#pragma once

#include <string>

#include "json.hpp"
#include "netident/identifiability.hpp"

namespace netident {

using Json = nlohmann::ordered_json;

Json to_json(const Network& g, const NodeSet& nodes);
Json to_json(const Network& g, const PathCertificate& cert);
/// Bottleneck certificates are always included; disjoint-path certificates
/// only with `explain`.
Json to_json(const Network& g, const NodeVerdict& v, bool explain);
Json to_json(const Network& g, const EdgeVerdict& v);
Json to_json(const Network& g, const BoundChecks& b);

/// Structured report. Field order is fixed and all sets are sorted by node
/// index, so equal inputs serialize byte-identically.
Json to_json(const Network& g, const IdentifiabilityReport& r, bool explain);

/// Human rendering of the same data.
std::string render(const Network& g, const IdentifiabilityReport& r,
                   bool explain);
std::string render(const Network& g, const NodeVerdict& v, bool explain);
std::string render(const Network& g, const EdgeVerdict& v);

}  // namespace netident
