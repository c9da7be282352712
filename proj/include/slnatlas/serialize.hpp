#pragma once

#include <string>

#include <json.hpp>

#include "slnatlas/actions.hpp"
#include "slnatlas/circle_field.hpp"
#include "slnatlas/lattice.hpp"

namespace slnatlas {

// Parsed artifact file: exactly one member is populated, per `kind`.
// Circle and interval fields share the "field/v1" schema (discriminated by
// "kind": "trig" vs "poly") but are distinct artifact kinds for equivalence
// purposes.
struct Artifact {
    enum class Kind { CircleField, IntervalField, Action, Graph };
    Kind kind = Kind::CircleField;
    CircleField circle;
    IntervalField interval;
    ActionDescriptor action;
    GluingGraph graph;
};

// Parse + validate an artifact document. The top-level "schema" field
// ("field/v1", "action/v1", "graph/v1") selects the layout. Returns the
// normalized document: defaults materialized, so canonical_json of the
// result is the canonical form of the file. ParseError on malformed JSON,
// unknown schema, wrong types, non-finite numbers, unreduced fractions, or
// out-of-range sites.
nlohmann::json parse_artifact_json(const std::string& text);

// Build the domain object from a document already normalized by
// parse_artifact_json. Action payloads additionally pass the actions-module
// validators (InvalidActionData propagates).
Artifact artifact_from_json(const nlohmann::json& doc);

Artifact load_artifact(const std::string& path);

// Build a graph from a normalized graph/v1 document WITHOUT the validity
// gate, so callers (the lattice check command) can run validate_graph and
// report diagnostics themselves. artifact_from_json rejects invalid graphs.
GluingGraph graph_from_document(const nlohmann::json& doc);

// Canonical serialization: keys sorted, no whitespace, floats printed with
// 17 significant digits (%.17g), integers as integers, LF-free single line.
// canonical_json(parse_artifact_json(s)) is idempotent, and the identity on
// files it produced.
std::string canonical_json(const nlohmann::json& j);

const char* artifact_kind_name(Artifact::Kind k);

}  // namespace slnatlas
