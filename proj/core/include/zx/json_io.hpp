#pragma once

#include <string>

#include "zx/diagram.hpp"

namespace zx {

/// Parse a diagram from its JSON text form:
///   {"inputs":[id…],"outputs":[id…],"loops":k,
///    "nodes":{"id":{"kind":"Z"|"X"|"H"|"B","phase":{"pi_num":p,"pi_den":q}|{"rad":x}}},
///    "edges":[[a,b]…]}
/// Phase is omitted for H and B nodes; edges are listed with multiplicity.
/// Throws std::runtime_error with a descriptive message on malformed input.
Diagram parse_diagram(const std::string& text);

/// Serialize to the canonical JSON form: node ids renumbered densely in
/// ascending order, edges sorted, two-space indentation, fixed key order.
/// parse(serialize(d)) is bit-exact for every diagram, and serialize is a
/// byte-stable fixed point on files that are already canonical.
std::string serialize_diagram(const Diagram& d);

/// Read/write helpers (throw std::runtime_error on I/O failure).
Diagram load_diagram(const std::string& path);
void save_diagram(const Diagram& d, const std::string& path);

}  // namespace zx
