#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zx/phase.hpp"

namespace zx {

/// Node kinds: Z/X spiders (phased), H boxes, and boundary nodes.
enum class NodeKind : std::uint8_t { Z, X, H, B };

const char* to_string(NodeKind k);

struct Node {
    NodeKind kind = NodeKind::Z;
    Phase phase{};  ///< meaningful only for Z/X spiders
};

using NodeId = std::uint32_t;

/// An open multigraph: phased Z/X spiders, H boxes (degree exactly 2) and
/// degree-1 boundary nodes, with parallel edges, self-loops and an explicit
/// count of closed loops (each closed loop is a scalar factor 2).
///
/// Diagrams are plain values; rewrites copy and return new diagrams.
struct Diagram {
    std::map<NodeId, Node> nodes;
    /// Unordered node pairs, stored with first ≤ second. Parallel edges are
    /// repeated entries; a self-loop has both ends equal.
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> inputs;   ///< ordered boundary nodes (leg 0 first)
    std::vector<NodeId> outputs;  ///< ordered boundary nodes (leg 0 first)
    std::uint32_t loops = 0;
    NodeId next_id = 0;

    NodeId add_node(NodeKind kind, Phase phase = Phase());
    NodeId add_input();
    NodeId add_output();
    void add_edge(NodeId a, NodeId b);

    /// Remove one instance of edge {a,b}; false if absent.
    bool remove_edge(NodeId a, NodeId b);
    /// Remove a node together with all incident edges.
    void remove_node(NodeId id);

    bool has_node(NodeId id) const { return nodes.count(id) != 0; }
    const Node& node(NodeId id) const;
    std::size_t degree(NodeId id) const;
    /// All neighbors of `id`, one entry per incident edge (self-loops
    /// contribute the node itself twice).
    std::vector<NodeId> neighbors(NodeId id) const;
    /// Number of edges between a and b.
    std::size_t multiplicity(NodeId a, NodeId b) const;

    std::size_t n_inputs() const { return inputs.size(); }
    std::size_t n_outputs() const { return outputs.size(); }

    /// Total wire count (edges plus closed loops).
    std::size_t n_wires() const { return edges.size() + loops; }

    /// Checks the structural invariants: boundary nodes appear exactly once
    /// in exactly one boundary list and have degree 1, H boxes have degree 2,
    /// and all edges reference existing nodes. Returns an error message, or
    /// an empty string when valid.
    std::string validate() const;
    bool is_valid() const { return validate().empty(); }
};

// ---- generators -----------------------------------------------------------

/// Z spider with n inputs, m outputs and the given phase.
Diagram gen_z(int n, int m, Phase phase = Phase());
/// X spider with n inputs, m outputs and the given phase.
Diagram gen_x(int n, int m, Phase phase = Phase());
/// The 1→1 Hadamard box.
Diagram gen_h();
/// The empty diagram (no nodes, no boundaries).
Diagram gen_empty();
/// A single plain wire (1→1).
Diagram gen_id();
/// The wire crossing (2→2).
Diagram gen_swap();
/// η: 0→2, a bent wire joining the two outputs.
Diagram gen_cup();
/// ε: 2→0, a bent wire joining the two inputs.
Diagram gen_cap();

// ---- compositions ---------------------------------------------------------

/// Side-by-side composition; boundaries of d1 precede those of d2.
Diagram tensor(const Diagram& d1, const Diagram& d2);

/// Sequential composition d2 ∘ d1: output i of d1 is joined to input i of
/// d2 by a plain wire. Throws std::invalid_argument on arity mismatch.
Diagram compose(const Diagram& d2, const Diagram& d1);

// ---- predicates ------------------------------------------------------------

/// True iff a node bijection exists preserving kinds, phases (same
/// representation class), edge multiplicities, loop count, and boundary
/// order (input k maps to input k, output k to output k).
bool is_isomorphic(const Diagram& d1, const Diagram& d2);

/// Same bijection search, but phases match when their angular distance is at
/// most `phase_tol` (for diagrams whose angles came through floating-point
/// solvers rather than exact arithmetic).
bool is_isomorphic(const Diagram& d1, const Diagram& d2, double phase_tol);

/// True iff the underlying multigraph is acyclic: no closed loops, no
/// self-loops, no parallel edges, and no cycle through nodes.
bool is_cycle_free(const Diagram& d);

}  // namespace zx
