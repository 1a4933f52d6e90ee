#include "zx/diagram.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zx {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Z: return "Z";
        case NodeKind::X: return "X";
        case NodeKind::H: return "H";
        case NodeKind::B: return "B";
    }
    return "?";
}

NodeId Diagram::add_node(NodeKind kind, Phase phase) {
    NodeId id = next_id++;
    nodes[id] = Node{kind, phase};
    return id;
}

NodeId Diagram::add_input() {
    NodeId id = add_node(NodeKind::B);
    inputs.push_back(id);
    return id;
}

NodeId Diagram::add_output() {
    NodeId id = add_node(NodeKind::B);
    outputs.push_back(id);
    return id;
}

void Diagram::add_edge(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    edges.emplace_back(a, b);
}

bool Diagram::remove_edge(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    auto it = std::find(edges.begin(), edges.end(), std::make_pair(a, b));
    if (it == edges.end()) return false;
    edges.erase(it);
    return true;
}

void Diagram::remove_node(NodeId id) {
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [id](const auto& e) { return e.first == id || e.second == id; }),
                edges.end());
    nodes.erase(id);
    inputs.erase(std::remove(inputs.begin(), inputs.end(), id), inputs.end());
    outputs.erase(std::remove(outputs.begin(), outputs.end(), id), outputs.end());
}

const Node& Diagram::node(NodeId id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw std::out_of_range("no such node");
    return it->second;
}

std::size_t Diagram::degree(NodeId id) const {
    std::size_t d = 0;
    for (const auto& [a, b] : edges) {
        if (a == id) ++d;
        if (b == id) ++d;
    }
    return d;
}

std::vector<NodeId> Diagram::neighbors(NodeId id) const {
    std::vector<NodeId> out;
    for (const auto& [a, b] : edges) {
        if (a == id) out.push_back(b);
        if (b == id) out.push_back(a);
    }
    return out;
}

std::size_t Diagram::multiplicity(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    return static_cast<std::size_t>(
        std::count(edges.begin(), edges.end(), std::make_pair(a, b)));
}

std::string Diagram::validate() const {
    for (const auto& [a, b] : edges) {
        if (!has_node(a) || !has_node(b)) {
            std::ostringstream os;
            os << "edge (" << a << "," << b << ") references a missing node";
            return os.str();
        }
    }
    std::map<NodeId, int> boundary_uses;
    for (NodeId id : inputs) ++boundary_uses[id];
    for (NodeId id : outputs) ++boundary_uses[id];
    for (const auto& [id, uses] : boundary_uses) {
        if (!has_node(id)) return "boundary list references a missing node";
        if (node(id).kind != NodeKind::B) return "boundary list contains a non-boundary node";
        if (uses != 1) return "boundary node used more than once";
    }
    for (const auto& [id, n] : nodes) {
        std::ostringstream os;
        switch (n.kind) {
            case NodeKind::B:
                if (boundary_uses.count(id) == 0) {
                    os << "boundary node " << id << " not listed in inputs/outputs";
                    return os.str();
                }
                if (degree(id) != 1) {
                    os << "boundary node " << id << " must have degree 1";
                    return os.str();
                }
                break;
            case NodeKind::H:
                if (degree(id) != 2) {
                    os << "H node " << id << " must have degree 2";
                    return os.str();
                }
                break;
            default:
                break;
        }
    }
    return "";
}

// ---- generators -----------------------------------------------------------

namespace {

Diagram spider(NodeKind kind, int n, int m, Phase phase) {
    if (n < 0 || m < 0) throw std::invalid_argument("spider arity must be non-negative");
    Diagram d;
    NodeId s = d.add_node(kind, phase);
    for (int i = 0; i < n; ++i) d.add_edge(d.add_input(), s);
    for (int i = 0; i < m; ++i) d.add_edge(s, d.add_output());
    return d;
}

}  // namespace

Diagram gen_z(int n, int m, Phase phase) { return spider(NodeKind::Z, n, m, phase); }
Diagram gen_x(int n, int m, Phase phase) { return spider(NodeKind::X, n, m, phase); }

Diagram gen_h() {
    Diagram d;
    NodeId h = d.add_node(NodeKind::H);
    d.add_edge(d.add_input(), h);
    d.add_edge(h, d.add_output());
    return d;
}

Diagram gen_empty() { return Diagram{}; }

Diagram gen_id() {
    Diagram d;
    d.add_edge(d.add_input(), d.add_output());
    return d;
}

Diagram gen_swap() {
    Diagram d;
    NodeId i0 = d.add_input(), i1 = d.add_input();
    NodeId o0 = d.add_output(), o1 = d.add_output();
    d.add_edge(i0, o1);
    d.add_edge(i1, o0);
    return d;
}

Diagram gen_cup() {
    Diagram d;
    NodeId o0 = d.add_output(), o1 = d.add_output();
    d.add_edge(o0, o1);
    return d;
}

Diagram gen_cap() {
    Diagram d;
    NodeId i0 = d.add_input(), i1 = d.add_input();
    d.add_edge(i0, i1);
    return d;
}

// ---- compositions ---------------------------------------------------------

namespace {

/// Copy of `d` with all ids shifted so they start at `base`.
Diagram shifted(const Diagram& d, NodeId base) {
    Diagram out;
    out.loops = d.loops;
    for (const auto& [id, n] : d.nodes) out.nodes[base + id] = n;
    for (const auto& [a, b] : d.edges) out.edges.emplace_back(base + a, base + b);
    for (NodeId id : d.inputs) out.inputs.push_back(base + id);
    for (NodeId id : d.outputs) out.outputs.push_back(base + id);
    out.next_id = base + d.next_id;
    return out;
}

}  // namespace

Diagram tensor(const Diagram& d1, const Diagram& d2) {
    Diagram a = shifted(d1, 0);
    Diagram b = shifted(d2, d1.next_id);
    for (const auto& [id, n] : b.nodes) a.nodes[id] = n;
    a.edges.insert(a.edges.end(), b.edges.begin(), b.edges.end());
    a.inputs.insert(a.inputs.end(), b.inputs.begin(), b.inputs.end());
    a.outputs.insert(a.outputs.end(), b.outputs.begin(), b.outputs.end());
    a.loops += b.loops;
    a.next_id = b.next_id;
    return a;
}

Diagram compose(const Diagram& d2, const Diagram& d1) {
    if (d1.outputs.size() != d2.inputs.size())
        throw std::invalid_argument("compose: arity mismatch between outputs and inputs");
    Diagram a = shifted(d1, 0);
    Diagram b = shifted(d2, d1.next_id);

    Diagram out;
    out.loops = a.loops + b.loops;
    for (const auto& [id, n] : a.nodes) out.nodes[id] = n;
    for (const auto& [id, n] : b.nodes) out.nodes[id] = n;
    out.edges = a.edges;
    out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
    out.inputs = a.inputs;
    out.outputs = b.outputs;
    out.next_id = b.next_id;

    // Join output i of d1 to input i of d2, then smooth away the spliced
    // boundary nodes (each has degree exactly 2 after joining).
    std::vector<NodeId> connectors;
    for (std::size_t i = 0; i < a.outputs.size(); ++i) {
        out.edges.emplace_back(std::min(a.outputs[i], b.inputs[i]),
                               std::max(a.outputs[i], b.inputs[i]));
        connectors.push_back(a.outputs[i]);
        connectors.push_back(b.inputs[i]);
    }

    for (NodeId c : connectors) {
        // Gather the positions of edges at c.
        std::vector<std::size_t> at;
        for (std::size_t i = 0; i < out.edges.size(); ++i) {
            if (out.edges[i].first == c || out.edges[i].second == c) at.push_back(i);
        }
        if (at.size() == 1 && out.edges[at[0]].first == c && out.edges[at[0]].second == c) {
            // A self-loop at the connector: the wire closed onto itself.
            out.edges.erase(out.edges.begin() + static_cast<std::ptrdiff_t>(at[0]));
            ++out.loops;
        } else if (at.size() == 2) {
            NodeId n1 = out.edges[at[0]].first == c ? out.edges[at[0]].second : out.edges[at[0]].first;
            NodeId n2 = out.edges[at[1]].first == c ? out.edges[at[1]].second : out.edges[at[1]].first;
            out.edges.erase(out.edges.begin() + static_cast<std::ptrdiff_t>(at[1]));
            out.edges.erase(out.edges.begin() + static_cast<std::ptrdiff_t>(at[0]));
            out.edges.emplace_back(std::min(n1, n2), std::max(n1, n2));
        } else {
            throw std::logic_error("compose: spliced boundary node does not have degree 2");
        }
        out.nodes.erase(c);
    }
    return out;
}

// ---- isomorphism ----------------------------------------------------------

namespace {

/// Signature used to prune the isomorphism search.
struct NodeSig {
    NodeKind kind;
    bool exact;
    std::int64_t num;
    std::int64_t den;
    double rad;
    std::size_t degree;

    bool operator<(const NodeSig& o) const {
        auto key = [](const NodeSig& s) {
            return std::tuple(static_cast<int>(s.kind), s.exact, s.num, s.den, s.rad, s.degree);
        };
        return key(*this) < key(o);
    }
    bool operator==(const NodeSig& o) const { return !(*this < o) && !(o < *this); }
};

/// With a phase tolerance the signature drops the phase fields (tolerant
/// comparison cannot be bucketed exactly); the search then relies on
/// phases_match for angles.
NodeSig signature(const Diagram& d, NodeId id, const double* phase_tol) {
    const Node& n = d.node(id);
    NodeSig s{};
    s.kind = n.kind;
    s.degree = d.degree(id);
    bool spider =
        phase_tol == nullptr && (n.kind == NodeKind::Z || n.kind == NodeKind::X);
    s.exact = spider ? n.phase.is_exact() : true;
    s.num = spider && n.phase.is_exact() ? n.phase.num() : 0;
    s.den = spider && n.phase.is_exact() ? n.phase.den() : 1;
    s.rad = spider && !n.phase.is_exact() ? n.phase.value() : 0.0;
    return s;
}

bool phases_match(const Diagram& d1, NodeId a, const Diagram& d2, NodeId b,
                  const double* phase_tol) {
    const Node& n1 = d1.node(a);
    const Node& n2 = d2.node(b);
    if (n1.kind != n2.kind) return false;
    if (n1.kind != NodeKind::Z && n1.kind != NodeKind::X) return true;
    if (phase_tol == nullptr) return n1.phase.identical(n2.phase);
    return std::abs(n1.phase.distance(n2.phase)) <= *phase_tol;
}

bool iso_impl(const Diagram& d1, const Diagram& d2, const double* phase_tol) {
    if (d1.nodes.size() != d2.nodes.size() || d1.edges.size() != d2.edges.size() ||
        d1.loops != d2.loops || d1.inputs.size() != d2.inputs.size() ||
        d1.outputs.size() != d2.outputs.size())
        return false;

    // Signature multisets must agree.
    std::multiset<NodeSig> s1, s2;
    for (const auto& [id, n] : d1.nodes) s1.insert(signature(d1, id, phase_tol));
    for (const auto& [id, n] : d2.nodes) s2.insert(signature(d2, id, phase_tol));
    if (s1 != s2) return false;

    std::map<NodeId, NodeId> fwd;  // d1 -> d2
    std::map<NodeId, NodeId> bwd;  // d2 -> d1

    auto assign = [&](NodeId a, NodeId b) -> bool {
        auto it = fwd.find(a);
        if (it != fwd.end()) return it->second == b;
        if (bwd.count(b)) return false;
        if (!phases_match(d1, a, d2, b, phase_tol)) return false;
        if (d1.degree(a) != d2.degree(b)) return false;
        fwd[a] = b;
        bwd[b] = a;
        return true;
    };

    // Boundary order is fixed.
    for (std::size_t i = 0; i < d1.inputs.size(); ++i)
        if (!assign(d1.inputs[i], d2.inputs[i])) return false;
    for (std::size_t i = 0; i < d1.outputs.size(); ++i)
        if (!assign(d1.outputs[i], d2.outputs[i])) return false;

    // Remaining nodes, most-constrained (rarest signature) first.
    std::vector<NodeId> rest;
    for (const auto& [id, n] : d1.nodes)
        if (!fwd.count(id)) rest.push_back(id);
    std::sort(rest.begin(), rest.end(), [&](NodeId x, NodeId y) {
        auto cx = s1.count(signature(d1, x, phase_tol));
        auto cy = s1.count(signature(d1, y, phase_tol));
        if (cx != cy) return cx < cy;
        return x < y;
    });

    // Edge-consistency w.r.t. already-assigned nodes: every edge of d1
    // between assigned nodes must appear in d2 with equal multiplicity.
    auto consistent = [&](NodeId a) -> bool {
        NodeId b = fwd.at(a);
        std::map<NodeId, std::size_t> want;  // assigned neighbor in d2 -> multiplicity
        for (NodeId nb : d1.neighbors(a)) {
            auto it = fwd.find(nb);
            if (it != fwd.end()) ++want[it->second];
        }
        // self-loops: neighbors() reports `a` twice per loop, which maps to b
        for (auto& [nb2, mult] : want) {
            std::size_t have = d2.multiplicity(b, nb2);
            if (nb2 == b) have *= 2;  // counted twice in `want` as well
            if (have != mult) return false;
        }
        // also check reverse: b's assigned neighbors must all be wanted
        for (NodeId nb2 : d2.neighbors(b)) {
            if (bwd.count(nb2) && !want.count(nb2)) return false;
        }
        return true;
    };

    std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
        if (k == rest.size()) {
            // full multiset check of mapped edges
            std::multiset<std::pair<NodeId, NodeId>> e1, e2;
            for (const auto& [a, b] : d1.edges) {
                NodeId x = fwd.at(a), y = fwd.at(b);
                e1.insert({std::min(x, y), std::max(x, y)});
            }
            for (const auto& [a, b] : d2.edges) e2.insert({std::min(a, b), std::max(a, b)});
            return e1 == e2;
        }
        NodeId a = rest[k];
        NodeSig sig = signature(d1, a, phase_tol);
        for (const auto& [b, n] : d2.nodes) {
            if (bwd.count(b)) continue;
            if (!(signature(d2, b, phase_tol) == sig)) continue;
            if (!phases_match(d1, a, d2, b, phase_tol)) continue;
            fwd[a] = b;
            bwd[b] = a;
            if (consistent(a) && search(k + 1)) return true;
            fwd.erase(a);
            bwd.erase(b);
        }
        return false;
    };

    return search(0);
}

}  // namespace

bool is_isomorphic(const Diagram& d1, const Diagram& d2) {
    return iso_impl(d1, d2, nullptr);
}

bool is_isomorphic(const Diagram& d1, const Diagram& d2, double phase_tol) {
    return iso_impl(d1, d2, &phase_tol);
}

bool is_cycle_free(const Diagram& d) {
    if (d.loops != 0) return false;
    std::set<std::pair<NodeId, NodeId>> seen;
    std::map<NodeId, NodeId> parent;  // union-find
    std::function<NodeId(NodeId)> find = [&](NodeId x) -> NodeId {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [id, n] : d.nodes) parent[id] = id;
    for (const auto& [a, b] : d.edges) {
        if (a == b) return false;                    // self-loop
        if (!seen.insert({a, b}).second) return false;  // parallel edge
        NodeId ra = find(a), rb = find(b);
        if (ra == rb) return false;  // cycle
        parent[ra] = rb;
    }
    return true;
}

}  // namespace zx
