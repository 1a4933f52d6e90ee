#include "zx/rules.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "zx/angles.hpp"
#include "zx/data.hpp"
#include "zx/semantics.hpp"

namespace zx {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct RuleInfo {
    RuleId id;
    const char* name;
    const char* file;
};

constexpr std::array<RuleInfo, 18> kRuleInfos{{
    {RuleId::kS, "S", "rules/s.json"},
    {RuleId::kIg, "Ig", "rules/ig.json"},
    {RuleId::kIr, "Ir", "rules/ir.json"},
    {RuleId::kCP, "CP", "rules/cp.json"},
    {RuleId::kB, "B", "rules/b.json"},
    {RuleId::kHD, "HD", "rules/hd.json"},
    {RuleId::kH, "H", "rules/h.json"},
    {RuleId::kE, "E", "rules/e.json"},
    {RuleId::kEU, "EU", "rules/eu.json"},
    {RuleId::kEUp, "EU'", "rules/eu_prime.json"},
    {RuleId::kIV, "IV", "rules/iv.json"},
    {RuleId::kK, "K", "rules/k.json"},
    {RuleId::kSUP, "SUP", "rules/sup.json"},
    {RuleId::kC, "C", "rules/c.json"},
    {RuleId::kBW, "BW", "rules/bw.json"},
    {RuleId::kA, "A", "rules/a.json"},
    {RuleId::kZO, "ZO", "rules/zo.json"},
    {RuleId::kIVp, "IV'", "rules/iv_prime.json"},
}};

const RuleInfo& info(RuleId id) {
    for (const auto& ri : kRuleInfos) {
        if (ri.id == id) return ri;
    }
    throw std::logic_error("unknown rule id");
}

Phase parse_const_phase(const json& j) {
    if (j.contains("pi_num")) {
        return Phase::exact(j.at("pi_num").get<std::int64_t>(),
                            j.value("pi_den", std::int64_t{1}));
    }
    if (j.contains("rad")) return Phase::radians(j.at("rad").get<double>());
    throw std::runtime_error("rule template: phase object needs pi_num or rad");
}

PatternNode parse_pattern_node(const json& j) {
    PatternNode pn;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "Z") {
        pn.kind = NodeKind::Z;
    } else if (kind == "X") {
        pn.kind = NodeKind::X;
    } else if (kind == "H") {
        pn.kind = NodeKind::H;
    } else {
        throw std::runtime_error("rule template: pattern node kind must be Z, X or H");
    }
    if (pn.kind == NodeKind::H) {
        if (j.contains("phase")) throw std::runtime_error("rule template: H node with phase");
        pn.phase_kind = PatternNode::PhaseKind::kNone;
        return pn;
    }
    const json& p = j.at("phase");
    if (p.contains("angle_var")) {
        pn.phase_kind = PatternNode::PhaseKind::kVar;
        pn.var = p.at("angle_var").get<std::string>();
    } else if (p.contains("angle_expr")) {
        pn.phase_kind = PatternNode::PhaseKind::kExpr;
        pn.expr = AngleExpr::parse(p.at("angle_expr").get<std::string>());
    } else {
        pn.phase_kind = PatternNode::PhaseKind::kConst;
        pn.const_phase = parse_const_phase(p);
    }
    return pn;
}

Pattern parse_pattern(const json& j) {
    Pattern p;
    for (auto it = j.at("nodes").begin(); it != j.at("nodes").end(); ++it) {
        int id = std::stoi(it.key());
        if (id < 0) throw std::runtime_error("rule template: node ids must be >= 0");
        p.nodes.emplace(id, parse_pattern_node(it.value()));
    }
    for (const json& e : j.at("edges")) {
        if (!e.is_array() || e.size() < 2 || e.size() > 3) {
            throw std::runtime_error("rule template: edge entries are [a,b] or [a,b,marker]");
        }
        PatternEdge pe;
        pe.a = e.at(0).get<int>();
        pe.b = e.at(1).get<int>();
        if (pe.a >= 0 && !p.nodes.count(pe.a)) {
            throw std::runtime_error("rule template: edge references missing node");
        }
        if (pe.b >= 0 && !p.nodes.count(pe.b)) {
            throw std::runtime_error("rule template: edge references missing node");
        }
        if (pe.a < 0 && pe.b < 0) {
            if (e.size() == 3) {
                throw std::runtime_error("rule template: slot-to-slot edges cannot be groups");
            }
        }
        if (pe.a < 0 && pe.b >= 0) std::swap(pe.a, pe.b);  // node end first
        if (e.size() == 3) {
            const json& m = e.at(2);
            const std::string g = m.at("group").get<std::string>();
            if (g == "dots") {
                pe.one_or_more = false;
            } else if (g == "diag_dots") {
                pe.one_or_more = true;
            } else {
                throw std::runtime_error("rule template: group must be dots or diag_dots");
            }
            pe.group = true;
            if (m.contains("via")) {
                if (m.at("via").get<std::string>() != "H") {
                    throw std::runtime_error("rule template: via must be H");
                }
                pe.via_h = true;
            }
        }
        p.edges.push_back(pe);
    }
    return p;
}

RuleTemplate parse_template(RuleId id, const std::string& text) {
    json j = json::parse(text);
    RuleTemplate t;
    t.id = id;
    t.name = j.at("name").get<std::string>();
    t.display = j.at("display").get<std::string>();
    for (const json& s : j.at("sets")) t.sets.insert(s.get<std::string>());
    for (const json& pjs : j.at("params")) t.params.push_back(pjs.get<std::string>());
    if (j.contains("basis")) {
        for (const json& bjs : j.at("basis")) t.basis_params.insert(bjs.get<std::string>());
    }
    t.nonlinear = j.value("nonlinear", false);
    t.constrained = j.value("constrained", false);
    t.lhs = parse_pattern(j.at("lhs"));
    t.rhs = parse_pattern(j.at("rhs"));
    return t;
}

NodeKind effective_kind(NodeKind k, bool swapped) {
    if (!swapped) return k;
    if (k == NodeKind::Z) return NodeKind::X;
    if (k == NodeKind::X) return NodeKind::Z;
    return k;
}

/// Exact-aware closeness for phases on concrete diagrams.
bool phase_close(const Phase& p, const Phase& q) {
    if (p.identical(q)) return true;
    return p.distance(q) <= 1e-12;
}

/// All parameters appearing in expressions of `p` but on no node as a bare
/// angle_var (those cannot be inferred by matching).
std::set<std::string> uninferable_vars(const Pattern& p) {
    std::set<std::string> bare;
    std::set<std::string> needed;
    for (const auto& [id, pn] : p.nodes) {
        if (pn.phase_kind == PatternNode::PhaseKind::kVar) bare.insert(pn.var);
    }
    for (const auto& [id, pn] : p.nodes) {
        if (pn.phase_kind != PatternNode::PhaseKind::kExpr) continue;
        for (const auto& v : pn.expr.variables()) {
            if (!bare.count(v)) needed.insert(v);
        }
    }
    return needed;
}

struct NodePlan {
    std::size_t fixed_degree = 0;          ///< endpoints of non-group edges
    std::vector<int> fixed_slots;          ///< ascending |slot|
    std::vector<std::size_t> group_edges;  ///< indexes into Pattern::edges
};

struct PatternPlan {
    std::vector<int> order;                          ///< node ids ascending
    std::map<int, NodePlan> nodes;
    /// unordered assigned pairs → fixed multiplicity
    std::map<std::pair<int, int>, std::size_t> fixed_pairs;
    /// unordered assigned pairs → bundle edge index
    std::map<std::pair<int, int>, std::size_t> bundle_pairs;
    std::vector<std::pair<int, int>> slot_joins;     ///< slot-to-slot edges
};

PatternPlan plan_pattern(const Pattern& p) {
    PatternPlan plan;
    for (const auto& [id, pn] : p.nodes) {
        plan.order.push_back(id);
        plan.nodes.emplace(id, NodePlan{});
    }
    std::sort(plan.order.begin(), plan.order.end());
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const PatternEdge& pe = p.edges[i];
        if (pe.a < 0 && pe.b < 0) {
            plan.slot_joins.emplace_back(pe.a, pe.b);
            continue;
        }
        if (pe.b < 0) {
            NodePlan& np = plan.nodes.at(pe.a);
            if (pe.group) {
                np.group_edges.push_back(i);
            } else {
                np.fixed_slots.push_back(pe.b);
                np.fixed_degree += 1;
            }
            continue;
        }
        auto key = std::minmax(pe.a, pe.b);
        if (pe.group) {
            plan.bundle_pairs[key] = i;
        } else {
            plan.fixed_pairs[key] += 1;
        }
        plan.nodes.at(pe.a).fixed_degree += pe.group ? 0 : 1;
        plan.nodes.at(pe.b).fixed_degree += pe.group ? 0 : 1;
    }
    for (auto& [id, np] : plan.nodes) {
        std::sort(np.fixed_slots.begin(), np.fixed_slots.end(),
                  [](int a, int b) { return -a < -b; });
    }
    return plan;
}

class Matcher {
  public:
    Matcher(const Diagram& d, const RuleTemplate& tmpl, bool reversed,
            const MatchHints& hints)
        : d_(d),
          tmpl_(tmpl),
          reversed_(reversed),
          pattern_(reversed ? tmpl.rhs : tmpl.lhs),
          plan_(plan_pattern(pattern_)),
          hints_(hints) {
        auto needed = uninferable_vars(pattern_);
        for (const auto& [v, ph] : hints.angles) needed.erase(v);
        if (!needed.empty()) {
            std::ostringstream os;
            os << "rule " << tmpl.name << (reversed ? " (reversed)" : "")
               << " cannot infer parameter(s):";
            for (const auto& v : needed) os << " " << v;
            os << "; bind them via hints";
            throw std::invalid_argument(os.str());
        }
        for (std::size_t i = 0; i < d.edges.size(); ++i) {
            incidence_[d.edges[i].first].push_back(i);
            if (d.edges[i].second != d.edges[i].first) {
                incidence_[d.edges[i].second].push_back(i);
            }
        }
    }

    std::vector<RuleMatch> run() {
        if (hints_.color_swapped) {
            search(true);
        } else {
            search(false);
            if (hints_.try_color_swapped) search(true);
        }
        return matches_;
    }

  private:
    void search(bool swapped) {
        swapped_ = swapped;
        assign_.clear();
        used_.clear();
        angles_ = hints_.angles;
        descend(0);
    }

    void descend(std::size_t idx) {
        if (idx == plan_.order.size()) {
            finish();
            return;
        }
        const int pid = plan_.order[idx];
        auto hint = hints_.nodes.find(pid);
        if (hint != hints_.nodes.end()) {
            try_candidate(idx, pid, hint->second);
            return;
        }
        for (const auto& [nid, node] : d_.nodes) try_candidate(idx, pid, nid);
    }

    void try_candidate(std::size_t idx, int pid, NodeId nid) {
        if (!d_.has_node(nid) || used_.count(nid)) return;
        const Node& n = d_.node(nid);
        const PatternNode& pn = pattern_.nodes.at(pid);
        if (n.kind == NodeKind::B) return;
        if (n.kind != effective_kind(pn.kind, swapped_)) return;
        if (d_.multiplicity(nid, nid) != 0) return;  // self-loops never match
        const NodePlan& np = plan_.nodes.at(pid);
        const std::size_t deg = d_.degree(nid);
        std::size_t min_deg = np.fixed_degree;
        for (std::size_t gi : np.group_edges) {
            if (pattern_.edges[gi].one_or_more) min_deg += 1;
        }
        if (np.group_edges.empty() && !node_has_bundle(pid)) {
            if (deg != np.fixed_degree) return;
        } else if (deg < min_deg) {
            return;
        }
        // adjacency with already-assigned neighbors
        for (const auto& [pair, mult] : plan_.fixed_pairs) {
            if (pair.first != pid && pair.second != pid) continue;
            int other = pair.first == pid ? pair.second : pair.first;
            auto it = assign_.find(other);
            if (it == assign_.end()) continue;
            std::size_t dm = d_.multiplicity(nid, it->second);
            auto bit = plan_.bundle_pairs.find(pair);
            if (bit == plan_.bundle_pairs.end()) {
                if (dm != mult) return;
            } else if (dm < mult + (pattern_.edges[bit->second].one_or_more ? 1 : 0)) {
                return;
            }
        }
        for (const auto& [pair, eidx] : plan_.bundle_pairs) {
            if (pair.first != pid && pair.second != pid) continue;
            if (plan_.fixed_pairs.count(pair)) continue;  // handled above
            int other = pair.first == pid ? pair.second : pair.first;
            auto it = assign_.find(other);
            if (it == assign_.end()) continue;
            std::size_t dm = d_.multiplicity(nid, it->second);
            if (dm < (pattern_.edges[eidx].one_or_more ? 1u : 0u)) return;
        }
        // phase
        bool bound_here = false;
        std::string bound_var;
        switch (pn.phase_kind) {
            case PatternNode::PhaseKind::kNone:
                break;
            case PatternNode::PhaseKind::kConst:
                if (!phase_close(n.phase, pn.const_phase)) return;
                break;
            case PatternNode::PhaseKind::kVar: {
                if (tmpl_.basis_params.count(pn.var) &&
                    !phase_close(n.phase, Phase::zero()) &&
                    !phase_close(n.phase, Phase::pi())) {
                    return;
                }
                auto it = angles_.find(pn.var);
                if (it != angles_.end()) {
                    if (!phase_close(n.phase, it->second)) return;
                } else {
                    angles_.emplace(pn.var, n.phase);
                    bound_here = true;
                    bound_var = pn.var;
                }
                break;
            }
            case PatternNode::PhaseKind::kExpr: {
                Phase want;
                try {
                    want = pn.expr.eval(angles_);
                } catch (const std::exception&) {
                    return;  // parameters not bound yet in node order
                }
                if (!phase_close(n.phase, want)) return;
                break;
            }
        }
        assign_[pid] = nid;
        used_.insert(nid);
        descend(idx + 1);
        used_.erase(nid);
        assign_.erase(pid);
        if (bound_here) angles_.erase(bound_var);
    }

    bool node_has_bundle(int pid) const {
        for (const auto& [pair, eidx] : plan_.bundle_pairs) {
            if (pair.first == pid || pair.second == pid) return true;
        }
        return false;
    }

    void finish() {
        // full multiplicity constraints between assigned pairs
        for (const auto& [pair, mult] : plan_.fixed_pairs) {
            if (!plan_.bundle_pairs.count(pair) &&
                d_.multiplicity(assign_.at(pair.first), assign_.at(pair.second)) != mult) {
                return;
            }
        }
        for (const auto& [pair, eidx] : plan_.bundle_pairs) {
            std::size_t fixed =
                plan_.fixed_pairs.count(pair) ? plan_.fixed_pairs.at(pair) : 0;
            std::size_t mult =
                d_.multiplicity(assign_.at(pair.first), assign_.at(pair.second));
            if (mult < fixed + (pattern_.edges[eidx].one_or_more ? 1 : 0)) return;
        }
        // consumed edge instances: every instance between assigned pairs
        std::set<std::size_t> consumed;
        for (const auto& [pid, nid] : assign_) {
            for (std::size_t ei : incidence_.count(nid) ? incidence_.at(nid)
                                                        : std::vector<std::size_t>{}) {
                const auto& [a, b] = d_.edges[ei];
                if (used_.count(a) && used_.count(b)) {
                    // must correspond to a pattern edge or bundle
                    consumed.insert(ei);
                }
            }
        }
        // but reject instances between assigned pairs with no pattern edge
        for (std::size_t ei : consumed) {
            const auto& [a, b] = d_.edges[ei];
            int pa = -1, pb = -1;
            for (const auto& [pid, nid] : assign_) {
                if (nid == a) pa = pid;
                if (nid == b) pb = pid;
            }
            auto key = std::minmax(pa, pb);
            if (!plan_.fixed_pairs.count(key) && !plan_.bundle_pairs.count(key)) return;
        }
        // slot and group assignment per node
        std::map<int, std::vector<SlotEdge>> slot_edges;
        std::set<NodeId> used_h;
        for (const auto& [pid, nid] : assign_) {
            const NodePlan& np = plan_.nodes.at(pid);
            std::vector<std::size_t> rest;
            if (incidence_.count(nid)) {
                for (std::size_t ei : incidence_.at(nid)) {
                    if (!consumed.count(ei)) rest.push_back(ei);
                }
            }
            std::sort(rest.begin(), rest.end());
            if (np.group_edges.empty()) {
                if (rest.size() != np.fixed_slots.size()) return;
            } else if (rest.size() < np.fixed_slots.size()) {
                return;
            }
            std::size_t next = 0;
            for (int slot : np.fixed_slots) {
                std::size_t ei = rest[next++];
                NodeId other = d_.edges[ei].first == nid ? d_.edges[ei].second
                                                         : d_.edges[ei].first;
                if (used_.count(other)) return;  // wire reenters the occurrence
                slot_edges[slot].push_back(SlotEdge{ei, other, 0, false});
            }
            std::vector<std::size_t> remaining(rest.begin() + next, rest.end());
            if (np.group_edges.empty()) continue;
            if (!assign_group_edges(pid, nid, remaining, used_h, slot_edges)) return;
        }
        // honor explicit endpoint hints
        for (const auto& [slot, want] : hints_.slot_endpoints) {
            std::vector<NodeId> got;
            if (slot_edges.count(slot)) {
                for (const auto& se : slot_edges.at(slot)) got.push_back(se.other);
            }
            std::vector<NodeId> w = want;
            std::sort(got.begin(), got.end());
            std::sort(w.begin(), w.end());
            if (got != w) return;
        }
        emit(slot_edges);
    }

    bool assign_group_edges(int pid, NodeId nid, std::vector<std::size_t> remaining,
                            std::set<NodeId>& used_h,
                            std::map<int, std::vector<SlotEdge>>& slot_edges) {
        const NodePlan& np = plan_.nodes.at(pid);
        // templates never mix via-H and plain bundles on one node
        bool any_via = false;
        for (std::size_t gi : np.group_edges) any_via |= pattern_.edges[gi].via_h;
        // build the wire records (resolving via-H continuations) first
        std::vector<SlotEdge> wires;
        for (std::size_t ei : remaining) {
            NodeId other =
                d_.edges[ei].first == nid ? d_.edges[ei].second : d_.edges[ei].first;
            if (any_via) {
                if (!d_.has_node(other) || d_.node(other).kind != NodeKind::H) return false;
                if (used_.count(other) || used_h.count(other)) return false;
                NodeId cont = 0;
                bool found = false;
                for (NodeId nb : d_.neighbors(other)) {
                    if (!found && nb == nid) {
                        found = true;  // skip the wire back to us once
                        continue;
                    }
                    cont = nb;
                }
                if (d_.degree(other) != 2) return false;
                if (used_.count(cont) || used_h.count(cont)) return false;
                used_h.insert(other);
                wires.push_back(SlotEdge{ei, cont, other, true});
            } else {
                if (used_.count(other)) return false;
                wires.push_back(SlotEdge{ei, other, 0, false});
            }
        }
        if (np.group_edges.size() == 1) {
            int slot = pattern_.edges[np.group_edges[0]].b;
            if (pattern_.edges[np.group_edges[0]].one_or_more && wires.empty()) return false;
            auto& out = slot_edges[slot];
            out.insert(out.end(), wires.begin(), wires.end());
            return true;
        }
        // several bundles on one node: split by endpoint hints, defaulting to
        // the first bundle
        std::vector<int> slots;
        for (std::size_t gi : np.group_edges) slots.push_back(pattern_.edges[gi].b);
        std::map<int, std::vector<NodeId>> want;
        for (int s : slots) {
            auto it = hints_.slot_endpoints.find(s);
            if (it != hints_.slot_endpoints.end()) want[s] = it->second;
        }
        for (const SlotEdge& w : wires) {
            int target = slots.front();
            for (int s : slots) {
                auto it = want.find(s);
                if (it == want.end()) continue;
                auto pos = std::find(it->second.begin(), it->second.end(), w.other);
                if (pos != it->second.end()) {
                    it->second.erase(pos);
                    target = s;
                    break;
                }
            }
            slot_edges[target].push_back(w);
        }
        for (std::size_t gi : np.group_edges) {
            if (pattern_.edges[gi].one_or_more &&
                slot_edges[pattern_.edges[gi].b].empty()) {
                return false;
            }
        }
        return true;
    }

    void emit(const std::map<int, std::vector<SlotEdge>>& slot_edges) {
        std::ostringstream sig;
        std::vector<NodeId> ids;
        for (const auto& [pid, nid] : assign_) ids.push_back(nid);
        std::sort(ids.begin(), ids.end());
        for (NodeId n : ids) sig << n << ",";
        sig << "|";
        for (const auto& [slot, edges] : slot_edges) {
            std::vector<std::size_t> eis;
            for (const auto& se : edges) eis.push_back(se.edge_index);
            std::sort(eis.begin(), eis.end());
            sig << slot << ":";
            for (auto e : eis) sig << e << ",";
            sig << ";";
        }
        if (!seen_.insert(sig.str()).second) return;
        RuleMatch m;
        m.rule = tmpl_.id;
        m.reversed = reversed_;
        m.color_swapped = swapped_;
        m.nodes = assign_;
        m.angles = angles_;
        m.slot_edges = slot_edges;
        matches_.push_back(std::move(m));
    }

    const Diagram& d_;
    const RuleTemplate& tmpl_;
    bool reversed_;
    const Pattern& pattern_;
    PatternPlan plan_;
    MatchHints hints_;
    bool swapped_ = false;
    std::map<NodeId, std::vector<std::size_t>> incidence_;
    std::map<int, NodeId> assign_;
    std::set<NodeId> used_;
    std::map<std::string, Phase> angles_;
    std::set<std::string> seen_;
    std::vector<RuleMatch> matches_;
};

Phase pattern_phase(const PatternNode& pn, const std::map<std::string, Phase>& angles,
                    const std::string& rule_name) {
    switch (pn.phase_kind) {
        case PatternNode::PhaseKind::kNone:
            return Phase();
        case PatternNode::PhaseKind::kConst:
            return pn.const_phase;
        case PatternNode::PhaseKind::kVar: {
            auto it = angles.find(pn.var);
            if (it == angles.end()) {
                throw std::invalid_argument("rule " + rule_name +
                                            ": unbound parameter " + pn.var);
            }
            return it->second;
        }
        case PatternNode::PhaseKind::kExpr:
            return pn.expr.eval(angles);
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::vector<int> Pattern::slots() const {
    std::set<int> s;
    for (const PatternEdge& pe : edges) {
        if (pe.a < 0) s.insert(pe.a);
        if (pe.b < 0) s.insert(pe.b);
    }
    std::vector<int> out(s.begin(), s.end());
    std::sort(out.begin(), out.end(), [](int a, int b) { return -a < -b; });
    return out;
}

std::string rule_name(RuleId id) { return info(id).name; }

RuleId rule_from_name(const std::string& name) {
    for (const auto& ri : kRuleInfos) {
        if (name == ri.name) return ri.id;
    }
    if (name == "EUp") return RuleId::kEUp;
    if (name == "IVp") return RuleId::kIVp;
    throw std::invalid_argument("unknown rule name: " + name);
}

const RuleTemplate& rule_template(RuleId id) {
    static std::map<RuleId, RuleTemplate> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(id);
    if (it == cache.end()) {
        it = cache.emplace(id, parse_template(id, data::file(info(id).file))).first;
    }
    return it->second;
}

bool rule_in_set(RuleId id, const std::string& set) {
    return rule_template(id).sets.count(set) != 0;
}

std::vector<RuleId> rules_in_set(const std::string& set) {
    std::vector<RuleId> out;
    for (const auto& ri : kRuleInfos) {
        if (rule_in_set(ri.id, set)) out.push_back(ri.id);
    }
    return out;
}

bool rule_is_nonlinear(RuleId id) { return rule_template(id).nonlinear; }

double RuleAParams::constraint_residual() const {
    const Complex i(0.0, 1.0);
    Complex lhs = 2.0 * std::exp(i * theta3) * std::cos(gamma);
    Complex rhs = std::exp(i * theta1) * std::cos(alpha) +
                  std::exp(i * theta2) * std::cos(beta);
    return std::abs(lhs - rhs);
}

RuleAParams RuleAParams::sample(Prng& rng) {
    RuleAParams p;
    p.alpha = rng.next_angle();
    p.beta = rng.next_angle();
    p.theta1 = rng.next_angle();
    p.theta2 = rng.next_angle();
    const Complex i(0.0, 1.0);
    Complex c = (std::exp(i * p.theta1) * std::cos(p.alpha) +
                 std::exp(i * p.theta2) * std::cos(p.beta)) /
                2.0;
    double t3 = safe_arg(c);
    if (t3 < 0.0) t3 += kTwoPi;
    p.theta3 = t3;
    p.gamma = std::acos(std::min(1.0, std::abs(c)));
    return p;
}

std::map<std::string, Phase> RuleAParams::bindings() const {
    return {
        {"a", Phase::radians(alpha)},   {"b", Phase::radians(beta)},
        {"g", Phase::radians(gamma)},   {"t1", Phase::radians(theta1)},
        {"t2", Phase::radians(theta2)}, {"t3", Phase::radians(theta3)},
    };
}

std::vector<RuleMatch> find_matches(const Diagram& d, RuleId rule, bool reversed,
                                    const MatchHints& hints) {
    return find_matches(d, rule_template(rule), reversed, hints);
}

std::vector<RuleMatch> find_matches(const Diagram& d, const RuleTemplate& tmpl,
                                    bool reversed, const MatchHints& hints) {
    Matcher m(d, tmpl, reversed, hints);
    return m.run();
}

ApplyResult apply_rule(const Diagram& d, const RuleMatch& match) {
    return apply_rule(d, rule_template(match.rule), match);
}

ApplyResult apply_rule(const Diagram& d, const RuleTemplate& tmpl,
                       const RuleMatch& match) {
    const Pattern& dst = match.reversed ? tmpl.lhs : tmpl.rhs;
    Diagram nd = d;

    // endpoints per slot, captured before any removal
    std::map<int, std::vector<NodeId>> endpoints;
    for (const auto& [slot, edges] : match.slot_edges) {
        for (const SlotEdge& se : edges) endpoints[slot].push_back(se.other);
    }
    for (const auto& [pid, nid] : match.nodes) nd.remove_node(nid);
    for (const auto& [slot, edges] : match.slot_edges) {
        for (const SlotEdge& se : edges) {
            if (se.via_h) nd.remove_node(se.h_node);
        }
    }

    std::map<int, NodeId> produced;
    for (const auto& [pid, pn] : dst.nodes) {
        NodeKind k = effective_kind(pn.kind, match.color_swapped);
        produced[pid] = nd.add_node(k, pattern_phase(pn, match.angles, tmpl.name));
    }
    for (const PatternEdge& pe : dst.edges) {
        if (pe.a >= 0 && pe.b >= 0) {
            // replacement-side bundles materialize as a single wire
            nd.add_edge(produced.at(pe.a), produced.at(pe.b));
            continue;
        }
        if (pe.a < 0 && pe.b < 0) {
            const auto& e1 = endpoints.at(pe.a);
            const auto& e2 = endpoints.at(pe.b);
            if (e1.size() != 1 || e2.size() != 1) {
                throw std::logic_error("rule " + tmpl.name + ": slot join arity");
            }
            nd.add_edge(e1[0], e2[0]);
            continue;
        }
        NodeId owner = produced.at(pe.a);
        auto it = endpoints.find(pe.b);
        const std::vector<NodeId> eps =
            it == endpoints.end() ? std::vector<NodeId>{} : it->second;
        if (pe.group) {
            for (NodeId ep : eps) {
                if (pe.via_h) {
                    NodeId h = nd.add_node(NodeKind::H);
                    nd.add_edge(owner, h);
                    nd.add_edge(h, ep);
                } else {
                    nd.add_edge(owner, ep);
                }
            }
        } else {
            if (eps.size() != 1) {
                throw std::logic_error("rule " + tmpl.name + ": slot arity mismatch");
            }
            nd.add_edge(owner, eps[0]);
        }
    }
    return ApplyResult{std::move(nd), std::move(produced)};
}

Diagram instantiate_pattern(const Pattern& p,
                            const std::map<std::string, Phase>& bindings,
                            const std::map<int, int>& group_counts) {
    Diagram d;
    std::map<int, NodeId> ids;
    for (const auto& [pid, pn] : p.nodes) {
        ids[pid] = d.add_node(pn.kind, pattern_phase(pn, bindings, "pattern"));
    }
    // internal edges
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const PatternEdge& pe = p.edges[i];
        if (pe.b < 0 || pe.a < 0) continue;
        int k = 1;
        if (pe.group) {
            auto it = group_counts.find(static_cast<int>(i));
            k = it != group_counts.end() ? it->second : (pe.one_or_more ? 1 : 0);
        }
        for (int j = 0; j < k; ++j) d.add_edge(ids.at(pe.a), ids.at(pe.b));
    }
    // boundary wires in slot order
    for (int slot : p.slots()) {
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
            const PatternEdge& pe = p.edges[i];
            if (pe.b != slot && !(pe.a == slot && pe.b < 0)) continue;
            if (pe.a < 0 && pe.b < 0) {
                // slot-to-slot wire: a single bare wire owned by the smaller slot
                if (slot != std::max(pe.a, pe.b)) continue;
                NodeId o1 = d.add_output();
                NodeId o2 = d.add_output();
                d.add_edge(o1, o2);
                continue;
            }
            int k = 1;
            if (pe.group) {
                auto it = group_counts.find(slot);
                k = it != group_counts.end() ? it->second : (pe.one_or_more ? 1 : 0);
            }
            for (int j = 0; j < k; ++j) {
                NodeId out = d.add_output();
                if (pe.via_h) {
                    NodeId h = d.add_node(NodeKind::H);
                    d.add_edge(ids.at(pe.a), h);
                    d.add_edge(h, out);
                } else {
                    d.add_edge(ids.at(pe.a), out);
                }
            }
        }
    }
    return d;
}

AuditReport soundness_audit(RuleId rule, int samples, std::uint64_t seed, double tol) {
    const RuleTemplate& tmpl = rule_template(rule);
    AuditReport rep;
    rep.rule = rule;
    rep.samples = samples;
    rep.seed = seed;
    rep.tol = tol;
    Prng rng(seed);
    for (int s = 0; s < samples; ++s) {
        std::map<std::string, Phase> bindings;
        if (tmpl.constrained) {
            bindings = RuleAParams::sample(rng).bindings();
        } else {
            for (const auto& v : tmpl.params) {
                bindings[v] = tmpl.basis_params.count(v)
                                  ? Phase::exact(static_cast<std::int64_t>(rng.next_below(2)))
                                  : Phase::radians(rng.next_angle());
            }
        }
        std::map<int, int> counts;
        auto draw_counts = [&](const Pattern& p) {
            for (std::size_t i = 0; i < p.edges.size(); ++i) {
                const PatternEdge& pe = p.edges[i];
                if (!pe.group) continue;
                int key = pe.b < 0 ? pe.b : static_cast<int>(i);
                if (counts.count(key)) continue;
                counts[key] = pe.one_or_more
                                  ? 1 + static_cast<int>(rng.next_below(3))
                                  : static_cast<int>(rng.next_below(4));
            }
        };
        draw_counts(tmpl.lhs);
        draw_counts(tmpl.rhs);
        Diagram l = instantiate_pattern(tmpl.lhs, bindings, counts);
        Diagram r = instantiate_pattern(tmpl.rhs, bindings, counts);
        double res = residual(interpret(l), interpret(r));
        rep.max_residual = std::max(rep.max_residual, res);
        if (!(res <= tol)) {
            std::ostringstream os;
            os << "bindings:";
            for (const auto& [v, ph] : bindings) os << " " << v << "=" << ph.str();
            for (const auto& [k, c] : counts) os << " count[" << k << "]=" << c;
            rep.failures.push_back(AuditFailure{s, res, os.str()});
        }
    }
    return rep;
}

}  // namespace zx
