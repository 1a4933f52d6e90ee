#include "zx/derivations.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "zx/data.hpp"
#include "zx/matrix.hpp"
#include "zx/rules.hpp"
#include "zx/semantics.hpp"

namespace zx {

namespace {

using nlohmann::json;

NodeKind kind_from_string(const std::string& k, const std::string& where) {
    if (k == "Z") return NodeKind::Z;
    if (k == "X") return NodeKind::X;
    if (k == "H") return NodeKind::H;
    throw std::runtime_error(where + ": unknown node kind '" + k + "'");
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---- script JSON ------------------------------------------------------------

ScriptDiagram parse_script_diagram(const json& j, const std::string& where) {
    if (!j.is_object()) throw std::runtime_error(where + ": expected an object");
    ScriptDiagram d;
    std::set<std::string> seen;
    for (const json& nj : j.value("nodes", json::array())) {
        ScriptDiagram::Node n;
        n.label = nj.at("label").get<std::string>();
        n.kind = nj.at("kind").get<std::string>();
        if (!seen.insert(n.label).second)
            throw std::runtime_error(where + ": duplicate label '" + n.label + "'");
        if (n.kind != "Z" && n.kind != "X" && n.kind != "H" && n.kind != "in" &&
            n.kind != "out")
            throw std::runtime_error(where + ": unknown node kind '" + n.kind + "'");
        bool spider = n.kind == "Z" || n.kind == "X";
        if (nj.contains("phase")) {
            if (!spider)
                throw std::runtime_error(where + ": phase on non-spider '" + n.label + "'");
            n.phase = AngleExpr::parse(nj.at("phase").get<std::string>());
        } else if (spider) {
            n.phase = AngleExpr::parse("0");
        }
        d.nodes.push_back(std::move(n));
    }
    for (const json& ej : j.value("edges", json::array())) {
        if (!ej.is_array() || ej.size() != 2)
            throw std::runtime_error(where + ": edge must be a two-element array");
        std::string a = ej[0].get<std::string>();
        std::string b = ej[1].get<std::string>();
        for (const std::string& l : {a, b})
            if (!seen.count(l))
                throw std::runtime_error(where + ": edge references unknown label '" + l + "'");
        d.edges.emplace_back(std::move(a), std::move(b));
    }
    d.loops = j.value("loops", 0);
    return d;
}

std::map<int, std::string> parse_id_map(const json& j, const std::string& where) {
    std::map<int, std::string> m;
    for (auto it = j.begin(); it != j.end(); ++it) {
        try {
            m[std::stoi(it.key())] = it.value().get<std::string>();
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(where + ": key '" + it.key() + "' is not an integer");
        }
    }
    return m;
}

// ---- lemma/bridge statements as rewrite templates ---------------------------

PatternNode to_pattern_node(const ScriptDiagram::Node& n) {
    PatternNode pn;
    pn.kind = kind_from_string(n.kind, "pattern");
    if (n.kind == "H") {
        pn.phase_kind = PatternNode::PhaseKind::kNone;
        return pn;
    }
    std::vector<std::string> vars = n.phase.variables();
    if (vars.empty() && !n.phase.has_calls()) {
        pn.phase_kind = PatternNode::PhaseKind::kConst;
        pn.const_phase = n.phase.eval({});
    } else if (vars.size() == 1 && !n.phase.has_calls() && n.phase.text() == vars[0]) {
        pn.phase_kind = PatternNode::PhaseKind::kVar;
        pn.var = vars[0];
    } else {
        pn.phase_kind = PatternNode::PhaseKind::kExpr;
        pn.expr = n.phase;
    }
    return pn;
}

/// Boundary labels (in `lhs` order of appearance) become slots -1, -2, …;
/// interior nodes become pattern ids 1, 2, … per side.
Pattern side_pattern(const ScriptDiagram& side, const std::map<std::string, int>& slot_ids,
                     const std::string& name) {
    if (side.loops != 0)
        throw std::invalid_argument(name + ": statement sides cannot carry closed loops");
    Pattern p;
    std::map<std::string, int> ids;
    int next = 1;
    for (const auto& n : side.nodes) {
        if (n.kind == "in" || n.kind == "out") {
            auto it = slot_ids.find(n.label);
            if (it == slot_ids.end())
                throw std::invalid_argument(name + ": boundary label '" + n.label +
                                            "' missing from the other side");
            ids[n.label] = it->second;
            continue;
        }
        ids[n.label] = next;
        p.nodes[next] = to_pattern_node(n);
        ++next;
    }
    for (const auto& [a, b] : side.edges) {
        PatternEdge pe;
        pe.a = ids.at(a);
        pe.b = ids.at(b);
        if (pe.a < 0 && pe.b >= 0) std::swap(pe.a, pe.b);
        p.edges.push_back(pe);
    }
    return p;
}

RuleTemplate statement_template(const std::string& name,
                                const std::vector<std::string>& params,
                                const ScriptDiagram& lhs, const ScriptDiagram& rhs) {
    std::map<std::string, int> slot_ids;
    int next_slot = -1;
    for (const auto& n : lhs.nodes) {
        if (n.kind == "in" || n.kind == "out") slot_ids[n.label] = next_slot--;
    }
    std::set<std::string> rhs_boundary;
    for (const auto& n : rhs.nodes)
        if (n.kind == "in" || n.kind == "out") rhs_boundary.insert(n.label);
    if (rhs_boundary.size() != slot_ids.size())
        throw std::invalid_argument(name + ": sides disagree on boundary labels");
    for (const auto& [label, id] : slot_ids)
        if (!rhs_boundary.count(label))
            throw std::invalid_argument(name + ": boundary label '" + label +
                                        "' missing from the right-hand side");

    RuleTemplate t;
    t.name = name;
    t.display = name;
    t.params = params;
    t.lhs = side_pattern(lhs, slot_ids, name);
    t.rhs = side_pattern(rhs, slot_ids, name);
    auto has_calls = [](const Pattern& p) {
        for (const auto& [id, pn] : p.nodes)
            if (pn.phase_kind == PatternNode::PhaseKind::kExpr && pn.expr.has_calls())
                return true;
        return false;
    };
    t.nonlinear = has_calls(t.lhs) || has_calls(t.rhs);
    return t;
}

// ---- bridge statements -------------------------------------------------------

ScriptDiagram diagram_from_json_text(const char* text) {
    return parse_script_diagram(json::parse(text), "bridge");
}

/// Statements justified by a registration-time numeric identity check (and
/// re-checked semantically at every use by the replay's per-step assert).
std::vector<BridgeStatement> make_bridge_statements() {
    std::vector<BridgeStatement> out;

    // A two-branch star on a plain junction equals a straight line with a
    // quarter-turn hub, with the phase bookkeeping carried by two zero-arity
    // spiders; the line angles come from the three-rotation conversion at a
    // quarter-turn middle angle.
    {
        BridgeStatement b;
        b.name = "branch-star-to-line";
        b.params = {"a1", "a3"};
        b.lhs = diagram_from_json_text(R"json({
          "nodes": [
            {"label": "w", "kind": "out"},
            {"label": "hub", "kind": "X"},
            {"label": "p", "kind": "Z", "phase": "a1"},
            {"label": "q", "kind": "Z", "phase": "a3"},
            {"label": "s", "kind": "Z",
             "phase": "eu_b1(a1, pi/2, a3) + eu_b3(a1, pi/2, a3)"}
          ],
          "edges": [["hub","w"], ["hub","p"], ["hub","q"]]
        })json");
        b.rhs = diagram_from_json_text(R"json({
          "nodes": [
            {"label": "w", "kind": "out"},
            {"label": "mid", "kind": "Z", "phase": "pi/2"},
            {"label": "end", "kind": "X",
             "phase": "eu_b1(a1, pi/2, a3) + eu_b3(a1, pi/2, a3)"},
            {"label": "s", "kind": "Z", "phase": "a1 + a3"}
          ],
          "edges": [["mid","w"], ["mid","end"]]
        })json");
        out.push_back(std::move(b));
    }

    // Two opposite-colour dots on a hub merge into one dot whose angle is the
    // arctangent product of the half-angles; the two original angles move to
    // zero-arity spiders and the hub loses a quarter turn.
    {
        BridgeStatement b;
        b.name = "branch-merge";
        b.params = {"f", "a", "b"};
        b.lhs = diagram_from_json_text(R"json({
          "nodes": [
            {"label": "w1", "kind": "in"},
            {"label": "w2", "kind": "out"},
            {"label": "hub", "kind": "Z", "phase": "f"},
            {"label": "ma", "kind": "X", "phase": "a"},
            {"label": "mb", "kind": "X", "phase": "b"},
            {"label": "s", "kind": "Z", "phase": "atan_merge(a, b)"},
            {"label": "wz", "kind": "Z", "phase": "0"},
            {"label": "wx", "kind": "X", "phase": "pi"}
          ],
          "edges": [["hub","w1"], ["hub","w2"], ["hub","ma"], ["hub","mb"],
                    ["wz","wx"]]
        })json");
        b.rhs = diagram_from_json_text(R"json({
          "nodes": [
            {"label": "w1", "kind": "in"},
            {"label": "w2", "kind": "out"},
            {"label": "hub", "kind": "Z", "phase": "f - pi/2"},
            {"label": "mt", "kind": "X", "phase": "atan_merge(a, b)"},
            {"label": "sa", "kind": "Z", "phase": "a"},
            {"label": "sb", "kind": "Z", "phase": "b"}
          ],
          "edges": [["hub","w1"], ["hub","w2"], ["hub","mt"]]
        })json");
        out.push_back(std::move(b));
    }

    return out;
}

const std::map<std::string, BridgeStatement>& bridge_table() {
    static const std::map<std::string, BridgeStatement> table = [] {
        std::map<std::string, BridgeStatement> m;
        Prng rng(0x9e3779b97f4a7c15ull);
        for (BridgeStatement& b : make_bridge_statements()) {
            // registration check: the two sides agree exactly on random samples
            for (int i = 0; i < 50; ++i) {
                std::map<std::string, Phase> env;
                for (const std::string& p : b.params)
                    env[p] = Phase::radians(rng.next_angle());
                Matrix l = interpret(b.lhs.build(env));
                Matrix r = interpret(b.rhs.build(env));
                if (residual(l, r) > 1e-10)
                    throw std::logic_error("bridge statement '" + b.name +
                                           "' failed its registration identity check");
            }
            std::string key = b.name;
            m.emplace(std::move(key), std::move(b));
        }
        return m;
    }();
    return table;
}

// ---- replay session ----------------------------------------------------------

struct Session {
    const Corpus* corpus = nullptr;
    double tol = 1e-9;
    std::set<std::string> verified;
    std::set<std::string> failed;
    std::set<std::string> in_progress;
    /// script → axiom names used across its expanded dependency tree;
    /// bridge steps contribute "bridge:<name>" entries.
    std::map<std::string, std::set<std::string>> closure;
};

Session make_session(const Corpus& corpus, double tol) {
    Session sess;
    sess.corpus = &corpus;
    sess.tol = tol;
    std::function<void(const std::string&)> prime = [&](const std::string& name) {
        if (sess.closure.count(name)) return;
        sess.closure[name] = {};
        std::set<std::string> acc;
        for (const ScriptStep& st : corpus.at(name).steps) {
            if (st.is_lemma) {
                prime(st.rule);
                const auto& sub = sess.closure.at(st.rule);
                acc.insert(sub.begin(), sub.end());
            } else if (st.is_bridge) {
                acc.insert("bridge:" + st.rule);
            } else {
                acc.insert(st.rule);
            }
        }
        sess.closure[name] = std::move(acc);
    };
    for (const std::string& name : corpus.order()) prime(name);
    return sess;
}

ProofReport replay_impl(const Script& s, const std::map<std::string, Phase>& bindings,
                        Session& sess, const ReplayObserver& observe);

/// Verifies a dependency once per session at deterministic probe bindings.
bool ensure_verified(const std::string& name, Session& sess, std::string& why) {
    if (sess.verified.count(name)) return true;
    if (sess.failed.count(name)) {
        why = "dependency '" + name + "' previously failed verification";
        return false;
    }
    if (!sess.corpus->contains(name)) {
        why = "unknown lemma '" + name + "'";
        return false;
    }
    if (!sess.in_progress.insert(name).second) {
        why = "cyclic lemma reference through '" + name + "'";
        return false;
    }
    const Script& dep = sess.corpus->at(name);
    Prng rng(fnv1a(name));
    int n = dep.params.empty() ? 1 : std::max(1, std::min(3, dep.samples == 0 ? 3 : dep.samples));
    bool ok = true;
    for (int i = 0; ok && i < n; ++i) {
        ProofReport r = replay_impl(dep, sample_bindings(dep, rng), sess, nullptr);
        if (!r.ok) {
            why = "lemma '" + name + "' failed verification: " + r.error;
            ok = false;
        }
    }
    sess.in_progress.erase(name);
    (ok ? sess.verified : sess.failed).insert(name);
    return ok;
}

ProofReport replay_impl(const Script& s, const std::map<std::string, Phase>& bindings,
                        Session& sess, const ReplayObserver& observe) {
    ProofReport rep;
    rep.script = s.name;

    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.error = msg;
        return rep;
    };

    for (const std::string& p : s.params)
        if (!bindings.count(p)) return fail("unbound-parameter: '" + p + "'");

    std::map<std::string, NodeId> labels;
    Diagram current;
    Diagram target;
    try {
        current = s.initial.build(bindings, &labels);
        target = s.target.build(bindings, nullptr);
    } catch (const std::exception& e) {
        return fail(std::string("endpoint instantiation failed: ") + e.what());
    }
    Matrix ref = interpret(current);
    if (observe) observe(-1, current, labels);

    for (std::size_t k = 0; k < s.steps.size(); ++k) {
        const ScriptStep& st = s.steps[k];
        std::ostringstream at;
        at << "step " << k << " (" << st.rule << (st.reversed ? ", reversed" : "") << ")";

        // resolve the rewrite template
        const RuleTemplate* tmpl = nullptr;
        RuleTemplate synthesized;
        if (st.is_bridge) {
            rep.rules_used.insert("bridge:" + st.rule);
            if (!s.primitive_set.empty())
                return fail(at.str() + ": bridge steps are not allowed in a script "
                                       "restricted to primitive set '" + s.primitive_set + "'");
            try {
                const BridgeStatement& b = bridge_statement(st.rule);
                synthesized = statement_template(b.name, b.params, b.lhs, b.rhs);
            } catch (const std::exception& e) {
                return fail(at.str() + ": " + e.what());
            }
            tmpl = &synthesized;
        } else if (st.is_lemma) {
            std::string why;
            if (!ensure_verified(st.rule, sess, why)) return fail(at.str() + ": " + why);
            const Script& dep = sess.corpus->at(st.rule);
            for (const std::string& r : sess.closure.at(st.rule)) rep.rules_used.insert(r);
            try {
                synthesized = statement_template(dep.name, dep.params, dep.initial, dep.target);
            } catch (const std::exception& e) {
                return fail(at.str() + ": " + e.what());
            }
            tmpl = &synthesized;
        } else {
            RuleId id;
            try {
                id = rule_from_name(st.rule);
            } catch (const std::exception&) {
                return fail(at.str() + ": unknown rule");
            }
            rep.rules_used.insert(rule_name(id));
            if (!s.primitive_set.empty() && !rule_in_set(id, s.primitive_set))
                return fail(at.str() + ": rule outside the declared primitive set '" +
                            s.primitive_set + "'");
            tmpl = &rule_template(id);
        }

        // assemble hints from the step's bindings
        MatchHints hints;
        if (st.swap >= 0) {
            hints.color_swapped = st.swap == 1;
            hints.try_color_swapped = false;
        }
        for (const auto& [pid, label] : st.anchors) {
            auto it = labels.find(label);
            if (it == labels.end()) return fail(at.str() + ": unknown label '" + label + "'");
            hints.nodes[pid] = it->second;
        }
        for (const auto& [slot, lbls] : st.slots) {
            for (const std::string& label : lbls) {
                auto it = labels.find(label);
                if (it == labels.end())
                    return fail(at.str() + ": unknown label '" + label + "'");
                hints.slot_endpoints[slot].push_back(it->second);
            }
        }
        for (const auto& [param, expr] : st.angles) {
            try {
                hints.angles[param] = expr.eval(bindings);
            } catch (const std::exception& e) {
                return fail(at.str() + ": angle '" + param + "': " + e.what());
            }
        }

        std::vector<RuleMatch> ms;
        try {
            ms = find_matches(current, *tmpl, st.reversed, hints);
        } catch (const std::exception& e) {
            return fail("step-does-not-match: " + at.str() + ": " + e.what());
        }
        if (static_cast<std::size_t>(st.pick) >= ms.size())
            return fail("step-does-not-match: " + at.str() + ": " +
                        std::to_string(ms.size()) + " candidate(s), pick " +
                        std::to_string(st.pick));

        ApplyResult res;
        try {
            res = apply_rule(current, *tmpl, ms[st.pick]);
        } catch (const std::exception& e) {
            return fail("step-does-not-match: " + at.str() + ": " + e.what());
        }
        current = std::move(res.diagram);

        // carry surviving labels; attach requested names to produced nodes
        for (auto it = labels.begin(); it != labels.end();) {
            if (!current.has_node(it->second)) {
                it = labels.erase(it);
            } else {
                ++it;
            }
        }
        for (const auto& [pid, label] : st.binds) {
            auto it = res.produced.find(pid);
            if (it == res.produced.end())
                return fail(at.str() + ": bind names a pattern id the replacement "
                                       "side does not produce: " + std::to_string(pid));
            labels[label] = it->second;
        }

        double r = residual(interpret(current), ref);
        rep.steps.push_back({static_cast<int>(k), st.rule, r, st.is_bridge});
        rep.max_residual = std::max(rep.max_residual, r);
        if (st.is_bridge) ++rep.bridge_steps;
        if (observe) observe(static_cast<int>(k), current, labels);
        if (r > sess.tol) {
            std::ostringstream os;
            os << "semantic-drift: " << at.str() << ": residual " << r;
            return fail(os.str());
        }
    }

    if (!is_isomorphic(current, target) && !is_isomorphic(current, target, 1e-9))
        return fail("final-mismatch: replayed diagram is not the stated target");

    if (!s.primitive_set.empty()) {
        for (const std::string& r : rep.rules_used) {
            bool bad = r.rfind("bridge:", 0) == 0 ||
                       !rule_in_set(rule_from_name(r), s.primitive_set);
            if (bad)
                return fail("primitive-set-violation: '" + r +
                            "' is outside the declared set '" + s.primitive_set + "'");
        }
    }

    rep.ok = true;
    return rep;
}

Script mutate(const Script& s, std::size_t step, const std::string& param) {
    Script m = s;
    const AngleExpr& e = s.steps[step].angles.at(param);
    m.steps[step].angles[param] = AngleExpr::parse(e.text() + " + 0.1");
    return m;
}

}  // namespace

// ---- ScriptDiagram -----------------------------------------------------------

Diagram ScriptDiagram::build(const std::map<std::string, Phase>& env,
                             std::map<std::string, NodeId>* labels) const {
    Diagram d;
    std::map<std::string, NodeId> ids;
    for (const Node& n : nodes) {
        NodeId id;
        if (n.kind == "in") {
            id = d.add_input();
        } else if (n.kind == "out") {
            id = d.add_output();
        } else if (n.kind == "H") {
            id = d.add_node(NodeKind::H);
        } else {
            id = d.add_node(kind_from_string(n.kind, "diagram"), n.phase.eval(env));
        }
        ids[n.label] = id;
    }
    for (const auto& [a, b] : edges) d.add_edge(ids.at(a), ids.at(b));
    d.loops = static_cast<std::uint32_t>(loops);
    if (labels) *labels = std::move(ids);
    return d;
}

// ---- Script ------------------------------------------------------------------

std::vector<std::string> Script::depends() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const ScriptStep& st : steps)
        if (st.is_lemma && seen.insert(st.rule).second) out.push_back(st.rule);
    return out;
}

Script parse_script(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("script: invalid JSON: ") + e.what());
    }
    Script s;
    try {
        s.name = j.at("name").get<std::string>();
        s.about = j.value("about", "");
        s.source = j.value("source", "");
        for (const json& p : j.value("params", json::array()))
            s.params.push_back(p.get<std::string>());
        if (j.contains("sampling")) {
            for (const auto& [k, v] : j.at("sampling").items())
                s.sampling[k] = v.get<std::string>();
        }
        s.joint_sampling = j.value("joint_sampling", "");
        s.samples = j.value("samples", 0);
        s.primitive_set = j.value("primitive_set", "");
        s.initial = parse_script_diagram(j.at("initial"), s.name + ": initial");
        s.target = parse_script_diagram(j.at("target"), s.name + ": target");
        int idx = 0;
        for (const json& sj : j.value("steps", json::array())) {
            std::string where = s.name + ": step " + std::to_string(idx++);
            ScriptStep st;
            int kinds = sj.contains("rule") + sj.contains("lemma") + sj.contains("bridge");
            if (kinds != 1)
                throw std::runtime_error(where + ": exactly one of rule/lemma/bridge");
            if (sj.contains("rule")) {
                st.rule = sj.at("rule").get<std::string>();
            } else if (sj.contains("lemma")) {
                st.rule = sj.at("lemma").get<std::string>();
                st.is_lemma = true;
            } else {
                st.rule = sj.at("bridge").get<std::string>();
                st.is_bridge = true;
            }
            st.reversed = sj.value("reversed", false);
            if (sj.contains("swap")) st.swap = sj.at("swap").get<bool>() ? 1 : 0;
            st.pick = sj.value("pick", 0);
            if (sj.contains("anchors")) st.anchors = parse_id_map(sj.at("anchors"), where);
            if (sj.contains("binds")) st.binds = parse_id_map(sj.at("binds"), where);
            if (sj.contains("angles")) {
                for (const auto& [k, v] : sj.at("angles").items())
                    st.angles[k] = AngleExpr::parse(v.get<std::string>());
            }
            if (sj.contains("slots")) {
                for (const auto& [k, v] : sj.at("slots").items()) {
                    int slot = std::stoi(k);
                    for (const json& l : v)
                        st.slots[slot].push_back(l.get<std::string>());
                }
            }
            s.steps.push_back(std::move(st));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error("script '" + s.name + "': " + e.what());
    }
    return s;
}

// ---- Corpus ------------------------------------------------------------------

Corpus::Corpus(std::vector<Script> scripts) {
    for (Script& s : scripts) {
        std::string name = s.name;
        if (!scripts_.emplace(name, std::move(s)).second)
            throw std::invalid_argument("corpus: duplicate script name '" + name + "'");
    }
    // Kahn topological sort over lemma dependencies, alphabetical tie-break.
    std::map<std::string, std::set<std::string>> deps;
    std::map<std::string, int> missing;
    for (const auto& [name, s] : scripts_) {
        for (const std::string& d : s.depends()) {
            if (!scripts_.count(d))
                throw std::invalid_argument("corpus: script '" + name +
                                            "' references unknown script '" + d + "'");
            deps[name].insert(d);
        }
        missing[name] = static_cast<int>(deps[name].size());
    }
    std::vector<std::string> ready;
    for (const auto& [name, n] : missing)
        if (n == 0) ready.push_back(name);
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        std::string cur = ready.back();
        ready.pop_back();
        order_.push_back(cur);
        for (auto& [name, ds] : deps) {
            if (ds.erase(cur) && --missing[name] == 0) ready.push_back(name);
        }
    }
    if (order_.size() != scripts_.size())
        throw std::invalid_argument("corpus: cyclic lemma references");
}

const Script& Corpus::at(const std::string& name) const {
    auto it = scripts_.find(name);
    if (it == scripts_.end())
        throw std::out_of_range("corpus: unknown script '" + name + "'");
    return it->second;
}

const Corpus& Corpus::bundled() {
    static const Corpus corpus = [] {
        std::vector<Script> scripts;
        for (const std::string& name : data::list("scripts/"))
            scripts.push_back(parse_script(data::file(name)));
        return Corpus(std::move(scripts));
    }();
    return corpus;
}

// ---- public replay API ---------------------------------------------------------

ProofReport replay(const Script& s, const std::map<std::string, Phase>& bindings,
                   double tol, const Corpus& lemmas) {
    Session sess = make_session(lemmas, tol);
    return replay_impl(s, bindings, sess, nullptr);
}

ProofReport replay_traced(const Script& s, const std::map<std::string, Phase>& bindings,
                          ReplayObserver observe, double tol, const Corpus& lemmas) {
    Session sess = make_session(lemmas, tol);
    return replay_impl(s, bindings, sess, std::move(observe));
}

std::map<std::string, Phase> sample_bindings(const Script& s, Prng& rng) {
    std::map<std::string, Phase> env;
    if (s.joint_sampling == "averaging") {
        env = RuleAParams::sample(rng).bindings();
        for (const std::string& p : s.params)
            if (!env.count(p)) env[p] = Phase::radians(rng.next_angle());
        return env;
    }
    if (!s.joint_sampling.empty())
        throw std::invalid_argument("script '" + s.name + "': unknown joint sampling '" +
                                    s.joint_sampling + "'");
    for (const std::string& p : s.params) {
        auto it = s.sampling.find(p);
        std::string mode = it == s.sampling.end() ? "uniform" : it->second;
        if (mode == "uniform") {
            env[p] = Phase::radians(rng.next_angle());
        } else if (mode == "binary") {
            env[p] = rng.next_below(2) ? Phase::pi() : Phase::zero();
        } else if (mode.rfind("dyadic:", 0) == 0) {
            int k = std::stoi(mode.substr(7));
            if (k < 0 || k > 12)
                throw std::invalid_argument("script '" + s.name +
                                            "': dyadic exponent out of range");
            long long den = 1ll << k;
            long long num = 2 * static_cast<long long>(rng.next_below(
                                    static_cast<std::uint64_t>(den))) + 1;
            env[p] = Phase::exact(num, den);
        } else {
            throw std::invalid_argument("script '" + s.name + "': unknown sampling '" +
                                        mode + "' for parameter '" + p + "'");
        }
    }
    return env;
}

std::vector<ProofReport> audit_derivations(std::uint64_t seed, double tol,
                                           const std::string& only) {
    const Corpus& corpus = Corpus::bundled();
    if (!only.empty() && !corpus.contains(only))
        throw std::invalid_argument("audit: unknown script '" + only + "'");
    std::vector<ProofReport> out;
    Session sess = make_session(corpus, tol);
    for (const std::string& name : corpus.order()) {
        if (!only.empty() && name != only) continue;
        const Script& s = corpus.at(name);
        int n = s.params.empty() ? 1 : (s.samples == 0 ? 20 : s.samples);
        Prng rng(seed ^ fnv1a(name));
        ProofReport agg;
        agg.script = name;
        agg.ok = true;
        for (int i = 0; i < n; ++i) {
            ProofReport r = replay_impl(s, sample_bindings(s, rng), sess, nullptr);
            agg.max_residual = std::max(agg.max_residual, r.max_residual);
            agg.bridge_steps = r.bridge_steps;
            agg.rules_used.insert(r.rules_used.begin(), r.rules_used.end());
            if (i + 1 == n || !r.ok) agg.steps = std::move(r.steps);
            if (!r.ok && agg.error.empty()) {
                agg.ok = false;
                agg.error = n > 1 ? "sample " + std::to_string(i) + ": " + r.error
                                  : r.error;
            }
        }
        out.push_back(std::move(agg));
    }
    return out;
}

MutationReport mutation_audit(std::uint64_t seed, double tol) {
    const Corpus& corpus = Corpus::bundled();
    MutationReport rep;
    Session sess = make_session(corpus, tol);
    for (const std::string& name : corpus.order()) {
        const Script& s = corpus.at(name);
        for (std::size_t k = 0; k < s.steps.size(); ++k) {
            for (const auto& [param, expr] : s.steps[k].angles) {
                Script bad = mutate(s, k, param);
                Prng rng(seed ^ fnv1a(name + "#" + std::to_string(k) + "#" + param));
                ProofReport r = replay_impl(bad, sample_bindings(bad, rng), sess, nullptr);
                MutationOutcome mo;
                mo.script = name;
                mo.step = static_cast<int>(k);
                mo.param = param;
                mo.detected = !r.ok;
                mo.failure = r.error;
                ++rep.attempted;
                if (mo.detected) ++rep.detected;
                rep.outcomes.push_back(std::move(mo));
            }
        }
    }
    return rep;
}

const BridgeStatement& bridge_statement(const std::string& name) {
    const auto& t = bridge_table();
    auto it = t.find(name);
    if (it == t.end()) throw std::out_of_range("unknown bridge statement '" + name + "'");
    return it->second;
}

std::vector<std::string> bridge_catalog() {
    std::vector<std::string> names;
    for (const auto& [name, b] : bridge_table()) names.push_back(name);
    return names;
}

}  // namespace zx
