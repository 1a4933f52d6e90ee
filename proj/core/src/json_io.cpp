#include "zx/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace zx {

namespace {

using ordered_json = nlohmann::ordered_json;

NodeKind parse_kind(const std::string& s) {
    if (s == "Z") return NodeKind::Z;
    if (s == "X") return NodeKind::X;
    if (s == "H") return NodeKind::H;
    if (s == "B") return NodeKind::B;
    throw std::runtime_error("unknown node kind '" + s + "'");
}

Phase parse_phase(const ordered_json& j) {
    if (j.contains("pi_num")) {
        if (!j.contains("pi_den")) throw std::runtime_error("phase with pi_num but no pi_den");
        return Phase::exact(j.at("pi_num").get<std::int64_t>(),
                            j.at("pi_den").get<std::int64_t>());
    }
    if (j.contains("rad")) return Phase::radians(j.at("rad").get<double>());
    throw std::runtime_error("phase must have pi_num/pi_den or rad");
}

ordered_json phase_json(const Phase& p) {
    ordered_json j;
    if (p.is_exact()) {
        j["pi_num"] = p.num();
        j["pi_den"] = p.den();
    } else {
        j["rad"] = p.value();
    }
    return j;
}

}  // namespace

Diagram parse_diagram(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("diagram JSON parse error: ") + e.what());
    }

    Diagram d;
    if (!j.is_object()) throw std::runtime_error("diagram JSON must be an object");

    for (const auto& [key, value] : j.at("nodes").items()) {
        NodeId id = 0;
        try {
            id = static_cast<NodeId>(std::stoul(key));
        } catch (const std::exception&) {
            throw std::runtime_error("node id '" + key + "' is not an integer");
        }
        Node n;
        n.kind = parse_kind(value.at("kind").get<std::string>());
        if (n.kind == NodeKind::Z || n.kind == NodeKind::X) {
            if (!value.contains("phase"))
                throw std::runtime_error("spider node " + key + " is missing its phase");
            n.phase = parse_phase(value.at("phase"));
        } else if (value.contains("phase")) {
            throw std::runtime_error("node " + key + " of kind " + to_string(n.kind) +
                                     " must not carry a phase");
        }
        if (d.nodes.count(id)) throw std::runtime_error("duplicate node id " + key);
        d.nodes[id] = n;
        d.next_id = std::max(d.next_id, id + 1);
    }

    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw std::runtime_error("each edge must be a pair [a,b]");
        d.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    }
    for (const auto& v : j.at("inputs")) d.inputs.push_back(v.get<NodeId>());
    for (const auto& v : j.at("outputs")) d.outputs.push_back(v.get<NodeId>());
    d.loops = j.value("loops", 0u);

    std::string err = d.validate();
    if (!err.empty()) throw std::runtime_error("invalid diagram: " + err);
    return d;
}

std::string serialize_diagram(const Diagram& d) {
    // Canonical ids: dense renumbering in ascending original order.
    std::map<NodeId, NodeId> remap;
    for (const auto& [id, n] : d.nodes) remap[id] = static_cast<NodeId>(remap.size());

    ordered_json j;
    ordered_json ins = ordered_json::array();
    for (NodeId id : d.inputs) ins.push_back(remap.at(id));
    ordered_json outs = ordered_json::array();
    for (NodeId id : d.outputs) outs.push_back(remap.at(id));
    j["inputs"] = ins;
    j["outputs"] = outs;
    j["loops"] = d.loops;

    ordered_json nodes = ordered_json::object();
    for (const auto& [id, n] : d.nodes) {
        ordered_json nj;
        nj["kind"] = to_string(n.kind);
        if (n.kind == NodeKind::Z || n.kind == NodeKind::X) nj["phase"] = phase_json(n.phase);
        nodes[std::to_string(remap.at(id))] = nj;
    }
    j["nodes"] = nodes;

    std::vector<std::pair<NodeId, NodeId>> es;
    es.reserve(d.edges.size());
    for (const auto& [a, b] : d.edges) {
        NodeId x = remap.at(a), y = remap.at(b);
        es.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(es.begin(), es.end());
    ordered_json edges = ordered_json::array();
    for (const auto& [a, b] : es) edges.push_back(ordered_json::array({a, b}));
    j["edges"] = edges;

    return j.dump(2) + "\n";
}

Diagram load_diagram(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open diagram file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_diagram(buf.str());
}

void save_diagram(const Diagram& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write diagram file: " + path);
    out << serialize_diagram(d);
}

}  // namespace zx
