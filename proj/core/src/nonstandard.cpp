#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "zx/data.hpp"
#include "zx/semantics.hpp"

namespace zx {

namespace {

NodeKind kind_from(const std::string& s) {
    if (s == "Z") return NodeKind::Z;
    if (s == "X") return NodeKind::X;
    throw std::runtime_error("doubling table: spider image kind must be Z or X");
}

DoublingTable::SpiderImage image_from(const nlohmann::json& j) {
    DoublingTable::SpiderImage img;
    img.layer1 = kind_from(j.at("layer1").at("kind").get<std::string>());
    img.layer2 = kind_from(j.at("layer2").at("kind").get<std::string>());
    auto mode = [](const nlohmann::json& lj) {
        std::string p = lj.at("phase").get<std::string>();
        if (p == "same") return false;
        if (p == "negated") return true;
        throw std::runtime_error("doubling table: phase mode must be 'same' or 'negated'");
    };
    img.negate1 = mode(j.at("layer1"));
    img.negate2 = mode(j.at("layer2"));
    return img;
}

}  // namespace

DoublingTable DoublingTable::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DoublingTable t;
    t.z = image_from(j.at("spiders").at("Z"));
    t.x = image_from(j.at("spiders").at("X"));
    std::string h = j.at("h_box").get<std::string>();
    if (h == "cross")
        t.h_crosses = true;
    else if (h == "parallel")
        t.h_crosses = false;
    else
        throw std::runtime_error("doubling table: h_box must be 'cross' or 'parallel'");
    t.loop_images = j.at("loop_images").get<int>();
    return t;
}

const DoublingTable& DoublingTable::bundled() {
    static const DoublingTable t = from_json(data::file("nonstandard/doubling.json"));
    return t;
}

namespace {

/// One end of a doubled wire segment: (edge, side, layer) packed into an id.
using Token = std::size_t;
Token token(std::size_t edge, int side, int layer) {
    return (edge * 2 + static_cast<std::size_t>(side)) * 2 + static_cast<std::size_t>(layer - 1);
}
Token mate(Token t) { return t ^ 2; }  // same edge & layer, other side

}  // namespace

Diagram double_diagram(const Diagram& d, const DoublingTable& table) {
    std::string err = d.validate();
    if (!err.empty()) throw std::invalid_argument("double_diagram: " + err);

    Diagram out;

    // Images of non-H nodes on both layers.
    std::map<NodeId, std::pair<NodeId, NodeId>> image;
    for (const auto& [id, n] : d.nodes) {
        switch (n.kind) {
            case NodeKind::H:
                break;
            case NodeKind::B: {
                NodeId b1 = out.add_node(NodeKind::B);
                NodeId b2 = out.add_node(NodeKind::B);
                image[id] = {b1, b2};
                break;
            }
            case NodeKind::Z:
            case NodeKind::X: {
                const auto& img = n.kind == NodeKind::Z ? table.z : table.x;
                NodeId n1 = out.add_node(img.layer1, img.negate1 ? -n.phase : n.phase);
                NodeId n2 = out.add_node(img.layer2, img.negate2 ? -n.phase : n.phase);
                image[id] = {n1, n2};
                break;
            }
        }
    }
    for (NodeId b : d.inputs) {
        out.inputs.push_back(image.at(b).first);
        out.inputs.push_back(image.at(b).second);
    }
    for (NodeId b : d.outputs) {
        out.outputs.push_back(image.at(b).first);
        out.outputs.push_back(image.at(b).second);
    }

    // Each original wire end is either attached to a doubled node or spliced
    // through an H box to the continuing wire on the other (or same) layer.
    std::map<Token, NodeId> attach;
    std::map<Token, Token> partner;
    std::map<NodeId, std::vector<std::pair<std::size_t, int>>> h_ends;

    for (std::size_t e = 0; e < d.edges.size(); ++e) {
        NodeId side_node[2] = {d.edges[e].first, d.edges[e].second};
        for (int s = 0; s < 2; ++s) {
            const Node& n = d.node(side_node[s]);
            if (n.kind == NodeKind::H) {
                h_ends[side_node[s]].push_back({e, s});
            } else {
                attach[token(e, s, 1)] = image.at(side_node[s]).first;
                attach[token(e, s, 2)] = image.at(side_node[s]).second;
            }
        }
    }
    for (const auto& [h, ends] : h_ends) {
        if (ends.size() != 2) throw std::invalid_argument("H box must have degree 2");
        auto [e1, s1] = ends[0];
        auto [e2, s2] = ends[1];
        int l2a = table.h_crosses ? 2 : 1;
        int l2b = table.h_crosses ? 1 : 2;
        partner[token(e1, s1, 1)] = token(e2, s2, l2a);
        partner[token(e2, s2, l2a)] = token(e1, s1, 1);
        partner[token(e1, s1, 2)] = token(e2, s2, l2b);
        partner[token(e2, s2, l2b)] = token(e1, s1, 2);
    }

    // Trace each doubled wire from one attachment to the other.
    std::set<Token> visited;
    for (const auto& [t0, node0] : attach) {
        if (visited.count(t0)) continue;
        visited.insert(t0);
        Token u = mate(t0);
        while (!attach.count(u)) {
            visited.insert(u);
            u = partner.at(u);
            visited.insert(u);
            u = mate(u);
        }
        visited.insert(u);
        out.add_edge(node0, attach.at(u));
    }

    // Remaining segments belong to closed all-H cycles.
    for (std::size_t e = 0; e < d.edges.size(); ++e) {
        for (int s = 0; s < 2; ++s) {
            for (int l = 1; l <= 2; ++l) {
                Token t0 = token(e, s, l);
                if (visited.count(t0) || attach.count(t0)) continue;
                Token u = t0;
                do {
                    visited.insert(u);
                    visited.insert(mate(u));
                    u = partner.at(mate(u));
                } while (u != t0);
                ++out.loops;
            }
        }
    }

    out.loops += d.loops * static_cast<std::uint32_t>(table.loop_images);
    return out;
}

Matrix interpret_nonstandard(const Diagram& d, const DoublingTable& table) {
    return interpret(double_diagram(d, table));
}

}  // namespace zx
