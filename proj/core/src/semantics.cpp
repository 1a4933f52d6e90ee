#include "zx/semantics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace zx {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490392848;

Complex phase_factor(const Phase& p) { return std::polar(1.0, p.value()); }

/// Weight of one node under a full 0/1 assignment of its incident wires.
Complex node_weight(const Node& n, const std::vector<int>& legs) {
    switch (n.kind) {
        case NodeKind::B:
            return Complex(1, 0);
        case NodeKind::H: {
            // degree exactly 2
            return (legs[0] && legs[1]) ? Complex(-kInvSqrt2, 0) : Complex(kInvSqrt2, 0);
        }
        case NodeKind::Z: {
            if (legs.empty()) return Complex(1, 0) + phase_factor(n.phase);
            bool all0 = std::all_of(legs.begin(), legs.end(), [](int v) { return v == 0; });
            bool all1 = std::all_of(legs.begin(), legs.end(), [](int v) { return v == 1; });
            if (all0) return Complex(1, 0);
            if (all1) return phase_factor(n.phase);
            return Complex(0, 0);
        }
        case NodeKind::X: {
            int parity = 0;
            for (int v : legs) parity ^= v;
            Complex base = Complex(1, 0) +
                           phase_factor(n.phase) * (parity ? Complex(-1, 0) : Complex(1, 0));
            return base * std::pow(kInvSqrt2, static_cast<double>(legs.size()));
        }
    }
    return Complex(0, 0);
}

/// Per-node list of incident edge indices (self-loops appear twice).
std::map<NodeId, std::vector<std::size_t>> incidence(const Diagram& d) {
    std::map<NodeId, std::vector<std::size_t>> inc;
    for (const auto& [id, n] : d.nodes) inc[id];  // ensure degree-0 nodes present
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
        inc[d.edges[i].first].push_back(i);
        if (d.edges[i].second != d.edges[i].first) inc[d.edges[i].second].push_back(i);
        else inc[d.edges[i].first].push_back(i);
    }
    return inc;
}

/// Boundary wire slots in row-major bit order: outputs first (leg 0 = MSB),
/// then inputs. Each slot holds the edge index attached to that boundary.
struct BoundaryLayout {
    std::vector<std::size_t> out_slots;
    std::vector<std::size_t> in_slots;
};

BoundaryLayout boundary_layout(const Diagram& d,
                               const std::map<NodeId, std::vector<std::size_t>>& inc) {
    BoundaryLayout lay;
    auto slot_of = [&](NodeId b) {
        const auto& v = inc.at(b);
        if (v.size() != 1) throw std::invalid_argument("boundary node must have degree 1");
        return v[0];
    };
    for (NodeId b : d.outputs) lay.out_slots.push_back(slot_of(b));
    for (NodeId b : d.inputs) lay.in_slots.push_back(slot_of(b));
    return lay;
}

// ---- greedy pairwise contraction -------------------------------------------

struct Tensor {
    std::vector<std::size_t> idx;  ///< wire ids, idx[0] is the MSB of `data`
    std::vector<Complex> data;     ///< size 2^idx.size()

    std::size_t rank() const { return idx.size(); }
};

/// Sum over repeated wire ids inside a single tensor (self-loop traces).
Tensor self_trace(Tensor t) {
    for (;;) {
        // find a repeated index
        std::size_t p = t.idx.size(), q = t.idx.size();
        for (std::size_t i = 0; i < t.idx.size() && p == t.idx.size(); ++i)
            for (std::size_t j = i + 1; j < t.idx.size(); ++j)
                if (t.idx[i] == t.idx[j]) {
                    p = i;
                    q = j;
                    break;
                }
        if (p == t.idx.size()) return t;

        std::size_t r = t.idx.size();
        Tensor out;
        for (std::size_t i = 0; i < r; ++i)
            if (i != p && i != q) out.idx.push_back(t.idx[i]);
        out.data.assign(std::size_t{1} << out.idx.size(), Complex(0, 0));
        for (std::size_t bits = 0; bits < t.data.size(); ++bits) {
            int bp = (bits >> (r - 1 - p)) & 1;
            int bq = (bits >> (r - 1 - q)) & 1;
            if (bp != bq) continue;
            std::size_t obits = 0;
            for (std::size_t i = 0; i < r; ++i) {
                if (i == p || i == q) continue;
                obits = (obits << 1) | ((bits >> (r - 1 - i)) & 1);
            }
            out.data[obits] += t.data[bits];
        }
        t = std::move(out);
    }
}

/// Contract two tensors over all shared wire ids.
Tensor contract_pair(const Tensor& a, const Tensor& b) {
    std::vector<std::size_t> shared;
    for (std::size_t i : a.idx)
        if (std::find(b.idx.begin(), b.idx.end(), i) != b.idx.end()) shared.push_back(i);

    std::vector<std::size_t> afree, bfree;
    for (std::size_t i : a.idx)
        if (std::find(shared.begin(), shared.end(), i) == shared.end()) afree.push_back(i);
    for (std::size_t i : b.idx)
        if (std::find(shared.begin(), shared.end(), i) == shared.end()) bfree.push_back(i);

    Tensor out;
    out.idx = afree;
    out.idx.insert(out.idx.end(), bfree.begin(), bfree.end());
    out.data.assign(std::size_t{1} << out.idx.size(), Complex(0, 0));

    auto pos_in = [](const std::vector<std::size_t>& v, std::size_t x) {
        return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
    };

    std::size_t na = afree.size(), nb = bfree.size(), ns = shared.size();
    for (std::size_t fa = 0; fa < (std::size_t{1} << na); ++fa)
        for (std::size_t fb = 0; fb < (std::size_t{1} << nb); ++fb) {
            Complex acc(0, 0);
            for (std::size_t sh = 0; sh < (std::size_t{1} << ns); ++sh) {
                // assemble bit patterns for a and b
                std::size_t abits = 0;
                for (std::size_t i = 0; i < a.idx.size(); ++i) {
                    int bit;
                    auto sp = std::find(shared.begin(), shared.end(), a.idx[i]);
                    if (sp != shared.end())
                        bit = (sh >> (ns - 1 - static_cast<std::size_t>(sp - shared.begin()))) & 1;
                    else
                        bit = (fa >> (na - 1 - pos_in(afree, a.idx[i]))) & 1;
                    abits = (abits << 1) | static_cast<std::size_t>(bit);
                }
                std::size_t bbits = 0;
                for (std::size_t i = 0; i < b.idx.size(); ++i) {
                    int bit;
                    auto sp = std::find(shared.begin(), shared.end(), b.idx[i]);
                    if (sp != shared.end())
                        bit = (sh >> (ns - 1 - static_cast<std::size_t>(sp - shared.begin()))) & 1;
                    else
                        bit = (fb >> (nb - 1 - pos_in(bfree, b.idx[i]))) & 1;
                    bbits = (bbits << 1) | static_cast<std::size_t>(bit);
                }
                acc += a.data[abits] * b.data[bbits];
            }
            out.data[(fa << nb) | fb] = acc;
        }
    return out;
}

Matrix assemble(const std::vector<Tensor>& finals, Complex scalar, const Diagram& d,
                const BoundaryLayout& lay) {
    std::size_t m = lay.out_slots.size(), n = lay.in_slots.size();
    Matrix result(std::size_t{1} << m, std::size_t{1} << n);

    // Map each remaining tensor's wire ids to fast lookup.
    for (std::size_t row = 0; row < result.rows; ++row) {
        for (std::size_t col = 0; col < result.cols; ++col) {
            // wire assignment dictated by the boundary bits; a wire id can
            // appear in two slots (boundary-to-boundary edge) and must agree.
            std::map<std::size_t, int> wire_val;
            bool ok = true;
            for (std::size_t k = 0; k < m && ok; ++k) {
                int bit = static_cast<int>((row >> (m - 1 - k)) & 1);
                auto [it, fresh] = wire_val.try_emplace(lay.out_slots[k], bit);
                if (!fresh && it->second != bit) ok = false;
            }
            for (std::size_t k = 0; k < n && ok; ++k) {
                int bit = static_cast<int>((col >> (n - 1 - k)) & 1);
                auto [it, fresh] = wire_val.try_emplace(lay.in_slots[k], bit);
                if (!fresh && it->second != bit) ok = false;
            }
            if (!ok) continue;  // inconsistent forced assignment: entry is 0

            Complex v = scalar;
            for (const Tensor& t : finals) {
                std::size_t bits = 0;
                for (std::size_t i = 0; i < t.idx.size(); ++i)
                    bits = (bits << 1) | static_cast<std::size_t>(wire_val.at(t.idx[i]));
                v *= t.data[bits];
            }
            result.at(row, col) = v;
        }
    }
    (void)d;
    return result;
}

Matrix interpret_contract(const Diagram& d) {
    std::string err = d.validate();
    if (!err.empty()) throw std::invalid_argument("interpret: " + err);

    auto inc = incidence(d);
    BoundaryLayout lay = boundary_layout(d, inc);

    // Build node tensors (boundaries excluded: their wires stay free).
    std::vector<Tensor> tensors;
    for (const auto& [id, n] : d.nodes) {
        if (n.kind == NodeKind::B) continue;
        const auto& wires = inc.at(id);
        Tensor t;
        t.idx = wires;
        t.data.resize(std::size_t{1} << wires.size());
        std::vector<int> legs(wires.size(), 0);
        for (std::size_t bits = 0; bits < t.data.size(); ++bits) {
            for (std::size_t i = 0; i < wires.size(); ++i)
                legs[i] = static_cast<int>((bits >> (wires.size() - 1 - i)) & 1);
            t.data[bits] = node_weight(n, legs);
        }
        tensors.push_back(self_trace(std::move(t)));
    }

    Complex scalar = std::pow(Complex(2, 0), static_cast<double>(d.loops));

    // Free wires: those attached to a boundary slot.
    std::set<std::size_t> free_wires(lay.out_slots.begin(), lay.out_slots.end());
    free_wires.insert(lay.in_slots.begin(), lay.in_slots.end());

    // Greedily contract the pair whose merge yields the smallest rank.
    while (true) {
        std::size_t best_i = 0, best_j = 0;
        std::size_t best_rank = SIZE_MAX;
        bool found = false;
        for (std::size_t i = 0; i < tensors.size(); ++i)
            for (std::size_t j = i + 1; j < tensors.size(); ++j) {
                std::size_t shared = 0;
                for (std::size_t w : tensors[i].idx)
                    if (std::find(tensors[j].idx.begin(), tensors[j].idx.end(), w) !=
                        tensors[j].idx.end())
                        ++shared;
                if (shared == 0) continue;
                std::size_t r = tensors[i].rank() + tensors[j].rank() - 2 * shared;
                if (r < best_rank) {
                    best_rank = r;
                    best_i = i;
                    best_j = j;
                    found = true;
                }
            }
        if (!found) break;
        Tensor merged = contract_pair(tensors[best_i], tensors[best_j]);
        tensors.erase(tensors.begin() + static_cast<std::ptrdiff_t>(best_j));
        tensors.erase(tensors.begin() + static_cast<std::ptrdiff_t>(best_i));
        tensors.push_back(std::move(merged));
    }

    // Remaining tensors hold only free wires (or are scalars).
    std::vector<Tensor> finals;
    for (auto& t : tensors) {
        if (t.rank() == 0) {
            scalar *= t.data[0];
        } else {
            for (std::size_t w : t.idx)
                if (!free_wires.count(w))
                    throw std::logic_error("interpret: dangling internal wire after contraction");
            finals.push_back(std::move(t));
        }
    }

    return assemble(finals, scalar, d, lay);
}

}  // namespace

Matrix interpret_naive(const Diagram& d) {
    std::string err = d.validate();
    if (!err.empty()) throw std::invalid_argument("interpret: " + err);

    auto inc = incidence(d);
    BoundaryLayout lay = boundary_layout(d, inc);
    std::size_t m = lay.out_slots.size(), n = lay.in_slots.size();
    std::size_t e = d.edges.size();
    if (e > 24) throw std::invalid_argument("interpret_naive: too many wires");

    Matrix result(std::size_t{1} << m, std::size_t{1} << n);
    std::vector<int> wire_val(e, 0);
    for (std::size_t assign = 0; assign < (std::size_t{1} << e); ++assign) {
        for (std::size_t i = 0; i < e; ++i) wire_val[i] = static_cast<int>((assign >> i) & 1);
        Complex w(1, 0);
        for (const auto& [id, nd] : d.nodes) {
            if (nd.kind == NodeKind::B) continue;
            std::vector<int> legs;
            for (std::size_t wi : inc.at(id)) legs.push_back(wire_val[wi]);
            w *= node_weight(nd, legs);
            if (w == Complex(0, 0)) break;
        }
        if (w == Complex(0, 0)) continue;
        std::size_t row = 0, col = 0;
        for (std::size_t k = 0; k < m; ++k)
            row = (row << 1) | static_cast<std::size_t>(wire_val[lay.out_slots[k]]);
        for (std::size_t k = 0; k < n; ++k)
            col = (col << 1) | static_cast<std::size_t>(wire_val[lay.in_slots[k]]);
        result.at(row, col) += w;
    }
    Complex loop_factor = std::pow(Complex(2, 0), static_cast<double>(d.loops));
    for (auto& v : result.a) v *= loop_factor;
    return result;
}

Matrix interpret(const Diagram& d) {
    Matrix m = interpret_contract(d);
#ifndef NDEBUG
    if (d.n_wires() <= 6) {
        Matrix ref = interpret_naive(d);
        assert(residual(ref, m) <= 1e-10 && "contraction disagrees with naive interpretation");
    }
#endif
    return m;
}

}  // namespace zx
