#include "zx/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "zx/angles.hpp"
#include "zx/semantics.hpp"

namespace zx {
namespace {

constexpr double kStepTol = 1e-9;    ///< per-surgery drift bound
constexpr double kAngleTol = 1e-7;   ///< record comparison tolerance
constexpr double kZeroTol = 1e-14;   ///< treat-as-zero threshold for ratios

const double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

Complex cis(double t) { return {std::cos(t), std::sin(t)}; }

/// Leg components of a degree-1 opposite-color leaf with phase a, in the
/// basis of the spider it hangs from: (1 ± e^{ia})/√2 at leg value 0/1.
Complex leaf0(double a) { return (1.0 + cis(a)) / kSqrt2; }
Complex leaf1(double a) { return (1.0 - cis(a)) / kSqrt2; }

bool is_spider(NodeKind k) { return k == NodeKind::Z || k == NodeKind::X; }

NodeKind opposite(NodeKind k) { return k == NodeKind::Z ? NodeKind::X : NodeKind::Z; }

/// Apply ⟦H⟧ to a 2-vector.
std::pair<Complex, Complex> h_vec(Complex a, Complex b) {
    return {(a + b) / kSqrt2, (a - b) / kSqrt2};
}

struct ChainFit {
    double tau = 0.0;  ///< leaf angle, in [0, π]
    double g = 0.0;    ///< phase shift absorbed by the carrying spider
    Complex c{0.0, 0.0};
};

/// Solve w = c·(leaf0(τ), e^{ig}·leaf1(τ)). The leaf ratio is −i·tan(τ/2),
/// so τ = 2·atan|w1/w0| and g = arg(i·w1/w0). A zero input yields c = 0.
ChainFit fit_chain(Complex w0, Complex w1) {
    ChainFit f;
    double scale = std::max(std::abs(w0), std::abs(w1));
    if (std::abs(w1) <= kZeroTol * scale) {
        f.c = w0 / kSqrt2;
    } else if (std::abs(w0) <= kZeroTol * scale) {
        f.tau = kPi;
        f.c = w1 / kSqrt2;
    } else {
        Complex r = w1 / w0;
        f.tau = 2.0 * std::atan(std::abs(r));
        f.g = wrap_angle(std::arg(r * Complex{0.0, 1.0}));
        f.c = w0 / leaf0(f.tau);
    }
    return f;
}

/// Closed-form inversion of v = s·(1+e^{iα}, i·e^{iβ}(1−e^{iα})), i.e. of
/// the ratio v1/v0 = e^{iβ}·tan(α/2), with β canonicalized into [0, π) and
/// forced to 0 when α ∈ {0, π}. A zero input yields s = 0.
ExtractedState extract_state_closed(Complex v0, Complex v1) {
    ExtractedState e;
    double scale = std::max(std::abs(v0), std::abs(v1));
    if (std::abs(v1) <= kZeroTol * scale || scale == 0.0) {
        e.s = v0 / 2.0;
    } else if (std::abs(v0) <= kZeroTol * scale) {
        e.alpha = kPi;
        e.s = v1 / Complex{0.0, 2.0};
    } else {
        Complex r = v1 / v0;
        double phi = std::arg(r);
        // Snap the branch decision so that near-real ratios extract stably.
        if (std::abs(phi) < 1e-11) phi = 0.0;
        if (std::abs(std::abs(phi) - kPi) < 1e-11) phi = kPi;
        if (phi >= 0.0 && phi < kPi) {
            e.beta = phi;
            e.alpha = 2.0 * std::atan(std::abs(r));
        } else {
            e.beta = wrap_angle(phi + kPi);
            e.alpha = wrap_angle(-2.0 * std::atan(std::abs(r)));
        }
        e.s = v0 / (1.0 + cis(e.alpha));
    }
    return e;
}

Phase phase_snapped(double radians) {
    for (int q = 0; q < 4; ++q)
        if (std::abs(angle_distance(radians, q * kPi / 2.0)) < 1e-13) return Phase::exact(q, 2);
    return Phase::radians(radians);
}

Matrix transpose2(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
    return t;
}

/// The matrix a map record stands for (without its scalar sub-diagram
/// normalization): scalar·Mz(α5)·Mx(α4)·diag(1, e^{iα3}tan(γ/2))·Mx(α2)·Mz(α1).
Matrix reconstruct_map(const ExtractedMap& e) {
    Matrix d(2, 2);
    d.at(0, 0) = 1.0;
    d.at(1, 1) = cis(e.alpha3) * std::tan(e.gamma / 2.0);
    return (m_z(e.alpha5) * m_x(e.alpha4) * d * m_x(e.alpha2) * m_z(e.alpha1)).scaled(e.scalar);
}

// ---- structural reduction ---------------------------------------------------

/// Reduces a cycle-free diagram by repeated local surgeries, each checked
/// against the input interpretation:
///   • series H boxes cancel,
///   • adjacent same-color spiders fuse,
///   • zero-phase degree-2 spiders drop,
///   • two opposite-color leaves on one spider merge into one leaf plus a
///     phase shift and a scalar factor,
///   • a finished two-node branch collapses into a leaf on its carrier,
///   • an H box in front of a finished branch is twisted away.
/// Boundary-free components are absorbed into the scalar factor up front.
class Reducer {
public:
    Reducer(Diagram d, Matrix target) : d_(std::move(d)), target_(std::move(target)) {}

    void run() {
        if (d_.loops > 0) {
            for (std::uint32_t i = 0; i < d_.loops; ++i) s_acc_ *= 2.0;
            d_.loops = 0;
        }
        drop_scalar_components();
        check();
        while (true) {
            if (collapse_hh() || fuse_adjacent() || drop_identity() || merge_leaf_pair() ||
                absorb_branch() || twist_h_branch()) {
                check();
                continue;
            }
            break;
        }
    }

    const Diagram& diagram() const { return d_; }
    Complex scalar() const { return s_acc_; }

private:
    void check() const {
        Matrix cur = interpret(d_).scaled(s_acc_);
        if (residual(cur, target_) > kStepTol)
            throw std::logic_error("normal form: a reduction step drifted from the input interpretation");
    }

    std::vector<NodeId> node_ids() const {
        std::vector<NodeId> ids;
        ids.reserve(d_.nodes.size());
        for (const auto& [id, n] : d_.nodes) ids.push_back(id);
        return ids;
    }

    bool is_plain_leaf(NodeId id, NodeKind carrier_kind) const {
        const Node& n = d_.node(id);
        return is_spider(n.kind) && n.kind == opposite(carrier_kind) && d_.degree(id) == 1;
    }

    void drop_scalar_components() {
        std::set<NodeId> seen;
        for (NodeId start : node_ids()) {
            if (seen.count(start)) continue;
            std::vector<NodeId> comp{start};
            seen.insert(start);
            bool has_boundary = false;
            for (std::size_t i = 0; i < comp.size(); ++i) {
                if (d_.node(comp[i]).kind == NodeKind::B) has_boundary = true;
                for (NodeId w : d_.neighbors(comp[i]))
                    if (seen.insert(w).second) comp.push_back(w);
            }
            if (has_boundary) continue;
            Diagram sub;
            std::map<NodeId, NodeId> to_sub;
            for (NodeId id : comp) to_sub[id] = sub.add_node(d_.node(id).kind, d_.node(id).phase);
            for (const auto& [a, b] : d_.edges)
                if (to_sub.count(a) && to_sub.count(b)) sub.add_edge(to_sub[a], to_sub[b]);
            s_acc_ *= interpret(sub).at(0, 0);
            for (NodeId id : comp) d_.remove_node(id);
        }
    }

    bool collapse_hh() {
        for (NodeId h1 : node_ids()) {
            if (d_.node(h1).kind != NodeKind::H) continue;
            for (NodeId h2 : d_.neighbors(h1)) {
                if (h2 == h1 || d_.node(h2).kind != NodeKind::H) continue;
                NodeId x = 0, y = 0;
                for (NodeId w : d_.neighbors(h1))
                    if (w != h2) x = w;
                for (NodeId w : d_.neighbors(h2))
                    if (w != h1) y = w;
                d_.remove_node(h1);
                d_.remove_node(h2);
                d_.add_edge(x, y);
                return true;
            }
        }
        return false;
    }

    bool fuse_adjacent() {
        for (std::size_t i = 0; i < d_.edges.size(); ++i) {
            NodeId a = d_.edges[i].first;
            NodeId b = d_.edges[i].second;
            if (a == b) continue;
            if (!is_spider(d_.node(a).kind) || d_.node(a).kind != d_.node(b).kind) continue;
            d_.nodes.at(a).phase = d_.node(a).phase + d_.node(b).phase;
            for (NodeId w : d_.neighbors(b))
                if (w != a) d_.add_edge(a, w);
            d_.remove_node(b);
            return true;
        }
        return false;
    }

    bool drop_identity() {
        for (NodeId id : node_ids()) {
            const Node& n = d_.node(id);
            if (!is_spider(n.kind) || d_.degree(id) != 2) continue;
            if (!n.phase.is_zero() && std::abs(n.phase.distance(Phase::zero())) > 1e-13) continue;
            std::vector<NodeId> nb = d_.neighbors(id);
            d_.remove_node(id);
            d_.add_edge(nb[0], nb[1]);
            return true;
        }
        return false;
    }

    /// Two plain opposite-color leaves a, b on one spider act diagonally with
    /// weights leaf(a)·leaf(b); one leaf plus a spider phase shift carries
    /// the same weights up to the scalar returned by fit_chain.
    bool merge_leaf_pair() {
        for (NodeId hub : node_ids()) {
            const Node& hn = d_.node(hub);
            if (!is_spider(hn.kind)) continue;
            std::vector<NodeId> leaves;
            for (NodeId w : d_.neighbors(hub))
                if (w != hub && is_plain_leaf(w, hn.kind)) leaves.push_back(w);
            std::sort(leaves.begin(), leaves.end());
            leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
            if (leaves.size() < 2) continue;
            double a = d_.node(leaves[0]).phase.value();
            double b = d_.node(leaves[1]).phase.value();
            ChainFit f = fit_chain(leaf0(a) * leaf0(b), leaf1(a) * leaf1(b));
            NodeKind leaf_kind = opposite(hn.kind);
            d_.remove_node(leaves[0]);
            d_.remove_node(leaves[1]);
            NodeId nl = d_.add_node(leaf_kind, phase_snapped(f.tau));
            d_.add_edge(hub, nl);
            d_.nodes.at(hub).phase = d_.nodes.at(hub).phase + Phase::radians(f.g);
            s_acc_ *= f.c;
            return true;
        }
        return false;
    }

    /// A branch [q(ψ) with one plain leaf] hanging off a spider of the
    /// opposite color contributes the weights H·(leaf0(τ), e^{iψ}leaf1(τ))
    /// in the carrier's basis; collapse it to a single leaf.
    bool absorb_branch() {
        for (NodeId hub : node_ids()) {
            const Node& hn = d_.node(hub);
            if (!is_spider(hn.kind)) continue;
            for (NodeId q : d_.neighbors(hub)) {
                if (q == hub) continue;
                const Node& qn = d_.node(q);
                if (!is_spider(qn.kind) || qn.kind != opposite(hn.kind)) continue;
                if (d_.degree(q) != 2) continue;
                NodeId m = 0;
                bool have_m = false;
                for (NodeId w : d_.neighbors(q))
                    if (w != hub) {
                        m = w;
                        have_m = true;
                    }
                if (!have_m || !is_plain_leaf(m, qn.kind)) continue;
                auto [w0, w1] = h_vec(leaf0(d_.node(m).phase.value()),
                                      cis(qn.phase.value()) * leaf1(d_.node(m).phase.value()));
                ChainFit f = fit_chain(w0, w1);
                NodeKind leaf_kind = opposite(hn.kind);
                d_.remove_node(m);
                d_.remove_node(q);
                NodeId nl = d_.add_node(leaf_kind, phase_snapped(f.tau));
                d_.add_edge(hub, nl);
                d_.nodes.at(hub).phase = d_.nodes.at(hub).phase + Phase::radians(f.g);
                s_acc_ *= f.c;
                return true;
            }
        }
        return false;
    }

    /// An H box whose far side is a finished end (a spider with at most one
    /// plain leaf and no other legs) twists into a leaf on the near spider.
    bool twist_h_branch() {
        for (NodeId h : node_ids()) {
            if (d_.node(h).kind != NodeKind::H) continue;
            std::vector<NodeId> nb = d_.neighbors(h);
            for (int side = 0; side < 2; ++side) {
                NodeId q = nb[side];
                NodeId p = nb[1 - side];
                const Node& qn = d_.node(q);
                const Node& pn = d_.node(p);
                if (!is_spider(qn.kind) || !is_spider(pn.kind)) continue;
                if (d_.degree(q) > 2) continue;
                NodeId m = 0;
                bool have_m = false;
                for (NodeId w : d_.neighbors(q))
                    if (w != h) {
                        m = w;
                        have_m = true;
                    }
                if (have_m && !is_plain_leaf(m, qn.kind)) continue;
                // End state in q's own basis, then into the z basis.
                Complex u0 = 1.0, u1 = cis(qn.phase.value());
                if (have_m) {
                    u0 = leaf0(d_.node(m).phase.value());
                    u1 *= leaf1(d_.node(m).phase.value());
                }
                auto uz = qn.kind == NodeKind::Z ? std::pair{u0, u1} : h_vec(u0, u1);
                auto wz = h_vec(uz.first, uz.second);
                auto wp = pn.kind == NodeKind::Z ? wz : h_vec(wz.first, wz.second);
                ChainFit f = fit_chain(wp.first, wp.second);
                NodeKind leaf_kind = opposite(pn.kind);
                if (have_m) d_.remove_node(m);
                d_.remove_node(q);
                d_.remove_node(h);
                NodeId nl = d_.add_node(leaf_kind, phase_snapped(f.tau));
                d_.add_edge(p, nl);
                d_.nodes.at(p).phase = d_.nodes.at(p).phase + Phase::radians(f.g);
                s_acc_ *= f.c;
                return true;
            }
        }
        return false;
    }

    Diagram d_;
    Matrix target_;
    Complex s_acc_{1.0, 0.0};
};

bool reachable(const Diagram& d, NodeId from, NodeId to) {
    std::set<NodeId> seen{from};
    std::vector<NodeId> stack{from};
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        if (cur == to) return true;
        for (NodeId w : d.neighbors(cur))
            if (seen.insert(w).second) stack.push_back(w);
    }
    return false;
}

/// Closed-form 2×2 matrix of a reduced chain element: a spider with at most
/// one plain leaf, or an H box.
Matrix element_matrix(const Diagram& d, NodeId id) {
    const Node& n = d.node(id);
    if (n.kind == NodeKind::H) return m_h();
    Complex w0 = 1.0, w1 = cis(n.phase.value());
    for (NodeId w : d.neighbors(id)) {
        if (w == id || !is_spider(d.node(w).kind) || d.degree(w) != 1) continue;
        w0 *= leaf0(d.node(w).phase.value());
        w1 *= leaf1(d.node(w).phase.value());
    }
    Matrix m(2, 2);
    m.at(0, 0) = w0;
    m.at(1, 1) = w1;
    return n.kind == NodeKind::Z ? m : m_h() * m * m_h();
}

}  // namespace

char basis_char(Basis b) { return b == Basis::kGreen ? 'g' : 'r'; }

Basis basis_from_char(char c) {
    if (c == 'g') return Basis::kGreen;
    if (c == 'r') return Basis::kRed;
    throw std::invalid_argument(std::string("unknown basis '") + c + "': expected 'g' or 'r'");
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::kEqual: return "equal";
        case Verdict::kEqualDegenerate: return "equal-degenerate";
        case Verdict::kDifferent: return "different";
    }
    return "?";
}

Diagram scalar_diagram(Complex s) {
    Diagram d;
    double r = std::abs(s);
    if (r < 1e-300) {
        d.add_node(NodeKind::Z, Phase::pi());
        return d;
    }
    double theta = std::arg(s);
    while (r > 2.0) {
        NodeId a = d.add_node(NodeKind::Z, Phase::zero());
        NodeId b = d.add_node(NodeKind::X, Phase::pi());
        d.add_edge(a, b);
        r /= kSqrt2;
    }
    double mag = 2.0 * std::acos(std::clamp(r / 2.0, 0.0, 1.0));
    d.add_node(NodeKind::Z, phase_snapped(mag));
    theta = wrap_angle(theta - mag / 2.0);
    if (std::abs(angle_distance(theta, 0.0)) > 1e-15) {
        NodeId a = d.add_node(NodeKind::Z, phase_snapped(theta));
        NodeId b = d.add_node(NodeKind::X, Phase::pi());
        d.add_edge(a, b);
        NodeId c1 = d.add_node(NodeKind::Z, Phase::exact(1, 3));
        NodeId c2 = d.add_node(NodeKind::X, Phase::exact(-1, 3));
        d.add_edge(c1, c2);
    }
    Complex got = interpret(d).at(0, 0);
    if (std::abs(got - s) > kStepTol * std::max(1.0, std::abs(s)))
        throw std::logic_error("scalar gadget drifted from the requested value");
    return d;
}

Diagram to_diagram(const SvdState& s) {
    Diagram d = s.scalar;
    NodeKind leaf_kind = s.basis == Basis::kGreen ? NodeKind::X : NodeKind::Z;
    NodeId leaf = d.add_node(leaf_kind, s.alpha);
    NodeId mid = d.add_node(opposite(leaf_kind), s.beta + Phase::exact(1, 2));
    d.add_edge(leaf, mid);
    NodeId out = d.add_output();
    d.add_edge(mid, out);
    return d;
}

Diagram to_diagram(const SvdMap& m) {
    Diagram d = m.scalar;
    NodeKind zk = m.basis == Basis::kGreen ? NodeKind::Z : NodeKind::X;
    NodeKind xk = opposite(zk);
    NodeId in = d.add_input();
    NodeId n1 = d.add_node(zk, m.alpha1);
    NodeId n2 = d.add_node(xk, m.alpha2);
    NodeId hub = d.add_node(zk, m.alpha3 + Phase::exact(1, 2));
    NodeId leaf = d.add_node(xk, m.gamma);
    NodeId n4 = d.add_node(xk, m.alpha4);
    NodeId n5 = d.add_node(zk, m.alpha5);
    NodeId out = d.add_output();
    d.add_edge(in, n1);
    d.add_edge(n1, n2);
    d.add_edge(n2, hub);
    d.add_edge(hub, leaf);
    d.add_edge(hub, n4);
    d.add_edge(n4, n5);
    d.add_edge(n5, out);
    return d;
}

ExtractedState extract_state_oracle(const Matrix& v) {
    if (v.rows != 2 || v.cols != 1)
        throw std::invalid_argument("state oracle expects a 2x1 matrix");
    if (v.max_abs().first == 0.0)
        throw std::invalid_argument("zero-vector: the state parameterization needs a nonzero vector");
    return extract_state_closed(v.at(0, 0), v.at(1, 0));
}

ExtractedMap extract_map_oracle(const Matrix& m) {
    if (m.rows != 2 || m.cols != 2)
        throw std::invalid_argument("map oracle expects a 2x2 matrix");
    if (m.max_abs().first == 0.0)
        throw std::invalid_argument("zero-matrix: the singular-value form needs a nonzero matrix");
    Eigen::Matrix2cd em;
    em << m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(em, Eigen::ComputeFullU | Eigen::ComputeFullV);
    double s1 = svd.singularValues()(0);
    double s2 = svd.singularValues()(1);
    double ratio = s2 / s1;
    ExtractedMap r;
    r.gamma = 2.0 * std::atan(ratio);
    r.degenerate_rank = ratio < 1e-12;
    r.proportional_unitary = ratio > 1.0 - 1e-12;
    if (r.proportional_unitary) {
        // Equal singular values: fix V† = 1 and decompose m/σ1 alone. The
        // transposed decomposition canonicalizes the *outer* z angle.
        UnitaryDecomposition du = decompose_unitary(transpose2(m).scaled(1.0 / s1));
        r.alpha5 = du.alpha1;
        r.alpha4 = du.alpha2;
        r.alpha3 = du.alpha3;
        r.scalar = s1 * cis(du.gamma);
        return r;
    }
    Matrix w(2, 2), u(2, 2);
    Eigen::Matrix2cd ew = svd.matrixV().adjoint();
    Eigen::Matrix2cd eu = svd.matrixU();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            w.at(i, j) = ew(i, j);
            u.at(i, j) = eu(i, j);
        }
    UnitaryDecomposition dw = decompose_unitary(w);
    UnitaryDecomposition du = decompose_unitary(transpose2(u));
    r.alpha1 = dw.alpha1;
    r.alpha2 = dw.alpha2;
    r.alpha4 = du.alpha2;
    r.alpha5 = du.alpha1;
    // Both inner z rotations and the singular phases fold into the diagonal.
    r.alpha3 = wrap_angle(du.alpha3 + dw.alpha3);
    r.scalar = s1 * cis(du.gamma + dw.gamma);
    return r;
}

SvdState normalize_state(const Diagram& d, Basis basis) {
    if (d.n_inputs() != 0 || d.n_outputs() != 1)
        throw std::invalid_argument("not-a-state: expected a diagram with no inputs and one output");
    if (!is_cycle_free(d))
        throw std::invalid_argument("has-cycle: the state normal form needs a cycle-free diagram");
    Diagram work = basis == Basis::kRed ? compose(gen_h(), d) : d;
    Matrix target = interpret(work);
    Reducer reducer(std::move(work), target);
    reducer.run();

    Matrix rest = interpret(reducer.diagram());
    Complex v0 = rest.at(0, 0) * reducer.scalar();
    Complex v1 = rest.at(1, 0) * reducer.scalar();
    ExtractedState ex = extract_state_closed(v0, v1);

    SvdState rec;
    rec.basis = basis;
    rec.alpha = phase_snapped(ex.alpha);
    rec.beta = phase_snapped(ex.beta);
    rec.scalar = scalar_diagram(ex.s * kSqrt2);
    if (residual(interpret(to_diagram(rec)), interpret(d)) > kStepTol)
        throw std::logic_error("state normalization drifted from the input interpretation");
    return rec;
}

SvdMap normalize_map(const Diagram& d, Basis basis) {
    if (d.n_inputs() != 1 || d.n_outputs() != 1)
        throw std::invalid_argument("wrong-arity: expected a diagram with one input and one output");
    if (!is_cycle_free(d))
        throw std::invalid_argument("has-cycle: the map normal form needs a cycle-free diagram");
    Diagram work = basis == Basis::kRed ? compose(gen_h(), compose(d, gen_h())) : d;
    Matrix target = interpret(work);
    Reducer reducer(std::move(work), target);
    reducer.run();

    const Diagram& rd = reducer.diagram();
    NodeId bin = rd.inputs[0];
    NodeId bout = rd.outputs[0];
    ExtractedMap ex;
    bool zero = false;
    if (!reachable(rd, bin, bout)) {
        // Input and output sit in separate trees: the map is an outer
        // product; extract the reduced remainder in one step.
        Matrix mm = interpret(rd).scaled(reducer.scalar());
        if (mm.max_abs().first <= 1e-12) {
            zero = true;
        } else {
            ex = extract_map_oracle(mm);
        }
    } else {
        // Walk the input→output chain and fold one element at a time,
        // re-extracting a canonical record after each composition.
        std::vector<NodeId> chain;
        NodeId prev = bin;
        NodeId cur = rd.neighbors(bin).at(0);
        std::size_t guard = rd.nodes.size() + 1;
        while (cur != bout) {
            if (chain.size() > guard)
                throw std::logic_error("map normalization: chain walk did not terminate");
            chain.push_back(cur);
            NodeId nxt = cur;
            bool found = false;
            for (NodeId w : rd.neighbors(cur)) {
                if (w == prev) continue;
                if (rd.node(cur).kind != NodeKind::H && is_spider(rd.node(w).kind) &&
                    rd.degree(w) == 1)
                    continue;  // plain leaf, part of this element
                nxt = w;
                found = true;
            }
            if (!found) throw std::logic_error("map normalization: unexpected residual shape");
            prev = cur;
            cur = nxt;
        }
        Matrix acc = Matrix::identity(2);
        ex = extract_map_oracle(acc);
        for (NodeId id : chain) {
            acc = element_matrix(rd, id) * acc;
            if (acc.max_abs().first <= 1e-13) {
                zero = true;
                break;
            }
            ex = extract_map_oracle(acc);
            if (residual(reconstruct_map(ex), acc) > kStepTol)
                throw std::logic_error("map normalization: a fold step drifted");
        }
        if (!zero) ex.scalar *= reducer.scalar();
    }
    if (zero) ex = ExtractedMap{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, Complex{0.0, 0.0}, true, false};

    SvdMap rec;
    rec.basis = basis;
    rec.alpha1 = phase_snapped(ex.alpha1);
    rec.alpha2 = phase_snapped(ex.alpha2);
    rec.alpha3 = phase_snapped(ex.alpha3);
    rec.alpha4 = phase_snapped(ex.alpha4);
    rec.alpha5 = phase_snapped(ex.alpha5);
    rec.gamma = phase_snapped(ex.gamma);
    // The record's middle hub carries an extra (1+e^{iγ})/√2 next to the
    // plain diag(1, e^{iα3}tan(γ/2)) part; divide it out of the scalar.
    rec.scalar = scalar_diagram(zero ? Complex{0.0, 0.0} : ex.scalar / leaf0(ex.gamma));
    if (residual(interpret(to_diagram(rec)), interpret(d)) > kStepTol)
        throw std::logic_error("map normalization drifted from the input interpretation");
    return rec;
}

CompareResult compare_states(const SvdState& s1, const SvdState& s2) {
    Matrix v1 = interpret(to_diagram(s1));
    Matrix v2 = interpret(to_diagram(s2));
    if (v1.max_abs().first <= 1e-12 || v2.max_abs().first <= 1e-12)
        throw std::invalid_argument("zero-state: comparison is undefined for zero interpretations");
    if (residual(v1, v2) > kAngleTol) return {Verdict::kDifferent, "interpretations differ"};
    if (s1.basis != s2.basis)
        return {Verdict::kEqualDegenerate, "equal interpretations recorded in different bases"};
    double da = std::abs(s1.alpha.distance(s2.alpha));
    double db = std::abs(s1.beta.distance(s2.beta));
    if (da <= kAngleTol && db <= kAngleTol) return {Verdict::kEqual, "angles agree"};
    bool alpha_integer = std::abs(s1.alpha.distance(Phase::zero())) <= kAngleTol ||
                         std::abs(s1.alpha.distance(Phase::pi())) <= kAngleTol;
    if (da <= kAngleTol && alpha_integer)
        return {Verdict::kEqualDegenerate, "alpha is a multiple of pi: beta carries no content"};
    return {Verdict::kDifferent,
            "equal interpretations but angle records disagree outside the stated degeneracies"};
}

CompareResult compare_maps(const SvdMap& m1, const SvdMap& m2) {
    Matrix a = interpret(to_diagram(m1));
    Matrix b = interpret(to_diagram(m2));
    if (a.max_abs().first <= 1e-12 || b.max_abs().first <= 1e-12)
        throw std::invalid_argument("zero-map: comparison is undefined for zero interpretations");
    if (residual(a, b) > kAngleTol) return {Verdict::kDifferent, "interpretations differ"};
    if (m1.basis != m2.basis)
        return {Verdict::kEqualDegenerate, "equal interpretations recorded in different bases"};
    auto close = [](const Phase& p, const Phase& q) {
        return std::abs(p.distance(q)) <= kAngleTol;
    };
    if (close(m1.gamma, m2.gamma) && close(m1.alpha1, m2.alpha1) && close(m1.alpha2, m2.alpha2) &&
        close(m1.alpha3, m2.alpha3) && close(m1.alpha4, m2.alpha4) && close(m1.alpha5, m2.alpha5))
        return {Verdict::kEqual, "angles agree"};
    if (map_angles_equivalent(m1, m2, kAngleTol))
        return {Verdict::kEqualDegenerate,
                "angles agree up to the sign redundancy of an outer rotation splitting"};
    Phase half_pi = Phase::exact(1, 2);
    if (close(m1.gamma, Phase::zero()) && close(m2.gamma, Phase::zero()))
        return {Verdict::kEqualDegenerate, "rank one (gamma = 0): only the composite map is determined"};
    if (close(m1.gamma, half_pi) && close(m2.gamma, half_pi))
        return {Verdict::kEqualDegenerate,
                "proportional to unitary (gamma = pi/2): the unitary split is not unique"};
    return {Verdict::kDifferent,
            "equal interpretations but angle records disagree outside the stated degeneracies"};
}

bool map_angles_equivalent(const SvdMap& a, const SvdMap& b, double tol) {
    if (std::abs(a.gamma.distance(b.gamma)) > tol) return false;
    double b1 = b.alpha1.value(), b2 = b.alpha2.value(), b3 = b.alpha3.value(),
           b4 = b.alpha4.value(), b5 = b.alpha5.value();
    auto matches = [&](double a1, double a2, double a3, double a4, double a5) {
        return std::abs(angle_distance(a1, b1)) <= tol && std::abs(angle_distance(a2, b2)) <= tol &&
               std::abs(angle_distance(a3, b3)) <= tol && std::abs(angle_distance(a4, b4)) <= tol &&
               std::abs(angle_distance(a5, b5)) <= tol;
    };
    double a1 = a.alpha1.value(), a2 = a.alpha2.value(), a3 = a.alpha3.value(),
           a4 = a.alpha4.value(), a5 = a.alpha5.value();
    for (bool flip_in : {false, true}) {
        for (bool flip_out : {false, true}) {
            double c1 = flip_in ? a1 + kPi : a1;
            double c2 = flip_in ? -a2 : a2;
            double c3 = a3 + (flip_in ? kPi : 0.0) + (flip_out ? kPi : 0.0);
            double c4 = flip_out ? -a4 : a4;
            double c5 = flip_out ? a5 + kPi : a5;
            if (matches(c1, c2, c3, c4, c5)) return true;
        }
    }
    return false;
}

}  // namespace zx
