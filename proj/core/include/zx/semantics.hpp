#pragma once

#include "zx/diagram.hpp"
#include "zx/matrix.hpp"

namespace zx {

/// Standard interpretation: a 2^|outputs| × 2^|inputs| matrix, computed by
/// greedy tensor-network contraction (pairs chosen to minimize the
/// intermediate tensor rank). Each closed loop contributes a factor 2; a
/// zero-arity spider with phase α contributes the scalar 1+e^{iα}.
/// In debug builds, diagrams with at most 6 wires are cross-checked against
/// interpret_naive.
Matrix interpret(const Diagram& d);

/// Reference implementation: sums over all 0/1 assignments of every wire.
/// Exponential in the wire count; intended for cross-checks.
Matrix interpret_naive(const Diagram& d);

/// Rules describing how generators are doubled by the wire-doubling
/// interpretation: per-spider-kind images on the two wire layers, how the H
/// box splices the layers, and the weight of a doubled closed loop.
struct DoublingTable {
    struct SpiderImage {
        NodeKind layer1 = NodeKind::Z;
        NodeKind layer2 = NodeKind::X;
        bool negate1 = false;  ///< negate the phase of the layer-1 image
        bool negate2 = false;  ///< negate the phase of the layer-2 image
    };
    SpiderImage z;
    SpiderImage x;
    bool h_crosses = true;  ///< H splices layer 1 to layer 2 (crossing) vs parallel
    int loop_images = 2;    ///< closed loops produced per original closed loop

    /// Parse from the shipped transcription JSON.
    static DoublingTable from_json(const std::string& text);
    /// The transcription bundled with the library.
    static const DoublingTable& bundled();
};

/// Build the doubled diagram: every wire becomes two wires (layers 1 and 2),
/// boundary leg k becomes legs 2k and 2k+1, spiders map to a two-layer image
/// per the table, and H boxes become pure layer splices.
Diagram double_diagram(const Diagram& d, const DoublingTable& table = DoublingTable::bundled());

/// Wire-doubling interpretation: interpret(double_diagram(d)), a
/// 4^|outputs| × 4^|inputs| matrix.
Matrix interpret_nonstandard(const Diagram& d,
                             const DoublingTable& table = DoublingTable::bundled());

}  // namespace zx
