#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zx/diagram.hpp"
#include "zx/expr.hpp"
#include "zx/prng.hpp"

namespace zx {

/// The rewrite axioms: the two current axiom sets plus the superseded rules
/// they replace.
enum class RuleId {
    kS,    ///< spider fusion
    kIg,   ///< phase-free degree-2 Z spider removal
    kIr,   ///< phase-free degree-2 X spider removal
    kCP,   ///< basis-state copy
    kB,    ///< bialgebra
    kHD,   ///< Hadamard decomposition
    kH,    ///< color change
    kE,    ///< scalar cancellation
    kEU,   ///< Z-X-Z to X-Z-X phase conversion
    kEUp,  ///< Z-H-Z to X-Z-X phase conversion
    kIV,   ///< inverse-pair cancellation
    kK,    ///< pi commutation
    kSUP,  ///< supplementarity
    kC,    ///< control commutation
    kBW,   ///< pi/4 branch swap
    kA,    ///< constrained branch averaging
    kZO,   ///< zero-scalar absorption
    kIVp,  ///< inverse pair to plain pair
};

/// Canonical short name ("S", "EU'", "IV'", …).
std::string rule_name(RuleId id);
/// Inverse of rule_name; accepts "EUp"/"IVp" as ASCII aliases. Throws
/// std::invalid_argument for unknown names.
RuleId rule_from_name(const std::string& name);

/// Axiom-set membership ("zx", "zxprime", "obsolete").
bool rule_in_set(RuleId id, const std::string& set);
std::vector<RuleId> rules_in_set(const std::string& set);
/// Rules whose right-hand side computes angles through the solvers.
bool rule_is_nonlinear(RuleId id);

/// One side of a rule: a diagram pattern. Node phases are constants, bound
/// parameters, or expressions over parameters; negative ids in edges denote
/// the rule's external attachment slots; edges may carry a wire-group marker
/// ("dots" = zero or more, "diag_dots" = one or more, optionally routed
/// through a fresh H per wire).
struct PatternNode {
    enum class PhaseKind { kNone, kConst, kVar, kExpr };
    NodeKind kind = NodeKind::Z;
    PhaseKind phase_kind = PhaseKind::kNone;
    Phase const_phase;
    std::string var;
    AngleExpr expr;
};

struct PatternEdge {
    int a = 0;
    int b = 0;                ///< negative = external slot
    bool group = false;       ///< variadic wire bundle
    bool one_or_more = false; ///< "diag_dots" (else zero or more)
    bool via_h = false;       ///< each bundle wire passes through a fresh H
};

struct Pattern {
    std::map<int, PatternNode> nodes;
    std::vector<PatternEdge> edges;

    /// External slot ids (negative), most significant (-1) first.
    std::vector<int> slots() const;
};

/// Six-angle parameter block for the constrained averaging rule; valid when
/// 2e^{iθ3}cos(γ) = e^{iθ1}cos(α) + e^{iθ2}cos(β).
struct RuleAParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta3 = 0.0;

    /// |2e^{iθ3}cos(γ) − e^{iθ1}cos(α) − e^{iθ2}cos(β)|.
    double constraint_residual() const;
    /// Draws α, β, θ1, θ2 uniformly and solves for θ3 ∈ [0,2π), γ ∈ [0,π/2].
    static RuleAParams sample(Prng& rng);
    /// Binding map {"a","b","g","t1","t2","t3"} for template instantiation.
    std::map<std::string, Phase> bindings() const;
};

struct RuleTemplate {
    RuleId id = RuleId::kS;
    std::string name;
    std::string display;
    std::set<std::string> sets;
    std::vector<std::string> params;
    std::set<std::string> basis_params;  ///< restricted to {0, π}
    bool nonlinear = false;
    bool constrained = false;  ///< parameters must satisfy RuleAParams
    Pattern lhs;
    Pattern rhs;
};

/// Loads the template for `id` from the bundled data files (parsed once,
/// cached). The catalog is data, not code; see data/rules/*.json.
const RuleTemplate& rule_template(RuleId id);

/// One occurrence of a rule side inside a diagram.
struct SlotEdge {
    std::size_t edge_index = 0;  ///< index into Diagram::edges
    NodeId other = 0;            ///< endpoint outside the matched node
    NodeId h_node = 0;           ///< consumed H for via-H bundles
    bool via_h = false;
};

struct RuleMatch {
    RuleId rule = RuleId::kS;
    bool reversed = false;       ///< matched the right-hand side
    bool color_swapped = false;  ///< matched with Z and X exchanged
    std::map<int, NodeId> nodes;              ///< pattern id → diagram node
    std::map<std::string, Phase> angles;      ///< bound parameters
    std::map<int, std::vector<SlotEdge>> slot_edges;  ///< slot id → wires
};

/// Optional constraints narrowing a search to an intended occurrence.
struct MatchHints {
    std::map<int, NodeId> nodes;          ///< pattern id → required node
    std::map<std::string, Phase> angles;  ///< pre-bound parameters
    /// slot id → required set of opposite endpoints (for bundle splits).
    std::map<int, std::vector<NodeId>> slot_endpoints;
    bool color_swapped = false;
    bool try_color_swapped = true;  ///< also search the swapped polarity
};

/// All occurrences of the lr (or, when `reversed`, rl) side of `rule` in `d`.
/// Matches are reported deterministically (ascending node assignment), with
/// symmetric duplicates collapsed. Patterns whose phases are expressions over
/// parameters not inferable from the diagram require those parameters in
/// `hints.angles`.
std::vector<RuleMatch> find_matches(const Diagram& d, RuleId rule,
                                    bool reversed = false,
                                    const MatchHints& hints = {});

/// Same search against an ad-hoc template (e.g. a proof lemma promoted to a
/// rewrite); the template need not be in the RuleId catalog.
std::vector<RuleMatch> find_matches(const Diagram& d, const RuleTemplate& tmpl,
                                    bool reversed = false,
                                    const MatchHints& hints = {});

struct ApplyResult {
    Diagram diagram;
    std::map<int, NodeId> produced;  ///< replacement-side pattern id → node
};

/// Replaces the matched occurrence by the other side of the rule. The match
/// must have been found on `d`.
ApplyResult apply_rule(const Diagram& d, const RuleMatch& match);

/// apply_rule against an ad-hoc template; `match` must come from the
/// template overload of find_matches on `d`.
ApplyResult apply_rule(const Diagram& d, const RuleTemplate& tmpl,
                       const RuleMatch& match);

/// Builds a standalone diagram from one side of a rule: slots become output
/// boundary wires (slot -1 first; bundles expand to `group_counts` wires).
Diagram instantiate_pattern(const Pattern& p,
                            const std::map<std::string, Phase>& bindings,
                            const std::map<int, int>& group_counts = {});

struct AuditFailure {
    int sample = 0;
    double residual = 0.0;
    std::string detail;
};

struct AuditReport {
    RuleId rule = RuleId::kS;
    int samples = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    double max_residual = 0.0;
    std::vector<AuditFailure> failures;
    bool passed() const { return failures.empty(); }
};

/// Semantic soundness check: `samples` random instantiations of both sides
/// (angles uniform in [0,2π), bundle sizes 0..3 or 1..3, constrained
/// parameters drawn with RuleAParams::sample), compared for exact matrix
/// equality to `tol` (not merely up to phase).
AuditReport soundness_audit(RuleId rule, int samples, std::uint64_t seed,
                            double tol = 1e-9);

}  // namespace zx
