#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "zx/diagram.hpp"
#include "zx/expr.hpp"
#include "zx/phase.hpp"
#include "zx/prng.hpp"

namespace zx {

/// A labeled, parameterized diagram — the endpoint of a proof script. Node
/// phases are angle expressions over the script's parameters, so one script
/// states a family of equalities.
struct ScriptDiagram {
    struct Node {
        std::string label;
        std::string kind;  ///< "Z", "X", "H", "in", "out"
        AngleExpr phase;   ///< spiders only
    };
    std::vector<Node> nodes;
    std::vector<std::pair<std::string, std::string>> edges;  ///< by label
    int loops = 0;

    /// Instantiates under `env`; fills `labels` with label → node id.
    Diagram build(const std::map<std::string, Phase>& env,
                  std::map<std::string, NodeId>* labels = nullptr) const;
};

/// One proof step: a rewrite by an axiom or by a previously verified script,
/// pinned to a location through node labels.
struct ScriptStep {
    std::string rule;       ///< axiom short name, or script name when is_lemma
    bool is_lemma = false;
    bool is_bridge = false; ///< semantic-catalog statement, not a replayed chain
    bool reversed = false;  ///< rewrite right-to-left
    int swap = -1;          ///< -1 auto, 0 plain only, 1 color-swapped only
    int pick = 0;           ///< index among the remaining candidate matches
    std::map<int, std::string> anchors;  ///< pattern node id → diagram label
    std::map<std::string, AngleExpr> angles;         ///< rule param → expr
    std::map<int, std::vector<std::string>> slots;   ///< slot id → endpoints
    std::map<int, std::string> binds;  ///< produced pattern id → fresh label
};

/// A replayable derivation: initial rewrites to target through steps.
struct Script {
    std::string name;
    std::string about;        ///< one-line statement of what it derives
    std::string source;       ///< provenance note (free text)
    std::vector<std::string> params;
    std::map<std::string, std::string> sampling;  ///< param → "uniform",
                                                  ///< "dyadic:k", "binary"
    std::string joint_sampling;  ///< "" or "averaging" (constrained six-tuple)
    int samples = 0;          ///< audit instantiations; 0 → 1 if closed else 20
    std::string primitive_set;  ///< "", "zx", or "zxprime": axiom steps (and
                                ///< dependencies) must stay inside this set
    ScriptDiagram initial;
    ScriptDiagram target;
    std::vector<ScriptStep> steps;

    /// Names of scripts referenced by lemma steps (deduplicated, in order).
    std::vector<std::string> depends() const;
};

/// Parses a script from its JSON text; throws std::runtime_error with the
/// offending field on malformed input.
Script parse_script(const std::string& text);

struct StepReport {
    int index = 0;
    std::string rule;
    double residual = 0.0;
    bool bridge = false;
};

struct ProofReport {
    std::string script;
    bool ok = false;
    std::string error;  ///< "", or step-does-not-match / semantic-drift /
                        ///< final-mismatch / unbound-parameter detail
    double max_residual = 0.0;
    int bridge_steps = 0;          ///< steps justified semantically, not by chain
    std::set<std::string> rules_used;  ///< axiom names over expanded dependencies
    std::vector<StepReport> steps;
};

/// The shipped derivation corpus, in dependency order (every script's lemma
/// dependencies precede it; cyclic references are rejected at load).
class Corpus {
  public:
    static const Corpus& bundled();

    const std::vector<std::string>& order() const { return order_; }
    bool contains(const std::string& name) const { return scripts_.count(name) != 0; }
    const Script& at(const std::string& name) const;

    /// Builds a corpus from parsed scripts (topologically sorted; throws
    /// std::invalid_argument on duplicate names, unknown or cyclic deps).
    explicit Corpus(std::vector<Script> scripts);

  private:
    std::map<std::string, Script> scripts_;
    std::vector<std::string> order_;
};

/// Replays one script under bound parameters: applies every step, checking
/// after each that the interpretation is unchanged to `tol`, and that the
/// final diagram is structurally the target. Lemma steps require their
/// scripts verified first; replay verifies dependencies recursively (each
/// dependency at a fixed probe binding). Never throws on proof failure —
/// failures are reported in the returned ProofReport.
ProofReport replay(const Script& s, const std::map<std::string, Phase>& bindings,
                   double tol = 1e-9, const Corpus& lemmas = Corpus::bundled());

/// Callback for replay_traced: called with −1 and the instantiated initial
/// diagram, then once after every applied step, together with the label map
/// at that point.
using ReplayObserver =
    std::function<void(int step, const Diagram& d,
                       const std::map<std::string, NodeId>& labels)>;

/// replay with a per-step observer — the hook for verbose tooling.
ProofReport replay_traced(const Script& s, const std::map<std::string, Phase>& bindings,
                          ReplayObserver observe, double tol = 1e-9,
                          const Corpus& lemmas = Corpus::bundled());

/// Draws one parameter binding for `s` according to its sampling spec.
std::map<std::string, Phase> sample_bindings(const Script& s, Prng& rng);

/// Replays the whole corpus in dependency order, sampling each script's
/// parameters `script.samples` times with the seeded generator. With `only`
/// nonempty, restricts to that script (dependencies still verified).
std::vector<ProofReport> audit_derivations(std::uint64_t seed, double tol = 1e-9,
                                           const std::string& only = "");

/// Negative-control audit: corrupts each angle-bearing step of each script
/// by 0.1 rad (one binding at a time) and expects the replay to fail.
struct MutationOutcome {
    std::string script;
    int step = 0;
    std::string param;
    bool detected = false;
    std::string failure;  ///< the error the corrupted replay reported
};
struct MutationReport {
    int attempted = 0;
    int detected = 0;
    std::vector<MutationOutcome> outcomes;
    bool passed() const { return attempted > 0 && detected == attempted; }
};
MutationReport mutation_audit(std::uint64_t seed, double tol = 1e-9);

/// Named numeric checks for the proof obligations that are arguments about
/// interpretations rather than rewrite chains (uniqueness of the angle
/// records, existence of the singular-value form, invertibility of the
/// branch matrix, the averaging side condition, …).
struct SemanticCheck {
    std::string name;
    int samples = 0;
    int failures = 0;
    double max_residual = 0.0;
    bool ok = false;
    std::string detail;
};
std::vector<std::string> semantic_lemma_catalog();
SemanticCheck check_semantic_lemma(const std::string& name,
                                   std::uint64_t seed = 1);

/// Statements usable as bridge steps: exact equalities verified numerically
/// at registration (each is also re-checked at every use). Returns the
/// statement's two sides for `name`; throws std::out_of_range when unknown.
struct BridgeStatement {
    std::string name;
    std::vector<std::string> params;
    ScriptDiagram lhs;
    ScriptDiagram rhs;
};
const BridgeStatement& bridge_statement(const std::string& name);
std::vector<std::string> bridge_catalog();

}  // namespace zx
