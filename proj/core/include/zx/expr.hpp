#pragma once

#include <map>
#include <string>
#include <vector>

#include "zx/phase.hpp"

namespace zx {

/// A symbolic angle: sums and differences of rational multiples of π,
/// rational multiples of named parameters, and calls into the angle solvers
/// (`eu_b1(a,b,c)`, `eup_g(a,b)`, `solve_branch(a,b,c)`, `atan_merge(a,b)`,
/// …). Examples: "pi/2", "-a", "2a + pi", "eu_g(a1, a2, a3)", "a/2 - 3pi/4".
///
/// Evaluation is exact (rational multiples of π) whenever every leaf is exact
/// and no solver call is involved; otherwise the result is an approximate
/// phase in radians.
class AngleExpr {
  public:
    AngleExpr() = default;

    /// Parses `text`; throws std::runtime_error naming the offending position.
    static AngleExpr parse(const std::string& text);

    /// Evaluates under `env`; throws std::runtime_error on unbound parameters.
    Phase eval(const std::map<std::string, Phase>& env) const;

    /// Sorted unique parameter names appearing in the expression.
    std::vector<std::string> variables() const;

    /// True when the expression contains a solver call (forces approx values).
    bool has_calls() const;

    const std::string& text() const { return text_; }

  private:
    struct Node {
        enum class Kind { kPiConst, kRadians, kVar, kAdd, kSub, kNeg, kCall };
        Kind kind = Kind::kPiConst;
        long long num = 0;  // kPiConst value num/den · π; kVar coefficient
        long long den = 1;
        double radians = 0.0;        // kRadians
        std::string name;            // kVar / kCall
        std::vector<int> children;   // kAdd/kSub/kNeg/kCall operands
    };

    std::vector<Node> nodes_;
    int root_ = -1;
    std::string text_;

    friend class ExprParser;
    Phase eval_node(int idx, const std::map<std::string, Phase>& env) const;
};

}  // namespace zx
