#pragma once

#include <string>

#include "zx/diagram.hpp"
#include "zx/matrix.hpp"

namespace zx {

/// The two singular-value form flavors: green-core (Z spine) or red-core
/// (X spine, the H-conjugate shape).
enum class Basis { kGreen, kRed };

char basis_char(Basis b);
Basis basis_from_char(char c);  ///< 'g' or 'r'; throws std::invalid_argument

/// Canonical record of a cycle-free 0→1 diagram:
///   ⟦self⟧ = ⟦scalar⟧ · ⟦core(α, β)⟧,
/// where the green core is [X(α)]—[Z(β+π/2)]—out, whose component ratio is
/// e^{iβ}·tan(α/2), and the red core is the color-swapped, H-conjugated
/// shape. β is reduced to [0,π) (π-commutation gauge); β is 0 whenever
/// α ∈ {0,π} (the ratio degenerates there).
struct SvdState {
    Basis basis = Basis::kGreen;
    Phase alpha;
    Phase beta;
    Diagram scalar;  ///< 0→0 sub-diagram carrying the remaining factor
};

/// Canonical record of a cycle-free 1→1 diagram:
///   ⟦self⟧ = ⟦scalar⟧ · Mz(α5)·Mx(α4)·hub(α3,γ)·Mx(α2)·Mz(α1)
/// (green basis; input on the α1 side), with the middle hub a phased
/// Z spider carrying one X(γ) leaf so that
///   ⟦hub⟧ = (1+e^{iγ})/√2 · diag(1, e^{iα3}·tan(γ/2)).
/// γ ∈ [0,π/2] encodes the singular-value ratio tan(γ/2) = σ2/σ1;
/// α1, α5 ∈ [0,π) per the unitary-decomposition canonicalization. The red
/// basis is the H-conjugate (color-swapped) shape.
struct SvdMap {
    Basis basis = Basis::kGreen;
    Phase alpha1, alpha2, alpha3, alpha4, alpha5;
    Phase gamma;
    Diagram scalar;
};

/// Angles solved directly from a 2×1 vector:
///   v = s·(1+e^{iα}, i·e^{iβ}·(1−e^{iα})) — equivalently
/// v1/v0 = e^{iβ}·tan(α/2), so the record scalar is √2·s. Green-basis
/// relation; red extraction feeds H·v.
struct ExtractedState {
    double alpha = 0.0;
    double beta = 0.0;
    Complex s{1.0, 0.0};
};

/// Angles solved from a numeric SVD of a 2×2 matrix:
///   m = scalar · Mz(α5)·Mx(α4)·diag(1, e^{iα3}·tan(γ/2))·Mx(α2)·Mz(α1).
struct ExtractedMap {
    double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0, alpha4 = 0.0, alpha5 = 0.0;
    double gamma = 0.0;
    Complex scalar{1.0, 0.0};
    bool degenerate_rank = false;        ///< γ = 0 (second singular value 0)
    bool proportional_unitary = false;   ///< γ = π/2 (equal singular values)
};

enum class Verdict { kEqual, kEqualDegenerate, kDifferent };

struct CompareResult {
    Verdict verdict = Verdict::kDifferent;
    std::string detail;  ///< which degeneracy bullet applied, or mismatch info
};

const char* to_string(Verdict v);

/// Puts a cycle-free 0→1 diagram into singular-value state form by
/// structural reduction (leaf twisting, spider fusion, identity removal and
/// pairwise branch merging, followed by the final range-fixing step). Every
/// intermediate surgery is checked against the input's interpretation;
/// drift throws std::logic_error.
/// Throws std::invalid_argument "not-a-state" / "has-cycle".
SvdState normalize_state(const Diagram& d, Basis basis);

/// Puts a cycle-free 1→1 diagram into singular-value map form: subtrees are
/// reduced with the state engine, then the remaining chain is folded one
/// element at a time, re-extracting a canonical record after each
/// composition. Throws std::invalid_argument "wrong-arity" / "has-cycle".
SvdMap normalize_map(const Diagram& d, Basis basis);

/// Inverts the state parameterization for a nonzero 2×1 vector.
/// Throws std::invalid_argument "zero-vector".
ExtractedState extract_state_oracle(const Matrix& v);

/// Numeric SVD with decreasing singular values; γ = 2·atan(σ2/σ1); U and V†
/// canonicalized through decompose_unitary (V† := identity when the singular
/// values coincide). Throws std::invalid_argument "zero-matrix".
ExtractedMap extract_map_oracle(const Matrix& m);

/// Uniqueness comparison of two state records (angle tolerance 1e-7):
/// kEqual when (α, β) agree and the interpretations match; kEqualDegenerate
/// when the interpretations match with α ∈ {0, π} (β carries no content
/// there); kDifferent otherwise. Throws std::invalid_argument "zero-state".
CompareResult compare_states(const SvdState& s1, const SvdState& s2);

/// Uniqueness comparison of two map records: the degenerate bullets are
/// γ = γ′ = 0 (rank one) and γ = γ′ = π/2 (proportional to unitary), where
/// differing angle records can still mean equal maps; otherwise records must
/// agree angle-wise. Throws std::invalid_argument "zero-map".
CompareResult compare_maps(const SvdMap& m1, const SvdMap& m2);

/// True when the six angles of two map records agree to `tol`, possibly
/// after applying the sign redundancy of the three-rotation splitting to
/// either outer unitary: e^{iγ}Mz(c)Mx(b)Mz(a) = e^{i(γ+b)}Mz(c+π)Mx(−b)Mz(a−π),
/// which shifts α1 (or α5) by π, reflects α2 (or α4), and shifts α3 by π.
/// The canonical choice of that sign is unstable exactly when the outer
/// z angle sits at the 0/π boundary, so record comparisons must quotient it.
bool map_angles_equivalent(const SvdMap& a, const SvdMap& b, double tol = 1e-7);

/// Emits the canonical diagram for a record (core shape plus the scalar
/// sub-diagram).
Diagram to_diagram(const SvdState& s);
Diagram to_diagram(const SvdMap& m);

/// A 0→0 diagram interpreting to exactly `s`, built from zero-arity spiders
/// and two-spider pairs only (no parallel edges, so the result is
/// cycle-free).
Diagram scalar_diagram(Complex s);

}  // namespace zx
