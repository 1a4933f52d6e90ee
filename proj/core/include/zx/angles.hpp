#pragma once

#include "zx/matrix.hpp"

namespace zx {

struct EulerTriple {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;
};

/// Output of the Z-X-Z → X-Z-X angle conversions. The four angles are in
/// [0, 2π); the intermediates are kept for diagnostics and testing.
struct EulerResult {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
    double gamma = 0.0;
    double x_plus = 0.0;
    double x_minus = 0.0;
    Complex z{0.0, 0.0};
    Complex z_prime{0.0, 0.0};
};

/// Canonical decomposition u = e^{iγ}·M_Z(α3)·M_X(α2)·M_Z(α1) with α1 ∈ [0,π)
/// (α1 = 0 when u is diagonal or anti-diagonal).
struct UnitaryDecomposition {
    double gamma = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;
    bool canonical = true;
};

/// diag(1, e^{iθ}).
Matrix m_z(double theta);
/// H·M_Z(θ)·H. Note m_x(π) is the bit flip.
Matrix m_x(double theta);
/// (1/√2)[[1,1],[1,−1]].
Matrix m_h();

/// Phase-group arg with the convention arg(0) = 0.
double safe_arg(Complex v);

/// Angles (β1,β2,β3,γ) with
///   M_Z(α3)·M_X(α2)·M_Z(α1) = e^{iγ}·M_X(β3)·M_Z(β2)·M_X(β1),
/// computed via x⁺=(α1+α3)/2, x⁻=x⁺−α3,
///   z  = cos(α2/2)cos(x⁺) + i·sin(α2/2)cos(x⁻),
///   z′ = cos(α2/2)sin(x⁺) − i·sin(α2/2)sin(x⁻),
///   β1 = arg z + arg z′, β2 = 2·arg(i + |z/z′|), β3 = arg z − arg z′,
///   γ  = x⁺ − arg z + (α2−β2)/2,
/// with the conventions arg(0)=0 and z′=0 ⟹ β2=0.
EulerResult eu_angles(const EulerTriple& t);

/// Angles (β1,β2,β3,γ) with
///   M_Z(α2)·⟦H⟧·M_Z(α1) = e^{iγ}·M_X(β3)·M_Z(β2)·M_X(β1),
/// via x⁺=(α1+α2)/2, x⁻=x⁺−α2, z=−sin(x⁺)+i·cos(x⁻), z′=cos(x⁺)−i·sin(x⁻),
/// the same β formulas, and γ = x⁺ − arg z + (π−β2)/2.
EulerResult eu_prime_angles(double alpha1, double alpha2);

/// Inverts u = e^{iγ}M_Z(α3)M_X(α2)M_Z(α1) by entry ratios. Entries with
/// magnitude below 1e−12 are treated as zero, in which case u is diagonal or
/// anti-diagonal and the convention α1 = 0 applies. Throws
/// std::invalid_argument if u is not unitary to 1e−8.
UnitaryDecomposition decompose_unitary(const Matrix& u);

/// Root x0 ∈ [−π/2, π/2] of g(x) = tan(α1)cos(x) + tan(α3)cos(α2−x), found by
/// bisection (200 iterations) inside the first sign-change bracket of a
/// 64-point scan. Returns 0 when g vanishes identically. Throws
/// std::domain_error when tan(α1) or tan(α3) is not finite.
double solve_branch_angle(double alpha1, double alpha2, double alpha3);

}  // namespace zx
