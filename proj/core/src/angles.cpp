#include "zx/angles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "zx/phase.hpp"

namespace zx {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap2pi(double x) {
    double w = std::fmod(x, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    if (w >= 2.0 * kPi) w -= 2.0 * kPi;
    return w;
}

}  // namespace

Matrix m_z(double theta) {
    Matrix m(2, 2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = std::polar(1.0, theta);
    return m;
}

Matrix m_x(double theta) {
    const Complex e = std::polar(1.0, theta);
    Matrix m(2, 2);
    m.at(0, 0) = 0.5 * (1.0 + e);
    m.at(0, 1) = 0.5 * (1.0 - e);
    m.at(1, 0) = 0.5 * (1.0 - e);
    m.at(1, 1) = 0.5 * (1.0 + e);
    return m;
}

Matrix m_h() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m.at(0, 0) = s;
    m.at(0, 1) = s;
    m.at(1, 0) = s;
    m.at(1, 1) = -s;
    return m;
}

double safe_arg(Complex v) {
    if (v == Complex{0.0, 0.0}) return 0.0;
    return std::arg(v);
}

namespace {

EulerResult assemble_euler(double x_plus, double x_minus, Complex z, Complex zp,
                           double gamma_correction) {
    EulerResult r;
    r.x_plus = x_plus;
    r.x_minus = x_minus;
    r.z = z;
    r.z_prime = zp;
    const double arg_z = safe_arg(z);
    const double arg_zp = safe_arg(zp);
    double beta2 = 0.0;
    if (zp != Complex{0.0, 0.0}) {
        beta2 = 2.0 * std::arg(Complex{std::abs(z / zp), 1.0});
    }
    r.beta1 = wrap2pi(arg_z + arg_zp);
    r.beta2 = wrap2pi(beta2);
    r.beta3 = wrap2pi(arg_z - arg_zp);
    r.gamma = wrap2pi(x_plus - arg_z + (gamma_correction - beta2) / 2.0);
    return r;
}

}  // namespace

EulerResult eu_angles(const EulerTriple& t) {
    const double x_plus = (t.alpha1 + t.alpha3) / 2.0;
    const double x_minus = x_plus - t.alpha3;
    const double c = std::cos(t.alpha2 / 2.0);
    const double s = std::sin(t.alpha2 / 2.0);
    const Complex z{c * std::cos(x_plus), s * std::cos(x_minus)};
    const Complex zp{c * std::sin(x_plus), -s * std::sin(x_minus)};
    return assemble_euler(x_plus, x_minus, z, zp, t.alpha2);
}

EulerResult eu_prime_angles(double alpha1, double alpha2) {
    const double x_plus = (alpha1 + alpha2) / 2.0;
    const double x_minus = x_plus - alpha2;
    const Complex z{-std::sin(x_plus), std::cos(x_minus)};
    const Complex zp{std::cos(x_plus), -std::sin(x_minus)};
    return assemble_euler(x_plus, x_minus, z, zp, kPi);
}

UnitaryDecomposition decompose_unitary(const Matrix& u) {
    if (u.rows != 2 || u.cols != 2) {
        throw std::invalid_argument("decompose_unitary: expected a 2x2 matrix");
    }
    const Matrix uu = u.dagger() * u;
    if (residual(uu, Matrix::identity(2)) > 1e-8) {
        throw std::invalid_argument("decompose_unitary: matrix is not unitary");
    }

    constexpr double kFloor = 1e-12;
    const Complex u00 = u.at(0, 0);
    const Complex u01 = u.at(0, 1);
    const Complex u10 = u.at(1, 0);
    const Complex u11 = u.at(1, 1);

    UnitaryDecomposition d;
    if (std::abs(u01) <= kFloor && std::abs(u10) <= kFloor) {
        // Diagonal: u = e^{iγ}·diag(1, e^{iα3}).
        d.alpha1 = 0.0;
        d.alpha2 = 0.0;
        d.gamma = wrap2pi(safe_arg(u00));
        d.alpha3 = wrap2pi(safe_arg(u11 / u00));
        return d;
    }
    if (std::abs(u00) <= kFloor && std::abs(u11) <= kFloor) {
        // Anti-diagonal: u = e^{iγ}·[[0,1],[e^{iα3},0]].
        d.alpha1 = 0.0;
        d.alpha2 = kPi;
        d.gamma = wrap2pi(safe_arg(u01));
        d.alpha3 = wrap2pi(safe_arg(u10 / u01));
        return d;
    }

    // General case: u01/u00 = −i·e^{iα1}·tan(α2/2) with tan(α2/2) > 0.
    const double t = std::abs(u01) / std::abs(u00);
    double alpha2 = 2.0 * std::atan(t);
    double alpha1 = wrap2pi(std::arg(u01 / u00) + kPi / 2.0);
    double alpha3 = wrap2pi(std::arg(u10 / u00) + kPi / 2.0);
    double gamma = wrap2pi(std::arg(u00) - alpha2 / 2.0);
    if (alpha1 >= kPi) {
        // (α1,α2,α3,γ) and (α1−π, 2π−α2, α3+π, γ+α2) give the same matrix.
        alpha1 -= kPi;
        alpha3 = wrap2pi(alpha3 + kPi);
        gamma = wrap2pi(gamma + alpha2);
        alpha2 = 2.0 * kPi - alpha2;
    }
    d.alpha1 = alpha1;
    d.alpha2 = alpha2;
    d.alpha3 = alpha3;
    d.gamma = gamma;
    return d;
}

double solve_branch_angle(double alpha1, double alpha2, double alpha3) {
    const double c1 = std::cos(alpha1);
    const double c3 = std::cos(alpha3);
    if (std::abs(c1) < 1e-12 || std::abs(c3) < 1e-12) {
        throw std::domain_error(
            "solve_branch_angle: tan(alpha1) and tan(alpha3) must be finite");
    }
    const double t1 = std::tan(alpha1);
    const double t3 = std::tan(alpha3);
    const auto g = [&](double x) {
        return t1 * std::cos(x) + t3 * std::cos(alpha2 - x);
    };
    if (std::abs(t1) < 1e-15 && std::abs(t3) < 1e-15) return 0.0;

    constexpr int kScan = 64;
    constexpr int kBisect = 200;
    double prev_x = -kPi / 2.0;
    double prev_g = g(prev_x);
    if (prev_g == 0.0) return prev_x;
    for (int k = 1; k <= kScan; ++k) {
        const double x = -kPi / 2.0 + kPi * static_cast<double>(k) / kScan;
        const double gx = g(x);
        if (gx == 0.0) return x;
        if ((prev_g < 0.0) != (gx < 0.0)) {
            double lo = prev_x;
            double hi = x;
            double glo = prev_g;
            for (int i = 0; i < kBisect; ++i) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if (gm == 0.0) return mid;
                if ((glo < 0.0) == (gm < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_x = x;
        prev_g = gx;
    }
    // g(−π/2) and g(π/2) always have opposite signs, so a bracket exists;
    // reaching here means both endpoints evaluated as the same sign within
    // rounding, i.e. g is numerically zero at the boundary.
    return std::abs(g(-kPi / 2.0)) <= std::abs(g(kPi / 2.0)) ? -kPi / 2.0
                                                             : kPi / 2.0;
}

}  // namespace zx
