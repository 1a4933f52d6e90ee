#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace zx {

using Complex = std::complex<double>;

/// Dense complex matrix with power-of-two dimensions (2^0 = 1 allowed),
/// row-major storage. Rows index outputs, columns index inputs, and leg 0
/// is the most significant bit on each side.
struct Matrix {
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::vector<Complex> a;

    Matrix() : a(1, Complex(1, 0)) {}
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Complex(0, 0)) {}

    Complex& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static Matrix identity(std::size_t n);
    static Matrix scalar(Complex value);

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    Matrix operator*(const Matrix& o) const;   ///< matrix product (throws on mismatch)
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(Complex s) const;
    Matrix kron(const Matrix& o) const;        ///< Kronecker product
    Matrix dagger() const;                     ///< conjugate transpose

    double frobenius() const;
    /// Largest entry magnitude and its (row, col) position.
    std::pair<double, std::pair<std::size_t, std::size_t>> max_abs() const;

    std::string str() const;  ///< human-readable pretty print
};

/// True iff ‖m1−m2‖_F ≤ tol·max(1, ‖m1‖_F). Throws on shape mismatch.
bool equal_exact(const Matrix& m1, const Matrix& m2, double tol = 1e-9);

/// Relative residual ‖m1−m2‖_F / max(1, ‖m1‖_F).
double residual(const Matrix& m1, const Matrix& m2);

struct PhaseEstimate {
    bool equal = false;
    double theta = 0.0;  ///< m1 ≈ e^{iθ}·m2 when equal
};

/// Tests m1 = e^{iθ}·m2 for some θ, estimating θ from the largest-magnitude
/// entry of m2. Throws on shape mismatch; m2 must be nonzero.
PhaseEstimate equal_up_to_phase(const Matrix& m1, const Matrix& m2, double tol = 1e-9);

}  // namespace zx
