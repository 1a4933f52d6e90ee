#include "zx/matrix.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zx {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Complex(1, 0);
    return m;
}

Matrix Matrix::scalar(Complex value) {
    Matrix m(1, 1);
    m.a[0] = value;
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols != o.rows) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix r(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            Complex v = at(i, k);
            if (v == Complex(0, 0)) continue;
            for (std::size_t j = 0; j < o.cols; ++j) r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (!same_shape(o)) throw std::invalid_argument("matrix sum: shape mismatch");
    Matrix r = *this;
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (!same_shape(o)) throw std::invalid_argument("matrix difference: shape mismatch");
    Matrix r = *this;
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
    return r;
}

Matrix Matrix::scaled(Complex s) const {
    Matrix r = *this;
    for (auto& v : r.a) v *= s;
    return r;
}

Matrix Matrix::kron(const Matrix& o) const {
    Matrix r(rows * o.rows, cols * o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            Complex v = at(i, j);
            if (v == Complex(0, 0)) continue;
            for (std::size_t k = 0; k < o.rows; ++k)
                for (std::size_t l = 0; l < o.cols; ++l)
                    r.at(i * o.rows + k, j * o.cols + l) = v * o.at(k, l);
        }
    return r;
}

Matrix Matrix::dagger() const {
    Matrix r(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) r.at(j, i) = std::conj(at(i, j));
    return r;
}

double Matrix::frobenius() const {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

std::pair<double, std::pair<std::size_t, std::size_t>> Matrix::max_abs() const {
    double best = -1.0;
    std::pair<std::size_t, std::size_t> pos{0, 0};
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            double m = std::abs(at(i, j));
            if (m > best) {
                best = m;
                pos = {i, j};
            }
        }
    return {best, pos};
}

std::string Matrix::str() const {
    std::ostringstream os;
    os.precision(6);
    for (std::size_t i = 0; i < rows; ++i) {
        os << (i == 0 ? "[" : " ");
        for (std::size_t j = 0; j < cols; ++j) {
            const Complex& v = at(i, j);
            os << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i)";
            if (j + 1 < cols) os << ", ";
        }
        os << (i + 1 == rows ? "]" : "\n");
    }
    return os.str();
}

double residual(const Matrix& m1, const Matrix& m2) {
    if (!m1.same_shape(m2)) throw std::invalid_argument("residual: shape mismatch");
    return (m1 - m2).frobenius() / std::max(1.0, m1.frobenius());
}

bool equal_exact(const Matrix& m1, const Matrix& m2, double tol) {
    return residual(m1, m2) <= tol;
}

PhaseEstimate equal_up_to_phase(const Matrix& m1, const Matrix& m2, double tol) {
    if (!m1.same_shape(m2)) throw std::invalid_argument("equal_up_to_phase: shape mismatch");
    auto [mag, pos] = m2.max_abs();
    if (mag <= 0.0) throw std::invalid_argument("equal_up_to_phase: right matrix is zero");
    Complex ratio = m1.at(pos.first, pos.second) / m2.at(pos.first, pos.second);
    PhaseEstimate est;
    est.theta = std::arg(ratio);
    est.equal = equal_exact(m1, m2.scaled(std::polar(1.0, est.theta)), tol);
    if (!est.equal) est.theta = 0.0;
    return est;
}

}  // namespace zx
