#include "zx/phase.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace zx {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;  // guard against fmod rounding
    return r;
}

double angle_distance(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d <= -std::numbers::pi) d += kTwoPi;
    if (d > std::numbers::pi) d -= kTwoPi;
    return d;
}

Phase Phase::exact(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("phase denominator must be nonzero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    // canonical residue modulo 2π: numerator in [0, 2·den)
    std::int64_t m = 2 * den;
    num %= m;
    if (num < 0) num += m;
    return Phase(true, num, den, 0.0);
}

Phase Phase::radians(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("phase must be finite");
    return Phase(false, 0, 1, wrap_angle(value));
}

bool Phase::is_zero() const {
    return exact_ ? num_ == 0 : rad_ == 0.0;
}

double Phase::value() const {
    if (exact_) return static_cast<double>(num_) / static_cast<double>(den_) * std::numbers::pi;
    return rad_;
}

bool Phase::is_dyadic() const {
    if (!exact_) return false;
    std::int64_t d = den_;
    while (d % 2 == 0) d /= 2;
    return d == 1;
}

Phase Phase::operator+(const Phase& other) const {
    if (exact_ && other.exact_) {
        // num/den + num'/den'
        std::int64_t g = std::gcd(den_, other.den_);
        std::int64_t d = den_ / g * other.den_;
        std::int64_t n = num_ * (other.den_ / g) + other.num_ * (den_ / g);
        return exact(n, d);
    }
    return radians(value() + other.value());
}

Phase Phase::operator-(const Phase& other) const {
    return *this + (-other);
}

Phase Phase::operator-() const {
    if (exact_) return exact(-num_, den_);
    return radians(-rad_);
}

Phase Phase::times(std::int64_t p, std::int64_t q) const {
    if (q == 0) throw std::invalid_argument("phase scale denominator must be nonzero");
    if (exact_) return exact(num_ * p, den_ * q);
    return radians(rad_ * static_cast<double>(p) / static_cast<double>(q));
}

bool Phase::identical(const Phase& other) const {
    if (exact_ != other.exact_) return false;
    if (exact_) return num_ == other.num_ && den_ == other.den_;
    return rad_ == other.rad_;
}

double Phase::distance(const Phase& other) const {
    return angle_distance(value(), other.value());
}

std::string Phase::str() const {
    std::ostringstream os;
    if (exact_) {
        if (num_ == 0) return "0";
        os << num_;
        os << "pi";
        if (den_ != 1) os << "/" << den_;
    } else {
        os << rad_ << "rad";
    }
    return os.str();
}

}  // namespace zx
