#pragma once

#include <cstdint>
#include <numbers>
#include <string>

namespace zx {

/// An angle used as a spider phase, kept modulo 2π.
///
/// A phase is either *exact* — a reduced rational multiple of π with the
/// numerator canonicalized into [0, 2·den), i.e. a value in [0, 2π) — or
/// *approx* — a plain double in radians, folded into [0, 2π) on
/// construction. Arithmetic between two exact phases stays exact; as soon
/// as an approx phase is involved the result is approx.
class Phase {
public:
    /// Exact zero.
    constexpr Phase() = default;

    /// (num/den)·π, reduced and canonicalized into [0, 2π).
    static Phase exact(std::int64_t num, std::int64_t den = 1);

    /// Radians, folded into [0, 2π).
    static Phase radians(double value);

    static Phase zero() { return Phase(); }
    static Phase pi() { return exact(1); }

    bool is_exact() const { return exact_; }
    bool is_zero() const;

    /// Numerator/denominator of the π-multiple; only valid when is_exact().
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    /// Value in radians, in [0, 2π).
    double value() const;

    /// True iff the phase is an exact dyadic multiple of π (denominator a
    /// power of two).
    bool is_dyadic() const;

    Phase operator+(const Phase& other) const;
    Phase operator-(const Phase& other) const;
    Phase operator-() const;

    /// Multiply by a rational scalar p/q (exact stays exact).
    Phase times(std::int64_t p, std::int64_t q = 1) const;

    /// Structural identity: same representation class and same canonical
    /// value. This is the comparison used by diagram isomorphism.
    bool identical(const Phase& other) const;

    bool operator==(const Phase& other) const { return identical(other); }

    /// Shortest signed angular distance to `other`, in (−π, π].
    double distance(const Phase& other) const;

    std::string str() const;

private:
    Phase(bool exact, std::int64_t num, std::int64_t den, double rad)
        : exact_(exact), num_(num), den_(den), rad_(rad) {}

    bool exact_ = true;
    std::int64_t num_ = 0;  ///< reduced, in [0, 2·den_)
    std::int64_t den_ = 1;  ///< > 0
    double rad_ = 0.0;      ///< canonical value when approx
};

/// Shortest signed distance between two angles in radians, result in (−π, π].
double angle_distance(double a, double b);

/// Fold an angle into [0, 2π).
double wrap_angle(double a);

}  // namespace zx
