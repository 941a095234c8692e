#pragma once

#include <array>
#include <span>

namespace ruledrel::scalarfun {

/// Truncated Taylor expansion of a scalar function of u at a base point.
///
/// Public accessors speak in derivative values, jet[k] = f^(k)(u); the
/// coefficients are stored divided by k! so that products and compositions are
/// plain Cauchy recurrences. Two jets combine only if their base point and
/// order agree; mixing them throws std::invalid_argument.
class Jet {
public:
    static constexpr int kMaxOrder = 12;

    Jet() = default;

    static Jet constant(double value, double base, int order);
    /// The identity function u -> u.
    static Jet variable(double base, int order);
    static Jet from_derivatives(double base, std::span<const double> derivatives);
    static Jet from_taylor(double base, std::span<const double> coefficients);

    double base() const noexcept { return base_; }
    int order() const noexcept { return order_; }
    double value() const noexcept { return c_[0]; }
    double taylor(int k) const { return c_[static_cast<std::size_t>(k)]; }
    /// k-th derivative value.
    double operator[](int k) const;

    /// Jet of f' at the same point, one order lower. Requires order >= 1.
    Jet derivative() const;
    Jet truncated(int order) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& other);
    Jet& operator-=(const Jet& other);
    Jet& operator*=(const Jet& other);
    Jet& operator/=(const Jet& other);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);

private:
    void require_compatible(const Jet& other) const;

    double base_ = 0.0;
    int order_ = 0;
    std::array<double, kMaxOrder + 1> c_{};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(Jet a, const Jet& b);
Jet operator/(Jet a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator-(Jet a, double s);
Jet operator*(Jet a, double s);
Jet operator/(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(double s, const Jet& a);
Jet operator*(double s, Jet a);
Jet operator/(double s, const Jet& a);

// Domain violations throw DomainError.
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet sqrt(const Jet& a);
/// sign(a) * a; rejected within 1e-12 of zero when derivatives are requested.
Jet abs(const Jet& a);
Jet pow(const Jet& a, double exponent);
Jet pow(const Jet& a, const Jet& exponent);

}  // namespace ruledrel::scalarfun
