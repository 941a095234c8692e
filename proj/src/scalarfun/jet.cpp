#include "ruledrel/scalarfun/jet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ruledrel/error.hpp"

namespace ruledrel::scalarfun {

namespace {

constexpr std::array<double, Jet::kMaxOrder + 1> kFactorial = [] {
    std::array<double, Jet::kMaxOrder + 1> f{};
    f[0] = 1.0;
    for (std::size_t k = 1; k < f.size(); ++k) f[k] = f[k - 1] * static_cast<double>(k);
    return f;
}();

constexpr double kAbsZeroTolerance = 1e-12;

void check_order(int order) {
    if (order < 0 || order > Jet::kMaxOrder) {
        throw std::invalid_argument("jet order " + std::to_string(order) + " outside [0, " +
                                    std::to_string(Jet::kMaxOrder) + "]");
    }
}

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

}  // namespace

Jet Jet::constant(double value, double base, int order) {
    check_order(order);
    Jet j;
    j.base_ = base;
    j.order_ = order;
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(double base, int order) {
    Jet j = constant(base, base, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

Jet Jet::from_derivatives(double base, std::span<const double> derivatives) {
    if (derivatives.empty()) throw std::invalid_argument("jet needs at least a value");
    const int order = static_cast<int>(derivatives.size()) - 1;
    Jet j = constant(0.0, base, order);
    for (int k = 0; k <= order; ++k) j.c_[idx(k)] = derivatives[idx(k)] / kFactorial[idx(k)];
    return j;
}

Jet Jet::from_taylor(double base, std::span<const double> coefficients) {
    if (coefficients.empty()) throw std::invalid_argument("jet needs at least a value");
    const int order = static_cast<int>(coefficients.size()) - 1;
    Jet j = constant(0.0, base, order);
    for (int k = 0; k <= order; ++k) j.c_[idx(k)] = coefficients[idx(k)];
    return j;
}

double Jet::operator[](int k) const {
    if (k < 0 || k > order_) {
        throw JetOrderError("derivative of order " + std::to_string(k) +
                            " requested from a jet of order " + std::to_string(order_));
    }
    return c_[idx(k)] * kFactorial[idx(k)];
}

Jet Jet::derivative() const {
    if (order_ < 1) throw JetOrderError("cannot differentiate a jet of order 0");
    Jet d = constant(0.0, base_, order_ - 1);
    for (int k = 0; k < order_; ++k) d.c_[idx(k)] = c_[idx(k + 1)] * static_cast<double>(k + 1);
    return d;
}

Jet Jet::truncated(int order) const {
    if (order > order_) {
        throw JetOrderError("cannot raise jet order from " + std::to_string(order_) + " to " +
                            std::to_string(order));
    }
    Jet t = constant(0.0, base_, order);
    for (int k = 0; k <= order; ++k) t.c_[idx(k)] = c_[idx(k)];
    return t;
}

void Jet::require_compatible(const Jet& other) const {
    if (base_ != other.base_ || order_ != other.order_) {
        throw std::invalid_argument("jet arithmetic requires equal base point and order");
    }
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (int k = 0; k <= order_; ++k) r.c_[idx(k)] = -c_[idx(k)];
    return r;
}

Jet& Jet::operator+=(const Jet& other) {
    require_compatible(other);
    for (int k = 0; k <= order_; ++k) c_[idx(k)] += other.c_[idx(k)];
    return *this;
}

Jet& Jet::operator-=(const Jet& other) {
    require_compatible(other);
    for (int k = 0; k <= order_; ++k) c_[idx(k)] -= other.c_[idx(k)];
    return *this;
}

Jet& Jet::operator*=(const Jet& other) {
    require_compatible(other);
    std::array<double, kMaxOrder + 1> r{};
    for (int k = 0; k <= order_; ++k) {
        double sum = 0.0;
        for (int j = 0; j <= k; ++j) sum += c_[idx(j)] * other.c_[idx(k - j)];
        r[idx(k)] = sum;
    }
    c_ = r;
    return *this;
}

Jet& Jet::operator/=(const Jet& other) {
    require_compatible(other);
    const double b0 = other.c_[0];
    if (b0 == 0.0) throw DomainError("division by zero");
    std::array<double, kMaxOrder + 1> q{};
    for (int k = 0; k <= order_; ++k) {
        double sum = c_[idx(k)];
        for (int j = 1; j <= k; ++j) sum -= other.c_[idx(j)] * q[idx(k - j)];
        q[idx(k)] = sum / b0;
    }
    c_ = q;
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}

Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (int k = 0; k <= order_; ++k) c_[idx(k)] *= s;
    return *this;
}

Jet& Jet::operator/=(double s) {
    if (s == 0.0) throw DomainError("division by zero");
    for (int k = 0; k <= order_; ++k) c_[idx(k)] /= s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, const Jet& b) { return a *= b; }
Jet operator/(Jet a, const Jet& b) { return a /= b; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(double s, const Jet& a) { return -a + s; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet operator/(double s, const Jet& a) {
    return Jet::constant(s, a.base(), a.order()) / a;
}

Jet exp(const Jet& a) {
    const int n = a.order();
    std::array<double, Jet::kMaxOrder + 1> b{};
    b[0] = std::exp(a.taylor(0));
    for (int k = 1; k <= n; ++k) {
        double sum = 0.0;
        for (int j = 1; j <= k; ++j) sum += j * a.taylor(j) * b[idx(k - j)];
        b[idx(k)] = sum / k;
    }
    return Jet::from_taylor(a.base(), std::span(b.data(), idx(n + 1)));
}

Jet log(const Jet& a) {
    const double a0 = a.taylor(0);
    if (!(a0 > 0.0)) throw DomainError("ln of a nonpositive argument");
    const int n = a.order();
    std::array<double, Jet::kMaxOrder + 1> b{};
    b[0] = std::log(a0);
    for (int k = 1; k <= n; ++k) {
        double sum = 0.0;
        for (int j = 1; j < k; ++j) sum += j * b[idx(j)] * a.taylor(k - j);
        b[idx(k)] = (a.taylor(k) - sum / k) / a0;
    }
    return Jet::from_taylor(a.base(), std::span(b.data(), idx(n + 1)));
}

namespace {

void sincos(const Jet& a, std::array<double, Jet::kMaxOrder + 1>& s,
            std::array<double, Jet::kMaxOrder + 1>& c) {
    s[0] = std::sin(a.taylor(0));
    c[0] = std::cos(a.taylor(0));
    for (int k = 1; k <= a.order(); ++k) {
        double ss = 0.0;
        double cc = 0.0;
        for (int j = 1; j <= k; ++j) {
            ss += j * a.taylor(j) * c[idx(k - j)];
            cc += j * a.taylor(j) * s[idx(k - j)];
        }
        s[idx(k)] = ss / k;
        c[idx(k)] = -cc / k;
    }
}

bool is_small_integer(double x) { return std::abs(x) <= 64.0 && std::floor(x) == x; }

Jet integer_power(const Jet& a, int exponent) {
    Jet result = Jet::constant(1.0, a.base(), a.order());
    Jet factor = a;
    unsigned e = static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
    while (e != 0) {
        if (e & 1U) result *= factor;
        e >>= 1U;
        if (e != 0) factor *= factor;
    }
    if (exponent < 0) return 1.0 / result;
    return result;
}

}  // namespace

Jet sin(const Jet& a) {
    std::array<double, Jet::kMaxOrder + 1> s{};
    std::array<double, Jet::kMaxOrder + 1> c{};
    sincos(a, s, c);
    return Jet::from_taylor(a.base(), std::span(s.data(), idx(a.order() + 1)));
}

Jet cos(const Jet& a) {
    std::array<double, Jet::kMaxOrder + 1> s{};
    std::array<double, Jet::kMaxOrder + 1> c{};
    sincos(a, s, c);
    return Jet::from_taylor(a.base(), std::span(c.data(), idx(a.order() + 1)));
}

Jet tan(const Jet& a) {
    std::array<double, Jet::kMaxOrder + 1> s{};
    std::array<double, Jet::kMaxOrder + 1> c{};
    sincos(a, s, c);
    const auto n = idx(a.order() + 1);
    return Jet::from_taylor(a.base(), std::span(s.data(), n)) /
           Jet::from_taylor(a.base(), std::span(c.data(), n));
}

Jet sqrt(const Jet& a) {
    const double a0 = a.taylor(0);
    if (a0 < 0.0 || (a0 == 0.0 && a.order() > 0)) {
        throw DomainError("sqrt of a nonpositive argument");
    }
    if (a0 == 0.0) return Jet::constant(0.0, a.base(), 0);
    return pow(a, 0.5);
}

Jet abs(const Jet& a) {
    const double a0 = a.taylor(0);
    if (a.order() >= 1 && std::abs(a0) < kAbsZeroTolerance) {
        throw DomainError("abs is not differentiable at 0");
    }
    return a0 < 0.0 ? -a : a;
}

Jet pow(const Jet& a, double exponent) {
    if (is_small_integer(exponent)) {
        if (exponent < 0.0 && a.taylor(0) == 0.0) throw DomainError("division by zero");
        return integer_power(a, static_cast<int>(exponent));
    }
    const double a0 = a.taylor(0);
    if (a0 < 0.0) throw DomainError("non-integer power of a negative argument");
    if (a0 == 0.0) {
        if (exponent > 0.0 && a.order() == 0) return Jet::constant(0.0, a.base(), 0);
        throw DomainError("non-integer power of zero is not differentiable");
    }
    const int n = a.order();
    std::array<double, Jet::kMaxOrder + 1> b{};
    b[0] = std::pow(a0, exponent);
    for (int k = 1; k <= n; ++k) {
        double sum = 0.0;
        for (int j = 1; j <= k; ++j) sum += (exponent * j - (k - j)) * a.taylor(j) * b[idx(k - j)];
        b[idx(k)] = sum / (k * a0);
    }
    return Jet::from_taylor(a.base(), std::span(b.data(), idx(n + 1)));
}

Jet pow(const Jet& a, const Jet& exponent) {
    bool constant_exponent = true;
    for (int k = 1; k <= exponent.order(); ++k) {
        if (exponent.taylor(k) != 0.0) constant_exponent = false;
    }
    if (constant_exponent) return pow(a, exponent.value());
    if (!(a.taylor(0) > 0.0)) throw DomainError("variable power of a nonpositive argument");
    return exp(exponent * log(a));
}

}  // namespace ruledrel::scalarfun
