#include "ruledrel/scalarfun/bijet.hpp"

#include <cmath>
#include <stdexcept>

#include "ruledrel/error.hpp"

namespace ruledrel::scalarfun {

namespace {

void require_compatible(const BiJet& a, const BiJet& b) {
    if (a.u != b.u || a.v != b.v) {
        throw std::invalid_argument("bijet arithmetic requires equal base points");
    }
}

// Chain rule for a scalar function with value fa and slope dfa at a.value.
BiJet chain(const BiJet& a, double fa, double dfa) {
    return {a.u, a.v, fa, dfa * a.du, dfa * a.dv};
}

}  // namespace

BiJet operator-(const BiJet& a) { return {a.u, a.v, -a.value, -a.du, -a.dv}; }

BiJet operator+(const BiJet& a, const BiJet& b) {
    require_compatible(a, b);
    return {a.u, a.v, a.value + b.value, a.du + b.du, a.dv + b.dv};
}

BiJet operator-(const BiJet& a, const BiJet& b) {
    require_compatible(a, b);
    return {a.u, a.v, a.value - b.value, a.du - b.du, a.dv - b.dv};
}

BiJet operator*(const BiJet& a, const BiJet& b) {
    require_compatible(a, b);
    return {a.u, a.v, a.value * b.value, a.du * b.value + a.value * b.du,
            a.dv * b.value + a.value * b.dv};
}

BiJet operator/(const BiJet& a, const BiJet& b) {
    require_compatible(a, b);
    if (b.value == 0.0) throw DomainError("division by zero");
    const double q = a.value / b.value;
    return {a.u, a.v, q, (a.du - q * b.du) / b.value, (a.dv - q * b.dv) / b.value};
}

BiJet exp(const BiJet& a) {
    const double e = std::exp(a.value);
    return chain(a, e, e);
}

BiJet log(const BiJet& a) {
    if (!(a.value > 0.0)) throw DomainError("ln of a nonpositive argument");
    return chain(a, std::log(a.value), 1.0 / a.value);
}

BiJet sin(const BiJet& a) { return chain(a, std::sin(a.value), std::cos(a.value)); }

BiJet cos(const BiJet& a) { return chain(a, std::cos(a.value), -std::sin(a.value)); }

BiJet tan(const BiJet& a) {
    const double c = std::cos(a.value);
    if (c == 0.0) throw DomainError("division by zero");
    return chain(a, std::tan(a.value), 1.0 / (c * c));
}

BiJet sqrt(const BiJet& a) {
    if (!(a.value > 0.0)) throw DomainError("sqrt of a nonpositive argument");
    const double r = std::sqrt(a.value);
    return chain(a, r, 0.5 / r);
}

BiJet abs(const BiJet& a) {
    if (std::abs(a.value) < 1e-12) throw DomainError("abs is not differentiable at 0");
    return a.value < 0.0 ? -a : a;
}

BiJet pow(const BiJet& a, const BiJet& exponent) {
    require_compatible(a, exponent);
    if (exponent.du == 0.0 && exponent.dv == 0.0) {
        const double r = exponent.value;
        const bool integral = std::floor(r) == r;
        if (a.value == 0.0) {
            if (integral && r >= 1.0) {
                return chain(a, 0.0, r == 1.0 ? 1.0 : 0.0);
            }
            throw DomainError("power of zero is not differentiable");
        }
        if (a.value < 0.0 && !integral) throw DomainError("non-integer power of a negative argument");
        const double p = std::pow(a.value, r);
        return chain(a, p, r * std::pow(a.value, r - 1.0));
    }
    if (!(a.value > 0.0)) throw DomainError("variable power of a nonpositive argument");
    return exp(exponent * log(a));
}

}  // namespace ruledrel::scalarfun
