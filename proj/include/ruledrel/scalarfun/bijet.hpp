#pragma once

namespace ruledrel::scalarfun {

/// First-order jet of a function of (u, v): value and both partials.
struct BiJet {
    double u = 0.0;
    double v = 0.0;
    double value = 0.0;
    double du = 0.0;
    double dv = 0.0;

    static BiJet constant(double value, double u, double v) { return {u, v, value, 0.0, 0.0}; }
};

BiJet operator-(const BiJet& a);
BiJet operator+(const BiJet& a, const BiJet& b);
BiJet operator-(const BiJet& a, const BiJet& b);
BiJet operator*(const BiJet& a, const BiJet& b);
BiJet operator/(const BiJet& a, const BiJet& b);

BiJet exp(const BiJet& a);
BiJet log(const BiJet& a);
BiJet sin(const BiJet& a);
BiJet cos(const BiJet& a);
BiJet tan(const BiJet& a);
BiJet sqrt(const BiJet& a);
BiJet abs(const BiJet& a);
BiJet pow(const BiJet& a, const BiJet& exponent);

}  // namespace ruledrel::scalarfun
