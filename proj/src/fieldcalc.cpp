#include "ruledrel/fieldcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ruledrel/error.hpp"
#include "ruledrel/relnorm.hpp"
#include "ruledrel/scalarfun/eval.hpp"

namespace ruledrel::fieldcalc {

namespace {

// Value with the magnitude it was built from; products multiply magnitudes,
// sums and differences add them.
struct Sc {
    double v = 0, m = 0;
    Sc() = default;
    Sc(double x) : v(x), m(std::abs(x)) {}  // NOLINT(google-explicit-constructor)
    Sc(double value, double mag) : v(value), m(mag) {}
};
Sc operator+(Sc a, Sc b) { return {a.v + b.v, a.m + b.m}; }
Sc operator-(Sc a, Sc b) { return {a.v - b.v, a.m + b.m}; }
Sc operator-(Sc a) { return {-a.v, a.m}; }
Sc operator*(Sc a, Sc b) { return {a.v * b.v, a.m * b.m}; }

// f and the invariants at u, values and the derivatives the closed forms use.
struct Vars {
    double f, f1, f2, d, d1, d2, k, k1, l;
};

Vars vars(const RuledSurface& surface, const scalarfun::Node& f, double u, int order) {
    const auto j = surface.invariant_jets(u, order);
    const auto fj = scalarfun::eval_jet(f, u, order, surface.env());
    if (std::abs(fj[0]) <= 1e-12) throw DomainError("f vanishes at u=" + std::to_string(u));
    auto at = [order](const scalarfun::Jet& x, int k) { return k <= order ? x[k] : 0.0; };
    return {fj[0], at(fj, 1), at(fj, 2), j.delta[0], at(j.delta, 1), at(j.delta, 2),
            j.kappa[0], at(j.kappa, 1), j.lambda[0]};
}

// The same quantities as magnitude-tracking values.
struct SVars {
    Sc f, f1, f2, d, d1, d2, k, k1, l;
    explicit SVars(const Vars& x)
        : f(x.f), f1(x.f1), f2(x.f2), d(x.d), d1(x.d1), d2(x.d2), k(x.k), k1(x.k1), l(x.l) {}
};

Scaled out(Sc s) { return {s.v, s.m}; }

// Numerators shared by the closed forms and the verdicts.
Sc divI_T_num(const SVars& s, Sc v) { return v * (Sc(2) * s.d * s.f1 - s.d1 * s.f); }
Sc curlI_T_num(const SVars& s) {
    return s.d * (Sc(2) * s.d * s.f2 - Sc(3) * s.d1 * s.f1) +
           s.f * (Sc(2) * s.d1 * s.d1 - s.d * s.d2);
}
Sc divI_Q_num(const SVars& s, Sc v) {
    return Sc(3) * s.k * s.f * v * v + (s.d1 * s.f - Sc(2) * s.d * s.f1) * v +
           s.d * s.d * s.f * (s.k - s.l);
}
std::array<Sc, 4> curlI_Q_coeffs(const SVars& s) {
    const Sc one(1);
    const Sc A3 = s.f * s.f * (s.d * s.k1 - Sc(2) * s.d1 * s.k);
    const Sc A2 = -Sc(2) * s.d1 * s.d1 * s.f * s.f + s.d * s.f * (s.d1 * s.f1 + s.d2 * s.f) +
                  s.d * s.d *
                      (s.f1 * s.f1 - Sc(2) * s.f * s.f * (one + s.k * s.l) - s.f * s.f2);
    const Sc A1 = s.d * s.d * s.f * (s.d * s.l * s.f1 + s.f * (s.d * s.k1 - s.d1 * (s.k + s.l)));
    const Sc A0 = -(s.d * s.d) * (s.f * s.f * (s.d1 * s.d1 - s.d * s.d2) +
                                  s.d * s.d * (s.f * s.f2 + s.f * s.f * (one + s.k * s.l) - s.f1 * s.f1));
    return {A0, A1, A2, A3};
}
Sc curlI_Q_num(const SVars& s, Sc v) {
    const auto A = curlI_Q_coeffs(s);
    return A[3] * v * v * v + A[2] * v * v + A[1] * v + A[0];
}
Sc divG_Q_num(const SVars& s, Sc v) {
    const Sc d2 = s.d * s.d;
    return Sc(2) * s.k * s.f * v * v * v * v + (s.d1 * s.f - Sc(2) * s.d * s.f1) * v * v * v +
           Sc(3) * d2 * s.k * s.f * v * v - Sc(2) * d2 * s.d * s.f1 * v +
           d2 * d2 * s.f * (s.k - s.l);
}
// <e, Q> = 0
Sc q_e_num(const SVars& s, Sc v) { return s.k * s.f * v + s.d1 * s.f - s.d * s.f1; }

Sc parallel_condition(const SVars& s, Sc v, Sc vp) {
    const Sc P = s.d1 * s.f - s.d * s.f1;
    return s.k * s.f * v * v * v + P * v * v + s.d * s.f * (s.d * (s.k - s.l) - vp) * v +
           s.d * s.d * P;
}
Sc orthogonal_condition(const SVars& s, Sc v, Sc vp) {
    return (s.k * s.f * v + s.d1 * s.f - s.d * s.f1) * (s.d * s.l + vp) + s.d * s.f * v;
}

Sc alignment(const SVars& s, Relation rel, CurveFamily fam, Sc v) {
    const Sc one(1);
    const Sc P = s.d1 * s.f - s.d * s.f1;
    const Sc d2 = s.d * s.d;
    const Sc v2 = v * v, v3 = v2 * v;
    switch (fam) {
        case CurveFamily::asymptotic_lines:
            if (rel == Relation::tangent) {
                return s.k * s.f * v3 + (s.d1 * s.f - Sc(2) * s.d * s.f1) * v2 +
                       d2 * s.f * (s.k - s.l) * v + Sc(2) * d2 * P;
            }
            return s.k * s.k * s.f * v3 + s.k * (Sc(2) * s.d1 * s.f - s.d * s.f1) * v2 +
                   (d2 * s.k * s.f * (s.k + s.l) + s.d1 * P + Sc(2) * d2 * s.f) * v +
                   d2 * P * (s.k + s.l);
        case CurveFamily::u_curves:
            if (rel == Relation::tangent) {
                return s.k * s.f * v3 + P * v2 + d2 * s.f * (s.k - s.l) * v + d2 * P;
            }
            return s.f * (one + s.k * s.l) * v + s.l * P;
        case CurveFamily::k_curves:
            if (rel == Relation::tangent) {
                return Sc(2) * s.k * s.f * v3 + (s.d1 * s.f - Sc(2) * s.d * s.f1) * v2 +
                       Sc(2) * d2 * s.f * (s.k - s.l) * v +
                       d2 * (Sc(3) * s.d1 * s.f - Sc(2) * s.d * s.f1);
            }
            return s.d1 * s.k * s.f * v3 +
                   (Sc(2) * d2 * s.f * (one + s.k * s.l) + s.d1 * P) * v2 +
                   d2 * (s.d1 * s.f * (Sc(2) * s.l - s.k) - Sc(2) * s.d * s.l * s.f1) * v -
                   d2 * s.d1 * P;
        case CurveFamily::lines_of_curvature: {
            if (rel == Relation::orthogonal) {
                throw SpecError("no alignment condition for Q orthogonal to lines of curvature");
            }
            const Sc Q = s.d * s.f1 - s.d1 * s.f;
            return -(s.k * s.f * s.f1 * v3) +
                   (s.d * s.f1 * s.f1 - s.d * s.f * s.f * (one + s.k * s.l) - s.d1 * s.f * s.f1) * v2 +
                   s.d * s.f * (s.k - s.l) * P * v + s.d * Q * Q;
        }
    }
    throw SpecError("unknown curve family");
}

}  // namespace

double Scaled::relative() const noexcept {
    if (magnitude == 0.0) return std::abs(value) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(value) / magnitude;
}

TchebFields tcheb_field_calculus(const RuledSurface& surface, const scalarfun::Node& f, double u,
                                 double v) {
    const Vars x = vars(surface, f, u, 2);
    const SVars s(x);
    const double w = std::sqrt(v * v + x.d * x.d);
    TchebFields t;
    t.divI_T = divI_T_num(s, Sc(v)).v / (2 * x.d * x.d * w * w);
    t.curlI_T = curlI_T_num(s).v / (2 * x.d * x.d * x.d * w);
    t.divG_T = 0.0;
    t.curlG_T = 0.0;
    return t;
}

FieldCalculus support_field_calculus(const RuledSurface& surface, const scalarfun::Node& f,
                                     double u, double v) {
    const Vars x = vars(surface, f, u, 2);
    const SVars s(x);
    const double w = std::sqrt(v * v + x.d * x.d);
    const double d = x.d, fv = x.f;
    const TchebFields t = tcheb_field_calculus(surface, f, u, v);
    FieldCalculus r;
    r.divI_T = t.divI_T;
    r.curlI_T = t.curlI_T;
    r.divG_T = t.divG_T;
    r.curlG_T = t.curlG_T;
    r.divI_Q = divI_Q_num(s, Sc(v)).v / (4 * d * d * fv * w);
    const auto A = curlI_Q_coeffs(s);
    r.A0 = A[0].v;
    r.A1 = A[1].v;
    r.A2 = A[2].v;
    r.A3 = A[3].v;
    r.curlI_Q = curlI_Q_num(s, Sc(v)).v / (4 * d * d * d * fv * fv * w * w);
    r.divG_Q = divG_Q_num(s, Sc(v)).v / (4 * d * d * fv * w * w * w);
    r.curlG_Q = 0.0;
    return r;
}

TangentField tchebychev_field(const RuledSurface& surface, const scalarfun::Node& f) {
    return [&surface, &f](double u, double v) {
        const auto p = surface.eval_point(u, v);
        const auto fj = scalarfun::eval_jet(f, u, 1, surface.env());
        const auto t = relnorm::tchebychev(p, relnorm::support_over_w(p, fj[0], fj[1]));
        return std::array<double, 2>{t.T1, t.T2};
    };
}

TangentField support_field(const RuledSurface& surface, const scalarfun::Node& f) {
    return [&surface, &f](double u, double v) {
        const auto p = surface.eval_point(u, v);
        const auto fj = scalarfun::eval_jet(f, u, 1, surface.env());
        const auto q = relnorm::support_vector(p, relnorm::support_over_w(p, fj[0], fj[1]));
        return std::array<double, 2>{q.Q1, q.Q2};
    };
}

DivCurl generic_div_curl(const RuledSurface& surface, const scalarfun::Node* f,
                         const TangentField& field, Metric metric, double u, double v,
                         double step) {
    if (metric == Metric::G && f == nullptr) throw SpecError("metric G needs a normalization f");
    auto M = [&](double uu, double vv) -> std::array<double, 3> {
        const auto p = surface.eval_point(uu, vv);
        if (metric == Metric::I) return {p.g11, p.g12, p.g22};
        const auto fj = scalarfun::eval_jet(*f, uu, 1, surface.env());
        const auto g = relnorm::relative_metric(p, relnorm::support_over_w(p, fj[0], fj[1]));
        return {g.G11, g.G12, g.G22};
    };
    // a X^1, a X^2, M12 X^1 + M22 X^2, M11 X^1 + M12 X^2
    auto parts = [&](double uu, double vv) -> std::array<double, 5> {
        const auto m = M(uu, vv);
        const auto X = field(uu, vv);
        const double a = std::sqrt(std::abs(m[0] * m[2] - m[1] * m[1]));
        return {a * X[0], a * X[1], m[1] * X[0] + m[2] * X[1], m[0] * X[0] + m[1] * X[1], a};
    };
    const double h = step;
    const auto up = parts(u + h, v), um = parts(u - h, v);
    const auto vp = parts(u, v + h), vm = parts(u, v - h);
    const double a = parts(u, v)[4];
    if (a == 0.0) throw DomainError("degenerate metric at the query point");
    DivCurl r;
    r.div = ((up[0] - um[0]) / (2 * h) + (vp[1] - vm[1]) / (2 * h)) / a;
    r.curl = ((up[2] - um[2]) / (2 * h) - (vp[3] - vm[3]) / (2 * h)) / a;
    return r;
}

std::string_view family_name(CurveFamily family) {
    switch (family) {
        case CurveFamily::asymptotic_lines: return "asymptotic_lines";
        case CurveFamily::u_curves: return "u_curves";
        case CurveFamily::k_curves: return "k_curves";
        case CurveFamily::lines_of_curvature: return "lines_of_curvature";
    }
    return "?";
}

std::string_view relation_name(Relation relation) {
    return relation == Relation::tangent ? "tangent" : "orthogonal";
}

std::optional<CurveFamily> parse_family(std::string_view name) {
    for (auto fam : {CurveFamily::asymptotic_lines, CurveFamily::u_curves, CurveFamily::k_curves,
                     CurveFamily::lines_of_curvature}) {
        if (family_name(fam) == name) return fam;
    }
    return std::nullopt;
}

std::optional<Relation> parse_relation(std::string_view name) {
    if (name == "tangent") return Relation::tangent;
    if (name == "orthogonal") return Relation::orthogonal;
    return std::nullopt;
}

double curve_family_residual(const RuledSurface& surface, CurveFamily family, double u, double v,
                             double vp) {
    const auto j = surface.invariant_jets(u, 1);
    const double d = j.delta[0], d1 = j.delta[1], k = j.kappa[0], l = j.lambda[0];
    const double w2 = v * v + d * d;
    switch (family) {
        case CurveFamily::asymptotic_lines: return k * v * v + d1 * v + d * d * (k - l) - 2 * d * vp;
        case CurveFamily::u_curves: return vp;
        case CurveFamily::k_curves: return 2 * d * v * vp + d1 * (d * d - v * v);
        case CurveFamily::lines_of_curvature:
            return d * (w2 * (1 + k * l) + d1 * l * v) + (k * w2 + d1 * v - d * d * l) * vp -
                   d * vp * vp;
    }
    return 0.0;
}

Scaled alignment_residual(const RuledSurface& surface, const scalarfun::Node& f, Relation relation,
                          CurveFamily family, double u, double v) {
    if (family == CurveFamily::lines_of_curvature && relation == Relation::orthogonal) {
        throw SpecError("no alignment condition for Q orthogonal to lines of curvature");
    }
    return out(alignment(SVars(vars(surface, f, u, 1)), relation, family, Sc(v)));
}

Scaled directrix_parallel_residual(const RuledSurface& surface, const scalarfun::Node& f, double u,
                                   double v, double vprime) {
    return out(parallel_condition(SVars(vars(surface, f, u, 1)), Sc(v), Sc(vprime)));
}

Scaled directrix_orthogonal_residual(const RuledSurface& surface, const scalarfun::Node& f,
                                     double u, double v, double vprime) {
    return out(orthogonal_condition(SVars(vars(surface, f, u, 1)), Sc(v), Sc(vprime)));
}

std::vector<FieldVerdict> alignment_classify(const RuledSurface& surface, const scalarfun::Node& f,
                                             const AlignmentOptions& options) {
    struct Check {
        const char* key;
        const char* statement;
        std::function<Sc(const SVars&, const Vars&, Sc)> residual;
    };
    auto align = [](Relation r, CurveFamily fam) {
        return [r, fam](const SVars& s, const Vars&, Sc v) { return alignment(s, r, fam, v); };
    };
    const std::vector<Check> checks{
        {"divI_T_zero", "divI T vanishes iff f = c |delta|^(1/2)",
         [](const SVars& s, const Vars&, Sc v) { return divI_T_num(s, v); }},
        {"curlI_T_zero", "curlI T vanishes iff f = |delta|^(1/2) (c1 int |delta|^(1/2) du + c2)",
         [](const SVars& s, const Vars&, Sc) { return curlI_T_num(s); }},
        {"Q_orthogonal_generators", "Q is orthogonal to the generators iff conoidal and f = c |delta|",
         [](const SVars& s, const Vars&, Sc v) { return q_e_num(s, v); }},
        {"divI_Q_zero", "divI Q vanishes iff right conoid and f = c |delta|^(1/2)",
         [](const SVars& s, const Vars&, Sc v) { return divI_Q_num(s, v); }},
        {"curlI_Q_zero", "curlI Q vanishes (Edlinger with constant invariants and constant f, or the listed conoid and implicit families)",
         [](const SVars& s, const Vars&, Sc v) { return curlI_Q_num(s, v); }},
        {"divG_Q_zero", "divG Q vanishes iff right helicoid and f constant",
         [](const SVars& s, const Vars&, Sc v) { return divG_Q_num(s, v); }},
        {"Q_tangent_asymptotic", "Q is tangent to the curved asymptotic lines iff right helicoid and f constant",
         align(Relation::tangent, CurveFamily::asymptotic_lines)},
        {"Q_orthogonal_asymptotic",
         "Q is orthogonal to the curved asymptotic lines iff right conoid and f = c |delta| exp(2 int delta/delta' du)",
         align(Relation::orthogonal, CurveFamily::asymptotic_lines)},
        {"Q_tangent_u_curves", "Q is tangent to the u-curves iff right conoid and f = c |delta|",
         align(Relation::tangent, CurveFamily::u_curves)},
        {"Q_orthogonal_u_curves",
         "Q is orthogonal to the u-curves iff the striction curve is a line of curvature and f = c |delta|",
         align(Relation::orthogonal, CurveFamily::u_curves)},
        {"Q_tangent_k_curves", "Q is tangent to the K-curves iff right helicoid and f constant",
         align(Relation::tangent, CurveFamily::k_curves)},
        {"Q_orthogonal_k_curves", "Q is orthogonal to the K-curves iff Edlinger and f constant",
         align(Relation::orthogonal, CurveFamily::k_curves)},
        {"Q_tangent_lines_of_curvature",
         "Q is tangent to one family of lines of curvature iff Edlinger and f constant; that family is v' = (delta^2 + kappa^2 w^2)/(delta kappa)",
         [](const SVars& s, const Vars& x, Sc v) {
             const Sc quartic = alignment(s, Relation::tangent, CurveFamily::lines_of_curvature, v);
             if (std::abs(x.k) <= 1e-12) return quartic;
             const double w2 = v.v * v.v + x.d * x.d;
             const Sc vp((x.d * x.d + x.k * x.k * w2) / (x.d * x.k));
             const Sc along = parallel_condition(s, v, vp);
             // Report whichever condition is further from holding.
             const double rq = quartic.m > 0 ? std::abs(quartic.v) / quartic.m : 0.0;
             const double ra = along.m > 0 ? std::abs(along.v) / along.m : 0.0;
             return ra > rq ? along : quartic;
         }},
    };

    const int n = std::max(options.grid, 2);
    const Interval& dom = surface.domain();
    std::vector<double> us(static_cast<std::size_t>(n)), vs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        us[static_cast<std::size_t>(i)] = i == n - 1 ? dom.hi : dom.lo + t * dom.length();
        vs[static_cast<std::size_t>(i)] = options.v_min + t * (options.v_max - options.v_min);
    }
    std::vector<Vars> at_u;
    at_u.reserve(us.size());
    for (double u : us) at_u.push_back(vars(surface, f, u, 2));

    std::vector<FieldVerdict> verdicts;
    for (const auto& c : checks) {
        FieldVerdict fv;
        fv.key = c.key;
        fv.statement = c.statement;
        fv.tolerance = options.tolerance;
        for (std::size_t i = 0; i < us.size(); ++i) {
            const SVars s(at_u[i]);
            for (double v : vs) {
                const double r = out(c.residual(s, at_u[i], Sc(v))).relative();
                if (!fv.witness || r > fv.residual) {
                    fv.residual = r;
                    fv.witness = std::array<double, 2>{us[i], v};
                }
            }
        }
        fv.holds = fv.residual <= options.tolerance;
        verdicts.push_back(std::move(fv));
    }
    return verdicts;
}

}  // namespace ruledrel::fieldcalc
