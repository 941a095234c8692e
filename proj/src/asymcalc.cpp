#include "ruledrel/asymcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ruledrel/error.hpp"
#include "ruledrel/oracle.hpp"
#include "ruledrel/scalarfun/eval.hpp"

namespace ruledrel::asymcalc {

namespace {

using scalarfun::Jet;

constexpr double kZero = 1e-12;
constexpr int kGrid = 101;

Jet f_jet(const RuledSurface& surface, const scalarfun::Node& f, double u, int order) {
    return scalarfun::eval_jet(f, u, order, surface.env());
}

// Invariants, f and g = f/delta as jets of one common order.
struct Local {
    Jet f, d, k, l, g;
};

Local local(const RuledSurface& surface, const scalarfun::Node& f, double u, int order) {
    const auto j = surface.invariant_jets(u, order);
    Jet fj = f_jet(surface, f, u, order);
    if (std::abs(fj.value()) <= kZero) throw DomainError("f vanishes at u=" + std::to_string(u));
    Jet g = fj / j.delta;
    return {fj, j.delta, j.kappa, j.lambda, g};
}

std::vector<double> grid(const Interval& dom, int n) {
    std::vector<double> us(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        us[static_cast<std::size_t>(i)] =
            (i == n - 1) ? dom.hi : dom.lo + dom.length() * static_cast<double>(i) / (n - 1);
    }
    return us;
}

double scaled(double value, double scale) { return std::abs(value) / std::max(1.0, std::abs(scale)); }

class ImageModel final : public detail::SurfaceModel {
public:
    ImageModel(RuledSurface parent, scalarfun::Expr f)
        : SurfaceModel(parent.domain(), parent.u0(), parent.jet_order() - 2,
                       parent.model()->constants()),
          parent_(std::move(parent)),
          f_(std::move(f)) {}

    scalarfun::InvariantJets invariant_jets(double u, int order) const override {
        if (order > max_order()) {
            throw JetOrderError("image invariants requested to order " + std::to_string(order) +
                                ", available " + std::to_string(max_order()));
        }
        const Local a = local(parent_, *f_, u, order + 2);
        const Jet g = a.g.truncated(order);
        const Jet gpp = a.g.derivative().derivative();
        const Jet k = a.k.truncated(order);
        const Jet kg = k * g;
        return {kg, k, -(gpp + g) / kg};
    }

    FrameState frame_at(double u) const override {
        FrameState fr = parent_.frame_at(u);
        const Local a = local(parent_, *f_, u, 1);
        fr.s = -a.g[1] * fr.e + a.g[0] * fr.n;
        return fr;
    }

private:
    RuledSurface parent_;
    scalarfun::Expr f_;
};

Verdict make_verdict(std::string key, double residual, double tol, std::optional<double> witness) {
    Verdict v;
    v.key = std::move(key);
    v.residual = residual;
    v.tolerance = tol;
    v.holds = residual <= tol;
    v.marginal = residual >= tol / 10 && residual <= tol * 10;
    if (!v.holds || witness) v.witness_u = witness;
    return v;
}

Verdict not_evaluated(std::string key, double tol, std::string why) {
    Verdict v;
    v.key = std::move(key);
    v.evaluated = false;
    v.tolerance = tol;
    v.note = std::move(why);
    return v;
}

// Running maximum with the location where it occurred.
struct MaxTrack {
    double value = 0.0;
    std::optional<double> at;
    void offer(double r, double u) {
        if (!at || r > value) {
            value = r;
            at = u;
        }
    }
};

}  // namespace

void validate_normalization(const RuledSurface& surface, const scalarfun::Node& f) {
    double sign = 0.0;
    for (double u : grid(surface.domain(), kGrid)) {
        const double value = f_jet(surface, f, u, 0).value();
        if (!std::isfinite(value) || std::abs(value) <= kZero) {
            throw SpecError("normalization f vanishes at u=" + std::to_string(u));
        }
        if (sign != 0.0 && std::copysign(1.0, value) != sign) {
            throw SpecError("normalization f changes sign before u=" + std::to_string(u));
        }
        sign = std::copysign(1.0, value);
    }
}

relnorm::FramedVector asymptotic_normal(const RuledSurface& surface, const scalarfun::Node& f,
                                        double u, double v) {
    const Local a = local(surface, f, u, 1);
    const double d = a.d[0];
    const Vec3 comps(-a.g[1] + a.k[0] * a.f[0] * v / (d * d), a.g[0], 0.0);
    return {comps, relnorm::to_world(surface.frame_at(u), comps)};
}

RelativeShape relative_shape(const RuledSurface& surface, const scalarfun::Node& f, double u,
                             double v) {
    const Local a = local(surface, f, u, 2);
    const double fv = a.f[0], f1 = a.f[1], f2 = a.f[2];
    const double d = a.d[0], d1 = a.d[1], d2 = a.d[2];
    const double k = a.k[0], k1 = a.k[1], l = a.l[0];

    RelativeShape r;
    r.B11 = r.B22 = -k * fv / (d * d);
    r.B21 = 0.0;
    r.B12 = (2 * d1 * fv * (k * v + d1) - d * (k * f1 * v + 2 * d1 * f1 + fv * (k1 * v + d2)) +
             d * d * (fv * (1 + k * l) + f2)) /
            (d * d * d);
    r.K = r.B11 * r.B22 - r.B12 * r.B21;
    r.H = 0.5 * (r.B11 + r.B22);

    const double w2 = v * v + d * d;
    const double m = k * w2 + d1 * v - d * d * l;
    r.G11 = -m / fv;
    r.G12 = d / fv;
    r.G22 = 0.0;
    r.Bc11 = r.B11 * r.G11 + r.B12 * r.G12;
    r.Bc12 = r.B11 * r.G12;
    r.Bc22 = 0.0;
    return r;
}

PickComponents pick_components(const RuledSurface& surface, const scalarfun::Node& f, double u) {
    const Local a = local(surface, f, u, 1);
    const double fv = a.f[0], f1 = a.f[1], d = a.d[0], d1 = a.d[1];
    PickComponents p;
    p.A112 = (2 * d * f1 - d1 * fv) / (2 * fv * fv);
    p.A122_up = fv * (2 * d * f1 - d1 * fv) / (2 * d * d * d);
    // A^112 and A_122 vanish, so both products in J do.
    const double A112_up = 0.0, A122 = 0.0;
    p.J = 1.5 * (p.A112 * A112_up + A122 * p.A122_up);
    return p;
}

RelativeInvariantReport relative_invariant_report(const RuledSurface& surface,
                                                  const scalarfun::Node& f, double u, double v,
                                                  double step) {
    RelativeInvariantReport rep;
    const RelativeShape shape = relative_shape(surface, f, u, v);
    rep.H = shape.H;
    rep.J = pick_components(surface, f, u).J;

    auto metric = [&](double uu, double vv) {
        const RelativeShape s = relative_shape(surface, f, uu, vv);
        return std::array<double, 3>{s.G11, s.G12, s.G22};
    };
    rep.S = oracle::brioschi_curvature(metric, u, v, step);
    rep.T_norm2 = 0.5 * (rep.H - rep.S + rep.J);

    const auto point = surface.eval_point(u, v);
    const Local a = local(surface, f, u, 1);
    const auto t = relnorm::tchebychev(point, relnorm::support_over_w(point, a.f[0], a.f[1]));
    const double T_1 = shape.G11 * t.T1 + shape.G12 * t.T2;
    const double T_2 = shape.G12 * t.T1 + shape.G22 * t.T2;
    rep.T_norm2_direct = T_1 * t.T1 + T_2 * t.T2;

    if (std::abs(a.k[0]) > kZero) rep.B_tilde = b_tilde(surface, f, u, v, step);
    return rep;
}

double b_tilde(const RuledSurface& surface, const scalarfun::Node& f, double u, double v,
               double step) {
    const auto j = surface.invariant_jets(u, 0);
    if (std::abs(j.kappa.value()) <= kZero) {
        throw DegenerationError("shape metric is degenerate on a conoidal generator");
    }
    auto metric = [&](double uu, double vv) {
        const RelativeShape s = relative_shape(surface, f, uu, vv);
        return std::array<double, 3>{s.Bc11, s.Bc12, s.Bc22};
    };
    return oracle::brioschi_curvature(metric, u, v, step);
}

double ImageSpec::image_v(double u, double v) const {
    const Local a = local(parent, *f, u, 0);
    const double d = a.d[0];
    const double H = -a.k[0] * a.f[0] / (d * d);
    return -H * v;
}

Vec3 ImageSpec::image_point(double u, double v) const {
    const FrameState fr = image.frame_at(u);
    return fr.s + image_v(u, v) * fr.e;
}

ImageSpec asymptotic_image(const RuledSurface& surface, scalarfun::Expr f) {
    if (!f) throw SpecError("asymptotic image needs a normalization");
    if (surface.jet_order() < 2) {
        throw JetOrderError("asymptotic image needs invariants to order 2, surface has " +
                            std::to_string(surface.jet_order()));
    }
    bool conoidal = true;
    for (double u : grid(surface.domain(), kGrid)) {
        if (std::abs(surface.invariant_jets(u, 0).kappa.value()) > kZero) {
            conoidal = false;
            break;
        }
    }
    if (conoidal) throw DegenerationError("conoidal surface: the asymptotic image is not skew");
    validate_normalization(surface, *f);
    RuledSurface image(std::make_shared<const ImageModel>(surface, f));
    return {surface, std::move(image), std::move(f)};
}

std::vector<ImageLevel> iterate_images(const RuledSurface& surface,
                                       const std::vector<scalarfun::Expr>& f_list, int depth) {
    if (depth < 0) throw SpecError("depth must be non-negative");
    if (f_list.size() < static_cast<std::size_t>(depth)) {
        throw SpecError("need one normalization per level: " + std::to_string(f_list.size()) +
                        " given for depth " + std::to_string(depth));
    }
    if (surface.jet_order() < 2 * depth) {
        throw JetOrderError("depth " + std::to_string(depth) + " needs jet order " +
                            std::to_string(2 * depth) + ", surface has " +
                            std::to_string(surface.jet_order()));
    }
    std::vector<ImageLevel> levels;
    levels.push_back({surface, depth > 0 ? f_list[0] : nullptr});
    for (int i = 1; i <= depth; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        ImageSpec img = asymptotic_image(levels.back().surface, f_list[idx - 1]);
        levels.push_back({img.image, i < depth ? f_list[idx] : nullptr});
    }
    return levels;
}

std::vector<LevelInvariants> level_invariants(const std::vector<ImageLevel>& levels, double u) {
    std::vector<LevelInvariants> out;
    double f_prev = 0.0;
    for (const auto& level : levels) {
        if (!level.f) break;
        const Local a = local(level.surface, *level.f, u, 0);
        const double d = a.d[0];
        LevelInvariants li;
        li.H = -a.k[0] * a.f[0] / (d * d);
        li.K = li.H * li.H;
        li.J = 0.0;
        li.H_recursive = out.empty() ? li.H : a.f[0] / (f_prev * out.back().H_recursive);
        f_prev = a.f[0];
        out.push_back(li);
    }
    return out;
}

const Verdict& ClassificationReport::at(const std::string& key) const {
    for (const auto& v : verdicts) {
        if (v.key == key) return v;
    }
    throw std::out_of_range("no verdict named " + key);
}

ClassificationReport classify(const RuledSurface& surface, const scalarfun::Node& f,
                              const ClassifyOptions& options) {
    const double tol = options.tolerance;
    const auto us = grid(surface.domain(), std::max(options.samples, 3));
    ClassificationReport report;
    auto& out = report.verdicts;

    // Per-sample quantities shared by several verdicts.
    struct Sample {
        double u;
        Local a;
    };
    std::vector<Sample> samples;
    samples.reserve(us.size());
    // Samples where f vanishes are not regular points of the normalization.
    int skipped = 0;
    for (double u : us) {
        try {
            samples.push_back({u, local(surface, f, u, 2)});
        } catch (const DomainError&) {
            ++skipped;
        }
    }
    if (samples.empty()) throw DomainError("f vanishes at every sample");

    MaxTrack kappa_res, h_res, yu_res;
    int vanishing = 0;
    double min_yu = std::numeric_limits<double>::infinity();
    std::optional<double> min_yu_at;
    for (const auto& s : samples) {
        const Local& a = s.a;
        const double d = a.d[0];
        kappa_res.offer(std::abs(a.k[0]), s.u);
        h_res.offer(std::abs(a.k[0] * a.f[0] / (d * d)), s.u);
        // dy/du = [-(g''+g) + (kappa f / delta^2)' v] e + (kappa f v / delta^2) n + g kappa z
        const Jet c = a.k * a.f / (a.d * a.d);
        double worst = 0.0;
        for (double v : options.v_samples) {
            const Vec3 yu(-(a.g[2] + a.g[0]) + c[1] * v, c[0] * v, a.g[0] * a.k[0]);
            worst = std::max(worst, yu.norm());
        }
        const double r = scaled(worst, a.g[0]);
        yu_res.offer(r, s.u);
        if (r <= tol) ++vanishing;
        if (r < min_yu) {
            min_yu = r;
            min_yu_at = s.u;
        }
    }
    const bool conoidal = kappa_res.value <= tol;
    const int n = static_cast<int>(samples.size());

    out.push_back(make_verdict("conoidal", kappa_res.value, tol, kappa_res.at));
    out.push_back(make_verdict("relative_minimal", h_res.value, tol, h_res.at));

    {
        // The asymptotic image shrinks to a point when y does not move at all.
        Verdict point = make_verdict("image_point", std::max(kappa_res.value, yu_res.value), tol,
                                     yu_res.value > kappa_res.value ? yu_res.at : kappa_res.at);
        Verdict improper = point;
        improper.key = "improper_sphere";
        out.push_back(point);

        const double frac = static_cast<double>(vanishing) / n;
        Verdict curve = make_verdict("image_curve", std::max(kappa_res.value, frac), tol,
                                     frac > kappa_res.value ? min_yu_at : kappa_res.at);
        if (curve.holds) {
            const Local a = local(surface, f, surface.u0(), 2);
            curve.constants["r"] = std::abs(a.g[2] + a.g[0]);
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const auto& s : samples) {
                const double r = std::abs(s.a.g[2] + s.a.g[0]);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            curve.constants["r_min"] = lo;
            curve.constants["r_max"] = hi;
            curve.note = "planar curve; r is the radius of curvature at u0";
        }
        out.push_back(curve);

        const bool mixed = vanishing > 0 && vanishing < n;
        Verdict sub = make_verdict("image_subinterval", std::max(kappa_res.value, mixed ? 0.0 : 1.0),
                                   tol, mixed ? min_yu_at : kappa_res.at);
        if (sub.holds) {
            sub.note = "dy/du vanishes on " + std::to_string(vanishing) + " of " +
                       std::to_string(n) + " samples only";
        }
        out.push_back(sub);
        out.push_back(improper);
    }

    // Proper sphere and precedent both need kappa != 0 everywhere.
    {
        MaxTrack zero_kappa;
        for (const auto& s : samples) {
            if (std::abs(s.a.k[0]) <= kZero) zero_kappa.offer(1.0, s.u);
        }
        if (zero_kappa.at) {
            Verdict sphere = make_verdict("proper_sphere", 1.0, tol, zero_kappa.at);
            sphere.note = "kappa vanishes";
            Verdict prec = sphere;
            prec.key = "precedent";
            out.push_back(sphere);
            out.push_back(prec);
        } else {
            const Local a0 = local(surface, f, surface.u0(), 0);
            const double c = a0.d[0] * a0.d[0] / (a0.k[0] * a0.f[0]);
            MaxTrack f_res, p_res;
            for (const auto& s : samples) {
                const Local& a = s.a;
                const double d = a.d[0], k = a.k[0];
                f_res.offer(scaled(a.f[0] - d * d / (c * k), a.f[0]), s.u);
                const Jet r = a.d / a.k;
                p_res.offer(scaled(r[2] + r[0] * (1 + k * a.l[0]), r[0]), s.u);
            }
            Verdict prec = make_verdict("precedent", p_res.value, tol, p_res.at);
            const bool identities = std::max(f_res.value, p_res.value) <= tol;
            double spread = 0.0;
            Vec3 anchor = Vec3::Zero();
            std::optional<double> spread_at;
            if (identities) {
                // x - c y must be one constant point.
                bool first = true;
                for (const auto& smp : samples) {
                    const double u = smp.u;
                    const FrameState fr = surface.frame_at(u);
                    for (double v : options.v_samples) {
                        const Vec3 p = fr.s + v * fr.e - c * asymptotic_normal(surface, f, u, v).world;
                        if (first) {
                            anchor = p;
                            first = false;
                        }
                        const double dist = (p - anchor).norm() / std::max(1.0, anchor.norm());
                        if (dist > spread) {
                            spread = dist;
                            spread_at = u;
                        }
                    }
                }
            }
            const double res = std::max({f_res.value, p_res.value, spread});
            std::optional<double> where =
                f_res.value >= p_res.value ? f_res.at : p_res.at;
            if (spread > std::max(f_res.value, p_res.value)) where = spread_at;
            Verdict sphere = make_verdict("proper_sphere", res, tol, where);
            sphere.constants["c"] = c;
            if (identities) {
                sphere.constants["a_x"] = anchor.x();
                sphere.constants["a_y"] = anchor.y();
                sphere.constants["a_z"] = anchor.z();
                sphere.constants["x_minus_cy_spread"] = spread;
            }
            out.push_back(sphere);
            out.push_back(prec);
        }
    }

    {
        std::vector<Vec3> ys;
        std::vector<double> ys_u;
        for (const auto& s : samples) {
            for (double v : options.v_samples) {
                ys.push_back(asymptotic_normal(surface, f, s.u, v).world);
                ys_u.push_back(s.u);
            }
        }
        const auto rank = oracle::rank_of_samples(ys);
        const double sigma_max = rank.singular_values[0];
        const double res = sigma_max > 0 ? rank.singular_values[2] / sigma_max : 0.0;
        std::optional<double> where;
        double worst = -1.0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const double off = std::abs(ys[i].dot(rank.least_direction));
            if (off > worst) {
                worst = off;
                where = ys_u[i];
            }
        }
        Verdict plane = make_verdict("fixed_plane", res, tol, where);
        if (plane.holds) {
            plane.constants["normal_x"] = rank.least_direction.x();
            plane.constants["normal_y"] = rank.least_direction.y();
            plane.constants["normal_z"] = rank.least_direction.z();
        }
        out.push_back(plane);
    }

    // Predicates on Psi_1.
    const char* psi_keys[] = {"psi1_orthoid", "psi1_edlinger", "psi1_striction_asymptotic",
                              "psi1_striction_curvature", "psi1_congruent"};
    if (conoidal) {
        for (const char* key : psi_keys) {
            out.push_back(not_evaluated(key, tol, "conoidal surface: Psi_1 is not a skew ruled surface"));
        }
        for (auto& v : out) v.singular_samples += skipped;
        return report;
    }
    if (surface.jet_order() < 3) {
        for (const char* key : psi_keys) {
            out.push_back(not_evaluated(key, tol, "Psi_1 predicates need jet order 3"));
        }
        for (auto& v : out) v.singular_samples += skipped;
        return report;
    }
    // Non-owning alias: psi does not outlive this call.
    const scalarfun::Expr f_alias(scalarfun::Expr{}, &f);
    const RuledSurface psi(std::make_shared<const ImageModel>(surface, f_alias));
    MaxTrack orth, edl, asym, curv, cong;
    int singular = 0;
    for (const auto& s : samples) {
        if (std::abs(s.a.k[0]) <= 1e-9) {
            ++singular;
            continue;
        }
        scalarfun::InvariantJets j1;
        try {
            j1 = psi.invariant_jets(s.u, 1);
        } catch (const DomainError&) {
            ++singular;
            continue;
        }
        const double d1 = j1.delta[0], k1 = j1.kappa[0], l1 = j1.lambda[0];
        orth.offer(std::abs(l1), s.u);
        edl.offer(std::max(scaled(j1.delta[1], d1), std::abs(1 + k1 * l1)), s.u);
        asym.offer(scaled(k1 - l1, std::max(std::abs(k1), std::abs(l1))), s.u);
        curv.offer(std::abs(1 + k1 * l1), s.u);
        cong.offer(std::max({scaled(d1 - s.a.d[0], s.a.d[0]), scaled(k1 - s.a.k[0], s.a.k[0]),
                             scaled(l1 - s.a.l[0], s.a.l[0])}),
                   s.u);
    }
    for (auto [key, track] : {std::pair{psi_keys[0], &orth}, std::pair{psi_keys[1], &edl},
                              std::pair{psi_keys[2], &asym}, std::pair{psi_keys[3], &curv},
                              std::pair{psi_keys[4], &cong}}) {
        if (!track->at) {
            out.push_back(not_evaluated(key, tol, "no regular samples"));
            continue;
        }
        Verdict v = make_verdict(key, track->value, tol, track->at);
        v.singular_samples = singular;
        out.push_back(v);
    }
    for (auto& v : out) v.singular_samples += skipped;
    return report;
}

FocalPoints focal_and_developable(const RuledSurface& surface, const scalarfun::Node& f, double u) {
    const Local a = local(surface, f, u, 1);
    const double d = a.d[0], d1 = a.d[1], k = a.k[0], k1 = a.k[1];
    if (std::abs(k) <= kZero) throw DegenerationError("kappa vanishes: no focal curve");
    const double fv = a.f[0], f1 = a.f[1];
    const FrameState fr = surface.frame_at(u);
    const Vec3 base = fr.s - (d / k) * fr.n;
    FocalPoints p;
    p.focal = base + ((d * f1 - d1 * fv) / (k * fv)) * fr.e;
    p.developable = base + ((d1 * k - d * k1) / (k * k)) * fr.e;
    return p;
}

}  // namespace ruledrel::asymcalc
