#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "ruledrel/asymcalc.hpp"
#include "ruledrel/error.hpp"
#include "ruledrel/fixtures.hpp"
#include "ruledrel/relnorm.hpp"
#include "ruledrel/scalarfun/parser.hpp"
#include "support.hpp"

using namespace ruledrel;
using namespace ruledrel::asymcalc;
using scalarfun::Context;
using scalarfun::parse_scalar_expr;
using testsupport::d1_5pt;
using testsupport::d2_5pt;
using testsupport::generic_surface;
using testsupport::triple;

namespace {

scalarfun::Expr fn(const char* text) { return parse_scalar_expr(text, Context::normalization); }
scalarfun::Expr biv(const char* text) { return parse_scalar_expr(text, Context::bivariate); }

}  // namespace

TEST_CASE("asymptotic_normal: closed-form examples") {
    const auto ort = fixtures::build("ORT1");
    for (double v : {-1.5, 0.0, 2.0}) {
        const auto y = asymptotic_normal(ort, *fn("1"), 0.8, v);
        CHECK((y.frame - Vec3(v, 1.0, 0.0)).norm() <= 1e-15);
    }
    const auto hel = fixtures::build("HEL1");
    const auto y0 = asymptotic_normal(hel, *fn("cos(u)"), 0.0, 1.0).world;
    for (double u : {0.3, 1.2, 2.0, 4.5}) {
        const auto y = asymptotic_normal(hel, *fn("cos(u)"), u, -0.7);
        CHECK((y.frame - Vec3(std::sin(u), std::cos(u), 0.0)).norm() <= 1e-14);
        CHECK((y.world - y0).norm() <= 1e-9);
    }
}

TEST_CASE("asymptotic_normal agrees with the general relative normal") {
    const auto edl = fixtures::build("EDL1");
    const auto p = edl.eval_point(0.5, -1.2);
    const auto y_rel = relnorm::relative_normal(p, relnorm::support_eval(edl, *biv("exp(u)/w"), 0.5, -1.2));
    CHECK((asymptotic_normal(edl, *fn("exp(u)"), 0.5, -1.2).world - y_rel.world).norm() <= 1e-10);

    const auto s = generic_surface();
    for (const char* f : {"1", "exp(0.4*u)", "delta^2/kappa", "sqrt(abs(delta))"}) {
        const std::string q = std::string("(") + f + ")/w";
        for (double u : {0.4, 2.6, 5.1}) {
            for (double v : {-1.7, 0.0, 0.9}) {
                const auto pt = s.eval_point(u, v);
                const auto y = relnorm::relative_normal(pt, relnorm::support_eval(s, *biv(q.c_str()), u, v));
                CHECK((asymptotic_normal(s, *fn(f), u, v).world - y.world).norm() <= 1e-10);
            }
        }
    }
}

TEST_CASE("relative_shape: examples") {
    const auto ort = fixtures::build("ORT1");
    const auto r = relative_shape(ort, *fn("1"), 1.0);
    CHECK(r.B11 == doctest::Approx(-1.0));
    CHECK(r.B12 == doctest::Approx(1.0));
    CHECK(r.B21 == 0.0);
    CHECK(r.B22 == doctest::Approx(-1.0));
    CHECK(r.K == doctest::Approx(1.0));
    CHECK(r.H == doctest::Approx(-1.0));

    for (const char* name : {"HEL1", "RCON"}) {
        const auto c = relative_shape(fixtures::build(name), *fn("1+0.1*u"), 2.0, 0.5);
        CHECK(c.H == 0.0);
        CHECK(c.K == 0.0);
    }
}

TEST_CASE("relative_shape: Weingarten equations from a differentiated normal") {
    // y_{/i} = -B_i^j x_{/j}; solve for B from numerically differentiated y.
    auto check = [](const RuledSurface& s, const char* f, double u, double v) {
        const auto r = relative_shape(s, *fn(f), u, v);
        const double h = 1e-3;
        auto y_of_u = [&](double t) -> Vec3 { return asymptotic_normal(s, *fn(f), t, v).world; };
        auto y_of_v = [&](double t) -> Vec3 { return asymptotic_normal(s, *fn(f), u, t).world; };
        const Vec3 yu = d1_5pt(y_of_u, u, h);
        const Vec3 yv = d1_5pt(y_of_v, v, h);
        const auto p = s.eval_point(u, v);
        Eigen::Matrix<double, 3, 2> X;
        X.col(0) = p.x_u;
        X.col(1) = p.x_v;
        const Eigen::Vector2d b1 = X.colPivHouseholderQr().solve(-yu);
        const Eigen::Vector2d b2 = X.colPivHouseholderQr().solve(-yv);
        CHECK(std::abs(b1(0) - r.B11) <= 1e-7);
        CHECK(std::abs(b1(1) - r.B12) <= 1e-7);
        CHECK(std::abs(b2(0) - r.B21) <= 1e-7);
        CHECK(std::abs(b2(1) - r.B22) <= 1e-7);
    };
    check(fixtures::build("EDL1"), "exp(u)", 0.4, 0.0);
    check(fixtures::build("EDL1"), "exp(u)", 0.4, 1.3);
    const auto s = generic_surface();
    check(s, "exp(0.2*u)*(1+0.1*delta)", 1.1, -0.8);
    check(s, "delta^2/kappa", 3.7, 1.6);
}

TEST_CASE("relative umbilics and constancy of H") {
    const auto s = generic_surface();
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 50; ++i) {
        const double u = 0.1 + 6.0 * i / 50.0;
        const auto r = relative_shape(s, *fn("exp(0.3*u)"), u, 0.7);
        CHECK(std::abs(r.K - r.H * r.H) <= 1e-12);
        const auto c = relative_shape(s, *fn("2*delta^2/kappa"), u, -1.0);
        lo = std::min(lo, c.H);
        hi = std::max(hi, c.H);
    }
    CHECK(hi - lo <= 1e-10);
    CHECK(lo == doctest::Approx(-2.0));

    const auto edl = fixtures::build("EDL1");
    double elo = 1e300, ehi = -1e300;
    for (double u = 0.0; u <= 6.2; u += 0.1) {
        const double H = relative_shape(edl, *fn("exp(u)"), u).H;
        elo = std::min(elo, H);
        ehi = std::max(ehi, H);
    }
    CHECK(ehi - elo >= 0.1);

    // H is free of v.
    const double h0 = relative_shape(s, *fn("exp(0.3*u)"), 2.0, -3.0).H;
    CHECK(relative_shape(s, *fn("exp(0.3*u)"), 2.0, 4.0).H == h0);
}

TEST_CASE("pick_components") {
    const auto s = generic_surface();
    for (double u : {0.5, 2.0, 4.0}) {
        CHECK(std::abs(pick_components(s, *fn("3*sqrt(abs(delta))"), u).A112) <= 1e-14);
        CHECK(pick_components(s, *fn("exp(u)"), u).J == 0.0);
    }
    const auto ort = fixtures::build("ORT1");
    const auto p = pick_components(ort, *fn("exp(u)"), 0.7);
    CHECK(p.A112 == doctest::Approx(std::exp(-0.7)));
    CHECK(p.A122_up == doctest::Approx(std::exp(0.7) * std::exp(0.7)));
    CHECK(p.J == 0.0);
}

TEST_CASE("relative_invariant_report") {
    const auto ort = fixtures::build("ORT1");
    const auto r = relative_invariant_report(ort, *fn("1"), 1.0, 0.5);
    CHECK(r.H == doctest::Approx(-1.0));
    CHECK(std::abs(r.S + 1.0) <= 1e-3);
    CHECK(r.J == 0.0);
    CHECK(std::abs(r.T_norm2) <= 1e-3);
    REQUIRE(r.B_tilde.has_value());
    CHECK(std::abs(*r.B_tilde - 1.0) <= 1e-3);

    const auto edl = fixtures::build("EDL1");
    const auto e = relative_invariant_report(edl, *fn("exp(u)"), 2.0, -0.6);
    CHECK(std::abs(e.S - e.H) <= 1e-6);
    CHECK(std::abs(e.T_norm2) <= 1e-6);
    CHECK(std::abs(e.T_norm2_direct) <= 1e-12);
    REQUIRE(e.B_tilde.has_value());
    CHECK(std::abs(*e.B_tilde - 1.0) <= 1e-6);

    const auto s = generic_surface();
    for (double u : {0.9, 3.4}) {
        for (double v : {-1.2, 0.8}) {
            const auto g = relative_invariant_report(s, *fn("exp(0.2*u)*(2+cos(u))"), u, v);
            CHECK(std::abs(g.S - g.H) <= 1e-6 * std::max(1.0, std::abs(g.H)));
            REQUIRE(g.B_tilde.has_value());
            CHECK(std::abs(*g.B_tilde - 1.0) <= 1e-6);
        }
    }

    const auto hel = fixtures::build("HEL1");
    const auto c = relative_invariant_report(hel, *fn("1"), 1.0, 0.3);
    CHECK(c.H == 0.0);
    CHECK(std::abs(c.S) <= 1e-6);
    CHECK_FALSE(c.B_tilde.has_value());
    CHECK_THROWS_AS(b_tilde(hel, *fn("1"), 1.0, 0.3), DegenerationError);
}

TEST_CASE("asymptotic_image: invariants") {
    const auto ort = fixtures::build("ORT1");
    const auto img = asymptotic_image(ort, fn("1"));
    for (double u : {0.0, 1.0, 5.0}) {
        const auto j = img.image.invariant_jets(u, 2);
        CHECK(j.delta[0] == doctest::Approx(1.0));
        CHECK(j.kappa[0] == doctest::Approx(1.0));
        CHECK(j.lambda[0] == doctest::Approx(-1.0));
    }
    const auto edl = fixtures::build("EDL1");
    const auto ei = asymptotic_image(edl, fn("delta^2/kappa"));
    const auto je = ei.image.invariant_jets(2.0, 0);
    CHECK(je.delta[0] == doctest::Approx(1.0));
    CHECK(je.kappa[0] == doctest::Approx(1.0));
    CHECK(je.lambda[0] == doctest::Approx(-1.0));

    // lambda_1 against central differences of g = f/delta.
    const auto oe = asymptotic_image(ort, fn("exp(u)"));
    const double u = 0.5, h = 1e-2;
    auto g = [](double t) { return std::exp(t) / 1.0; };
    const double gpp = d2_5pt(g, u, h);
    const double expected = -(gpp + g(u)) / (1.0 * g(u));
    CHECK(std::abs(oe.image.invariant_jets(u, 0).lambda[0] - expected) <= 1e-7);

    CHECK_THROWS_AS(asymptotic_image(fixtures::build("HEL1"), fn("1")), DegenerationError);
    CHECK_THROWS_AS(asymptotic_image(fixtures::build("ORT1", 1), fn("1")), JetOrderError);
    CHECK(img.image.jet_order() == 2);
    CHECK_THROWS_AS(img.image.invariant_jets(0.0, 3), JetOrderError);
}

TEST_CASE("asymptotic_image: geometry of the image surface") {
    const auto s = generic_surface(8);
    const auto img = asymptotic_image(s, fn("exp(0.2*u)"));
    for (double u : {0.7, 3.0, 5.2}) {
        for (double v : {-1.0, 0.5}) {
            // The relative normal traces the image surface.
            const Vec3 y = asymptotic_normal(s, *fn("exp(0.2*u)"), u, v).world;
            CHECK((img.image_point(u, v) - y).norm() <= 1e-12);
        }
        // Image invariants recovered from its own frame and striction curve.
        const double h = 1e-2;
        auto e = [&](double t) -> Vec3 { return img.image.frame_at(t).e; };
        auto st = [&](double t) -> Vec3 { return img.image.frame_at(t).s; };
        const Vec3 sp = d1_5pt(st, u, h);
        const Vec3 ep = d1_5pt(e, u, h);
        const auto j = img.image.invariant_jets(u, 0);
        CHECK(std::abs(sp.dot(ep)) <= 1e-7);
        CHECK(std::abs(triple(sp, e(u), ep) - j.delta[0]) <= 1e-7);
        CHECK(std::abs(sp.dot(e(u)) - j.delta[0] * j.lambda[0]) <= 1e-7);
        // delta_1 = -delta H
        const double H = relative_shape(s, *fn("exp(0.2*u)"), u).H;
        CHECK(j.delta[0] == doctest::Approx(-s.invariant_jets(u, 0).delta[0] * H).epsilon(1e-13));
        CHECK(j.kappa[0] == s.invariant_jets(u, 0).kappa[0]);
    }
}

TEST_CASE("iterate_images") {
    const auto ort = fixtures::build("ORT1", 6);
    const auto levels = iterate_images(ort, {fn("1"), fn("1")}, 2);
    REQUIRE(levels.size() == 3);
    const auto inv = level_invariants(levels, 1.0);
    REQUIRE(inv.size() == 2);
    CHECK(inv[0].H == doctest::Approx(-1.0));
    CHECK(inv[1].H == doctest::Approx(-1.0));
    CHECK(inv[1].H_recursive == doctest::Approx(-1.0));
    const auto j2 = levels[2].surface.invariant_jets(1.0, 0);
    CHECK(j2.delta[0] == doctest::Approx(1.0));
    CHECK(j2.lambda[0] == doctest::Approx(-1.0));
    // Phi and Psi_2 differ: lambda 0 against -1.
    CHECK(std::abs(j2.lambda[0] - 0.0) > 0.5);

    const auto edl = fixtures::build("EDL1", 6);
    const auto el = iterate_images(edl, {fn("1"), fn("1")}, 2);
    for (double u : {0.0, 2.0, 6.0}) {
        for (const auto& level : el) {
            const auto j = level.surface.invariant_jets(u, 0);
            CHECK(std::abs(j.delta[0] - 1.0) <= 1e-8);
            CHECK(std::abs(j.kappa[0] - 1.0) <= 1e-8);
            CHECK(std::abs(j.lambda[0] + 1.0) <= 1e-8);
        }
    }

    const auto s = generic_surface(8);
    const auto gl = iterate_images(s, {fn("exp(0.2*u)"), fn("1+0.1*delta"), fn("kappa")}, 3);
    for (double u : {0.6, 2.4, 4.8}) {
        const auto li = level_invariants(gl, u);
        REQUIRE(li.size() == 3);
        for (const auto& l : li) {
            CHECK(std::abs(l.H - l.H_recursive) <= 1e-8 * std::max(1.0, std::abs(l.H)));
            CHECK(l.K == l.H * l.H);
        }
        // Re-deriving the second image directly gives the same invariants.
        const auto again = asymptotic_image(gl[1].surface, fn("1+0.1*delta"));
        const auto a = again.image.invariant_jets(u, 0);
        const auto b = gl[2].surface.invariant_jets(u, 0);
        CHECK(std::abs(a.delta[0] - b.delta[0]) <= 1e-8);
        CHECK(std::abs(a.lambda[0] - b.lambda[0]) <= 1e-8);
        // Tchebychev vectors of the levels are parallel to e.
        for (std::size_t i = 0; i + 1 < gl.size(); ++i) {
            const auto& lv = gl[i];
            const auto p = lv.surface.eval_point(u, 0.9);
            const auto fj = scalarfun::eval_jet(*lv.f, u, 1, lv.surface.env());
            const auto t = relnorm::tchebychev(p, relnorm::support_over_w(p, fj[0], fj[1]));
            CHECK(t.T.world.cross(p.frame.e).norm() <= 1e-10);
        }
    }

    CHECK_THROWS_AS(iterate_images(s, {fn("1")}, 2), SpecError);
    CHECK_THROWS_AS(iterate_images(generic_surface(3), {fn("1"), fn("1")}, 2), JetOrderError);
}

TEST_CASE("classify: canonical verdicts") {
    auto every_verdict_consistent = [](const ClassificationReport& rep) {
        for (const auto& v : rep.verdicts) {
            if (!v.evaluated) continue;
            if (v.holds) {
                CHECK(v.residual <= v.tolerance);
            } else {
                CHECK(v.residual > v.tolerance);
                CHECK(v.witness_u.has_value());
            }
        }
    };

    const auto edl = fixtures::build("EDL1");
    const auto re = classify(edl, *fn("1"));
    every_verdict_consistent(re);
    const auto& sphere = re.at("proper_sphere");
    CHECK(sphere.holds);
    CHECK(sphere.constants.at("c") == doctest::Approx(1.0));
    CHECK(std::abs(sphere.constants.at("a_x")) <= 1e-8);
    CHECK(std::abs(sphere.constants.at("a_y") + 1.0) <= 1e-8);
    CHECK(std::abs(sphere.constants.at("a_z")) <= 1e-8);
    CHECK(re.at("precedent").holds);
    CHECK_FALSE(re.at("conoidal").holds);
    CHECK_FALSE(re.at("fixed_plane").holds);
    CHECK(re.at("psi1_congruent").holds);

    const auto hel = fixtures::build("HEL1");
    const auto rc = classify(hel, *fn("cos(u)+2*sin(u)"));
    every_verdict_consistent(rc);
    CHECK(rc.at("conoidal").holds);
    CHECK(rc.at("relative_minimal").holds);
    CHECK(rc.at("image_point").holds);
    CHECK(rc.at("improper_sphere").holds);
    CHECK_FALSE(rc.at("image_curve").holds);
    CHECK(rc.at("fixed_plane").holds);
    CHECK_FALSE(rc.at("proper_sphere").holds);
    CHECK_FALSE(rc.at("psi1_orthoid").evaluated);

    const auto r1 = classify(hel, *fn("1"));
    every_verdict_consistent(r1);
    CHECK(r1.at("image_curve").holds);
    CHECK(r1.at("image_curve").constants.at("r") == doctest::Approx(1.0));
    CHECK_FALSE(r1.at("image_point").holds);
    CHECK(r1.at("fixed_plane").holds);

    const auto ort = fixtures::build("ORT1");
    const auto ro = classify(ort, *fn("1"));
    every_verdict_consistent(ro);
    CHECK_FALSE(ro.at("proper_sphere").holds);
    CHECK(ro.at("precedent").residual == doctest::Approx(1.0));
    CHECK_FALSE(ro.at("precedent").holds);
    CHECK(ro.at("psi1_edlinger").holds);
    CHECK(ro.at("psi1_striction_curvature").holds);
    CHECK_FALSE(ro.at("psi1_orthoid").holds);
    CHECK_FALSE(ro.at("psi1_congruent").holds);
}

TEST_CASE("classify: printed families decided by residuals") {
    const auto s = generic_surface();
    // Psi_1 orthoid iff f = delta (c1 cos u + c2 sin u); keep f away from 0.
    auto short_spec = RuledSurfaceSpec::from_text("1.2+0.3*sin(u)", "0.6+0.25*cos(2*u)",
                                                  "0.3*u-0.8", {0.1, 1.4}, 0.5);
    const auto part = build_surface(short_spec);
    const auto orth = classify(part, *fn("delta*(cos(u)+0.2*sin(u))"));
    CHECK(orth.at("psi1_orthoid").holds);
    CHECK_FALSE(orth.at("psi1_striction_curvature").holds);
    // Striction curve a line of curvature iff f = delta (c1 u + c2).
    CHECK(classify(s, *fn("delta*(0.5*u+1)")).at("psi1_striction_curvature").holds);
    // Striction curve an asymptotic line iff (f/delta)'' + (f/delta)(1 + kappa^2) = 0;
    // with kappa = 1 that is f = delta cos(sqrt(2) u + phase).
    auto ort_short = RuledSurfaceSpec::from_text("1", "1", "0", {0.0, 1.0}, 0.0);
    const auto as = classify(build_surface(ort_short), *fn("delta*cos(sqrt(2)*u+0.1)"));
    CHECK(as.at("psi1_striction_asymptotic").holds);
    // Psi_1 Edlinger iff f = c delta / kappa with kappa = 1/(c1 u + c2).
    auto edl_like = RuledSurfaceSpec::from_text("1+0.2*u", "1/(0.3*u+1)", "0.5", {0.0, 3.0}, 0.0);
    const auto edl_surface = build_surface(edl_like);
    CHECK(classify(edl_surface, *fn("2*delta/kappa")).at("psi1_edlinger").holds);
    CHECK_FALSE(classify(edl_surface, *fn("2*delta")).at("psi1_edlinger").holds);
    CHECK_FALSE(classify(s, *fn("2*delta/kappa")).at("psi1_edlinger").holds);
}

TEST_CASE("classify: degenerate image on a subinterval only") {
    auto spec = RuledSurfaceSpec::from_text("1", "0", "0", {0.0, 1.2}, 0.0);
    const auto s = build_surface(spec);
    const auto r = classify(s, *fn("cos(u)+0.5*(abs(u-0.61)+(u-0.61))^3"));
    CHECK(r.at("image_subinterval").holds);
    CHECK_FALSE(r.at("image_point").holds);
    CHECK_FALSE(r.at("image_curve").holds);
}

TEST_CASE("classify: tolerance is configurable and marginal verdicts are flagged") {
    const auto edl = fixtures::build("EDL1");
    ClassifyOptions opt;
    opt.tolerance = 1e-7;
    const auto perturbed = classify(edl, *fn("1+2e-8*sin(u)"), opt);
    const auto& v = perturbed.at("proper_sphere");
    CHECK(v.holds);
    CHECK(v.marginal);
    opt.tolerance = 1e-9;
    CHECK_FALSE(classify(edl, *fn("1+2e-8*sin(u)"), opt).at("proper_sphere").holds);
}

TEST_CASE("focal_and_developable") {
    const auto ort = fixtures::build("ORT1");
    const auto p = focal_and_developable(ort, *fn("1"), 0.0);
    CHECK((p.focal - Vec3(0, -1, 0)).norm() <= 1e-14);
    CHECK((p.developable - Vec3(0, -1, 0)).norm() <= 1e-14);

    const auto edl = fixtures::build("EDL1");
    const auto q = focal_and_developable(edl, *fn("exp(u)"), 0.0);
    CHECK((q.focal - Vec3(1, -1, 0)).norm() <= 1e-14);

    const auto s = generic_surface();
    const auto f = fn("exp(0.2*u)*(2+cos(u))");
    for (double u : {0.8, 2.9, 5.3}) {
        const auto fp = focal_and_developable(s, *f, u);
        const double H = relative_shape(s, *f, u).H;
        const auto fr = s.frame_at(u);
        double spread = 0.0;
        for (double v : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
            const Vec3 x = fr.s + v * fr.e + asymptotic_normal(s, *f, u, v).world / H;
            spread = std::max(spread, (x - fp.focal).norm());
        }
        CHECK(spread <= 1e-9);
    }
    CHECK_THROWS_AS(focal_and_developable(fixtures::build("HEL1"), *fn("1"), 1.0), DegenerationError);
}

TEST_CASE("validate_normalization") {
    const auto hel = fixtures::build("HEL1");
    CHECK_NOTHROW(validate_normalization(hel, *fn("2+cos(u)")));
    CHECK_THROWS_AS(validate_normalization(hel, *fn("cos(u)")), SpecError);
    CHECK_THROWS_AS(validate_normalization(hel, *fn("u")), SpecError);
}
