#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ruledrel/framecore.hpp"
#include "ruledrel/relnorm.hpp"
#include "ruledrel/scalarfun/ast.hpp"

namespace ruledrel::asymcalc {

// Asymptotic normalizations have support q = f(u) / w. Every function here
// takes f as a univariate expression in the normalization context, so it may
// refer to delta, kappa and lambda of the surface it normalizes.

/// Throws SpecError if f vanishes on the 101-point grid over the domain.
void validate_normalization(const RuledSurface& surface, const scalarfun::Node& f);

/// y = [-(f/delta)' + kappa f v / delta^2] e + (f/delta) n.
relnorm::FramedVector asymptotic_normal(const RuledSurface& surface, const scalarfun::Node& f,
                                        double u, double v);

/// Relative shape operator. Mixed components are B[i][j] = B_i^j with
/// 1-based names: B12 is B_1^2. Covariant components Bc_ij = B_i^k G_kj.
struct RelativeShape {
    double B11 = 0, B12 = 0, B21 = 0, B22 = 0;
    double K = 0, H = 0;
    double G11 = 0, G12 = 0, G22 = 0;
    double Bc11 = 0, Bc12 = 0, Bc22 = 0;
};

/// B_1^2 depends on v unless delta', kappa' and f' vanish; H and K do not.
RelativeShape relative_shape(const RuledSurface& surface, const scalarfun::Node& f, double u,
                             double v = 0.0);

struct PickComponents {
    double A112 = 0;     // A_112
    double A122_up = 0;  // A^122
    double J = 0;
};

PickComponents pick_components(const RuledSurface& surface, const scalarfun::Node& f, double u);

struct RelativeInvariantReport {
    double H = 0;
    double S = 0;  // curvature of G, by the Brioschi oracle
    double J = 0;
    double T_norm2 = 0;         // (H - S + J) / 2
    double T_norm2_direct = 0;  // T_i T^i from the Tchebychev components
    std::optional<double> B_tilde;  // absent on conoidal generators
};

/// S and the curvature of the covariant shape metric come from finite
/// differences with `step` (stencil u +- 2 step, v +- 2 step).
RelativeInvariantReport relative_invariant_report(const RuledSurface& surface,
                                                  const scalarfun::Node& f, double u, double v,
                                                  double step = 1e-3);

/// Curvature of the metric B_ij du^i du^j. Throws DegenerationError when
/// kappa(u) = 0, where that metric is degenerate.
double b_tilde(const RuledSurface& surface, const scalarfun::Node& f, double u, double v,
               double step = 1e-3);

/// The asymptotic image Psi_1 of a non-conoidal surface. Its invariants come
/// from the parent's jets, so it supports two derivative orders fewer than
/// the parent. Generators are parallel to those of the parent and the frame
/// {e, n, z} is shared.
struct ImageSpec {
    RuledSurface parent;
    RuledSurface image;
    scalarfun::Expr f;

    /// v_1 = -H v.
    double image_v(double u, double v) const;
    /// Point of the image corresponding to (u, v) on the parent.
    Vec3 image_point(double u, double v) const;
};

/// Throws DegenerationError for a conoidal surface and JetOrderError when
/// the surface has fewer than two derivative orders.
ImageSpec asymptotic_image(const RuledSurface& surface, scalarfun::Expr f);

struct ImageLevel {
    RuledSurface surface;  // Phi for level 0, Psi_i after
    scalarfun::Expr f;     // normalization of this level, null on the last one
};

/// [Phi, Psi_1, ..., Psi_depth], normalizing level i with f_list[i].
std::vector<ImageLevel> iterate_images(const RuledSurface& surface,
                                       const std::vector<scalarfun::Expr>& f_list, int depth);

struct LevelInvariants {
    double H = 0;            // -kappa_i f_i / delta_i^2 on level i
    double K = 0;            // H^2
    double J = 0;
    double H_recursive = 0;  // f_i / (f_{i-1} H_{i-1}), level 0 uses the direct value
};

/// Invariants of every normalized level (all but the last) at u.
std::vector<LevelInvariants> level_invariants(const std::vector<ImageLevel>& levels, double u);

struct ClassifyOptions {
    double tolerance = 1e-7;
    int samples = 101;
    std::vector<double> v_samples{-2.0, -1.0, 0.0, 1.0, 2.0};
};

struct Verdict {
    std::string key;
    bool evaluated = true;
    bool holds = false;
    bool marginal = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::optional<double> witness_u;  // sample with the largest residual
    int singular_samples = 0;
    std::map<std::string, double> constants;
    std::string note;
};

struct ClassificationReport {
    std::vector<Verdict> verdicts;

    const Verdict& at(const std::string& key) const;
};

/// Decides each characterization from sampled residuals of its defining
/// identity, normalized by max(1, magnitude). Keys:
///   conoidal, relative_minimal, image_point, image_curve, image_subinterval,
///   improper_sphere, proper_sphere, precedent, fixed_plane, psi1_orthoid,
///   psi1_edlinger, psi1_striction_asymptotic, psi1_striction_curvature,
///   psi1_congruent.
/// Samples where f vanishes are skipped and counted in singular_samples.
ClassificationReport classify(const RuledSurface& surface, const scalarfun::Node& f,
                              const ClassifyOptions& options = {});

struct FocalPoints {
    Vec3 focal;       // x*, the degenerate focal surface
    Vec3 developable; // s*, striction point of the asymptotic developable
};

/// Throws DegenerationError when kappa(u) = 0.
FocalPoints focal_and_developable(const RuledSurface& surface, const scalarfun::Node& f, double u);

}  // namespace ruledrel::asymcalc
