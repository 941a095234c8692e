#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruledrel/framecore.hpp"
#include "ruledrel/scalarfun/ast.hpp"

namespace ruledrel::fieldcalc {

// Divergence and rotation of the Tchebychev vector T and the support vector
// Q of an asymptotic normalization q = f / w, with respect to the first
// fundamental form I and the relative metric G.

struct TchebFields {
    double divI_T = 0, curlI_T = 0, divG_T = 0, curlG_T = 0;
};

struct FieldCalculus {
    double divI_T = 0, curlI_T = 0, divG_T = 0, curlG_T = 0;
    double divI_Q = 0, curlI_Q = 0, divG_Q = 0, curlG_Q = 0;
    double A0 = 0, A1 = 0, A2 = 0, A3 = 0;  // numerator coefficients of curlI_Q
};

TchebFields tcheb_field_calculus(const RuledSurface& surface, const scalarfun::Node& f, double u,
                                 double v);
FieldCalculus support_field_calculus(const RuledSurface& surface, const scalarfun::Node& f,
                                     double u, double v);

enum class Metric { I, G };

/// Components (X^1, X^2) of a tangent field on the basis x_u, x_v.
using TangentField = std::function<std::array<double, 2>(double u, double v)>;

struct DivCurl {
    double div = 0;
    double curl = 0;
};

/// div = (a X^i)_{/i} / a and
/// curl = [(M12 X^1 + M22 X^2)_{/1} - (M11 X^1 + M12 X^2)_{/2}] / a,
/// with M = g (metric I) or G = h / q (metric G, needs f) and a = |det M|^(1/2),
/// all partials by central differences with `step`.
DivCurl generic_div_curl(const RuledSurface& surface, const scalarfun::Node* f,
                         const TangentField& field, Metric metric, double u, double v,
                         double step = 1e-5);

/// T and Q of q = f / w as tangent fields.
TangentField tchebychev_field(const RuledSurface& surface, const scalarfun::Node& f);
TangentField support_field(const RuledSurface& surface, const scalarfun::Node& f);

enum class CurveFamily { asymptotic_lines, u_curves, k_curves, lines_of_curvature };
enum class Relation { tangent, orthogonal };

std::string_view family_name(CurveFamily family);
std::string_view relation_name(Relation relation);
std::optional<CurveFamily> parse_family(std::string_view name);
std::optional<Relation> parse_relation(std::string_view name);

/// Left side of the differential equation of a directrix v = v(u) in the
/// family, at slope v' = vprime.
double curve_family_residual(const RuledSurface& surface, CurveFamily family, double u, double v,
                             double vprime);

/// A polynomial value together with the sum of the magnitudes of the products
/// it was assembled from; |value| / magnitude is scale free.
struct Scaled {
    double value = 0;
    double magnitude = 0;

    double relative() const noexcept;
};

/// The v'-eliminated condition for Q to be tangent or orthogonal to the
/// family at (u, v). Throws SpecError for lines of curvature with the
/// orthogonal relation, for which no condition is derived.
Scaled alignment_residual(const RuledSurface& surface, const scalarfun::Node& f, Relation relation,
                          CurveFamily family, double u, double v);

/// Condition for Q parallel to the directrix tangent x' = (delta lambda + v') e + v n + delta z.
Scaled directrix_parallel_residual(const RuledSurface& surface, const scalarfun::Node& f, double u,
                                   double v, double vprime);
Scaled directrix_orthogonal_residual(const RuledSurface& surface, const scalarfun::Node& f,
                                     double u, double v, double vprime);

struct FieldVerdict {
    std::string key;
    bool holds = false;
    double residual = 0;  // max of |value| / magnitude over the grid
    double tolerance = 0;
    std::optional<std::array<double, 2>> witness;  // (u, v) of the max
    std::string statement;
};

struct AlignmentOptions {
    double tolerance = 1e-7;
    int grid = 21;
    double v_min = -2.0;
    double v_max = 2.0;
};

/// Samples every characterization on a grid x grid set of (u, v). Keys:
///   divI_T_zero, curlI_T_zero, Q_orthogonal_generators, divI_Q_zero,
///   curlI_Q_zero, divG_Q_zero, Q_tangent_asymptotic, Q_orthogonal_asymptotic,
///   Q_tangent_u_curves, Q_orthogonal_u_curves, Q_tangent_k_curves,
///   Q_orthogonal_k_curves, Q_tangent_lines_of_curvature.
std::vector<FieldVerdict> alignment_classify(const RuledSurface& surface, const scalarfun::Node& f,
                                             const AlignmentOptions& options = {});

}  // namespace ruledrel::fieldcalc
