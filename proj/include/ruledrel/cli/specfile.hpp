#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruledrel/framecore.hpp"
#include "ruledrel/scalarfun/parser.hpp"

namespace ruledrel::cli {

struct Grid {
    int nu = 21;
    int nv = 21;
    double vmin = -2.0;
    double vmax = 2.0;

    bool operator==(const Grid&) const = default;
};

struct Tolerances {
    double classify = 1e-7;
    double fields = 1e-7;

    bool operator==(const Tolerances&) const = default;
};

/// Surface and normalization description read from a JSON document.
///
///   {
///     "fixture": "EDL1",              optional, fills delta/kappa/lambda/domain
///     "delta": "1", "kappa": "1", "lambda": "-1",
///     "domain": [0, 6.283185307179586],
///     "u0": 0,                        default: domain start
///     "constants": {"c": 2},
///     "f": "1", "f1": "1", ...        asymptotic normalizations of Phi, Psi_1, ...
///     "q": "1/w",                     general support function (excludes f)
///     "grid": {"nu": 21, "nv": 21, "vmin": -2, "vmax": 2},
///     "jet_order": 4,
///     "tolerances": {"classify": 1e-7, "fields": 1e-7}
///   }
///
/// Expressions are stored in normalized (re-emitted) form, so
/// parse(emit(parse(text))) == parse(text).
struct SpecFile {
    std::string delta, kappa, lambda;
    Interval domain;
    double u0 = 0.0;
    scalarfun::Constants constants;
    std::vector<std::string> f;  // f, f1, f2, ...
    std::optional<std::string> q;
    Grid grid;
    int jet_order = 4;
    Tolerances tolerances;

    bool operator==(const SpecFile& other) const;
};

/// Throws SpecError (ParseError for expression text) on any violation.
SpecFile parse_spec(std::string_view json_text);
SpecFile load_spec(const std::string& path);
std::string emit_spec(const SpecFile& spec);

/// Evaluation objects built from a spec.
struct Loaded {
    RuledSurface surface;
    std::vector<scalarfun::Expr> f;
    scalarfun::Expr q;  // null unless the spec has q
};

Loaded load(const SpecFile& spec);

std::vector<double> grid_u(const SpecFile& spec);
std::vector<double> grid_v(const SpecFile& spec);

}  // namespace ruledrel::cli
