#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ruledrel/asymcalc.hpp"
#include "ruledrel/cli/specfile.hpp"

namespace ruledrel::cli {

/// Exit codes of the command line tool.
enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kSpecError = 2,
    kEvalError = 3,
    kDegenerate = 4,
};

/// "%.{digits}g" in the C locale.
std::string format_number(double x, int digits);

/// Writes through a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// CSV u,v,w,x,y,z,K_gauss,q,H,K_rel,J,divI_T,curlI_T,divI_Q,curlI_Q,divG_Q,
/// one row per grid node (u outer, v inner), 12 significant digits. Without f
/// the asymptotic columns are empty; without f and q, q is empty too.
std::string cmd_eval(const SpecFile& spec);

/// One line per characterization: "name: true|false|n/a (constants, residual=r)".
/// With `json` the report is a JSON document mirroring the verdict list.
std::string cmd_classify(const SpecFile& spec, bool json);

struct ImageReport {
    std::string table;  // CSV level,u,delta,kappa,lambda,H
    std::string flags;  // "congruent Phi~Psi1: true (residual=r)" per pair
};

/// Largest relative difference of (delta, kappa, lambda) between two levels
/// over the samples; the levels are congruent when it is at most 1e-8.
double congruence_residual(const std::vector<asymcalc::ImageLevel>& levels, std::size_t a,
                           std::size_t b, const std::vector<double>& us);

/// Needs normalizations f, f1, ... for the first `depth` levels.
ImageReport cmd_image(const SpecFile& spec, int depth);

struct FieldsReport {
    std::string verdicts;  // one line per alignment characterization
    std::string table;     // CSV of the closed-form field quantities on the grid
};

FieldsReport cmd_fields(const SpecFile& spec);

/// OBJ text: object "surface" with nu*nv vertices (9 significant digits) and
/// (nu-1)(nv-1) quads; with f on a non-conoidal surface, a second object
/// "asymptotic_image" over the same grid.
std::string cmd_mesh(const SpecFile& spec);

}  // namespace ruledrel::cli
