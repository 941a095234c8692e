#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ruledrel/cli/specfile.hpp"

namespace ruledrel::cli {

struct VerifyOptions {
    /// Relative error injected into every closed-form value before it is
    /// compared with its oracle (closed -> closed (1 + c) + c). Zero in
    /// normal use; a nonzero value emulates a broken formula.
    double corruption = 0.0;
};

struct SuiteResult {
    std::string name;
    int criterion = 0;  // acceptance criterion the suite belongs to, 0 for spec-driven runs
    double value = 0.0;  // worst residual (or the checked quantity for lower bounds)
    double tolerance = 0.0;
    bool lower_bound = false;  // pass iff value >= tolerance
    bool pass = false;
};

/// Builtin run: the identity and oracle suites on HEL1, ORT1, EDL1 and the
/// right conoid constructions.
std::vector<SuiteResult> verify_builtin(const VerifyOptions& options = {});

/// Suites applicable to a spec: with f everything that holds for any
/// asymptotic normalization, with q only the vector identities.
std::vector<SuiteResult> verify_spec(const SpecFile& spec, const VerifyOptions& options = {});

/// One line per suite; returns kOk or kVerifyFailed.
int print_verify(const std::vector<SuiteResult>& results, std::string& text);

}  // namespace ruledrel::cli
