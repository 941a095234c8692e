#pragma once

#include <string>
#include <vector>

#include "ruledrel/framecore.hpp"

namespace ruledrel::fixtures {

/// Canonical surfaces used by the verification suites, all on [0, 2 pi] with
/// u0 = 0:
///
///   HEL1  right helicoid          delta = 1, kappa = 0, lambda = 0
///   ORT1  orthoid, constant       delta = 1, kappa = 1, lambda = 0
///   EDL1  Edlinger, constant      delta = 1, kappa = 1, lambda = -1
///   RCON  right conoid            delta = 1/(u+2), kappa = 0, lambda = 0
struct Fixture {
    std::string name;
    std::string delta;
    std::string kappa;
    std::string lambda;
    bool conoidal = false;
};

const std::vector<Fixture>& canonical();
const Fixture& by_name(const std::string& name);

RuledSurfaceSpec spec(const Fixture& fixture, int jet_order = 4);
RuledSurface build(const std::string& name, int jet_order = 4);

}  // namespace ruledrel::fixtures
