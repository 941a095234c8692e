#include "ruledrel/fixtures.hpp"

#include <numbers>

#include "ruledrel/error.hpp"

namespace ruledrel::fixtures {

const std::vector<Fixture>& canonical() {
    static const std::vector<Fixture> all{
        {"HEL1", "1", "0", "0", true},
        {"ORT1", "1", "1", "0", false},
        {"EDL1", "1", "1", "-1", false},
        {"RCON", "1/(u+2)", "0", "0", true},
    };
    return all;
}

const Fixture& by_name(const std::string& name) {
    for (const auto& f : canonical()) {
        if (f.name == name) return f;
    }
    throw SpecError("unknown fixture '" + name + "'");
}

RuledSurfaceSpec spec(const Fixture& fixture, int jet_order) {
    auto s = RuledSurfaceSpec::from_text(fixture.delta, fixture.kappa, fixture.lambda,
                                         {0.0, 2.0 * std::numbers::pi}, 0.0);
    s.jet_order = jet_order;
    return s;
}

RuledSurface build(const std::string& name, int jet_order) {
    return build_surface(spec(by_name(name), jet_order));
}

}  // namespace ruledrel::fixtures
