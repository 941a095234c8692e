#include "ruledrel/cli/specfile.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ruledrel/error.hpp"
#include "ruledrel/fixtures.hpp"

namespace ruledrel::cli {

namespace {

using nlohmann::json;

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw SpecError("'" + key + "' must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw SpecError("'" + key + "' must be finite");
    return x;
}

int integer(const json& j, const std::string& key) {
    if (!j.is_number_integer()) throw SpecError("'" + key + "' must be an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& key) {
    if (!j.is_string()) throw SpecError("'" + key + "' must be a string");
    return j.get<std::string>();
}

std::string normalized(const std::string& src, scalarfun::Context ctx, const scalarfun::Constants& c) {
    return scalarfun::to_string(*scalarfun::parse_scalar_expr(src, ctx, c));
}

// "f", "f1", "f2", ... ; returns the level or -1.
int f_level(const std::string& key) {
    if (key == "f") return 0;
    if (key.size() < 2 || key[0] != 'f') return -1;
    int level = 0;
    for (std::size_t i = 1; i < key.size(); ++i) {
        if (key[i] < '0' || key[i] > '9') return -1;
        level = level * 10 + (key[i] - '0');
        if (level > 1000) return -1;
    }
    return key[1] == '0' ? -1 : level;
}

}  // namespace

bool SpecFile::operator==(const SpecFile& o) const {
    return delta == o.delta && kappa == o.kappa && lambda == o.lambda &&
           domain.lo == o.domain.lo && domain.hi == o.domain.hi && u0 == o.u0 &&
           constants == o.constants && f == o.f && q == o.q && grid == o.grid &&
           jet_order == o.jet_order && tolerances == o.tolerances;
}

SpecFile parse_spec(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SpecError("spec must be a JSON object");

    static const std::set<std::string> known{"fixture", "delta", "kappa", "lambda", "domain",
                                             "u0", "constants", "q", "grid", "jet_order",
                                             "tolerances"};
    std::map<int, std::string> f_by_level;
    for (const auto& [key, value] : doc.items()) {
        const int level = f_level(key);
        if (level >= 0) {
            f_by_level[level] = text(value, key);
        } else if (!known.count(key)) {
            throw SpecError("unknown spec key '" + key + "'");
        }
    }

    SpecFile s;
    if (doc.contains("constants")) {
        const auto& c = doc["constants"];
        if (!c.is_object()) throw SpecError("'constants' must be an object");
        for (const auto& [name, value] : c.items()) {
            if (scalarfun::is_reserved_name(name)) throw SpecError("constant name '" + name + "' is reserved");
            s.constants[name] = number(value, "constants." + name);
        }
    }

    bool have_domain = false;
    if (doc.contains("fixture")) {
        const auto& fx = fixtures::by_name(text(doc["fixture"], "fixture"));
        const auto fs = fixtures::spec(fx);
        s.delta = fx.delta;
        s.kappa = fx.kappa;
        s.lambda = fx.lambda;
        s.domain = fs.domain;
        s.u0 = fs.u0;
        have_domain = true;
    }
    for (const char* key : {"delta", "kappa", "lambda"}) {
        std::string* slot = key[0] == 'd' ? &s.delta : key[0] == 'k' ? &s.kappa : &s.lambda;
        if (doc.contains(key)) *slot = text(doc[key], key);
        if (slot->empty()) throw SpecError(std::string("missing '") + key + "'");
        *slot = normalized(*slot, scalarfun::Context::univariate, s.constants);
    }

    if (doc.contains("domain")) {
        const auto& d = doc["domain"];
        if (!d.is_array() || d.size() != 2) throw SpecError("'domain' must be [a, b]");
        s.domain = {number(d[0], "domain[0]"), number(d[1], "domain[1]")};
        have_domain = true;
    }
    if (!have_domain) throw SpecError("missing 'domain'");
    if (!(s.domain.lo < s.domain.hi)) throw SpecError("'domain' must satisfy a < b");
    s.u0 = doc.contains("u0") ? number(doc["u0"], "u0") : (doc.contains("domain") ? s.domain.lo : s.u0);
    if (s.u0 < s.domain.lo || s.u0 > s.domain.hi) throw SpecError("'u0' lies outside the domain");

    int expected = 0;
    for (const auto& [level, src] : f_by_level) {
        if (level != expected++) throw SpecError("normalizations must be f, f1, f2, ... without gaps");
        s.f.push_back(normalized(src, scalarfun::Context::normalization, s.constants));
    }
    if (doc.contains("q")) {
        if (!s.f.empty()) throw SpecError("give either 'f' or 'q', not both");
        s.q = normalized(text(doc["q"], "q"), scalarfun::Context::bivariate, s.constants);
    }

    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (!g.is_object()) throw SpecError("'grid' must be an object");
        for (const auto& [key, value] : g.items()) {
            if (key == "nu") s.grid.nu = integer(value, "grid.nu");
            else if (key == "nv") s.grid.nv = integer(value, "grid.nv");
            else if (key == "vmin") s.grid.vmin = number(value, "grid.vmin");
            else if (key == "vmax") s.grid.vmax = number(value, "grid.vmax");
            else throw SpecError("unknown grid key '" + key + "'");
        }
    }
    if (s.grid.nu < 2 || s.grid.nv < 2) throw SpecError("grid counts must be at least 2");
    if (!(s.grid.vmin < s.grid.vmax)) throw SpecError("grid must satisfy vmin < vmax");

    if (doc.contains("jet_order")) s.jet_order = integer(doc["jet_order"], "jet_order");
    if (s.jet_order < 0 || s.jet_order > scalarfun::Jet::kMaxOrder - 2) {
        throw SpecError("'jet_order' must lie in [0, " + std::to_string(scalarfun::Jet::kMaxOrder - 2) + "]");
    }

    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        if (!t.is_object()) throw SpecError("'tolerances' must be an object");
        for (const auto& [key, value] : t.items()) {
            if (key == "classify") s.tolerances.classify = number(value, "tolerances.classify");
            else if (key == "fields") s.tolerances.fields = number(value, "tolerances.fields");
            else throw SpecError("unknown tolerance '" + key + "'");
        }
        if (!(s.tolerances.classify > 0) || !(s.tolerances.fields > 0)) {
            throw SpecError("tolerances must be positive");
        }
    }
    return s;
}

SpecFile load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot read spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

std::string emit_spec(const SpecFile& s) {
    json doc = json::object();
    doc["delta"] = s.delta;
    doc["kappa"] = s.kappa;
    doc["lambda"] = s.lambda;
    doc["domain"] = {s.domain.lo, s.domain.hi};
    doc["u0"] = s.u0;
    doc["constants"] = json::object();
    for (const auto& [k, v] : s.constants) doc["constants"][k] = v;
    for (std::size_t i = 0; i < s.f.size(); ++i) doc[i == 0 ? "f" : "f" + std::to_string(i)] = s.f[i];
    if (s.q) doc["q"] = *s.q;
    doc["grid"] = {{"nu", s.grid.nu}, {"nv", s.grid.nv}, {"vmin", s.grid.vmin}, {"vmax", s.grid.vmax}};
    doc["jet_order"] = s.jet_order;
    doc["tolerances"] = {{"classify", s.tolerances.classify}, {"fields", s.tolerances.fields}};
    return doc.dump(2) + "\n";
}

Loaded load(const SpecFile& s) {
    auto rs = RuledSurfaceSpec::from_text(s.delta, s.kappa, s.lambda, s.domain, s.u0, s.constants);
    rs.jet_order = s.jet_order;
    Loaded l{build_surface(rs), {}, nullptr};
    for (const auto& src : s.f) {
        l.f.push_back(scalarfun::parse_scalar_expr(src, scalarfun::Context::normalization, s.constants));
    }
    if (s.q) l.q = scalarfun::parse_scalar_expr(*s.q, scalarfun::Context::bivariate, s.constants);
    return l;
}

std::vector<double> grid_u(const SpecFile& s) {
    std::vector<double> u(static_cast<std::size_t>(s.grid.nu));
    for (int i = 0; i < s.grid.nu; ++i) {
        u[static_cast<std::size_t>(i)] =
            i == s.grid.nu - 1 ? s.domain.hi : s.domain.lo + s.domain.length() * i / (s.grid.nu - 1);
    }
    return u;
}

std::vector<double> grid_v(const SpecFile& s) {
    std::vector<double> v(static_cast<std::size_t>(s.grid.nv));
    for (int i = 0; i < s.grid.nv; ++i) {
        v[static_cast<std::size_t>(i)] =
            i == s.grid.nv - 1 ? s.grid.vmax : s.grid.vmin + (s.grid.vmax - s.grid.vmin) * i / (s.grid.nv - 1);
    }
    return v;
}

}  // namespace ruledrel::cli
