#include "ruledrel/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ruledrel/asymcalc.hpp"
#include "ruledrel/error.hpp"
#include "ruledrel/fieldcalc.hpp"
#include "ruledrel/relnorm.hpp"

namespace ruledrel::cli {

namespace {

std::string g12(double x) { return format_number(x, 12); }

void require_f(const SpecFile& spec, const char* command) {
    if (spec.f.empty()) throw SpecError(std::string(command) + " needs an asymptotic normalization 'f'");
}

std::string display_name(const std::string& key) {
    if (key == "proper_sphere") return "proper_relative_sphere";
    if (key == "improper_sphere") return "improper_relative_sphere";
    return key;
}

std::string level_name(std::size_t i) { return i == 0 ? "Phi" : "Psi" + std::to_string(i); }

}  // namespace

std::string format_number(double x, int digits) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + path + "'");
        out << content;
        out.close();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("cannot write '" + path + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot write '" + path + "'");
    }
}

std::string cmd_eval(const SpecFile& spec) {
    const Loaded l = load(spec);
    const auto& s = l.surface;
    const scalarfun::Node* f = l.f.empty() ? nullptr : l.f[0].get();
    if (f) asymcalc::validate_normalization(s, *f);

    std::ostringstream out;
    out << "u,v,w,x,y,z,K_gauss,q,H,K_rel,J,divI_T,curlI_T,divI_Q,curlI_Q,divG_Q\n";
    const auto vs = grid_v(spec);
    for (double u : grid_u(spec)) {
        std::optional<asymcalc::RelativeShape> shape;
        std::optional<asymcalc::PickComponents> pick;
        double fu = 0.0;
        if (f) {
            shape = asymcalc::relative_shape(s, *f, u);
            pick = asymcalc::pick_components(s, *f, u);
            fu = scalarfun::eval_jet(*f, u, 0, s.env())[0];
        }
        for (double v : vs) {
            const auto p = s.eval_point(u, v);
            out << g12(u) << ',' << g12(v) << ',' << g12(p.w) << ',' << g12(p.x.x()) << ','
                << g12(p.x.y()) << ',' << g12(p.x.z()) << ',' << g12(p.gauss) << ',';
            if (f) {
                const auto fc = fieldcalc::support_field_calculus(s, *f, u, v);
                out << g12(fu / p.w) << ',' << g12(shape->H) << ',' << g12(shape->K) << ','
                    << g12(pick->J) << ',' << g12(fc.divI_T) << ',' << g12(fc.curlI_T) << ','
                    << g12(fc.divI_Q) << ',' << g12(fc.curlI_Q) << ',' << g12(fc.divG_Q) << '\n';
            } else if (l.q) {
                out << g12(relnorm::support_eval(s, *l.q, u, v).q) << ",,,,,,,,\n";
            } else {
                out << ",,,,,,,,\n";
            }
        }
    }
    return out.str();
}

std::string cmd_classify(const SpecFile& spec, bool json) {
    require_f(spec, "classify");
    const Loaded l = load(spec);
    asymcalc::ClassifyOptions opt;
    opt.tolerance = spec.tolerances.classify;
    const auto report = asymcalc::classify(l.surface, *l.f[0], opt);

    if (json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& v : report.verdicts) {
            nlohmann::json j{{"key", v.key},
                             {"name", display_name(v.key)},
                             {"evaluated", v.evaluated},
                             {"holds", v.holds},
                             {"marginal", v.marginal},
                             {"residual", v.residual},
                             {"tolerance", v.tolerance},
                             {"singular_samples", v.singular_samples},
                             {"constants", v.constants},
                             {"note", v.note}};
            j["witness_u"] = v.witness_u ? nlohmann::json(*v.witness_u) : nlohmann::json(nullptr);
            doc.push_back(std::move(j));
        }
        return nlohmann::json{{"verdicts", doc}}.dump(2) + "\n";
    }

    std::ostringstream out;
    for (const auto& v : report.verdicts) {
        out << display_name(v.key) << ": ";
        if (!v.evaluated) {
            out << "n/a";
            if (!v.note.empty()) out << " (" << v.note << ")";
            out << '\n';
            continue;
        }
        out << (v.holds ? "true" : "false") << " (";
        for (const auto& [name, value] : v.constants) out << name << '=' << format_number(value, 10) << ", ";
        out << "residual=" << format_number(v.residual, 3);
        if (v.marginal) out << ", marginal";
        out << ")\n";
    }
    return out.str();
}

double congruence_residual(const std::vector<asymcalc::ImageLevel>& levels, std::size_t a,
                           std::size_t b, const std::vector<double>& us) {
    double r = 0.0;
    for (double u : us) {
        const auto x = levels.at(a).surface.invariant_jets(u, 0);
        const auto y = levels.at(b).surface.invariant_jets(u, 0);
        for (auto [p, q] : {std::pair{x.delta[0], y.delta[0]}, std::pair{x.kappa[0], y.kappa[0]},
                            std::pair{x.lambda[0], y.lambda[0]}}) {
            r = std::max(r, std::abs(p - q) / std::max({1.0, std::abs(p), std::abs(q)}));
        }
    }
    return r;
}

ImageReport cmd_image(const SpecFile& spec, int depth) {
    if (depth < 1) throw SpecError("depth must be at least 1");
    if (static_cast<int>(spec.f.size()) < depth) {
        throw SpecError("depth " + std::to_string(depth) + " needs normalizations f .. f" +
                        std::to_string(depth - 1));
    }
    const Loaded l = load(spec);
    const std::vector<scalarfun::Expr> fs(l.f.begin(), l.f.begin() + depth);
    const auto levels = asymcalc::iterate_images(l.surface, fs, depth);
    const auto us = grid_u(spec);

    std::ostringstream table;
    table << "level,u,delta,kappa,lambda,H\n";
    for (double u : us) {
        const auto li = asymcalc::level_invariants(levels, u);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto j = levels[i].surface.invariant_jets(u, 0);
            table << i << ',' << g12(u) << ',' << g12(j.delta[0]) << ',' << g12(j.kappa[0]) << ','
                  << g12(j.lambda[0]) << ',' << (i < li.size() ? g12(li[i].H) : "") << '\n';
        }
    }

    std::ostringstream flags;
    for (std::size_t a = 0; a < levels.size(); ++a) {
        for (std::size_t b = a + 1; b < levels.size(); ++b) {
            const double r = congruence_residual(levels, a, b, us);
            flags << "congruent " << level_name(a) << '~' << level_name(b) << ": "
                  << (r <= 1e-8 ? "true" : "false") << " (residual=" << format_number(r, 3) << ")\n";
        }
    }
    return {table.str(), flags.str()};
}

FieldsReport cmd_fields(const SpecFile& spec) {
    require_f(spec, "fields");
    const Loaded l = load(spec);
    const auto& s = l.surface;
    const auto& f = *l.f[0];
    asymcalc::validate_normalization(s, f);

    fieldcalc::AlignmentOptions opt;
    opt.tolerance = spec.tolerances.fields;
    opt.v_min = spec.grid.vmin;
    opt.v_max = spec.grid.vmax;
    std::ostringstream verdicts;
    for (const auto& v : fieldcalc::alignment_classify(s, f, opt)) {
        verdicts << v.key << ": " << (v.holds ? "true" : "false")
                 << " (residual=" << format_number(v.residual, 3);
        if (v.witness) {
            verdicts << ", worst at u=" << format_number((*v.witness)[0], 6)
                     << " v=" << format_number((*v.witness)[1], 6);
        }
        verdicts << ")\n";
    }

    std::ostringstream table;
    table << "u,v,divI_T,curlI_T,divG_T,curlG_T,divI_Q,curlI_Q,divG_Q,curlG_Q,A0,A1,A2,A3\n";
    const auto vs = grid_v(spec);
    for (double u : grid_u(spec)) {
        for (double v : vs) {
            const auto c = fieldcalc::support_field_calculus(s, f, u, v);
            for (double x : {u, v, c.divI_T, c.curlI_T, c.divG_T, c.curlG_T, c.divI_Q, c.curlI_Q,
                             c.divG_Q, c.curlG_Q, c.A0, c.A1, c.A2}) {
                table << g12(x) << ',';
            }
            table << g12(c.A3) << '\n';
        }
    }
    return {verdicts.str(), table.str()};
}

std::string cmd_mesh(const SpecFile& spec) {
    const Loaded l = load(spec);
    const auto& s = l.surface;
    const auto us = grid_u(spec);
    const auto vs = grid_v(spec);
    const int nu = spec.grid.nu, nv = spec.grid.nv;

    std::ostringstream out;
    auto vertex = [&out](const Vec3& p) {
        out << "v " << format_number(p.x(), 9) << ' ' << format_number(p.y(), 9) << ' '
            << format_number(p.z(), 9) << '\n';
    };
    auto faces = [&out, nu, nv](int offset) {
        for (int i = 0; i + 1 < nu; ++i) {
            for (int j = 0; j + 1 < nv; ++j) {
                const int a = offset + i * nv + j + 1;
                out << "f " << a << ' ' << a + nv << ' ' << a + nv + 1 << ' ' << a + 1 << '\n';
            }
        }
    };

    out << "o surface\n";
    for (double u : us) {
        const auto fr = s.frame_at(u);
        for (double v : vs) vertex(fr.s + v * fr.e);
    }
    faces(0);

    if (!l.f.empty()) {
        // Conoidal surfaces have no asymptotic image; the mesh is then the surface alone.
        std::ostringstream surface_only;
        surface_only << out.str();
        try {
            const auto img = asymcalc::asymptotic_image(s, l.f[0]);
            out << "o asymptotic_image\n";
            for (double u : us) {
                for (double v : vs) vertex(img.image_point(u, v));
            }
            faces(nu * nv);
        } catch (const DegenerationError&) {
            return surface_only.str();
        }
    }
    return out.str();
}

}  // namespace ruledrel::cli
