#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ruledrel/asymcalc.hpp"
#include "ruledrel/cli/app.hpp"
#include "ruledrel/cli/verify.hpp"
#include "ruledrel/error.hpp"
#include "ruledrel/fieldcalc.hpp"
#include "ruledrel/fixtures.hpp"
#include "ruledrel/framecore.hpp"
#include "ruledrel/relnorm.hpp"
#include "ruledrel/scalarfun/parser.hpp"

namespace py = pybind11;
using namespace ruledrel;

namespace {

using Triple = std::array<double, 3>;

Triple triple(const Vec3& x) { return {x.x(), x.y(), x.z()}; }

scalarfun::Expr parse_f(const RuledSurface& s, const std::string& f) {
    return scalarfun::parse_scalar_expr(f, scalarfun::Context::normalization, *s.model()->constants());
}

py::dict frame_dict(const FrameState& fr) {
    py::dict d;
    d["u"] = fr.u;
    d["e"] = triple(fr.e);
    d["n"] = triple(fr.n);
    d["z"] = triple(fr.z);
    d["s"] = triple(fr.s);
    return d;
}

py::dict point_dict(const SurfacePointEval& p) {
    py::dict d;
    d["u"] = p.u;
    d["v"] = p.v;
    d["w"] = p.w;
    d["x"] = triple(p.x);
    d["x_u"] = triple(p.x_u);
    d["x_v"] = triple(p.x_v);
    d["normal"] = triple(p.xi);
    d["g"] = Triple{p.g11, p.g12, p.g22};
    d["h"] = Triple{p.h11, p.h12, p.h22};
    d["gauss"] = p.gauss;
    d["delta"] = p.delta;
    d["kappa"] = p.kappa;
    d["lambda"] = p.lambda;
    return d;
}

py::dict verdict_dict(const asymcalc::Verdict& v) {
    py::dict d;
    d["key"] = v.key;
    d["evaluated"] = v.evaluated;
    d["holds"] = v.holds;
    d["marginal"] = v.marginal;
    d["residual"] = v.residual;
    d["tolerance"] = v.tolerance;
    d["witness_u"] = v.witness_u;
    d["singular_samples"] = v.singular_samples;
    d["constants"] = v.constants;
    d["note"] = v.note;
    return d;
}

py::dict field_verdict_dict(const fieldcalc::FieldVerdict& v) {
    py::dict d;
    d["key"] = v.key;
    d["holds"] = v.holds;
    d["residual"] = v.residual;
    d["tolerance"] = v.tolerance;
    d["witness"] = v.witness;
    d["statement"] = v.statement;
    return d;
}

py::dict suite_dict(const cli::SuiteResult& r) {
    py::dict d;
    d["name"] = r.name;
    d["criterion"] = r.criterion;
    d["value"] = r.value;
    d["tolerance"] = r.tolerance;
    d["lower_bound"] = r.lower_bound;
    d["passed"] = r.pass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Relative differential geometry of skew ruled surfaces";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto spec_error = py::register_exception<SpecError>(m, "SpecError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", spec_error.ptr());
    auto domain_error = py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<JetOrderError>(m, "JetOrderError", domain_error.ptr());
    py::register_exception<QuadratureError>(m, "QuadratureError", domain_error.ptr());
    py::register_exception<DegenerationError>(m, "DegenerationError", error.ptr());

    py::class_<RuledSurface>(m, "Surface")
        .def(py::init([](const std::string& delta, const std::string& kappa, const std::string& lambda_,
                         std::pair<double, double> domain, std::optional<double> u0,
                         const std::map<std::string, double>& constants, int jet_order) {
                 scalarfun::Constants c(constants.begin(), constants.end());
                 auto spec = RuledSurfaceSpec::from_text(delta, kappa, lambda_, {domain.first, domain.second},
                                                         u0.value_or(domain.first), c);
                 spec.jet_order = jet_order;
                 return build_surface(spec);
             }),
             py::arg("delta"), py::arg("kappa"), py::arg("lambda_"), py::arg("domain"),
             py::arg("u0") = py::none(), py::arg("constants") = std::map<std::string, double>{},
             py::arg("jet_order") = 4)
        .def_static("fixture", &fixtures::build, py::arg("name"), py::arg("jet_order") = 4,
                    "HEL1, ORT1, EDL1 or RCON")
        .def_property_readonly("domain",
                               [](const RuledSurface& s) { return std::pair{s.domain().lo, s.domain().hi}; })
        .def_property_readonly("u0", &RuledSurface::u0)
        .def_property_readonly("jet_order", &RuledSurface::jet_order)
        .def("invariants",
             [](const RuledSurface& s, double u) {
                 const auto j = s.invariant_jets(u, 0);
                 return Triple{j.delta[0], j.kappa[0], j.lambda[0]};
             },
             py::arg("u"), "(delta, kappa, lambda) at u")
        .def("frame", [](const RuledSurface& s, double u) { return frame_dict(s.frame_at(u)); }, py::arg("u"))
        .def("point", [](const RuledSurface& s, double u, double v) { return point_dict(s.eval_point(u, v)); },
             py::arg("u"), py::arg("v"));

    m.def("fixture_names", [] {
        std::vector<std::string> names;
        for (const auto& f : fixtures::canonical()) names.push_back(f.name);
        return names;
    });

    m.def("equiaffine_support",
          [](const RuledSurface& s, double u, double v) { return relnorm::equiaffine_support(s.eval_point(u, v)); },
          py::arg("surface"), py::arg("u"), py::arg("v"));

    m.def("vector_identities",
          [](const RuledSurface& s, const std::string& q, double u, double v) {
              const auto e = scalarfun::parse_scalar_expr(q, scalarfun::Context::bivariate,
                                                          *s.model()->constants());
              const auto r = relnorm::verify_vector_identities(s.eval_point(u, v), relnorm::support_eval(s, *e, u, v));
              return std::map<std::string, double>{{"euclid_vs_affine", r.euclid_vs_affine},
                                                   {"decomposition", r.decomposition},
                                                   {"normal_split", r.normal_split}};
          },
          py::arg("surface"), py::arg("q"), py::arg("u"), py::arg("v"),
          "Residual norms of the vector identities for a support function q(u, v)");

    m.def("relative_shape",
          [](const RuledSurface& s, const std::string& f, double u, double v) {
              const auto r = asymcalc::relative_shape(s, *parse_f(s, f), u, v);
              return std::map<std::string, double>{{"B11", r.B11}, {"B12", r.B12}, {"B21", r.B21},
                                                   {"B22", r.B22}, {"H", r.H},     {"K", r.K}};
          },
          py::arg("surface"), py::arg("f"), py::arg("u"), py::arg("v") = 0.0);

    m.def("pick_invariant",
          [](const RuledSurface& s, const std::string& f, double u) {
              return asymcalc::pick_components(s, *parse_f(s, f), u).J;
          },
          py::arg("surface"), py::arg("f"), py::arg("u"));

    m.def("asymptotic_image",
          [](const RuledSurface& s, const std::string& f) { return asymcalc::asymptotic_image(s, parse_f(s, f)).image; },
          py::arg("surface"), py::arg("f"), "The image surface Psi_1 of an asymptotic normalization f");

    m.def("classify",
          [](const RuledSurface& s, const std::string& f, double tolerance) {
              asymcalc::ClassifyOptions opt;
              opt.tolerance = tolerance;
              std::vector<py::dict> out;
              for (const auto& v : asymcalc::classify(s, *parse_f(s, f), opt).verdicts) {
                  out.push_back(verdict_dict(v));
              }
              return out;
          },
          py::arg("surface"), py::arg("f"), py::arg("tolerance") = 1e-7);

    m.def("field_calculus",
          [](const RuledSurface& s, const std::string& f, double u, double v) {
              const auto c = fieldcalc::support_field_calculus(s, *parse_f(s, f), u, v);
              return std::map<std::string, double>{
                  {"divI_T", c.divI_T}, {"curlI_T", c.curlI_T}, {"divG_T", c.divG_T}, {"curlG_T", c.curlG_T},
                  {"divI_Q", c.divI_Q}, {"curlI_Q", c.curlI_Q}, {"divG_Q", c.divG_Q}, {"curlG_Q", c.curlG_Q},
                  {"A0", c.A0},         {"A1", c.A1},           {"A2", c.A2},         {"A3", c.A3}};
          },
          py::arg("surface"), py::arg("f"), py::arg("u"), py::arg("v"));

    m.def("alignment_classify",
          [](const RuledSurface& s, const std::string& f, double tolerance, int grid, double v_min, double v_max) {
              fieldcalc::AlignmentOptions opt{tolerance, grid, v_min, v_max};
              std::vector<py::dict> out;
              for (const auto& v : fieldcalc::alignment_classify(s, *parse_f(s, f), opt)) {
                  out.push_back(field_verdict_dict(v));
              }
              return out;
          },
          py::arg("surface"), py::arg("f"), py::arg("tolerance") = 1e-7, py::arg("grid") = 21,
          py::arg("v_min") = -2.0, py::arg("v_max") = 2.0);

    m.def("verify",
          [](double corruption) {
              std::vector<py::dict> out;
              for (const auto& r : cli::verify_builtin({corruption})) out.push_back(suite_dict(r));
              return out;
          },
          py::arg("corruption") = 0.0, "Builtin verification suites");

    m.def("run_cli",
          [](std::vector<std::string> args) {
              args.insert(args.begin(), "ruledrel");
              std::vector<const char*> argv;
              for (const auto& a : args) argv.push_back(a.c_str());
              std::ostringstream out, err;
              const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the command line front end; returns (exit_code, stdout, stderr)");
}
