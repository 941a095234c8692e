#include "ruledrel/cli/app.hpp"

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ruledrel/cli/commands.hpp"
#include "ruledrel/cli/verify.hpp"
#include "ruledrel/error.hpp"

namespace ruledrel::cli {

namespace {

void emit(std::ostream& out, const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        out << content;
    } else {
        write_atomic(out_path, content);
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relative differential geometry of skew ruled surfaces"};
    app.require_subcommand(1);

    std::string spec_path, out_path;
    int depth = 1;
    bool json = false;
    double corruption = 0.0;

    auto add_common = [&](CLI::App* sub, bool spec_required) {
        auto* opt = sub->add_option("--spec", spec_path, "JSON spec file")->check(CLI::ExistingFile);
        if (spec_required) opt->required();
        sub->add_option("--out", out_path, "output file (written atomically)");
    };
    auto* eval = app.add_subcommand("eval", "CSV table of point quantities on the spec grid");
    add_common(eval, true);
    auto* classify = app.add_subcommand("classify", "characterizations of the asymptotic normalization f");
    add_common(classify, true);
    classify->add_flag("--json", json, "machine-readable report");
    auto* image = app.add_subcommand("image", "invariants of the asymptotic image sequence");
    add_common(image, true);
    image->add_option("--depth", depth, "number of images")->check(CLI::PositiveNumber);
    auto* fields = app.add_subcommand("fields", "div/curl of T and Q and the alignment verdicts");
    add_common(fields, true);
    auto* mesh = app.add_subcommand("mesh", "OBJ mesh of the surface (and its asymptotic image)");
    add_common(mesh, true);
    auto* verify = app.add_subcommand("verify", "identity and oracle suites");
    add_common(verify, false);
    verify->add_option("--corrupt", corruption, "inject a relative error into closed forms")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kSpecError;
    }

    try {
        if (verify->parsed()) {
            VerifyOptions opt;
            opt.corruption = corruption;
            const auto results = spec_path.empty() ? verify_builtin(opt) : verify_spec(load_spec(spec_path), opt);
            std::string text;
            const int code = print_verify(results, text);
            emit(out, out_path, text);
            return code;
        }

        const SpecFile spec = load_spec(spec_path);
        if (eval->parsed()) {
            emit(out, out_path, cmd_eval(spec));
        } else if (classify->parsed()) {
            emit(out, out_path, cmd_classify(spec, json));
        } else if (image->parsed()) {
            const auto r = cmd_image(spec, depth);
            if (out_path.empty()) {
                out << r.table << '\n' << r.flags;
            } else {
                write_atomic(out_path, r.table);
                out << r.flags;
            }
        } else if (fields->parsed()) {
            const auto r = cmd_fields(spec);
            out << r.verdicts;
            if (!out_path.empty()) write_atomic(out_path, r.table);
        } else if (mesh->parsed()) {
            const std::string obj = cmd_mesh(spec);
            if (out_path.empty()) {
                out << obj;
            } else {
                write_atomic(out_path, obj);
            }
        }
        return kOk;
    } catch (const SpecError& e) {
        err << "spec error: " << e.what() << '\n';
        return kSpecError;
    } catch (const DegenerationError& e) {
        err << "degenerate: " << e.what() << '\n';
        return kDegenerate;
    } catch (const Error& e) {
        err << "evaluation error: " << e.what() << '\n';
        return kEvalError;
    }
}

}  // namespace ruledrel::cli
