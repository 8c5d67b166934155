// Batch command-line front end: parsing, construction, transformation,
// reduction, solving, catalog verification, and numeric checks.
//
// Exit codes: 0 success/verified, 1 verification mismatch, 2 parse/usage
// error, 3 numeric failure.
#include "abel/catalog.hpp"
#include "abel/numeric.hpp"
#include "abel/parse.hpp"
#include "abel/sampled.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace abel;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

// comma-separated k=v pairs; commas inside parentheses belong to the value
std::map<std::string, std::string> parse_set(const std::string& s) {
    std::map<std::string, std::string> out;
    int depth = 0;
    std::string cur;
    std::vector<std::string> parts;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    for (auto& p : parts) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw Error("--set expects name=value pairs: " + p);
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

FamilyParams family_args(const std::string& family, const std::string& set) {
    FamilyParams p{family_from_name(family), {}};
    for (auto& [k, v] : parse_set(set)) p.bind[k] = parse_expression(v);
    return p;
}

RationalODE ode_arg(const std::string& text) {
    auto v = parse_any(text);
    if (std::holds_alternative<OdeText>(v)) return RationalODE(std::get<OdeText>(v).rhs);
    return RationalODE(std::get<Expr>(v));
}

void emit(bool as_json, const json& j, const std::string& text) {
    if (as_json) std::cout << j.dump(2) << "\n";
    else std::cout << text << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symbolic toolkit for Abel ODE classes"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "emit JSON payloads");

    std::string expr_text, set_text, family_text, spec_text, psi_text, id_text;
    std::string from_text, to_text;
    double tol = 1e-8;
    bool fit_all = false;
    std::string catalog_path;
    bool strict_split = false;
    bool want_csv = false;

    auto* c_parse = app.add_subcommand("parse", "parse an expression or \"y' = rhs\"");
    c_parse->add_option("expr", expr_text)->required();

    auto* c_form = app.add_subcommand("form", "shape report for an equation");
    c_form->add_option("ode", expr_text)->required();

    auto* c_construct = app.add_subcommand("construct", "construct a family representative");
    c_construct->add_option("family", family_text)->required();
    c_construct->add_option("--set", set_text, "comma-separated name=value parameter bindings");

    auto* c_transform = app.add_subcommand("transform", "apply a change of variables");
    c_transform->add_option("ode", expr_text)->required();
    c_transform->add_option("--spec", spec_text, "transform JSON (object or composition array)")->required();

    auto* c_invert = app.add_subcommand("invert", "exchange x and y");
    c_invert->add_option("ode", expr_text)->required();

    auto* c_reduce = app.add_subcommand("reduce", "root-profile Mobius reduction");
    c_reduce->add_option("ode", expr_text)->required();

    auto* c_split = app.add_subcommand("split", "AIL_8 -> AIL_4 -> AIL_2/AIL_1 pipeline");
    c_split->add_option("--family", family_text)->default_val("AIL8");
    c_split->add_option("--set", set_text)->required();
    c_split->add_flag("--strict", strict_split, "refuse quadratic parameter extensions");

    auto* c_solve = app.add_subcommand("solve-ail", "quadrature solution of an AIL_8 member");
    c_solve->add_option("--set", set_text)->required();

    auto* c_verify = app.add_subcommand("verify", "check a first integral exactly");
    c_verify->add_option("ode", expr_text)->required();
    c_verify->add_option("--psi", psi_text)->required();

    auto* c_fit = app.add_subcommand("fit", "replay catalog derivations");
    c_fit->add_option("id", id_text);
    c_fit->add_flag("--all", fit_all);
    c_fit->add_option("--catalog", catalog_path, "catalog.json path (or ABEL_CATALOG env)");

    auto* c_num = app.add_subcommand("numeric-check", "constancy of a first integral along a trajectory");
    c_num->add_option("ode", expr_text)->required();
    c_num->add_option("--psi", psi_text)->required();
    c_num->add_option("--from", from_text, "x0,y0")->required();
    c_num->add_option("--to", to_text, "x1")->required();
    c_num->add_option("--tol", tol, "drift tolerance");
    c_num->add_flag("--csv", want_csv, "emit the x,y,psi trajectory as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_parse->parsed()) {
            auto v = parse_any(expr_text);
            if (std::holds_alternative<OdeText>(v)) {
                RationalODE e(std::get<OdeText>(v).rhs);
                emit(as_json, equation_to_json(e), "y' = " + e.rhs.str());
            } else {
                Expr e = std::get<Expr>(v);
                emit(as_json, json{{"expr", e.str()}}, e.str());
            }
            return kOk;
        }
        if (c_form->parsed()) {
            ShapeReport r = shape_classify(ode_arg(expr_text));
            json j = shape_report_to_json(r);
            std::string line;
            for (auto& t : j["tags"]) line += (line.empty() ? "" : " ") + t.get<std::string>();
            emit(as_json, j, line.empty() ? "none" : line);
            return kOk;
        }
        if (c_construct->parsed()) {
            RationalODE e = construct_family(family_args(family_text, set_text));
            emit(as_json, equation_to_json(e), "y' = " + e.rhs.str());
            return kOk;
        }
        if (c_transform->parsed()) {
            ChangeOfVariables t = transform_from_json(json::parse(spec_text));
            RationalODE out = apply(t, ode_arg(expr_text));
            emit(as_json, equation_to_json(out), "y' = " + out.rhs.str());
            return kOk;
        }
        if (c_invert->parsed()) {
            RationalODE out = invert_xy(ode_arg(expr_text));
            emit(as_json, equation_to_json(out), "y' = " + out.rhs.str());
            return kOk;
        }
        if (c_reduce->parsed()) {
            RootReduction r = reduce_by_roots(ode_arg(expr_text));
            json j{{"pattern", r.pattern == RootPattern::Triple          ? "triple"
                               : r.pattern == RootPattern::DoubleSimple ? "double+simple"
                                                                        : "three-distinct"},
                   {"reduced", equation_to_json(r.reduced)},
                   {"transform", transform_to_json(r.chain)}};
            emit(as_json, j, "y' = " + r.reduced.rhs.str() + "   via " + r.chain.str());
            return kOk;
        }
        if (c_split->parsed()) {
            if (family_text != "AIL8") throw Error("split currently handles --family AIL8");
            SplitResult r = ail_reduce(family_args(family_text, set_text), strict_split);
            json j = split_result_to_json(r);
            emit(as_json, j, j.dump(2));
            return kOk;
        }
        if (c_solve->parsed()) {
            FamilyParams p = family_args("AIL8", set_text);
            FirstIntegral fi = solve_ail(p);
            emit(as_json, solution_to_json(fi),
                 fi.psi.str() + "\nverified: " + (fi.verified ? "true" : "false") +
                     "   method: " + fi.method);
            return fi.verified ? kOk : kMismatch;
        }
        if (c_verify->parsed()) {
            RationalODE e = ode_arg(expr_text);
            Expr psi = parse_expression(psi_text);
            bool ok = verify_first_integral(e, psi);
            emit(as_json, json{{"verified", ok}}, ok ? "verified" : "not a first integral");
            return ok ? kOk : kMismatch;
        }
        if (c_fit->parsed()) {
            Catalog cat = Catalog::load(catalog_path);
            std::vector<FitReport> reports;
            if (fit_all) {
                reports = cat.verify_all();
            } else {
                if (id_text.empty()) throw Error("fit needs an entry id or --all");
                reports.push_back(cat.verify_fit(id_text));
            }
            bool all_ok = true;
            json arr = json::array();
            for (auto& r : reports) {
                all_ok = all_ok && r.ok();
                json j{{"id", r.id},
                       {"identity", r.identity},
                       {"shape", r.shape_ok},
                       {"source_discrepancy", r.source_discrepancy()}};
                if (r.has_first_integral) j["first_integral"] = r.first_integral_ok;
                if (!r.residual.empty()) j["residual"] = r.residual;
                arr.push_back(j);
                if (!as_json) {
                    std::cout << r.id << ": " << (r.ok() ? "ok" : "FAILED");
                    if (!r.identity) std::cout << " [source-discrepancy; residual " << r.residual << "]";
                    std::cout << "\n";
                }
            }
            if (as_json) std::cout << arr.dump(2) << "\n";
            else std::cout << (all_ok ? "all identities verified" : "FAILURES present") << "\n";
            return all_ok ? kOk : kMismatch;
        }
        if (c_num->parsed()) {
            RationalODE e = ode_arg(expr_text);
            Expr psi = parse_expression(psi_text);
            auto comma = from_text.find(',');
            if (comma == std::string::npos) throw Error("--from expects x0,y0");
            double x0 = std::stod(from_text.substr(0, comma));
            double y0 = std::stod(from_text.substr(comma + 1));
            double x1 = std::stod(to_text);
            NumericConfig cfg;
            DriftReport rep = constancy_check(e, psi, x0, y0, x1, cfg);
            if (want_csv) {
                std::cout << trajectory_csv(e, psi, rep.trajectory, cfg);
                return kOk;
            }
            json j{{"max_drift", rep.max_drift},
                   {"steps", rep.trajectory.steps},
                   {"rejected", rep.trajectory.rejected},
                   {"pole_stop", rep.trajectory.pole_stop},
                   {"within_tol", rep.max_drift < tol}};
            emit(as_json, j,
                 "max drift " + std::to_string(rep.max_drift) + " over " +
                     std::to_string(rep.trajectory.steps) + " steps");
            return rep.max_drift < tol ? kOk : kMismatch;
        }
    } catch (const SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const PoleOnPath& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const NonNumericSymbol& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
