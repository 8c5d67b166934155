#include "abel/catalog.hpp"

#include "abel/parse.hpp"

#include <cstdlib>
#include <fstream>
#include <future>

namespace abel {

namespace {

SymId xs() { return registry().x(); }
SymId ys() { return registry().y(); }

RationalODE parse_ode_string(const std::string& s) {
    auto v = parse_any(s);
    if (!std::holds_alternative<OdeText>(v)) throw Error("expected an ODE string: " + s);
    return RationalODE(std::get<OdeText>(v).rhs);
}

SubstMap bind_map(const json& binds) {
    SubstMap m;
    if (binds.is_null()) return m;
    for (auto it = binds.begin(); it != binds.end(); ++it)
        m[registry().intern(it.key())] = parse_expression(it.value().get<std::string>());
    return m;
}

// Appell's general equation with the derivative coefficient computed here.
RationalODE build_appell() {
    Expr x = Expr::variable(xs()), y = Expr::variable(ys());
    Expr Q = Expr::symbol("alpha") * x * x + Expr::symbol("beta") * x + Expr::symbol("gamma");
    Expr P = Expr::symbol("a") * x * x + Expr::symbol("b") * x + Expr::symbol("c");
    Expr rhs = -y.pow(Rat(3)) / Q - differentiate(P / Q, xs()) * y * y;
    return RationalODE(rhs);
}

} // namespace

RationalODE CatalogEntry::representative(bool apply_target_bind) const {
    RationalODE rep;
    if (raw.value("representative_op", "") == "appell") {
        rep = build_appell();
    } else {
        rep = parse_ode_string(raw.at("representative").get<std::string>());
    }
    if (apply_target_bind && raw.contains("derivation") &&
        raw.at("derivation").contains("target_bind")) {
        SubstMap m = bind_map(raw.at("derivation").at("target_bind"));
        if (!m.empty()) rep = RationalODE(substitute(rep.rhs, m));
    }
    return rep;
}

Catalog Catalog::load(const std::string& path) {
    std::string chosen = path;
    if (chosen.empty()) {
        const char* env = std::getenv("ABEL_CATALOG");
        if (env && *env) chosen = env;
    }
#ifdef ABEL_CATALOG_DEFAULT
    if (chosen.empty()) chosen = ABEL_CATALOG_DEFAULT;
#endif
    std::ifstream in(chosen);
    if (!in) throw Error("cannot open catalog file: " + chosen);
    json doc = json::parse(in);

    Catalog c;
    for (const auto& e : doc.at("entries")) {
        CatalogEntry entry;
        entry.id = e.at("id").get<std::string>();
        entry.classification = e.at("classification").get<std::string>();
        if (e.contains("params"))
            for (const auto& p : e.at("params")) entry.params.push_back(p.get<std::string>());
        entry.raw = e;
        c.entries_.push_back(std::move(entry));
    }
    return c;
}

const CatalogEntry& Catalog::get(const std::string& id) const {
    for (const auto& e : entries_)
        if (e.id == id) return e;
    throw Error("no catalog entry with id " + id);
}

RationalODE Catalog::resolve_source(const json& source) const {
    if (source.contains("family")) {
        FamilyParams p = family_params_from_json(source.at("family").get<std::string>(),
                                                 source.value("set", json()));
        return construct_family(p);
    }
    if (source.contains("entry")) {
        const CatalogEntry& base = get(source.at("entry").get<std::string>());
        RationalODE rep = base.representative(false);
        SubstMap m = bind_map(source.value("set", json()));
        if (!m.empty()) rep = RationalODE(substitute(rep.rhs, m));
        return rep;
    }
    throw Error("derivation source must name a family or an entry");
}

FitReport Catalog::verify_fit(const std::string& id) const {
    const CatalogEntry& entry = get(id);
    FitReport rep;
    rep.id = id;

    const json& deriv = entry.raw.at("derivation");
    RationalODE cur = resolve_source(deriv.at("source"));
    rep.steps.push_back("source");

    std::map<int, RationalODE> checkpoints;
    if (entry.raw.contains("checkpoints"))
        for (const auto& c : entry.raw.at("checkpoints"))
            checkpoints.emplace(c.at("after").get<int>(),
                                parse_ode_string(c.at("equation").get<std::string>()));

    bool chain_ok = true;
    int idx = 0;
    for (const auto& tj : deriv.value("chain", json::array())) {
        ChangeOfVariables t = transform_from_json(tj);
        cur = apply(t, cur);
        rep.steps.push_back(t.str());
        auto cp = checkpoints.find(idx);
        if (cp != checkpoints.end() && !(cur.rhs - cp->second.rhs).is_zero()) {
            chain_ok = false;
            rep.residual = (cur.rhs - cp->second.rhs).str();
        }
        ++idx;
    }

    RationalODE target = entry.representative();
    Expr residual = cur.rhs - target.rhs;
    rep.identity = chain_ok && residual.is_zero();
    if (!residual.is_zero()) rep.residual = residual.str();

    // classification consistency
    rep.shape_ok = false;
    try {
        ShapeReport sr;
        const json& w = entry.raw.at("form_witness");
        std::string kind = w.at("kind").get<std::string>();
        if (kind == "family") {
            FamilyParams p = family_params_from_json(w.at("family").get<std::string>(),
                                                     w.value("set", json()));
            sr = shape_classify(construct_family(p));
        } else if (kind == "representative") {
            sr = shape_classify(target);
        } else if (kind == "after-step") {
            RationalODE probe = resolve_source(deriv.at("source"));
            int upto = w.at("index").get<int>();
            int i = 0;
            for (const auto& tj : deriv.at("chain")) {
                if (i > upto) break;
                probe = apply(transform_from_json(tj), probe);
                ++i;
            }
            sr = shape_classify(probe);
        } else {
            throw Error("unknown witness kind " + kind);
        }
        if (entry.classification == "AIL") rep.shape_ok = sr.ail_form;
        else if (entry.classification == "AIR") rep.shape_ok = sr.air_form;
        else if (entry.classification == "AIA") rep.shape_ok = sr.aia_form;
    } catch (const Error&) {
        rep.shape_ok = false;
    }

    rep.has_first_integral = entry.solvable();
    if (rep.has_first_integral) {
        try {
            FirstIntegral fi = first_integral_of(id);
            rep.first_integral_ok = fi.verified;
        } catch (const Error&) {
            rep.first_integral_ok = false;
        }
    }
    return rep;
}

std::vector<FitReport> Catalog::verify_all(bool parallel) const {
    std::vector<FitReport> out;
    if (parallel) {
        std::vector<std::future<FitReport>> futs;
        for (const auto& e : entries_)
            futs.push_back(std::async(std::launch::async, [this, id = e.id] { return verify_fit(id); }));
        for (auto& f : futs) out.push_back(f.get());
    } else {
        for (const auto& e : entries_) out.push_back(verify_fit(e.id));
    }
    std::sort(out.begin(), out.end(), [](const FitReport& a, const FitReport& b) { return a.id < b.id; });
    return out;
}

FirstIntegral Catalog::first_integral_of(const std::string& id) const {
    const CatalogEntry& entry = get(id);
    if (!entry.solvable()) throw Error("entry " + id + " has no recorded first-integral route");
    const json& solv = entry.raw.at("solvable");
    FamilyParams p = family_params_from_json("AIL8", solv.at("ail8"));
    FirstIntegral fi = solve_ail(p);
    for (const auto& tj : solv.value("chain", json::array())) {
        ChangeOfVariables t = transform_from_json(tj);
        fi.psi = pull_back(t, fi.psi);
        fi.chain.push_back(t);
    }
    RationalODE target = entry.representative();
    if (auto repaired = repair_first_integral(target, fi.psi)) {
        fi.psi = *repaired;
        fi.verified = true;
        return fi;
    }
    throw InternalError("transported first integral fails on the representative of " + id);
}

InverseClassResult Catalog::generate_inverse_class(const RationalODE& e,
                                                   std::optional<Expr> psi) const {
    ShapeReport sr = shape_classify(e);
    if (!sr.aia_form) throw Error("generate_inverse_class requires an AIA-form equation");
    InverseClassResult out;
    out.equation = invert_xy(e);
    if (psi) {
        out.psi = substitute(*psi, {{xs(), Expr::variable(ys())}, {ys(), Expr::variable(xs())}});
        out.psi_verified = verify_first_integral(out.equation, *out.psi);
    }
    ShapeReport so = shape_classify(out.equation);
    out.output_aia_form = so.aia_form;
    out.output_is_abel = so.abel_first_kind || so.abel_second_kind;
    for (const auto& entry : entries_) {
        try {
            if ((entry.representative().rhs - out.equation.rhs).is_zero()) {
                out.known_entry = entry.id;
                break;
            }
        } catch (const Error&) {
        }
    }
    return out;
}

InverseClassResult Catalog::generate_inverse_class(const std::string& id) const {
    const CatalogEntry& entry = get(id);
    std::optional<Expr> psi;
    if (entry.solvable()) psi = first_integral_of(id).psi;
    return generate_inverse_class(entry.representative(), psi);
}

} // namespace abel
