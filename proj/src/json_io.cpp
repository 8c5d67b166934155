#include "abel/json_io.hpp"

#include "abel/parse.hpp"

namespace abel {

namespace {

Expr parse_slot(const json& j, const char* what) {
    if (!j.is_string()) throw Error(std::string("expected an expression string for ") + what);
    return parse_expression(j.get<std::string>());
}

json params_of(const Expr& e) {
    json out = json::object();
    for (SymId s : free_symbols(e)) {
        if (s == registry().x() || s == registry().y()) continue;
        out[registry().name(s)] = "sym";
    }
    return out;
}

} // namespace

json equation_to_json(const RationalODE& e) {
    json j;
    j["vars"] = {"x", "y"};
    ShapeReport rep;
    bool shaped = true;
    try {
        rep = shape_classify(e);
    } catch (const Error&) {
        shaped = false;
    }
    if (shaped && rep.abel_first_kind) {
        j["kind"] = "abel-first-kind";
        AbelFirstKindEq fk = extract_first_kind(e);
        j["slots"] = {{"f3", fk.f3.str()}, {"f2", fk.f2.str()}, {"f1", fk.f1.str()}, {"f0", fk.f0.str()}};
    } else if (shaped && rep.abel_second_kind) {
        j["kind"] = "abel-second-kind";
        AbelSecondKindEq sk = extract_second_kind(e);
        j["slots"] = {{"tf3", sk.tf3.str()}, {"tf2", sk.tf2.str()}, {"tf1", sk.tf1.str()},
                      {"tf0", sk.tf0.str()}, {"g1", sk.g1.str()},  {"g0", sk.g0.str()}};
    } else {
        j["kind"] = "rational";
        j["slots"] = {{"rhs", e.rhs.str()}};
    }
    j["params"] = params_of(e.rhs);
    return j;
}

RationalODE equation_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    const json& slots = j.at("slots");
    if (kind == "abel-first-kind") {
        AbelFirstKindEq fk;
        fk.f3 = parse_slot(slots.at("f3"), "f3");
        fk.f2 = parse_slot(slots.at("f2"), "f2");
        fk.f1 = parse_slot(slots.at("f1"), "f1");
        fk.f0 = parse_slot(slots.at("f0"), "f0");
        return ode_of(fk);
    }
    if (kind == "abel-second-kind") {
        AbelSecondKindEq sk;
        sk.tf3 = parse_slot(slots.at("tf3"), "tf3");
        sk.tf2 = parse_slot(slots.at("tf2"), "tf2");
        sk.tf1 = parse_slot(slots.at("tf1"), "tf1");
        sk.tf0 = parse_slot(slots.at("tf0"), "tf0");
        sk.g1 = parse_slot(slots.at("g1"), "g1");
        sk.g0 = parse_slot(slots.at("g0"), "g0");
        return ode_of(sk);
    }
    if (kind == "rational") return RationalODE(parse_slot(slots.at("rhs"), "rhs"));
    throw Error("unknown equation kind: " + kind);
}

json transform_to_json(const ChangeOfVariables& t) {
    switch (t.kind) {
    case ChangeOfVariables::Kind::Point:
        return {{"kind", "point"}, {"F", t.F.str()}, {"P", t.P.str()}, {"Q", t.Q.str()}};
    case ChangeOfVariables::Kind::RationalLinear:
        return {{"kind", "rational-linear"}, {"F", t.F.str()}, {"P1", t.P1.str()},
                {"Q1", t.Q1.str()}, {"P2", t.P2.str()}, {"Q2", t.Q2.str()}};
    case ChangeOfVariables::Kind::Inversion:
        return {{"kind", "inversion"}};
    case ChangeOfVariables::Kind::KindShift:
        return {{"kind", "kind-shift"}, {"g1", t.g1.str()}, {"g0", t.g0.str()}};
    case ChangeOfVariables::Kind::Composition: {
        json arr = json::array();
        for (const auto& s : t.steps) arr.push_back(transform_to_json(s));
        return arr;
    }
    }
    throw Error("unreachable");
}

ChangeOfVariables transform_from_json(const json& j) {
    if (j.is_array()) {
        std::vector<ChangeOfVariables> steps;
        for (const auto& s : j) steps.push_back(transform_from_json(s));
        return compose(steps);
    }
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "point")
        return ChangeOfVariables::point(parse_slot(j.at("F"), "F"), parse_slot(j.at("P"), "P"),
                                        parse_slot(j.at("Q"), "Q"));
    if (kind == "rational-linear")
        return ChangeOfVariables::rational_linear(parse_slot(j.at("F"), "F"),
                                                  parse_slot(j.at("P1"), "P1"),
                                                  parse_slot(j.at("Q1"), "Q1"),
                                                  parse_slot(j.at("P2"), "P2"),
                                                  parse_slot(j.at("Q2"), "Q2"));
    if (kind == "inversion") return ChangeOfVariables::inversion();
    if (kind == "kind-shift")
        return ChangeOfVariables::kind_shift(parse_slot(j.at("g1"), "g1"),
                                             parse_slot(j.at("g0"), "g0"));
    throw Error("unknown transform kind: " + kind);
}

FamilyParams family_params_from_json(const std::string& family, const json& set) {
    FamilyParams p{family_from_name(family), {}};
    if (!set.is_null()) {
        for (auto it = set.begin(); it != set.end(); ++it) {
            if (it.value().is_string() && it.value().get<std::string>() == "sym") continue;
            p.bind[it.key()] = parse_slot(it.value(), it.key().c_str());
        }
    }
    return p;
}

json family_params_to_json(const FamilyParams& p) {
    json set = json::object();
    for (auto& [k, v] : p.bind) set[k] = v.str();
    return {{"family", family_name(p.tag)}, {"set", set}};
}

json split_result_to_json(const SplitResult& r) {
    json j;
    switch (r.tag) {
    case NormalFormTag::AIL4: j["normal_form"] = "AIL_4"; break;
    case NormalFormTag::AIL2: j["normal_form"] = "AIL_2"; break;
    case NormalFormTag::AIL1: j["normal_form"] = "AIL_1"; break;
    case NormalFormTag::ConstantInvariant: j["normal_form"] = "constant-invariant"; break;
    }
    if (!r.k.empty()) {
        json k = json::array();
        for (const char* n : {"k0", "k1", "k2", "k3"}) {
            auto it = r.k.find(n);
            k.push_back(it == r.k.end() ? "0" : it->second.str());
        }
        j["k"] = k;
    }
    json params = json::object();
    for (auto& [n, v] : r.derived) params[n] = v.str();
    j["params"] = params;
    json chain = json::array();
    for (const auto& t : r.chain) chain.push_back(transform_to_json(t));
    j["chain"] = chain;
    j["equation"] = r.normal_form.rhs.str();
    return j;
}

json solution_to_json(const FirstIntegral& fi) {
    return {{"first_integral", fi.psi.str()}, {"verified", fi.verified}, {"method", fi.method}};
}

json shape_report_to_json(const ShapeReport& r) {
    json tags = json::array();
    if (r.linear) tags.push_back("linear");
    if (r.riccati) tags.push_back("riccati");
    if (r.abel_first_kind) tags.push_back("abel-first-kind");
    if (r.abel_second_kind) tags.push_back("abel-second-kind");
    if (r.aia_form) tags.push_back("AIA-form");
    if (r.air_form) tags.push_back("AIR-form");
    if (r.ail_form) tags.push_back("AIL-form");
    json slots = json::object();
    for (auto& [k, v] : r.slots) slots[k] = v.str();
    return {{"tags", tags}, {"slots", slots}};
}

} // namespace abel
