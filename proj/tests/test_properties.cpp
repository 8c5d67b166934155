// Randomized property suites tying the modules together.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "abel/json_io.hpp"
#include "abel/parse.hpp"
#include "abel/sampled.hpp"
#include "abel/solve.hpp"

#include <random>

using namespace abel;

namespace {

std::mt19937_64 rng(424242);

Expr rnd() {
    std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
    return Expr(Scalar(make_rat(num(rng), den(rng))));
}

Expr rnd_nz() {
    Expr e = rnd();
    while (e.is_zero()) e = rnd();
    return e;
}

FamilyParams random_family(FamilyTag tag) {
    FamilyParams p{tag, {}};
    for (const auto& name : family_params(tag)) p.bind[name] = rnd();
    return p;
}

} // namespace

TEST_CASE("construct_family then shape_classify reports the expected tag") {
    int checked = 0;
    for (int i = 0; i < 105 && checked < 100; ++i) {
        FamilyTag tag = (i % 3 == 0) ? FamilyTag::AIL8 : (i % 3 == 1) ? FamilyTag::AIR10 : FamilyTag::AIA16;
        FamilyParams p = random_family(tag);
        RationalODE e;
        try {
            e = construct_family(p);
        } catch (const DivisionByZero&) {
            continue;   // denominator vanished for this draw
        }
        if (e.rhs.is_zero()) continue;
        ShapeReport r = shape_classify(e);
        if (tag == FamilyTag::AIL8) CHECK(r.ail_form);
        if (tag == FamilyTag::AIR10) CHECK(r.air_form);
        if (tag == FamilyTag::AIA16) CHECK(r.aia_form);
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("slot extraction then reconstruction is the identity") {
    for (int i = 0; i < 40; ++i) {
        Expr x = Expr::variable(registry().x()), y = Expr::variable(registry().y());
        Expr rhs = rnd_nz() * y.pow(Rat(3)) + rnd() * y * y + (rnd() + rnd() * x) * y + rnd() / (x + Expr(7));
        RationalODE e(rhs);
        AbelFirstKindEq fk = extract_first_kind(e);
        CHECK((ode_of(fk).rhs - e.rhs).is_zero());

        Expr den = (rnd_nz() * x + rnd_nz()) * y + rnd() * x + rnd_nz();
        if (den.is_zero() || den.rf().num().degree(registry().y()) != 1) continue;
        RationalODE e2(rhs / den);
        AbelSecondKindEq sk = extract_second_kind(e2);
        CHECK((ode_of(sk).rhs - e2.rhs).is_zero());
    }
}

TEST_CASE("constant-invariant predicate over 100 random AIL_8 instances") {
    int nonconst_checked = 0;
    while (nonconst_checked < 100) {
        FamilyParams p = random_family(FamilyTag::AIL8);
        p.bind["a3"] = rnd_nz();
        Expr omega = p.get("r1") * p.get("s0") - p.get("r0") * p.get("s1");
        if (omega.is_zero()) continue;
        if (p.get("s1").is_zero() && p.get("s0").is_zero()) continue;
        RationalODE e;
        try {
            e = construct_family(p);
            CHECK(!is_constant_invariant(e));
        } catch (const Error&) {
            continue;   // degenerate draw (not convertible)
        }
        ++nonconst_checked;
    }
    // omega = 0 counterparts
    for (int i = 0; i < 10; ++i) {
        Expr c = rnd_nz(), s1 = rnd_nz(), s0 = rnd_nz();
        FamilyParams p{FamilyTag::AIL8,
                       {{"s1", s1}, {"s0", s0}, {"r1", c * s1}, {"r0", c * s0},
                        {"a3", rnd_nz()}, {"a2", rnd()}, {"a1", rnd()}, {"a0", rnd()}}};
        CHECK(is_constant_invariant(construct_family(p)));
    }
}

TEST_CASE("invert_xy is an involution on random rational equations") {
    for (int i = 0; i < 30; ++i) {
        Expr x = Expr::variable(registry().x()), y = Expr::variable(registry().y());
        Expr rhs = (rnd() + rnd() * x + rnd() * y + rnd() * x * y * y) /
                   (rnd_nz() + rnd() * x * x + rnd() * y);
        if (rhs.is_zero()) continue;
        RationalODE e(rhs);
        CHECK((invert_xy(invert_xy(e)).rhs - e.rhs).is_zero());
    }
}

TEST_CASE("branch transports carry the AIL_4 solution to AIL_2 and AIL_1") {
    // AIL_1 route (k3 = 0, k2 != 0), rational throughout
    {
        std::map<std::string, Expr> k{{"k3", Expr(0)}, {"k2", Expr(2)}, {"k1", Expr(1)}, {"k0", Expr(-1)}};
        SplitResult b = ail_branch(k);
        REQUIRE(b.tag == NormalFormTag::AIL1);
        FamilyParams img{FamilyTag::AIL8,
                         {{"s1", Expr(0)}, {"s0", Expr(1)}, {"r1", Expr(1)}, {"r0", Expr(0)},
                          {"a3", -k["k3"]}, {"a2", -k["k2"]}, {"a1", -k["k1"]}, {"a0", -k["k0"]}}};
        FirstIntegral fi = solve_ail(img);
        Expr psi = pull_back(b.chain.back(), fi.psi);
        auto repaired = repair_first_integral(b.normal_form, psi);
        REQUIRE(repaired.has_value());
        CHECK(verify_first_integral(b.normal_form, *repaired));
    }
    // AIL_2 route with a perfect-square -k3
    {
        std::map<std::string, Expr> k{{"k3", Expr(-4)}, {"k2", Expr(1)}, {"k1", Expr(0)}, {"k0", Expr(3)}};
        SplitResult b = ail_branch(k);
        REQUIRE(b.tag == NormalFormTag::AIL2);
        FamilyParams img{FamilyTag::AIL8,
                         {{"s1", Expr(0)}, {"s0", Expr(1)}, {"r1", Expr(1)}, {"r0", Expr(0)},
                          {"a3", -k["k3"]}, {"a2", -k["k2"]}, {"a1", -k["k1"]}, {"a0", -k["k0"]}}};
        FirstIntegral fi = solve_ail(img);
        Expr psi = pull_back(b.chain.back(), fi.psi);
        auto repaired = repair_first_integral(b.normal_form, psi);
        REQUIRE(repaired.has_value());
        CHECK(verify_first_integral(b.normal_form, *repaired));
    }
}

TEST_CASE("sampled cross-check agrees with the exact zero test on residuals") {
    // solver residuals: exact zero and sampled zero
    FamilyParams p{FamilyTag::AIL8,
                   {{"s1", Expr(1)}, {"s0", Expr(2)}, {"r1", Expr(1)}, {"r0", Expr(-1)},
                    {"a3", Expr(1)}, {"a2", Expr(0)}, {"a1", Expr(1)}, {"a0", Expr(0)}}};
    FirstIntegral fi = solve_ail(p);
    Expr res = first_integral_residual(construct_family(p), fi.psi);
    CHECK(res.is_zero());
    CHECK(is_zero_sampled(res, SampleConfig{20, 4, 11}).zero);

    // a deliberately wrong integral is nonzero both ways
    Expr wrong = fi.psi + Expr::variable(registry().y());
    Expr res2 = first_integral_residual(construct_family(p), wrong);
    CHECK(!res2.is_zero());
    CHECK(!is_zero_sampled(res2, SampleConfig{20, 4, 11}).zero);
}

TEST_CASE("first integrals survive transports with radical slots") {
    // point transforms whose P slot carries sqrt(t) or sqrt(3 - 6t)
    FamilyParams p{FamilyTag::AIL8,
                   {{"s1", Expr(0)}, {"s0", Expr(1)}, {"r1", Expr(1)}, {"r0", Expr(0)},
                    {"a3", Expr(0)}, {"a2", Expr(0)}, {"a1", Expr(0)}, {"a0", Expr(1)}}};
    FirstIntegral fi = solve_ail(p);
    RationalODE eq = construct_family(p);
    Expr t = Expr::variable(registry().t());
    std::vector<ChangeOfVariables> radical_transforms = {
        ChangeOfVariables::point(t * t, sqrt_of(Expr(3) - Expr(6) * t), Expr(0)),
        ChangeOfVariables::point(Expr(1) / t, sqrt_of(t), Expr(1)),
        ChangeOfVariables::point(t, sqrt_of(t * t + Expr(1)), -t),
    };
    for (const auto& T : radical_transforms) {
        RationalODE image = apply(T, eq);
        Expr psi = pull_back(T, fi.psi);
        auto repaired = repair_first_integral(image, psi);
        REQUIRE(repaired.has_value());
        CHECK(verify_first_integral(image, *repaired));
    }
}

TEST_CASE("JSON payloads round-trip through the parser") {
    for (const char* s : {"y' = y^3 - 2*x*y^2", "y' = -(y^3+1)/((x+1)*y + x)",
                          "y' = (1 - 2*x*y + y^2 - 2*y^3*x)/(x^2 + 1)"}) {
        RationalODE e(std::get<OdeText>(parse_any(s)).rhs);
        json j = equation_to_json(e);
        RationalODE back = equation_from_json(j);
        CHECK((back.rhs - e.rhs).is_zero());
    }
    ChangeOfVariables t = ChangeOfVariables::point(parse_expression("t^2/2"),
                                                   parse_expression("2/t^3"),
                                                   parse_expression("2/t^2"));
    ChangeOfVariables back = transform_from_json(transform_to_json(t));
    RationalODE probe(std::get<OdeText>(parse_any("y' = y^3/(x*y + 1)")).rhs);
    CHECK((apply(back, probe).rhs - apply(t, probe).rhs).is_zero());
}

TEST_CASE("print/parse round trip on random expressions") {
    std::mt19937_64 r2(5555);
    auto rnd_expr = [&](auto&& self, int depth) -> Expr {
        std::uniform_int_distribution<int> pick(0, depth >= 3 ? 2 : 8);
        Expr x = Expr::variable(registry().x());
        Expr y = Expr::variable(registry().y());
        std::uniform_int_distribution<long> num(-9, 9), den(1, 6);
        switch (pick(r2)) {
        case 0: {
            Rat re = make_rat(num(r2), den(r2)), im = make_rat(num(r2), den(r2));
            return Expr(Scalar(re, num(r2) % 3 == 0 ? im : Rat(0)));
        }
        case 1: return x;
        case 2: return y;
        case 3: return self(self, depth + 1) + self(self, depth + 1);
        case 4: return self(self, depth + 1) * self(self, depth + 1);
        case 5: {
            Expr d = self(self, depth + 1);
            if (d.is_zero()) return self(self, depth + 1);
            return self(self, depth + 1) / d;
        }
        case 6: return exp_of(self(self, depth + 1));
        case 7: {
            Expr a = self(self, depth + 1);
            return a.is_zero() ? a : log_of(a * a + Expr(1));
        }
        default: return atan_of(self(self, depth + 1));
        }
    };
    int done = 0;
    for (int i = 0; i < 120 && done < 100; ++i) {
        Expr e;
        try {
            e = rnd_expr(rnd_expr, 0);
        } catch (const Error&) {
            continue;   // division by an expression that normalized to zero
        }
        std::string p1 = e.str();
        Expr back = parse_expression(p1);
        CHECK((back - e).is_zero());
        CHECK(back.str() == p1);
        ++done;
    }
    CHECK(done >= 100);
}

TEST_CASE("quadratic tower entries satisfy their defining relations") {
    for (int i = 0; i < 10; ++i) {
        Expr t = Expr::variable(registry().t());
        Expr base = rnd_nz() + rnd_nz() * t + rnd() * t * t;
        if (base.is_constant()) continue;
        Expr th = sqrt_of(base);
        CHECK(is_zero_exact(th * th - base));
    }
}
