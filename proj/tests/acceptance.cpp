// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
// All tolerances and thresholds are pinned here. --seed controls the random
// instance generators.
#include "abel/catalog.hpp"
#include "abel/numeric.hpp"
#include "abel/parse.hpp"
#include "abel/sampled.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

using namespace abel;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::mt19937_64 rng;

Expr rnd_rat(long lo = -6, long hi = 6) {
    std::uniform_int_distribution<long> num(lo, hi), den(1, 4);
    return Expr(Scalar(make_rat(num(rng), den(rng))));
}

Expr rnd_nonzero() {
    Expr e = rnd_rat();
    while (e.is_zero()) e = rnd_rat();
    return e;
}

FamilyParams random_ail8(bool s1_nonzero) {
    while (true) {
        FamilyParams p{FamilyTag::AIL8, {}};
        p.bind["s1"] = s1_nonzero ? rnd_nonzero() : rnd_rat();
        p.bind["s0"] = rnd_rat();
        p.bind["r1"] = rnd_rat();
        p.bind["r0"] = rnd_rat();
        p.bind["a3"] = rnd_nonzero();
        p.bind["a2"] = rnd_rat();
        p.bind["a1"] = rnd_rat();
        p.bind["a0"] = rnd_rat();
        if ((p.get("r1") * p.get("s0") - p.get("r0") * p.get("s1")).is_zero()) continue;
        if (p.get("s1").is_zero() && p.get("s0").is_zero()) continue;
        return p;
    }
}

// random expressions for the differentiation property: rational skeletons with
// occasional exp/log/atan/sqrt wrappers, kept pole-safe by construction
Expr random_expression(int depth = 0) {
    std::uniform_int_distribution<int> pick(0, depth >= 3 ? 2 : 9);
    Expr x = Expr::variable(registry().x());
    Expr y = Expr::variable(registry().y());
    switch (pick(rng)) {
    case 0: return rnd_rat();
    case 1: return x;
    case 2: return y;
    case 3: return random_expression(depth + 1) + random_expression(depth + 1);
    case 4: return random_expression(depth + 1) * random_expression(depth + 1);
    case 5: {
        Expr d = random_expression(depth + 1);
        return random_expression(depth + 1) / (d * d + Expr(7));
    }
    case 6: return exp_of((random_expression(depth + 1)) / Expr(9));
    case 7: {
        Expr a = random_expression(depth + 1);
        return log_of(a * a + Expr(3));
    }
    case 8: return atan_of(random_expression(depth + 1) / Expr(5));
    default: {
        Expr a = random_expression(depth + 1);
        return sqrt_of(a * a + Expr(11));
    }
    }
}

void criterion_1() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    try {
        Catalog cat = Catalog::load();
        auto reports = cat.verify_all();
        ok = reports.size() == 14;
        for (auto& r : reports) {
            if (!r.ok()) {
                ok = false;
                detail += r.id + " ";
            }
        }
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    double dt = seconds_since(t0);
    ok = ok && dt < 60.0;
    std::ostringstream os;
    os << "14 identities, " << dt << " s" << (detail.empty() ? "" : ", failing: " + detail);
    report(1, "catalog suite verifies every derivation exactly (< 60 s)", ok, os.str());
}

void criterion_2() {
    auto t0 = Clock::now();
    RationalODE aia = construct_family(FamilyParams{FamilyTag::AIA16, {}});
    RationalODE inv = invert_xy(aia);
    FamilyParams swapped{FamilyTag::AIA16, {}};
    for (int i = 0; i < 4; ++i) {
        std::string n = std::to_string(i);
        swapped.bind["a" + n] = Expr::symbol("s" + n);
        swapped.bind["b" + n] = Expr::symbol("r" + n);
        swapped.bind["s" + n] = Expr::symbol("a" + n);
        swapped.bind["r" + n] = Expr::symbol("b" + n);
    }
    bool ok = (inv.rhs - construct_family(swapped).rhs).is_zero();
    double dt = seconds_since(t0);
    ok = ok && dt < 1.0;
    std::ostringstream os;
    os << dt << " s";
    report(2, "symbolic AIA_16 inversion equals the (a,b)<->(s,r) exchange (< 1 s)", ok, os.str());
}

void criterion_3() {
    auto t0 = Clock::now();
    bool ok = true;
    int done = 0;
    for (int i = 0; i < 100; ++i) {
        // half of the instances get a cubic that splits over Q
        FamilyParams p;
        if (i % 2 == 0) {
            p = random_ail8(false);
        } else {
            Expr y = Expr::variable(registry().y());
            Expr A = rnd_nonzero() * (y - rnd_rat()) * (y - rnd_rat()) * (y - rnd_rat());
            p = random_ail8(false);
            const Polynomial& ap = A.rf().num();
            p.bind["a3"] = Expr(RationalFunction(ap.coeff_of(registry().y(), 3)));
            p.bind["a2"] = Expr(RationalFunction(ap.coeff_of(registry().y(), 2)));
            p.bind["a1"] = Expr(RationalFunction(ap.coeff_of(registry().y(), 1)));
            p.bind["a0"] = Expr(RationalFunction(ap.coeff_of(registry().y(), 0)));
        }
        try {
            FirstIntegral fi = solve_ail(p);
            if (!fi.verified) ok = false;
            ++done;
        } catch (const InternalError& e) {
            ok = false;
        } catch (const Error&) {
            // degenerate draw (A == 0 after binding); redraw
            --i;
        }
    }
    double dt = seconds_since(t0);
    ok = ok && done == 100 && dt < 120.0;
    std::ostringstream os;
    os << done << " instances, " << dt << " s";
    report(3, "solve_ail verifies exactly on 100 random AIL_8 members (< 120 s)", ok, os.str());
}

void criterion_4() {
    bool ok = true;
    std::string detail;
    // pinned regression: (s1,s0,r1,r0) = (1,0,0,1) => k = (-a3, a2, -a1, a0)
    {
        FamilyParams p{FamilyTag::AIL8,
                       {{"s1", Expr(1)}, {"s0", Expr(0)}, {"r1", Expr(0)}, {"r0", Expr(1)}}};
        SplitResult s = ail_split(p);
        ok = ok && (s.k["k0"] + Expr::symbol("a3")).is_zero() &&
             (s.k["k1"] - Expr::symbol("a2")).is_zero() &&
             (s.k["k2"] + Expr::symbol("a1")).is_zero() &&
             (s.k["k3"] - Expr::symbol("a0")).is_zero();
        if (!ok) detail = "pinned k-instance";
    }
    int splits = 0, branches = 0;
    for (int i = 0; i < 50 && ok; ++i) {
        FamilyParams p = random_ail8(true);
        try {
            SplitResult s = ail_split(p);   // internal replay: chain reproduces AIL_4 exactly
            if (s.tag != NormalFormTag::AIL4) {
                ok = false;
                break;
            }
            ++splits;
            SplitResult b = ail_branch(s.k);   // internal replay against AIL_2/AIL_1 display
            if (b.tag == NormalFormTag::AIL2 || b.tag == NormalFormTag::AIL1 ||
                b.tag == NormalFormTag::ConstantInvariant)
                ++branches;
            else
                ok = false;
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
        }
    }
    std::ostringstream os;
    os << splits << " splits, " << branches << " branch reductions" << (detail.empty() ? "" : ", " + detail);
    report(4, "split pipeline reproduces AIL_4 and the AIL_2/AIL_1 patterns on 50 seeded sets", ok,
           os.str());
}

void criterion_5() {
    bool ok = true;
    // omega = 0 instances are constant-invariant
    for (int i = 0; i < 5 && ok; ++i) {
        Expr c = rnd_nonzero(), s1 = rnd_nonzero(), s0 = rnd_nonzero();
        FamilyParams p{FamilyTag::AIL8,
                       {{"s1", s1}, {"s0", s0}, {"r1", c * s1}, {"r0", c * s0},
                        {"a3", rnd_nonzero()}, {"a2", rnd_rat()}, {"a1", rnd_rat()}, {"a0", rnd_rat()}}};
        ok = ok && is_constant_invariant(construct_family(p));
    }
    // k3 = k2 = 0 AIL_4 instances are constant-invariant
    for (int i = 0; i < 5 && ok; ++i) {
        FamilyParams p{FamilyTag::AIL4,
                       {{"k3", Expr(0)}, {"k2", Expr(0)}, {"k1", rnd_rat()}, {"k0", rnd_nonzero()}}};
        ok = ok && is_constant_invariant(construct_family(p));
    }
    // 20 generic AIL_8 instances are not
    int nonconst = 0;
    for (int i = 0; i < 20; ++i) {
        FamilyParams p = random_ail8(true);
        if (!is_constant_invariant(construct_family(p))) ++nonconst;
    }
    ok = ok && nonconst == 20;
    std::ostringstream os;
    os << nonconst << "/20 generic instances non-constant";
    report(5, "constant-invariant oracle matches the three stated facts", ok, os.str());
}

void criterion_6() {
    bool ok = true;
    std::string detail;
    for (const char* lam : {"2", "1/2"}) {
        try {
            // redefinition-on-input: GTIB with a_i -> (1-lambda)*a_i maps to AIL_8(a_i)
            Expr l = parse_expression(lam);
            FamilyParams g{FamilyTag::GTIB, {{"lambda", l}}};
            for (const char* nm : {"a3", "a2", "a1", "a0"})
                g.bind[nm] = (Expr(1) - l) * Expr::symbol(nm);
            GtibReduction r = reduce_gtib(g);   // throws unless the image identity is exact
            for (const char* nm : {"a3", "a2", "a1", "a0"})
                if (!(r.ail8.get(nm) - Expr::symbol(nm)).is_zero()) ok = false;
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
        }
    }
    report(6, "GTIB reduction at lambda = 2 and 1/2 is exact under a_i -> (1-lambda)*a_i", ok, detail);
}

void criterion_7() {
    RationalODE e(std::get<OdeText>(parse_any("y' = -1/(y + x)")).rhs);
    Expr psi = parse_expression("(x + y - 1)*exp(y)");
    DriftReport good = constancy_check(e, psi, 1.0, 1.0, 2.0);
    DriftReport bad = constancy_check(e, parse_expression("x*exp(y)"), 1.0, 1.0, 2.0);

    auto yref = [&] {
        double lo = -10, hi = 10;
        auto f = [&](double yv) { return (2 + yv - 1) * std::exp(yv) - std::exp(1.0); };
        for (int i = 0; i < 200; ++i) {
            double mid = (lo + hi) / 2;
            (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
        }
        return (lo + hi) / 2;
    }();
    double e1 = std::abs(rk4_fixed_final(e, 1.0, 1.0, 2.0, 50) - yref);
    double e2 = std::abs(rk4_fixed_final(e, 1.0, 1.0, 2.0, 100) - yref);
    double ratio = e1 / e2;

    bool ok = good.max_drift < 1e-8 && bad.max_drift > 1e-3 && ratio > 16 * 0.8 && ratio < 16 * 1.2;
    std::ostringstream os;
    os << "drift " << good.max_drift << ", control " << bad.max_drift << ", RK ratio " << ratio;
    report(7, "numeric cross-check: drift < 1e-8, control > 1e-3, order-4 ratio 16 +- 20%", ok,
           os.str());
}

void criterion_8() {
    // corpus: every expression string shipped in catalog.json
    std::vector<std::string> corpus;
    Catalog cat = Catalog::load();
    std::function<void(const json&)> scan = [&](const json& j) {
        if (j.is_string()) {
            std::string s = j.get<std::string>();
            if (s.find_first_of("xytu") != std::string::npos || s.find('(') != std::string::npos)
                corpus.push_back(s);
        } else if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it)
                if (it.key() != "id" && it.key() != "classification" && it.key() != "kind" &&
                    it.key() != "representative_op")
                    scan(it.value());
        } else if (j.is_array()) {
            for (const auto& v : j) scan(v);
        }
    };
    for (const auto& entry : cat.entries()) scan(entry.raw);

    bool ok = corpus.size() >= 30;
    int stable = 0;
    for (const auto& s : corpus) {
        try {
            std::string text = s.substr(0, 4) == "y' =" ? s.substr(4) : s;
            Expr e = parse_expression(text);
            std::string p1 = e.str();
            Expr e2 = parse_expression(p1);
            if ((e - e2).is_zero() && e2.str() == p1) ++stable;
            else ok = false;
        } catch (const SyntaxError&) {
            ok = false;
        }
    }

    // 100 random expressions: derivative vs central finite difference
    int checked = 0;
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        Expr e = random_expression();
        SymId v = (i % 2 == 0) ? registry().x() : registry().y();
        if (!depends_on(e, v)) {
            --i;
            continue;
        }
        FdiffReport rep = check_derivative_fd(e, v, 2, 7000 + i, 1e-8, 1e-6, 50);
        if (rep.checked > 0) {
            ++checked;
            worst = std::max(worst, rep.max_rel_error);
            if (!rep.ok) ok = false;
        } else {
            --i;   // could not evaluate anywhere; draw another expression
        }
    }
    ok = ok && checked == 100 && worst < 1e-6;
    std::ostringstream os;
    os << corpus.size() << " corpus expressions (" << stable << " stable), fdiff worst " << worst;
    report(8, "parser round-trip on the corpus; derivatives match finite differences at 1e-6", ok,
           os.str());
}

} // namespace

int main(int argc, char** argv) {
    unsigned long seed = 20260808;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--seed" && i + 1 < argc) seed = std::stoul(argv[++i]);
    }
    rng.seed(seed);
    std::cout << "acceptance suite (seed " << seed << ")" << std::endl;

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();

    if (failures == 0) {
        std::cout << "all acceptance criteria passed" << std::endl;
        return 0;
    }
    std::cout << failures << " criteria FAILED" << std::endl;
    return 1;
}
