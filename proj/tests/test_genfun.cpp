#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "eiko/genfun.hpp"

using namespace eiko;
using namespace eiko::dsl;

static const char* kStat = "G^2/(G*B0 - B1 + 2*i*a*G)";
static const char* kPipi = "G*B0 - B1 + 2*i*a*G";

static EvalContext ctx_at(const Event& e, Complex g, Params params = {}) {
    return EvalContext::at(to_null_coords(e), g, std::move(params));
}

TEST_CASE("parse accepts the paper's generating functions") {
    GenFun stat = GenFun::parse(kStat);
    CHECK_FALSE(stat.empty());
    CHECK_FALSE(stat.has_coords());
    GenFun pipi = GenFun::parse("G*B0 - B1");
    CHECK_FALSE(pipi.empty());
    // round trip
    CHECK(structural_equal(GenFun::parse(stat.str()), stat));
    CHECK(structural_equal(GenFun::parse(pipi.str()), pipi));
}

TEST_CASE("parse errors carry positions") {
    try {
        GenFun::parse("G*");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.column == 2);
    }
    CHECK_THROWS_AS(GenFun::parse("(G"), ParseError);
    CHECK_THROWS_AS(GenFun::parse("G^a"), ParseError);
    CHECK_THROWS_AS(GenFun::parse("sin(G)"), ParseError);   // unknown function
    CHECK_THROWS_AS(GenFun::parse("conj(G)"), ParseError);  // no conjugation in the grammar
    CHECK_THROWS_AS(GenFun::parse("w*G"), ParseError);      // coordinates rejected in input
    CHECK_THROWS_AS(GenFun::parse("u + v"), ParseError);
    CHECK_NOTHROW(GenFun::parse("w*G", /*allow_coords=*/true));
}

TEST_CASE("evaluation of the constraint at a root") {
    // at (x,y,z,t) = (2,0,0,0), a=1 the constraint reads 2G^2 + 2iG - 2
    GenFun pipi = GenFun::parse(kPipi);
    Params p{{"a", Complex(1.0)}};
    Complex root = Complex(std::sqrt(3.0), -1.0) / 2.0;
    Complex v = eval(pipi, ctx_at(Event{2, 0, 0, 0}, root, p));
    CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("evaluation of the static generator") {
    GenFun stat = GenFun::parse(kStat);
    Params p{{"a", Complex(1.0)}};
    Complex v = eval(stat, ctx_at(Event{2, 0, 0, 0}, Complex(0, -2), p));
    CHECK(std::abs(v - Complex(2.0 / 3.0)) <= 1e-14);
}

TEST_CASE("pole detection") {
    GenFun f = GenFun::parse("1/(G - 1)");
    CHECK_THROWS_AS(eval(f, ctx_at(Event{0, 0, 0, 0}, Complex(1.0))), PoleError);
    try {
        eval(f, ctx_at(Event{0, 0, 0, 0}, Complex(1.0)));
    } catch (const PoleError& e) {
        CHECK(e.subexpression.find("G - 1") != std::string::npos);
    }
    CHECK_THROWS_AS(eval(GenFun::parse("G^-1"), ctx_at(Event{0, 0, 0, 0}, Complex(0.0))),
                    PoleError);
}

TEST_CASE("unbound parameters are reported") {
    GenFun f = GenFun::parse("a*G");
    CHECK_THROWS_AS(eval(f, ctx_at(Event{1, 0, 0, 0}, Complex(1.0))), UnboundParameterError);
}

TEST_CASE("principal branch is recorded") {
    GenFun f = GenFun::parse("sqrt(G)");
    EvalResult r = eval_ex(f, ctx_at(Event{0, 0, 0, 0}, Complex(-4.0, 0.0)));
    CHECK(r.principal_branch);
    CHECK(std::abs(r.value - Complex(0.0, 2.0)) <= 1e-15);
    r = eval_ex(GenFun::parse("G + 1"), ctx_at(Event{0, 0, 0, 0}, Complex(1.0)));
    CHECK_FALSE(r.principal_branch);
}

TEST_CASE("total derivative of the Kerr constraint") {
    GenFun pipi = GenFun::parse("G*B0 - B1");
    CoordGenFun d = d_total_dG(pipi);
    CHECK(d.has_coords());
    // value check: B0 + G w - v at assorted points
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
        Event e{u(rng), u(rng), u(rng), u(rng)};
        Complex g(u(rng), u(rng));
        NullCoords nc = to_null_coords(e);
        Complex expect = (nc.w * g + nc.u) + g * nc.w - nc.v;
        CHECK(std::abs(eval(d, ctx_at(e, g)) - expect) <= 1e-13 * (1.0 + std::abs(expect)));
    }
    // derivative output reparses (coordinate symbols allowed internally)
    CHECK(structural_equal(GenFun::parse(d.str(), true), d));
}

TEST_CASE("total derivative of a constant vanishes") {
    GenFun c = GenFun::parse("3 + 2*i");
    CoordGenFun d = d_total_dG(c);
    CHECK(eval(d, ctx_at(Event{1, 2, 3, 4}, Complex(5, 6))) == Complex(0.0));
}

TEST_CASE("stationarity roots of the static generator") {
    // dS/dG at (2,0,0,0), a=1 vanishes at G = -2i and G = 0
    GenFun stat = GenFun::parse(kStat);
    CoordGenFun d = d_total_dG(stat);
    Params p{{"a", Complex(1.0)}};
    CHECK(std::abs(eval(d, ctx_at(Event{2, 0, 0, 0}, Complex(0, -2), p))) <= 1e-12);
    CHECK(std::abs(eval(d, ctx_at(Event{2, 0, 0, 0}, Complex(0.0), p))) <= 1e-12);
}

TEST_CASE("partial derivatives") {
    GenFun pipi = GenFun::parse("G*B0 - B1");
    GenFun d0 = d_partial(pipi, Sym::B0);
    GenFun d1 = d_partial(pipi, Sym::B1);
    EvalContext tw = EvalContext::twistor(Complex(2, 1), Complex(5, 0), Complex(-3, 2));
    CHECK(eval(d0, tw) == Complex(2, 1));   // dPi/dB0 = G
    CHECK(eval(d1, tw) == Complex(-1.0));   // dPi/dB1 = -1
    // second order partials vanish
    CHECK(eval(d_partial(d0, Sym::B0), tw) == Complex(0.0));
    CHECK(eval(d_partial(d0, Sym::B1), tw) == Complex(0.0));
    CHECK(eval(d_partial(d1, Sym::B1), tw) == Complex(0.0));

    GenFun sq = GenFun::parse("B0^2");
    CHECK(eval(d_partial(sq, Sym::B0), tw) == Complex(10.0));  // 2 B0
    CHECK(eval(d_partial(sq, Sym::B1), tw) == Complex(0.0));
}

// -------------------------------------------------- random AST machinery ---

namespace {

GenFun random_genfun(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, 9);
    std::uniform_real_distribution<double> num(-4.0, 4.0);
    if (depth <= 0) {
        switch (pick(rng) % 5) {
            case 0: return variable(Sym::G);
            case 1: return variable(Sym::B0);
            case 2: return variable(Sym::B1);
            case 3: return GenFun(make_parameter("a"));
            default: return constant(Complex(num(rng), num(rng)));
        }
    }
    GenFun a = random_genfun(rng, depth - 1);
    GenFun b = random_genfun(rng, depth - 1);
    switch (pick(rng)) {
        case 0: return a + b;
        case 1: return a - b;
        case 2: return a * b;
        case 3: return a / b;
        case 4: return -a;
        case 5: return pow(a, int(pick(rng) % 4));
        case 6: return GenFun(make_call(Func::Sqrt, a.root()));
        case 7: return GenFun(make_call(Func::Exp, a.root()));
        case 8: return GenFun(make_call(Func::Log, a.root()));
        default: return a + b;
    }
}

}  // namespace

TEST_CASE("print/parse round trip on a generated corpus") {
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 50) {
        GenFun f = random_genfun(rng, 4);
        if (f.root()->kind == Node::Constant && f.root()->value == Complex(0.0)) continue;
        GenFun again = GenFun::parse(f.str());
        REQUIRE_MESSAGE(structural_equal(again, f), "text: ", f.str());
        // idempotence: printing the reparsed form changes nothing
        CHECK(again.str() == f.str());
        ++done;
    }
}

TEST_CASE("symbolic total derivative matches finite differences") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Params p{{"a", Complex(0.7, 0.3)}};
    int done = 0;
    while (done < 60) {
        GenFun f = random_genfun(rng, 3);
        CoordGenFun df = d_total_dG(f);
        Event e{u(rng), u(rng), u(rng), u(rng)};
        Complex g(u(rng), u(rng));
        double h = 1e-6 * (1.0 + std::abs(g));
        Complex v, vp, vm, dv;
        try {
            v = eval(df, ctx_at(e, g, p));
            vp = eval(f, ctx_at(e, g + h, p));
            vm = eval(f, ctx_at(e, g - h, p));
            dv = (vp - vm) / (2.0 * h);
        } catch (const Error&) {
            continue;  // pole or branch point: resample
        }
        if (!is_finite(v) || !is_finite(dv)) continue;
        double scale = 1.0 + std::abs(v) + std::abs(dv);
        if (scale > 1e4) continue;  // ill-conditioned sample
        CHECK(std::abs(v - dv) <= 2e-6 * scale);
        ++done;
    }
}

TEST_CASE("total derivative is linear") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Params p{{"a", Complex(-0.4, 1.1)}};
    int done = 0;
    while (done < 40) {
        GenFun f = random_genfun(rng, 3);
        GenFun g = random_genfun(rng, 3);
        Complex alpha(u(rng), u(rng)), beta(u(rng), u(rng));
        GenFun combo = constant(alpha) * f + constant(beta) * g;
        Event e{u(rng), u(rng), u(rng), u(rng)};
        Complex gv(u(rng), u(rng));
        Complex lhs, rhs;
        try {
            lhs = eval(d_total_dG(combo), ctx_at(e, gv, p));
            rhs = alpha * eval(d_total_dG(f), ctx_at(e, gv, p)) +
                  beta * eval(d_total_dG(g), ctx_at(e, gv, p));
        } catch (const Error&) {
            continue;
        }
        if (!is_finite(lhs) || !is_finite(rhs)) continue;
        double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
        if (scale > 1e6) continue;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
        ++done;
    }
}
