#include <catch_amalgamated.hpp>

#include <random>

#include "crho/exact_arith.hpp"
#include "crho/parse.hpp"
#include "oracles.hpp"

using namespace crho;

namespace {

BiPoly P(const char* s) { return parse_poly(s); }

const char* kElliptopeCurve = "2*T^3 + (2 - 1/2*mu)*T^2 - (mu + 2)*T - 2";
const char* kWeierstrass = "Y^5 - X^3*Y^3 - X^2*Y^2 + X^5";

}  // namespace

TEST_CASE("rational canonical form", "[exact-arith]") {
    Rational r(6, -4);
    CHECK(r.num() == -3);
    CHECK(r.den() == 2);
    CHECK(Rational::parse("10/4") == Rational(5, 2));
    CHECK(Rational(0, 7).den() == 1);
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK(simplest_between(Rational(49, 100), Rational(51, 100)) == Rational(1, 2));
    CHECK(simplest_between(Rational(-26, 100), Rational(-24, 100)) == Rational(-1, 4));
}

TEST_CASE("parser accepts the documented grammar", "[exact-arith]") {
    auto pc = parse_curve(kElliptopeCurve);
    CHECK(pc.mu_name == "mu");
    CHECK(pc.v_name == "T");
    CHECK(pc.poly.deg_v() == 3);
    CHECK(pc.poly.coeff(1, 2) == Rational(-1, 2));
    CHECK(pc.poly.coeff(0, 0) == Rational(-2));
    CHECK(P("(X+1)^2") == P("X^2 + 2*X + 1"));
    CHECK_THROWS_AS(P("Z + 1"), Error);
    CHECK_THROWS_AS(P("V / mu"), Error);
    CHECK_THROWS_AS(P("X + Y + T"), Error);  // Y and T both claim V
    CHECK_THROWS_AS(P("(V + 1"), Error);
}

TEST_CASE("poly_gcd examples", "[exact-arith]") {
    BiPoly p = P("(V-1)^2*(V+1)^2");
    BiPoly g = poly_gcd(p, p.derivative_v());
    CHECK(g == P("V^2 - 1"));

    CHECK(poly_gcd(P("Y^2 - X^3"), P("2*Y")) == BiPoly::constant(1));

    BiPoly w = P(kWeierstrass);
    CHECK(poly_gcd(w, w.derivative_v()).deg_v() == 0);
    // brute-force Euclid at several rational specializations agrees
    for (int mu0 : {2, 3, 5, -7}) {
        UniPoly a = w.eval_mu(Rational(mu0)), b = w.derivative_v().eval_mu(Rational(mu0));
        CHECK(oracle::naive_gcd_degree(a, b) == 0);
    }
}

TEST_CASE("poly_gcd over the other variable", "[exact-arith]") {
    BiPoly a = P("(mu - V)*(mu + 2)"), b = P("(mu - V)*(mu^2 + V)");
    CHECK(poly_gcd(a, b, Var::Mu) == P("mu - V"));
    CHECK(poly_gcd(a, b, Var::V) == P("V - mu"));
}

TEST_CASE("separable_part examples", "[exact-arith]") {
    CHECK(separable_part(P("(V-mu)^2*(V+1)")) == P("(V-mu)*(V+1)"));
    BiPoly f = P(kElliptopeCurve);
    BiPoly sf = separable_part(f);
    CHECK((sf == integer_normalize(f)));
    // resultant of F and dF/dT is a nonzero polynomial: a cofactor Sylvester
    // determinant at mu = 1 is nonzero
    CHECK_FALSE(oracle::sylvester_det(f.eval_mu(Rational(1)), f.derivative_v().eval_mu(Rational(1))).is_zero());
    CHECK(separable_part(P("Y^2 - X^3")) == P("Y^2 - X^3"));
}

TEST_CASE("content_and_primitive examples", "[exact-arith]") {
    auto [c1, q1] = content_and_primitive(P("mu*V^2 + mu^2*V"));
    CHECK(c1 == UniPoly{0, 1});
    CHECK(q1 == P("V^2 + mu*V"));
    auto [c2, q2] = content_and_primitive(P(kElliptopeCurve));
    CHECK(c2 == UniPoly{1});
    CHECK(q2 == P(kElliptopeCurve));
    auto [c3, q3] = content_and_primitive(P("mu^2*V + mu^3"));
    CHECK(c3 == UniPoly{0, 0, 1});
    CHECK(q3 == P("V + mu"));
}

TEST_CASE("resultant examples", "[exact-arith]") {
    CHECK(resultant(P("Y - 1"), P("Y^2 - X")) == UniPoly{1, -1});
    CHECK(resultant(P("Y^2 - X"), P("Y^2 + X")) == UniPoly{0, 0, 4});
    // Sylvester determinant: rows (1, 0, -X^3), (2, 0, 0), (0, 2, 0) give -4X^3
    UniPoly cusp = resultant(P("Y^2 - X^3"), P("2*Y"));
    CHECK(cusp == UniPoly{0, 0, 0, -4});
    for (int x : {1, 2, -3})
        CHECK(cusp.eval(Rational(x)) == oracle::sylvester_det(P("Y^2 - X^3").eval_mu(Rational(x)), UniPoly{0, 2}));
    CHECK_THROWS_AS(resultant(P("mu + 1"), P("mu^2")), Error);
    // eliminating mu: Sylvester rows (1, -V^2), (1, -1)
    CHECK(resultant(P("mu - V^2"), P("mu - 1"), Var::Mu) == UniPoly{-1, 0, 1});
}

TEST_CASE("resultant agrees with a cofactor Sylvester oracle on random pairs", "[exact-arith][property]") {
    std::mt19937 rng(20240601);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        BiPoly a = oracle::random_bipoly(rng, 3, 3, 5, 5), b = oracle::random_bipoly(rng, 3, 3, 5, 5);
        if (a.deg_v() < 1 || b.deg_v() < 1) continue;
        UniPoly r = resultant(a, b);
        for (int mu0 : {-2, 1, 3}) {
            Rational m(mu0);
            if (a.lc().eval(m).is_zero() || b.lc().eval(m).is_zero()) continue;
            CHECK(r.eval(m) == oracle::sylvester_det(a.eval_mu(m), b.eval_mu(m)));
            ++checked;
        }
    }
    CHECK(checked > 40);
}

TEST_CASE("exact-arith invariants on random polynomials", "[exact-arith][property]") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        BiPoly base = oracle::random_bipoly(rng, 2, 2, 4, 4);
        if (base.deg_v() < 1) continue;
        BiPoly extra = oracle::random_bipoly(rng, 2, 1, 3, 3);
        BiPoly p = base * base * (extra.is_zero() ? BiPoly::constant(1) : extra);

        BiPoly s = separable_part(p);
        CHECK(pseudo_divides(s, p));
        CHECK(poly_gcd(s, s.derivative_v()).deg_v() == 0);

        auto [c, q] = content_and_primitive(p);
        CHECK(q * c == p);

        // determinism
        CHECK(separable_part(p) == s);
    }
}

TEST_CASE("resultant vanishes exactly where a common factor appears", "[exact-arith][property]") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        BiPoly a = oracle::random_bipoly(rng, 2, 2, 4, 4), b = oracle::random_bipoly(rng, 2, 2, 4, 4);
        if (a.deg_v() < 1 || b.deg_v() < 1) continue;
        if (trial % 3 == 0) {  // force a shared factor
            BiPoly common = P("V - mu");
            a = a * common;
            b = b * common;
        }
        UniPoly r = resultant(a, b);
        for (int k = 0; k < 4; ++k) {
            Rational m = oracle::random_rational(rng, 6);
            if (a.lc().eval(m).is_zero() || b.lc().eval(m).is_zero()) continue;
            bool shares = oracle::naive_gcd_degree(a.eval_mu(m), b.eval_mu(m)) > 0;
            CHECK(r.eval(m).is_zero() == shares);
        }
    }
}
