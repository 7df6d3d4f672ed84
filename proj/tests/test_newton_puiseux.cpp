#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "crho/exact_arith.hpp"
#include "crho/newton_puiseux.hpp"
#include "crho/parse.hpp"
#include "oracles.hpp"

using namespace crho;

namespace {

BiPoly P(const char* s) { return parse_poly(s); }

const char* kElliptope = "2*V^3 + (2 - mu/2)*V^2 - (mu + 2)*V - 2";
const char* kTwoBranch = "Y^5 - 4*Y^4 + 4*Y^3 + 2*X^2*Y^2 - X*Y^2 + 2*X^2*Y + 2*X*Y + X^4 + X^3";

/// a + b*sqrt(2) with rational a, b.
struct Q2 {
    Rational a, b;
    Q2 operator+(const Q2& o) const { return {a + o.a, b + o.b}; }
    Q2 operator-(const Q2& o) const { return {a - o.a, b - o.b}; }
    Q2 operator*(const Q2& o) const { return {a * o.a + Rational(2) * b * o.b, a * o.b + b * o.a}; }
    Q2 operator/(const Q2& o) const {
        Rational n = o.a * o.a - Rational(2) * o.b * o.b;
        Q2 c{o.a / n, -o.b / n};
        return *this * c;
    }
};

using Series = std::vector<Q2>;  // coefficients in t = mu^{1/2}

Series smul(const Series& x, const Series& y) {
    Series r(x.size(), Q2{});
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; i + j < x.size(); ++j) r[i + j] = r[i + j] + x[i] * y[j];
    return r;
}

/// Coefficients c_1..c_n of s = sum c_k t^k solving
/// 2 s^3 - (4 + t^2/2) s^2 + t^2/2 = 0 with c_1 = sqrt(8)/8, by undetermined coefficients.
std::vector<Q2> recentered_oracle(int n) {
    const std::size_t len = n + 3;
    Series s(len, Q2{});
    s[1] = Q2{Rational(0), Rational(1, 4)};  // sqrt(8)/8 = sqrt(2)/4
    auto residual = [&](const Series& x) {
        Series x2 = smul(x, x), x3 = smul(x2, x);
        Series r(len, Q2{});
        for (std::size_t i = 0; i < len; ++i) {
            r[i] = Q2{Rational(2), Rational(0)} * x3[i] - Q2{Rational(4), Rational(0)} * x2[i];
            if (i >= 2) r[i] = r[i] - Q2{Rational(1, 2), Rational(0)} * x2[i - 2];
        }
        r[2] = r[2] + Q2{Rational(1, 2), Rational(0)};
        return r;
    };
    // the order t^{k+1} coefficient is linear in c_k with slope -8 c_1
    for (int k = 2; k <= n; ++k) {
        Series r = residual(s);
        s[k] = r[k + 1] / (Q2{Rational(8), Rational(0)} * s[1]);
    }
    return {s.begin() + 1, s.begin() + n + 1};
}

AlgebraicNumber sqrt2() { return roots_with_multiplicity(UniPoly{Rational(-2), Rational(0), Rational(1)}).back().first; }

AlgebraicNumber q2_value(const Q2& x) { return AlgebraicNumber(x.a) + AlgebraicNumber(x.b) * sqrt2(); }

}  // namespace

TEST_CASE("Newton polygon examples", "[newton-puiseux]") {
    auto cusp = newton_polygon(P("Y^2 - X^3"));
    REQUIRE(cusp.size() == 1);
    CHECK(cusp[0].j0 == 0);
    CHECK(cusp[0].j1 == 2);
    CHECK(cusp[0].o0 == Rational(3));
    CHECK(cusp[0].o1 == Rational(0));
    CHECK(cusp[0].gamma == Rational(3, 2));
    CHECK(cusp[0].edge_poly == UniPoly{Rational(-1), Rational(0), Rational(1)});

    auto node = newton_polygon(P("Y^2 - X^3 - X^2"));
    REQUIRE(node.size() == 1);
    CHECK(node[0].gamma == Rational(1));
    CHECK(node[0].edge_poly == UniPoly{Rational(-1), Rational(0), Rational(1)});

    // elliptope curve recentered at -1
    auto g = newton_polygon(P("2*V^3 - (4 + mu/2)*V^2 + mu/2"));
    REQUIRE(g.size() == 2);
    CHECK(g[0].gamma == Rational(0));
    CHECK(g[0].j0 == 2);
    CHECK(g[0].j1 == 3);
    CHECK(g[1].gamma == Rational(1, 2));
    CHECK(g[1].j0 == 0);
    CHECK(g[1].j1 == 2);
    CHECK(g[1].edge_poly == UniPoly{Rational(1, 2), Rational(0), Rational(-4)});

    CHECK_THROWS_AS(newton_polygon(P("mu*V^2")), Error);
}

TEST_CASE("recentering the elliptope curve matches the hand expansion", "[newton-puiseux]") {
    // F(mu, s - 1) computed by the library's polynomial arithmetic
    BiPoly f = P(kElliptope);
    BiPoly shifted;
    BiPoly s_minus_1 = P("V - 1");
    BiPoly pw = BiPoly::constant(Rational(1));
    for (int j = 0; j <= f.deg_v(); ++j) {
        shifted += BiPoly::from_uni(f[j]) * pw;
        pw = pw * s_minus_1;
    }
    CHECK(shifted == P("2*V^3 - (4 + mu/2)*V^2 + mu/2"));
}

TEST_CASE("cusp: one branch of ramification 2", "[newton-puiseux]") {
    auto b = expand(P("Y^2 - X^3"));
    REQUIRE(b.size() == 1);
    CHECK(b[0].center_value.is_zero());
    CHECK(b[0].ramification == 2);
    CHECK(b[0].conjugate_count == 2);
    CHECK(b[0].expansion.exact);
    REQUIRE(b[0].expansion.terms.size() == 1);
    CHECK(b[0].expansion.terms[0].exponent == Rational(3, 2));
    CHECK(b[0].expansion.terms[0].coefficient.to_rational() == Rational(1));
    auto r = residual_order(P("Y^2 - X^3"), b[0].expansion, 1);
    CHECK(r.exact_zero);
}

TEST_CASE("nodal cubic: two unramified branches with binomial coefficients", "[newton-puiseux]") {
    auto b = expand(P("Y^2 - X^3 - X^2"));
    REQUIRE(b.size() == 2);
    // Y = +-X (1 + X)^{1/2}; binomial(1/2, k)
    const Rational binom[] = {Rational(1), Rational(1, 2), Rational(-1, 8), Rational(1, 16)};
    for (const auto& br : b) {
        CHECK(br.ramification == 1);
        CHECK(br.center_value.is_zero());
        REQUIRE(br.expansion.terms.size() >= 4);
        Rational sign = *br.expansion.terms[0].coefficient.to_rational();
        CHECK(sign.abs() == Rational(1));
        for (int k = 0; k < 4; ++k) {
            CHECK(br.expansion.terms[k].exponent == Rational(k + 1));
            CHECK(br.expansion.terms[k].coefficient.to_rational() == sign * binom[k]);
        }
    }
    CHECK(*b[0].expansion.terms[0].coefficient.to_rational() != *b[1].expansion.terms[0].coefficient.to_rational());
}

TEST_CASE("two-branch curve: ramification indices 1 and 2 at the origin", "[newton-puiseux]") {
    BiPoly f = P(kTwoBranch);
    auto b = expand(f, AlgebraicNumber(0));
    REQUIRE(b.size() == 2);
    std::multiset<int> qs;
    for (const auto& br : b) {
        CHECK(br.center_value.is_zero());
        qs.insert(br.ramification);
        CHECK(residual_order(f, br.expansion).exceeds(Rational(2)));
    }
    CHECK(qs == std::multiset<int>{1, 2});
    // the remaining roots are centered at 2
    auto all = expand(f);
    int total = 0;
    for (const auto& br : all) total += br.conjugate_count;
    CHECK(total == 5);
}

TEST_CASE("quintic with branches of ramification 3 and 2", "[newton-puiseux]") {
    BiPoly w = P("Y^5 - X^3*Y^3 - X^2*Y^2 + X^5");
    auto poly = newton_polygon(w);
    REQUIRE(poly.size() == 2);
    CHECK(poly[0].gamma == Rational(2, 3));
    CHECK(poly[1].gamma == Rational(3, 2));
    auto b = expand(w);
    REQUIRE(b.size() == 2);
    std::multiset<int> qs;
    int total = 0;
    for (const auto& br : b) {
        CHECK(br.center_value.is_zero());
        qs.insert(br.ramification);
        total += br.conjugate_count;
        REQUIRE_FALSE(br.expansion.terms.empty());
        const auto& lead = br.expansion.terms[0];
        CHECK(lead.exponent == (br.ramification == 3 ? Rational(2, 3) : Rational(3, 2)));
        CHECK(lead.coefficient.to_rational() == Rational(1));
        CHECK(residual_order(w, br.expansion).exceeds(Rational(4)));
        // the conjugate of the q = 2 branch carries -X^{3/2}
        if (br.ramification == 2)
            CHECK(certified_equal(conjugate_expansion(br.expansion, 1).terms[0].coefficient, AlgebraicNumber(-1)));
    }
    CHECK(qs == std::multiset<int>{2, 3});
    CHECK(total == 5);
}

TEST_CASE("elliptope curve: branches at -1 and 1", "[newton-puiseux]") {
    BiPoly f = P(kElliptope);
    auto b = expand(f);
    REQUIRE(b.size() == 2);
    CHECK(b[0].center_value.to_rational() == Rational(-1));
    CHECK(b[0].ramification == 2);
    CHECK(b[1].center_value.to_rational() == Rational(1));
    CHECK(b[1].ramification == 1);

    const auto& t1 = b[0].expansion.terms;
    REQUIRE(t1.size() >= 4);
    auto oracle = recentered_oracle(3);
    CHECK(t1[0].coefficient.to_rational() == Rational(-1));
    CHECK(t1[0].exponent == Rational(0));
    for (int k = 1; k <= 3; ++k) {
        CHECK(t1[k].exponent == Rational(k, 2));
        CHECK(certified_equal(t1[k].coefficient, q2_value(oracle[k - 1])));
    }
    // the reference values in closed form
    AlgebraicNumber s8 = AlgebraicNumber(2) * sqrt2();
    CHECK(certified_equal(t1[1].coefficient, s8 / AlgebraicNumber(8)));
    CHECK(t1[2].coefficient.to_rational() == Rational(1, 32));
    CHECK(certified_equal(t1[3].coefficient, AlgebraicNumber(Rational(-11, 2048)) * s8));

    const auto& t3 = b[1].expansion.terms;
    REQUIRE(t3.size() >= 3);
    CHECK(t3[0].coefficient.to_rational() == Rational(1));
    CHECK(t3[1].coefficient.to_rational() == Rational(3, 16));
    CHECK(t3[1].exponent == Rational(1));
    CHECK(t3[2].coefficient.to_rational() == Rational(3, 256));
    CHECK(t3[2].exponent == Rational(2));

    // filtering by center
    auto only = expand(f, AlgebraicNumber(-1));
    REQUIRE(only.size() == 1);
    CHECK(only[0].ramification == 2);
    CHECK(render_series(b[1].expansion).rfind("1 + 3/16*mu^{1} + 3/256*mu^{2}", 0) == 0);
}

TEST_CASE("truncated residual orders", "[newton-puiseux]") {
    BiPoly f = P(kElliptope);
    auto b = expand(f, AlgebraicNumber(-1));
    REQUIRE(b.size() == 1);
    auto r4 = residual_order(f, b[0].expansion, 4);
    CHECK_FALSE(r4.exact_zero);
    CHECK(r4.order >= Rational(2));
    CHECK(r4.order == Rational(5, 2));
    auto r2 = residual_order(f, b[0].expansion, 2);
    CHECK(r2.order == Rational(3, 2));
    CHECK(reconstruct_residual(f, expand(f)).exceeds(Rational(2)));
}

TEST_CASE("conjugate expansions are also roots", "[newton-puiseux]") {
    BiPoly f = P(kElliptope);
    auto b = expand(f, AlgebraicNumber(-1));
    auto conj = conjugate_expansion(b[0].expansion, 1);
    REQUIRE(conj.terms.size() == b[0].expansion.terms.size());
    CHECK(certified_equal(conj.terms[1].coefficient, AlgebraicNumber(0) - b[0].expansion.terms[1].coefficient));
    CHECK(conj.terms[2].coefficient.to_rational() == Rational(1, 32));
    CHECK(residual_order(f, conj).order == residual_order(f, b[0].expansion).order);

    // cube roots of unity for a q = 3 branch
    BiPoly c = P("V^3 - mu");
    auto bc = expand(c);
    REQUIRE(bc.size() == 1);
    CHECK(bc[0].ramification == 3);
    for (int i = 0; i < 3; ++i) CHECK(residual_order(c, conjugate_expansion(bc[0].expansion, i)).exact_zero);
}

TEST_CASE("iteration guard fires on a repeated root", "[newton-puiseux]") {
    BiPoly p = P("((1 - mu)*V - 1)^2");
    CHECK(iteration_guard(p) == 32);
    try {
        expand(p);
        FAIL("expected an iteration-guard error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IterationGuard);
    }
    CHECK_THROWS_AS(expand(P("V^2*(V - mu)")), Error);
}

TEST_CASE("random polygons are convex chains covering the V-extent", "[newton-puiseux][property]") {
    std::mt19937 rng(17);
    int tested = 0;
    for (int trial = 0; trial < 60; ++trial) {
        BiPoly p = oracle::random_bipoly(rng, 4, 5, 5, 6);
        int distinct = 0, low = -1;
        for (int j = 0; j <= p.deg_v(); ++j)
            if (!p[j].is_zero()) {
                ++distinct;
                if (low < 0) low = j;
            }
        if (distinct < 2) continue;
        ++tested;
        auto segs = newton_polygon(p);
        int extent = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            extent += segs[i].j1 - segs[i].j0;
            CHECK(segs[i].edge_poly.degree() == segs[i].j1 - segs[i].j0);
            if (i + 1 < segs.size()) {
                CHECK(segs[i].gamma < segs[i + 1].gamma);
                CHECK(segs[i + 1].j1 == segs[i].j0);
            }
            // every support point lies on or above the segment's line
            for (int j = 0; j <= p.deg_v(); ++j)
                if (!p[j].is_zero()) CHECK(Rational(p[j].order()) + segs[i].gamma * Rational(j) >= segs[i].beta);
        }
        CHECK(extent == p.deg_v() - low);
    }
    CHECK(tested > 30);
}

TEST_CASE("random monic curves: conjugate counts sum to the V-degree", "[newton-puiseux][property]") {
    std::mt19937 rng(23);
    int tested = 0;
    for (int trial = 0; trial < 25 && tested < 12; ++trial) {
        BiPoly p = oracle::random_bipoly(rng, 2, 2, 3, 4);
        const int d = std::max(p.deg_v() + 1, 2);
        p += BiPoly::monomial(Rational(1), 0, d);
        p = separable_part(p);
        if (p.deg_v() < 1 || p.lc().degree() != 0) continue;
        ++tested;
        auto b = expand(p);
        int total = 0;
        for (const auto& br : b) {
            total += br.conjugate_count;
            Rational lcd(1);
            for (const auto& t : br.expansion.terms) lcd = Rational(lcm(lcd.num(), t.exponent.den()));
            CHECK(br.ramification % lcd.num().get_si() == 0);
            CHECK(residual_order(p, br.expansion).exceeds(Rational(1)));
        }
        CHECK(total == p.deg_v());
    }
    CHECK(tested >= 8);
}
