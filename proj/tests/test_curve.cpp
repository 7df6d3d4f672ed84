#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "crho/curve.hpp"
#include "crho/parse.hpp"
#include "oracles.hpp"

using namespace crho;

namespace {

BiPoly P(const char* s) { return parse_poly(s); }

const char* kElliptope = "2*V^3 + (2 - mu/2)*V^2 - (mu + 2)*V - 2";
const char* kTwoBranch = "Y^5 - 4*Y^4 + 4*Y^3 + 2*X^2*Y^2 - X*Y^2 + 2*X^2*Y + 2*X*Y + X^4 + X^3";

Interval around(const Rational& x, const Rational& r) { return {x - r, x + r}; }

Branch with_q(int q) {
    Branch b;
    b.ramification = q;
    return b;
}

}  // namespace

TEST_CASE("normalize_curve examples", "[curve]") {
    auto f = normalize_curve(P(kElliptope));
    CHECK(f.theta == 0);
    CHECK(f.alpha == 0);
    CHECK(f.normalized == P(kElliptope));
    CHECK(f.transform_log.empty());

    auto u = normalize_curve(P("mu*V - 1"));
    CHECK(u.theta == 1);
    CHECK(u.alpha == 0);
    CHECK(u.normalized == P("V - 1"));

    auto c = normalize_curve(P("mu^2*(V^2 - 1)"));
    CHECK(c.theta == 0);
    CHECK(c.normalized == P("V^2 - 1"));
    CHECK(c.transform_log.size() == 1);

    auto s = normalize_curve(P("(V - mu)^2*(V + 1)"));
    CHECK(s.normalized.deg_v() == 2);

    CHECK_THROWS_AS(normalize_curve(P("mu + 1")), Error);
}

TEST_CASE("normalized curves satisfy the boundedness equations", "[curve][property]") {
    std::mt19937 rng(31);
    int tested = 0;
    for (int trial = 0; trial < 40; ++trial) {
        BiPoly p = oracle::random_bipoly(rng, 3, 3, 4, 5);
        if (p.deg_v() < 1) continue;
        ++tested;
        auto n = normalize_curve(p);
        const BiPoly& q = n.normalized;
        CHECK(q[q.deg_v()].order() == 0);
        for (int j = 0; j < q.deg_v(); ++j)
            if (!q[j].is_zero()) CHECK(q[j].order() >= 0);
        // the original data satisfy alpha + o(p_d) = theta d with smallest theta
        auto [cont, prim] = content_and_primitive(p);
        const int d = prim.deg_v();
        CHECK(n.alpha + prim[d].order() == n.theta * d);
        for (int j = 0; j < d; ++j)
            if (!prim[j].is_zero()) CHECK(n.alpha + prim[j].order() >= j * n.theta);
        CHECK(n.alpha >= 0);
        CHECK(content_mu(q).degree() == 0);
        CHECK(poly_gcd(q, q.derivative_v()).deg_v() == 0);
        // idempotent
        auto again = normalize_curve(q);
        CHECK(again.normalized == q);
        CHECK(again.theta == 0);
        CHECK(again.alpha == 0);
        // all roots bounded
        int total = 0;
        for (const auto& b : expand(q)) total += b.conjugate_count;
        CHECK(total == q.deg_v());
    }
    CHECK(tested > 20);
}

TEST_CASE("irreducibility over convergent series", "[curve]") {
    auto cusp = normalize_curve(P("Y^2 - X^3"));
    CHECK(is_irreducible_over_Cmu(cusp, expand(cusp.normalized)));
    auto node = normalize_curve(P("Y^2 - X^3 - X^2"));
    CHECK_FALSE(is_irreducible_over_Cmu(node, expand(node.normalized)));
    auto f = normalize_curve(P(kElliptope));
    CHECK_FALSE(is_irreducible_over_Cmu(f, expand(f.normalized)));
    auto c = normalize_curve(P("V^3 - mu"));
    auto bc = expand(c.normalized);
    CHECK(is_irreducible_over_Cmu(c, bc));
    CHECK(bc.size() == 1);
}

TEST_CASE("match_branches examples", "[curve]") {
    const Rational tol(1, 1000000);
    auto f = expand(P(kElliptope));
    auto m = match_branches(f, around(Rational(-1), tol), tol);
    REQUIRE(m.size() == 1);
    CHECK(m[0].ramification == 2);
    CHECK(match_branches(f, around(Rational(1), tol), tol).at(0).ramification == 1);
    CHECK(match_branches(f, around(Rational(3), tol), tol).empty());

    auto cusp = expand(P("Y^2 - X^3"));
    CHECK(match_branches(cusp, Interval(Rational(0)), tol).size() == 1);

    auto two = match_branches(expand(P(kTwoBranch)), Interval(Rational(0)), tol);
    REQUIRE(two.size() == 2);
    std::vector<int> qs{two[0].ramification, two[1].ramification};
    std::sort(qs.begin(), qs.end());
    CHECK(qs == std::vector<int>{1, 2});

    // V = 1/mu is unbounded and never matches; the rescaled root 1 sits at mu^1
    auto u = normalize_curve(P("mu*V - 1"));
    CHECK(match_branches(expand(u.normalized), Interval(Rational(1)), tol, u.theta).empty());
    auto w = normalize_curve(P("mu*V^2 - V"));  // roots 0 and 1/mu
    auto mw = match_branches(expand(w.normalized), Interval(Rational(0)), tol, w.theta);
    CHECK(mw.size() == 1);
}

TEST_CASE("select_by_samples keeps the branch the samples follow", "[curve]") {
    const Rational tol(1, 1000000);
    auto f = expand(P("((V + 1)^2 - mu)*(V + 1 - mu)"));
    auto m = match_branches(f, Interval(Rational(-1)), tol);
    REQUIRE(m.size() == 2);
    std::vector<PathSample> root, line;
    for (long double mu = 1e-4L; mu > 1e-8L; mu /= 2) {
        root.push_back({mu, -1 - std::sqrt(mu)});
        line.push_back({mu, -1 + mu});
    }
    auto a = select_by_samples(m, root);
    REQUIRE(a.size() == 1);
    CHECK(a[0].ramification == 2);
    auto b = select_by_samples(m, line);
    REQUIRE(b.size() == 1);
    CHECK(b[0].ramification == 1);
    // samples on neither branch leave the match unchanged
    std::vector<PathSample> off;
    for (long double mu = 1e-4L; mu > 1e-8L; mu /= 2) off.push_back({mu, -1 + 5 * std::cbrt(mu)});
    CHECK(select_by_samples(m, off).size() == 2);
}

TEST_CASE("rho per coordinate and aggregate", "[curve]") {
    CHECK(rho_for_coordinate({with_q(2)}) == 2);
    CHECK(rho_for_coordinate({with_q(1), with_q(2)}) == 2);
    CHECK(rho_for_coordinate({with_q(1)}) == 1);
    CHECK(rho_for_coordinate({with_q(2), with_q(2), with_q(3)}) == 6);
    CHECK_THROWS_AS(rho_for_coordinate({}), Error);
    CHECK(aggregate_rho({1, 2, 2}) == 2);
    CHECK(aggregate_rho({1, 2, 4}) == 4);
    CHECK(aggregate_rho({2, 3}) == 6);

    auto r = rho_curve(P(kElliptope), Interval(Rational(-1)), Rational(1, 1000000));
    CHECK(r.rho_i == 2);
    auto rep = make_report({{0, {2}, 2}, {1, {1}, 1}});
    CHECK(rep.rho == 2);
    CHECK(rep.optimality == Optimality::IrreducibleCertified);
    CHECK(make_report({{0, {1, 2}, 2}}).optimality == Optimality::ProductFallback);
}

TEST_CASE("aggregate_rho ignores coordinate order", "[curve][property]") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(1, 12);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> v(1 + trial % 5);
        for (auto& x : v) x = d(rng);
        int r = aggregate_rho(v);
        for (int x : v) CHECK(r % x == 0);
        std::shuffle(v.begin(), v.end(), rng);
        CHECK(aggregate_rho(v) == r);
        std::vector<int> dup = v;
        dup.push_back(v[0]);
        CHECK(aggregate_rho(dup) == r);
    }
}

TEST_CASE("rho makes every matched exponent integral", "[curve][property]") {
    const std::pair<const char*, int> curves[] = {
        {kElliptope, -1}, {kTwoBranch, 0}, {"Y^2 - X^3", 0}, {"V^3 - mu", 0}, {"(V^2 - mu)*(V^3 - mu^2)", 0}};
    for (const auto& [s, lim] : curves) {
        auto r = rho_curve(P(s), Interval(Rational(lim)), Rational(1, 1000000));
        for (const auto& b : r.matched)
            for (const auto& t : b.expansion.terms) CHECK((t.exponent * Rational(r.rho_i)).is_integer());
    }
}
