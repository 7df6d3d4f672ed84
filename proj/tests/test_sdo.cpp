#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "crho/parse.hpp"
#include "crho/sdo.hpp"
#include "oracles.hpp"

using namespace crho;

namespace {

BiPoly P(const char* s) { return parse_poly(s); }

const char* kElliptope = "2*V^3 + (2 - mu/2)*V^2 - (mu + 2)*V - 2";

const TraceResult& elliptope_trace() {
    static const TraceResult t = trace_path(elliptope_instance());
    return t;
}

/// Roots of c(T) in (lo, hi) by sign-change scanning and bisection in double.
std::vector<double> bisect_roots(const std::vector<double>& c, double lo, double hi) {
    auto f = [&](double x) {
        double r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
        return r;
    };
    std::vector<double> out;
    const int steps = 20000;
    for (int k = 0; k < steps; ++k) {
        double a = lo + (hi - lo) * k / steps, b = lo + (hi - lo) * (k + 1) / steps;
        if (f(a) == 0) out.push_back(a);
        if (f(a) * f(b) >= 0) continue;
        for (int it = 0; it < 200; ++it) {
            double m = (a + b) / 2;
            (f(a) * f(m) <= 0 ? b : a) = m;
        }
        out.push_back((a + b) / 2);
    }
    return out;
}

double min_eig(const MatL& m) {
    Eigen::SelfAdjointEigenSolver<MatL> es(m);
    return static_cast<double>(es.eigenvalues().minCoeff());
}

}  // namespace

TEST_CASE("instance files round trip and reject malformed input", "[sdo]") {
    auto e = elliptope_instance();
    std::istringstream in("# elliptope\n" + format_instance(e));
    auto back = parse_instance(in);
    CHECK(back.n == 3);
    CHECK(back.m == 3);
    CHECK(back.C == e.C);
    CHECK(back.A == e.A);
    CHECK(back.b == e.b);

    std::istringstream bad_tok("1 1\n1\nx\n1\n");
    CHECK_THROWS_AS(parse_instance(bad_tok), Error);
    std::istringstream short_file("2 1\n1 0 0 1\n");
    CHECK_THROWS_AS(parse_instance(short_file), Error);
    std::istringstream asym("2 1\n1 1 0 1\n1\n0 0 0 0\n");
    try {
        parse_instance(asym);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::DegenerateInput);
    }
    std::istringstream dep("2 2\n1 0 0 1\n2 0 0 2\n1 2\n0 0 0 0\n");
    CHECK_THROWS_AS(parse_instance(dep), Error);
    for (int n : {3, 4, 5}) CHECK_NOTHROW(validate_instance(kl02_instance(n)));
    CHECK_NOTHROW(validate_instance(identity_instance(3)));

    std::ifstream f(std::string(CRHO_DATA_DIR) + "/elliptope.sdo");
    REQUIRE(f.good());
    auto fe = parse_instance(f);
    CHECK(fe.C == e.C);
    std::ifstream fk(std::string(CRHO_DATA_DIR) + "/kl02_4.sdo");
    auto k4 = parse_instance(fk);
    CHECK(k4.A == kl02_instance(4).A);
    CHECK(k4.b == kl02_instance(4).b);
    CHECK(k4.C == kl02_instance(4).C);
}

TEST_CASE("coordinate layout", "[sdo]") {
    auto e = elliptope_instance();
    CHECK(e.coordinate_count() == 21);
    CHECK(coordinate_label(e, 1) == "X12");
    CHECK(coordinate_label(e, 9) == "y1");
    CHECK(coordinate_label(e, 12) == "S11");
    CHECK(coordinate_label(e, 20) == "S33");
    CHECK(distinct_coordinates(e).size() == 15);
    CHECK_THROWS_AS(coordinate_name(e, 21), Error);
}

TEST_CASE("identity instance has a closed-form central path", "[sdo]") {
    auto id = identity_instance(3);
    for (LD mu : {2.0L, 1.0L, 1e-3L, 1e-7L}) {
        auto p = central_point(id, mu);
        CHECK(std::fabs(static_cast<double>((p.X - MatL::Identity(3, 3)).norm())) < 1e-9);
        CHECK(std::fabs(static_cast<double>(p.y(0) - (1 - mu))) < 1e-9);
        CHECK(static_cast<double>((p.S - mu * MatL::Identity(3, 3)).norm()) < 1e-9 * static_cast<double>(mu) + 1e-15);
    }
}

TEST_CASE("elliptope central point at mu = 1 matches the bisection oracle", "[sdo]") {
    // 2T^3 + (3/2)T^2 - 3T - 2 at mu = 1; positive definiteness needs |T| < 1
    auto roots = bisect_roots({-2, -3, 1.5, 2}, -0.999999, 0.999999);
    REQUIRE(roots.size() == 1);
    auto p = central_point(elliptope_instance(), 1);
    CHECK(std::fabs(static_cast<double>(p.X(0, 1)) - roots[0]) < 1e-9);
    CHECK(min_eig(p.X) > 0);
    CHECK(min_eig(p.S) > 0);
    // small mu: X12 is the PD-compatible root of the curve
    for (LD mu : {1e-2L, 1e-5L}) {
        double m = static_cast<double>(mu);
        auto r = bisect_roots({-2, -(m + 2), 2 - m / 2, 2}, -0.999999999, 0.999999999);
        auto q = central_point(elliptope_instance(), mu);
        bool found = false;
        for (double x : r) found = found || std::fabs(x - static_cast<double>(q.X(0, 1))) < 1e-8;
        CHECK(found);
    }
}

TEST_CASE("traced samples satisfy the central-path system", "[sdo][property]") {
    const SDOInstance insts[] = {elliptope_instance(), kl02_instance(4), identity_instance(3)};
    for (const auto& inst : insts) {
        auto t = trace_path(inst);
        REQUIRE(t.samples.size() == 28);
        CHECK(t.samples.back().mu == 1e-8L);
        for (std::size_t k = 0; k < t.samples.size(); ++k) {
            const auto& s = t.samples[k];
            if (k > 0) CHECK(s.mu < t.samples[k - 1].mu);
            CHECK(s.residual <= 1e-10L);
            LD gap = (s.X.cwiseProduct(s.S)).sum();
            CHECK(std::fabs(static_cast<double>(gap - inst.n * s.mu)) <= 1e-8 * inst.n);
            CHECK(min_eig(s.X) > 0);
            CHECK(min_eig(s.S) > 0);
            for (int kk = 0; kk < inst.m; ++kk) {
                LD ax = (detail::to_ld(inst.A[kk]).cwiseProduct(s.X)).sum();
                CHECK(std::fabs(static_cast<double>(ax - inst.b[kk])) < 1e-9);
            }
        }
    }
}

TEST_CASE("elliptope limits", "[sdo]") {
    const auto& t = elliptope_trace();
    const double xs[3][3] = {{1, -1, 1}, {-1, 1, -1}, {1, -1, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::fabs(static_cast<double>(t.limit[i * 3 + j]) - xs[i][j]) < 1e-4);
    CHECK(std::fabs(static_cast<double>(t.limit[1]) + 1) < 1e-5);
    CHECK(std::fabs(static_cast<double>(t.limit[1]) + 1) <= static_cast<double>(t.limit_width[1]) + 1e-9);
    auto id = trace_path(identity_instance(3));
    CHECK(std::fabs(static_cast<double>(id.limit[9]) - 1) < 1e-9);
    CHECK(std::fabs(static_cast<double>(id.limit[10])) < 1e-9);
}

TEST_CASE("order fits", "[sdo]") {
    auto f = fit_order(elliptope_trace(), 1);
    CHECK(f.exponent == Rational(1, 2));
    CHECK(std::fabs(static_cast<double>(f.raw_slope) - 0.5) < 0.05);

    auto id = trace_path(identity_instance(3));
    CHECK(fit_order(id, 9).exponent == Rational(1));
    try {
        fit_order(id, 0);
        FAIL("expected a constant-coordinate signal");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConstantCoordinate);
    }

    auto k = kl02_instance(4);
    auto tk = trace_path(k);
    auto y2 = fit_order(tk, 16 + 1);
    CHECK(y2.exponent == Rational(1, 4));
    CHECK(std::fabs(static_cast<double>(y2.raw_slope) - 0.25) < 0.05);

    CHECK(snap_rational(0.4987L) == Rational(1, 2));
    CHECK(snap_rational(0.2512L) == Rational(1, 4));
    CHECK(snap_rational(1.002L) == Rational(1));
    CHECK(snap_rational(0.3331L) == Rational(1, 3));
}

TEST_CASE("multivariate resultants agree with a Sylvester oracle", "[sdo][property]") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        BiPoly f = oracle::random_bipoly(rng, 2, 3, 4, 5), g = oracle::random_bipoly(rng, 2, 3, 4, 5);
        if (f.deg_v() < 1 || g.deg_v() < 1) continue;
        auto to_multi = [](const BiPoly& b) {
            MultiPoly m(3);
            for (int j = 0; j <= b.deg_v(); ++j)
                for (std::size_t i = 0; i < b.coeffs()[j].coeffs().size(); ++i) {
                    MultiPoly t = MultiPoly::constant(3, b.coeffs()[j].coeffs()[i]);
                    for (std::size_t a = 0; a < i; ++a) t = t * MultiPoly::var(3, 0);
                    for (int a = 0; a < j; ++a) t = t * MultiPoly::var(3, 2);
                    m += t;
                }
            return m;
        };
        MultiPoly r = resultant(to_multi(f), to_multi(g), 2);
        for (int pt = 0; pt < 3; ++pt) {
            Rational mu0 = oracle::random_rational(rng, 5);
            UniPoly fu = f.eval_mu(mu0), gu = g.eval_mu(mu0);
            if (fu.degree() != f.deg_v() || gu.degree() != g.deg_v()) continue;
            Rational want = oracle::sylvester_det(fu, gu);
            Rational got(0);
            for (const auto& [m, c] : r.terms()) got += c * pow(mu0, static_cast<unsigned>(m[0]));
            CHECK(got.abs() == want.abs());
        }
    }
}

TEST_CASE("gcd-free basis splits shared factors", "[sdo]") {
    auto basis = detail::gcd_free_basis({P("(V - 1)*(V - mu)"), P("(V - mu)*(V + 2)")});
    REQUIRE(basis.size() == 3);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) CHECK(poly_gcd(basis[i], basis[j]).deg_v() == 0);
}

TEST_CASE("eliminate_coordinate examples", "[sdo]") {
    auto id = identity_instance(3);
    auto tid = trace_path(id);
    CHECK(eliminate_coordinate(id, 0, tid).P == P("V - 1"));
    CHECK(eliminate_coordinate(id, 10, tid).P == P("V - mu"));

    auto e = elliptope_instance();
    auto r = eliminate_coordinate(e, 1, elliptope_trace());
    CHECK(pseudo_divides(P(kElliptope), r.P));
    CHECK(r.max_residual <= 1e-6L);
    // every coordinate polynomial vanishes along the path
    for (int c : {2, 5, 9, 10, 12}) {
        auto rc = eliminate_coordinate(e, c, elliptope_trace());
        for (const auto& s : elliptope_trace().samples)
            CHECK(detail::relative_value(rc.P, s.mu, s.coords()[c]) <= 1e-6L);
    }
    EliminationOptions tight;
    tight.degree_cap = 1;
    try {
        eliminate_coordinate(e, 1, elliptope_trace(), tight);
        FAIL("expected a blow-up error");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::BlowUp);
    }
}

TEST_CASE("compute_rho_sdo examples", "[sdo]") {
    auto e = compute_rho_sdo(elliptope_instance(), elliptope_trace());
    CHECK(e.report.rho == 2);
    CHECK_FALSE(e.heuristic);
    for (const auto& c : e.coordinates) {
        CHECK(c.fit_consistent);
        if (c.label == "X12") {
            CHECK(c.rho_i == 2);
            CHECK(c.q_values == std::vector<int>{2});
        }
    }
    CHECK(compute_rho_sdo(identity_instance(3)).report.rho == 1);
    auto k = compute_rho_sdo(kl02_instance(4), Route::OrderFit);
    CHECK(k.report.rho == 4);
    CHECK(k.heuristic);
    CHECK(k.report.optimality == Optimality::ProductFallback);
}

TEST_CASE("derivative verdicts after reparametrization", "[sdo]") {
    auto e = elliptope_instance();
    auto v1 = verify_reparametrization(e, 1);
    CHECK_FALSE(v1.bounded);
    CHECK(std::fabs(static_cast<double>(v1.growth_exponent) + 0.5) < 0.1);
    CHECK_FALSE(v1.coords[1].bounded);
    auto v2 = verify_reparametrization(e, 2);
    CHECK(v2.bounded);
    auto v4 = verify_reparametrization(e, 4);
    CHECK(v4.bounded);
    auto vid = verify_reparametrization(identity_instance(3), 1);
    CHECK(vid.bounded);
    CHECK(vid.constant_derivative);
    CHECK(std::fabs(static_cast<double>(vid.coords[9].d1[0]) - 1) < 1e-6);
    CHECK_THROWS_AS(verify_reparametrization(e, 1, 1e-3L, 2e-3L), Error);
}
