#ifndef CRHO_CURVE_HPP
#define CRHO_CURVE_HPP

// Curve-level pipeline: normalization, irreducibility over C{mu}, matching of
// branch centers against a limit value, and aggregation of rho.

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <string>
#include <vector>

#include "crho/exact_arith.hpp"
#include "crho/newton_puiseux.hpp"

namespace crho {

struct NormalizedCurve {
    BiPoly original;
    BiPoly normalized;
    int theta = 0;  // V_new = mu^theta V_old
    int alpha = 0;  // P_new = mu^alpha P(mu, V_new / mu^theta)
    std::vector<std::string> transform_log;
};

/// Content removal, smallest boundedness rescale, then separable part.
inline NormalizedCurve normalize_curve(const BiPoly& p) {
    if (p.is_zero() || p.deg_v() < 1)
        throw Error(ErrorKind::DegenerateInput, "curve-pipeline", "curve needs positive degree in V");
    NormalizedCurve nc;
    nc.original = p;
    auto [content, prim] = content_and_primitive(p);
    BiPoly cur = prim;
    if (content.degree() > 0) nc.transform_log.push_back("content: divided by " + content.to_string("mu"));

    const int d = cur.deg_v();
    const int od = cur[d].order();
    int theta = std::max(0, static_cast<int>((Rational(od) / Rational(d)).ceil().get_si()));
    for (int j = 0; j < d; ++j) {
        if (cur[j].is_zero()) continue;
        Rational need = Rational(od - cur[j].order()) / Rational(d - j);
        theta = std::max(theta, static_cast<int>(need.ceil().get_si()));
    }
    const int alpha = theta * d - od;
    if (theta != 0 || alpha != 0) {
        std::vector<UniPoly> cs;
        for (int j = 0; j <= d; ++j) {
            // coefficient order shifts by alpha - j*theta >= 0
            const int shift = alpha - j * theta;
            cs.push_back(shift >= 0 ? cur[j].shift(shift) : divmod(cur[j], UniPoly::monomial(Rational(1), -shift)).first);
        }
        cur = BiPoly(std::move(cs));
        nc.transform_log.push_back("rescale: theta=" + std::to_string(theta) + " alpha=" + std::to_string(alpha));
    }
    nc.theta = theta;
    nc.alpha = alpha;

    if (poly_gcd(cur, cur.derivative_v()).deg_v() > 0) {
        int before = cur.deg_v();
        cur = separable_part(cur);
        nc.transform_log.push_back("separable: V-degree " + std::to_string(before) + " -> " + std::to_string(cur.deg_v()));
    }
    nc.normalized = cur;
    return nc;
}

/// Irreducible over C{mu} iff some branch has ramification equal to deg_V.
inline bool is_irreducible_over_Cmu(const NormalizedCurve& curve, const std::vector<Branch>& branches) {
    for (const auto& b : branches)
        if (b.ramification == curve.normalized.deg_v()) return true;
    return false;
}

/// Center of the branch in the original coordinate, V_old = V_new / mu^theta.
/// Empty when that branch is unbounded at mu = 0.
inline std::optional<AlgebraicNumber> original_center(const Branch& b, int theta) {
    if (theta == 0) return b.center_value;
    const Rational th(theta);
    for (const auto& t : b.expansion.terms) {
        if (t.exponent < th) return std::nullopt;  // terms are nonzero
        if (t.exponent == th) return t.coefficient;
        return AlgebraicNumber(0);
    }
    if (b.expansion.exact) return AlgebraicNumber(0);
    throw Error(ErrorKind::Ambiguity, "curve-pipeline", "expansion too short to undo the rescale");
}

/// Branches whose center, widened by tol, meets the limit interval.
inline std::vector<Branch> match_branches(const std::vector<Branch>& branches, const Interval& limit, const Rational& tol,
                                          int theta = 0) {
    std::vector<Branch> out;
    const CBox target(limit, Interval(Rational(0)));
    for (const auto& b : branches) {
        auto c = original_center(b, theta);
        if (!c) continue;
        CBox box;
        try {
            box = c->enclosure(tol / Rational(4));
        } catch (const Error& e) {
            throw Error(ErrorKind::Ambiguity, "curve-pipeline", std::string("cannot refine a branch center: ") + e.what());
        }
        if (box.widened(tol).intersects(target)) out.push_back(b);
    }
    return out;
}

struct PathSample {
    long double mu, value;
};

/// Keeps the branches for which some conjugate of the truncated series follows the
/// samples to within rel times the deviation of the samples from the center. When
/// no branch qualifies the input is returned unchanged.
inline std::vector<Branch> select_by_samples(const std::vector<Branch>& matched, const std::vector<PathSample>& samples,
                                             int theta = 0, long double rel = 0.1L) {
    if (matched.size() < 2 || samples.empty()) return matched;
    using C = std::complex<long double>;
    const Rational eps(Integer(1), Integer(1) << 80);
    std::vector<Branch> out;
    for (const auto& b : matched) {
        std::vector<std::pair<C, long double>> terms;  // coefficient, exponent in the original coordinate
        for (const auto& t : b.expansion.terms) {
            CBox box = t.coefficient.enclosure(eps);
            terms.push_back({C(box.re.mid().to_long_double(), box.im.mid().to_long_double()),
                             (t.exponent - Rational(theta)).to_long_double()});
        }
        const int q = std::max(b.ramification, 1);
        const long double pi = std::acos(-1.0L);
        bool follows = false;
        for (int i = 0; i < q && !follows; ++i) {
            long double err = 0, scale = 0;
            for (const auto& s : samples) {
                C val(0), center(0);
                for (const auto& [c, e] : terms) {
                    C rot = std::polar(1.0L, 2 * pi * i * e);
                    C term = c * rot * std::pow(s.mu, e);
                    val += term;
                    if (e == 0) center = c;
                }
                err = std::max(err, std::abs(val - C(s.value)));
                scale = std::max(scale, std::abs(C(s.value) - center));
            }
            follows = scale == 0 || err <= rel * scale;
        }
        if (follows) out.push_back(b);
    }
    return out.empty() ? matched : out;
}

/// Product of the distinct ramification indices.
inline int rho_for_coordinate(const std::vector<Branch>& matched) {
    if (matched.empty())
        throw Error(ErrorKind::EmptyMatch, "curve-pipeline", "no branch center matches the limit value");
    std::set<int> qs;
    for (const auto& b : matched) qs.insert(b.ramification);
    int r = 1;
    for (int q : qs) r *= q;
    return r;
}

inline int aggregate_rho(const std::vector<int>& per_coordinate) {
    if (per_coordinate.empty()) throw Error(ErrorKind::DegenerateInput, "curve-pipeline", "nothing to aggregate");
    Integer acc = 1;
    for (int r : per_coordinate) acc = lcm(acc, Integer(r));
    return static_cast<int>(acc.get_si());
}

enum class Optimality { IrreducibleCertified, ProductFallback };

inline const char* optimality_name(Optimality o) {
    return o == Optimality::IrreducibleCertified ? "irreducible-certified" : "product-fallback";
}

struct CoordinateRho {
    int index = 0;
    std::vector<int> q_values;  // one per matched branch
    int rho_i = 1;
};

struct RhoReport {
    std::vector<CoordinateRho> per_coordinate;
    int rho = 1;
    Optimality optimality = Optimality::ProductFallback;
};

/// Aggregates per-coordinate data; optimal when every coordinate matched a single branch.
inline RhoReport make_report(std::vector<CoordinateRho> coords) {
    RhoReport r;
    std::vector<int> rs;
    bool single = true;
    for (const auto& c : coords) {
        rs.push_back(c.rho_i);
        single = single && c.q_values.size() == 1;
    }
    r.rho = aggregate_rho(rs);
    r.optimality = single ? Optimality::IrreducibleCertified : Optimality::ProductFallback;
    r.per_coordinate = std::move(coords);
    return r;
}

/// Full curve pipeline for one coordinate polynomial and its limit.
struct CurveRho {
    NormalizedCurve curve;
    std::vector<Branch> branches;
    std::vector<Branch> matched;
    int rho_i = 1;
};

inline CurveRho rho_curve(const BiPoly& p, const Interval& limit, const Rational& tol, int max_extra_terms = 4) {
    CurveRho r;
    r.curve = normalize_curve(p);
    r.branches = expand(r.curve.normalized, std::nullopt, max_extra_terms);
    r.matched = match_branches(r.branches, limit, tol, r.curve.theta);
    r.rho_i = rho_for_coordinate(r.matched);
    return r;
}

}  // namespace crho

#endif  // CRHO_CURVE_HPP
