#ifndef CRHO_NEWTON_PUISEUX_HPP
#define CRHO_NEWTON_PUISEUX_HPP

// Newton polygons and the Newton-Puiseux iteration
//   P_{j+1}(mu, V) = mu^{-beta} P_j(mu, mu^gamma (V + a))
// with exact rational exponents and algebraic coefficients.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crho/algebraic.hpp"
#include "crho/errors.hpp"
#include "crho/poly.hpp"

namespace crho {

/// Generalized polynomial in mu: exponent -> nonzero coefficient.
using GSeries = std::map<Rational, Elem>;

/// Working polynomial in V whose coefficients are generalized series in mu.
using WorkPoly = std::vector<GSeries>;

struct PolygonSegment {
    int j0 = 0, j1 = 0;      // V-degrees of the endpoints
    Rational o0, o1;         // mu-orders of the endpoints
    Rational gamma, beta;    // segment: o + gamma * j = beta
    UniPoly edge_poly;       // sum of coefficients c_j T^(j - j0) along the segment
};

struct PuiseuxTerm {
    AlgebraicNumber coefficient;
    Rational exponent;
};

struct PuiseuxExpansion {
    std::vector<PuiseuxTerm> terms;
    int ramification = 1;
    bool stabilized = false;
    bool exact = false;  // the terms sum to an exact root
    int iterations_used = 0;
};

struct Branch {
    AlgebraicNumber center_value;
    int ramification = 1;
    PuiseuxExpansion expansion;
    int conjugate_count = 1;
};

namespace detail {

struct HullPoint {
    int j;
    Rational o;
};

/// Lower convex hull vertices, left to right.
inline std::vector<HullPoint> lower_hull(const std::vector<HullPoint>& pts) {
    std::vector<HullPoint> h;
    for (const auto& p : pts) {
        while (h.size() >= 2) {
            const auto& a = h[h.size() - 2];
            const auto& b = h[h.size() - 1];
            Rational cross = Rational(b.j - a.j) * (p.o - a.o) - (b.o - a.o) * Rational(p.j - a.j);
            if (cross.sign() <= 0) h.pop_back();
            else break;
        }
        h.push_back(p);
    }
    return h;
}

struct RawSegment {
    int j0, j1;
    Rational o0, o1, gamma, beta;
};

/// Segments of the lower hull of {(j, o_j)}, ordered by increasing gamma.
inline std::vector<RawSegment> hull_segments(const std::vector<HullPoint>& pts) {
    auto h = lower_hull(pts);
    std::vector<RawSegment> out;
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
        Rational gamma = (h[i].o - h[i + 1].o) / Rational(h[i + 1].j - h[i].j);
        out.push_back({h[i].j, h[i + 1].j, h[i].o, h[i + 1].o, gamma, h[i].o + gamma * Rational(h[i].j)});
    }
    std::reverse(out.begin(), out.end());
    return out;
}

inline std::vector<HullPoint> support(const WorkPoly& q, int max_j) {
    std::vector<HullPoint> pts;
    for (int j = 0; j <= max_j && j < static_cast<int>(q.size()); ++j)
        if (!q[j].empty()) pts.push_back({j, q[j].begin()->first});
    return pts;
}

inline WorkPoly to_work(const BiPoly& p) {
    WorkPoly w(p.coeffs().size());
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
        const auto& c = p.coeffs()[j].coeffs();
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!c[i].is_zero()) w[j][Rational(static_cast<long>(i))] = Elem::rational(c[i]);
    }
    return w;
}

inline void add_term(FieldTower& t, GSeries& s, const Rational& e, const Elem& c) {
    auto it = s.find(e);
    if (it == s.end()) s.emplace(e, c);
    else it->second = t.add(it->second, c);
}

inline void drop_zeros(FieldTower& t, GSeries& s) {
    for (auto it = s.begin(); it != s.end();) {
        if (t.is_zero(it->second)) it = s.erase(it);
        else ++it;
    }
}

/// mu^{-beta} Q(mu, mu^gamma (V + a)).
inline WorkPoly substitute(FieldTower& t, const WorkPoly& q, const Rational& gamma, const Elem& a, const Rational& beta) {
    const int d = static_cast<int>(q.size()) - 1;
    WorkPoly out(q.size());
    std::vector<Elem> apow{t.from_rational(Rational(1), a.level)};
    for (int i = 1; i <= d; ++i) apow.push_back(t.mul(apow.back(), a));
    for (int j = 0; j <= d; ++j) {
        if (q[j].empty()) continue;
        Rational shift = Rational(j) * gamma - beta;
        for (int k = 0; k <= j; ++k) {
            Elem f = t.mul(apow[j - k], t.from_rational(Rational(binomial(j, k)), 0));
            if (t.is_zero(f)) continue;
            for (const auto& [e, c] : q[j]) add_term(t, out[k], e + shift, t.mul(f, c));
        }
    }
    for (auto& s : out) drop_zeros(t, s);
    return out;
}

inline GSeries series_mul(FieldTower& t, const GSeries& a, const GSeries& b) {
    GSeries r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) add_term(t, r, ea + eb, t.mul(ca, cb));
    drop_zeros(t, r);
    return r;
}

inline Integer den_of(const Rational& r) { return r.den(); }

}  // namespace detail

/// Lower convex hull segments of the support of P, ordered by increasing gamma.
inline std::vector<PolygonSegment> newton_polygon(const BiPoly& p) {
    if (p.is_zero()) throw Error(ErrorKind::DegenerateInput, "newton-puiseux", "Newton polygon of zero");
    std::vector<detail::HullPoint> pts;
    for (int j = 0; j <= p.deg_v(); ++j)
        if (!p[j].is_zero()) pts.push_back({j, Rational(p[j].order())});
    if (pts.size() < 2) throw Error(ErrorKind::DegenerateInput, "newton-puiseux", "polynomial is a monomial in V");
    std::vector<PolygonSegment> out;
    for (const auto& s : detail::hull_segments(pts)) {
        std::vector<Rational> edge(s.j1 - s.j0 + 1);
        for (int j = s.j0; j <= s.j1; ++j) {
            if (p[j].is_zero()) continue;
            Rational o(p[j].order());
            if (o + s.gamma * Rational(j) == s.beta) edge[j - s.j0] = p[j][p[j].order()];
        }
        out.push_back({s.j0, s.j1, s.o0, s.o1, s.gamma, s.beta, UniPoly(edge)});
    }
    return out;
}

/// Hard cap on iterations before stabilization.
inline int iteration_guard(const BiPoly& p) { return 4 * std::max(p.deg_mu(), 1) * p.deg_v() * p.deg_v(); }

namespace detail {

struct Task {
    std::shared_ptr<FieldTower> t;
    WorkPoly q;
    std::vector<std::pair<Rational, Elem>> terms;
    Rational exponent;  // accumulated exponent of the last term
    int q_cur = 1;
    int r = 0;          // multiplicity of the working root
    int steps = 0;
};

class Expander {
public:
    Expander(const BiPoly& p, std::optional<AlgebraicNumber> filter, int extra)
        : guard_(iteration_guard(p)), filter_(std::move(filter)), extra_(extra) {}

    std::vector<Branch> run(const BiPoly& p) {
        if (p.deg_v() < 1) throw Error(ErrorKind::DegenerateInput, "newton-puiseux", "polynomial has no V-degree");
        Task root{std::make_shared<FieldTower>(), to_work(p), {}, Rational(0), 1, p.deg_v(), 0};
        step(std::move(root), true);
        return std::move(out_);
    }

private:
    Branch finish(Task& k, bool stabilized, bool exact) {
        Branch b;
        b.expansion.ramification = k.q_cur;
        b.expansion.stabilized = stabilized;
        b.expansion.exact = exact;
        b.expansion.iterations_used = k.steps;
        for (auto& [e, c] : k.terms) b.expansion.terms.push_back({AlgebraicNumber(k.t, c), e});
        b.center_value = (!k.terms.empty() && k.terms[0].first.is_zero()) ? AlgebraicNumber(k.t, k.terms[0].second)
                                                                             : AlgebraicNumber(k.t, Elem::zero(0));
        b.ramification = k.q_cur;
        b.conjugate_count = k.q_cur;
        return b;
    }

    bool center_passes(const AlgebraicNumber& c) {
        if (!filter_) return true;
        return certified_equal(c, *filter_);
    }

    void extend_stabilized(Task k) {
        FieldTower& t = *k.t;
        bool exact = false;
        for (int n = 0; n < extra_; ++n) {
            if (k.q[0].empty()) {
                exact = true;
                break;
            }
            const auto& [o0, c0] = *k.q[0].begin();
            const auto& [o1, c1] = *k.q[1].begin();
            Rational gamma = o0 - o1;
            Elem a = t.neg(t.mul(c0, t.inv(t.lift(c1, std::max(c0.level, c1.level)))));
            k.q = substitute(t, k.q, gamma, a, o0);
            k.exponent += gamma;
            k.terms.emplace_back(k.exponent, a);
        }
        if (!exact && k.q[0].empty()) exact = true;
        out_.push_back(finish(k, true, exact));
    }

    void step(Task k, bool first) {
        if (k.r == 1) {
            extend_stabilized(std::move(k));
            return;
        }
        if (k.steps >= guard_)
            throw Error(ErrorKind::IterationGuard, "newton-puiseux",
                        "iteration count exceeded 4*deg_mu*deg_V^2 = " + std::to_string(guard_) + " before stabilization");
        FieldTower& t = *k.t;
        // exact root V = 0 of the working polynomial
        int low = 0;
        while (low <= k.r && k.q[low].empty()) ++low;
        if (low >= 2)
            throw Error(ErrorKind::DegenerateInput, "newton-puiseux", "repeated exact root; input is not square-free in V");
        if (low == 1) {
            Task done = k;
            if (first) done.terms.clear();
            if (first ? center_passes(AlgebraicNumber(0)) : true) out_.push_back(finish(done, true, true));
        }
        auto pts = support(k.q, k.r);
        for (const auto& s : hull_segments(pts)) {
            if (first ? s.gamma.sign() < 0 : s.gamma.sign() <= 0) continue;
            Rational scaled = s.gamma * Rational(k.q_cur);
            const int w = static_cast<int>(scaled.den().get_si());
            // Psi(S) with Phi(T) = T^{j0} Psi(T^w)
            TowerPoly psi((s.j1 - s.j0) / w + 1, Elem::zero(t.height()));
            for (int j = s.j0; j <= s.j1; ++j) {
                if (k.q[j].empty()) continue;
                const auto& [o, c] = *k.q[j].begin();
                if (o + s.gamma * Rational(j) == s.beta) psi[(j - s.j0) / w] = t.lift(c, t.height());
            }
            // a zero center comes from a positive slope on the first step
            if (first && s.gamma.sign() > 0 && !center_passes(AlgebraicNumber(0))) continue;
            for (auto& sr : roots_in_tower(t, psi)) {
                std::shared_ptr<FieldTower> nt = sr.tower;
                Elem a = sr.value;
                if (w > 1) {
                    TowerPoly binom(w + 1, Elem::zero(nt->height()));
                    binom[0] = nt->neg(nt->lift(a, nt->height()));
                    binom[w] = nt->from_rational(Rational(1), nt->height());
                    auto reps = roots_in_tower(*nt, binom);
                    // representative: largest real part, then largest imaginary part
                    const TowerRoot* best = &reps[0];
                    for (const auto& rr : reps)
                        if (box_less(best->box, rr.box)) best = &rr;
                    nt = best->tower;
                    a = best->value;
                }
                if (first && s.gamma.is_zero() && !center_passes(AlgebraicNumber(nt, a))) continue;
                Task child;
                child.t = nt;
                child.q = substitute(*nt, k.q, s.gamma, a, s.beta);
                child.terms = k.terms;
                child.exponent = k.exponent + s.gamma;
                child.terms.emplace_back(child.exponent, a);
                child.q_cur = k.q_cur * w;
                child.r = sr.multiplicity;
                child.steps = k.steps + 1;
                step(std::move(child), false);
            }
        }
    }

    int guard_;
    std::optional<AlgebraicNumber> filter_;
    int extra_;
    std::vector<Branch> out_;
};

}  // namespace detail

/// Puiseux expansions of the roots of P near mu = 0, one Branch per class of
/// conjugate expansions.
inline std::vector<Branch> expand(const BiPoly& p, std::optional<AlgebraicNumber> center_filter = std::nullopt,
                                  int max_extra_terms = 4) {
    return detail::Expander(p, std::move(center_filter), max_extra_terms).run(p);
}

/// mu-order of a residual; `exact_zero` when the substitution cancels completely.
struct ResidualOrder {
    bool exact_zero = false;
    Rational order;
    bool exceeds(const Rational& cap) const { return exact_zero || order > cap; }
};

/// P(mu, psi) for psi the first `k` terms of an expansion (all when k < 0).
inline ResidualOrder residual_order(const BiPoly& p, const PuiseuxExpansion& e, int k = -1) {
    if (e.terms.empty()) {
        // psi = 0
        if (p[0].is_zero()) return {true, Rational(0)};
        return {false, Rational(p[0].order())};
    }
    auto t = e.terms[0].coefficient.tower();
    for (const auto& term : e.terms)
        if (term.coefficient.tower() != t && term.coefficient.elem().level != 0)
            throw Error(ErrorKind::DegenerateInput, "newton-puiseux", "expansion terms live in different towers");
    std::size_t n = k < 0 ? e.terms.size() : std::min<std::size_t>(k, e.terms.size());
    GSeries psi;
    for (std::size_t i = 0; i < n; ++i) detail::add_term(*t, psi, e.terms[i].exponent, e.terms[i].coefficient.elem());
    detail::drop_zeros(*t, psi);
    GSeries acc, power;
    power[Rational(0)] = Elem::rational(Rational(1));
    for (int j = 0; j <= p.deg_v(); ++j) {
        const auto& c = p.coeffs()[j].coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i].is_zero()) continue;
            for (const auto& [e2, v] : power)
                detail::add_term(*t, acc, e2 + Rational(static_cast<long>(i)), t->mul(v, Elem::rational(c[i])));
        }
        if (j < p.deg_v()) power = detail::series_mul(*t, power, psi);
    }
    detail::drop_zeros(*t, acc);
    if (acc.empty()) return {true, Rational(0)};
    return {false, acc.begin()->first};
}

/// Minimum residual order over all branches.
inline ResidualOrder reconstruct_residual(const BiPoly& p, const std::vector<Branch>& branches) {
    ResidualOrder best{true, Rational(0)};
    for (const auto& b : branches) {
        ResidualOrder r = residual_order(p, b.expansion);
        if (r.exact_zero) continue;
        if (best.exact_zero || r.order < best.order) best = r;
    }
    return best;
}

/// The conjugate expansion obtained from mu^{1/q} -> zeta^i mu^{1/q}, zeta = exp(2 pi i / q).
inline PuiseuxExpansion conjugate_expansion(const PuiseuxExpansion& e, int i) {
    const int q = e.ramification;
    if (q == 1 || i % q == 0 || e.terms.empty()) return e;
    auto t = e.terms[0].coefficient.tower()->clone();
    const int k = t->height();
    TowerPoly cyc(q + 1, Elem::zero(k));
    cyc[0] = t->from_rational(Rational(-1), k);
    cyc[q] = t->from_rational(Rational(1), k);
    auto roots = roots_in_tower(*t, cyc);
    const double ang = 2.0 * M_PI / q;
    const TowerRoot* best = nullptr;
    double best_d = 1e300;
    for (const auto& r : roots) {
        double dx = r.box.re.mid().to_double() - std::cos(ang), dy = r.box.im.mid().to_double() - std::sin(ang);
        if (dx * dx + dy * dy < best_d) {
            best_d = dx * dx + dy * dy;
            best = &r;
        }
    }
    auto nt = best->tower;
    Elem zeta = nt->pow(best->value, static_cast<unsigned>(i % q));
    PuiseuxExpansion out = e;
    for (auto& term : out.terms) {
        Rational eq = term.exponent * Rational(q);
        Integer m = ((eq.num() % q) + q) % q;
        unsigned power = static_cast<unsigned>(m.get_ui());
        term.coefficient = AlgebraicNumber(nt, nt->mul(term.coefficient.elem(), nt->pow(zeta, power)));
    }
    return out;
}

/// Renders `c*mu^{e}` terms with exponents as fractions.
inline std::string render_series(const PuiseuxExpansion& e, const std::string& var = "mu") {
    if (e.terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& term : e.terms) {
        std::string c = term.coefficient.to_string();
        bool neg = !c.empty() && c[0] == '-' && c.find(' ') == std::string::npos;
        if (neg) c = c.substr(1);
        bool compound = c.find(' ') != std::string::npos;
        std::string mono;
        if (!term.exponent.is_zero()) mono = var + "^{" + term.exponent.to_string() + "}";
        std::string body;
        if (mono.empty()) body = compound ? "(" + c + ")" : c;
        else if (c == "1") body = mono;
        else body = (compound ? "(" + c + ")" : c) + "*" + mono;
        if (first) s += (neg ? "-" : "") + body;
        else s += (neg ? " - " : " + ") + body;
        first = false;
    }
    if (!e.exact) s += " + ...";
    return s;
}

}  // namespace crho

#endif  // CRHO_NEWTON_PUISEUX_HPP
