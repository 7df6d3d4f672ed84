#ifndef CRHO_EXACT_ARITH_HPP
#define CRHO_EXACT_ARITH_HPP

// gcd, content, separable part and resultants for Q[mu][V].

#include <utility>
#include <vector>

#include "crho/errors.hpp"
#include "crho/poly.hpp"

namespace crho {

enum class Var { Mu, V };

/// Monic gcd of all V-coefficients.
inline UniPoly content_mu(const BiPoly& p) {
    UniPoly g;
    for (const auto& c : p.coeffs()) {
        g = gcd(g, c);
        if (g.degree() == 0) break;
    }
    return g;
}

/// Exact quotient of every coefficient by c. Caller guarantees divisibility.
inline BiPoly divide_coeffs(const BiPoly& p, const UniPoly& c) {
    std::vector<UniPoly> out;
    for (const auto& x : p.coeffs()) out.push_back(divmod(x, c).first);
    return BiPoly(std::move(out));
}

/// Scales by a rational so that all coefficients are coprime integers and the
/// leading rational of the leading coefficient is positive.
inline BiPoly integer_normalize(const BiPoly& p) {
    if (p.is_zero()) return p;
    Integer num_gcd = 0, den_lcm = 1;
    for (const auto& c : p.coeffs())
        for (const auto& r : c.coeffs()) {
            if (r.is_zero()) continue;
            num_gcd = gcd(num_gcd, r.num());
            den_lcm = lcm(den_lcm, r.den());
        }
    Rational s(den_lcm, num_gcd);
    if (p.lead_rational().sign() < 0) s = -s;
    return p * s;
}

/// P = c * Q with c the monic coefficient gcd in Q[mu] and Q primitive. Q keeps
/// the rational scaling of P so that the product reconstructs P exactly.
inline std::pair<UniPoly, BiPoly> content_and_primitive(const BiPoly& p) {
    if (p.is_zero()) throw Error(ErrorKind::DegenerateInput, "exact-arith", "content of the zero polynomial");
    UniPoly c = content_mu(p);
    return {c, divide_coeffs(p, c)};
}

/// Content removed and integer-normalized: the canonical representative.
inline BiPoly primitive_part(const BiPoly& p) {
    if (p.is_zero()) return p;
    return integer_normalize(content_and_primitive(p).second);
}

/// Pseudo-remainder of a by b in V: lc(b)^(da-db+1) * a mod b.
inline BiPoly prem(const BiPoly& a, const BiPoly& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "exact-arith", "pseudo-division by zero");
    BiPoly r = a;
    int db = b.deg_v();
    int e = a.deg_v() - db + 1;
    if (e <= 0) return r;
    UniPoly lb = b.lc();
    while (!r.is_zero() && r.deg_v() >= db) {
        int k = r.deg_v() - db;
        std::vector<UniPoly> shifted(k + 1);
        shifted[k] = r.lc();
        r = r * lb - BiPoly(std::move(shifted)) * b;
        --e;
    }
    return r * pow(lb, static_cast<unsigned>(e));
}

/// Pseudo-quotient and remainder: lc(b)^(da-db+1) * a = q*b + r.
inline std::pair<BiPoly, BiPoly> pseudo_divmod(const BiPoly& a, const BiPoly& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "exact-arith", "pseudo-division by zero");
    int db = b.deg_v();
    int e = a.deg_v() - db + 1;
    if (e <= 0) return {BiPoly(), a};
    UniPoly lb = b.lc();
    BiPoly q, r = a;
    while (!r.is_zero() && r.deg_v() >= db) {
        int k = r.deg_v() - db;
        std::vector<UniPoly> mono(k + 1);
        mono[k] = r.lc();
        BiPoly t(std::move(mono));
        q = q * lb + t;
        r = r * lb - t * b;
        --e;
    }
    UniPoly f = pow(lb, static_cast<unsigned>(e));
    return {q * f, r * f};
}

/// True when b divides a in Q(mu)[V] (zero pseudo-remainder).
inline bool pseudo_divides(const BiPoly& b, const BiPoly& a) { return prem(a, b).is_zero(); }

namespace detail {

// Subresultant PRS (Collins, Brown) in V over Q[mu].
inline BiPoly subresultant_gcd_v(BiPoly a, BiPoly b) {
    if (a.is_zero()) return primitive_part(b);
    if (b.is_zero()) return primitive_part(a);
    if (a.deg_v() < b.deg_v()) std::swap(a, b);
    if (b.deg_v() == 0) return BiPoly::constant(1);
    a = content_and_primitive(a).second;
    b = content_and_primitive(b).second;
    UniPoly g = UniPoly::constant(1), h = UniPoly::constant(1);
    for (;;) {
        int d = a.deg_v() - b.deg_v();
        BiPoly r = prem(a, b);
        if (r.is_zero()) return primitive_part(b);
        if (r.deg_v() == 0) return BiPoly::constant(1);
        a = b;
        b = divide_coeffs(r, g * pow(h, static_cast<unsigned>(d)));
        g = a.lc();
        // h <- g^d / h^(d-1)
        if (d == 0) {
            // h unchanged
        } else {
            h = divmod(pow(g, static_cast<unsigned>(d)), pow(h, static_cast<unsigned>(d - 1))).first;
        }
    }
}

}  // namespace detail

/// gcd over the fraction field of the other variable, made primitive and normalized.
inline BiPoly poly_gcd(const BiPoly& p, const BiPoly& q, Var eliminate = Var::V) {
    if (p.is_zero() && q.is_zero()) throw Error(ErrorKind::DegenerateInput, "exact-arith", "gcd of two zero polynomials");
    if (eliminate == Var::V) return detail::subresultant_gcd_v(p, q);
    return detail::subresultant_gcd_v(p.swap_vars(), q.swap_vars()).swap_vars();
}

/// P / gcd(P, dP/dV), primitive in mu.
inline BiPoly separable_part(const BiPoly& p) {
    if (p.is_zero()) throw Error(ErrorKind::DegenerateInput, "exact-arith", "separable part of zero");
    if (p.deg_v() <= 0) return primitive_part(p);
    BiPoly g = poly_gcd(p, p.derivative_v());
    if (g.deg_v() == 0) return primitive_part(p);
    return primitive_part(pseudo_divmod(p, g).first);
}

/// Determinant by fraction-free Gaussian elimination (Bareiss) over an integral
/// domain. `exact_div(a, b)` must return a / b when b divides a.
template <class T, class IsZero, class ExactDiv>
T bareiss_det(std::vector<std::vector<T>> m, const T& one, IsZero is_zero, ExactDiv exact_div) {
    const std::size_t n = m.size();
    if (n == 0) return one;
    T prev = one;
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(m[k][k])) {
            std::size_t piv = k + 1;
            while (piv < n && is_zero(m[piv][k])) ++piv;
            if (piv == n) return T{};
            std::swap(m[k], m[piv]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
        prev = m[k][k];
    }
    T det = m[n - 1][n - 1];
    if (negate) det = T{} - det;
    return det;
}

/// Sylvester matrix of two coefficient lists (lowest degree first).
template <class T>
std::vector<std::vector<T>> sylvester_matrix(const std::vector<T>& p, const std::vector<T>& q) {
    const int dp = static_cast<int>(p.size()) - 1, dq = static_cast<int>(q.size()) - 1;
    const int n = dp + dq;
    std::vector<std::vector<T>> m(n, std::vector<T>(n));
    for (int r = 0; r < dq; ++r)
        for (int i = 0; i <= dp; ++i) m[r][r + i] = p[dp - i];
    for (int r = 0; r < dp; ++r)
        for (int i = 0; i <= dq; ++i) m[dq + r][r + i] = q[dq - i];
    return m;
}

namespace detail {

inline UniPoly resultant_v(const BiPoly& p, const BiPoly& q) {
    if (p.is_zero() || q.is_zero()) return UniPoly();
    int dp = p.deg_v(), dq = q.deg_v();
    if (dp == 0 && dq == 0)
        throw Error(ErrorKind::DegenerateInput, "exact-arith", "resultant of two polynomials constant in the eliminated variable");
    if (dp == 0) return pow(p[0], static_cast<unsigned>(dq));
    if (dq == 0) return pow(q[0], static_cast<unsigned>(dp));
    auto m = sylvester_matrix(p.coeffs(), q.coeffs());
    return bareiss_det(
        std::move(m), UniPoly::constant(1), [](const UniPoly& x) { return x.is_zero(); },
        [](const UniPoly& a, const UniPoly& b) { return divmod(a, b).first; });
}

}  // namespace detail

/// Determinant of the Sylvester matrix with respect to the eliminated variable.
/// The result is a polynomial in the other variable (mu for Var::V, V for Var::Mu).
inline UniPoly resultant(const BiPoly& p, const BiPoly& q, Var eliminate = Var::V) {
    if (eliminate == Var::V) return detail::resultant_v(p, q);
    return detail::resultant_v(p.swap_vars(), q.swap_vars());
}

/// Resultant of two univariate rational polynomials.
inline Rational resultant(const UniPoly& p, const UniPoly& q) {
    return resultant(BiPoly::from_uni(p).swap_vars(), BiPoly::from_uni(q).swap_vars())[0];
}

}  // namespace crho

#endif  // CRHO_EXACT_ARITH_HPP
