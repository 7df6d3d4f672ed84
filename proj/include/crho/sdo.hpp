#ifndef CRHO_SDO_HPP
#define CRHO_SDO_HPP

// SDO instances, central-path points and traces in extended precision, order
// fits, elimination of a coordinate curve, and derivative checks after the
// reparametrization mu -> mu^rho.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crho/curve.hpp"
#include "crho/errors.hpp"
#include "crho/multipoly.hpp"

namespace crho {

using LD = long double;
using MatL = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<LD, Eigen::Dynamic, 1>;
using MatI = std::vector<std::vector<long>>;

struct SDOInstance {
    int n = 0, m = 0;
    std::vector<MatI> A;
    std::vector<long> b;
    MatI C;

    int coordinate_count() const { return m + 2 * n * n; }
};

// ---------------------------------------------------------------------------
// instances

namespace detail {

inline MatI zero_mat(int n) { return MatI(n, std::vector<long>(n, 0)); }

inline MatL to_ld(const MatI& a) {
    const int n = static_cast<int>(a.size());
    MatL r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = static_cast<LD>(a[i][j]);
    return r;
}

}  // namespace detail

/// Checks symmetry and linear independence of the constraint matrices.
inline void validate_instance(const SDOInstance& s) {
    const char* mod = "sdo-path";
    if (s.n < 1 || s.m < 1) throw Error(ErrorKind::Parse, mod, "instance needs n >= 1 and m >= 1");
    if (static_cast<int>(s.A.size()) != s.m || static_cast<int>(s.b.size()) != s.m)
        throw Error(ErrorKind::Parse, mod, "instance has inconsistent sizes");
    auto check_sym = [&](const MatI& a, const std::string& what) {
        if (static_cast<int>(a.size()) != s.n) throw Error(ErrorKind::Parse, mod, what + " has the wrong size");
        for (int i = 0; i < s.n; ++i) {
            if (static_cast<int>(a[i].size()) != s.n) throw Error(ErrorKind::Parse, mod, what + " has the wrong size");
            for (int j = 0; j < i; ++j)
                if (a[i][j] != a[j][i]) throw Error(ErrorKind::DegenerateInput, mod, what + " is not symmetric");
        }
    };
    for (int k = 0; k < s.m; ++k) check_sym(s.A[k], "A^" + std::to_string(k + 1));
    check_sym(s.C, "C");
    MatL st(s.m, s.n * s.n);
    for (int k = 0; k < s.m; ++k)
        for (int i = 0; i < s.n; ++i)
            for (int j = 0; j < s.n; ++j) st(k, i * s.n + j) = static_cast<LD>(s.A[k][i][j]);
    Eigen::FullPivLU<MatL> lu(st);
    if (lu.rank() != s.m) throw Error(ErrorKind::DegenerateInput, mod, "constraint matrices are linearly dependent");
}

/// Whitespace-separated integers: n, m, the m matrices row-major, b, C. '#' starts a comment.
inline SDOInstance parse_instance(std::istream& in) {
    std::vector<long> nums;
    std::string line;
    while (std::getline(in, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            std::size_t pos = 0;
            long v = 0;
            try {
                v = std::stol(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok.size()) throw Error(ErrorKind::Parse, "sdo-path", "instance file: not an integer: '" + tok + "'");
            nums.push_back(v);
        }
    }
    std::size_t at = 0;
    auto next = [&]() {
        if (at >= nums.size()) throw Error(ErrorKind::Parse, "sdo-path", "instance file ended early");
        return nums[at++];
    };
    SDOInstance s;
    s.n = static_cast<int>(next());
    s.m = static_cast<int>(next());
    if (s.n < 1 || s.m < 1 || s.n > 64 || s.m > 4096) throw Error(ErrorKind::Parse, "sdo-path", "instance sizes out of range");
    auto read_mat = [&]() {
        MatI a = detail::zero_mat(s.n);
        for (auto& row : a)
            for (auto& x : row) x = next();
        return a;
    };
    for (int k = 0; k < s.m; ++k) s.A.push_back(read_mat());
    for (int k = 0; k < s.m; ++k) s.b.push_back(next());
    s.C = read_mat();
    if (at != nums.size()) throw Error(ErrorKind::Parse, "sdo-path", "instance file has trailing numbers");
    validate_instance(s);
    return s;
}

inline SDOInstance load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::Parse, "sdo-path", "cannot open instance file '" + path + "'");
    return parse_instance(f);
}

inline std::string format_instance(const SDOInstance& s) {
    std::ostringstream o;
    auto mat = [&](const MatI& a) {
        for (const auto& row : a) {
            for (std::size_t j = 0; j < row.size(); ++j) o << (j ? " " : "") << row[j];
            o << "\n";
        }
    };
    o << s.n << " " << s.m << "\n";
    for (const auto& a : s.A) mat(a);
    for (int k = 0; k < s.m; ++k) o << (k ? " " : "") << s.b[k];
    o << "\n";
    mat(s.C);
    return o.str();
}

/// 3x3 elliptope: diag(X) = 1.
inline SDOInstance elliptope_instance() {
    SDOInstance s;
    s.n = 3;
    s.m = 3;
    for (int k = 0; k < 3; ++k) {
        MatI a = detail::zero_mat(3);
        a[k][k] = 1;
        s.A.push_back(a);
    }
    s.b = {1, 1, 1};
    s.C = {{0, 2, -2}, {2, 0, -1}, {-2, -1, 0}};
    return s;
}

/// Dual slack S = E11 + sum y_k (E_{1,k+1} + E_{k+1,1}) + sum_{k>=2} y_k E_kk, objective max -y_n.
inline SDOInstance kl02_instance(int n) {
    if (n < 3) throw Error(ErrorKind::DegenerateInput, "sdo-path", "Kl02 instance needs n >= 3");
    SDOInstance s;
    s.n = n;
    s.m = n;
    for (int k = 1; k <= n; ++k) {
        MatI a = detail::zero_mat(n);
        if (k <= n - 1) a[0][k] = a[k][0] = -1;
        if (k >= 2) a[k - 1][k - 1] = -1;
        s.A.push_back(a);
    }
    s.b.assign(n, 0);
    s.b[n - 1] = -1;
    s.C = detail::zero_mat(n);
    s.C[0][0] = 1;
    return s;
}

/// min tr(X) subject to tr(X) = n.
inline SDOInstance identity_instance(int n) {
    SDOInstance s;
    s.n = n;
    s.m = 1;
    MatI a = detail::zero_mat(n);
    for (int i = 0; i < n; ++i) a[i][i] = 1;
    s.A = {a};
    s.b = {n};
    s.C = a;
    return s;
}

// ---------------------------------------------------------------------------
// coordinates: X row-major in [0, n^2), y in [n^2, n^2 + m), S row-major after that

struct CoordinateName {
    char block;  // 'X', 'y' or 'S'
    int i, j;    // 0-based; j unused for y
};

inline CoordinateName coordinate_name(const SDOInstance& s, int c) {
    const int nn = s.n * s.n;
    if (c < 0 || c >= s.coordinate_count()) throw Error(ErrorKind::Parse, "sdo-path", "coordinate index out of range");
    if (c < nn) return {'X', c / s.n, c % s.n};
    if (c < nn + s.m) return {'y', c - nn, 0};
    c -= nn + s.m;
    return {'S', c / s.n, c % s.n};
}

inline std::string coordinate_label(const SDOInstance& s, int c) {
    auto nm = coordinate_name(s, c);
    if (nm.block == 'y') return "y" + std::to_string(nm.i + 1);
    return std::string(1, nm.block) + std::to_string(nm.i + 1) + std::to_string(nm.j + 1);
}

/// Coordinates up to symmetry: upper triangles of X and S, and all of y.
inline std::vector<int> distinct_coordinates(const SDOInstance& s) {
    std::vector<int> out;
    const int nn = s.n * s.n;
    for (int i = 0; i < s.n; ++i)
        for (int j = i; j < s.n; ++j) out.push_back(i * s.n + j);
    for (int k = 0; k < s.m; ++k) out.push_back(nn + k);
    for (int i = 0; i < s.n; ++i)
        for (int j = i; j < s.n; ++j) out.push_back(nn + s.m + i * s.n + j);
    return out;
}

// ---------------------------------------------------------------------------
// central points

struct CentralPathSample {
    LD mu = 0;
    MatL X, S;
    VecL y;
    LD residual = 0;

    std::vector<LD> coords() const {
        std::vector<LD> v;
        for (int i = 0; i < X.rows(); ++i)
            for (int j = 0; j < X.cols(); ++j) v.push_back(X(i, j));
        for (int k = 0; k < y.size(); ++k) v.push_back(y(k));
        for (int i = 0; i < S.rows(); ++i)
            for (int j = 0; j < S.cols(); ++j) v.push_back(S(i, j));
        return v;
    }
};

struct SolverOptions {
    LD tol = 1e-10L;          // relative residual of each block
    int max_newton = 60;
    int max_subdivisions = 24;
    LD step_fraction = 0.95L;  // fraction to the boundary
};

namespace detail {

struct Residuals {
    LD primal, dual, comp;
    LD max() const { return std::max({primal, dual, comp}); }
};

class CentralSolver {
public:
    CentralSolver(const SDOInstance& s, SolverOptions o) : s_(s), o_(o) {
        n_ = s.n;
        m_ = s.m;
        N_ = n_ * (n_ + 1) / 2;
        for (const auto& a : s.A) A_.push_back(to_ld(a));
        C_ = to_ld(s.C);
        b_.resize(m_);
        for (int k = 0; k < m_; ++k) b_(k) = static_cast<LD>(s.b[k]);
        bnorm_ = b_.norm();
        cnorm_ = C_.norm();
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) pairs_.push_back({i, j});
    }

    Residuals residuals(const CentralPathSample& p) const {
        VecL rp(m_);
        for (int k = 0; k < m_; ++k) rp(k) = (A_[k].cwiseProduct(p.X)).sum() - b_(k);
        MatL rd = dual_residual(p);
        MatL xs = p.X * p.S;
        MatL rc = (xs + xs.transpose()) / 2 - p.mu * MatL::Identity(n_, n_);
        return {rp.norm() / (1 + bnorm_), rd.norm() / (1 + cnorm_), rc.norm() / (p.mu * std::sqrt(static_cast<LD>(n_)))};
    }

    /// Newton iterations toward the central point at mu from the warm start p.
    bool newton(CentralPathSample& p, LD mu) const {
        p.mu = mu;
        for (int it = 0; it < o_.max_newton; ++it) {
            Residuals r = residuals(p);
            p.residual = r.max();
            if (r.max() <= o_.tol) return true;
            if (!std::isfinite(static_cast<double>(r.max()))) return false;
            const int dim = m_ + 2 * N_;
            MatL J = MatL::Zero(dim, dim);
            VecL rhs(dim);
            // rows: primal (m), dual (N), complementarity (N); columns: dX (N), dy (m), dS (N)
            for (int k = 0; k < m_; ++k) {
                for (int q = 0; q < N_; ++q) J(k, q) = basis_dot(A_[k], q);
                rhs(k) = b_(k) - (A_[k].cwiseProduct(p.X)).sum();
            }
            MatL rd = dual_residual(p);
            for (int q = 0; q < N_; ++q) {
                auto [i, j] = pairs_[q];
                for (int k = 0; k < m_; ++k) J(m_ + q, N_ + k) = A_[k](i, j);
                J(m_ + q, N_ + m_ + q) = 1;
                rhs(m_ + q) = -rd(i, j);
            }
            MatL xs = p.X * p.S;
            MatL target = mu * MatL::Identity(n_, n_) - (xs + xs.transpose()) / 2;
            for (int q = 0; q < N_; ++q) {
                MatL E = basis(q);
                MatL dx = (E * p.S + p.S * E) / 2;  // column of dX
                MatL ds = (p.X * E + E * p.X) / 2;  // column of dS
                for (int r2 = 0; r2 < N_; ++r2) {
                    auto [i, j] = pairs_[r2];
                    J(m_ + N_ + r2, q) = dx(i, j);
                    J(m_ + N_ + r2, N_ + m_ + q) = ds(i, j);
                }
            }
            for (int r2 = 0; r2 < N_; ++r2) rhs(m_ + N_ + r2) = target(pairs_[r2].first, pairs_[r2].second);
            Eigen::PartialPivLU<MatL> lu(J);
            VecL d = lu.solve(rhs);
            if (!d.allFinite()) return false;
            MatL dX = MatL::Zero(n_, n_), dS = MatL::Zero(n_, n_);
            for (int q = 0; q < N_; ++q) {
                dX += d(q) * basis(q);
                dS += d(N_ + m_ + q) * basis(q);
            }
            VecL dy = d.segment(N_, m_);
            LD amax = std::min(max_step(p.X, dX), max_step(p.S, dS));
            LD alpha = std::min<LD>(1, o_.step_fraction * amax);
            if (alpha <= 0) return false;
            p.X += alpha * dX;
            p.S += alpha * dS;
            p.y += alpha * dy;
            p.X = (p.X + p.X.transpose()) / 2;
            p.S = (p.S + p.S.transpose()) / 2;
        }
        Residuals r = residuals(p);
        p.residual = r.max();
        return r.max() <= o_.tol;
    }

    /// Moves a central point at mu_from to mu_to, subdividing the step when Newton stalls.
    CentralPathSample advance(const CentralPathSample& from, LD mu_to, int depth = 0) const {
        CentralPathSample p = from;
        if (newton(p, mu_to)) return p;
        if (depth >= o_.max_subdivisions)
            throw Error(ErrorKind::NoConvergence, "sdo-path",
                        "Newton did not converge at mu = " + fmt(mu_to) + " (residual " + fmt(p.residual) + ")");
        LD mid = std::sqrt(from.mu * mu_to);
        CentralPathSample half = advance(from, mid, depth + 1);
        return advance(half, mu_to, depth + 1);
    }

    /// Homotopy from X = S = sqrt(mu0) I at mu0, halving mu.
    CentralPathSample start(LD mu) const {
        LD mu0 = std::max<LD>(1e4L, mu);
        CentralPathSample p;
        p.mu = mu0;
        p.X = std::sqrt(mu0) * MatL::Identity(n_, n_);
        p.S = p.X;
        p.y = VecL::Zero(m_);
        if (!newton(p, mu0))
            throw Error(ErrorKind::Infeasible, "sdo-path", "no interior central point found from the default start");
        while (p.mu > mu) {
            LD next = std::max(mu, p.mu / 2);
            p = advance(p, next);
        }
        return p;
    }

    static std::string fmt(LD x) {
        std::ostringstream o;
        o << static_cast<double>(x);
        return o.str();
    }

private:
    MatL dual_residual(const CentralPathSample& p) const {
        MatL r = p.S - C_;
        for (int k = 0; k < m_; ++k) r += p.y(k) * A_[k];
        return r;
    }
    MatL basis(int q) const {
        MatL E = MatL::Zero(n_, n_);
        auto [i, j] = pairs_[q];
        E(i, j) = 1;
        E(j, i) = 1;
        return E;
    }
    LD basis_dot(const MatL& a, int q) const {
        auto [i, j] = pairs_[q];
        return i == j ? a(i, i) : a(i, j) + a(j, i);
    }
    /// Largest alpha with M + alpha D positive semidefinite (infinity if unbounded).
    static LD max_step(const MatL& M, const MatL& D) {
        Eigen::LLT<MatL> llt(M);
        if (llt.info() != Eigen::Success) return 0;
        MatL L = llt.matrixL();
        MatL Y = L.triangularView<Eigen::Lower>().solve(D);
        MatL Z = L.triangularView<Eigen::Lower>().solve(Y.transpose());
        Z = (Z + Z.transpose()) / 2;
        Eigen::SelfAdjointEigenSolver<MatL> es(Z, Eigen::EigenvaluesOnly);
        LD lmin = es.eigenvalues().minCoeff();
        if (lmin >= 0) return 1e30L;
        return -1 / lmin;
    }

    const SDOInstance& s_;
    SolverOptions o_;
    int n_, m_, N_;
    std::vector<MatL> A_;
    MatL C_;
    VecL b_;
    LD bnorm_, cnorm_;
    std::vector<std::pair<int, int>> pairs_;
};

}  // namespace detail

/// The central point at mu, reached by a homotopy from mu = 1e4.
inline CentralPathSample central_point(const SDOInstance& inst, LD mu, SolverOptions opt = {}) {
    if (!(mu > 0)) throw Error(ErrorKind::DegenerateInput, "sdo-path", "mu must be positive");
    return detail::CentralSolver(inst, opt).start(mu);
}

/// Central points at the given decreasing values of mu, warm-started in order.
inline std::vector<CentralPathSample> central_points(const SDOInstance& inst, const std::vector<LD>& mus, SolverOptions opt = {}) {
    detail::CentralSolver solver(inst, opt);
    std::vector<CentralPathSample> out;
    for (std::size_t k = 0; k < mus.size(); ++k) {
        if (k > 0 && !(mus[k] < mus[k - 1])) throw Error(ErrorKind::DegenerateInput, "sdo-path", "mu values must decrease");
        out.push_back(k == 0 ? solver.start(mus[0]) : solver.advance(out.back(), mus[k]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// traces, limits and orders

struct OrderFit {
    Rational exponent;   // snapped
    LD raw_slope = 0;
    bool constant = false;
};

struct TraceResult {
    std::vector<CentralPathSample> samples;
    std::vector<OrderFit> orders;     // per coordinate
    std::vector<LD> limit, limit_width;  // per coordinate

    std::vector<LD> values(int c) const {
        std::vector<LD> v;
        for (const auto& s : samples) v.push_back(s.coords()[c]);
        return v;
    }
};

/// Simplest rational within `radius` of x with denominator at most max_den.
inline Rational snap_rational(LD x, double radius = 0.05, long max_den = 16) {
    Rational lo = Rational::from_double(static_cast<double>(x) - radius), hi = Rational::from_double(static_cast<double>(x) + radius);
    Rational s = simplest_between(lo, hi);
    if (s.den() <= max_den) return s;
    // nearest fraction with a small denominator
    Rational best = Rational(static_cast<long>(std::llround(static_cast<double>(x))));
    for (long d = 1; d <= max_den; ++d) {
        Rational c(static_cast<long>(std::llround(static_cast<double>(x) * d)), d);
        if (std::fabs(c.to_double() - static_cast<double>(x)) < std::fabs(best.to_double() - static_cast<double>(x))) best = c;
    }
    return best;
}

namespace detail {

inline LD noise_floor(LD v) { return 1e-12L * (1 + std::fabs(v)); }

/// Order of convergence from successive differences |v_k - v_{k+1}| ~ mu_k^e.
inline OrderFit fit_values(const std::vector<LD>& mu, const std::vector<LD>& v, int window = 8) {
    if (mu.size() < 6) throw Error(ErrorKind::InsufficientSamples, "sdo-path", "order fit needs at least 6 samples");
    std::vector<std::pair<LD, LD>> pts;
    const LD floor = noise_floor(v.back());
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        LD d = std::fabs(v[k] - v[k + 1]);
        if (d > 10 * floor) pts.push_back({std::log(mu[k]), std::log(d)});
    }
    if (pts.empty()) return {Rational(0), 0, true};
    if (pts.size() < 3) throw Error(ErrorKind::InsufficientSamples, "sdo-path", "too few samples above the noise floor");
    if (static_cast<int>(pts.size()) > window) pts.erase(pts.begin(), pts.end() - window);
    LD sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const LD n = static_cast<LD>(pts.size());
    LD slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {snap_rational(slope), slope, false};
}

}  // namespace detail

/// Snapped order of coordinate c; throws when the coordinate is constant.
inline OrderFit fit_order(const TraceResult& t, int c) {
    std::vector<LD> mu;
    for (const auto& s : t.samples) mu.push_back(s.mu);
    OrderFit f = detail::fit_values(mu, t.values(c));
    if (f.constant) throw Error(ErrorKind::ConstantCoordinate, "sdo-path", "coordinate " + std::to_string(c) + " is constant along the trace");
    return f;
}

/// Warm-started continuation on a geometric grid from mu_start to mu_end, with
/// order fits and Richardson limits per coordinate.
inline TraceResult trace_path(const SDOInstance& inst, LD mu_start = 1, LD mu_end = 1e-8L, LD ratio = 0.5L,
                              SolverOptions opt = {}) {
    if (!(mu_end > 0 && mu_end < mu_start)) throw Error(ErrorKind::DegenerateInput, "sdo-path", "need 0 < mu_end < mu_start");
    if (!(ratio > 0 && ratio < 1)) throw Error(ErrorKind::DegenerateInput, "sdo-path", "grid ratio must lie in (0, 1)");
    // geometric grid hitting both ends, with step ratio as close to `ratio` as that allows
    const LD span = std::log(mu_end / mu_start);
    const int K = std::max(1, static_cast<int>(std::ceil(span / std::log(ratio) - 1e-9L)));
    std::vector<LD> mus;
    for (int k = 0; k < K; ++k) mus.push_back(mu_start * std::exp(span * k / K));
    mus.push_back(mu_end);
    TraceResult t;
    t.samples = central_points(inst, mus, opt);
    const int nc = inst.coordinate_count();
    for (int c = 0; c < nc; ++c) {
        std::vector<LD> v = t.values(c);
        OrderFit f = t.samples.size() >= 6 ? detail::fit_values(mus, v) : OrderFit{Rational(0), 0, true};
        t.orders.push_back(f);
        const std::size_t K = v.size() - 1;
        if (f.constant || K < 2 || f.exponent.sign() <= 0) {
            t.limit.push_back(v[K]);
            t.limit_width.push_back(std::fabs(v[K] - v[K - 1]) + detail::noise_floor(v[K]));
            continue;
        }
        const LD re = std::pow(mus[K] / mus[K - 1], static_cast<LD>(f.exponent.to_double()));
        LD L = (v[K] - re * v[K - 1]) / (1 - re);
        LD Lprev = (v[K - 1] - re * v[K - 2]) / (1 - re);
        t.limit.push_back(L);
        t.limit_width.push_back(std::fabs(L - Lprev) + detail::noise_floor(L));
    }
    return t;
}

// ---------------------------------------------------------------------------
// elimination

struct EliminationOptions {
    int degree_cap = 64;
    std::size_t term_cap = 40000;
    LD validation_tol = 1e-6L;
};

struct EliminationResult {
    BiPoly P;
    std::vector<BiPoly> candidates;  // gcd-free basis of the eliminants
    LD max_residual = 0;
};

namespace detail {

/// |P(mu, v)| relative to the sum of the magnitudes of its terms.
inline LD relative_value(const BiPoly& p, LD mu, LD v) {
    LD val = 0, mag = 0;
    LD vp = 1;
    for (int j = 0; j <= p.deg_v(); ++j) {
        LD mp = 1;
        for (const auto& c : p.coeffs()[j].coeffs()) {
            LD t = c.to_long_double() * mp * vp;
            val += t;
            mag += std::fabs(t);
            mp *= mu;
        }
        vp *= v;
    }
    return mag == 0 ? 0 : std::fabs(val) / mag;
}

/// Pairwise coprime square-free polynomials whose products give the inputs' separable parts.
inline std::vector<BiPoly> gcd_free_basis(const std::vector<BiPoly>& in) {
    std::vector<BiPoly> basis;
    std::vector<BiPoly> parts;
    for (const auto& p0 : in) {
        // a power of V dividing p0 becomes its own element
        int low = 0;
        while (low < p0.deg_v() && p0.coeffs()[low].is_zero()) ++low;
        if (low > 0) {
            parts.push_back(BiPoly::monomial(Rational(1), 0, 1));
            std::vector<UniPoly> rest(p0.coeffs().begin() + low, p0.coeffs().end());
            parts.push_back(BiPoly(std::move(rest)));
        } else {
            parts.push_back(p0);
        }
    }
    for (const auto& p0 : parts) {
        if (p0.deg_v() < 1) continue;
        BiPoly f = separable_part(p0);
        std::vector<BiPoly> next;
        for (const auto& b : basis) {
            BiPoly g = poly_gcd(f, b);
            if (g.deg_v() < 1) {
                next.push_back(b);
                continue;
            }
            next.push_back(g);
            BiPoly rest = primitive_part(pseudo_divmod(b, g).first);
            if (rest.deg_v() >= 1) next.push_back(rest);
            f = primitive_part(pseudo_divmod(f, g).first);
        }
        if (f.deg_v() >= 1) next.push_back(f);
        basis = std::move(next);
    }
    return basis;
}

/// The polynomial system with variables mu (0), V (1), X upper triangle, y; S is substituted.
struct PolySystem {
    std::vector<MultiPoly> eqs;
    std::vector<int> unknowns;
};

inline PolySystem build_system(const SDOInstance& s, int coord) {
    const int n = s.n, m = s.m, N = n * (n + 1) / 2;
    const int nv = 2 + N + m;
    auto xidx = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        return 2 + i * n - i * (i - 1) / 2 + (j - i);
    };
    auto yidx = [&](int k) { return 2 + N + k; };
    std::vector<std::vector<MultiPoly>> X(n, std::vector<MultiPoly>(n)), S(n, std::vector<MultiPoly>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            X[i][j] = MultiPoly::var(nv, xidx(i, j));
            MultiPoly sij = MultiPoly::constant(nv, Rational(s.C[i][j]));
            for (int k = 0; k < m; ++k)
                if (s.A[k][i][j] != 0) sij -= MultiPoly::var(nv, yidx(k), Rational(s.A[k][i][j]));
            S[i][j] = sij;
        }
    PolySystem sys;
    for (int k = 0; k < m; ++k) {
        MultiPoly e = MultiPoly::constant(nv, Rational(-s.b[k]));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (s.A[k][i][j] != 0) e += X[i][j].scaled(Rational(s.A[k][i][j]));
        if (!e.is_zero()) sys.eqs.push_back(e);
    }
    auto nm = coordinate_name(s, coord);
    MultiPoly target = nm.block == 'X' ? X[nm.i][nm.j] : nm.block == 'y' ? MultiPoly::var(nv, yidx(nm.i)) : S[nm.i][nm.j];
    sys.eqs.push_back(MultiPoly::var(nv, 1) - target);
    MultiPoly mu = MultiPoly::var(nv, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MultiPoly e(nv);
            for (int k = 0; k < n; ++k) e += X[i][k] * S[k][j];
            if (i == j) e -= mu;
            if (!e.is_zero()) sys.eqs.push_back(e);
        }
    for (int v = 2; v < nv; ++v) sys.unknowns.push_back(v);
    return sys;
}

inline MultiPoly tidy(const MultiPoly& p) { return p.without_power_of(0).normalized(); }

inline void check_caps(const MultiPoly& p, const EliminationOptions& o) {
    if (p.size() > o.term_cap)
        throw Error(ErrorKind::BlowUp, "sdo-path", "intermediate polynomial exceeds " + std::to_string(o.term_cap) + " terms");
    for (int v = 0; v < p.nvars(); ++v)
        if (p.degree(v) > o.degree_cap)
            throw Error(ErrorKind::BlowUp, "sdo-path", "intermediate degree exceeds the cap " + std::to_string(o.degree_cap));
}

/// Eliminates all unknowns; returns the nonzero eliminants in (mu, V).
inline std::vector<BiPoly> eliminate(PolySystem sys, const EliminationOptions& o, bool reverse = false) {
    std::set<int> U(sys.unknowns.begin(), sys.unknowns.end());
    for (auto& e : sys.eqs) e = tidy(e);
    while (!U.empty()) {
        // pivot: lowest degree, then constant leading coefficient, then fewest terms
        struct Key {
            int deg, nonconst;
            std::size_t size;
            int var;
            std::size_t eq;
        };
        std::optional<Key> best;
        for (int z : U)
            for (std::size_t i = 0; i < sys.eqs.size(); ++i) {
                int d = sys.eqs[i].degree(z);
                if (d < 1) continue;
                int nonconst = sys.eqs[i].coeffs_in(z)[d].is_constant() ? 0 : 1;
                Key k{d, nonconst, sys.eqs[i].size(), z, i};
                auto rank = [reverse](const Key& a) { return std::make_tuple(a.deg, a.nonconst, a.size, reverse ? -a.var : a.var); };
                if (!best || rank(k) < rank(*best)) best = k;
            }
        if (!best) break;  // remaining unknowns are unconstrained
        const int z = best->var;
        MultiPoly piv = sys.eqs[best->eq];
        std::vector<MultiPoly> next;
        auto pc = piv.coeffs_in(z);
        const bool substitution = best->deg == 1 && best->nonconst == 0;
        MultiPoly value = substitution ? (MultiPoly(piv.nvars()) - pc[0]).scaled(pc[1].terms().begin()->second.inv()) : MultiPoly();
        for (std::size_t i = 0; i < sys.eqs.size(); ++i) {
            if (i == best->eq) continue;
            const MultiPoly& g = sys.eqs[i];
            if (g.degree(z) < 1) {
                next.push_back(g);
                continue;
            }
            MultiPoly r = tidy(substitution ? g.substitute(z, value) : resultant(piv, g, z));
            check_caps(r, o);
            if (!r.is_zero()) next.push_back(r);
        }
        // drop duplicates
        std::sort(next.begin(), next.end(), [](const MultiPoly& a, const MultiPoly& b) { return a.terms() < b.terms(); });
        next.erase(std::unique(next.begin(), next.end()), next.end());
        sys.eqs = std::move(next);
        U.erase(z);
    }
    std::vector<BiPoly> out;
    for (const auto& e : sys.eqs) {
        bool only_mu_v = true;
        for (int z : U) only_mu_v = only_mu_v && !e.involves(z);
        if (!only_mu_v) continue;
        BiPoly b = e.to_bipoly();
        if (b.deg_v() >= 1) out.push_back(b);
    }
    return out;
}

}  // namespace detail

/// A polynomial P(mu, V) vanishing on the traced graph of coordinate c.
inline EliminationResult eliminate_coordinate(const SDOInstance& inst, int coord, const TraceResult& trace,
                                              EliminationOptions opt = {}) {
    // two pivot orders: factors introduced by one order are split off by the other
    auto sys = detail::build_system(inst, coord);
    auto finals = detail::eliminate(sys, opt);
    auto other = detail::eliminate(sys, opt, true);
    finals.insert(finals.end(), other.begin(), other.end());
    if (finals.empty())
        throw Error(ErrorKind::ExtraneousVanishing, "sdo-path", "elimination left no polynomial in (mu, V) for " + coordinate_label(inst, coord));
    EliminationResult r;
    r.candidates = detail::gcd_free_basis(finals);
    std::vector<std::pair<LD, std::size_t>> scores;
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        LD worst = 0;
        for (const auto& s : trace.samples)
            worst = std::max(worst, detail::relative_value(r.candidates[i], s.mu, s.coords()[coord]));
        scores.push_back({worst, i});
    }
    BiPoly P = BiPoly::constant(Rational(1));
    LD worst = 0;
    bool any = false;
    for (auto [w, i] : scores)
        if (w <= opt.validation_tol) {
            P = P * r.candidates[i];
            worst = std::max(worst, w);
            any = true;
        }
    if (!any)
        throw Error(ErrorKind::ExtraneousVanishing, "sdo-path",
                    "no eliminant factor vanishes along the traced path for " + coordinate_label(inst, coord));
    r.P = primitive_part(P);
    r.max_residual = worst;
    return r;
}

// ---------------------------------------------------------------------------
// rho for an instance

enum class Route { Auto, Elimination, OrderFit };

struct CoordinateReport {
    int index = 0;
    std::string label;
    bool constant = false;
    bool heuristic = false;  // rho_i from the order fit
    OrderFit fit;
    LD limit = 0, limit_width = 0;
    std::optional<BiPoly> P;
    std::vector<int> q_values;
    int rho_i = 1;
    bool fit_consistent = true;  // snapped denominator divides every matched q
    std::string note;
};

struct SdoRhoReport {
    RhoReport report;
    std::vector<CoordinateReport> coordinates;
    bool heuristic = false;
};

inline SdoRhoReport compute_rho_sdo(const SDOInstance& inst, const TraceResult& trace, Route route = Route::Auto,
                                    Rational tol = Rational(1, 1000000), EliminationOptions eopt = {}) {
    SdoRhoReport out;
    std::vector<CoordinateRho> rows;
    const bool try_elim = route == Route::Elimination || (route == Route::Auto && inst.n <= 3);
    for (int c : distinct_coordinates(inst)) {
        CoordinateReport cr;
        cr.index = c;
        cr.label = coordinate_label(inst, c);
        cr.fit = trace.orders[c];
        cr.limit = trace.limit[c];
        cr.limit_width = trace.limit_width[c];
        if (cr.fit.constant) {
            cr.constant = true;
            cr.rho_i = 1;
            cr.note = "constant";
        } else {
            bool done = false;
            if (try_elim) {
                try {
                    auto el = eliminate_coordinate(inst, c, trace, eopt);
                    cr.P = el.P;
                    Rational w = Rational::from_double(static_cast<double>(cr.limit_width));
                    Rational L = Rational::from_double(static_cast<double>(cr.limit));
                    auto rc = rho_curve(el.P, Interval(L - w, L + w), tol);
                    std::vector<PathSample> tail;
                    for (const auto& s : trace.samples)
                        if (s.mu <= 1e-4L) tail.push_back({s.mu, s.coords()[c]});
                    auto kept = select_by_samples(rc.matched, tail, rc.curve.theta);
                    for (const auto& b : kept) cr.q_values.push_back(b.ramification);
                    cr.rho_i = rho_for_coordinate(kept);
                    for (int q : cr.q_values) cr.fit_consistent = cr.fit_consistent && (q % cr.fit.exponent.den().get_si() == 0);
                    done = true;
                } catch (const Error& e) {
                    if (route == Route::Elimination) throw Error(e.kind(), "sdo-path", cr.label + ": " + e.what());
                    if (e.kind() != ErrorKind::BlowUp && e.kind() != ErrorKind::ExtraneousVanishing) throw;
                    cr.note = std::string("elimination fallback: ") + kind_name(e.kind());
                }
            }
            if (!done) {
                cr.heuristic = true;
                cr.rho_i = static_cast<int>(cr.fit.exponent.den().get_si());
                cr.q_values = {cr.rho_i};
                out.heuristic = true;
            }
        }
        rows.push_back({c, cr.q_values.empty() ? std::vector<int>{1} : cr.q_values, cr.rho_i});
        out.coordinates.push_back(std::move(cr));
    }
    out.report = make_report(rows);
    if (out.heuristic) out.report.optimality = Optimality::ProductFallback;
    return out;
}

inline SdoRhoReport compute_rho_sdo(const SDOInstance& inst, Route route = Route::Auto) {
    return compute_rho_sdo(inst, trace_path(inst), route);
}

// ---------------------------------------------------------------------------
// derivative checks after mu -> mu^rho

struct CoordinateVerdict {
    int index = 0;
    std::vector<LD> d1, d2;  // per level, |first| and |second| derivative
    LD growth_exponent = 0;  // log-log slope of d1 against t over the last levels
    bool bounded = true;
    LD d1_variation = 0;     // max |d1_k - d1_0|
};

struct VerifyReport {
    int rho = 1;
    std::vector<LD> t;  // level points, decreasing
    std::vector<CoordinateVerdict> coords;
    bool bounded = true;
    LD growth_exponent = 0;  // most negative growth over coordinates
    bool constant_derivative = true;
};

/// Derivatives of w(t) = v(t^rho) by centered differences on t_k = t_hi 2^-k,
/// with mu restricted to [window_lo, window_hi].
inline VerifyReport verify_reparametrization(const SDOInstance& inst, int rho, LD window_lo = 1e-8L, LD window_hi = 1e-2L,
                                             SolverOptions opt = {}) {
    if (rho < 1) throw Error(ErrorKind::DegenerateInput, "sdo-path", "rho must be positive");
    if (!(window_lo > 0 && window_lo < window_hi)) throw Error(ErrorKind::DegenerateInput, "sdo-path", "need 0 < window_lo < window_hi");
    const LD p = static_cast<LD>(rho);
    const LD t_hi = std::pow(window_hi, 1 / p), t_lo = std::pow(window_lo, 1 / p);
    VerifyReport rep;
    rep.rho = rho;
    for (LD t = t_hi; t >= t_lo * (1 - 1e-9L); t /= 2) rep.t.push_back(t);
    if (rep.t.size() < 4) throw Error(ErrorKind::InsufficientSamples, "sdo-path", "window holds fewer than 4 dyadic levels");
    std::vector<LD> ts;
    for (LD t : rep.t)
        for (LD f : {1.125L, 1.0L, 0.875L}) ts.push_back(t * f);
    std::sort(ts.begin(), ts.end(), std::greater<LD>());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<LD> mus;
    for (LD t : ts) mus.push_back(std::pow(t, p));
    auto pts = central_points(inst, mus, opt);
    auto value_at = [&](LD t) -> std::vector<LD> {
        auto it = std::find(ts.begin(), ts.end(), t);
        return pts[it - ts.begin()].coords();
    };
    const int nc = inst.coordinate_count();
    rep.coords.resize(nc);
    for (int c = 0; c < nc; ++c) rep.coords[c].index = c;
    for (LD t : rep.t) {
        const LD h = t / 8;
        auto a = value_at(t * 1.125L), m = value_at(t), b = value_at(t * 0.875L);
        for (int c = 0; c < nc; ++c) {
            rep.coords[c].d1.push_back(std::fabs((a[c] - b[c]) / (2 * h)));
            rep.coords[c].d2.push_back(std::fabs((a[c] - 2 * m[c] + b[c]) / (h * h)));
        }
    }
    const std::size_t K = rep.t.size();
    for (auto& cv : rep.coords) {
        for (std::size_t k = K - 3; k < K; ++k)
            if (cv.d1[k] > cv.d1[k - 1] * (1 + 1e-2L) + 1e-6L) cv.bounded = false;
        for (std::size_t k = 0; k < K; ++k) cv.d1_variation = std::max(cv.d1_variation, std::fabs(cv.d1[k] - cv.d1[0]));
        // slope over the last four levels where the derivative is visible
        LD sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t k = K - 4; k < K; ++k) {
            if (cv.d1[k] <= 1e-9L) continue;
            LD x = std::log(rep.t[k]), y = std::log(cv.d1[k]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        cv.growth_exponent = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0;
        rep.bounded = rep.bounded && cv.bounded;
        rep.growth_exponent = std::min(rep.growth_exponent, cv.growth_exponent);
        if (cv.d1_variation > 1e-6L * (1 + cv.d1[0])) rep.constant_derivative = false;
    }
    return rep;
}

}  // namespace crho

#endif  // CRHO_SDO_HPP
