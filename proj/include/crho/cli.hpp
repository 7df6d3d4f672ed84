#ifndef CRHO_CLI_HPP
#define CRHO_CLI_HPP

// Command-line front end. run() never exits the process; it returns 0 on
// success, 2 on input errors and 3 on computational errors.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crho/curve.hpp"
#include "crho/newton_puiseux.hpp"
#include "crho/parse.hpp"
#include "crho/sdo.hpp"

namespace crho::cli {

using json = nlohmann::ordered_json;

enum class Format { Text, Json, Csv };

namespace detail {

inline Error input_error(const std::string& what) { return Error(ErrorKind::Parse, "cli", what); }

inline std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Polynomial text with '#' comments removed.
inline std::string strip_comments(const std::string& text) {
    std::string out, line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        out += line + " ";
    }
    return out;
}

/// Name used for the series variable: the alias of mu appearing in the input.
inline std::string series_var(const std::string& text) {
    if (text.find("mu") != std::string::npos) return "mu";
    if (text.find('X') != std::string::npos) return "X";
    return "mu";
}

/// Exact decimal or fraction, e.g. "-1", "0.25", "3/4", "1e-3".
inline Rational parse_number(const std::string& s, const std::string& flag) {
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Rational r(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
            return r;
        }
        std::size_t pos = 0;
        std::string mant = s, ex;
        auto e = s.find_first_of("eE");
        if (e != std::string::npos) {
            mant = s.substr(0, e);
            ex = s.substr(e + 1);
        }
        bool neg = !mant.empty() && mant[0] == '-';
        if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant.erase(0, 1);
        auto dot = mant.find('.');
        std::string digits = mant, frac;
        if (dot != std::string::npos) {
            digits = mant.substr(0, dot);
            frac = mant.substr(dot + 1);
        }
        if (digits.empty() && frac.empty()) throw std::invalid_argument("empty");
        for (char c : digits + frac)
            if (c < '0' || c > '9') throw std::invalid_argument("digit");
        Integer num(digits.empty() ? "0" : digits);
        Integer den = 1;
        for (char c : frac) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
        Rational r(num, den);
        if (!ex.empty()) {
            long k = std::stol(ex, &pos);
            if (pos != ex.size()) throw std::invalid_argument("exponent");
            Rational ten(10);
            r = k >= 0 ? r * pow(ten, static_cast<unsigned>(k)) : r / pow(ten, static_cast<unsigned>(-k));
        }
        return neg ? -r : r;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw input_error("invalid number for " + flag + ": '" + s + "'");
    }
}

/// An instance file, or one of the built-in names: elliptope, identity:N, kl02:N.
inline SDOInstance resolve_instance(const std::string& name) {
    std::ifstream f(name);
    if (f) return parse_instance(f);
    auto sized = [&](const std::string& prefix) -> std::optional<int> {
        if (name.rfind(prefix, 0) != 0) return std::nullopt;
        try {
            std::size_t pos = 0;
            int n = std::stoi(name.substr(prefix.size()), &pos);
            if (pos + prefix.size() == name.size() && n >= 1 && n <= 32) return n;
        } catch (const std::exception&) {
        }
        throw input_error("invalid built-in instance '" + name + "'");
    };
    if (name == "elliptope") return elliptope_instance();
    if (auto n = sized("identity:")) return identity_instance(*n);
    if (auto n = sized("kl02:")) return kl02_instance(*n);
    throw input_error("cannot open instance '" + name + "'");
}

inline std::string fmt(LD x, int digits = 10) {
    std::ostringstream o;
    o << std::setprecision(digits) << static_cast<double>(x);
    return o.str();
}

inline json branch_json(const Branch& b, const std::string& var) {
    json terms = json::array();
    for (const auto& t : b.expansion.terms)
        terms.push_back(json{{"exponent", t.exponent.to_string()}, {"coefficient", t.coefficient.to_string()}});
    return {{"center", b.center_value.to_string()},
            {"q", b.ramification},
            {"conjugates", b.conjugate_count},
            {"exact", b.expansion.exact},
            {"series", render_series(b.expansion, var)},
            {"terms", terms}};
}

inline std::string branch_line(const Branch& b, const std::string& var) {
    return "center=" + b.center_value.to_string() + " q=" + std::to_string(b.ramification) +
           " series=" + render_series(b.expansion, var);
}

}  // namespace detail

struct Options {
    std::string poly, poly_file, instance, limit, tol = "1/1000000", route = "auto", format = "text";
    int terms = 4;
    double mu_start = 1, mu_end = 1e-8, ratio = 0.5, window_lo = 1e-8, window_hi = 1e-2;
    int rho = 0;
};

namespace detail {

inline Format parse_format(const std::string& f) {
    if (f == "text") return Format::Text;
    if (f == "json") return Format::Json;
    if (f == "csv") return Format::Csv;
    throw input_error("unknown format '" + f + "'");
}

inline std::pair<BiPoly, std::string> load_poly(const Options& o) {
    if (o.poly.empty() == o.poly_file.empty()) throw input_error("give exactly one of --poly and --poly-file");
    std::string text = o.poly.empty() ? strip_comments(read_file(o.poly_file)) : o.poly;
    return {parse_poly(text), series_var(text)};
}

inline void cmd_polygon(const Options& o, Format f, std::ostream& out) {
    auto [p, var] = load_poly(o);
    auto segs = newton_polygon(p);
    if (f == Format::Json) {
        json a = json::array();
        for (const auto& s : segs)
            a.push_back(json{{"j0", s.j0}, {"j1", s.j1}, {"o0", s.o0.to_string()}, {"o1", s.o1.to_string()}, {"gamma", s.gamma.to_string()},
                         {"beta", s.beta.to_string()}, {"edge_poly", s.edge_poly.to_string("T")}});
        out << json{{"segments", a}}.dump(2) << "\n";
        return;
    }
    if (f == Format::Csv) {
        out << "j0,o0,j1,o1,gamma,beta,edge_poly\n";
        for (const auto& s : segs)
            out << s.j0 << "," << s.o0.to_string() << "," << s.j1 << "," << s.o1.to_string() << "," << s.gamma.to_string() << "," << s.beta.to_string()
                << ",\"" << s.edge_poly.to_string("T") << "\"\n";
        return;
    }
    for (const auto& s : segs)
        out << "segment (" << s.j0 << "," << s.o0.to_string() << ") -- (" << s.j1 << "," << s.o1.to_string() << ") gamma=" << s.gamma.to_string()
            << " beta=" << s.beta.to_string() << " edge=" << s.edge_poly.to_string("T") << "\n";
}

inline void print_branches(const std::vector<Branch>& bs, const std::string& var, std::ostream& out) {
    for (const auto& b : bs) out << detail::branch_line(b, var) << "\n";
}

inline void cmd_expand(const Options& o, Format f, std::ostream& out) {
    if (o.terms < 0 || o.terms > 64) throw input_error("--terms must lie in [0, 64]");
    auto [p, var] = load_poly(o);
    auto nc = normalize_curve(p);
    auto bs = expand(nc.normalized, std::nullopt, o.terms);
    if (f == Format::Json) {
        json a = json::array();
        for (const auto& b : bs) a.push_back(branch_json(b, var));
        out << json{{"normalized", nc.normalized.to_string()}, {"theta", nc.theta}, {"alpha", nc.alpha}, {"branches", a}}.dump(2)
            << "\n";
        return;
    }
    if (f == Format::Csv) {
        out << "center,q,conjugates,exponent,coefficient\n";
        for (const auto& b : bs)
            for (const auto& t : b.expansion.terms)
                out << "\"" << b.center_value.to_string() << "\"," << b.ramification << "," << b.conjugate_count << ","
                    << t.exponent.to_string() << ",\"" << t.coefficient.to_string() << "\"\n";
        return;
    }
    for (const auto& l : nc.transform_log) out << "# " << l << "\n";
    out << "branches: " << bs.size() << "\n";
    print_branches(bs, var, out);
}

inline void cmd_rho_curve(const Options& o, Format f, std::ostream& out) {
    if (o.limit.empty()) throw input_error("rho-curve needs --limit");
    auto [p, var] = load_poly(o);
    Rational lim = parse_number(o.limit, "--limit"), tol = parse_number(o.tol, "--tol");
    if (tol.sign() <= 0) throw input_error("--tol must be positive");
    auto r = rho_curve(p, Interval(lim), tol, o.terms);
    if (f == Format::Json) {
        json a = json::array(), m = json::array();
        for (const auto& b : r.branches) a.push_back(branch_json(b, var));
        for (const auto& b : r.matched) m.push_back(branch_json(b, var));
        out << json{{"limit", lim.to_string()}, {"theta", r.curve.theta}, {"branches", a}, {"matched", m}, {"rho_i", r.rho_i}}.dump(2)
            << "\n";
        return;
    }
    out << "branches: " << r.branches.size() << "\n";
    for (const auto& b : r.branches) {
        bool hit = false;
        for (const auto& m : r.matched) hit = hit || certified_equal(m.center_value, b.center_value) && m.ramification == b.ramification &&
                                                         render_series(m.expansion) == render_series(b.expansion);
        out << (hit ? "* " : "  ") << detail::branch_line(b, var) << "\n";
    }
    out << "rho_i = " << r.rho_i << "\n";
}

inline void cmd_trace(const Options& o, const SDOInstance& inst, Format f, std::ostream& out) {
    if (!(o.mu_start > 0 && o.mu_end > 0 && o.mu_end < o.mu_start)) throw input_error("need 0 < --mu-end < --mu-start");
    if (!(o.ratio > 0 && o.ratio < 1)) throw input_error("--ratio must lie in (0, 1)");
    if (o.rho < 0) throw input_error("--rho must be positive");
    const int nc = inst.coordinate_count();
    // with --rho the grid is in t and mu = t^rho
    std::vector<LD> ts, mus;
    const LD r = o.rho > 0 ? o.rho : 1;
    for (LD t = std::pow(static_cast<LD>(o.mu_start), 1 / r); std::pow(t, r) >= static_cast<LD>(o.mu_end) * (1 - 1e-12L);
         t *= static_cast<LD>(o.ratio)) {
        ts.push_back(t);
        mus.push_back(std::pow(t, r));
    }
    auto samples = central_points(inst, mus);
    if (f == Format::Json) {
        json a = json::array();
        for (std::size_t k = 0; k < samples.size(); ++k) {
            json c = json::array();
            for (LD v : samples[k].coords()) c.push_back(static_cast<double>(v));
            json row{{"mu", static_cast<double>(samples[k].mu)}};
            if (o.rho > 0) row["t"] = static_cast<double>(ts[k]);
            row["coords"] = c;
            row["residual"] = static_cast<double>(samples[k].residual);
            a.push_back(row);
        }
        json labels = json::array();
        for (int c = 0; c < nc; ++c) labels.push_back(coordinate_label(inst, c));
        out << json{{"labels", labels}, {"samples", a}}.dump(2) << "\n";
        return;
    }
    if (f == Format::Csv) {
        if (o.rho > 0) out << "t,";
        out << "mu";
        for (int c = 0; c < nc; ++c) out << ",coord_" << c;
        out << ",residual\n";
        for (std::size_t k = 0; k < samples.size(); ++k) {
            if (o.rho > 0) out << fmt(ts[k], 17) << ",";
            out << fmt(samples[k].mu, 17);
            for (LD v : samples[k].coords()) out << "," << fmt(v, 17);
            out << "," << fmt(samples[k].residual, 6) << "\n";
        }
        return;
    }
    out << "samples: " << samples.size() << "\n";
    for (std::size_t k = 0; k < samples.size(); ++k) {
        out << "mu=" << fmt(samples[k].mu);
        const auto v = samples[k].coords();
        for (int c : distinct_coordinates(inst)) out << " " << coordinate_label(inst, c) << "=" << fmt(v[c]);
        out << "\n";
    }
}

inline Route parse_route(const std::string& r) {
    if (r == "auto") return Route::Auto;
    if (r == "elimination") return Route::Elimination;
    if (r == "order-fit") return Route::OrderFit;
    throw input_error("unknown route '" + r + "'");
}

inline void cmd_rho_sdo(const Options& o, const SDOInstance& inst, Format f, std::ostream& out) {
    Route route = parse_route(o.route);
    Rational tol = parse_number(o.tol, "--tol");
    if (tol.sign() <= 0) throw input_error("--tol must be positive");
    auto trace = trace_path(inst);
    auto rep = compute_rho_sdo(inst, trace, route, tol);
    if (f == Format::Json) {
        json a = json::array();
        for (const auto& c : rep.coordinates) {
            json row{{"coordinate", c.label},
                     {"limit", static_cast<double>(c.limit)},
                     {"order", c.fit.exponent.to_string()},
                     {"raw_slope", static_cast<double>(c.fit.raw_slope)},
                     {"constant", c.constant},
                     {"heuristic", c.heuristic},
                     {"q", c.q_values},
                     {"rho_i", c.rho_i}};
            if (c.P) row["P"] = c.P->to_string();
            if (!c.note.empty()) row["note"] = c.note;
            a.push_back(row);
        }
        out << json{{"coordinates", a},
                    {"rho", rep.report.rho},
                    {"optimality", optimality_name(rep.report.optimality)},
                    {"heuristic", rep.heuristic}}
                       .dump(2)
            << "\n";
        return;
    }
    if (f == Format::Csv) {
        out << "coordinate,limit,order,raw_slope,constant,heuristic,q,rho_i\n";
        for (const auto& c : rep.coordinates) {
            std::string qs;
            for (std::size_t k = 0; k < c.q_values.size(); ++k) qs += (k ? ";" : "") + std::to_string(c.q_values[k]);
            out << c.label << "," << fmt(c.limit) << "," << c.fit.exponent.to_string() << "," << fmt(c.fit.raw_slope, 6) << ","
                << c.constant << "," << c.heuristic << "," << qs << "," << c.rho_i << "\n";
        }
        return;
    }
    for (const auto& c : rep.coordinates) {
        out << c.label << ": limit=" << fmt(c.limit) << " ";
        if (c.constant) out << "constant";
        else out << "order=" << c.fit.exponent.to_string() << " slope=" << fmt(c.fit.raw_slope, 6);
        out << " q={";
        for (std::size_t k = 0; k < c.q_values.size(); ++k) out << (k ? "," : "") << c.q_values[k];
        out << "} rho_i=" << c.rho_i;
        if (c.heuristic) out << " (order fit)";
        if (!c.note.empty() && !c.constant) out << " [" << c.note << "]";
        out << "\n";
    }
    out << "optimality: " << optimality_name(rep.report.optimality) << (rep.heuristic ? " (heuristic)" : "") << "\n";
    out << "rho = " << rep.report.rho << "\n";
}

inline void cmd_verify(const Options& o, const SDOInstance& inst, Format f, std::ostream& out) {
    if (o.rho < 1) throw input_error("verify needs --rho >= 1");
    if (!(o.window_lo > 0 && o.window_lo < o.window_hi)) throw input_error("need 0 < --window-lo < --window-hi");
    auto v = verify_reparametrization(inst, o.rho, o.window_lo, o.window_hi);
    if (f == Format::Json) {
        json a = json::array();
        for (const auto& c : v.coords) {
            json d1 = json::array();
            for (LD x : c.d1) d1.push_back(static_cast<double>(x));
            a.push_back(json{{"coordinate", coordinate_label(inst, c.index)},
                         {"bounded", c.bounded},
                         {"growth_exponent", static_cast<double>(c.growth_exponent)},
                         {"d1", d1}});
        }
        out << json{{"rho", v.rho},
                    {"bounded", v.bounded},
                    {"growth_exponent", static_cast<double>(v.growth_exponent)},
                    {"constant_derivative", v.constant_derivative},
                    {"coordinates", a}}
                       .dump(2)
            << "\n";
        return;
    }
    if (f == Format::Csv) {
        out << "t";
        for (const auto& c : v.coords) out << ",d1_" << coordinate_label(inst, c.index);
        out << "\n";
        for (std::size_t k = 0; k < v.t.size(); ++k) {
            out << fmt(v.t[k], 17);
            for (const auto& c : v.coords) out << "," << fmt(c.d1[k], 12);
            out << "\n";
        }
        return;
    }
    for (const auto& c : v.coords)
        out << coordinate_label(inst, c.index) << ": |dw/dt|=" << fmt(c.d1.back(), 6) << " growth=" << fmt(c.growth_exponent, 4)
            << (c.bounded ? " bounded" : " unbounded") << "\n";
    out << "rho = " << v.rho << "\n";
    out << "growth exponent = " << fmt(v.growth_exponent, 4) << "\n";
    out << "first derivative: " << (v.bounded ? "bounded" : "unbounded") << (v.constant_derivative ? ", constant" : "") << "\n";
}

}  // namespace detail

/// Runs one command. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Puiseux expansions, ramification indices and central-path reparametrization exponents", "crho"};
    app.require_subcommand(1, 1);
    Options o;

    auto poly_opts = [&](CLI::App* s) {
        s->add_option("--poly", o.poly, "polynomial in mu and V (aliases X, Y, T)");
        s->add_option("--poly-file", o.poly_file, "file holding the polynomial");
    };
    auto fmt_opt = [&](CLI::App* s) { s->add_option("--format", o.format, "text, json or csv"); };
    auto inst_opt = [&](CLI::App* s) {
        s->add_option("--instance", o.instance, "instance file, or elliptope, identity:N, kl02:N")->required();
    };

    auto* polygon = app.add_subcommand("polygon", "Newton polygon segments");
    poly_opts(polygon);
    fmt_opt(polygon);
    auto* ex = app.add_subcommand("expand", "Puiseux branches of a curve");
    poly_opts(ex);
    ex->add_option("--terms", o.terms, "terms past stabilization");
    fmt_opt(ex);
    auto* rc = app.add_subcommand("rho-curve", "rho for one coordinate polynomial and its limit");
    poly_opts(rc);
    rc->add_option("--limit", o.limit, "limit value of the coordinate");
    rc->add_option("--tol", o.tol, "matching tolerance");
    rc->add_option("--terms", o.terms, "terms past stabilization");
    fmt_opt(rc);
    auto* tr = app.add_subcommand("trace", "central-path samples");
    inst_opt(tr);
    tr->add_option("--mu-start", o.mu_start);
    tr->add_option("--mu-end", o.mu_end);
    tr->add_option("--ratio", o.ratio);
    tr->add_option("--rho", o.rho, "sample on t with mu = t^rho");
    fmt_opt(tr);
    auto* rs = app.add_subcommand("rho-sdo", "rho for an SDO instance");
    inst_opt(rs);
    rs->add_option("--route", o.route, "auto, elimination or order-fit");
    rs->add_option("--tol", o.tol, "matching tolerance");
    fmt_opt(rs);
    auto* ve = app.add_subcommand("verify", "derivatives after mu -> mu^rho");
    inst_opt(ve);
    ve->add_option("--rho", o.rho)->required();
    ve->add_option("--window-lo", o.window_lo);
    ve->add_option("--window-hi", o.window_hi);
    fmt_opt(ve);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: cli: " << e.what() << "\n";
        return 2;
    }

    try {
        Format f = detail::parse_format(o.format);
        if (polygon->parsed()) detail::cmd_polygon(o, f, out);
        else if (ex->parsed()) detail::cmd_expand(o, f, out);
        else if (rc->parsed()) detail::cmd_rho_curve(o, f, out);
        else {
            SDOInstance inst = detail::resolve_instance(o.instance);
            if (tr->parsed()) detail::cmd_trace(o, inst, f, out);
            else if (rs->parsed()) detail::cmd_rho_sdo(o, inst, f, out);
            else detail::cmd_verify(o, inst, f, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_input_error() ? 2 : 3;
    } catch (const std::exception& e) {
        err << "error: cli: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace crho::cli

#endif  // CRHO_CLI_HPP
