#ifndef CRHO_PARSE_HPP
#define CRHO_PARSE_HPP

// Text grammar for bivariate polynomials:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' integer)?
//   atom   := integer | variable | '(' expr ')'
// Variables `mu`, `X` stand for the parameter; `V`, `Y`, `T` for the unknown.
// Division is only allowed by nonzero constants.

#include <cctype>
#include <string>
#include <string_view>

#include "crho/errors.hpp"
#include "crho/poly.hpp"

namespace crho {

struct ParsedCurve {
    BiPoly poly;
    std::string mu_name = "mu";  // spelling used in the input, for output
    std::string v_name = "V";
};

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string_view s) : s_(s) {}

    ParsedCurve run() {
        ParsedCurve out;
        out.poly = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        if (!mu_name_.empty()) out.mu_name = mu_name_;
        if (!v_name_.empty()) out.v_name = v_name_;
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::Parse, "exact-arith", msg + " at position " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    BiPoly expr() {
        BiPoly acc = term();
        for (;;) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else return acc;
        }
    }

    BiPoly term() {
        BiPoly acc = unary();
        for (;;) {
            if (eat('*')) {
                acc = acc * unary();
            } else if (eat('/')) {
                BiPoly d = unary();
                if (d.deg_v() != 0 || d.deg_mu() != 0) fail("division by a non-constant");
                acc = acc * d.coeff(0, 0).inv();
            } else {
                return acc;
            }
        }
    }

    BiPoly unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    BiPoly power() {
        BiPoly base = atom();
        if (eat('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected a nonnegative integer exponent");
            if (pos_ - start > 4) fail("exponent too large");
            base = pow(base, static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
        }
        return base;
    }

    BiPoly atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            BiPoly e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return BiPoly::constant(Rational::parse(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            if (name == "mu" || name == "X") return bind(mu_name_, name, BiPoly::var_mu());
            if (name == "V" || name == "Y" || name == "T") return bind(v_name_, name, BiPoly::var_v());
            pos_ = start;
            fail("unknown variable '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    BiPoly bind(std::string& slot, const std::string& name, BiPoly p) {
        if (!slot.empty() && slot != name) fail("variables '" + slot + "' and '" + name + "' denote the same unknown");
        slot = name;
        return p;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::string mu_name_, v_name_;
};

}  // namespace detail

inline ParsedCurve parse_curve(std::string_view text) { return detail::PolyParser(text).run(); }

inline BiPoly parse_poly(std::string_view text) { return parse_curve(text).poly; }

}  // namespace crho

#endif  // CRHO_PARSE_HPP
