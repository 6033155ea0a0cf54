#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgroth/perm.hpp"
#include "kgroth/poly.hpp"

namespace kgroth {

using json = nlohmann::ordered_json;

inline constexpr const char* kPolySchema = "kgroth.poly/1";
inline constexpr const char* kReportSchema = "kgroth.report/1";

// Terms in canonical order; coefficients as strings so 128-bit values survive.
inline json poly_to_json(const BetaPoly& p) {
    json terms = json::array();
    for (const auto& t : p.sorted_terms()) {
        std::vector<int> ex(p.nvars(), 0);
        for (int v = 1; v <= p.nvars(); ++v) ex[v - 1] = t.x[v];
        terms.push_back({{"coeff", t.coeff.str()}, {"beta", t.beta}, {"x", ex}});
    }
    return {{"schema", kPolySchema}, {"nvars", p.nvars()}, {"terms", terms}};
}

inline BetaPoly poly_from_json(const json& j) {
    if (!j.contains("schema") || j.at("schema") != kPolySchema)
        throw std::invalid_argument("poly_from_json: expected schema " + std::string(kPolySchema));
    int nv = j.at("nvars").get<int>();
    BetaPoly p(nv);
    for (const auto& t : j.at("terms")) {
        auto ex = t.at("x").get<std::vector<int>>();
        if (static_cast<int>(ex.size()) > nv) throw std::invalid_argument("poly_from_json: exponent vector longer than nvars");
        for (int e : ex)
            if (e < 0) throw std::invalid_argument("poly_from_json: negative exponent");
        p.add_term(Monomial::from_exponents(ex), t.at("beta").get<int>(), Rational::parse(t.at("coeff").get<std::string>()));
    }
    return p;
}

inline json scalar_to_json(const BetaScalar& s) {
    json out = json::array();
    for (const auto& [e, c] : s.terms()) out.push_back({{"beta", e}, {"coeff", c.str()}});
    return out;
}

// Reads the text form written by BetaPoly::str(), e.g. "2*x1 - beta^2*x1^2*x3 + 1/2".
inline BetaPoly parse_poly(const std::string& text, int nvars = 0) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("parse_poly: empty input");
    BetaPoly p(nvars);
    std::size_t i = 0;
    auto fail = [&](const std::string& why) { throw std::invalid_argument("parse_poly: " + why + " at offset " + std::to_string(i) + " in '" + text + "'"); };
    auto read_int = [&]() {
        std::size_t st = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == st || (i == st + 1 && !std::isdigit(static_cast<unsigned char>(s[st])))) fail("expected an integer");
        return std::stoi(s.substr(st, i - st));
    };
    auto read_exp = [&]() {
        if (i < s.size() && s[i] == '^') {
            ++i;
            return read_int();
        }
        return 1;
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            fail("expected + or -");
        }
        Rational c(sign);
        Monomial m;
        int b = 0;
        bool any = false;
        while (true) {
            if (i >= s.size()) fail("dangling sign or '*'");
            if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                std::size_t st = i;
                while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
                c *= Rational::parse(s.substr(st, i - st));
            } else if (s.compare(i, 4, "beta") == 0) {
                i += 4;
                b += read_exp();
            } else if (s[i] == 'x') {
                ++i;
                int v = read_int();
                if (v < 1 || v > kMaxVars) fail("variable index out of range");
                int e = read_exp();
                if (e < 0) fail("negative x exponent");
                m.set(v, m[v] + e);
            } else {
                fail("unexpected character");
            }
            any = true;
            if (i < s.size() && s[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        if (!any) fail("empty term");
        p.add_term(m, b, c);
    }
    p.widen(nvars);
    return p;
}

inline std::string monomial_latex(const Monomial& m, int beta_exp) {
    std::string s;
    auto add = [&s](const std::string& f) {
        if (!s.empty()) s += " ";
        s += f;
    };
    if (beta_exp == 1) add("\\beta");
    else if (beta_exp != 0) add("\\beta^{" + std::to_string(beta_exp) + "}");
    for (int v = 1; v <= kMaxVars; ++v) {
        int e = m[v];
        if (e == 0) continue;
        add("x_{" + std::to_string(v) + "}" + (e == 1 ? "" : "^{" + std::to_string(e) + "}"));
    }
    return s;
}

inline std::string rational_latex(const Rational& c) {
    if (c.is_integer()) return c.str();
    Rational a = c.sign() < 0 ? -c : c;
    std::string body = "\\tfrac{" + Rational::from_i128(a.num()).str() + "}{" + Rational::from_i128(a.den()).str() + "}";
    return c.sign() < 0 ? "-" + body : body;
}

inline std::string poly_latex(const BetaPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.sorted_terms()) {
        Rational c = t.coeff;
        if (!first) {
            out += c.sign() < 0 ? " - " : " + ";
            if (c.sign() < 0) c = -c;
        } else if (c.sign() < 0) {
            out += "-";
            c = -c;
        }
        first = false;
        std::string ms = monomial_latex(t.x, t.beta);
        if (ms.empty()) out += rational_latex(c);
        else if (c == Rational(1)) out += ms;
        else out += rational_latex(c) + " " + ms;
    }
    return out;
}

// prod over cells (i,j) of x_i (+) x_j, the form of every dominant class.
inline std::string oplus_product_latex(const Diagram& d) {
    if (d.empty()) return "1";
    std::string out;
    for (const auto& c : d) out += "(x_{" + std::to_string(c.row) + "} \\oplus x_{" + std::to_string(c.col) + "})";
    return out;
}

inline std::string oplus_product_text(const Diagram& d) {
    if (d.empty()) return "1";
    std::string out;
    for (const auto& c : d) out += "(x" + std::to_string(c.row) + " (+) x" + std::to_string(c.col) + ")";
    return out;
}

inline json diagram_to_json(const Diagram& d) {
    json out = json::array();
    for (const auto& c : d) out.push_back({c.row, c.col});
    return out;
}

}  // namespace kgroth
