#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgroth/rational.hpp"

namespace kgroth {

// Laurent polynomial in beta with rational coefficients.
class BetaScalar {
public:
    BetaScalar() = default;
    BetaScalar(Rational c, int beta_exp = 0) {  // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) terms_[beta_exp] = c;
    }
    static BetaScalar beta_pow(int e) { return BetaScalar(Rational(1), e); }

    const std::map<int, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coeff(int e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    void add_term(int e, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    BetaScalar& operator+=(const BetaScalar& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    BetaScalar& operator-=(const BetaScalar& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    BetaScalar operator-() const {
        BetaScalar r;
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }
    friend BetaScalar operator+(BetaScalar a, const BetaScalar& b) { return a += b; }
    friend BetaScalar operator-(BetaScalar a, const BetaScalar& b) { return a -= b; }
    friend BetaScalar operator*(const BetaScalar& a, const BetaScalar& b) {
        BetaScalar r;
        for (const auto& [e1, c1] : a.terms_)
            for (const auto& [e2, c2] : b.terms_) r.add_term(e1 + e2, c1 * c2);
        return r;
    }
    BetaScalar& operator*=(const BetaScalar& o) { return *this = *this * o; }
    friend bool operator==(const BetaScalar& a, const BetaScalar& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BetaScalar& a, const BetaScalar& b) { return !(a == b); }

    // True when every coefficient is a nonnegative integer and every power is >= 0.
    bool in_N_beta() const {
        for (const auto& [e, c] : terms_)
            if (e < 0 || !c.is_integer() || c.sign() < 0) return false;
        return true;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            std::string cs = c.str();
            if (!first) {
                if (c.sign() < 0) {
                    os << " - ";
                    cs = (-c).str();
                } else {
                    os << " + ";
                }
            }
            first = false;
            if (e == 0) {
                os << cs;
                continue;
            }
            if (cs == "-1") os << "-";
            else if (cs != "1") os << cs << "*";
            os << "beta";
            if (e != 1) os << "^" << e;
        }
        return os.str();
    }

private:
    std::map<int, Rational> terms_;
};

inline constexpr int kMaxVars = 16;

// Exponent vector of x_1..x_16. Index 0 holds the exponent of x_1.
struct Monomial {
    std::array<std::uint8_t, kMaxVars> e{};

    int operator[](int var) const { return e[var - 1]; }
    void set(int var, int exp) {
        if (var < 1 || var > kMaxVars) throw std::out_of_range("monomial: variable index out of range");
        if (exp < 0 || exp > 255) throw std::overflow_error("monomial: exponent out of range");
        e[var - 1] = static_cast<std::uint8_t>(exp);
    }
    int degree() const {
        int d = 0;
        for (auto v : e) d += v;
        return d;
    }
    int max_var() const {
        for (int i = kMaxVars; i >= 1; --i)
            if (e[i - 1] != 0) return i;
        return 0;
    }
    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r;
        for (int i = 0; i < kMaxVars; ++i) {
            int s = a.e[i] + b.e[i];
            if (s > 255) throw std::overflow_error("monomial: exponent overflow");
            r.e[i] = static_cast<std::uint8_t>(s);
        }
        return r;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

    static Monomial var(int i, int exp = 1) {
        Monomial m;
        m.set(i, exp);
        return m;
    }
    static Monomial from_exponents(const std::vector<int>& exps) {
        Monomial m;
        for (std::size_t i = 0; i < exps.size(); ++i) m.set(static_cast<int>(i) + 1, exps[i]);
        return m;
    }
};

// Canonical term order: total x-degree ascending, then exponent vectors
// lexicographically descending (x_1 heaviest first), then beta ascending.
inline int compare_monomials(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db ? -1 : 1;
    for (int i = 0; i < kMaxVars; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? -1 : 1;
    return 0;
}

struct TermKey {
    Monomial x;
    int beta = 0;
    friend bool operator==(const TermKey& a, const TermKey& b) { return a.beta == b.beta && a.x == b.x; }
};

inline bool term_less(const TermKey& a, const TermKey& b) {
    int c = compare_monomials(a.x, b.x);
    if (c != 0) return c < 0;
    return a.beta < b.beta;
}

struct TermKeyHash {
    std::size_t operator()(const TermKey& k) const noexcept {
        std::uint64_t w[2];
        std::memcpy(w, k.x.e.data(), sizeof(w));
        std::uint64_t h = w[0] * 0x9E3779B97F4A7C15ULL;
        h ^= (w[1] + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2)) * 0xC2B2AE3D27D4EB4FULL;
        h ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(k.beta)) * 0x165667B19E3779F9ULL;
        h ^= h >> 29;
        return static_cast<std::size_t>(h);
    }
};

struct Term {
    Monomial x;
    int beta;
    Rational coeff;
};

// Sparse polynomial in x_1..x_nvars with Laurent-in-beta rational
// coefficients. Stored flat, keyed by (x-monomial, beta power).
class BetaPoly {
public:
    using Map = std::unordered_map<TermKey, Rational, TermKeyHash>;

    BetaPoly() = default;
    explicit BetaPoly(int nvars) : nvars_(nvars) { check_nvars(nvars); }

    static BetaPoly constant(const Rational& c, int nvars = 0) {
        BetaPoly p(nvars);
        p.add_term(Monomial{}, 0, c);
        return p;
    }
    static BetaPoly constant(const BetaScalar& c, int nvars = 0) {
        BetaPoly p(nvars);
        for (const auto& [e, r] : c.terms()) p.add_term(Monomial{}, e, r);
        return p;
    }
    static BetaPoly one(int nvars = 0) { return constant(Rational(1), nvars); }
    static BetaPoly var(int i, int nvars = 0) {
        BetaPoly p(std::max(nvars, i));
        p.add_term(Monomial::var(i), 0, Rational(1));
        return p;
    }
    static BetaPoly beta(int e = 1, int nvars = 0) {
        BetaPoly p(nvars);
        p.add_term(Monomial{}, e, Rational(1));
        return p;
    }
    static BetaPoly monomial(const Monomial& m, int beta_exp = 0, const Rational& c = Rational(1), int nvars = 0) {
        BetaPoly p(std::max(nvars, m.max_var()));
        p.add_term(m, beta_exp, c);
        return p;
    }

    int nvars() const { return nvars_; }
    void widen(int n) {
        check_nvars(n);
        nvars_ = std::max(nvars_, n);
    }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Map& raw() const { return terms_; }
    void reserve(std::size_t n) { terms_.reserve(n); }

    void add_term(const Monomial& m, int beta_exp, const Rational& c) {
        if (c.is_zero()) return;
        int mv = m.max_var();
        if (mv > nvars_) nvars_ = mv;
        auto [it, inserted] = terms_.try_emplace(TermKey{m, beta_exp}, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Rational coeff(const Monomial& m, int beta_exp) const {
        auto it = terms_.find(TermKey{m, beta_exp});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    BetaScalar coefficient(const Monomial& m) const {
        BetaScalar s;
        for (const auto& [k, c] : terms_)
            if (k.x == m) s.add_term(k.beta, c);
        return s;
    }

    std::vector<Term> sorted_terms() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [k, c] : terms_) out.push_back(Term{k.x, k.beta, c});
        std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
            return term_less(TermKey{a.x, a.beta}, TermKey{b.x, b.beta});
        });
        return out;
    }

    BetaPoly& operator+=(const BetaPoly& o) {
        widen(o.nvars_);
        for (const auto& [k, c] : o.terms_) add_term(k.x, k.beta, c);
        return *this;
    }
    BetaPoly& operator-=(const BetaPoly& o) {
        widen(o.nvars_);
        for (const auto& [k, c] : o.terms_) add_term(k.x, k.beta, -c);
        return *this;
    }
    BetaPoly operator-() const {
        BetaPoly r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }
    friend BetaPoly operator+(BetaPoly a, const BetaPoly& b) { return a += b; }
    friend BetaPoly operator-(BetaPoly a, const BetaPoly& b) { return a -= b; }
    friend BetaPoly operator*(const BetaPoly& a, const BetaPoly& b) { return mul_trunc(a, b, -1); }
    BetaPoly& operator*=(const BetaPoly& o) { return *this = *this * o; }

    BetaPoly scaled(const Rational& c, int beta_shift = 0) const {
        BetaPoly r(nvars_);
        if (c.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& [k, v] : terms_) r.terms_.emplace(TermKey{k.x, k.beta + beta_shift}, v * c);
        return r;
    }
    BetaPoly scaled(const BetaScalar& s) const {
        BetaPoly r(nvars_);
        for (const auto& [e, c] : s.terms()) r += scaled(c, e);
        return r;
    }
    BetaPoly times_monomial(const Monomial& m, int beta_shift = 0) const {
        BetaPoly r(std::max(nvars_, m.max_var()));
        r.terms_.reserve(terms_.size());
        for (const auto& [k, v] : terms_) r.terms_.emplace(TermKey{k.x * m, k.beta + beta_shift}, v);
        return r;
    }

    // Product keeping only terms of total x-degree <= bound (bound < 0: exact).
    static BetaPoly mul_trunc(const BetaPoly& a, const BetaPoly& b, int bound) {
        BetaPoly r(std::max(a.nvars_, b.nvars_));
        if (a.is_zero() || b.is_zero()) return r;
        const BetaPoly& big = a.size() >= b.size() ? a : b;
        const BetaPoly& small = a.size() >= b.size() ? b : a;
        struct Flat {
            Monomial x;
            int beta;
            int deg;
            Rational c;
        };
        std::vector<Flat> bs;
        bs.reserve(big.size());
        for (const auto& [k, c] : big.terms_) bs.push_back(Flat{k.x, k.beta, k.x.degree(), c});
        std::sort(bs.begin(), bs.end(), [](const Flat& p, const Flat& q) { return p.deg < q.deg; });
        r.terms_.reserve(std::min<std::size_t>(a.size() * b.size(), 1u << 22));
        for (const auto& [k, c] : small.terms_) {
            int d = k.x.degree();
            if (bound >= 0 && d > bound) continue;
            for (const auto& f : bs) {
                if (bound >= 0 && f.deg + d > bound) break;
                r.add_term(k.x * f.x, k.beta + f.beta, c * f.c);
            }
        }
        return r;
    }

    BetaPoly pow(int e) const {
        if (e < 0) throw std::domain_error("poly: negative power");
        BetaPoly r = one(nvars_);
        for (int i = 0; i < e; ++i) r *= *this;
        return r;
    }

    BetaPoly truncated(int bound) const {
        BetaPoly r(nvars_);
        for (const auto& [k, c] : terms_)
            if (k.x.degree() <= bound) r.terms_.emplace(k, c);
        return r;
    }
    BetaPoly homogeneous_part(int deg) const {
        BetaPoly r(nvars_);
        for (const auto& [k, c] : terms_)
            if (k.x.degree() == deg) r.terms_.emplace(k, c);
        return r;
    }

    int max_degree() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.x.degree());
        return d;
    }
    int min_degree() const {
        int d = -1;
        for (const auto& [k, c] : terms_) {
            int kd = k.x.degree();
            if (d < 0 || kd < d) d = kd;
        }
        return d;
    }
    int min_beta() const {
        int b = 0;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (first || k.beta < b) b = k.beta;
            first = false;
        }
        return b;
    }
    int max_beta() const {
        int b = 0;
        for (const auto& [k, c] : terms_) b = std::max(b, k.beta);
        return b;
    }
    int degree_in(int var) const {
        int d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.x[var]);
        return d;
    }

    // beta -> value; negative powers require a nonzero value.
    BetaPoly specialize_beta(const Rational& v) const {
        BetaPoly r(nvars_);
        for (const auto& [k, c] : terms_) {
            Rational f(1);
            int e = k.beta;
            if (e < 0 && v.is_zero()) throw std::domain_error("poly: specializing a negative beta power at 0");
            for (int i = 0; i < std::abs(e); ++i) f *= v;
            if (e < 0) f = Rational(1) / f;
            r.add_term(k.x, 0, c * f);
        }
        return r;
    }

    // x_var -> g.
    BetaPoly substitute(int var, const BetaPoly& g) const {
        BetaPoly r(std::max(nvars_, g.nvars_));
        std::vector<BetaPoly> powers{one(g.nvars_)};
        for (const auto& [k, c] : terms_) {
            int e = k.x[var];
            Monomial rest = k.x;
            rest.set(var, 0);
            while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * g);
            r += powers[e].times_monomial(rest, k.beta).scaled(c);
        }
        return r;
    }

    // Apply the transposition x_i <-> x_j to the variables.
    BetaPoly swap_vars(int i, int j) const {
        BetaPoly r(std::max({nvars_, i, j}));
        r.terms_.reserve(terms_.size());
        for (const auto& [k, c] : terms_) {
            Monomial m = k.x;
            std::swap(m.e[i - 1], m.e[j - 1]);
            r.terms_.emplace(TermKey{m, k.beta}, c);
        }
        return r;
    }

    bool is_symmetric_in(int i, int j) const { return swap_vars(i, j) == *this; }

    // Integer coefficients and nonnegative beta powers.
    bool is_finalized() const {
        for (const auto& [k, c] : terms_)
            if (k.beta < 0 || !c.is_integer()) return false;
        return true;
    }
    bool has_nonnegative_coefficients() const {
        for (const auto& [k, c] : terms_)
            if (c.sign() < 0) return false;
        return true;
    }
    void assert_finalized(const char* what) const {
        if (!is_finalized())
            throw std::logic_error(std::string(what) + ": result has non-integral coefficients or negative beta powers");
    }

    friend bool operator==(const BetaPoly& a, const BetaPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BetaPoly& a, const BetaPoly& b) { return !(a == b); }

    std::string str() const;

private:
    static void check_nvars(int n) {
        if (n < 0 || n > kMaxVars) throw std::out_of_range("poly: at most 16 variables are supported");
    }

    Map terms_;
    int nvars_ = 0;
};

inline std::string monomial_str(const Monomial& m, int beta_exp) {
    std::string s;
    auto add = [&s](const std::string& f) {
        if (!s.empty()) s += "*";
        s += f;
    };
    if (beta_exp != 0) add(beta_exp == 1 ? "beta" : "beta^" + std::to_string(beta_exp));
    for (int v = 1; v <= kMaxVars; ++v) {
        int e = m[v];
        if (e == 0) continue;
        add("x" + std::to_string(v) + (e == 1 ? "" : "^" + std::to_string(e)));
    }
    return s;
}

inline std::string BetaPoly::str() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : sorted_terms()) {
        Rational c = t.coeff;
        if (!first) {
            out += c.sign() < 0 ? " - " : " + ";
            if (c.sign() < 0) c = -c;
        } else if (c.sign() < 0) {
            out += "-";
            c = -c;
        }
        first = false;
        std::string ms = monomial_str(t.x, t.beta);
        if (ms.empty()) out += c.str();
        else if (c == Rational(1)) out += ms;
        else out += c.str() + "*" + ms;
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const BetaPoly& p) { return os << p.str(); }
inline std::ostream& operator<<(std::ostream& os, const BetaScalar& s) { return os << s.str(); }

inline BetaPoly x(int i) { return BetaPoly::var(i); }

// x (+) y = x + y + beta x y.
inline BetaPoly oplus(const BetaPoly& f, const BetaPoly& g) { return f + g + (f * g).scaled(Rational(1), 1); }

// Geometric expansion of 1/(1 + beta g) up to x-degree bound (g must have no constant term).
inline BetaPoly inverse_one_plus_beta(const BetaPoly& g, int bound) {
    if (!g.coefficient(Monomial{}).is_zero()) throw std::domain_error("inverse_one_plus_beta: g has a constant term");
    BetaPoly r = BetaPoly::one(g.nvars());
    BetaPoly p = BetaPoly::one(g.nvars());
    BetaPoly mbg = g.scaled(Rational(-1), 1);
    for (int k = 1; k <= bound; ++k) {
        p = BetaPoly::mul_trunc(p, mbg, bound);
        if (p.is_zero()) break;
        r += p;
    }
    return r.truncated(bound);
}

// x (-) y = (x - y)/(1 + beta y), truncated.
inline BetaPoly ominus(const BetaPoly& f, const BetaPoly& g, int bound) {
    return BetaPoly::mul_trunc(f - g, inverse_one_plus_beta(g, bound), bound);
}

// xbar = -x/(1 + beta x), truncated.
inline BetaPoly bar(const BetaPoly& f, int bound) { return ominus(BetaPoly(f.nvars()), f, bound); }

// d_i f = (f - s_i f)/(x_i - x_{i+1}) by synthetic division in x_i.
inline BetaPoly divided_difference(const BetaPoly& f, int i) {
    if (i < 1 || i + 1 > kMaxVars) throw std::out_of_range("divided_difference: bad index");
    BetaPoly g = f - f.swap_vars(i, i + 1);
    // Group g by the exponent of x_i: g = sum_k g_k x_i^k.
    std::map<int, BetaPoly> by_exp;
    for (const auto& [k, c] : g.raw()) {
        Monomial rest = k.x;
        int e = rest[i];
        rest.set(i, 0);
        by_exp[e].add_term(rest, k.beta, c);
    }
    BetaPoly q(std::max(f.nvars(), i + 1));
    if (by_exp.empty()) return q;
    int d = by_exp.rbegin()->first;
    // Quotient coefficients q_{k-1} = g_k + x_{i+1} q_k, from the top down.
    BetaPoly carry(f.nvars());
    Monomial xj = Monomial::var(i + 1);
    for (int k = d; k >= 1; --k) {
        BetaPoly qk = carry;
        auto it = by_exp.find(k);
        if (it != by_exp.end()) qk += it->second;
        q += qk.times_monomial(Monomial::var(i, k - 1));
        carry = qk.times_monomial(xj);
    }
    BetaPoly rem = carry;
    auto it0 = by_exp.find(0);
    if (it0 != by_exp.end()) rem += it0->second;
    if (!rem.is_zero()) throw std::logic_error("divided_difference: division by x_i - x_{i+1} is not exact");
    q.widen(std::max(f.nvars(), i + 1));
    return q;
}

// d_i^(beta) f = d_i((1 + beta x_{i+1}) f).
inline BetaPoly beta_divided_difference(const BetaPoly& f, int i) {
    BetaPoly h = f + f.times_monomial(Monomial::var(i + 1), 1);
    return divided_difference(h, i);
}

// Greedy triangular expansion in a graded basis. The lookup returns, for a
// candidate leading monomial, the basis index and element (or nothing).
template <class Index>
struct Expansion {
    std::vector<std::pair<Index, BetaScalar>> coefficients;
    BetaPoly remainder;
    bool complete = false;        // remainder is zero
    bool not_in_span = false;     // a minimal monomial had no basis match
    bool cap_hit = false;         // stopped at the degree or step cap
    Monomial unmatched;           // the offending monomial when not_in_span
};

using TermOrder = bool (*)(const TermKey&, const TermKey&);

// Degree ascending, then exponent vectors lexicographically ascending: the
// code monomial is the minimal term of a Schubert or Grothendieck polynomial.
inline bool code_term_less(const TermKey& a, const TermKey& b) {
    int da = a.x.degree(), db = b.x.degree();
    if (da != db) return da < db;
    if (a.x.e != b.x.e) return a.x.e < b.x.e;
    return a.beta < b.beta;
}

template <class Index, class Lookup>
Expansion<Index> expand_in_graded_basis(const BetaPoly& target, Lookup lookup, int max_degree, std::size_t max_steps = 100000,
                                        TermOrder less = term_less) {
    Expansion<Index> out;
    BetaPoly rem = max_degree >= 0 ? target.truncated(max_degree) : target;
    std::map<Index, BetaScalar> acc;
    std::size_t steps = 0;
    while (!rem.is_zero()) {
        // Order-minimal term of the remainder.
        const TermKey* best = nullptr;
        for (const auto& [k, c] : rem.raw())
            if (best == nullptr || less(k, *best)) best = &k;
        TermKey lead = *best;
        if (++steps > max_steps) {
            out.cap_hit = true;
            break;
        }
        auto hit = lookup(lead.x);
        if (!hit) {
            out.not_in_span = true;
            out.unmatched = lead.x;
            break;
        }
        const auto& [idx, elem] = *hit;
        Rational lc = elem.coeff(lead.x, 0);
        if (lc.is_zero()) throw std::logic_error("expand_in_graded_basis: basis element lacks its leading monomial");
        Rational c = rem.coeff(lead.x, lead.beta) / lc;
        BetaPoly sub = elem.scaled(c, lead.beta);
        if (max_degree >= 0) sub = sub.truncated(max_degree);
        rem -= sub;
        acc[idx].add_term(lead.beta, c);
        if (acc[idx].is_zero()) acc.erase(idx);
    }
    for (auto& [i, c] : acc) out.coefficients.emplace_back(i, c);
    out.remainder = rem;
    out.complete = rem.is_zero();
    return out;
}

}  // namespace kgroth
