#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kgroth/perm.hpp"
#include "kgroth/poly.hpp"

namespace kgroth {

// ---------------------------------------------------------------------------
// Formal linear combinations of monomials c_{d_1}^{(1)} ... c_{d_r}^{(r)}.
// A subscript of -1 means the monomial has no factor with that superscript.

class RaisingExpr {
public:
    using Key = std::vector<int>;

    RaisingExpr() = default;
    explicit RaisingExpr(int r) : r_(r) {}

    // coeff * prod_i c_{subs[i]}^{(i+1)}
    static RaisingExpr monomial(const Key& subs, const BetaScalar& coeff = BetaScalar(Rational(1))) {
        RaisingExpr e(static_cast<int>(subs.size()));
        e.add(subs, coeff);
        return e;
    }

    int r() const { return r_; }
    const std::map<Key, BetaScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Key& k, const BetaScalar& c) {
        if (static_cast<int>(k.size()) != r_) throw std::invalid_argument("raising: superscript count mismatch");
        if (c.is_zero()) return;
        auto [it, ins] = terms_.try_emplace(k, c);
        if (!ins) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    RaisingExpr& operator+=(const RaisingExpr& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    friend bool operator==(const RaisingExpr& a, const RaisingExpr& b) { return a.terms_ == b.terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            s += "(" + c.str() + ")";
            for (int i = 0; i < r_; ++i)
                if (k[i] >= 0) s += "*c" + std::to_string(k[i]) + "^(" + std::to_string(i + 1) + ")";
        }
        return s;
    }

private:
    int r_ = 0;
    std::map<Key, BetaScalar> terms_;
};

inline int subscript_sum(const RaisingExpr::Key& k) {
    int s = 0;
    for (int d : k)
        if (d > 0) s += d;
    return s;
}

// (T^(i))^power. Monomials without an i-factor are annihilated; negative
// powers annihilate once the subscript would drop below zero.
inline RaisingExpr apply_T(const RaisingExpr& e, int i, int power) {
    if (power == 0) return e;
    RaisingExpr out(e.r());
    for (const auto& [k, c] : e.terms()) {
        if (k[i - 1] < 0) continue;
        int d = k[i - 1] + power;
        if (d < 0) continue;
        RaisingExpr::Key k2 = k;
        k2[i - 1] = d;
        out.add(k2, c);
    }
    return out;
}

// (1 - beta T^(i))^exponent; negative exponents need a cap on the subscript sum.
inline RaisingExpr apply_one_minus_betaT(const RaisingExpr& e, int i, int exponent, int cap = -1) {
    if (exponent < 0 && cap < 0) throw std::invalid_argument("apply_one_minus_betaT: negative exponent needs a subscript cap");
    RaisingExpr out(e.r());
    for (const auto& [k, c] : e.terms()) {
        out.add(k, c);
        if (k[i - 1] < 0) continue;
        int base = subscript_sum(k);
        for (int t = 1;; ++t) {
            Rational coef;
            if (exponent >= 0) {
                if (t > exponent) break;
                coef = binomial(exponent, t) * Rational(t % 2 == 0 ? 1 : -1);
            } else {
                if (base + t > cap) break;
                coef = binomial(-exponent + t - 1, t);
            }
            if (cap >= 0 && base + t > cap) break;
            RaisingExpr::Key k2 = k;
            k2[i - 1] += t;
            out.add(k2, c * BetaScalar(coef, t));
        }
    }
    return out;
}

// Coefficient of (beta T_i)^k (T_i/T_j)^l in R^(i,j).
inline Rational R_coefficient(int k, int l) {
    if (l == 0) return Rational(1);
    Rational s = binomial(k + l - 1, k) + binomial(k + l, k);
    return l % 2 == 0 ? s : -s;
}

// R^(i,j) expanded as a double series in beta T^(i) and T^(i)/T^(j).
inline RaisingExpr apply_R(const RaisingExpr& e, int i, int j, int cap) {
    RaisingExpr out(e.r());
    for (const auto& [key, c] : e.terms()) {
        out.add(key, c);  // k = l = 0
        int a = key[i - 1], b = key[j - 1];
        if (a < 0) continue;
        int base = subscript_sum(key);
        int lmax = b < 0 ? 0 : b;
        for (int l = 0; l <= lmax; ++l)
            for (int k = (l == 0 ? 1 : 0); base + k <= cap; ++k) {
                RaisingExpr::Key k2 = key;
                k2[i - 1] = a + k + l;
                if (l > 0) k2[j - 1] = b - l;
                out.add(k2, c * BetaScalar(R_coefficient(k, l), k));
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// c(t) = prod_{m in num} (1 + x_m t) / prod_{m in den} (1 + xbar_m t).

class CSeries {
public:
    CSeries() = default;
    CSeries(std::vector<int> num, std::vector<int> den) : num_(std::move(num)), den_(std::move(den)) {}
    // prod_{m <= p}(1 + x_m t) / prod_{m <= q}(1 + xbar_m t)
    static CSeries flagged(int p, int q) {
        std::vector<int> a, b;
        for (int m = 1; m <= p; ++m) a.push_back(m);
        for (int m = 1; m <= q; ++m) b.push_back(m);
        return CSeries(a, b);
    }
    static CSeries trivial() { return CSeries(); }

    const std::vector<int>& num() const { return num_; }
    const std::vector<int>& den() const { return den_; }
    bool is_trivial() const { return num_.empty() && den_.empty(); }
    int nvars() const {
        int n = 0;
        for (int m : num_) n = std::max(n, m);
        for (int m : den_) n = std::max(n, m);
        return n;
    }

    // c_0..c_D, each truncated at x-degree D.
    std::vector<BetaPoly> coefficients(int D) const {
        std::lock_guard lock(cache_->mu);
        auto it = cache_->by_degree.find(D);
        if (it != cache_->by_degree.end()) return it->second;
        auto v = compute(D);
        cache_->by_degree.emplace(D, v);
        return v;
    }

    std::string str() const {
        std::string s = "prod(1+x_m t : m in {";
        for (std::size_t i = 0; i < num_.size(); ++i) s += (i ? "," : "") + std::to_string(num_[i]);
        s += "}) / prod(1+xbar_m t : m in {";
        for (std::size_t i = 0; i < den_.size(); ++i) s += (i ? "," : "") + std::to_string(den_[i]);
        return s + "})";
    }

private:
    std::vector<BetaPoly> compute(int D) const {
        int nv = nvars();
        std::vector<BetaPoly> s(D + 1, BetaPoly(nv));
        s[0] = BetaPoly::one(nv);
        for (int m : num_) {
            for (int d = D; d >= 1; --d) s[d] += BetaPoly::mul_trunc(s[d - 1], x(m), D);
        }
        for (int m : den_) {
            // t^k coefficient of 1/(1 + xbar t) is x^k (1 + beta x)^{-k}.
            std::vector<BetaPoly> f(D + 1, BetaPoly(nv));
            f[0] = BetaPoly::one(nv);
            for (int k = 1; k <= D; ++k)
                for (int j = 0; k + j <= D; ++j) {
                    Rational c = binomial(k + j - 1, j);
                    if (j % 2 == 1) c = -c;
                    f[k].add_term(Monomial::var(m, k + j), j, c);
                }
            std::vector<BetaPoly> ns(D + 1, BetaPoly(nv));
            for (int d = 0; d <= D; ++d)
                for (int k = 0; k <= d; ++k) {
                    if (s[d - k].is_zero()) continue;
                    ns[d] += BetaPoly::mul_trunc(s[d - k], f[k], D);
                }
            s = std::move(ns);
        }
        return s;
    }

    struct Cache {
        std::mutex mu;
        std::map<int, std::vector<BetaPoly>> by_degree;
    };
    std::vector<int> num_, den_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

namespace detail {

// Evaluate terms, grouping by the superscript with fewest distinct subscripts.
inline BetaPoly evaluate_group(const std::vector<std::pair<RaisingExpr::Key, BetaScalar>>& terms,
                               const std::vector<std::vector<BetaPoly>>& coeffs, std::vector<bool> used, int D, int nv) {
    BetaPoly out(nv);
    if (terms.empty()) return out;
    int best = -1;
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < used.size(); ++i) {
        if (used[i]) continue;
        std::set<int> vals;
        for (const auto& [k, c] : terms) vals.insert(k[i]);
        if (vals.size() == 1 && *vals.begin() < 0) {
            used[i] = true;
            continue;
        }
        if (best < 0 || vals.size() < best_count) {
            best = static_cast<int>(i);
            best_count = vals.size();
        }
    }
    if (best < 0) {
        for (const auto& [k, c] : terms) out += BetaPoly::constant(c, nv);
        return out;
    }
    std::map<int, std::vector<std::pair<RaisingExpr::Key, BetaScalar>>> groups;
    for (const auto& t : terms) groups[t.first[best]].push_back(t);
    used[best] = true;
    for (const auto& [d, sub] : groups) {
        if (d < 0) {
            out += evaluate_group(sub, coeffs, used, D, nv);
            continue;
        }
        if (d > D) continue;
        BetaPoly inner = evaluate_group(sub, coeffs, used, D - d, nv);
        if (inner.is_zero()) continue;
        out += BetaPoly::mul_trunc(coeffs[best][d], inner, D);
    }
    return out.truncated(D);
}

}  // namespace detail

// Degree-<=D truncation of the expression with c_d^(i) taken from series[i-1].
inline BetaPoly evaluate(const RaisingExpr& e, const std::vector<CSeries>& series, int D) {
    if (static_cast<int>(series.size()) != e.r()) throw std::invalid_argument("evaluate: one series per superscript required");
    int nv = 0;
    for (const auto& s : series) nv = std::max(nv, s.nvars());
    std::vector<std::vector<BetaPoly>> coeffs;
    for (const auto& s : series) coeffs.push_back(s.coefficients(D));
    std::vector<std::pair<RaisingExpr::Key, BetaScalar>> terms;
    for (const auto& [k, c] : e.terms())
        if (subscript_sum(k) <= D) terms.emplace_back(k, c);
    return detail::evaluate_group(terms, coeffs, std::vector<bool>(e.r(), false), D, nv);
}

// ---------------------------------------------------------------------------
// Skew-symmetric matrices and Pfaffians.

template <class T>
class SkewMatrix {
public:
    SkewMatrix(int r, T zero) : r_(r), zero_(zero), upper_(r * r, zero) {
        if (r % 2 != 0) throw std::invalid_argument("pfaffian: matrix size must be even");
    }
    int size() const { return r_; }
    void set(int i, int j, const T& v) {
        if (!(i < j)) throw std::invalid_argument("skew matrix: set entries with i < j");
        upper_[(i - 1) * r_ + (j - 1)] = v;
    }
    const T& upper(int i, int j) const { return upper_[(i - 1) * r_ + (j - 1)]; }
    T at(int i, int j) const {
        if (i == j) return zero_;
        if (i < j) return upper(i, j);
        return -upper(j, i);
    }
    const T& zero() const { return zero_; }

private:
    int r_;
    T zero_;
    std::vector<T> upper_;
};

namespace detail {

template <class T, class Mul>
T pfaffian_rec(const SkewMatrix<T>& M, std::vector<int>& rows, const T& one, Mul& mul) {
    if (rows.empty()) return one;
    int first = rows.front();
    T acc = M.zero();
    bool have = false;
    for (std::size_t t = 1; t < rows.size(); ++t) {
        const T& a = M.upper(first, rows[t]);
        std::vector<int> rest;
        for (std::size_t u = 1; u < rows.size(); ++u)
            if (u != t) rest.push_back(rows[u]);
        T sub = pfaffian_rec(M, rest, one, mul);
        T prod = mul(a, sub);
        if (!have) {
            acc = (t % 2 == 1) ? prod : -prod;
            have = true;
        } else if (t % 2 == 1) {
            acc = acc + prod;
        } else {
            acc = acc - prod;
        }
    }
    return acc;
}

}  // namespace detail

// Expansion along the first row.
template <class T, class Mul>
T pfaffian(const SkewMatrix<T>& M, const T& one, Mul mul) {
    std::vector<int> rows;
    for (int i = 1; i <= M.size(); ++i) rows.push_back(i);
    return detail::pfaffian_rec(M, rows, one, mul);
}

template <class T>
T pfaffian(const SkewMatrix<T>& M, const T& one) {
    return pfaffian(M, one, [](const T& a, const T& b) { return a * b; });
}

// Signed sum over fixed-point-free involutions.
template <class T>
T pfaffian_combinatorial(const SkewMatrix<T>& M, const T& one) {
    T acc = M.zero();
    if (M.size() == 0) return one;
    for (const auto& z : fpf_involutions(M.size())) {
        T prod = one;
        for (int i = 1; i <= M.size(); ++i)
            if (z(i) < i) prod = prod * M.at(z(i), i);
        acc = fpf_length(z) % 2 == 0 ? acc + prod : acc - prod;
    }
    return acc;
}

template <class T>
T determinant(const std::vector<std::vector<T>>& A, const T& zero, const T& one) {
    int n = static_cast<int>(A.size());
    if (n == 0) return one;
    std::vector<int> cols(n);
    for (int i = 0; i < n; ++i) cols[i] = i;
    std::map<std::vector<int>, T> memo;
    std::function<T(int, const std::vector<int>&)> rec = [&](int row, const std::vector<int>& avail) -> T {
        if (avail.empty()) return one;
        auto it = memo.find(avail);
        if (it != memo.end()) return it->second;
        T acc = zero;
        for (std::size_t t = 0; t < avail.size(); ++t) {
            std::vector<int> rest = avail;
            rest.erase(rest.begin() + t);
            T term = A[row][avail[t]] * rec(row + 1, rest);
            acc = (t % 2 == 0) ? acc + term : acc - term;
        }
        memo.emplace(avail, acc);
        return acc;
    };
    return rec(0, cols);
}

// ---------------------------------------------------------------------------
// Exponential-polynomial expressions sum coeff * prod_j D_j^{m_j} e^{f_j beta D_j}.

class DExpr {
public:
    struct Key {
        std::vector<int> m;
        std::vector<int> f;
        friend bool operator<(const Key& a, const Key& b) { return a.m != b.m ? a.m < b.m : a.f < b.f; }
        friend bool operator==(const Key& a, const Key& b) { return a.m == b.m && a.f == b.f; }
    };

    DExpr() = default;
    explicit DExpr(int nvars) : nvars_(nvars) {}

    static DExpr term(int nvars, const std::vector<int>& m, const std::vector<int>& f, const BetaScalar& c) {
        DExpr e(nvars);
        e.add(Key{m, f}, c);
        return e;
    }
    static DExpr constant(int nvars, const BetaScalar& c) {
        return term(nvars, std::vector<int>(nvars, 0), std::vector<int>(nvars, 0), c);
    }

    int nvars() const { return nvars_; }
    const std::map<Key, BetaScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Key& k, const BetaScalar& c) {
        if (c.is_zero()) return;
        auto [it, ins] = terms_.try_emplace(k, c);
        if (!ins) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    DExpr& operator+=(const DExpr& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    DExpr& operator-=(const DExpr& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend DExpr operator+(DExpr a, const DExpr& b) { return a += b; }
    friend DExpr operator-(DExpr a, const DExpr& b) { return a -= b; }
    DExpr operator-() const {
        DExpr r(nvars_);
        for (const auto& [k, c] : terms_) r.add(k, -c);
        return r;
    }
    friend DExpr operator*(const DExpr& a, const DExpr& b) {
        DExpr r(a.nvars_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                Key k{ka.m, ka.f};
                for (int j = 0; j < a.nvars_; ++j) {
                    k.m[j] += kb.m[j];
                    k.f[j] += kb.f[j];
                }
                r.add(k, ca * cb);
            }
        return r;
    }
    DExpr scaled(const BetaScalar& s) const {
        DExpr r(nvars_);
        for (const auto& [k, c] : terms_) r.add(k, c * s);
        return r;
    }
    friend bool operator==(const DExpr& a, const DExpr& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const DExpr& a, const DExpr& b) { return !(a == b); }

    // d/dD_v.
    DExpr derivative(int v) const {
        DExpr r(nvars_);
        for (const auto& [k, c] : terms_) {
            if (k.m[v] > 0) {
                Key k2 = k;
                k2.m[v] -= 1;
                r.add(k2, c * BetaScalar(Rational(k.m[v])));
            }
            if (k.f[v] != 0) r.add(k, c * BetaScalar(Rational(k.f[v]), 1));
        }
        return r;
    }

    // Antiderivative in D_u from 0 to D_upper (u == upper gives the usual
    // one-variable integral from 0).
    DExpr integrate(int u, int upper) const {
        DExpr r(nvars_);
        for (const auto& [k, c] : terms_) {
            int m = k.m[u], f = k.f[u];
            Key rest = k;
            rest.m[u] = 0;
            rest.f[u] = 0;
            // pieces (coeff, power of D_upper, flag on D_upper); lower limit piece has power 0, flag 0
            std::vector<std::tuple<BetaScalar, int, int>> upper_pieces;
            BetaScalar lower;
            if (f == 0) {
                upper_pieces.emplace_back(BetaScalar(Rational(1) / Rational(m + 1)), m + 1, 0);
            } else {
                // int_0^D u^m e^{kappa u} du with kappa = f beta
                Rational mf = factorial(m);
                for (int t = 0; t <= m; ++t) {
                    Rational coef = mf / factorial(m - t);
                    if (t % 2 == 1) coef = -coef;
                    Rational fk(1);
                    for (int s = 0; s <= t; ++s) fk *= Rational(f);
                    upper_pieces.emplace_back(BetaScalar(coef / fk, -(t + 1)), m - t, f);
                }
                Rational coef = mf;
                if (m % 2 == 1) coef = -coef;
                Rational fk(1);
                for (int s = 0; s <= m; ++s) fk *= Rational(f);
                lower = BetaScalar(coef / fk, -(m + 1));
            }
            for (const auto& [pc, pm, pf] : upper_pieces) {
                Key k2 = rest;
                k2.m[upper] += pm;
                k2.f[upper] += pf;
                r.add(k2, c * pc);
            }
            if (!lower.is_zero()) r.add(rest, -(c * lower));
        }
        return r;
    }

    // Set D_v = 0.
    DExpr at_zero(int v) const {
        DExpr r(nvars_);
        for (const auto& [k, c] : terms_) {
            if (k.m[v] != 0) continue;
            Key k2 = k;
            k2.f[v] = 0;
            r.add(k2, c);
        }
        return r;
    }

    // Taylor expansion of the exponentials, truncated at total D-degree N.
    DExpr taylor(int N) const {
        DExpr r(nvars_);
        for (const auto& [k, c] : terms_) {
            std::vector<std::pair<Key, BetaScalar>> partial{{Key{k.m, std::vector<int>(nvars_, 0)}, c}};
            for (int j = 0; j < nvars_; ++j) {
                if (k.f[j] == 0) continue;
                std::vector<std::pair<Key, BetaScalar>> next;
                for (const auto& [pk, pc] : partial) {
                    int total = 0;
                    for (int v : pk.m) total += v;
                    Rational fp(1);
                    for (int n = 0; total + n <= N; ++n) {
                        Key k2 = pk;
                        k2.m[j] += n;
                        next.emplace_back(k2, pc * BetaScalar(fp / factorial(n), n));
                        fp *= Rational(k.f[j]);
                    }
                }
                partial = std::move(next);
            }
            for (const auto& [pk, pc] : partial) {
                int total = 0;
                for (int v : pk.m) total += v;
                if (total <= N) r.add(pk, pc);
            }
        }
        return r;
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            s += "(" + c.str() + ")";
            for (int j = 0; j < nvars_; ++j) {
                std::string nm = j < static_cast<int>(names.size()) ? names[j] : "D" + std::to_string(j + 1);
                if (k.m[j] > 0) s += "*" + nm + (k.m[j] > 1 ? "^" + std::to_string(k.m[j]) : "");
                if (k.f[j] != 0) s += "*exp(" + (k.f[j] == 1 ? std::string() : std::to_string(k.f[j]) + "*") + "beta*" + nm + ")";
            }
        }
        return s;
    }

private:
    int nvars_ = 0;
    std::map<Key, BetaScalar> terms_;
};

// F_{r,a}(D) in variable v of an nvars-variable expression.
inline DExpr phi_F(int r, int a, int nvars = 1, int v = 0) {
    DExpr out(nvars);
    if (r < 0) throw std::invalid_argument("phi_F: r must be nonnegative");
    std::vector<int> m(nvars, 0), f(nvars, 0);
    if (r == 0) {
        if (a < 0) return out;
        m[v] = a;
        out.add(DExpr::Key{m, f}, BetaScalar(Rational(1) / factorial(a)));
        return out;
    }
    m[v] = r - 1;
    f[v] = 1;
    out.add(DExpr::Key{m, f}, BetaScalar(Rational(1) / factorial(r - 1)));
    int n = r - a - 1;
    for (int t = 0; t < n; ++t) out = out.derivative(v);
    for (int t = 0; t < -n; ++t) out = out.integrate(v, v);
    return out;
}

namespace detail {

// Substitute D_v -> D_u + D_p - D_q (the argument u + D2 - D1).
inline DExpr shift_argument(const DExpr& e, int v, int u, int p, int q) {
    DExpr r(e.nvars());
    for (const auto& [k, c] : e.terms()) {
        int m = k.m[v], f = k.f[v];
        DExpr::Key base = k;
        base.m[v] = 0;
        base.f[v] = 0;
        base.f[u] += f;
        base.f[p] += f;
        base.f[q] -= f;
        Rational mf = factorial(m);
        for (int i = 0; i <= m; ++i)
            for (int j = 0; i + j <= m; ++j) {
                int l = m - i - j;
                Rational coef = mf / (factorial(i) * factorial(j) * factorial(l));
                if (l % 2 == 1) coef = -coef;
                DExpr::Key k2 = base;
                k2.m[u] += i;
                k2.m[p] += j;
                k2.m[q] += l;
                r.add(k2, c * BetaScalar(coef));
            }
    }
    return r;
}

}  // namespace detail

// Phi of R^(1,2)(1-beta T1)^{-r}(1-beta T2)^{-s} c_a^(1) c_b^(2), r, s >= 0,
// as an expression in (D1, D2).
inline DExpr phi_entry(int r, int s, int a, int b) {
    if (r < 0 || s < 0) throw std::invalid_argument("phi_entry: normalize (1-beta T) exponents to be <= 0 first");
    constexpr int D1 = 0, D2 = 1, U = 2;
    DExpr zero(2);
    if (a < 0 || b < 0) return zero;
    auto shifted = [&](int sb) { return detail::shift_argument(phi_F(s, sb, 3, D2), D2, U, D2, D1); };
    DExpr integrand = phi_F(r, a - 1, 3, U) * shifted(b) - phi_F(r, a, 3, U) * shifted(b - 1);
    DExpr e_minus = DExpr::term(3, {0, 0, 0}, {0, 0, -1}, BetaScalar(Rational(1)));
    DExpr e_plus = DExpr::term(3, {0, 0, 0}, {1, 0, 0}, BetaScalar(Rational(1)));
    DExpr body = (e_minus * integrand).integrate(U, D1);
    if (a == 0) body += shifted(b).at_zero(U);
    DExpr full = e_plus * body;
    DExpr out(2);
    for (const auto& [k, c] : full.terms()) {
        if (k.m[U] != 0 || k.f[U] != 0) throw std::logic_error("phi_entry: integration variable survived");
        out.add(DExpr::Key{{k.m[D1], k.m[D2]}, {k.f[D1], k.f[D2]}}, c);
    }
    return out;
}

// Phi on a raising expression: c_m^(i) -> D_i^m / m!, keeping subscript sums <= N.
inline DExpr phi_of_raising(const RaisingExpr& e, int N) {
    DExpr out(e.r());
    for (const auto& [k, c] : e.terms()) {
        if (subscript_sum(k) > N) continue;
        std::vector<int> m(e.r(), 0);
        Rational denom(1);
        for (int i = 0; i < e.r(); ++i)
            if (k[i] > 0) {
                m[i] = k[i];
                denom *= factorial(k[i]);
            }
        out.add(DExpr::Key{m, std::vector<int>(e.r(), 0)}, c * BetaScalar(Rational(1) / denom));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rational functions num / prod (1 + gamma beta x_m)^e.

class RatFun {
public:
    using Factor = std::pair<int, int>;  // (m, gamma)

    RatFun() = default;
    explicit RatFun(BetaPoly num, std::map<Factor, int> den = {}) : num_(std::move(num)), den_(std::move(den)) { prune(); }

    const BetaPoly& num() const { return num_; }
    const std::map<Factor, int>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    static BetaPoly factor_poly(const Factor& f) {
        BetaPoly p = BetaPoly::one();
        p.add_term(Monomial::var(f.first), 1, Rational(f.second));
        return p;
    }

    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return RatFun();
        std::map<Factor, int> d = a.den_;
        for (const auto& [f, e] : b.den_) d[f] += e;
        return RatFun(a.num_ * b.num_, std::move(d));
    }
    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        std::map<Factor, int> d = a.den_;
        for (const auto& [f, e] : b.den_) d[f] = std::max(d[f], e);
        return RatFun(a.lifted(d) + b.lifted(d), d);
    }
    RatFun operator-() const { return RatFun(-num_, den_); }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
    RatFun scaled(const BetaScalar& s) const { return RatFun(num_.scaled(s), den_); }

    // Exact polynomial value; throws when a denominator factor does not divide.
    BetaPoly to_poly() const {
        BetaPoly p = num_;
        for (const auto& [f, e] : den_)
            for (int t = 0; t < e; ++t) {
                auto q = divide_by_factor(p, f);
                if (!q) throw std::logic_error("phi calculus: denominator (1 + " + std::to_string(f.second) + "*beta*x" +
                                               std::to_string(f.first) + ") does not cancel");
                p = std::move(*q);
            }
        return p;
    }

    static std::optional<BetaPoly> divide_by_factor(const BetaPoly& p, const Factor& f) {
        const int v = f.first;
        std::map<int, BetaPoly> by_exp;
        for (const auto& [k, c] : p.raw()) {
            Monomial rest = k.x;
            int e = rest[v];
            rest.set(v, 0);
            by_exp[e].add_term(rest, k.beta, c);
        }
        BetaPoly q(p.nvars());
        if (by_exp.empty()) return q;
        int d = by_exp.rbegin()->first;
        BetaPoly prev(p.nvars());
        for (int k = 0; k < d; ++k) {
            BetaPoly qk = prev.scaled(Rational(-f.second), 1);
            auto it = by_exp.find(k);
            if (it != by_exp.end()) qk += it->second;
            q += qk.times_monomial(Monomial::var(v, k));
            prev = std::move(qk);
        }
        BetaPoly top = prev.scaled(Rational(f.second), 1);
        if (top != by_exp[d]) return std::nullopt;
        q.widen(p.nvars());
        return q;
    }

private:
    BetaPoly lifted(const std::map<Factor, int>& d) const {
        BetaPoly p = num_;
        for (const auto& [f, e] : d) {
            auto it = den_.find(f);
            int have = it == den_.end() ? 0 : it->second;
            if (e > have) p = p * factor_poly(f).pow(e - have);
        }
        return p;
    }
    void prune() {
        for (auto it = den_.begin(); it != den_.end();) {
            if (it->second == 0 || it->first.second == 0) it = den_.erase(it);
            else ++it;
        }
        if (num_.is_zero()) den_.clear();
    }

    BetaPoly num_;
    std::map<Factor, int> den_;
};

namespace detail {

// Taylor coefficients [s^0..s^M] of c(f beta + s) as rational functions.
inline std::vector<RatFun> shifted_taylor(const CSeries& c, int f, int M) {
    std::vector<RatFun> acc(M + 1);
    acc[0] = RatFun(BetaPoly::one());
    auto mul = [&](const std::vector<RatFun>& g) {
        std::vector<RatFun> out(M + 1);
        for (int i = 0; i <= M; ++i) {
            if (acc[i].is_zero()) continue;
            for (int j = 0; i + j <= M; ++j)
                if (!g[j].is_zero()) out[i + j] = out[i + j] + acc[i] * g[j];
        }
        acc = std::move(out);
    };
    for (int m : c.num()) {
        // (1 + f beta x) + x s
        std::vector<RatFun> g(M + 1);
        BetaPoly c0 = BetaPoly::one();
        c0.add_term(Monomial::var(m), 1, Rational(f));
        g[0] = RatFun(c0);
        if (M >= 1) g[1] = RatFun(x(m));
        mul(g);
    }
    for (int m : c.den()) {
        // sum_k x^k (1 + beta x) (1 + (1-f) beta x)^{-k-1} s^k
        std::vector<RatFun> g(M + 1);
        BetaPoly opb = BetaPoly::one();
        opb.add_term(Monomial::var(m), 1, Rational(1));
        for (int k = 0; k <= M; ++k) {
            std::map<RatFun::Factor, int> d;
            if (1 - f != 0) d[{m, 1 - f}] = k + 1;
            g[k] = RatFun(BetaPoly::monomial(Monomial::var(m, k)) * opb, d);
        }
        mul(g);
    }
    return acc;
}

}  // namespace detail

// Phi^{-1} as a rational function: D_j^m e^{f beta D_j} -> (d/dt)^m c^(j)(t) at t = f beta.
inline RatFun phi_inverse_ratfun(const DExpr& g, const std::vector<const CSeries*>& series) {
    if (static_cast<int>(series.size()) != g.nvars()) throw std::invalid_argument("phi_inverse: one series per D-variable required");
    std::map<std::tuple<int, int, int>, RatFun> memo;  // (var, f, m)
    std::map<std::pair<int, int>, std::vector<RatFun>> taylor;
    auto derivative_at = [&](int j, int f, int m) -> const RatFun& {
        auto key = std::make_tuple(j, f, m);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        auto& tay = taylor[{j, f}];
        if (static_cast<int>(tay.size()) <= m) tay = detail::shifted_taylor(*series[j], f, m);
        return memo.emplace(key, tay[m].scaled(BetaScalar(factorial(m)))).first->second;
    };
    RatFun out;
    for (const auto& [k, c] : g.terms()) {
        RatFun t(BetaPoly::constant(c));
        for (int j = 0; j < g.nvars() && !t.is_zero(); ++j) t = t * derivative_at(j, k.f[j], k.m[j]);
        out = out + t;
    }
    return out;
}

inline BetaPoly phi_inverse(const DExpr& g, const std::vector<const CSeries*>& series) {
    BetaPoly p = phi_inverse_ratfun(g, series).to_poly();
    if (!p.is_zero() && p.min_beta() < 0) throw std::logic_error("phi_inverse: negative powers of beta did not cancel");
    return p;
}

}  // namespace kgroth
