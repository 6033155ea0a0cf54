#pragma once

#include <future>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgroth/perm.hpp"
#include "kgroth/poly.hpp"
#include "kgroth/raising.hpp"

namespace kgroth {

// Raised for involutions outside every route we implement.
class Uncomputable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Product formula over D^O(z).
inline BetaPoly o_dominant(const Permutation& z) {
    if (!classify(z).o_dominant) throw std::invalid_argument("o_dominant: not O-dominant: " + z.str());
    BetaPoly r = BetaPoly::one(z.size());
    for (const auto& c : o_diagram(z)) r *= oplus(x(c.row), x(c.col));
    r.widen(z.size());
    return r;
}

struct HilbertClass {
    BetaPoly a_class;  // polynomial in a_1..a_n, stored with x_i standing for a_i
    int codim = 0;
    BetaPoly poly;
};

// Class of the coordinate subspace cut out by the cells of d: prod (1 - a_i a_j).
// Then a_i -> 1 + beta x_i and division by (-beta)^codim.
inline HilbertClass hilbert_monomial_class(const Diagram& d, int n) {
    HilbertClass h;
    h.a_class = BetaPoly::one(n);
    for (const auto& c : d) {
        BetaPoly f = BetaPoly::one(n);
        f.add_term(Monomial::var(c.row) * Monomial::var(c.col), 0, Rational(-1));
        h.a_class *= f;
    }
    h.codim = static_cast<int>(d.size());
    BetaPoly p = h.a_class;
    for (int i = 1; i <= n; ++i) {
        BetaPoly sub = BetaPoly::one(n);
        sub.add_term(Monomial::var(i), 1, Rational(1));
        p = p.substitute(i, sub);
    }
    p = p.scaled(Rational(h.codim % 2 == 0 ? 1 : -1), -h.codim);
    p.widen(n);
    p.assert_finalized("hilbert class transform");
    if (!p.is_zero() && p.min_degree() != h.codim) throw std::logic_error("hilbert class: lowest degree differs from the codimension");
    h.poly = std::move(p);
    return h;
}

inline HilbertClass o_hilbert_monomial(const Permutation& z) {
    if (!classify(z).o_dominant)
        throw Uncomputable("o_hilbert_monomial: " + z.str() + " is not O-dominant; its ideal is not monomial and needs Groebner machinery");
    return hilbert_monomial_class(o_diagram(z), z.size());
}

// ---------------------------------------------------------------------------
// Vexillary Pfaffian.

struct PfaffianPlan {
    Permutation z;
    Partition lambda;  // lambda^O(z), padded with a 0 when r = l(lambda) + 1
    int length = 0;    // l(lambda^O(z))
    int r = 0;
    std::set<int> S;
    std::vector<Cell> row_cell;  // essential cell per row i <= length
    std::vector<CSeries> series;  // size r
    bool padded = false;

    int exponent(int i) const { return r - i - lambda[i - 1]; }
};

inline std::set<int> c_set(const Partition& lam) {
    std::set<int> c;
    int l = static_cast<int>(lam.size());
    for (int i = 1; i < l; ++i)
        if (lam[i - 1] > lam[i] + 1) c.insert(i);
    if (l > 0) c.insert(l);
    return c;
}

inline PfaffianPlan pfaffian_plan(const Permutation& z) {
    if (!classify(z).vexillary) throw std::invalid_argument("pfaffian_plan: not vexillary: " + z.str());
    PfaffianPlan p;
    p.z = z;
    p.lambda = o_code_and_shape(z).shape;
    p.length = static_cast<int>(p.lambda.size());
    p.r = p.length + (p.length % 2);
    p.padded = p.r > p.length;
    if (p.padded) p.lambda.push_back(0);
    Diagram ess = essential_set(o_diagram(z));
    std::map<int, Cell> by_value;
    for (const auto& c : ess) {
        int v = c.col - nw_rank(z, c.row, c.col);
        if (!by_value.emplace(v, c).second) throw std::logic_error("pfaffian_plan: two essential cells share q - rank for " + z.str());
        p.S.insert(v);
    }
    for (int s : c_set(o_code_and_shape(z).shape))
        if (!p.S.count(s)) throw std::logic_error("pfaffian_plan: S(z) misses an element of C(lambda) for " + z.str());
    if (p.length > 0 && *p.S.rbegin() != p.length) throw std::logic_error("pfaffian_plan: max S(z) differs from l(lambda) for " + z.str());
    for (int i = 1; i <= p.length; ++i) {
        auto it = by_value.lower_bound(i);
        const Cell& c = it->second;
        p.row_cell.push_back(c);
        p.series.push_back(CSeries::flagged(c.row, c.col));
    }
    if (p.padded) p.series.push_back(CSeries::trivial());
    return p;
}

// Same matrix with every series replaced by the stable one in x_1..x_k.
inline PfaffianPlan stable_plan(const Permutation& z, int k) {
    PfaffianPlan p = pfaffian_plan(z);
    for (int i = 0; i < p.length; ++i) p.series[i] = CSeries::flagged(k, k);
    return p;
}

// R^(i,j)(1 - beta T^(i))^{e_i}(1 - beta T^(j))^{e_j} c_{lambda_i}^(i) c_{lambda_j}^(j).
inline RaisingExpr plan_entry_expr(const PfaffianPlan& p, int i, int j, int cap) {
    RaisingExpr::Key k(p.r, -1);
    k[i - 1] = p.lambda[i - 1];
    k[j - 1] = p.lambda[j - 1];
    RaisingExpr e = RaisingExpr::monomial(k);
    e = apply_one_minus_betaT(e, i, p.exponent(i), cap);
    e = apply_one_minus_betaT(e, j, p.exponent(j), cap);
    return apply_R(e, i, j, cap);
}

inline std::string plan_entry_str(const PfaffianPlan& p, int i, int j) {
    auto si = std::to_string(i), sj = std::to_string(j);
    return "R^(" + si + "," + sj + ")(1-beta*T^(" + si + "))^" + std::to_string(p.exponent(i)) + "(1-beta*T^(" + sj + "))^" +
           std::to_string(p.exponent(j)) + " c_" + std::to_string(p.lambda[i - 1]) + "^(" + si + ") c_" +
           std::to_string(p.lambda[j - 1]) + "^(" + sj + ")";
}

// Entry (i,j) in the Phi picture, with positive (1 - beta T) powers expanded.
inline DExpr plan_entry_dexpr(const PfaffianPlan& p, int i, int j) {
    DExpr out(2);
    int ei = p.exponent(i), ej = p.exponent(j);
    int ri = ei < 0 ? -ei : 0, rj = ej < 0 ? -ej : 0;
    int ki = ei > 0 ? ei : 0, kj = ej > 0 ? ej : 0;
    for (int a = 0; a <= ki; ++a)
        for (int b = 0; b <= kj; ++b) {
            Rational c = binomial(ki, a) * binomial(kj, b);
            if ((a + b) % 2 == 1) c = -c;
            out += phi_entry(ri, rj, p.lambda[i - 1] + a, p.lambda[j - 1] + b).scaled(BetaScalar(c, a + b));
        }
    return out;
}

// Degree-<=D truncation of pf(M) via truncated expansion (engine E1).
inline BetaPoly plan_pfaffian_e1(const PfaffianPlan& p, int D, int jobs = 1) {
    int nv = 0;
    for (const auto& s : p.series) nv = std::max(nv, s.nvars());
    if (p.r == 0) return BetaPoly::one(nv);
    SkewMatrix<BetaPoly> M(p.r, BetaPoly(nv));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= p.r; ++i)
        for (int j = i + 1; j <= p.r; ++j) pairs.emplace_back(i, j);
    auto entry = [&](int i, int j) { return evaluate(plan_entry_expr(p, i, j, D), p.series, D); };
    if (jobs <= 1) {
        for (auto [i, j] : pairs) M.set(i, j, entry(i, j));
    } else {
        std::vector<std::future<BetaPoly>> fut;
        for (auto [i, j] : pairs) fut.push_back(std::async(std::launch::async, entry, i, j));
        for (std::size_t t = 0; t < pairs.size(); ++t) M.set(pairs[t].first, pairs[t].second, fut[t].get());
    }
    BetaPoly r = pfaffian(M, BetaPoly::one(nv), [D](const BetaPoly& a, const BetaPoly& b) { return BetaPoly::mul_trunc(a, b, D); });
    r.widen(nv);
    return r;
}

// Exact pf(M) through the Phi calculus (engine E2).
inline BetaPoly plan_pfaffian_e2(const PfaffianPlan& p) {
    int nv = 0;
    for (const auto& s : p.series) nv = std::max(nv, s.nvars());
    if (p.r == 0) return BetaPoly::one(nv);
    SkewMatrix<RatFun> M(p.r, RatFun());
    for (int i = 1; i <= p.r; ++i)
        for (int j = i + 1; j <= p.r; ++j)
            M.set(i, j, phi_inverse_ratfun(plan_entry_dexpr(p, i, j), {&p.series[i - 1], &p.series[j - 1]}));
    BetaPoly r = pfaffian(M, RatFun(BetaPoly::one(nv))).to_poly();
    r.widen(nv);
    return r;
}

enum class OEngine { e1, e2 };

inline OEngine parse_o_engine(const std::string& s) {
    if (s == "e1") return OEngine::e1;
    if (s == "e2") return OEngine::e2;
    throw std::invalid_argument("unknown engine: " + s);
}

struct OVexResult {
    BetaPoly poly;
    int degree_bound = -1;  // bound at which E1 was accepted (-1 for E2)
    bool truncated = false;  // explicit maxdeg given: result is a truncation
};

inline int max_auto_degree(const Permutation& z) { return 4 * z.size() * z.size() + 8; }

// E1 with auto-stabilization: accept P(D) once P(D+2) has nothing in degrees
// (D, D+2] and agrees with P(D) below. An explicit maxdeg returns that truncation.
inline OVexResult o_vexillary(const Permutation& z, OEngine engine = OEngine::e1, int maxdeg = -1, int jobs = 1) {
    if (!classify(z).vexillary)
        throw Uncomputable("o_vexillary: " + z.str() + " is not vexillary (contains 2143); use the dominant route if it applies");
    PfaffianPlan plan = pfaffian_plan(z);
    OVexResult out;
    if (engine == OEngine::e2) {
        out.poly = plan_pfaffian_e2(plan);
        if (maxdeg >= 0) {
            out.poly = out.poly.truncated(maxdeg);
            out.truncated = true;
        }
    } else if (maxdeg >= 0) {
        out.poly = plan_pfaffian_e1(plan, maxdeg, jobs);
        out.degree_bound = maxdeg;
        out.truncated = true;
    } else {
        int size = 0;
        for (int v : plan.lambda) size += v;
        int D = std::max(2 * size, 1);
        BetaPoly cur = plan_pfaffian_e1(plan, D, jobs);
        for (;;) {
            if (D > max_auto_degree(z)) throw std::logic_error("o_vexillary: degree stabilization did not terminate for " + z.str());
            BetaPoly next = plan_pfaffian_e1(plan, D + 2, jobs);
            if (next.max_degree() <= D) {
                if (next != cur) throw std::logic_error("o_vexillary: truncations at D and D+2 disagree for " + z.str());
                break;
            }
            if (next.truncated(D) != cur) throw std::logic_error("o_vexillary: truncation is not exact for " + z.str());
            D += 2;
            cur = std::move(next);
        }
        out.poly = std::move(cur);
        out.degree_bound = D;
    }
    out.poly.widen(z.size());
    out.poly.assert_finalized("o_vexillary");
    return out;
}

enum class ORoute { automatic, dominant, hilbert, pfaffian };

inline ORoute parse_o_route(const std::string& s) {
    if (s == "auto") return ORoute::automatic;
    if (s == "dominant") return ORoute::dominant;
    if (s == "hilbert") return ORoute::hilbert;
    if (s == "pfaffian") return ORoute::pfaffian;
    throw std::invalid_argument("unknown orthogonal route: " + s);
}

inline bool o_computable(const Permutation& z) {
    Classification c = classify(z);
    return c.o_dominant || c.vexillary;
}

// Dominant first, then vexillary; everything else has no formula here.
inline BetaPoly o_groth(const Permutation& z, ORoute route = ORoute::automatic, OEngine engine = OEngine::e1, int jobs = 1) {
    if (!z.is_involution()) throw std::invalid_argument("o_groth: not an involution: " + z.str());
    Classification c = classify(z);
    switch (route) {
        case ORoute::dominant:
            return o_dominant(z);
        case ORoute::hilbert:
            return o_hilbert_monomial(z).poly;
        case ORoute::pfaffian:
            return o_vexillary(z, engine, -1, jobs).poly;
        case ORoute::automatic:
            break;
    }
    if (c.o_dominant) return o_dominant(z);
    if (c.vexillary) return o_vexillary(z, engine, -1, jobs).poly;
    throw Uncomputable("no formula in scope for " + z.str() +
                       ": not O-dominant and not vexillary (general case needs a Hilbert series of a non-monomial ideal)");
}

inline bool o_stability_check(const Permutation& z, int m) {
    BetaPoly a = o_groth(z);
    BetaPoly b = o_groth(one_pad(z, m));
    a.widen(b.nvars());
    return a == b;
}

// d_i^(beta) G^O_z = G^O_{s_i z s_i}; nullopt when (z, i) is not admissible.
inline std::optional<bool> o_vex_divided_difference_check(const Permutation& z, int i) {
    if (i < 1 || i >= z.size()) return std::nullopt;
    if (!(z(i) > z(i + 1))) return std::nullopt;
    Permutation y = z.conj_s(i);
    if (y == z) return std::nullopt;
    if (!classify(z).vexillary || !classify(y).vexillary) return std::nullopt;
    BetaPoly lhs = beta_divided_difference(o_groth(z, ORoute::pfaffian), i);
    BetaPoly rhs = o_groth(y, ORoute::pfaffian);
    int nv = std::max(lhs.nvars(), rhs.nvars());
    lhs.widen(nv);
    rhs.widen(nv);
    return lhs == rhs;
}

}  // namespace kgroth
