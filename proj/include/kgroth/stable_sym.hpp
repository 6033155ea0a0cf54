#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgroth/grothendieck.hpp"
#include "kgroth/hecke_sp.hpp"
#include "kgroth/o_groth.hpp"
#include "kgroth/perm.hpp"
#include "kgroth/poly.hpp"
#include "kgroth/raising.hpp"
#include "kgroth/tableaux.hpp"

namespace kgroth {

inline SymSeries GP(const Partition& lam, int k, int maxdeg, int jobs = 1) {
    return shifted_tableau_sum(lam, k, maxdeg, false, jobs);
}

inline SymSeries GQ(const Partition& lam, int k, int maxdeg, int jobs = 1) {
    return shifted_tableau_sum(lam, k, maxdeg, true, jobs);
}

// R^(1,2)(1 - beta T^(1))^{1-a}(1 - beta T^(2))^{-b} c_a c_b with the stable series.
inline SymSeries GQ_two_row(int a, int b, int k, int maxdeg) {
    if (a < 0 || b < 0) throw std::invalid_argument("GQ_two_row: a and b must be nonnegative");
    if (maxdeg < 0) throw std::invalid_argument("GQ_two_row: a degree bound is required");
    RaisingExpr e = RaisingExpr::monomial({a, b});
    e = apply_one_minus_betaT(e, 1, 1 - a, maxdeg);
    e = apply_one_minus_betaT(e, 2, -b, maxdeg);
    e = apply_R(e, 1, 2, maxdeg);
    CSeries c = CSeries::flagged(k, k);
    BetaPoly p = evaluate(e, {c, c}, maxdeg);
    p.widen(k);
    return SymSeries{p, k, maxdeg};
}

// pf[ sum_{k,l} beta^{k+l} C(i+1-r,k) C(j-r,l) GQ_(lam_i+k, lam_j+l) ], lam padded to even length.
inline SymSeries GQ_pfaffian(const Partition& lam, int k, int maxdeg) {
    if (!lam.empty() && !is_strict(lam)) throw std::invalid_argument("GQ_pfaffian: need a strict partition");
    Partition mu = lam;
    if (mu.size() % 2 == 1) mu.push_back(0);
    int r = static_cast<int>(mu.size());
    if (r == 0) return SymSeries{BetaPoly::one(k), k, maxdeg};
    std::map<std::pair<int, int>, BetaPoly> two_row;
    auto gq2 = [&](int a, int b) -> const BetaPoly& {
        auto it = two_row.find({a, b});
        if (it == two_row.end()) it = two_row.emplace(std::make_pair(a, b), GQ_two_row(a, b, k, maxdeg).poly).first;
        return it->second;
    };
    SkewMatrix<BetaPoly> M(r, BetaPoly(k));
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j) {
            BetaPoly entry(k);
            int li = mu[i - 1], lj = mu[j - 1];
            for (int s = 0; li + lj + s <= maxdeg; ++s)
                for (int t = 0; li + lj + s + t <= maxdeg; ++t) {
                    Rational c = binomial(i + 1 - r, s) * binomial(j - r, t);
                    if (c.is_zero()) continue;
                    entry += gq2(li + s, lj + t).scaled(c, s + t);
                }
            M.set(i, j, entry.truncated(maxdeg));
        }
    BetaPoly p = pfaffian(M, BetaPoly::one(k), [maxdeg](const BetaPoly& a, const BetaPoly& b) { return BetaPoly::mul_trunc(a, b, maxdeg); });
    p.widen(k);
    return SymSeries{p, k, maxdeg};
}

enum class SpStableRoute { atoms, limit };

// GP^Sp_z from Hecke atoms, or as the stabilized restriction of G^Sp_{(21)^m x z}.
inline SymSeries GP_sp_stable(const Permutation& z, int k, int maxdeg, SpStableRoute route = SpStableRoute::atoms) {
    if (!z.is_fpf_involution()) throw std::invalid_argument("GP_sp_stable: not a fixed-point-free involution: " + z.str());
    if (maxdeg < 0) throw std::invalid_argument("GP_sp_stable: a degree bound is required");
    if (route == SpStableRoute::atoms) {
        BetaPoly acc(k);
        int lf = fpf_length(z);
        for (const auto& w : hecke_atoms(z).hecke_atoms) {
            if (length(w) - lf > maxdeg) continue;
            acc += stable_G(w, k, maxdeg).poly.scaled(Rational(1), length(w) - lf);
        }
        acc.widen(k);
        return SymSeries{acc.truncated(maxdeg), k, maxdeg};
    }
    int m = (std::max(z.size(), k) + 1) / 2 + 1;
    auto at = [&](int pad) {
        PipeDreamSum s = sp_pipedream_sum(fpf_pad(z, pad), maxdeg, k);
        BetaPoly p = s.poly;
        p.widen(k);
        return p;
    };
    BetaPoly a = at(m), b = at(m + 1);
    if (a != b) throw std::logic_error("GP_sp_stable: restriction did not stabilize for " + z.str());
    return SymSeries{a, k, maxdeg};
}

// Stable Pfaffian: every series is prod_{j<=k}(1 + x_j t)/(1 + xbar_j t).
inline SymSeries GQ_o_stable_vexillary(const Permutation& z, int k, int maxdeg) {
    if (maxdeg < 0) throw std::invalid_argument("GQ_o_stable_vexillary: a degree bound is required");
    BetaPoly p = plan_pfaffian_e1(stable_plan(z, k), maxdeg);
    p.widen(k);
    return SymSeries{p, k, maxdeg};
}

// Restriction of G^O_{1^m x z} to x_1..x_k, truncated; built from the plan of 1^m x z.
inline SymSeries GQ_o_padded_restriction(const Permutation& z, int m, int k, int maxdeg) {
    PfaffianPlan p = pfaffian_plan(shift_pad(z, m));
    for (int i = 0; i < p.length; ++i) {
        const Cell& c = p.row_cell[i];
        p.series[i] = CSeries::flagged(std::min(c.row, k), std::min(c.col, k));
    }
    BetaPoly q = plan_pfaffian_e1(p, maxdeg);
    q.widen(k);
    return SymSeries{q, k, maxdeg};
}

// GQ^O_z as the limit over pad counts m and m+1, compared, never assumed.
inline SymSeries GQ_o_limit(const Permutation& z, int k, int maxdeg) {
    int m = std::max(k, 1);
    SymSeries a = GQ_o_padded_restriction(z, m, k, maxdeg);
    SymSeries b = GQ_o_padded_restriction(z, m + 1, k, maxdeg);
    if (a.poly != b.poly) throw std::logic_error("GQ_o_limit: restriction did not stabilize for " + z.str());
    return a;
}

// ---------------------------------------------------------------------------
// Basis expansions.

enum class SymBasis { G, GP, GQ };

inline SymBasis parse_sym_basis(const std::string& s) {
    if (s == "G") return SymBasis::G;
    if (s == "GP") return SymBasis::GP;
    if (s == "GQ") return SymBasis::GQ;
    throw std::invalid_argument("unknown basis: " + s);
}

inline std::string sym_basis_name(SymBasis b) {
    switch (b) {
        case SymBasis::G: return "G";
        case SymBasis::GP: return "GP";
        case SymBasis::GQ: return "GQ";
    }
    return "?";
}

// Basis element whose leading monomial is x^m, if m is a (strict) partition exponent.
class SymBasisLookup {
public:
    SymBasisLookup(SymBasis basis, int k, int maxdeg, int jobs = 1) : basis_(basis), k_(k), maxdeg_(maxdeg), jobs_(jobs) {}

    std::optional<std::pair<Partition, BetaPoly>> operator()(const Monomial& m) const {
        Partition lam;
        for (int i = 1; i <= kMaxVars; ++i) {
            int e = m[i];
            if (e == 0) {
                for (int j = i + 1; j <= kMaxVars; ++j)
                    if (m[j] != 0) return std::nullopt;
                break;
            }
            if (!lam.empty() && (e > lam.back() || (basis_ != SymBasis::G && e == lam.back()))) return std::nullopt;
            lam.push_back(e);
        }
        std::lock_guard lock(*mu_);
        auto it = cache_->find(lam);
        if (it == cache_->end()) it = cache_->emplace(lam, element(lam)).first;
        return std::make_pair(lam, it->second);
    }

    BetaPoly element(const Partition& lam) const {
        switch (basis_) {
            case SymBasis::G: return G_lambda(lam, k_, maxdeg_, jobs_).poly;
            case SymBasis::GP: return GP(lam, k_, maxdeg_, jobs_).poly;
            case SymBasis::GQ: return GQ(lam, k_, maxdeg_, jobs_).poly;
        }
        return BetaPoly();
    }

private:
    SymBasis basis_;
    int k_, maxdeg_, jobs_;
    std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
    std::shared_ptr<std::map<Partition, BetaPoly>> cache_ = std::make_shared<std::map<Partition, BetaPoly>>();
};

struct PositivityReport {
    Expansion<Partition> expansion;
    bool symmetric = false;
    bool faithful = false;       // k >= maxdeg
    bool nonnegative = false;    // every coefficient in N[beta]
    bool attempted = false;
};

// Graded triangular expansion of a truncated symmetric series.
inline PositivityReport positivity_report(const SymSeries& target, SymBasis basis, int maxdeg, int jobs = 1) {
    PositivityReport r;
    r.symmetric = target.is_symmetric();
    r.faithful = target.k >= maxdeg;
    if (!r.symmetric || !r.faithful) return r;
    r.attempted = true;
    r.expansion = expand_in_graded_basis<Partition>(target.poly, SymBasisLookup(basis, target.k, maxdeg, jobs), maxdeg);
    r.nonnegative = true;
    for (const auto& [lam, c] : r.expansion.coefficients)
        if (!c.in_N_beta()) r.nonnegative = false;
    return r;
}

// Expansion of a polynomial in {G_w} (Lehmer-code leading monomials).
inline Expansion<Permutation> expand_in_grothendieck_basis(const BetaPoly& f, int max_degree, std::size_t max_steps = 2000) {
    auto lookup = [](const Monomial& m) -> std::optional<std::pair<Permutation, BetaPoly>> {
        std::vector<int> code;
        for (int i = 1; i <= m.max_var(); ++i) code.push_back(m[i]);
        Permutation w = from_lehmer_code(code);
        return std::make_pair(w, grothendieck(w));
    };
    return expand_in_graded_basis<Permutation>(f, lookup, max_degree, max_steps, code_term_less);
}

}  // namespace kgroth
