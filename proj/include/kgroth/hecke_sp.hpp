#pragma once

#include <algorithm>
#include <deque>
#include <memory>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "kgroth/grothendieck.hpp"
#include "kgroth/perm.hpp"
#include "kgroth/pipedream.hpp"
#include "kgroth/poly.hpp"

namespace kgroth {

// N_z, or the zero element when empty.
using ModuleState = std::optional<Permutation>;

// N_z U_i in the 0-Hecke module spanned by fpf involutions.
inline ModuleState n_action(const Permutation& z, int i) {
    if (!z.is_fpf_involution()) throw std::invalid_argument("n_action: not a fixed-point-free involution: " + z.str());
    if (i < 1 || i >= z.size()) throw std::out_of_range("n_action: generator index out of range");
    if (z(i) == i + 1) return std::nullopt;
    if (z(i) < z(i + 1)) return z.conj_s(i);
    return z;
}

struct AtomSets {
    std::set<Permutation> hecke_atoms;
    std::set<Permutation> atoms;
};

namespace detail {

// N_Theta U_w for every w in S_n, built by increasing length.
class HeckeAtomTable {
public:
    explicit HeckeAtomTable(int n) : n_(n) {
        Permutation id = Permutation::identity(n);
        table_.emplace(id, theta(n));
        std::vector<Permutation> frontier{id};
        while (!frontier.empty()) {
            std::vector<Permutation> next;
            for (const auto& w : frontier) {
                const ModuleState& st = table_.at(w);
                for (int i = 1; i < n; ++i) {
                    if (!(w(i) < w(i + 1))) continue;
                    Permutation ws = w.times_s(i);
                    if (table_.count(ws)) continue;
                    ModuleState ns = st ? n_action(*st, i) : std::nullopt;
                    table_.emplace(ws, ns);
                    next.push_back(ws);
                }
            }
            frontier = std::move(next);
        }
    }
    int n() const { return n_; }
    const std::map<Permutation, ModuleState>& table() const { return table_; }

private:
    int n_;
    std::map<Permutation, ModuleState> table_;
};

inline const HeckeAtomTable& hecke_atom_table(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<HeckeAtomTable>> tables;
    std::lock_guard lock(mu);
    auto& slot = tables[n];
    if (!slot) slot = std::make_unique<HeckeAtomTable>(n);
    return *slot;
}

inline bool window_pattern(const std::vector<int>& w, std::size_t i, std::string& kind, int q[4]) {
    int v[4] = {w[i], w[i + 1], w[i + 2], w[i + 3]};
    int s[4] = {v[0], v[1], v[2], v[3]};
    std::sort(s, s + 4);
    for (int t = 0; t < 4; ++t) q[t] = s[t];
    auto is = [&](int p0, int p1, int p2, int p3) { return v[0] == s[p0] && v[1] == s[p1] && v[2] == s[p2] && v[3] == s[p3]; };
    if (is(0, 3, 1, 2)) kind = "adbc";
    else if (is(1, 2, 0, 3)) kind = "bcad";
    else if (is(1, 3, 0, 2)) kind = "bdac";
    else return false;
    return true;
}

inline void write_pattern(std::vector<int>& w, std::size_t i, const std::string& kind, const int q[4]) {
    auto put = [&](int p0, int p1, int p2, int p3) {
        w[i] = q[p0];
        w[i + 1] = q[p1];
        w[i + 2] = q[p2];
        w[i + 3] = q[p3];
    };
    if (kind == "adbc") put(0, 3, 1, 2);
    else if (kind == "bcad") put(1, 2, 0, 3);
    else put(1, 3, 0, 2);
}

// Closure of a word under window moves at even offsets. With symmetric = true
// any of the three patterns may replace another; otherwise only adbc -> bcad.
inline std::set<std::vector<int>> window_closure(const std::vector<int>& start, bool symmetric) {
    std::set<std::vector<int>> seen{start};
    std::deque<std::vector<int>> queue{start};
    while (!queue.empty()) {
        std::vector<int> w = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i + 4 <= w.size(); i += 2) {
            std::string kind;
            int q[4];
            if (!window_pattern(w, i, kind, q)) continue;
            std::vector<std::string> targets;
            if (symmetric) {
                for (const char* t : {"adbc", "bcad", "bdac"})
                    if (kind != t) targets.emplace_back(t);
            } else if (kind == "adbc") {
                targets.emplace_back("bcad");
            }
            for (const auto& t : targets) {
                std::vector<int> u = w;
                write_pattern(u, i, t, q);
                if (seen.insert(u).second) queue.push_back(u);
            }
        }
    }
    return seen;
}

}  // namespace detail

// Hecke atoms {w : N_Theta U_w = N_z} by dynamic programming over S_n.
inline std::set<Permutation> hecke_atoms_dp(const Permutation& z) {
    if (!z.is_fpf_involution()) throw std::invalid_argument("hecke_atoms: not a fixed-point-free involution: " + z.str());
    std::set<Permutation> out;
    for (const auto& [w, st] : detail::hecke_atom_table(z.size()).table())
        if (st && *st == z) out.insert(w);
    return out;
}

// Hecke atoms as the window-move closure of alpha_fpf(z), on inverses.
inline std::set<Permutation> hecke_atoms_closure(const Permutation& z) {
    std::set<Permutation> out;
    for (const auto& u : detail::window_closure(alpha_fpf(z).inverse().word(), true)) out.insert(Permutation(u).inverse());
    return out;
}

inline std::set<Permutation> atoms_from_prec(const Permutation& z) {
    std::set<Permutation> out;
    for (const auto& u : detail::window_closure(alpha_fpf(z).inverse().word(), false)) out.insert(Permutation(u).inverse());
    return out;
}

// Both routes for Hecke atoms, compared; the DP route is skipped above n = 8.
inline AtomSets hecke_atoms(const Permutation& z) {
    AtomSets r;
    r.hecke_atoms = hecke_atoms_closure(z);
    if (z.size() <= 8) {
        std::set<Permutation> dp = hecke_atoms_dp(z);
        if (dp != r.hecke_atoms) throw std::logic_error("hecke_atoms: DP and window-closure routes disagree for " + z.str());
    }
    int lf = fpf_length(z);
    for (const auto& w : r.hecke_atoms) {
        int l = length(w);
        if (l < lf) throw std::logic_error("hecke_atoms: atom shorter than the fpf length for " + z.str());
        if (l == lf) r.atoms.insert(w);
    }
    if (atoms_from_prec(z) != r.atoms) throw std::logic_error("hecke_atoms: atoms disagree with the prec closure for " + z.str());
    return r;
}

enum class SpRoute { dd, atoms, pipedream, dominant };

inline SpRoute parse_sp_route(const std::string& s) {
    if (s == "dd") return SpRoute::dd;
    if (s == "atoms") return SpRoute::atoms;
    if (s == "pipedream") return SpRoute::pipedream;
    if (s == "dominant") return SpRoute::dominant;
    throw std::invalid_argument("unknown symplectic route: " + s);
}

namespace detail {

inline GrothCache& sp_cache() {
    static GrothCache c;
    return c;
}

inline BetaPoly sp_dd(const Permutation& z) {
    int n = z.size();
    if (auto hit = sp_cache().get(z.word())) return *hit;
    BetaPoly result;
    if (z == Permutation::longest(n)) {
        result = BetaPoly::one(n - 1);
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n - i; ++j) result *= oplus(x(i), x(j));
    } else {
        int i = 1;
        while (!(z(i) < z(i + 1))) ++i;
        result = beta_divided_difference(sp_dd(z.conj_s(i)), i);
    }
    result.widen(n - 1);
    sp_cache().put(z.word(), result);
    return result;
}

}  // namespace detail

inline BetaPoly sp_dominant_product(const Permutation& z) {
    BetaPoly r = BetaPoly::one(std::max(z.size() - 1, 0));
    for (const auto& c : sp_diagram(z)) r *= oplus(x(c.row), x(c.col));
    return r;
}

inline PipeDreamSum sp_pipedream_sum(const Permutation& z, int cap, int max_row) {
    int n = z.size();
    int lf = fpf_length(z);
    auto step = [&](const Permutation& st, int letter) -> std::optional<Permutation> {
        ModuleState ns = n_action(st, letter);
        if (!ns) return std::nullopt;
        int l = fpf_length(*ns);
        if (l > lf || (l == lf && *ns != z)) return std::nullopt;
        return *ns;
    };
    auto accept = [&](const Permutation& st) { return st == z; };
    return pipe_dream_search(reading_order_cells(n, max_row), theta(n), step, accept, lf, cap,
                             std::max(std::min(n - 1, max_row), 0));
}

inline BetaPoly sp_groth(const Permutation& z, SpRoute route = SpRoute::dd, int cap = -1) {
    if (!z.is_fpf_involution()) throw std::invalid_argument("sp_groth: not a fixed-point-free involution: " + z.str());
    BetaPoly r;
    switch (route) {
        case SpRoute::dd:
            r = detail::sp_dd(z);
            break;
        case SpRoute::atoms: {
            r = BetaPoly(z.size() - 1);
            int lf = fpf_length(z);
            for (const auto& w : hecke_atoms(z).hecke_atoms) r += grothendieck(w).scaled(Rational(1), length(w) - lf);
            break;
        }
        case SpRoute::pipedream: {
            if (cap < 0) cap = detail::sp_dd(z).max_degree();
            PipeDreamSum s = sp_pipedream_sum(z, cap, z.size());
            r = s.poly;
            break;
        }
        case SpRoute::dominant:
            if (!classify(z).sp_dominant) throw std::invalid_argument("sp_groth: dominant route on a non-dominant involution " + z.str());
            r = sp_dominant_product(z);
            break;
    }
    r.widen(z.size() - 1);
    r.assert_finalized("sp_groth");
    return r;
}

}  // namespace kgroth
