#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "kgroth/perm.hpp"
#include "kgroth/poly.hpp"

namespace kgroth {

// Truncated symmetric polynomial in x_1..x_k.
struct SymSeries {
    BetaPoly poly;
    int k = 0;
    int maxdeg = -1;  // -1: exact (no truncation)

    bool is_symmetric() const {
        for (int i = 1; i < k; ++i)
            if (!poly.is_symmetric_in(i, i + 1)) return false;
        return true;
    }
    friend bool operator==(const SymSeries& a, const SymSeries& b) { return a.poly == b.poly; }
};

inline SymSeries truncate_series(const BetaPoly& p, int k, int maxdeg) {
    return SymSeries{maxdeg >= 0 ? p.truncated(maxdeg) : p, k, maxdeg};
}

namespace detail {

struct TabCell {
    int row, col;
    int left = -1, above = -1;  // indices into the cell list
    bool diagonal = false;
};

inline int mask_min(std::uint32_t m) { return std::countr_zero(m); }
inline int mask_max(std::uint32_t m) { return 31 - std::countl_zero(m); }

// Shared enumeration engine. Letters are bit positions 1..L. admissible()
// decides whether mask S may sit in cell c given the neighbour masks.
// weight_var maps a letter to its variable index.
template <class Admissible, class WeightVar>
BetaPoly enumerate_fillings(const std::vector<TabCell>& cells, int letters, int base, int maxdeg, int nvars,
                            Admissible admissible, WeightVar weight_var, int jobs) {
    const int ncells = static_cast<int>(cells.size());
    if (ncells == 0) return BetaPoly::one(nvars);
    if (maxdeg >= 0 && ncells > maxdeg) return BetaPoly(nvars);
    const std::uint32_t full = (letters >= 31) ? 0xFFFFFFFFu : ((1u << (letters + 1)) - 2u);

    auto run = [&](std::uint32_t first_mask, BetaPoly& acc) {
        std::vector<std::uint32_t> fill(ncells, 0);
        std::function<void(int, int, Monomial&)> rec = [&](int idx, int size, Monomial& m) {
            if (idx == ncells) {
                acc.add_term(m, size - base, Rational(1));
                return;
            }
            const TabCell& c = cells[idx];
            std::uint32_t lm = c.left >= 0 ? fill[c.left] : 0;
            std::uint32_t am = c.above >= 0 ? fill[c.above] : 0;
            int lo = 1;
            if (lm) lo = std::max(lo, mask_max(lm));
            if (am) lo = std::max(lo, mask_max(am));
            int room = maxdeg >= 0 ? maxdeg - size - (ncells - idx - 1) : letters;
            if (room <= 0) return;
            std::uint32_t allowed = full & ~((1u << lo) - 1u);
            auto try_mask = [&](std::uint32_t s) {
                if (std::popcount(s) > room) return;
                if (!admissible(c, s, lm, am)) return;
                fill[idx] = s;
                for (std::uint32_t t = s; t; t &= t - 1) {
                    int v = weight_var(std::countr_zero(t));
                    m.e[v - 1]++;
                }
                rec(idx + 1, size + std::popcount(s), m);
                for (std::uint32_t t = s; t; t &= t - 1) {
                    int v = weight_var(std::countr_zero(t));
                    m.e[v - 1]--;
                }
            };
            if (idx == 0 && first_mask != 0) {
                try_mask(first_mask);
                return;
            }
            for (std::uint32_t s = allowed; s; s = (s - 1) & allowed) try_mask(s);
        };
        Monomial m;
        rec(0, 0, m);
    };

    std::vector<std::uint32_t> firsts;
    for (std::uint32_t s = full; s; s = (s - 1) & full) firsts.push_back(s);
    if (jobs <= 1) {
        BetaPoly acc(nvars);
        for (auto s : firsts) run(s, acc);
        return acc;
    }
    // Partition by the content of the first cell.
    std::vector<BetaPoly> parts(jobs, BetaPoly(nvars));
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < firsts.size(); i += jobs) run(firsts[i], parts[t]);
        });
    for (auto& th : pool) th.join();
    BetaPoly acc(nvars);
    for (auto& p : parts) acc += p;
    return acc;
}

}  // namespace detail

// Sum over semistandard set-valued tableaux of shape lambda with entries in [k].
inline SymSeries G_lambda(const Partition& lam, int k, int maxdeg = -1, int jobs = 1) {
    if (k < 1 || k > kMaxVars) throw std::invalid_argument("G_lambda: variable count out of range");
    std::vector<detail::TabCell> cells;
    std::map<std::pair<int, int>, int> where;
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (int j = 1; j <= lam[i]; ++j) {
            detail::TabCell c{static_cast<int>(i) + 1, j};
            auto l = where.find({c.row, j - 1});
            auto a = where.find({c.row - 1, j});
            if (l != where.end()) c.left = l->second;
            if (a != where.end()) c.above = a->second;
            where[{c.row, j}] = static_cast<int>(cells.size());
            cells.push_back(c);
        }
    int base = 0;
    for (int p : lam) base += p;
    auto admissible = [](const detail::TabCell&, std::uint32_t s, std::uint32_t lm, std::uint32_t am) {
        int mn = detail::mask_min(s);
        if (lm && detail::mask_max(lm) > mn) return false;
        if (am && detail::mask_max(am) >= mn) return false;
        return true;
    };
    BetaPoly p = detail::enumerate_fillings(cells, k, base, maxdeg, k, admissible, [](int letter) { return letter; }, jobs);
    return SymSeries{p, k, maxdeg};
}

// Shifted set-valued tableaux over the marked alphabet 1' < 1 < 2' < ...,
// encoded as 2i-1 for i' and 2i for i. primed_diagonal = false gives GP.
inline SymSeries shifted_tableau_sum(const Partition& lam, int k, int maxdeg, bool primed_diagonal, int jobs = 1) {
    if (!lam.empty() && !is_strict(lam)) throw std::invalid_argument("shifted tableaux need a strict partition");
    if (k < 1 || 2 * k > 30) throw std::invalid_argument("shifted tableaux: variable count out of range");
    std::vector<detail::TabCell> cells;
    std::map<std::pair<int, int>, int> where;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        int r = static_cast<int>(i) + 1;
        for (int j = r; j < r + lam[i]; ++j) {
            detail::TabCell c{r, j};
            c.diagonal = (j == r);
            auto l = where.find({r, j - 1});
            auto a = where.find({r - 1, j});
            if (l != where.end()) c.left = l->second;
            if (a != where.end()) c.above = a->second;
            where[{r, j}] = static_cast<int>(cells.size());
            cells.push_back(c);
        }
    }
    int base = 0;
    for (int p : lam) base += p;
    constexpr std::uint32_t odd_bits = 0xAAAAAAAAu;  // bit positions 1,3,5,...: primed letters
    auto admissible = [primed_diagonal](const detail::TabCell& c, std::uint32_t s, std::uint32_t lm, std::uint32_t am) {
        int mn = detail::mask_min(s);
        if (lm) {
            int mx = detail::mask_max(lm);
            if (mx > mn) return false;
            if (mx == mn && (mn % 2 == 1)) return false;  // shared letter in a row must be unprimed
        }
        if (am) {
            int mx = detail::mask_max(am);
            if (mx > mn) return false;
            if (mx == mn && (mn % 2 == 0)) return false;  // shared letter in a column must be primed
        }
        if (!primed_diagonal && c.diagonal && (s & odd_bits)) return false;
        return true;
    };
    BetaPoly p = detail::enumerate_fillings(cells, 2 * k, base, maxdeg, k, admissible,
                                            [](int letter) { return (letter + 1) / 2; }, jobs);
    return SymSeries{p, k, maxdeg};
}

}  // namespace kgroth
