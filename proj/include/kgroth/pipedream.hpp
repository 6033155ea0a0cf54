#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kgroth/perm.hpp"
#include "kgroth/poly.hpp"

namespace kgroth {

struct PipeCell {
    int row;
    int col;
    int letter() const { return row + col - 1; }
};

// Cells of [n] x [n] in reading order: rows top-down, right to left within a
// row. Only cells whose letter is a generator of S_n (letter <= n-1) are kept.
inline std::vector<PipeCell> reading_order_cells(int n, int max_row) {
    std::vector<PipeCell> cells;
    for (int a = 1; a <= std::min(n, max_row); ++a)
        for (int b = n - a; b >= 1; --b) cells.push_back({a, b});
    return cells;
}

struct PipeDreamSum {
    BetaPoly poly;
    bool truncated = false;  // some admissible branch was cut by the size cap
    std::size_t visited = 0;
};

// Depth-first search over subsets of cells in reading order. The running
// state is advanced by step(state, letter); a nullopt from step prunes the
// branch. Subsets whose final state is accepted contribute beta^{|S|-base} x^S.
template <class State, class Step, class Accept>
PipeDreamSum pipe_dream_search(const std::vector<PipeCell>& cells, const State& start, Step step, Accept accept,
                               int base_length, int cap, int nvars) {
    PipeDreamSum out;
    out.poly = BetaPoly(nvars);
    std::function<void(std::size_t, const State&, int, const Monomial&)> rec = [&](std::size_t from, const State& st, int size,
                                                                               const Monomial& m) {
        ++out.visited;
        if (accept(st)) out.poly.add_term(m, size - base_length, Rational(1));
        for (std::size_t p = from; p < cells.size(); ++p) {
            std::optional<State> ns = step(st, cells[p].letter());
            if (!ns) continue;
            if (size == cap) {
                out.truncated = true;
                return;
            }
            Monomial m2 = m;
            m2.set(cells[p].row, m[cells[p].row] + 1);
            rec(p + 1, *ns, size + 1, m2);
        }
    };
    rec(0, start, 0, Monomial{});
    return out;
}

}  // namespace kgroth
