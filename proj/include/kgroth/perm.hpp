#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kgroth {

// Permutation of [n] in one-line notation, 1-indexed: w(i) = word[i-1].
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> word) : w_(std::move(word)) {
        std::vector<bool> seen(w_.size() + 1, false);
        for (int v : w_) {
            if (v < 1 || v > static_cast<int>(w_.size()) || seen[v])
                throw std::invalid_argument("not a permutation: " + word_str(w_));
            seen[v] = true;
        }
    }
    static Permutation identity(int n) {
        std::vector<int> w(n);
        for (int i = 0; i < n; ++i) w[i] = i + 1;
        return Permutation(std::move(w));
    }
    static Permutation longest(int n) {
        std::vector<int> w(n);
        for (int i = 0; i < n; ++i) w[i] = n - i;
        return Permutation(std::move(w));
    }
    // s_i in S_n.
    static Permutation simple(int i, int n) {
        Permutation p = identity(n);
        std::swap(p.w_[i - 1], p.w_[i]);
        return p;
    }

    int size() const { return static_cast<int>(w_.size()); }
    // w(i) for 1 <= i <= n; fixed beyond n.
    int operator()(int i) const { return i >= 1 && i <= size() ? w_[i - 1] : i; }
    const std::vector<int>& word() const { return w_; }

    Permutation inverse() const {
        std::vector<int> r(w_.size());
        for (int i = 0; i < size(); ++i) r[w_[i] - 1] = i + 1;
        return Permutation(std::move(r));
    }
    // (v * w)(i) = v(w(i)), computed in S_max(n).
    friend Permutation operator*(const Permutation& v, const Permutation& w) {
        int n = std::max(v.size(), w.size());
        std::vector<int> r(n);
        for (int i = 1; i <= n; ++i) r[i - 1] = v(w(i));
        return Permutation(std::move(r));
    }
    // Right multiplication by s_i swaps positions i, i+1.
    Permutation times_s(int i) const {
        Permutation p = extended(std::max(size(), i + 1));
        std::swap(p.w_[i - 1], p.w_[i]);
        return p;
    }
    // Left multiplication by s_i swaps values i, i+1.
    Permutation s_times(int i) const {
        Permutation p = extended(std::max(size(), i + 1));
        for (int& v : p.w_) {
            if (v == i) v = i + 1;
            else if (v == i + 1) v = i;
        }
        return p;
    }
    // s_i w s_i.
    Permutation conj_s(int i) const { return s_times(i).times_s(i); }

    Permutation extended(int n) const {
        if (n < size()) throw std::invalid_argument("extended: cannot shrink");
        std::vector<int> r = w_;
        for (int i = size() + 1; i <= n; ++i) r.push_back(i);
        Permutation p;
        p.w_ = std::move(r);
        return p;
    }
    // Drop trailing fixed points.
    Permutation trimmed() const {
        std::vector<int> r = w_;
        while (!r.empty() && r.back() == static_cast<int>(r.size())) r.pop_back();
        Permutation p;
        p.w_ = std::move(r);
        return p;
    }

    bool is_identity() const {
        for (int i = 0; i < size(); ++i)
            if (w_[i] != i + 1) return false;
        return true;
    }
    bool is_involution() const {
        for (int i = 1; i <= size(); ++i)
            if ((*this)((*this)(i)) != i) return false;
        return true;
    }
    bool is_fpf_involution() const {
        if (!is_involution()) return false;
        for (int i = 1; i <= size(); ++i)
            if ((*this)(i) == i) return false;
        return true;
    }

    std::string str() const { return word_str(w_); }
    // Compact form for n <= 9 ("4321"), comma form otherwise.
    std::string compact() const {
        bool small = size() <= 9;
        std::string s;
        for (int i = 0; i < size(); ++i) {
            if (!small && i > 0) s += ",";
            s += std::to_string(w_[i]);
        }
        return s;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.w_ == b.w_; }
    friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }
    friend bool operator<(const Permutation& a, const Permutation& b) { return a.w_ < b.w_; }

    static std::string word_str(const std::vector<int>& w) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(w[i]);
        }
        return s;
    }

private:
    std::vector<int> w_;
};

inline std::ostream& operator<<(std::ostream& os, const Permutation& w) { return os << w.str(); }

inline int length(const Permutation& w) {
    int n = w.size(), c = 0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (w(i) > w(j)) ++c;
    return c;
}

inline int fpf_length(const Permutation& z) {
    if (!z.is_fpf_involution()) throw std::invalid_argument("fpf_length: not a fixed-point-free involution: " + z.str());
    int n = z.size(), c = 0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (z(i) > z(j) && z(j) < i) ++c;
    return c;
}

inline Permutation direct_sum(const Permutation& v, const Permutation& w) {
    std::vector<int> r = v.word();
    for (int x : w.word()) r.push_back(x + v.size());
    return Permutation(std::move(r));
}
// w x 1^m
inline Permutation one_pad(const Permutation& w, int m) { return w.extended(w.size() + m); }
// 1^m x w
inline Permutation shift_pad(const Permutation& w, int m) { return direct_sum(Permutation::identity(m), w); }
// (21)^m x z
inline Permutation fpf_pad(const Permutation& z, int m) {
    if (!z.is_fpf_involution()) throw std::invalid_argument("fpf_pad: not a fixed-point-free involution: " + z.str());
    std::vector<int> r;
    for (int i = 1; i <= 2 * m; ++i) r.push_back(i % 2 == 1 ? i + 1 : i - 1);
    for (int x : z.word()) r.push_back(x + 2 * m);
    return Permutation(std::move(r));
}
// Theta = 2143... in S_n, n even.
inline Permutation theta(int n) {
    if (n % 2 != 0) throw std::invalid_argument("theta: n must be even");
    return fpf_pad(Permutation(), n / 2);
}

struct Cell {
    int row;
    int col;
    friend bool operator<(const Cell& a, const Cell& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; }
    friend bool operator==(const Cell& a, const Cell& b) { return a.row == b.row && a.col == b.col; }
};

using Diagram = std::set<Cell>;

inline std::string diagram_str(const Diagram& d) {
    std::string s = "{";
    bool first = true;
    for (const auto& c : d) {
        if (!first) s += ", ";
        first = false;
        s += "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
    }
    return s + "}";
}

// D(w) = {(i, w(j)) : i < j, w(i) > w(j)}.
inline Diagram rothe_diagram(const Permutation& w) {
    Diagram d;
    for (int i = 1; i <= w.size(); ++i)
        for (int j = i + 1; j <= w.size(); ++j)
            if (w(i) > w(j)) d.insert({i, w(j)});
    return d;
}
// Cells of D(z) weakly below the diagonal.
inline Diagram o_diagram(const Permutation& z) {
    Diagram d;
    for (int i = 1; i <= z.size(); ++i)
        for (int j = i + 1; j <= z.size(); ++j)
            if (z(i) > z(j) && z(j) <= i) d.insert({i, z(j)});
    return d;
}
// Cells of D(z) strictly below the diagonal.
inline Diagram sp_diagram(const Permutation& z) {
    Diagram d;
    for (int i = 1; i <= z.size(); ++i)
        for (int j = i + 1; j <= z.size(); ++j)
            if (z(i) > z(j) && z(j) < i) d.insert({i, z(j)});
    return d;
}

struct Diagrams {
    Diagram rothe, orthogonal, symplectic;
};

inline Diagrams diagrams(const Permutation& z) { return {rothe_diagram(z), o_diagram(z), sp_diagram(z)}; }

inline Diagram essential_set(const Diagram& d) {
    Diagram e;
    for (const auto& c : d)
        if (!d.count({c.row, c.col + 1}) && !d.count({c.row + 1, c.col})) e.insert(c);
    return e;
}

// #{k <= i : z(k) <= j}.
inline int nw_rank(const Permutation& z, int i, int j) {
    if (i < 1 || j < 1 || i > z.size() || j > z.size()) throw std::out_of_range("nw_rank: index out of range");
    int c = 0;
    for (int k = 1; k <= i; ++k)
        if (z(k) <= j) ++c;
    return c;
}

using Partition = std::vector<int>;

inline Partition conjugate(const Partition& lam) {
    Partition r;
    if (lam.empty()) return r;
    for (int j = 1; j <= lam.front(); ++j) {
        int c = 0;
        for (int p : lam)
            if (p >= j) ++c;
        r.push_back(c);
    }
    return r;
}

inline std::string partition_str(const Partition& lam) {
    std::string s = "(";
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(lam[i]);
    }
    return s + ")";
}

inline bool is_strict(const Partition& lam) {
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (lam[i] <= 0) return false;
        if (i > 0 && lam[i] >= lam[i - 1]) return false;
    }
    return true;
}

struct OCodeShape {
    std::vector<int> code;
    Partition shape;
};

inline OCodeShape o_code_and_shape(const Permutation& z) {
    OCodeShape r;
    r.code.assign(z.size(), 0);
    for (const auto& c : o_diagram(z)) ++r.code[c.row - 1];
    Partition sorted;
    for (int c : r.code)
        if (c > 0) sorted.push_back(c);
    std::sort(sorted.rbegin(), sorted.rend());
    r.shape = conjugate(sorted);
    return r;
}

inline bool contains_2143(const Permutation& w) {
    int n = w.size();
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) {
            if (!(w(a) > w(b))) continue;
            for (int c = b + 1; c <= n; ++c) {
                if (!(w(c) > w(a))) continue;
                for (int d = c + 1; d <= n; ++d)
                    if (w(d) > w(a) && w(d) < w(c)) return true;
            }
        }
    return false;
}

inline bool contains_132(const Permutation& w) {
    int n = w.size();
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b)
            for (int c = b + 1; c <= n; ++c)
                if (w(a) < w(c) && w(c) < w(b)) return true;
    return false;
}

// (a,b) precedes (i,j) iff i <= a and b <= j.
inline bool ess_precedes(const Cell& ab, const Cell& ij) { return ij.row <= ab.row && ab.col <= ij.col; }

inline bool is_chain(const Diagram& d) {
    std::vector<Cell> v(d.begin(), d.end());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (!ess_precedes(v[i], v[j]) && !ess_precedes(v[j], v[i])) return false;
    return true;
}

// Column j of the diagram must be exactly rows j+offset .. j+offset+mu_j-1,
// columns 1..k consecutive, mu strictly decreasing.
inline std::optional<Partition> staircase_shape(const Diagram& d, int offset) {
    std::map<int, std::vector<int>> cols;
    for (const auto& c : d) cols[c.col].push_back(c.row);
    Partition mu;
    int expect = 1;
    for (auto& [j, rows] : cols) {
        if (j != expect++) return std::nullopt;
        std::sort(rows.begin(), rows.end());
        for (std::size_t t = 0; t < rows.size(); ++t)
            if (rows[t] != j + offset + static_cast<int>(t)) return std::nullopt;
        mu.push_back(static_cast<int>(rows.size()));
    }
    if (!is_strict(mu)) return std::nullopt;
    return mu;
}

struct IGrassmannian {
    int n;                 // the cycles are (phi_i, n+i)
    std::vector<int> phi;  // phi_1 < ... < phi_r <= n
};

inline std::optional<IGrassmannian> i_grassmannian(const Permutation& z) {
    std::vector<std::pair<int, int>> cyc;  // (b, a) with a < b
    for (int a = 1; a <= z.size(); ++a)
        if (z(a) > a) cyc.emplace_back(z(a), a);
    if (cyc.empty()) return IGrassmannian{z.size(), {}};
    std::sort(cyc.begin(), cyc.end());
    IGrassmannian g;
    g.n = cyc.front().first - 1;
    for (std::size_t t = 0; t < cyc.size(); ++t) {
        if (cyc[t].first != g.n + 1 + static_cast<int>(t)) return std::nullopt;
        if (t > 0 && cyc[t].second <= cyc[t - 1].second) return std::nullopt;
        g.phi.push_back(cyc[t].second);
    }
    if (g.phi.back() > g.n) return std::nullopt;
    return g;
}

struct Classification {
    bool vexillary = false;
    bool o_dominant = false;
    bool sp_dominant = false;
    std::optional<IGrassmannian> i_grassmannian;
    std::optional<Partition> o_dominant_shape;
    std::optional<Partition> sp_dominant_shape;
};

inline Classification classify(const Permutation& z) {
    if (!z.is_involution()) throw std::invalid_argument("classify: not an involution: " + z.str());
    Classification c;
    bool by_pattern = !contains_2143(z);
    bool by_chain = is_chain(essential_set(o_diagram(z)));
    if (by_pattern != by_chain)
        throw std::logic_error("classify: vexillary tests disagree for " + z.str() + " (pattern " +
                               (by_pattern ? "avoids" : "contains") + " 2143, essential set " +
                               (by_chain ? "is" : "is not") + " a chain)");
    c.vexillary = by_pattern;
    c.o_dominant_shape = staircase_shape(o_diagram(z), 0);
    c.o_dominant = c.o_dominant_shape.has_value();
    if (z.is_fpf_involution()) {
        c.sp_dominant_shape = staircase_shape(sp_diagram(z), 1);
        c.sp_dominant = c.sp_dominant_shape.has_value();
    }
    c.i_grassmannian = i_grassmannian(z);
    return c;
}

// (a_1 b_1 a_2 b_2 ...)^{-1} with a_k the cycle minima in increasing order.
inline Permutation alpha_fpf(const Permutation& z) {
    if (!z.is_fpf_involution()) throw std::invalid_argument("alpha_fpf: not a fixed-point-free involution: " + z.str());
    std::vector<int> w;
    for (int a = 1; a <= z.size(); ++a)
        if (a < z(a)) {
            w.push_back(a);
            w.push_back(z(a));
        }
    return Permutation(std::move(w)).inverse();
}

inline std::set<int> s_set(const Permutation& z) {
    std::set<int> s;
    for (const auto& c : essential_set(o_diagram(z))) s.insert(c.col - nw_rank(z, c.row, c.col));
    return s;
}

// Enumerations used throughout.
inline std::vector<Permutation> all_permutations(int n) {
    std::vector<int> w(n);
    for (int i = 0; i < n; ++i) w[i] = i + 1;
    std::vector<Permutation> out;
    do out.emplace_back(w);
    while (std::next_permutation(w.begin(), w.end()));
    return out;
}

inline std::vector<Permutation> involutions(int n) {
    std::vector<Permutation> out;
    for (auto& p : all_permutations(n))
        if (p.is_involution()) out.push_back(p);
    return out;
}

inline std::vector<Permutation> fpf_involutions(int n) {
    std::vector<Permutation> out;
    for (auto& p : all_permutations(n))
        if (p.is_fpf_involution()) out.push_back(p);
    return out;
}

// Accepts "4,5,7,1,2,6,3", "4571263" (single digits) or cycles "(1,4)(2,5)".
inline Permutation parse_permutation(const std::string& text, int min_size = 0) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    if (s.empty()) return Permutation::identity(min_size);
    if (s.front() == '(') {
        std::vector<std::vector<int>> cycles;
        std::size_t i = 0;
        int n = min_size;
        while (i < s.size()) {
            if (s[i] != '(') throw std::invalid_argument("bad cycle notation: " + text);
            auto close = s.find(')', i);
            if (close == std::string::npos) throw std::invalid_argument("bad cycle notation: " + text);
            std::vector<int> cyc;
            std::stringstream ss(s.substr(i + 1, close - i - 1));
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (tok.empty()) throw std::invalid_argument("bad cycle notation: " + text);
                cyc.push_back(std::stoi(tok));
                if (cyc.back() < 1) throw std::invalid_argument("bad cycle notation: " + text);
                n = std::max(n, cyc.back());
            }
            cycles.push_back(cyc);
            i = close + 1;
        }
        std::vector<int> w(n);
        for (int k = 0; k < n; ++k) w[k] = k + 1;
        std::vector<bool> used(n + 1, false);
        for (const auto& cyc : cycles)
            for (std::size_t k = 0; k < cyc.size(); ++k) {
                if (used[cyc[k]]) throw std::invalid_argument("cycles are not disjoint: " + text);
                used[cyc[k]] = true;
                w[cyc[k] - 1] = cyc[(k + 1) % cyc.size()];
            }
        return Permutation(std::move(w));
    }
    std::vector<int> w;
    if (s.find(',') == std::string::npos) {
        for (char ch : s) {
            if (ch < '1' || ch > '9') throw std::invalid_argument("bad permutation word: " + text);
            w.push_back(ch - '0');
        }
    } else {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) throw std::invalid_argument("bad permutation word: " + text);
            for (char ch : tok)
                if (ch < '0' || ch > '9') throw std::invalid_argument("bad permutation word: " + text);
            w.push_back(std::stoi(tok));
        }
    }
    Permutation p(std::move(w));
    if (p.size() < min_size) p = p.extended(min_size);
    return p;
}

inline Partition parse_partition(const std::string& text) {
    Partition lam;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        int v = std::stoi(tok);
        if (v < 0) throw std::invalid_argument("negative part in partition: " + text);
        if (v > 0) lam.push_back(v);
    }
    for (std::size_t i = 1; i < lam.size(); ++i)
        if (lam[i] > lam[i - 1]) throw std::invalid_argument("parts must be weakly decreasing: " + text);
    return lam;
}

}  // namespace kgroth
