#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "kgroth/perm.hpp"
#include "kgroth/pipedream.hpp"
#include "kgroth/poly.hpp"
#include "kgroth/tableaux.hpp"

namespace kgroth {

// Demazure product U_w U_i.
inline Permutation hecke_product(const Permutation& w, int i) {
    if (i < 1) throw std::out_of_range("hecke_product: bad generator index");
    if (w(i) < w(i + 1)) return w.times_s(i);
    return w.size() >= i + 1 ? w : w.extended(i + 1);
}

inline Permutation hecke_product(const Permutation& w, const std::vector<int>& word) {
    Permutation r = w;
    for (int i : word) r = hecke_product(r, i);
    return r;
}

// Bruhat order via rank matrices: u <= w iff #{a <= i : u(a) >= j} <= same for w.
class BruhatUpperBound {
public:
    explicit BruhatUpperBound(const Permutation& w) : n_(w.size()), rank_((n_ + 1) * (n_ + 2), 0) {
        for (int i = 1; i <= n_; ++i)
            for (int j = 1; j <= n_ + 1; ++j) rank_[idx(i, j)] = rank_[idx(i - 1, j)] + (w(i) >= j ? 1 : 0);
    }
    bool above(const Permutation& u) const {
        if (u.size() > n_) {
            for (int i = n_ + 1; i <= u.size(); ++i)
                if (u(i) != i) return false;
        }
        std::vector<int> col(n_ + 2, 0);
        for (int i = 1; i <= n_; ++i) {
            int v = u(i);
            for (int j = 1; j <= std::min(v, n_ + 1); ++j) ++col[j];
            for (int j = 1; j <= n_; ++j)
                if (col[j] > rank_[idx(i, j)]) return false;
        }
        return true;
    }

private:
    int idx(int i, int j) const { return i * (n_ + 2) + j; }
    int n_;
    std::vector<int> rank_;
};

inline bool bruhat_leq(const Permutation& u, const Permutation& w) {
    int n = std::max(u.size(), w.size());
    return BruhatUpperBound(w.extended(n)).above(u.extended(n));
}

namespace detail {

class GrothCache {
public:
    std::optional<BetaPoly> get(const std::vector<int>& key) const {
        std::shared_lock lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }
    void put(const std::vector<int>& key, const BetaPoly& p) {
        std::unique_lock lock(mu_);
        map_.emplace(key, p);
    }
    void clear() {
        std::unique_lock lock(mu_);
        map_.clear();
    }

private:
    mutable std::shared_mutex mu_;
    std::map<std::vector<int>, BetaPoly> map_;
};

inline GrothCache& groth_cache() {
    static GrothCache c;
    return c;
}

}  // namespace detail

// Divided-difference recursion from the longest element of S_n, memoized by
// the full word (so w and w x 1 are computed independently).
inline BetaPoly grothendieck(const Permutation& w) {
    int n = w.size();
    if (n <= 1) return BetaPoly::one(std::max(n - 1, 0));
    if (auto hit = detail::groth_cache().get(w.word())) return *hit;
    BetaPoly result;
    if (w == Permutation::longest(n)) {
        Monomial m;
        for (int i = 1; i < n; ++i) m.set(i, n - i);
        result = BetaPoly::monomial(m, 0, Rational(1), n - 1);
    } else {
        int i = 1;
        while (!(w(i) < w(i + 1))) ++i;
        result = beta_divided_difference(grothendieck(w.times_s(i)), i);
        result.widen(n - 1);
    }
    detail::groth_cache().put(w.word(), result);
    return result;
}

inline PipeDreamSum groth_pipedream_sum(const Permutation& w, int cap, int max_row) {
    int n = w.size();
    BruhatUpperBound bound(w);
    int len = length(w);
    auto step = [&](const Permutation& st, int letter) -> std::optional<Permutation> {
        Permutation next = hecke_product(st, letter);
        if (!bound.above(next)) return std::nullopt;
        return next;
    };
    auto accept = [&](const Permutation& st) { return st == w; };
    return pipe_dream_search(reading_order_cells(n, max_row), Permutation::identity(n), step, accept, len, cap,
                             std::max(std::min(n - 1, max_row), 0));
}

// Sum of beta^{|S|-l(w)} x^S over pipe dreams S with delta(S) a Hecke word for w.
inline BetaPoly groth_via_pipedreams(const Permutation& w, int cap, bool* truncated = nullptr) {
    PipeDreamSum s = groth_pipedream_sum(w, cap, w.size());
    if (truncated) *truncated = s.truncated;
    s.poly.widen(std::max(w.size() - 1, 0));
    return s.poly;
}

// G_w(x_1..x_k) as the restriction of the Grothendieck polynomial of 1^N x w,
// with N = max(n, k); stabilization is confirmed at N+1.
inline SymSeries stable_G(const Permutation& w, int k, int maxdeg = -1) {
    if (k < 1) throw std::invalid_argument("stable_G: k must be positive");
    int N = std::max(w.size(), k);
    int cap = maxdeg >= 0 ? maxdeg : 1 << 20;
    auto at = [&](int pad) {
        PipeDreamSum s = groth_pipedream_sum(shift_pad(w, pad), cap, k);
        BetaPoly p = s.poly;
        p.widen(k);
        return p;
    };
    BetaPoly a = at(N);
    BetaPoly b = at(N + 1);
    if (a != b) throw std::logic_error("stable_G: restriction did not stabilize for " + w.str());
    return SymSeries{a, k, maxdeg};
}

// w(i) = i + lambda_{k+1-i} for i <= k = l(lambda), increasing afterwards.
inline Permutation w_lambda(const Partition& lam, int n) {
    int k = static_cast<int>(lam.size());
    if (k > 0 && k + lam.front() > n) throw std::invalid_argument("w_lambda: n too small for " + partition_str(lam));
    std::vector<int> w(n, 0);
    std::vector<bool> used(n + 1, false);
    for (int i = 1; i <= k; ++i) {
        w[i - 1] = i + lam[k - i];
        used[w[i - 1]] = true;
    }
    int next = 1;
    for (int i = k + 1; i <= n; ++i) {
        while (used[next]) ++next;
        w[i - 1] = next;
        used[next] = true;
    }
    return Permutation(std::move(w));
}

// Lehmer code c_i = #{j > i : w(j) < w(i)}.
inline std::vector<int> lehmer_code(const Permutation& w) {
    std::vector<int> c(w.size(), 0);
    for (int i = 1; i <= w.size(); ++i)
        for (int j = i + 1; j <= w.size(); ++j)
            if (w(j) < w(i)) ++c[i - 1];
    return c;
}

inline Permutation from_lehmer_code(std::vector<int> code) {
    int n = static_cast<int>(code.size());
    for (int i = 0; i < static_cast<int>(code.size()); ++i) n = std::max(n, i + 1 + code[i]);
    code.resize(n, 0);
    std::vector<int> avail;
    for (int v = 1; v <= n; ++v) avail.push_back(v);
    std::vector<int> w;
    for (int i = 0; i < n; ++i) {
        if (code[i] >= static_cast<int>(avail.size())) throw std::invalid_argument("from_lehmer_code: invalid code");
        w.push_back(avail[code[i]]);
        avail.erase(avail.begin() + code[i]);
    }
    return Permutation(std::move(w)).trimmed();
}

}  // namespace kgroth
