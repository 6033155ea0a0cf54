// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kgroth/kgroth.hpp"

using namespace kgroth;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string why;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            why = what;
        }
    }
};

Permutation P(const char* s) { return parse_permutation(s); }
BetaPoly Q(const char* s) { return parse_poly(s); }

Outcome typeA_table() {
    Outcome o;
    const std::vector<std::pair<const char*, const char*>> s3 = {
        {"123", "1"}, {"213", "x1"}, {"132", "x1 + x2 + beta*x1*x2"}, {"231", "x1*x2"}, {"312", "x1^2"}, {"321", "x1^2*x2"}};
    for (const auto& [w, p] : s3) o.require(grothendieck(P(w)) == Q(p), std::string("G_") + w);
    for (const auto& w : all_permutations(4)) {
        BetaPoly dd = grothendieck(w);
        o.require(groth_via_pipedreams(w, dd.max_degree()) == dd, "dd vs pipedream at " + w.compact());
    }
    return o;
}

Outcome sp_table() {
    Outcome o;
    o.require(sp_groth(P("2143")) == Q("1"), "GSp_2143");
    o.require(sp_groth(P("3412")) == Q("x1 + x2 + beta*x1*x2"), "GSp_3412");
    o.require(sp_groth(P("4321")) ==
                  Q("x1^2 + x1*x2 + x1*x3 + x2*x3 + 2*beta*x1*x2*x3 + beta*x1^2*x2 + beta*x1^2*x3 + beta^2*x1^2*x2*x3"),
              "GSp_4321");
    o.require(sp_groth(P("215634")) ==
                  Q("x1 + x2 + x3 + x4 + beta*x1*x2 + beta*x1*x3 + beta*x1*x4 + beta*x2*x3 + beta*x2*x4 + beta*x3*x4"
                    " + beta^2*x1*x2*x3 + beta^2*x1*x2*x4 + beta^2*x1*x3*x4 + beta^2*x2*x3*x4 + beta^3*x1*x2*x3*x4"),
              "GSp_215634");
    auto fpf6 = fpf_involutions(6);
    o.require(fpf6.size() == 15, "I^FPF_6 should have 15 elements");
    for (const auto& z : fpf6) {
        BetaPoly dd = sp_groth(z, SpRoute::dd);
        o.require(sp_groth(z, SpRoute::atoms) == dd, "atoms route at " + z.compact());
        o.require(sp_groth(z, SpRoute::pipedream) == dd, "pipedream route at " + z.compact());
        if (classify(z).sp_dominant) o.require(sp_groth(z, SpRoute::dominant) == dd, "dominant route at " + z.compact());
    }
    return o;
}

std::set<Permutation> perms(std::initializer_list<const char*> ws) {
    std::set<Permutation> s;
    for (auto w : ws) s.insert(P(w));
    return s;
}

Outcome atom_decomposition() {
    Outcome o;
    AtomSets a = hecke_atoms(P("4321"));
    o.require(a.hecke_atoms == perms({"1342", "3124", "3142"}), "B_fpf(4321)");
    o.require(a.atoms == perms({"1342", "3124"}), "A_fpf(4321)");
    BetaPoly sum = grothendieck(P("1342")) + grothendieck(P("3124")) + grothendieck(P("3142")).scaled(Rational(1), 1);
    o.require(sp_groth(P("4321")) == sum, "GSp_4321 atom sum");
    for (int n = 2; n <= 6; n += 2)
        for (const auto& z : fpf_involutions(n)) {
            auto closure = hecke_atoms_closure(z);
            o.require(hecke_atoms_dp(z) == closure, "DP vs closure at " + z.compact());
            std::set<Permutation> minimal;
            for (const auto& w : closure)
                if (length(w) == fpf_length(z)) minimal.insert(w);
            o.require(atoms_from_prec(z) == minimal, "atoms vs prec closure at " + z.compact());
        }
    return o;
}

Outcome o_table() {
    Outcome o;
    const std::vector<std::pair<const char*, const char*>> i3 = {
        {"123", "1"},
        {"213", "2*x1 + beta*x1^2"},
        {"132", "2*x1 + 2*x2 + beta*x1^2 + 4*beta*x1*x2 + beta*x2^2 + 2*beta^2*x1^2*x2 + 2*beta^2*x1*x2^2 + beta^3*x1^2*x2^2"},
        {"321", "2*x1^2 + 2*x1*x2 + beta*x1^3 + 3*beta*x1^2*x2 + beta^2*x1^3*x2"}};
    for (const auto& [z, p] : i3) o.require(o_groth(P(z), ORoute::pfaffian) == Q(p), std::string("GO_") + z + " (Pfaffian)");
    BetaPoly x1 = x(1), x2 = x(2);
    BetaPoly want3412 = oplus(x1, x1) * oplus(x1, x2) * oplus(x2, x2);
    o.require(o_groth(P("3412"), ORoute::pfaffian) == want3412, "GO_3412 Pfaffian");
    o.require(o_groth(P("3412"), ORoute::dominant) == want3412, "GO_3412 dominant");
    BetaPoly want321 = Q("2*x1 + beta*x1^2") * Q("x1 + x2 + beta*x1*x2");
    o.require(o_groth(P("321"), ORoute::pfaffian) == want321, "GO_321 factored form");
    o.require(o_groth(P("321"), ORoute::hilbert) == want321, "GO_321 from the Hilbert series");
    return o;
}

Outcome o_4571263() {
    Outcome o;
    BetaPoly p = o_vexillary(P("4571263"), OEngine::e1).poly;
    std::set<long long> coeffs;
    for (const auto& [k, c] : p.raw()) coeffs.insert(c.to_ll());
    const std::set<long long> printed{1,   2,   4,   5,   7,   8,   9,   10,  12,  16,  24,  28,  30,  32,  34,  41,  43,  64,
                                      65,  72,  80,  109, 110, 116, 121, 128, 142, 159, 173, 177, 180, 246, 261, 292, 344};
    o.require(p.size() == 865, "term count " + std::to_string(p.size()));
    o.require(coeffs.size() == 35 && coeffs == printed, "coefficient set");
    BetaPoly top;
    for (const auto& [k, c] : p.raw())
        if (k.beta >= 10) top.add_term(k.x, k.beta, c);
    o.require(top == Q("beta^11*x1^5*x2^5*x3^5*x4*x5*x6 + beta^10*x1^5*x2^5*x3^5*x4*x5 + beta^10*x1^5*x2^5*x3^5*x4*x6"
                       " + beta^10*x1^5*x2^5*x3^5*x5*x6 + 5*beta^10*x1^5*x2^5*x3^4*x4*x5*x6"
                       " + 5*beta^10*x1^5*x2^4*x3^5*x4*x5*x6 + 5*beta^10*x1^4*x2^5*x3^5*x4*x5*x6"),
              "beta^11 and beta^10 terms");
    return o;
}

Outcome engine_agreement() {
    Outcome o;
    int count = 0;
    for (const auto& z : involutions(5)) {
        if (!classify(z).vexillary) continue;
        ++count;
        o.require(o_vexillary(z, OEngine::e1).poly == o_vexillary(z, OEngine::e2).poly, "E1 vs E2 at " + z.compact());
    }
    o.require(count > 0, "no vexillary involutions found");
    return o;
}

Outcome stability() {
    Outcome o;
    for (const auto& z : involutions(4)) {
        if (!o_computable(z)) continue;
        BetaPoly a = o_groth(z), b = o_groth(one_pad(z, 1));
        o.require(a == b, "GO stability at " + z.compact());
    }
    for (const auto& z : fpf_involutions(4))
        o.require(sp_groth(direct_sum(z, P("21"))) == sp_groth(z), "GSp z x 21 at " + z.compact());
    return o;
}

Outcome divided_differences() {
    Outcome o;
    for (const auto& z : fpf_involutions(6))
        for (int i = 1; i < 6; ++i) {
            BetaPoly lhs = beta_divided_difference(sp_groth(z), i);
            bool descent = z(i) != i + 1 && z(i) > z(i + 1) && z(i + 1) != i;
            BetaPoly rhs = descent ? sp_groth(z.conj_s(i)) : sp_groth(z).scaled(Rational(-1), 1);
            o.require(lhs == rhs, "fpf divided difference at " + z.compact() + " i=" + std::to_string(i));
        }
    int pairs = 0;
    for (const auto& z : involutions(4))
        for (int i = 1; i < 4; ++i)
            if (auto r = o_vex_divided_difference_check(z, i)) {
                ++pairs;
                o.require(*r, "vexillary divided difference at " + z.compact() + " i=" + std::to_string(i));
            }
    o.require(pairs > 0, "no admissible vexillary pairs");
    return o;
}

BetaPoly random_entry(std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-4, 4), ex(0, 2), nterms(0, 3);
    BetaPoly p(3);
    int t = nterms(rng);
    for (int i = 0; i < t; ++i) p.add_term(Monomial::from_exponents({ex(rng), ex(rng), ex(rng)}), ex(rng), Rational(coef(rng)));
    return p;
}

template <class T, class Gen>
bool pf_squared_is_det(int r, Gen gen, const T& zero, const T& one) {
    SkewMatrix<T> M(r, zero);
    std::vector<std::vector<T>> A(r, std::vector<T>(r, zero));
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j) {
            T v = gen();
            M.set(i, j, v);
            A[i - 1][j - 1] = v;
            A[j - 1][i - 1] = zero - v;
        }
    T pf = pfaffian(M, one);
    return pf * pf == determinant(A, zero, one);
}

Outcome pfaffian_sanity() {
    Outcome o;
    std::mt19937 rng(20261016);
    std::uniform_int_distribution<int> d(-20, 20);
    for (int r : {4, 6})
        for (int t = 0; t < 20; ++t) {
            o.require(pf_squared_is_det<Rational>(r, [&] { return Rational(d(rng)); }, Rational(0), Rational(1)),
                      "integer matrix size " + std::to_string(r));
            o.require(pf_squared_is_det<BetaPoly>(r, [&] { return random_entry(rng); }, BetaPoly(3), BetaPoly::one(3)),
                      "polynomial matrix size " + std::to_string(r));
        }
    return o;
}

Outcome final_theorem() {
    Outcome o;
    std::vector<Permutation> zs;
    for (const auto& z : involutions(4))
        if (classify(z).vexillary) zs.push_back(z);
    for (int n = 2; n <= 5; ++n) zs.push_back(Permutation::longest(n));
    Permutation igr = P("(1,4)(3,5)");
    zs.push_back(igr);
    auto g = classify(igr).i_grassmannian;
    o.require(g && g->n == 3 && g->phi == std::vector<int>{1, 3}, "(1,4)(3,5) should be I-Grassmannian");
    for (const auto& z : zs) {
        o.require(classify(z).vexillary, z.compact() + " is not vexillary");
        Partition lam = o_code_and_shape(z).shape;
        SymSeries pf = GQ_o_stable_vexillary(z, 3, 6);
        o.require(pf.is_symmetric(), "stable Pfaffian not symmetric at " + z.compact());
        o.require(pf.poly == GQ(lam, 3, 6).poly, "GQO vs GQ_" + partition_str(lam) + " at " + z.compact());
    }
    // n...321 gives (n-1, n-3, ...), I-Grassmannian gives (n+1-phi_i).
    o.require(o_code_and_shape(P("54321")).shape == Partition{4, 2}, "lambda^O(54321)");
    o.require(o_code_and_shape(igr).shape == Partition{3, 1}, "lambda^O((1,4)(3,5))");
    return o;
}

Outcome nakagawa_naruse() {
    Outcome o;
    for (Partition lam : std::vector<Partition>{{1}, {2}, {3}, {2, 1}, {3, 1}, {3, 2}})
        o.require(GQ_pfaffian(lam, 3, 6).poly == GQ(lam, 3, 6).poly, "Pfaffian GQ_" + partition_str(lam));
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b < a; ++b) {
            Partition lam{a};
            if (b > 0) lam.push_back(b);
            o.require(GQ_two_row(a, b, 3, 6).poly == GQ(lam, 3, 6).poly, "two-row GQ_" + partition_str(lam));
        }
    return o;
}

Outcome positivity() {
    Outcome o;
    for (const auto& w : all_permutations(4)) {
        PositivityReport r = positivity_report(stable_G(w, 6, 6), SymBasis::G, 6);
        o.require(r.attempted && r.expansion.complete && r.nonnegative, "G_" + w.compact() + " in {G_lambda}");
    }
    for (const auto& z : fpf_involutions(6)) {
        PositivityReport r = positivity_report(GP_sp_stable(z, 6, 6), SymBasis::GP, 6);
        o.require(r.attempted && r.expansion.complete && r.nonnegative, "GPSp_" + z.compact() + " in {GP_lambda}");
    }
    return o;
}

Outcome gp_sp_top() {
    Outcome o;
    o.require(GP_sp_stable(P("4321"), 3, 6).poly == GP({2}, 3, 6).poly, "GPSp_4321 = GP_(2)");
    o.require(GP_sp_stable(P("654321"), 3, 6).poly == GP({4, 2}, 3, 6).poly, "GPSp_654321 = GP_(4,2)");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* what;
        std::function<Outcome()> run;
        double limit;  // seconds, 0 for none
    };
    std::vector<Criterion> cs = {
        {1, "type A table and route agreement", typeA_table, 1.0},
        {2, "symplectic table and route agreement on I^FPF_6", sp_table, 10.0},
        {3, "atom decomposition of 4321; DP = closure for n <= 6", atom_decomposition, 0},
        {4, "orthogonal table I_3, 3412, 321", o_table, 5.0},
        {5, "GO_4571263: 865 terms, 35 coefficients, top terms", o_4571263, 300.0},
        {6, "E1 = E2 on vexillary I_5", engine_agreement, 60.0},
        {7, "stability under z x 1 and z x 21", stability, 0},
        {8, "divided-difference propositions", divided_differences, 0},
        {9, "pf^2 = det over Z and Z[beta][x]", pfaffian_sanity, 0},
        {10, "GQO_z = GQ_lambda(z) at k = 3, degree <= 6", final_theorem, 0},
        {11, "GQ Pfaffian and two-row formulas", nakagawa_naruse, 0},
        {12, "N[beta]-positivity of G_w and GPSp_z expansions", positivity, 0},
        {13, "GPSp of the longest element", gp_sp_top, 0},
    };
    int failures = 0;
    for (const auto& c : cs) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.why = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (o.ok && c.limit > 0 && secs > c.limit) {
            o.ok = false;
            o.why = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit) + " s";
        }
        if (!o.ok) ++failures;
        std::printf("%s criterion %d: %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.what, secs, o.ok ? "" : " -- ",
                    o.ok ? "" : o.why.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
