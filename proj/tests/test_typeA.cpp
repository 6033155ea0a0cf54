#include <gtest/gtest.h>

#include "kgroth/grothendieck.hpp"
#include "kgroth/json_io.hpp"

using namespace kgroth;

TEST(Grothendieck, LongestElementIsStaircase) {
    EXPECT_EQ(grothendieck(Permutation::longest(4)), parse_poly("x1^3*x2^2*x3"));
}

TEST(Grothendieck, DividedDifferenceRecursion) {
    for (const auto& w : all_permutations(4))
        for (int i = 1; i < 4; ++i) {
            BetaPoly d = beta_divided_difference(grothendieck(w), i);
            if (w(i) > w(i + 1)) { EXPECT_EQ(d, grothendieck(w.times_s(i))) << w.str() << " i=" << i; }
            else { EXPECT_EQ(d, grothendieck(w).scaled(Rational(-1), 1)) << w.str() << " i=" << i; }
        }
}

TEST(Grothendieck, StableUnderOnePadding) {
    for (const auto& w : all_permutations(4)) EXPECT_EQ(grothendieck(one_pad(w, 1)), grothendieck(w)) << w.str();
}

TEST(Grothendieck, BetaZeroGivesSchubertDegree) {
    for (const auto& w : all_permutations(4)) {
        BetaPoly s = grothendieck(w).specialize_beta(Rational(0));
        if (s.is_zero()) continue;
        EXPECT_EQ(s.min_degree(), length(w));
        EXPECT_EQ(s.max_degree(), length(w));
    }
}

TEST(Grothendieck, NonnegativeCoefficients) {
    for (const auto& w : all_permutations(5)) EXPECT_TRUE(grothendieck(w).has_nonnegative_coefficients()) << w.str();
}

TEST(Grothendieck, PipeDreamsAgreeInS5) {
    for (const auto& w : all_permutations(5)) {
        BetaPoly dd = grothendieck(w);
        EXPECT_EQ(groth_via_pipedreams(w, dd.max_degree()), dd) << w.str();
    }
}

TEST(Grothendieck, LehmerCodeRoundTrip) {
    for (const auto& w : all_permutations(5)) EXPECT_EQ(from_lehmer_code(lehmer_code(w)), w.trimmed());
}

TEST(Grothendieck, HeckeProductIsDemazure) {
    Permutation id = Permutation::identity(3);
    EXPECT_EQ(hecke_product(id, {1, 1}), Permutation::simple(1, 3));
    EXPECT_EQ(hecke_product(id, {1, 2, 1, 2}), Permutation::longest(3));
}

TEST(StableG, MatchesTableauxForGrassmannian) {
    for (Partition lam : std::vector<Partition>{{1}, {2}, {1, 1}, {2, 1}}) {
        Permutation w = w_lambda(lam, 5);
        EXPECT_EQ(stable_G(w, 3, 5).poly, G_lambda(lam, 3, 5).poly) << partition_str(lam);
    }
}
