#include <gtest/gtest.h>

#include "kgroth/hecke_sp.hpp"
#include "kgroth/json_io.hpp"

using namespace kgroth;

TEST(HeckeModule, ActionRules) {
    Permutation t = theta(4);
    EXPECT_FALSE(n_action(t, 1).has_value());
    EXPECT_EQ(*n_action(t, 2), parse_permutation("3412"));
    EXPECT_EQ(*n_action(parse_permutation("4321"), 1), parse_permutation("4321"));
    EXPECT_THROW(n_action(parse_permutation("1234"), 1), std::invalid_argument);
}

TEST(HeckeAtoms, RoutesAgreeThroughN8ForSmallSample) {
    for (const auto& z : fpf_involutions(8)) {
        if (fpf_length(z) > 5) continue;
        EXPECT_EQ(hecke_atoms_dp(z), hecke_atoms_closure(z)) << z.str();
    }
}

TEST(HeckeAtoms, AtomsHaveFpfLength) {
    for (const auto& z : fpf_involutions(6)) {
        AtomSets a = hecke_atoms(z);
        EXPECT_FALSE(a.atoms.empty());
        for (const auto& w : a.atoms) EXPECT_EQ(length(w), fpf_length(z));
        EXPECT_TRUE(a.atoms.count(alpha_fpf(z)));
    }
}

TEST(SpGroth, Routes) {
    for (const auto& z : fpf_involutions(6)) {
        BetaPoly dd = sp_groth(z);
        EXPECT_EQ(sp_groth(z, SpRoute::atoms), dd) << z.str();
        EXPECT_EQ(sp_groth(z, SpRoute::pipedream), dd) << z.str();
        if (classify(z).sp_dominant) { EXPECT_EQ(sp_groth(z, SpRoute::dominant), dd) << z.str(); }
        EXPECT_TRUE(dd.has_nonnegative_coefficients());
        EXPECT_EQ(dd.is_zero() ? 0 : dd.min_degree(), fpf_length(z));
    }
}

TEST(SpGroth, DominantRouteRejectsNonDominant) {
    EXPECT_THROW(sp_groth(parse_permutation("215634"), SpRoute::dominant), std::invalid_argument);
    EXPECT_THROW(sp_groth(parse_permutation("2134")), std::invalid_argument);
}

TEST(SpGroth, Stability) {
    for (const auto& z : fpf_involutions(6)) EXPECT_EQ(sp_groth(direct_sum(z, parse_permutation("21"))), sp_groth(z));
}

TEST(SpGroth, TwoTableEntries) {
    EXPECT_EQ(sp_groth(parse_permutation("3412")), parse_poly("x1 + x2 + beta*x1*x2"));
}
