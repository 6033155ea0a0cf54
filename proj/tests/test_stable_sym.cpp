#include <gtest/gtest.h>

#include "kgroth/json_io.hpp"
#include "kgroth/stable_sym.hpp"

using namespace kgroth;

TEST(Tableaux, GQOneInOneVariable) { EXPECT_EQ(GQ({1}, 1, -1).poly, parse_poly("2*x1 + beta*x1^2")); }

TEST(Tableaux, GPOneIsGOne) {
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(GP({1}, k, 5).poly, G_lambda({1}, k, 5).poly);
}

TEST(Tableaux, SymmetricUpToTruncation) {
    for (Partition lam : std::vector<Partition>{{1}, {2}, {2, 1}, {3, 1}}) {
        EXPECT_TRUE(GP(lam, 3, 6).is_symmetric());
        EXPECT_TRUE(GQ(lam, 3, 6).is_symmetric());
    }
}

TEST(Tableaux, BetaZeroGivesSchurPQ) {
    // Q_lambda = 2^{l(lambda)} P_lambda; P_(1) = p_1, P_(2) = h_2 + e_2 in 3 variables
    for (Partition lam : std::vector<Partition>{{1}, {2}, {2, 1}}) {
        int size = 0;
        for (int v : lam) size += v;
        BetaPoly p = GP(lam, 3, size).poly.specialize_beta(Rational(0));
        BetaPoly q = GQ(lam, 3, size).poly.specialize_beta(Rational(0));
        EXPECT_EQ(q, p.scaled(Rational(1 << lam.size()))) << partition_str(lam);
    }
    EXPECT_EQ(GP({2}, 3, 2).poly.specialize_beta(Rational(0)),
              parse_poly("x1^2 + x2^2 + x3^2 + 2*x1*x2 + 2*x1*x3 + 2*x2*x3"));
}

TEST(TwoRow, MatchesTableaux) {
    EXPECT_EQ(GQ_two_row(0, 0, 2, 4).poly, BetaPoly::one(2));
    EXPECT_EQ(GQ_two_row(1, 0, 2, 4).poly, GQ({1}, 2, 4).poly);
    EXPECT_EQ(GQ_two_row(2, 1, 2, 5).poly, GQ({2, 1}, 2, 5).poly);
}

TEST(NakagawaNaruse, SmallShapes) {
    EXPECT_EQ(GQ_pfaffian({2, 1}, 2, 5).poly, GQ({2, 1}, 2, 5).poly);
    EXPECT_EQ(GQ_pfaffian({1}, 3, 5).poly, GQ({1}, 3, 5).poly);
    EXPECT_EQ(GQ_pfaffian({3, 1}, 3, 6).poly, GQ({3, 1}, 3, 6).poly);
}

TEST(StableSp, RoutesAgreeOnI4) {
    for (const auto& z : fpf_involutions(4))
        EXPECT_EQ(GP_sp_stable(z, 2, 5).poly, GP_sp_stable(z, 2, 5, SpStableRoute::limit).poly) << z.str();
    EXPECT_EQ(GP_sp_stable(theta(4), 3, 5).poly, BetaPoly::one(3));
}

TEST(StableSp, RoutesAgreeOn3412) {
    Permutation z = parse_permutation("3412");
    EXPECT_EQ(GP_sp_stable(z, 2, 5).poly, GP_sp_stable(z, 2, 5, SpStableRoute::limit).poly);
}

TEST(StableO, VexillaryI4) {
    for (const auto& z : involutions(4)) {
        if (!classify(z).vexillary) continue;
        SymSeries a = GQ_o_stable_vexillary(z, 3, 6);
        EXPECT_TRUE(a.is_symmetric()) << z.str();
        EXPECT_EQ(a.poly, GQ(o_code_and_shape(z).shape, 3, 6).poly) << z.str();
        EXPECT_EQ(a.poly, GQ_o_limit(z, 3, 6).poly) << z.str();
    }
}

TEST(StableO, TwentyOneIsGQOne) { EXPECT_EQ(GQ_o_stable_vexillary(parse_permutation("21"), 3, 6).poly, GQ({1}, 3, 6).poly); }

TEST(Positivity, RequiresFaithfulTruncation) {
    PositivityReport r = positivity_report(GP({2}, 3, 6), SymBasis::GP, 6);
    EXPECT_FALSE(r.faithful);
    EXPECT_FALSE(r.attempted);
}

TEST(Positivity, BasisElementExpandsToItself) {
    PositivityReport r = positivity_report(GQ({2, 1}, 5, 5), SymBasis::GQ, 5);
    ASSERT_TRUE(r.attempted);
    ASSERT_TRUE(r.expansion.complete);
    ASSERT_EQ(r.expansion.coefficients.size(), 1u);
    EXPECT_EQ(r.expansion.coefficients[0].first, (Partition{2, 1}));
    EXPECT_EQ(r.expansion.coefficients[0].second, BetaScalar(Rational(1)));
}

TEST(Positivity, GQOneSquaredReportRuns) {
    SymSeries g = GQ({1}, 4, 4);
    SymSeries sq{BetaPoly::mul_trunc(g.poly, g.poly, 4), 4, 4};
    PositivityReport r = positivity_report(sq, SymBasis::GQ, 4);
    EXPECT_TRUE(r.attempted);
    EXPECT_TRUE(r.expansion.complete);
}

TEST(GrothendieckBasis, GrothendieckPolynomialIsItsOwnExpansion) {
    Permutation w = parse_permutation("1342");
    auto e = expand_in_grothendieck_basis(grothendieck(w), -1);
    ASSERT_TRUE(e.complete);
    ASSERT_EQ(e.coefficients.size(), 1u);
    EXPECT_EQ(e.coefficients[0].first, w);
}

TEST(GrothendieckBasis, SpAtomDecomposition) {
    auto e = expand_in_grothendieck_basis(sp_groth(parse_permutation("4321")), -1);
    ASSERT_TRUE(e.complete);
    // indices come back trimmed of trailing fixed points
    std::map<Permutation, BetaScalar> got(e.coefficients.begin(), e.coefficients.end());
    std::map<Permutation, BetaScalar> want{{parse_permutation("1342"), BetaScalar(Rational(1))},
                                           {parse_permutation("312"), BetaScalar(Rational(1))},
                                           {parse_permutation("3142"), BetaScalar(Rational(1), 1)}};
    EXPECT_EQ(got, want);
}
