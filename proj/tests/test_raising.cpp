#include <gtest/gtest.h>

#include <random>

#include "kgroth/json_io.hpp"
#include "kgroth/raising.hpp"

using namespace kgroth;

TEST(Raising, ApplyTShiftsSubscript) {
    RaisingExpr e = apply_T(RaisingExpr::monomial({1, 0}), 1, 2);
    EXPECT_EQ(e, RaisingExpr::monomial({3, 0}));
}

TEST(Raising, NegativeExponentNeedsCap) {
    EXPECT_THROW(apply_one_minus_betaT(RaisingExpr::monomial({1}), 1, -1), std::invalid_argument);
    RaisingExpr e = apply_one_minus_betaT(RaisingExpr::monomial({1}), 1, -1, 3);
    // c1 + beta c2 + beta^2 c3
    RaisingExpr want = RaisingExpr::monomial({1});
    want += RaisingExpr::monomial({2}, BetaScalar(Rational(1), 1));
    want += RaisingExpr::monomial({3}, BetaScalar(Rational(1), 2));
    EXPECT_EQ(e, want);
}

TEST(CSeries, OneVariableCoefficients) {
    // (1 + x t)/(1 + xbar t) with xbar = -x/(1+beta x): c_1 = x - xbar = 2x - beta x^2 + ...
    auto c = CSeries::flagged(1, 1).coefficients(3);
    EXPECT_EQ(c[0], BetaPoly::one(1));
    EXPECT_EQ(c[1].truncated(2), parse_poly("2*x1 - beta*x1^2"));
}

TEST(Raising, RCOneCZeroIsGQ1) {
    RaisingExpr e = apply_R(RaisingExpr::monomial({1, 0}), 1, 2, 4);
    CSeries c = CSeries::flagged(1, 1);
    EXPECT_EQ(evaluate(e, {c, CSeries::trivial()}, 2), parse_poly("2*x1 + beta*x1^2"));
}

TEST(Phi, ClosedFormsMatchTaylorExpansion) {
    for (int r = 0; r <= 2; ++r)
        for (int s = 0; s <= 2; ++s)
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; b <= 2; ++b) {
                    const int N = 6;
                    RaisingExpr e = RaisingExpr::monomial({a, b});
                    e = apply_one_minus_betaT(e, 1, -r, N);
                    e = apply_one_minus_betaT(e, 2, -s, N);
                    e = apply_R(e, 1, 2, N);
                    EXPECT_EQ(phi_entry(r, s, a, b).taylor(N), phi_of_raising(e, N)) << r << s << a << b;
                }
}

TEST(Phi, FOneOne) {
    // F_{1,1} = beta^-1 (e^{beta D} - 1)
    DExpr f = phi_F(1, 1);
    DExpr want = DExpr::term(1, {0}, {1}, BetaScalar(Rational(1), -1)) - DExpr::constant(1, BetaScalar(Rational(1), -1));
    EXPECT_EQ(f, want) << f.str();
}

TEST(DExprCalculus, IntegrateThenDifferentiate) {
    DExpr g = DExpr::term(1, {2}, {1}, BetaScalar(Rational(3))) + DExpr::term(1, {1}, {0}, BetaScalar(Rational(1), 1)) +
              DExpr::term(1, {0}, {2}, BetaScalar(Rational(-2), 3));
    DExpr G = g.integrate(0, 0);
    EXPECT_EQ(G.derivative(0), g) << G.str();
    EXPECT_TRUE(G.at_zero(0).is_zero()) << G.at_zero(0).str();
}

TEST(Pfaffian, MatchesCombinatorialAndDeterminant) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int r : {2, 4, 6}) {
        SkewMatrix<Rational> M(r, Rational(0));
        std::vector<std::vector<Rational>> A(r, std::vector<Rational>(r, Rational(0)));
        for (int i = 1; i <= r; ++i)
            for (int j = i + 1; j <= r; ++j) {
                Rational v(d(rng));
                M.set(i, j, v);
                A[i - 1][j - 1] = v;
                A[j - 1][i - 1] = -v;
            }
        Rational pf = pfaffian(M, Rational(1));
        EXPECT_EQ(pfaffian_combinatorial(M, Rational(1)), pf);
        EXPECT_EQ(pf * pf, determinant(A, Rational(0), Rational(1)));
    }
    EXPECT_THROW(SkewMatrix<Rational>(3, Rational(0)), std::invalid_argument);
}

TEST(RatFun, ToPolyDividesExactly) {
    BetaPoly f = RatFun::factor_poly({1, 1}) * x(2);
    RatFun q(f, {{{1, 1}, 1}});
    EXPECT_EQ(q.to_poly(), x(2));
    RatFun bad(x(2), {{{1, 1}, 1}});
    EXPECT_THROW(bad.to_poly(), std::exception);
}
