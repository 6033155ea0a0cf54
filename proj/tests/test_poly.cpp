#include <gtest/gtest.h>

#include <random>

#include "kgroth/json_io.hpp"
#include "kgroth/poly.hpp"
#include "kgroth/rational.hpp"

using namespace kgroth;

TEST(Rational, NormalizesAndCompares) {
    EXPECT_EQ(Rational(6, -4), Rational(-3, 2));
    EXPECT_EQ((Rational(1, 3) + Rational(1, 6)).str(), "1/2");
    EXPECT_TRUE(Rational(-1, 2) < Rational(1, 3));
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, BinomialHandlesNegativeUpper) {
    EXPECT_EQ(binomial(5, 2), Rational(10));
    EXPECT_EQ(binomial(-1, 3), Rational(-1));
    EXPECT_EQ(binomial(-2, 2), Rational(3));
    EXPECT_EQ(binomial(3, -1), Rational(0));
}

TEST(BetaPoly, OplusIsTheFormalGroupLaw) {
    BetaPoly a = oplus(x(1), x(2));
    EXPECT_EQ(a, parse_poly("x1 + x2 + beta*x1*x2"));
    // x (-) y undoes (+) up to the truncation degree
    BetaPoly back = ominus(a, x(2), 6);
    EXPECT_EQ(back.truncated(6), x(1));
}

TEST(BetaPoly, MulTruncMatchesTruncatedProduct) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> e(0, 3), c(-5, 5);
    for (int t = 0; t < 50; ++t) {
        BetaPoly f(3), g(3);
        for (int i = 0; i < 5; ++i) {
            f.add_term(Monomial::from_exponents({e(rng), e(rng), e(rng)}), e(rng), Rational(c(rng)));
            g.add_term(Monomial::from_exponents({e(rng), e(rng), e(rng)}), e(rng), Rational(c(rng)));
        }
        EXPECT_EQ(BetaPoly::mul_trunc(f, g, 5), (f * g).truncated(5));
    }
}

TEST(BetaPoly, BetaDividedDifferenceOnProducts) {
    // d_i^(beta) kills polynomials symmetric in x_i, x_{i+1} up to -beta
    BetaPoly sym = x(1) * x(2) + x(3);
    EXPECT_EQ(beta_divided_difference(sym, 1), sym.scaled(Rational(-1), 1));
    EXPECT_EQ(divided_difference(x(1), 1), BetaPoly::one());
}

TEST(BetaPoly, SpecializeBetaZero) {
    BetaPoly p = parse_poly("2*x1 + beta*x1^2");
    EXPECT_EQ(p.specialize_beta(Rational(0)), parse_poly("2*x1"));
    EXPECT_EQ(p.specialize_beta(Rational(-1)), parse_poly("2*x1 - x1^2"));
}

TEST(GradedExpansion, RecoversKnownCombination) {
    // basis e_m = x^m (1 + beta x)
    auto lookup = [](const Monomial& m) -> std::optional<std::pair<int, BetaPoly>> {
        return std::make_pair(static_cast<int>(m[1]), BetaPoly::monomial(m) * parse_poly("1 + beta*x1"));
    };
    BetaPoly b1 = BetaPoly::monomial(Monomial::var(1)) * parse_poly("1 + beta*x1");
    BetaPoly b2 = BetaPoly::monomial(Monomial::var(1, 2)) * parse_poly("1 + beta*x1");
    BetaPoly target = b1.scaled(Rational(3)) + b2.scaled(Rational(2), 1);
    auto e = expand_in_graded_basis<int>(target, lookup, -1);
    ASSERT_TRUE(e.complete);
    ASSERT_EQ(e.coefficients.size(), 2u);
    EXPECT_EQ(e.coefficients[0].second, BetaScalar(Rational(3)));
    EXPECT_EQ(e.coefficients[1].second, BetaScalar(Rational(2), 1));
}
