#include <gtest/gtest.h>

#include <random>

#include "kgroth/json_io.hpp"
#include "kgroth/verify.hpp"

using namespace kgroth;

TEST(Json, RoundTrip) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> e(0, 3), c(-9, 9), b(-2, 3);
    for (int t = 0; t < 40; ++t) {
        BetaPoly p(4);
        for (int i = 0; i < 8; ++i) p.add_term(Monomial::from_exponents({e(rng), e(rng), e(rng), e(rng)}), b(rng), Rational(c(rng), 1 + e(rng)));
        json j = poly_to_json(p);
        EXPECT_EQ(j["schema"], kPolySchema);
        BetaPoly back = poly_from_json(json::parse(j.dump()));
        EXPECT_EQ(back, p);
        EXPECT_EQ(back.nvars(), p.nvars());
    }
}

TEST(Json, RejectsWrongSchema) {
    json j = poly_to_json(x(1));
    j["schema"] = "other/9";
    EXPECT_THROW(poly_from_json(j), std::invalid_argument);
}

TEST(Json, DeterministicOutput) {
    BetaPoly p = parse_poly("x2 + x1 + beta*x1*x2 + 3*x1^2");
    BetaPoly q = parse_poly("3*x1^2 + beta*x1*x2 + x1 + x2");
    EXPECT_EQ(poly_to_json(p).dump(), poly_to_json(q).dump());
}

TEST(Text, ParseInvertsStr) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> e(0, 3), c(-9, 9), b(-1, 3);
    for (int t = 0; t < 40; ++t) {
        BetaPoly p(3);
        for (int i = 0; i < 6; ++i) p.add_term(Monomial::from_exponents({e(rng), e(rng), e(rng)}), b(rng), Rational(c(rng), 1 + e(rng)));
        EXPECT_EQ(parse_poly(p.str()), p) << p.str();
    }
    EXPECT_EQ(parse_poly("0").is_zero(), true);
    EXPECT_THROW(parse_poly("x1 +"), std::invalid_argument);
    EXPECT_THROW(parse_poly("y1"), std::invalid_argument);
}

TEST(Latex, FormatsTermsAndFactors) {
    EXPECT_EQ(poly_latex(parse_poly("2*x1 + beta*x1^2")), "2 x_{1} + \\beta x_{1}^{2}");
    EXPECT_EQ(oplus_product_latex(o_diagram(parse_permutation("3412"))),
              "(x_{1} \\oplus x_{1})(x_{2} \\oplus x_{1})(x_{2} \\oplus x_{2})");
}

TEST(Verify, RegisteredSuitesAreKnown) {
    EXPECT_EQ(suite_names().size(), 15u);
    EXPECT_THROW(run_suite("no-such-suite"), std::invalid_argument);
}

TEST(Verify, QuickSuitesPass) {
    for (const char* s : {"typeA-s3", "sp-table-i4", "o-table-i3", "o-3412", "atoms-4321", "pf-det", "vex-dd-prop"}) {
        SuiteReport r = run_suite(s, VerifyOptions{-1, -1, 2});
        for (const auto& c : r.cases) EXPECT_TRUE(c.pass) << s << " :: " << c.name << " " << c.detail;
    }
}

TEST(Verify, DominantSearchIsReportOnly) {
    SuiteReport r = run_suite("o-dominant-search", VerifyOptions{4, -1, 1});
    EXPECT_TRUE(r.pass());
}
