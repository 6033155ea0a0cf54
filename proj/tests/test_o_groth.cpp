#include <gtest/gtest.h>

#include "kgroth/json_io.hpp"
#include "kgroth/o_groth.hpp"

using namespace kgroth;

TEST(OGroth, DominantProduct3412) {
    BetaPoly want = oplus(x(1), x(1)) * oplus(x(1), x(2)) * oplus(x(2), x(2));
    EXPECT_EQ(o_dominant(parse_permutation("3412")), want);
    EXPECT_EQ(o_groth(parse_permutation("3412"), ORoute::pfaffian, OEngine::e2), want);
}

TEST(OGroth, HilbertClassOf321) {
    HilbertClass h = o_hilbert_monomial(parse_permutation("321"));
    EXPECT_EQ(h.codim, 2);
    EXPECT_EQ(h.poly, parse_poly("2*x1 + beta*x1^2") * parse_poly("x1 + x2 + beta*x1*x2"));
}

TEST(OGroth, HilbertRouteAgreesWithProductOnDominant) {
    for (int n = 1; n <= 5; ++n)
        for (const auto& z : involutions(n))
            if (classify(z).o_dominant) { EXPECT_EQ(o_hilbert_monomial(z).poly, o_dominant(z)) << z.str(); }
}

TEST(OGroth, UncomputableIsDistinct) {
    Permutation z = parse_permutation("2143");
    EXPECT_FALSE(o_computable(z));
    EXPECT_THROW(o_groth(z), Uncomputable);
    EXPECT_THROW(o_hilbert_monomial(z), Uncomputable);
    EXPECT_THROW(o_groth(parse_permutation("231")), std::invalid_argument);
}

TEST(OGroth, PlanForLargeExample) {
    PfaffianPlan p = pfaffian_plan(parse_permutation("4571263"));
    EXPECT_EQ(p.r % 2, 0);
    EXPECT_EQ(p.length, static_cast<int>(o_code_and_shape(p.z).shape.size()));
    EXPECT_EQ(*p.S.rbegin(), p.length);
}

TEST(OGroth, EnginesAgreeOnVexillaryI5) {
    for (const auto& z : involutions(5)) {
        if (!classify(z).vexillary) continue;
        BetaPoly e1 = o_vexillary(z, OEngine::e1).poly;
        EXPECT_EQ(e1, o_vexillary(z, OEngine::e2).poly) << z.str();
        EXPECT_TRUE(e1.has_nonnegative_coefficients()) << z.str();
        if (classify(z).o_dominant) { EXPECT_EQ(e1, o_dominant(z)) << z.str(); }
    }
}

TEST(OGroth, ExplicitMaxdegTruncates) {
    Permutation z = parse_permutation("132");
    OVexResult r = o_vexillary(z, OEngine::e1, 2);
    EXPECT_TRUE(r.truncated);
    EXPECT_EQ(r.poly, o_groth(z).truncated(2));
}

TEST(OGroth, StabilityOnI5) {
    for (const auto& z : involutions(5))
        if (o_computable(z)) { EXPECT_TRUE(o_stability_check(z, 1)) << z.str(); }
}

TEST(OGroth, LowestDegreeIsDiagramSize) {
    for (const auto& z : involutions(5))
        if (o_computable(z)) {
            BetaPoly p = o_groth(z);
            EXPECT_EQ(p.min_degree(), static_cast<int>(o_diagram(z).size())) << z.str();
        }
}
