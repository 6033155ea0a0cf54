#include <gtest/gtest.h>

#include "kgroth/perm.hpp"

using namespace kgroth;

TEST(Permutation, ParsesAllInputForms) {
    EXPECT_EQ(parse_permutation("4,5,7,1,2,6,3"), parse_permutation("4571263"));
    EXPECT_EQ(parse_permutation("(1,3)(2,4)"), parse_permutation("3412"));
    EXPECT_EQ(parse_permutation("(1,4)(3,5)"), parse_permutation("4,2,5,1,3"));
    EXPECT_THROW(parse_permutation("1,1,2"), std::invalid_argument);
    EXPECT_THROW(parse_permutation("(1,2)(2,3)"), std::invalid_argument);
    EXPECT_THROW(parse_permutation("1,x"), std::invalid_argument);
}

TEST(Permutation, Counts) {
    EXPECT_EQ(all_permutations(4).size(), 24u);
    EXPECT_EQ(involutions(4).size(), 10u);
    EXPECT_EQ(involutions(5).size(), 26u);
    EXPECT_EQ(fpf_involutions(6).size(), 15u);
}

TEST(Permutation, LengthsAndFpfLength) {
    EXPECT_EQ(length(Permutation::longest(4)), 6);
    EXPECT_EQ(fpf_length(parse_permutation("2143")), 0);
    EXPECT_EQ(fpf_length(parse_permutation("4321")), 2);
    for (const auto& z : fpf_involutions(6)) EXPECT_EQ(fpf_length(z), static_cast<int>(sp_diagram(z).size()));
}

TEST(Diagrams, ODiagramIsWeaklyBelowDiagonal) {
    for (const auto& z : involutions(5)) {
        for (const auto& c : o_diagram(z)) {
            EXPECT_GE(c.row, c.col);
            EXPECT_TRUE(rothe_diagram(z).count(c));
        }
    }
}

TEST(Classify, VexillaryMeansAvoiding2143) {
    for (int n = 1; n <= 6; ++n)
        for (const auto& z : involutions(n)) EXPECT_EQ(classify(z).vexillary, !contains_2143(z)) << z.str();
    EXPECT_FALSE(classify(parse_permutation("2143")).vexillary);
    EXPECT_TRUE(classify(parse_permutation("4571263")).vexillary);
    // the pattern and the essential-set chain test must agree here
    EXPECT_FALSE(contains_2143(parse_permutation("3,5,1,4,2")));
    EXPECT_TRUE(classify(parse_permutation("3,5,1,4,2")).vexillary);
}

TEST(Classify, DominantShapes) {
    EXPECT_TRUE(classify(parse_permutation("3412")).o_dominant);
    EXPECT_TRUE(classify(parse_permutation("321")).o_dominant);
    EXPECT_FALSE(classify(parse_permutation("2143")).o_dominant);
    EXPECT_TRUE(classify(parse_permutation("4321")).sp_dominant);
    EXPECT_FALSE(classify(parse_permutation("215634")).sp_dominant);
}

TEST(Classify, LambdaO) {
    EXPECT_EQ(o_code_and_shape(parse_permutation("54321")).shape, (Partition{4, 2}));
    EXPECT_EQ(o_code_and_shape(parse_permutation("21")).shape, (Partition{1}));
    auto g = i_grassmannian(parse_permutation("(1,4)(3,5)"));
    ASSERT_TRUE(g);
    EXPECT_EQ(g->n, 3);
    EXPECT_EQ(g->phi, (std::vector<int>{1, 3}));
}

TEST(Partition, ParseAndConjugate) {
    EXPECT_EQ(parse_partition("3,1"), (Partition{3, 1}));
    EXPECT_THROW(parse_partition("1,3"), std::invalid_argument);
    EXPECT_EQ(conjugate({3, 1}), (Partition{2, 1, 1}));
    EXPECT_TRUE(is_strict({3, 1}));
    EXPECT_FALSE(is_strict({2, 2}));
}
