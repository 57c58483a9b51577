#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace yl;

namespace {

// k[x]/(x^2) from structure constants; basis (1, x)
Algebra<Fp> dual_numbers(const Fp& f) {
    std::vector<std::vector<SVec<Fp>>> m(2, std::vector<SVec<Fp>>(2));
    m[0][0] = {{0, 1}};
    m[0][1] = {{1, 1}};
    m[1][0] = {{1, 1}};
    return Algebra<Fp>(f, {"1", "x"}, m, {0});
}

} // namespace

TEST(LoadAlgebra, DualNumbers) {
    auto A = dual_numbers(Fp(2));
    EXPECT_EQ(A.dim(), 2);
    EXPECT_EQ(A.vertices(), 1);
    ASSERT_EQ(A.bar_dim(), 1);
    EXPECT_EQ(A.label(A.bar_basis(0)), "x");
}

TEST(LoadAlgebra, A2Bidegree) {
    auto A = fx::make(Fp(2), fx::a2());
    EXPECT_EQ(A.dim(), 3);
    EXPECT_EQ(A.vertices(), 2);
    ASSERT_EQ(A.bar_dim(), 1);
    // bidegree (2,1) in 1-based vertex names
    EXPECT_EQ(A.bar_left(0), 1);
    EXPECT_EQ(A.bar_right(0), 0);
}

TEST(LoadAlgebra, AssociativityErrorNamesTriple) {
    Fp f(3);
    // basis (1, x, y) with x*x = y, y*x = 0, x*y = x: not associative
    std::vector<std::vector<SVec<Fp>>> m(3, std::vector<SVec<Fp>>(3));
    for (int i = 0; i < 3; ++i) { m[0][i] = {{static_cast<Index>(i), 1}}; m[i][0] = {{static_cast<Index>(i), 1}}; }
    m[1][1] = {{2, 1}};
    m[1][2] = {{1, 1}};
    try {
        Algebra<Fp> A(f, {"1", "x", "y"}, m, {0});
        FAIL() << "expected an associativity error";
    } catch (const AlgebraError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("associativity"), std::string::npos);
        EXPECT_NE(msg.find("(x, x, x)"), std::string::npos) << msg;
    }
}

TEST(LoadAlgebra, IdempotentAxiomFailure) {
    Fp f(2);
    std::vector<std::vector<SVec<Fp>>> m(2, std::vector<SVec<Fp>>(2));
    m[0][0] = {{0, 1}};
    m[0][1] = {{1, 1}};
    m[1][0] = {{1, 1}};
    m[1][1] = {{1, 1}};  // x^2 = x, x listed as an idempotent orthogonal to 1
    EXPECT_THROW(Algebra<Fp>(f, {"1", "x"}, m, {0, 1}), AlgebraError);
}

TEST(Quiver, Examples) {
    auto A = fx::make(Fp(2), fx::truncated_poly(2));
    EXPECT_EQ(A.dim(), 2);
    auto B = fx::make(Fp(2), fx::a2());
    EXPECT_EQ(B.dim(), 3);
    auto C = fx::make(Fp(3), fx::truncated_poly(3));
    EXPECT_EQ(C.dim(), 3);
    auto D = fx::make(Qf{}, fx::local_rad2());
    EXPECT_EQ(D.dim(), 3);
    auto N = fx::make(Fp(3), fx::nakayama2());
    EXPECT_EQ(N.dim(), 4);
}

TEST(Quiver, Errors) {
    auto q = fx::truncated_poly(1);  // relation of length 1
    EXPECT_THROW(fx::make(Fp(2), q), AlgebraError);
    QuiverPresentation free_loop;
    free_loop.vertices = {"1"};
    free_loop.arrows = {Arrow{"x", 0, 0}};
    free_loop.max_length = 6;
    EXPECT_THROW(fx::make(Fp(2), free_loop), AlgebraError);
    // commutativity relation yx - xy together with x^2, y^2
    QuiverPresentation c;
    c.vertices = {"1"};
    c.arrows = {Arrow{"x", 0, 0}, Arrow{"y", 0, 0}};
    c.relations = {{{1, {"x", "x"}}}, {{1, {"y", "y"}}}, {{1, {"x", "y"}}, {-1, {"y", "x"}}}};
    auto A = fx::make(Qf{}, c);
    EXPECT_EQ(A.dim(), 4);  // 1, x, y, xy
}

TEST(TensorPower, Examples) {
    auto A = fx::make(Fp(2), fx::truncated_poly(2));
    EXPECT_EQ(barlambda_tensor_power(A, 3).size(), 1u);
    auto B = fx::make(Fp(2), fx::a2());
    EXPECT_EQ(barlambda_tensor_power(B, 2).size(), 0u);
    EXPECT_EQ(barlambda_tensor_power(B, 0).size(), 2u);
    EXPECT_EQ(barlambda_tensor_power(A, 0).size(), 1u);
}

TEST(TensorPower, CountsComposableChains) {
    auto N = fx::make(Fp(2), fx::nakayama2());
    auto L = fx::make(Fp(2), fx::local_rad2());
    for (int p = 0; p <= 5; ++p) {
        // Nakayama: bar = {a, b}, alternating chains: 2 for p >= 1
        EXPECT_EQ(barlambda_tensor_power(N, p).size(), 2u);
        EXPECT_EQ(barlambda_tensor_power(L, p).size(), static_cast<std::size_t>(1) << p);
        auto T = barlambda_tensor_power(L, p);
        if (p > 0) {
            for (std::size_t i = 0; i < T.size(); ++i) EXPECT_EQ(T.find(T.tuples[i]), static_cast<int>(i));
        }
    }
}

TEST(Algebra, StructureOfTruncatedPoly) {
    auto A = fx::make(Fp(3), fx::truncated_poly(3));
    // x * x = x^2, x * x^2 = 0
    int x = A.bar_basis(0), x2 = A.bar_basis(1);
    EXPECT_EQ(A.prod(x, x), (SVec<Fp>{{static_cast<Index>(x2), 1}}));
    EXPECT_TRUE(A.prod(x, x2).empty());
    ASSERT_EQ(A.splits(1).size(), 1u);
}
