#include <gtest/gtest.h>

#include <filesystem>

#include <yonedalab/io.hpp>
#include <yonedalab/yoneda.hpp>

#include "fixtures.hpp"

using namespace yl;

namespace {

const std::string kData = YL_DATA_DIR;

template <class F>
void expect_same_algebra(const Algebra<F>& A, const Algebra<F>& B) {
    ASSERT_EQ(A.dim(), B.dim());
    ASSERT_EQ(A.vertices(), B.vertices());
    EXPECT_EQ(A.labels(), B.labels());
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) EXPECT_EQ(A.prod(i, j), B.prod(i, j));
}

template <class F>
void expect_same_module(const Module<F>& M, const Module<F>& N) {
    ASSERT_EQ(M.dim, N.dim);
    EXPECT_EQ(M.vertex, N.vertex);
    for (std::size_t b = 0; b < M.act.size(); ++b) EXPECT_EQ(M.act[b], N.act[b]);
}

const char* kA2 = R"(
[field]
characteristic = 3
[quiver]
vertices = ["1", "2"]
arrows = [{ name = "a", source = "1", target = "2" }]
)";

} // namespace

TEST(Io, QuiverFilesMatchFixtures) {
    Fp f2(2), f3(3);
    Workspace<Fp> dual(f2, load_document(kData + "/algebras/dual_numbers.toml"));
    expect_same_algebra(dual.algebra(), fx::make(f2, fx::truncated_poly(2)));
    Workspace<Fp> cubic(f3, load_document(kData + "/algebras/truncated_cubic.toml"));
    expect_same_algebra(cubic.algebra(), fx::make(f3, fx::truncated_poly(3)));
    Workspace<Fp> rad(f2, load_document(kData + "/algebras/local_rad2.toml"));
    expect_same_algebra(rad.algebra(), fx::make(f2, fx::local_rad2()));
    Workspace<Fp> nak(f3, load_document(kData + "/algebras/nakayama2.toml"));
    expect_same_algebra(nak.algebra(), fx::make(f3, fx::nakayama2()));
    Workspace<Qf> a2(Qf{}, load_document(kData + "/algebras/a2.toml"));
    expect_same_algebra(a2.algebra(), fx::make(Qf{}, fx::a2()));
}

TEST(Io, EveryShippedFileLoads) {
    for (auto& e : std::filesystem::directory_iterator(kData + "/algebras")) {
        auto d = load_document(e.path().string());
        with_field(d, [&](auto f) {
            using F = decltype(f);
            Workspace<F> W(f, d);
            for (auto& m : W.defined_modules()) EXPECT_NO_THROW(W.module(m)) << e.path();
            for (auto& c : W.defined_complexes()) EXPECT_NO_THROW(W.complex(c)) << e.path();
            return 0;
        });
    }
}

TEST(Io, StructureConstantsMatchQuiver) {
    Fp f(3);
    Workspace<Fp> W(f, load_document(kData + "/algebras/dual_numbers_table.toml"));
    auto Q = fx::make(f, fx::truncated_poly(2));
    const auto& A = W.algebra();
    ASSERT_EQ(A.dim(), 2);
    // same structure constants up to the labels e1 / e
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_EQ(A.prod(i, j), Q.prod(i, j));
    for (int n = 0; n <= 4; ++n)
        EXPECT_EQ(ext_oracle(W.module("k"), W.module("k"), n), ext_oracle(simple_module(Q, 0), simple_module(Q, 0), n));
}

TEST(Io, GeneratorActionsAreClosed) {
    Fp f(2);
    Workspace<Fp> W(f, load_document(kData + "/algebras/dual_numbers.toml"));
    expect_same_module(W.module("top"), simple_module(W.algebra(), 0));
    Workspace<Fp> C(Fp(3), load_document(kData + "/algebras/truncated_cubic.toml"));
    auto M = C.module("M2");
    // x^2 acts by zero on k[x]/(x^2), x does not
    int xx = -1, x = -1;
    for (int b = 0; b < C.algebra().dim(); ++b) {
        if (C.algebra().label(b) == "x*x") xx = b;
        if (C.algebra().label(b) == "x") x = b;
    }
    ASSERT_GE(xx, 0);
    EXPECT_TRUE(M.act[xx].is_zero());
    EXPECT_FALSE(M.act[x].is_zero());
}

TEST(Io, RepresentationFormIsProjective) {
    Workspace<Qf> W(Qf{}, load_document(kData + "/algebras/a2.toml"));
    expect_same_module(W.module("R"), projective_module(W.algebra(), 0));
}

TEST(Io, ComplexResolvesSimple) {
    Workspace<Qf> W(Qf{}, load_document(kData + "/algebras/a2.toml"));
    auto X = W.complex("C");
    EXPECT_EQ(X.lo, -1);
    EXPECT_EQ(cohomology_dim<Qf>(X.vspace(), -1), 0);
    EXPECT_EQ(cohomology_dim<Qf>(X.vspace(), 0), 1);
    auto S1 = stalk(W.module("S1"));
    YonedaHom<Qf> H(X, S1, 4);
    auto C = H.complex(0, 3);
    for (int n = 0; n <= 2; ++n) EXPECT_EQ(cohomology_dim<Qf>(C, n), ext_oracle(W.module("S1"), W.module("S1"), n));
}

TEST(Io, ComplexFileAgainstAlgebra) {
    Workspace<Fp> W(Fp(2), load_document(kData + "/algebras/dual_numbers.toml"));
    auto X = W.complex(kData + "/complexes/dual_times_x.toml");
    EXPECT_EQ(X.lo, -1);
    EXPECT_EQ(cohomology_dim<Fp>(X.vspace(), -1), 1);
    EXPECT_EQ(cohomology_dim<Fp>(X.vspace(), 0), 1);
    // a module name is a stalk in degree 0
    auto K = W.complex("k");
    EXPECT_EQ(K.lo, 0);
    EXPECT_EQ(K.dim(0), 1u);
}

TEST(Io, Builtins) {
    Workspace<Fp> W(Fp(3), parse_document(kA2));
    EXPECT_EQ(W.module("S2").dim, 1u);
    EXPECT_EQ(W.module("P1").dim, 2u);
    EXPECT_EQ(W.module("I2").dim, 2u);
    EXPECT_EQ(W.module("Lambda").dim, 3u);
    EXPECT_THROW(W.module("k"), InputError);
    EXPECT_THROW(W.module("S3"), InputError);
    EXPECT_THROW(W.module("Q"), InputError);
}

TEST(Io, RationalCoefficients) {
    auto d = parse_document(R"(
[field]
characteristic = 0
[quiver]
vertices = ["1"]
arrows = [{ name = "x", source = "1", target = "1" }]
relations = [[[1, "x x"]]]
[modules.M]
dim = 2
action = { x = [["0", 0], ["1/2", 0]] }
)");
    Workspace<Qf> W(Qf{}, d);
    auto M = W.module("M");
    EXPECT_EQ(M.act[1].to_dense()(1, 0), mpq_class(1, 2));
    Document bad = d;
    bad.root.insert_or_assign("field", toml::table{{"characteristic", 2}});
    Workspace<Fp> W2(Fp(2), bad);
    EXPECT_THROW(W2.module("M"), InputError);
}

TEST(IoErrors, CarryLabels) {
    auto expect_msg = [](auto&& fn, const std::string& needle) {
        try {
            fn();
            ADD_FAILURE() << "no error for " << needle;
        } catch (const std::exception& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    // malformed TOML reports the source
    expect_msg([] { parse_document("[field\n", "broken.toml"); }, "broken.toml");
    // relation with an unknown arrow
    expect_msg([] {
        Workspace<Fp> W(Fp(2), parse_document(R"(
name = "bad"
[field]
characteristic = 2
[quiver]
vertices = ["1"]
arrows = [{ name = "x", source = "1", target = "1" }]
relations = [[[1, "x z"]]]
)"));
    }, "algebra bad");
    // (x x) y = 0 but x (x y) = y
    expect_msg([] {
        Workspace<Fp> W(Fp(2), parse_document(R"(
name = "nonassoc"
[field]
characteristic = 2
[basis]
labels = ["e", "x", "y"]
[idempotents]
labels = ["e"]
[structure]
"e e" = [[1, "e"]]
"e x" = [[1, "x"]]
"x e" = [[1, "x"]]
"e y" = [[1, "y"]]
"y e" = [[1, "y"]]
"x x" = [[1, "y"]]
"x y" = [[1, "x"]]
)"));
    }, "nonassoc");
    Workspace<Fp> W(Fp(2), parse_document(std::string(R"(
[field]
characteristic = 2
[quiver]
vertices = ["1"]
arrows = [{ name = "x", source = "1", target = "1" }]
relations = [[[1, "x x"]]]
[modules.square]
dim = 1
action = { x = [[1]] }
[modules.shapeless]
dim = 2
action = { x = [[1]] }
[complexes.notlinear]
lo = 0
modules = ["k", "Lambda"]
differentials = [[[1], [0]]]
[complexes.short]
lo = 0
modules = ["k", "k"]
)")));
    // x acts by 1 although x*x = 0
    expect_msg([&] { W.module("square"); }, "square");
    expect_msg([&] { W.module("shapeless"); }, "shapeless");
    expect_msg([&] { W.complex("notlinear"); }, "notlinear");
    expect_msg([&] { W.complex("short"); }, "short");
    expect_msg([&] { W.module("missing"); }, "missing");
}

TEST(IoErrors, UndeterminedAction) {
    // two vertices, no idempotents given: the action cannot be recovered
    Workspace<Fp> W(Fp(3), parse_document(std::string(kA2) + R"(
[modules.U]
dim = 1
action = { a = [[0]] }
)"));
    EXPECT_THROW(W.module("U"), InputError);
}

TEST(IoErrors, NonAdaptedBasisRejectedInComplexes) {
    Workspace<Fp> W(Fp(3), parse_document(std::string(kA2) + R"(
[modules.T]
dim = 2
action = { e1 = [[1, 1], [0, 0]], a = [[0, 0], [0, 0]] }
[complexes.X]
lo = 0
modules = ["T"]
)"));
    EXPECT_NO_THROW(W.module("T"));
    EXPECT_THROW(W.complex("X"), InputError);
}

TEST(Report, JsonSchemaAndDeterminism) {
    Report r;
    r.command = "ext";
    r.algebra = "A";
    r.parameters["M"] = "k";
    r.table.push_back({0, 1, true, std::nullopt});
    r.table.push_back({1, 2, false, 4});
    r.warnings.push_back("w");
    auto j = to_json(r);
    std::vector<std::string> keys;
    for (auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"command", "algebra", "parameters", "table", "warnings"}));
    EXPECT_TRUE(j["table"][0]["stage"].is_null());
    EXPECT_EQ(j["table"][1]["stage"], 4);
    EXPECT_EQ(render(r, Format::json), render(r, Format::json));
    EXPECT_EQ(render(r, Format::csv), "degree,value,stable,stage\n0,1,true,\n1,2,false,4\n");
    r.details["x"] = 1;
    EXPECT_TRUE(to_json(r).contains("details"));
    EXPECT_THROW(parse_format("xml"), InputError);
}
