#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "singyoneda.hpp"

namespace yl {

// Randomized exact identity suites. Each suite draws homogeneous elements from
// small sample complexes and records every identity that fails.

struct SuiteResult {
    std::string name;
    std::size_t elements = 0;
    std::size_t checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

namespace verify_detail {

template <class F>
std::vector<Complex<F>> samples(const Algebra<F>& A, bool with_resolution) {
    std::vector<Complex<F>> xs;
    xs.push_back(stalk(regular_module(A)));
    xs.push_back(stalk(simple_module(A, 0)));
    xs.push_back(stalk(simple_module(A, A.vertices() - 1), 1));
    if (with_resolution) xs.push_back(proj_resolution(simple_module(A, 0), 1).complex());
    return xs;
}

template <class F>
bool same(const YElem<F>& a, const YElem<F>& b) { return a.deg == b.deg && a.v == b.v; }

template <class F>
YElem<F> add(const F& f, YElem<F> a, const YElem<F>& b, const Val<F>& s) {
    axpy(f, a.v, s, b.v);
    return a;
}

template <class F>
SYElem<F> add_sy(const F& f, SYElem<F> a, const SYElem<F>& b, const Val<F>& s, const SYHom<F>& H) {
    int st = std::max(a.stage, b.stage);
    a = H.lift(a, st);
    auto bb = H.lift(b, st);
    axpy(f, a.rep.v, s, bb.rep.v);
    return a;
}

template <class F>
Val<F> sign(const F& f, int k) { return k % 2 ? f.neg(f.one()) : f.one(); }

inline int pick(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct Recorder {
    SuiteResult& r;
    const std::string& where;
    void operator()(bool ok, const std::string& what, int trial) {
        ++r.checks;
        if (!ok) r.failures.push_back(where + ": " + what + " (trial " + std::to_string(trial) + ")");
    }
};

} // namespace verify_detail

// delta^2 = 0, unit and associativity of the product, graded Leibniz rule
template <class F>
SuiteResult verify_yoneda(const Algebra<F>& A, const std::string& name, std::mt19937_64& rng, int trials) {
    using namespace verify_detail;
    const F& f = A.field();
    SuiteResult r{"yoneda", 0, 0, {}};
    Recorder rec{r, name};
    auto xs = samples(A, true);
    const int P = 4;
    for (int t = 0; t < trials; ++t) {
        auto& X = xs[rng() % xs.size()];
        auto& Y = xs[rng() % xs.size()];
        auto& Z = xs[rng() % xs.size()];
        auto& W = xs[rng() % xs.size()];
        YonedaHom<F> XY(X, Y, P), YZ(Y, Z, P), XZ(X, Z, P), ZW(Z, W, P), YW(Y, W, P), XW(X, W, P);
        YonedaHom<F> XX(X, X, P), YY(Y, Y, P);
        int ng = pick(rng, -1, 2);
        auto fe = XY.random(pick(rng, -1, 2), rng), ge = YZ.random(ng, rng), he = ZW.random(pick(rng, -1, 1), rng);
        r.elements += 3;
        auto df = XY.delta_elem(fe);
        rec(XY.delta(df).empty(), "delta^2 = 0", t);
        rec(same(compose(YY, YY.identity(), XY, fe, XY), fe), "left unit", t);
        rec(same(compose(XY, fe, XX, XX.identity(), XY), fe), "right unit", t);
        auto gf = compose(YZ, ge, XY, fe, XZ);
        auto hg = compose(ZW, he, YZ, ge, YW);
        rec(same(compose(ZW, he, XZ, gf, XW), compose(YW, hg, XY, fe, XW)), "associativity", t);
        auto rhs = add(f, compose(YZ, YZ.delta_elem(ge), XY, fe, XZ), compose(YZ, ge, XY, df, XZ), sign(f, ng));
        rec(same(XZ.delta_elem(gf), rhs), "Leibniz", t);
        rec(XX.delta(XX.identity()).empty(), "identity closed", t);
    }
    return r;
}

// unit, associativity and Leibniz for the singular product; compatibility with the canonical functor
template <class F>
SuiteResult verify_singular(const Algebra<F>& A, const std::string& name, std::mt19937_64& rng, int trials) {
    using namespace verify_detail;
    const F& f = A.field();
    SuiteResult r{"singular", 0, 0, {}};
    Recorder rec{r, name};
    auto xs = samples(A, false);
    const int nmax = 3;
    for (int t = 0; t < trials; ++t) {
        auto& X = xs[rng() % xs.size()];
        auto& Y = xs[rng() % xs.size()];
        auto& Z = xs[rng() % xs.size()];
        auto& W = xs[rng() % xs.size()];
        SYHom<F> XY(X, Y, nmax), YZ(Y, Z, nmax), XZ(X, Z, nmax), ZW(Z, W, nmax), YW(Y, W, nmax), XW(X, W, nmax);
        SYHom<F> YY(Y, Y, nmax), XX(X, X, nmax);
        int nf = pick(rng, 0, 1), ng = pick(rng, -1, 0), nh = pick(rng, 0, 1);
        SYElem<F> fe{pick(rng, 0, 2), {}}, ge{pick(rng, 0, 1), {}}, he{pick(rng, 0, 1), {}};
        fe.rep = XY.stage(fe.stage).random(nf, rng);
        ge.rep = YZ.stage(ge.stage).random(ng, rng);
        he.rep = ZW.stage(he.stage).random(nh, rng);
        r.elements += 3;
        auto df = XY.delta(fe);
        rec(XY.delta(df).rep.v.empty(), "delta_sg^2 = 0", t);
        rec(XY.equal(XY.delta(XY.lift(fe, fe.stage + 1)), XY.lift(df, df.stage + 1), 0), "stage maps are cochain maps", t);
        rec(XY.equal(sy_compose(YY, YY.identity(), XY, fe, XY), fe), "left unit (sg)", t);
        rec(XY.equal(sy_compose(XY, fe, XX, XX.identity(), XY), fe), "right unit (sg)", t);
        auto gf = sy_compose(YZ, ge, XY, fe, XZ);
        auto hg = sy_compose(ZW, he, YZ, ge, YW);
        rec(XW.equal(sy_compose(ZW, he, XZ, gf, XW), sy_compose(YW, hg, XY, fe, XW)), "associativity (sg)", t);
        auto rhs = add_sy(f, sy_compose(YZ, YZ.delta(ge), XY, fe, XZ), sy_compose(YZ, ge, XY, df, XZ), sign(f, ng), XZ);
        rec(XZ.equal(XZ.delta(gf), rhs), "Leibniz (sg)", t);
        auto f0 = XY.canonical(XY.stage(0).random(nf, rng));
        auto g0 = YZ.canonical(YZ.stage(0).random(ng, rng));
        r.elements += 2;
        YonedaHom<F> hXY(X, Y, XY.cap(0)), hYZ(Y, Z, YZ.cap(0)), hXZ(X, Z, XZ.cap(0));
        rec(XZ.equal(sy_compose(YZ, g0, XY, f0, XZ), XZ.canonical(compose(hYZ, g0.rep, hXY, f0.rep, hXZ))),
            "canonical functor preserves products", t);
        rec(XY.equal(XY.delta(f0), XY.canonical(hXY.delta_elem(f0.rep)), 0), "canonical functor is a cochain map", t);
    }
    return r;
}

// alpha is a Lambda-linear cochain map, injective on basis elements below the cap
template <class F>
SuiteResult verify_alpha(const Algebra<F>& A, const std::string& name, std::mt19937_64& rng, int trials) {
    using namespace verify_detail;
    const F& f = A.field();
    SuiteResult r{"alpha", 0, 0, {}};
    Recorder rec{r, name};
    auto xs = samples(A, true);
    const int P = 3;
    for (int t = 0; t < trials; ++t) {
        auto& X = xs[rng() % xs.size()];
        auto& Y = xs[rng() % xs.size()];
        YonedaHom<F> XY(X, Y, P + 1);
        BarTensor<F> B(X, P + 1);
        const auto& BX = B.complex();
        int n = pick(rng, -1, 2);
        auto g = XY.random(n, rng);
        ++r.elements;
        auto& S = XY.space(n);
        SVec<F> low;
        for (auto& [i, c] : g.v)
            if (S.coord(i).p <= P - 1) low.emplace_back(i, c);
        g.v = low;
        auto ag = alpha(XY, g, B);
        rec(is_lambda_linear(ag, BX, Y), "alpha(g) is Lambda-linear", t);
        auto D = hom_differential(ag, BX, Y, f);
        auto adg = alpha(XY, XY.delta_elem(g), B);
        bool ok = true;
        for (int j = BX.lo; j <= BX.hi() && ok; ++j) {
            auto l = D.at(j, BX, Y, f), rr = adg.at(j, BX, Y, f);
            for (Index c = 0; c < BX.dim(j); ++c)
                if (B.label(j, c).n <= P && l.col(c) != rr.col(c)) { ok = false; break; }
        }
        rec(ok, "alpha commutes with differentials", t);
        // injectivity on the basis of this degree
        ColumnReducer<F> red(f, 1 << 20);
        std::size_t indep = 0, expect = 0;
        for (Index i = 0; i < S.dim(); ++i) {
            if (S.coord(i).p > P) continue;
            ++expect;
            auto a = alpha(XY, YElem<F>{n, {{i, f.one()}}}, B);
            SVec<F> flat;
            std::size_t off = 0;
            for (int j = BX.lo; j <= BX.hi(); ++j) {
                auto m = a.at(j, BX, Y, f);
                for (Index c = 0; c < m.cols(); ++c)
                    for (auto& [row, v] : m.col(c)) flat.emplace_back(static_cast<Index>(off + c * m.rows() + row), v);
                off += m.rows() * m.cols();
            }
            indep += red.insert(flat);
        }
        rec(indep == expect, "alpha injective", t);
    }
    return r;
}

// Omega_nc is a dg functor; theta is closed and natural
template <class F>
SuiteResult verify_omega(const Algebra<F>& A, const std::string& name, std::mt19937_64& rng, int trials) {
    using namespace verify_detail;
    SuiteResult r{"omega-theta", 0, 0, {}};
    Recorder rec{r, name};
    auto xs = samples(A, true);
    const int P = 3;
    for (int t = 0; t < trials; ++t) {
        auto& X = xs[rng() % xs.size()];
        auto& Y = xs[rng() % xs.size()];
        auto& Z = xs[rng() % xs.size()];
        OmegaPower<F> X0(X, 0), Y0(Y, 0), Z0(Z, 0), X1(X, 1), Y1(Y, 1), Z1(Z, 1);
        YonedaHom<F> XY(X0.complex(), Y0.complex(), P), YZ(Y0.complex(), Z0.complex(), P),
            XZ(X0.complex(), Z0.complex(), P), XX(X0.complex(), X0.complex(), P);
        YonedaHom<F> OXY(X1.complex(), Y1.complex(), P), OYZ(Y1.complex(), Z1.complex(), P),
            OXZ(X1.complex(), Z1.complex(), P), OXX(X1.complex(), X1.complex(), P);
        int nf = pick(rng, -1, 1), ng = pick(rng, -1, 1);
        auto fe = XY.random(nf, rng), ge = YZ.random(ng, rng);
        r.elements += 2;
        auto Of = omega_on_morphism(XY, fe, X0, Y0, 1, OXY, X1, Y1);
        auto Og = omega_on_morphism(YZ, ge, Y0, Z0, 1, OYZ, Y1, Z1);
        rec(same(omega_on_morphism(XX, XX.identity(), X0, X0, 1, OXX, X1, X1), OXX.identity()), "Omega(Id) = Id", t);
        rec(same(omega_on_morphism(XZ, compose(YZ, ge, XY, fe, XZ), X0, Z0, 1, OXZ, X1, Z1),
                 compose(OYZ, Og, OXY, Of, OXZ)),
            "Omega preserves products", t);
        auto d1 = OXY.delta_elem(Of);
        auto d2 = omega_on_morphism(XY, XY.delta_elem(fe), X0, Y0, 1, OXY, X1, Y1);
        auto& S = OXY.space(nf + 1);
        auto low = [&](const SVec<F>& v) {
            SVec<F> o;
            for (auto& [i, c] : v)
                if (S.coord(i).p < P) o.emplace_back(i, c);
            return o;
        };
        rec(low(d1.v) == low(d2.v), "Omega commutes with delta", t);
        YonedaHom<F> TX(X0.complex(), X1.complex(), P + 1), TY(Y0.complex(), Y1.complex(), P + 1);
        YonedaHom<F> XOY(X0.complex(), Y1.complex(), P);
        auto tx = theta(TX, X0, X1), ty = theta(TY, Y0, Y1);
        bool closed = true;
        auto& S1 = TX.space(1);
        for (auto& [i, c] : TX.delta(tx))
            if (S1.coord(i).p <= P) closed = false;
        rec(closed, "theta closed", t);
        rec(same(compose(OXY, Of, TX, tx, XOY), compose(TY, ty, XY, fe, XOY)), "theta natural", t);
        rec(same(structure_map(XY, fe, Y0, Y1, XOY), compose(TY, ty, XY, fe, XOY)), "structure map = theta f", t);
    }
    return r;
}

// (epsilon ⊗ Id) ⊙ iota = Id; the product with a random element is preserved
template <class F>
SuiteResult verify_iota(const Algebra<F>& A, const std::string& name, std::mt19937_64& rng, int trials) {
    using namespace verify_detail;
    SuiteResult r{"iota", 0, 0, {}};
    Recorder rec{r, name};
    auto xs = samples(A, true);
    const int cap = 4;
    for (int t = 0; t < trials; ++t) {
        auto& X = xs[rng() % xs.size()];
        auto& Y = xs[rng() % xs.size()];
        BarTensor<F> B(X, cap);
        const auto& BX = B.complex();
        YonedaHom<F> XB(X, BX, cap), BXX(BX, X, cap), XX(X, X, cap), XY(X, Y, cap);
        auto io = iota(XB, B);
        auto e = BXX.from_graded_map(epsilon_tensor(B));
        auto ei = compose(BXX, e, XB, io, XX);
        rec(same(ei, XX.identity()), "(epsilon ⊗ Id) ⊙ iota = Id", t);
        auto g = XY.random(pick(rng, -1, 1), rng);
        ++r.elements;
        rec(same(compose(XY, g, XX, ei, XY), g), "g ⊙ (epsilon ⊗ Id) ⊙ iota = g", t);
        bool closed = true;
        auto& S1 = XB.space(1);
        for (auto& [i, c] : XB.delta(io))
            if (S1.coord(i).p < cap) closed = false;
        rec(closed, "iota closed", t);
    }
    return r;
}

// structure functor into the module category: Phi is a cochain map and Phi_sg retracts it
template <class F>
SuiteResult verify_phi(const Algebra<F>& A, const std::string& name, std::mt19937_64& rng, int trials) {
    using namespace verify_detail;
    const F& f = A.field();
    SuiteResult r{"phi", 0, 0, {}};
    Recorder rec{r, name};
    auto L = stalk(regular_module(A));
    auto xs = samples(A, false);
    const int nmax = 3;
    for (int t = 0; t < trials; ++t) {
        auto& X = xs[rng() % xs.size()];
        auto& Y = xs[rng() % xs.size()];
        SYHom<F> XY(X, Y, nmax), LX(L, X, nmax), LY(L, Y, nmax), XX(X, X, nmax);
        int n = pick(rng, 0, 1);
        SYElem<F> fe{pick(rng, 0, 1), {}}, g{pick(rng, 0, 1), {}};
        fe.rep = XY.stage(fe.stage).random(n, rng);
        g.rep = LX.stage(g.stage).random(0, rng);
        r.elements += 2;
        rec(LX.equal(phi_apply(XX, XX.identity(), LX, g, LX), g), "Phi(Id) = Id", t);
        auto lhs = phi_apply(XY, XY.delta(fe), LX, g, LY);
        auto rhs = add_sy(f, LY.delta(phi_apply(XY, fe, LX, g, LY)), phi_apply(XY, fe, LX, LX.delta(g), LY),
                          n % 2 ? f.one() : f.neg(f.one()), LY);
        rec(LY.equal(lhs, rhs), "Phi cochain map", t);
        auto back = phi_sg<F>(LX, LY, XY, n, fe.stage, [&](const SYElem<F>& h) { return phi_apply(XY, fe, LX, h, LY); });
        rec(XY.equal(back, fe, 0), "Phi_sg retracts Phi", t);
    }
    return r;
}

struct VerifyPlan {
    // every suite draws at least 100 random elements
    int yoneda = 34, singular = 20, alpha = 100, omega = 50, iota = 100, phi = 50;
};

template <class F>
std::vector<SuiteResult> verify_all(const Algebra<F>& A, const std::string& name, std::uint64_t seed,
                                    const VerifyPlan& plan = {}) {
    std::mt19937_64 rng(seed);
    std::vector<SuiteResult> out;
    out.push_back(verify_yoneda(A, name, rng, plan.yoneda));
    out.push_back(verify_singular(A, name, rng, plan.singular));
    out.push_back(verify_alpha(A, name, rng, plan.alpha));
    out.push_back(verify_omega(A, name, rng, plan.omega));
    out.push_back(verify_iota(A, name, rng, plan.iota));
    out.push_back(verify_phi(A, name, rng, plan.phi));
    return out;
}

} // namespace yl
