#pragma once

#include <memory>
#include <mutex>
#include <random>
#include <unordered_map>
#include <vector>

#include "bar.hpp"

namespace yl {

// Coordinates of Y(X, Y)^n restricted to filtrations 0..pmax. A coordinate is
// (p, m, t, x, y): t in T_p, x in X^m with vertex rv(t), y in Y^{m-p+n} with
// vertex lv(t); it stands for the E-linear block entry t ⊗ x -> y.
template <class F>
class YonedaSpace {
public:
    struct Coord { int p, m, t; Index x, y; };

    YonedaSpace(const Complex<F>& X, const Complex<F>& Y, const Tensors& T, int n, int pmax)
        : X_(&X), Y_(&Y), T_(&T), n_(n), pmax_(pmax) {
        int nm = X.comp.empty() ? 0 : X.hi() - X.lo + 1;
        cell_of_.assign(pmax + 1, std::vector<int>(nm, -1));
        std::size_t base = 0;
        for (int p = 0; p <= pmax; ++p)
            for (int m = X.lo; m < X.lo + nm; ++m) {
                int j = m - p + n;
                if (!Y.has(j) || X.dim(m) == 0 || Y.dim(j) == 0) continue;
                Cell c;
                c.p = p;
                c.m = m;
                c.j = j;
                c.base = base;
                auto& Tp = T[p];
                auto& Xm = X.at(m);
                auto& Yj = Y.at(j);
                std::size_t off = 0;
                c.toff.reserve(Tp.size() + 1);
                for (std::size_t t = 0; t < Tp.size(); ++t) {
                    c.toff.push_back(off);
                    off += Xm.vcount(Tp.rv[t]) * Yj.vcount(Tp.lv[t]);
                }
                c.toff.push_back(off);
                if (off == 0) continue;
                base += off;
                cell_of_[p][m - X.lo] = static_cast<int>(cells_.size());
                cells_.push_back(std::move(c));
            }
        dim_ = base;
    }

    std::size_t dim() const { return dim_; }
    int degree() const { return n_; }
    int pmax() const { return pmax_; }

    long find(int p, int m, int t, Index x, Index y) const {
        if (p < 0 || p > pmax_ || m < X_->lo || m > X_->hi()) return -1;
        int ci = cell_of_[p][m - X_->lo];
        if (ci < 0) return -1;
        const Cell& c = cells_[ci];
        auto& Tp = (*T_)[p];
        auto& Xm = X_->at(m);
        auto& Yj = Y_->at(c.j);
        if (Xm.vertex[x] != Tp.rv[t] || Yj.vertex[y] != Tp.lv[t]) return -1;
        return static_cast<long>(c.base + c.toff[t] + static_cast<std::size_t>(Xm.vpos[x]) * Yj.vcount(Tp.lv[t]) + Yj.vpos[y]);
    }

    Coord coord(Index i) const {
        auto it = std::upper_bound(cells_.begin(), cells_.end(), static_cast<std::size_t>(i),
                                   [](std::size_t v, const Cell& c) { return v < c.base; });
        const Cell& c = *(it - 1);
        std::size_t r = i - c.base;
        auto tt = std::upper_bound(c.toff.begin(), c.toff.end(), r) - c.toff.begin() - 1;
        int t = static_cast<int>(tt);
        r -= c.toff[t];
        auto& Tp = (*T_)[c.p];
        auto& Xm = X_->at(c.m);
        auto& Yj = Y_->at(c.j);
        std::size_t ny = Yj.vcount(Tp.lv[t]);
        Index x = Xm.by_vertex[Tp.rv[t]][r / ny];
        Index y = Yj.by_vertex[Tp.lv[t]][r % ny];
        return {c.p, c.m, t, x, y};
    }

    // filtration-block dimensions, for reporting
    std::vector<std::size_t> block_dims() const {
        std::vector<std::size_t> out(pmax_ + 1, 0);
        for (auto& c : cells_) out[c.p] += c.toff.back();
        return out;
    }

private:
    struct Cell { int p, m, j; std::size_t base; std::vector<std::size_t> toff; };
    const Complex<F>* X_;
    const Complex<F>* Y_;
    const Tensors* T_;
    int n_, pmax_;
    std::vector<Cell> cells_;
    std::vector<std::vector<int>> cell_of_;
    std::size_t dim_ = 0;
};

template <class F>
struct YElem {
    int deg = 0;
    SVec<F> v;
};

// The Hom complex Y(X, Y) truncated to filtrations <= pmax (a quotient complex;
// exact in degree n whenever pmax >= n + 1 + b_X - a_Y). X and Y must outlive it.
template <class F>
class YonedaHom {
public:
    YonedaHom(const Complex<F>& X, const Complex<F>& Y, int pmax)
        : X_(&X), Y_(&Y), A_(X.A), pmax_(pmax), T_(std::make_shared<Tensors>(*X.A, std::max(pmax, 0) + 1)) {
        if (pmax < 0) throw std::invalid_argument("negative filtration cap");
        for (int m = X.lo; m <= X.hi(); ++m) {
            dXT_.push_back(X.diff(m - 1).transpose());
            std::vector<SparseMatrix<F>> acts;
            for (int a = 0; a < A_->bar_dim(); ++a) acts.push_back(X.at(m).act[A_->bar_basis(a)].transpose());
            actXT_.push_back(std::move(acts));
        }
    }
    YonedaHom(const YonedaHom&) = delete;
    YonedaHom& operator=(const YonedaHom&) = delete;

    const Complex<F>& source() const { return *X_; }
    const Complex<F>& target() const { return *Y_; }
    const Algebra<F>& algebra() const { return *A_; }
    const F& field() const { return A_->field(); }
    const Tensors& tensors() const { return *T_; }
    int pmax() const { return pmax_; }

    // natural filtration bound in degree n
    int natural_cap(int n) const {
        if (X_->empty() || Y_->empty()) return -1;
        return n + X_->bmax() - Y_->amin();
    }

    const YonedaSpace<F>& space(int n) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = spaces_.find(n);
        if (it == spaces_.end())
            it = spaces_.emplace(n, std::make_unique<YonedaSpace<F>>(*X_, *Y_, *T_, n, pmax_)).first;
        return *it->second;
    }

    // delta of the unit coordinate i of degree n, in degree n+1 coordinates
    SVec<F> delta_unit(int n, Index i) const {
        const F& f = field();
        auto& S = space(n);
        auto& S1 = space(n + 1);
        auto c = S.coord(i);
        auto& Tp = (*T_)[c.p];
        const auto& tup = Tp.tuples[c.t];
        int j = c.m - c.p + n;
        Accumulator<F> acc(f, S1.dim());
        auto put = [&](long k, const Val<F>& v) { if (k >= 0) acc.add(static_cast<Index>(k), v); };
        auto sgn = [&](int e) { return (e % 2 == 0) ? f.one() : f.neg(f.one()); };
        // d_Y f
        if (j < Y_->hi())
            for (auto& [y, v] : Y_->d[j - Y_->lo].col(c.y)) put(S1.find(c.p, c.m, c.t, c.x, y), v);
        // -(-1)^{n+p} f(t ⊗ d_X x'') : rows of d_X^{m-1}
        if (c.m > X_->lo) {
            Val<F> s = f.neg(sgn(n + c.p));
            for (auto& [x2, v] : dXT_[c.m - X_->lo].col(c.x)) put(S1.find(c.p, c.m - 1, c.t, x2, c.y), f.mul(s, v));
        }
        if (c.p + 1 > pmax_) return acc.take();
        auto& Tq = (*T_)[c.p + 1];
        int lvt = Tp.lv[c.t], rvt = Tp.rv[c.t];
        std::vector<int> u;
        // (-1)^{n+1} a_1 f(a_2.. ⊗ x)
        {
            Val<F> s = sgn(n + 1);
            for (int a = 0; a < A_->bar_dim(); ++a) {
                if (A_->bar_right(a) != lvt) continue;
                u.assign(1, a);
                u.insert(u.end(), tup.begin(), tup.end());
                int t2 = Tq.find(u);
                for (auto& [y, v] : Y_->at(j).act[A_->bar_basis(a)].col(c.y)) put(S1.find(c.p + 1, c.m, t2, c.x, y), f.mul(s, v));
            }
        }
        // (-1)^{n+p} f(a_1..a_p ⊗ a_{p+1} x'')
        {
            Val<F> s = sgn(n + c.p);
            for (int a = 0; a < A_->bar_dim(); ++a) {
                if (A_->bar_left(a) != rvt) continue;
                u.assign(tup.begin(), tup.end());
                u.push_back(a);
                int t2 = Tq.find(u);
                for (auto& [x2, v] : actXT_[c.m - X_->lo][a].col(c.x)) put(S1.find(c.p + 1, c.m, t2, x2, c.y), f.mul(s, v));
            }
        }
        // (-1)^{n+i+1} f(.. (a_i a_{i+1}) ..)
        for (int i = 1; i <= c.p; ++i) {
            Val<F> s = sgn(n + i + 1);
            for (auto& sp : A_->splits(tup[i - 1])) {
                u.assign(tup.begin(), tup.begin() + (i - 1));
                u.push_back(sp.a);
                u.push_back(sp.b);
                u.insert(u.end(), tup.begin() + i, tup.end());
                int t2 = Tq.find(u);
                put(S1.find(c.p + 1, c.m, t2, c.x, c.y), f.mul(s, sp.coeff));
            }
        }
        return acc.take();
    }

    SVec<F> delta(const YElem<F>& g) const {
        Accumulator<F> acc(field(), space(g.deg + 1).dim());
        for (auto& [i, c] : g.v) acc.add(delta_unit(g.deg, i), c);
        return acc.take();
    }
    YElem<F> delta_elem(const YElem<F>& g) const { return {g.deg + 1, delta(g)}; }

    SparseMatrix<F> delta_matrix(int n) const {
        std::lock_guard<std::mutex> lock(dmu_);
        auto it = dmat_.find(n);
        if (it != dmat_.end()) return it->second;
        auto& S = space(n);
        std::vector<SVec<F>> cols(S.dim());
        for (Index i = 0; i < S.dim(); ++i) cols[i] = delta_unit(n, i);
        auto M = from_columns(field(), space(n + 1).dim(), std::move(cols));
        dmat_.emplace(n, M);
        return M;
    }

    // ground-field complex on degrees lo..hi
    VComplex<F> complex(int lo, int hi) const {
        VComplex<F> C;
        C.f = field();
        C.lo = lo;
        for (int n = lo; n <= hi; ++n) C.dims.push_back(space(n).dim());
        for (int n = lo; n < hi; ++n) C.d.push_back(delta_matrix(n));
        return C;
    }

    YElem<F> random(int n, std::mt19937_64& rng, double density = 0.3) const {
        auto& S = space(n);
        std::uniform_real_distribution<double> u(0, 1);
        std::uniform_int_distribution<int> val(-4, 4);
        YElem<F> g{n, {}};
        for (Index i = 0; i < S.dim(); ++i)
            if (u(rng) < density) {
                auto c = field().from_int(val(rng));
                if (!field().is_zero(c)) g.v.emplace_back(i, c);
            }
        return g;
    }

    // identity of X (needs X == Y)
    YElem<F> identity() const {
        YElem<F> g{0, {}};
        auto& S = space(0);
        for (int m = X_->lo; m <= X_->hi(); ++m)
            for (Index x = 0; x < X_->dim(m); ++x) {
                long k = S.find(0, m, X_->at(m).vertex[x], x, x);
                if (k < 0) throw std::logic_error("identity requires equal source and target");
                g.v.emplace_back(static_cast<Index>(k), field().one());
            }
        std::sort(g.v.begin(), g.v.end(), [](auto& a, auto& b) { return a.first < b.first; });
        return g;
    }

    // a Lambda-linear graded map X -> Y of degree k as an element of Y_0
    YElem<F> from_graded_map(const GradedMap<F>& g) const {
        YElem<F> e{g.degree, {}};
        auto& S = space(g.degree);
        Accumulator<F> acc(field(), S.dim());
        for (auto& [m, M] : g.comp) {
            if (!X_->has(m) || !Y_->has(m + g.degree)) continue;
            for (Index x = 0; x < M.cols(); ++x)
                for (auto& [y, v] : M.col(x)) {
                    long k = S.find(0, m, X_->at(m).vertex[x], x, y);
                    if (k < 0) throw std::invalid_argument("graded map is not E-linear");
                    acc.add(static_cast<Index>(k), v);
                }
        }
        e.v = acc.take();
        return e;
    }

    // value of g on the basis element t ⊗ x (t in T_p, x in X^m), as a vector of Y^{m-p+deg}
    SVec<F> evaluate(const YElem<F>& g, int p, int t, int m, Index x) const {
        auto& S = space(g.deg);
        SVec<F> out;
        int j = m - p + g.deg;
        if (!Y_->has(j)) return out;
        int v = (*T_)[p].lv[t];
        for (Index y : Y_->at(j).by_vertex[v]) {
            long k = S.find(p, m, t, x, y);
            if (k < 0) continue;
            auto it = std::lower_bound(g.v.begin(), g.v.end(), static_cast<Index>(k),
                                       [](auto& e, Index key) { return e.first < key; });
            if (it != g.v.end() && it->first == static_cast<Index>(k)) out.emplace_back(y, it->second);
        }
        return out;
    }

private:
    const Complex<F>* X_;
    const Complex<F>* Y_;
    const Algebra<F>* A_;
    int pmax_;
    std::shared_ptr<Tensors> T_;
    std::vector<SparseMatrix<F>> dXT_;
    std::vector<std::vector<SparseMatrix<F>>> actXT_;
    mutable std::mutex mu_, dmu_;
    mutable std::unordered_map<int, std::unique_ptr<YonedaSpace<F>>> spaces_;
    mutable std::unordered_map<int, SparseMatrix<F>> dmat_;
};

// concatenation of tuples, p = 0 tuples being vertices
inline int concat_tuple(const Tensors& T, int q, int tg, int p, int tf) {
    if (q == 0) return tf;
    if (p == 0) return tg;
    std::vector<int> u = T[q].tuples[tg];
    auto& b = T[p].tuples[tf];
    u.insert(u.end(), b.begin(), b.end());
    return T[p + q].find(u);
}

// g ⊙ f with (g⊙f)(a_{1..p+q} ⊗ x) = (-1)^{q|f|} g(a_{1..q} ⊗ f(a_{q+1..p+q} ⊗ x)).
// Filtrations above the cap of XZ are dropped.
template <class F>
YElem<F> compose(const YonedaHom<F>& YZ, const YElem<F>& g, const YonedaHom<F>& XY, const YElem<F>& f,
                 const YonedaHom<F>& XZ) {
    const F& k = XZ.field();
    if (&XY.target() != &YZ.source() || &XY.source() != &XZ.source() || &YZ.target() != &XZ.target())
        throw std::invalid_argument("compose: mismatched Yoneda contexts");
    int nf = f.deg, ng = g.deg, n = nf + ng;
    auto& Sg = YZ.space(ng);
    auto& Sf = XY.space(nf);
    auto& S = XZ.space(n);
    const Tensors& T = XZ.tensors();
    // g grouped by the source vector y: key (degree of y, y)
    struct GE { int q, t; Index z; Val<F> v; };
    std::unordered_map<std::uint64_t, std::vector<GE>> byy;
    auto ykey = [&](int j, Index y) { return (static_cast<std::uint64_t>(j + (1 << 20)) << 32) | y; };
    for (auto& [i, v] : g.v) {
        auto c = Sg.coord(i);
        byy[ykey(c.m, c.x)].push_back({c.p, c.t, c.y, v});
    }
    Accumulator<F> acc(k, S.dim());
    for (auto& [i, v] : f.v) {
        auto c = Sf.coord(i);
        int j = c.m - c.p + nf;
        auto it = byy.find(ykey(j, c.y));
        if (it == byy.end()) continue;
        for (auto& e : it->second) {
            int P = c.p + e.q;
            if (P > XZ.pmax()) continue;
            int t = concat_tuple(T, e.q, e.t, c.p, c.t);
            if (t < 0) continue;
            long idx = S.find(P, c.m, t, c.x, e.z);
            if (idx < 0) throw std::logic_error("compose: coordinate outside target space");
            Val<F> s = k.mul(v, e.v);
            if ((e.q * nf) % 2 != 0) s = k.neg(s);
            acc.add(static_cast<Index>(idx), s);
        }
    }
    return {n, acc.take()};
}

// alpha(f) : B_{<=cap} ⊗ X -> Y, (a ⊗ t ⊗ x) -> a f(t ⊗ x)
template <class F>
GradedMap<F> alpha(const YonedaHom<F>& XY, const YElem<F>& f, const BarTensor<F>& B) {
    const F& k = XY.field();
    const auto& A = XY.algebra();
    const auto& Y = XY.target();
    const auto& C = B.complex();
    auto& S = XY.space(f.deg);
    std::map<int, std::vector<Accumulator<F>>> cols;
    GradedMap<F> g;
    g.degree = f.deg;
    for (int j = C.lo; j <= C.hi(); ++j) {
        if (C.dim(j) == 0 || !Y.has(j + f.deg)) continue;
        cols[j] = std::vector<Accumulator<F>>(C.dim(j), Accumulator<F>(k, Y.dim(j + f.deg)));
    }
    const auto& T = XY.tensors();
    for (auto& [i, v] : f.v) {
        auto c = S.coord(i);
        if (c.p > B.cap()) continue;
        int j = c.m - c.p;
        auto it = cols.find(j);
        if (it == cols.end()) continue;
        for (int a = 0; a < A.dim(); ++a) {
            if (A.right(a) != T[c.p].lv[c.t]) continue;
            long col = B.find(c.p, a, c.t, c.m, c.x);
            if (col < 0) continue;
            it->second[col].add(Y.at(j + f.deg).act[a].col(c.y), v);
        }
    }
    for (auto& [j, accs] : cols) {
        std::vector<SVec<F>> cs;
        for (auto& a : accs) cs.push_back(a.take());
        g.comp[j] = from_columns(k, Y.dim(j + f.deg), std::move(cs));
    }
    return g;
}

// Y(Lambda, Y) as a complex of left modules: (lambda f)(t ⊗ b) = f(t ⊗ b lambda)
template <class F>
Module<F> yoneda_lambda_module(const YonedaHom<F>& LY, int n) {
    const auto& A = LY.algebra();
    const F& k = LY.field();
    auto& S = LY.space(n);
    Module<F> M;
    M.A = &A;
    M.dim = S.dim();
    M.vertex.resize(S.dim());
    std::vector<typename YonedaSpace<F>::Coord> cs;
    cs.reserve(S.dim());
    for (Index i = 0; i < S.dim(); ++i) {
        cs.push_back(S.coord(i));
        M.vertex[i] = A.right(static_cast<int>(cs.back().x));
    }
    // coefficient of b in b' lambda, grouped by (lambda, b)
    std::vector<std::vector<std::vector<std::pair<int, Val<F>>>>> pre(A.dim(), std::vector<std::vector<std::pair<int, Val<F>>>>(A.dim()));
    for (int bp = 0; bp < A.dim(); ++bp)
        for (int l = 0; l < A.dim(); ++l)
            for (auto& [b, c] : A.prod(bp, l)) pre[l][b].emplace_back(bp, c);
    for (int l = 0; l < A.dim(); ++l) {
        std::vector<SVec<F>> cols;
        cols.reserve(S.dim());
        for (Index i = 0; i < S.dim(); ++i) {
            auto& c = cs[i];
            SVec<F> v;
            for (auto& [bp, coef] : pre[l][c.x]) {
                long idx = S.find(c.p, c.m, c.t, static_cast<Index>(bp), c.y);
                if (idx >= 0) v.emplace_back(static_cast<Index>(idx), coef);
            }
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
            cols.push_back(std::move(v));
        }
        M.act.push_back(from_columns(k, M.dim, std::move(cols)));
    }
    M.finalize();
    return M;
}

template <class F>
Complex<F> yoneda_lambda_complex(const YonedaHom<F>& LY, int lo, int hi) {
    Complex<F> C;
    C.A = &LY.algebra();
    C.lo = lo;
    for (int n = lo; n <= hi; ++n) C.comp.push_back(yoneda_lambda_module(LY, n));
    for (int n = lo; n < hi; ++n) C.d.push_back(LY.delta_matrix(n));
    return C;
}

// eta_Y : Y -> Y(Lambda, Y), y -> (b -> b y), on degrees lo..hi
template <class F>
CochainMap<F> eta(const YonedaHom<F>& LY, int lo, int hi) {
    const auto& Y = LY.target();
    const auto& L = LY.source();
    const auto& A = LY.algebra();
    const F& k = LY.field();
    CochainMap<F> e;
    for (int n = lo; n <= hi; ++n) {
        if (!Y.has(n)) continue;
        auto& S = LY.space(n);
        std::vector<SVec<F>> cols;
        Accumulator<F> acc(k, S.dim());
        for (Index y = 0; y < Y.dim(n); ++y) {
            for (Index b = 0; b < L.dim(0); ++b)
                for (auto& [y2, c] : Y.at(n).act[b].col(y)) {
                    long idx = S.find(0, 0, A.left(static_cast<int>(b)), b, y2);
                    if (idx >= 0) acc.add(static_cast<Index>(idx), c);
                }
            cols.push_back(acc.take());
        }
        e.comp[n] = from_columns(k, S.dim(), std::move(cols));
    }
    return e;
}

template <class F>
YElem<F> eta_of(const YonedaHom<F>& LY, int n, const SVec<F>& y) {
    auto e = eta(LY, n, n);
    if (e.comp.empty()) return {n, {}};
    return {n, e.comp.at(n).apply(y)};
}

// iota_X in Y(X, B_{<=cap} ⊗ X): t ⊗ x -> (e ⊗ t ⊗ x); XB's target must be B.complex()
template <class F>
YElem<F> iota(const YonedaHom<F>& XB, const BarTensor<F>& B) {
    const auto& X = XB.source();
    const auto& A = XB.algebra();
    auto& S = XB.space(0);
    const auto& T = XB.tensors();
    YElem<F> g{0, {}};
    for (int p = 0; p <= std::min(B.cap(), XB.pmax()); ++p)
        for (int m = X.lo; m <= X.hi(); ++m)
            for (std::size_t t = 0; t < T[p].size(); ++t)
                for (Index x : X.at(m).by_vertex[T[p].rv[t]]) {
                    long y = B.find(p, A.idempotent(T[p].lv[t]), static_cast<int>(t), m, static_cast<int>(x));
                    if (y < 0) continue;
                    long idx = S.find(p, m, static_cast<int>(t), x, static_cast<Index>(y));
                    if (idx >= 0) g.v.emplace_back(static_cast<Index>(idx), A.field().one());
                }
    std::sort(g.v.begin(), g.v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return g;
}

// Psi(f)(g) = f ⊙ g on Y(Lambda, X) -> Y(Lambda, Y)
template <class F>
YElem<F> psi_apply(const YonedaHom<F>& XY, const YElem<F>& f, const YonedaHom<F>& LX, const YElem<F>& g,
                   const YonedaHom<F>& LY) {
    return compose(XY, f, LX, g, LY);
}

// Phi(phi)_p(t ⊗ x) = (-1)^{p|x|} phi(eta_X(x))(t ⊗ e_{right(t)}), for an operator
// phi given as a function on elements.
template <class F, class Op>
YElem<F> phi_retract(const YonedaHom<F>& LX, const YonedaHom<F>& LY, const YonedaHom<F>& XY, int deg, Op&& phi) {
    const auto& X = XY.source();
    const auto& A = XY.algebra();
    const F& k = XY.field();
    auto& S = XY.space(deg);
    const auto& T = XY.tensors();
    Accumulator<F> acc(k, S.dim());
    for (int m = X.lo; m <= X.hi(); ++m)
        for (Index x = 0; x < X.dim(m); ++x) {
            SVec<F> ex{{x, k.one()}};
            YElem<F> img = phi(eta_of(LX, m, ex));
            for (int p = 0; p <= XY.pmax(); ++p)
                for (std::size_t t = 0; t < T[p].size(); ++t) {
                    if (T[p].rv[t] != X.at(m).vertex[x]) continue;
                    Index e = static_cast<Index>(A.idempotent(T[p].rv[t]));
                    for (auto& [y, v] : LY.evaluate(img, p, static_cast<int>(t), 0, e)) {
                        long idx = S.find(p, m, static_cast<int>(t), x, y);
                        if (idx < 0) continue;
                        acc.add(static_cast<Index>(idx), (p * m) % 2 ? k.neg(v) : v);
                    }
                }
        }
    return {deg, acc.take()};
}

} // namespace yl
