#pragma once

#include <unordered_map>
#include <vector>

#include "yoneda.hpp"

namespace yl {

// index of a tuple in T, where the empty tuple is identified with a vertex
inline int tuple_index(const Tensors& T, const std::vector<int>& u, int vertex) {
    if (u.empty()) return vertex;
    return T[static_cast<int>(u.size())].find(u);
}

// Omega_nc^p(X) = (s Lambda-bar)^{⊗p} ⊗ X with the iterated twisted action.
// Basis (t, x): t in T_p, x in X^m with vertex rv(t); degree m - p, vertex lv(t).
// Differential (-1)^p (t, d_X x).
template <class F>
class OmegaPower {
public:
    struct Label { int t, m; Index x; };

    OmegaPower() = default;
    OmegaPower(const Complex<F>& X, int p) : A_(X.A), X_(X), p_(p) {
        if (p < 0) throw std::invalid_argument("negative Omega power");
        T_ = Tensors(*A_, p);
        build();
    }

    const Complex<F>& complex() const { return cx_; }
    const Complex<F>& base() const { return X_; }
    int power() const { return p_; }
    const Tensors& tensors() const { return T_; }
    const Label& label(int j, Index i) const { return labels_[j - cx_.lo][i]; }
    const std::vector<int>& tuple(int t) const { return T_[p_].tuples[t]; }

    // index of (t, x in X^m) inside degree m - p, or -1
    long find(int t, int m, Index x) const {
        if (t < 0) return -1;
        int j = m - p_;
        if (j < cx_.lo || j - cx_.lo >= static_cast<int>(index_.size())) return -1;
        auto& h = index_[j - cx_.lo];
        auto it = h.find(static_cast<std::uint64_t>(t) * xmax_ + x);
        return it == h.end() ? -1 : static_cast<long>(it->second);
    }
    long find(const std::vector<int>& u, int m, Index x) const {
        if (static_cast<int>(u.size()) != p_) throw std::invalid_argument("Omega power: tuple of wrong length");
        if (!X_.has(m) || x >= X_.dim(m)) return -1;
        return find(tuple_index(T_, u, X_.at(m).vertex[x]), m, x);
    }

private:
    static Index idx(long k) {
        if (k < 0) throw std::logic_error("Omega power: missing basis element");
        return static_cast<Index>(k);
    }

    void build() {
        const F& f = A_->field();
        cx_.A = A_;
        cx_.label = "Omega^" + std::to_string(p_) + "(" + X_.label + ")";
        if (X_.comp.empty()) { cx_.lo = 0; return; }
        xmax_ = 1;
        for (auto& M : X_.comp) xmax_ = std::max<std::uint64_t>(xmax_, M.dim);
        const auto& Tp = T_[p_];
        cx_.lo = X_.lo - p_;
        int nj = X_.hi() - X_.lo + 1;
        labels_.assign(nj, {});
        index_.assign(nj, {});
        for (int k = 0; k < nj; ++k) {
            int m = X_.lo + k;
            auto& Xm = X_.at(m);
            auto add = [&](int t, Index x) {
                index_[k].emplace(static_cast<std::uint64_t>(t) * xmax_ + x, static_cast<Index>(labels_[k].size()));
                labels_[k].push_back({t, m, x});
            };
            // p = 0 keeps the basis order of X
            if (p_ == 0)
                for (Index x = 0; x < Xm.dim; ++x) add(Xm.vertex[x], x);
            else
                for (std::size_t t = 0; t < Tp.size(); ++t)
                    for (Index x : Xm.by_vertex[Tp.rv[t]]) add(static_cast<int>(t), x);
        }
        for (int k = 0; k < nj; ++k) cx_.comp.push_back(component(k));
        Val<F> s = (p_ % 2 == 0) ? f.one() : f.neg(f.one());
        for (int k = 0; k + 1 < nj; ++k) {
            std::vector<SVec<F>> cols;
            for (auto& l : labels_[k]) {
                SVec<F> v;
                for (auto& [y, c] : X_.d[k].col(l.x)) v.emplace_back(idx(find(l.t, l.m + 1, y)), f.mul(s, c));
                std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
                cols.push_back(std::move(v));
            }
            cx_.d.push_back(from_columns(f, labels_[k + 1].size(), std::move(cols)));
        }
    }

    Module<F> component(int k) const {
        const F& f = A_->field();
        const auto& L = labels_[k];
        const auto& Tp = T_[p_];
        Module<F> M;
        M.A = A_;
        M.dim = L.size();
        for (auto& l : L) M.vertex.push_back(Tp.lv[l.t]);
        Accumulator<F> acc(f, M.dim);
        std::vector<int> u;
        for (int b = 0; b < A_->dim(); ++b) {
            std::vector<SVec<F>> cols;
            cols.reserve(M.dim);
            int bb = A_->bar_pos(b);
            for (Index i = 0; i < L.size(); ++i) {
                auto& l = L[i];
                if (bb < 0) {
                    // idempotent
                    if (A_->left(b) == Tp.lv[l.t]) acc.add(i, f.one());
                    cols.push_back(acc.take());
                    continue;
                }
                if (p_ == 0) {
                    for (auto& [y, c] : X_.at(l.m).act[b].col(l.x)) acc.add(y, c);
                    cols.push_back(acc.take());
                    continue;
                }
                const auto& t = Tp.tuples[l.t];
                // (b a_1)-bar ⊗ a_2 .. ⊗ x
                for (auto& [c, v] : A_->bar_prod(bb, t[0])) {
                    u.assign(1, static_cast<int>(c));
                    u.insert(u.end(), t.begin() + 1, t.end());
                    acc.add(idx(find(Tp.find(u), l.m, l.x)), v);
                }
                if (A_->bar_right(bb) == A_->bar_left(t[0])) {
                    // (-1)^i b ⊗ a_1 .. (a_i a_{i+1}) .. ⊗ x
                    for (int q = 1; q < p_; ++q) {
                        Val<F> s = (q % 2 == 0) ? f.one() : f.neg(f.one());
                        for (auto& [c, v] : A_->bar_prod(t[q - 1], t[q])) {
                            u.assign(1, bb);
                            u.insert(u.end(), t.begin(), t.begin() + (q - 1));
                            u.push_back(static_cast<int>(c));
                            u.insert(u.end(), t.begin() + q + 1, t.end());
                            acc.add(idx(find(Tp.find(u), l.m, l.x)), f.mul(s, v));
                        }
                    }
                    // (-1)^p b ⊗ a_1 .. a_{p-1} ⊗ a_p x
                    Val<F> s = (p_ % 2 == 0) ? f.one() : f.neg(f.one());
                    u.assign(1, bb);
                    u.insert(u.end(), t.begin(), t.end() - 1);
                    int ti = Tp.find(u);
                    for (auto& [y, v] : X_.at(l.m).act[A_->bar_basis(t.back())].col(l.x))
                        acc.add(idx(find(ti, l.m, y)), f.mul(s, v));
                }
                cols.push_back(acc.take());
            }
            M.act.push_back(from_columns(f, M.dim, std::move(cols)));
        }
        M.finalize();
        return M;
    }

    const Algebra<F>* A_ = nullptr;
    Complex<F> X_;
    int p_ = 0;
    Tensors T_;
    Complex<F> cx_;
    std::vector<std::vector<Label>> labels_;
    std::vector<std::unordered_map<std::uint64_t, Index>> index_;
    std::uint64_t xmax_ = 1;
};

template <class F>
Complex<F> omega(const Complex<F>& X) { return OmegaPower<F>(X, 1).complex(); }

namespace detail {
inline void same_base(int pa, int pb, int want, const char* what) {
    if (pb != pa + want) throw std::invalid_argument(std::string(what) + ": Omega powers do not match");
}
} // namespace detail

// theta_{Omega^p X} in Y_1(Omega^p X, Omega^{p+1} X): s a ⊗ y -> s a ⊗ y.
// H must be the Yoneda context (src.complex(), dst.complex()).
template <class F>
YElem<F> theta(const YonedaHom<F>& H, const OmegaPower<F>& src, const OmegaPower<F>& dst) {
    detail::same_base(src.power(), dst.power(), 1, "theta");
    const auto& A = H.algebra();
    const auto& S = src.complex();
    YElem<F> g{0, {}};
    if (H.pmax() < 1) return g;
    auto& Sp = H.space(0);
    const auto& T1 = H.tensors()[1];
    std::vector<int> u;
    for (int j = S.lo; j <= S.hi(); ++j)
        for (Index i = 0; i < S.dim(j); ++i) {
            auto& l = src.label(j, i);
            int v = S.at(j).vertex[i];
            for (int a = 0; a < A.bar_dim(); ++a) {
                if (A.bar_right(a) != v) continue;
                u.assign(1, a);
                if (src.power() > 0) {
                    auto& w = src.tuple(l.t);
                    u.insert(u.end(), w.begin(), w.end());
                }
                long y = dst.find(u, l.m, l.x);
                long k = Sp.find(1, j, T1.find({a}), i, static_cast<Index>(y));
                if (y < 0 || k < 0) throw std::logic_error("theta: coordinate missing");
                g.v.emplace_back(static_cast<Index>(k), A.field().one());
            }
        }
    std::sort(g.v.begin(), g.v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return g;
}

// Omega^p on morphisms: g in Y(Omega^a X, Omega^b Y) goes to Id ⊗ g in
// Y(Omega^{a+p} X, Omega^{b+p} Y), with Koszul sign (-1)^{p|g|}.
template <class F>
YElem<F> omega_on_morphism(const YonedaHom<F>& XY, const YElem<F>& g, const OmegaPower<F>& Xa,
                           const OmegaPower<F>& Yb, int p, const YonedaHom<F>& out, const OmegaPower<F>& Xap,
                           const OmegaPower<F>& Ybp) {
    detail::same_base(Xa.power(), Xap.power(), p, "omega_on_morphism");
    detail::same_base(Yb.power(), Ybp.power(), p, "omega_on_morphism");
    const F& k = XY.field();
    auto& Sg = XY.space(g.deg);
    auto& So = out.space(g.deg);
    const auto& Tg = XY.tensors();
    const auto& To = out.tensors();
    const auto& Tp = Xap.tensors()[p];
    std::vector<std::vector<int>> by_rv(XY.algebra().vertices());
    for (std::size_t u = 0; u < Tp.size(); ++u) by_rv[Tp.rv[u]].push_back(static_cast<int>(u));
    Val<F> sgn = (p * g.deg) % 2 ? k.neg(k.one()) : k.one();
    int a = Xa.power();
    Accumulator<F> acc(k, So.dim());
    std::vector<int> seq, s, w, wy;
    for (auto& [i, v] : g.v) {
        auto c = Sg.coord(i);
        if (c.p > out.pmax()) continue;
        int jy = c.m - c.p + g.deg;
        auto& lx = Xa.label(c.m, c.x);
        auto& ly = Yb.label(jy, c.y);
        const auto& t = Tg[c.p].tuples[c.t];
        for (int ui : by_rv[Tg[c.p].lv[c.t]]) {
            const auto& u = Tp.tuples[ui];
            seq = u;
            seq.insert(seq.end(), t.begin(), t.end());
            if (a > 0) seq.insert(seq.end(), Xa.tuple(lx.t).begin(), Xa.tuple(lx.t).end());
            s.assign(seq.begin(), seq.begin() + c.p);
            w.assign(seq.begin() + c.p, seq.end());
            wy = u;
            if (Yb.power() > 0) wy.insert(wy.end(), Yb.tuple(ly.t).begin(), Yb.tuple(ly.t).end());
            long src = Xap.find(w, lx.m, lx.x);
            long tgt = Ybp.find(wy, ly.m, ly.x);
            int si = tuple_index(To, s, Tp.lv[ui]);
            long idx = So.find(c.p, lx.m - a - p, si, static_cast<Index>(src), static_cast<Index>(tgt));
            if (src < 0 || tgt < 0 || idx < 0) throw std::logic_error("omega_on_morphism: coordinate missing");
            acc.add(static_cast<Index>(idx), k.mul(sgn, v));
        }
    }
    return {g.deg, acc.take()};
}

// theta_{Omega^p Y} ⊙ f for f in Y(X, Omega^p Y), by the closed formula
// s a_{1,r+1} ⊗ x -> (-1)^{|f|} s a_1 ⊗ f(s a_{2,r+1} ⊗ x)
template <class F>
YElem<F> structure_map(const YonedaHom<F>& H, const YElem<F>& f, const OmegaPower<F>& Yp, const OmegaPower<F>& Yp1,
                       const YonedaHom<F>& H1) {
    detail::same_base(Yp.power(), Yp1.power(), 1, "structure_map");
    const auto& A = H.algebra();
    const F& k = H.field();
    auto& S = H.space(f.deg);
    auto& S1 = H1.space(f.deg);
    const auto& T = H.tensors();
    const auto& T1 = H1.tensors();
    Val<F> sgn = f.deg % 2 ? k.neg(k.one()) : k.one();
    Accumulator<F> acc(k, S1.dim());
    std::vector<int> u, wy;
    for (auto& [i, v] : f.v) {
        auto c = S.coord(i);
        if (c.p + 1 > H1.pmax()) continue;
        int jy = c.m - c.p + f.deg;
        auto& ly = Yp.label(jy, c.y);
        const auto& t = T[c.p].tuples[c.t];
        for (int a = 0; a < A.bar_dim(); ++a) {
            if (A.bar_right(a) != T[c.p].lv[c.t]) continue;
            u.assign(1, a);
            u.insert(u.end(), t.begin(), t.end());
            wy.assign(1, a);
            if (Yp.power() > 0) wy.insert(wy.end(), Yp.tuple(ly.t).begin(), Yp.tuple(ly.t).end());
            long y = Yp1.find(wy, ly.m, ly.x);
            long idx = S1.find(c.p + 1, c.m, T1[c.p + 1].find(u), c.x, static_cast<Index>(y));
            if (y < 0 || idx < 0) throw std::logic_error("structure_map: coordinate missing");
            acc.add(static_cast<Index>(idx), k.mul(sgn, v));
        }
    }
    return {f.deg, acc.take()};
}

// varsigma_p : B ⊗ Omega^p X -> B_{>=p} ⊗ X, (a, t, (w, x)) -> (a, t w, x).
// src is built over Op.complex(), dst over Op.base() with pmin = p.
template <class F>
CochainMap<F> varsigma(const BarTensor<F>& src, const OmegaPower<F>& Op, const BarTensor<F>& dst) {
    if (dst.pmin() != Op.power()) throw std::invalid_argument("varsigma: target must start at bar degree p");
    const auto& S = src.complex();
    const auto& D = dst.complex();
    const F& k = S.A->field();
    int p = Op.power();
    CochainMap<F> g;
    std::vector<int> u;
    for (int j = S.lo; j <= S.hi(); ++j) {
        if (S.dim(j) == 0) continue;
        std::vector<SVec<F>> cols;
        for (Index i = 0; i < S.dim(j); ++i) {
            auto& l = src.label(j, i);
            auto& ly = Op.label(l.m, static_cast<Index>(l.x));
            u = src.tensors()[l.n].tuples[l.t];
            if (p > 0) u.insert(u.end(), Op.tuple(ly.t).begin(), Op.tuple(ly.t).end());
            int n = l.n + p;
            if (n > dst.cap()) { cols.push_back({}); continue; }
            int ti = tuple_index(dst.tensors(), u, Op.base().at(ly.m).vertex[ly.x]);
            long y = dst.find(n, l.a, ti, ly.m, static_cast<int>(ly.x));
            if (y < 0) throw std::logic_error("varsigma: target basis element missing");
            cols.push_back({{static_cast<Index>(y), k.one()}});
        }
        g.comp[j] = from_columns(k, D.dim(j), std::move(cols));
    }
    return g;
}

// Both composites of the square
//   Omega^p X --theta--> Omega^{p+1} X
//   | varsigma_p iota       | varsigma_{p+1} iota
//   B_{>=p} ⊗ X --pi_p--> B_{>=p+1} ⊗ X
// with all bar tensors truncated at bar degree cap (cap >= p + 1).
template <class F>
struct OmegaBarSquare {
    YElem<F> lhs, rhs;
    bool commutes = false;
};

template <class F>
OmegaBarSquare<F> check_omega_bar_square(const Complex<F>& X, int p, int cap) {
    if (p < 0 || cap < p + 1) throw std::invalid_argument("omega-bar square needs 0 <= p < cap");
    OmegaPower<F> Op(X, p), Op1(X, p + 1);
    BarTensor<F> Bp(X, cap, p), Bp1(X, cap, p + 1);
    BarTensor<F> BOp(Op.complex(), cap - p), BOp1(Op1.complex(), cap - p - 1);
    const auto& P = Op.complex();
    const auto& P1 = Op1.complex();
    int r = cap - p;

    // upper-right path
    YonedaHom<F> H_theta(P, P1, r);
    YonedaHom<F> H_io1(P1, BOp1.complex(), r);
    YonedaHom<F> H_s1(BOp1.complex(), Bp1.complex(), 0);
    YonedaHom<F> H_P1B(P1, Bp1.complex(), r);
    YonedaHom<F> H_PB1(P, Bp1.complex(), r);
    auto th = theta(H_theta, Op, Op1);
    auto io1 = iota(H_io1, BOp1);
    auto s1 = H_s1.from_graded_map(varsigma(BOp1, Op1, Bp1));
    auto right = compose(H_s1, s1, H_io1, io1, H_P1B);
    OmegaBarSquare<F> out;
    out.lhs = compose(H_P1B, right, H_theta, th, H_PB1);

    // left-lower path
    YonedaHom<F> H_io(P, BOp.complex(), r);
    YonedaHom<F> H_s(BOp.complex(), Bp.complex(), 0);
    YonedaHom<F> H_PB(P, Bp.complex(), r);
    YonedaHom<F> H_pi(Bp.complex(), Bp1.complex(), 0);
    auto io = iota(H_io, BOp);
    auto s = H_s.from_graded_map(varsigma(BOp, Op, Bp));
    auto left = compose(H_s, s, H_io, io, H_PB);
    auto pi = H_pi.from_graded_map(coordinate_map(Bp, Bp1));
    out.rhs = compose(H_pi, pi, H_PB, left, H_PB1);
    out.commutes = out.lhs.deg == out.rhs.deg && out.lhs.v == out.rhs.v;
    return out;
}

} // namespace yl
