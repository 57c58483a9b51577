#pragma once

#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "singyoneda.hpp"

namespace yl {

struct CapError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Degrees lo..hi of C, zero modules outside its range.
template <class F>
Complex<F> restrict_window(const Complex<F>& C, int lo, int hi) {
    Complex<F> W;
    W.A = C.A;
    W.lo = lo;
    W.label = C.label;
    auto zero = zero_module(*C.A);
    for (int n = lo; n <= hi; ++n) W.comp.push_back(C.has(n) ? C.at(n) : zero);
    for (int n = lo; n < hi; ++n) W.d.push_back(C.diff(n));
    return W;
}

// Y(Lambda, Lambda) ⊗_Lambda Z on degrees lo..hi. Since Y(Lambda, Lambda)^n is
// spanned by f_{t,b} ⊗ y with f_{t,b}(t ⊗ b) = e_{lv t}, the tensor product has
// basis (n, t, b, m, z): t in T_n, left(b) = rv(t), z in e_{lv t} Z^m. Vertex right(b).
// LL must be Y(Lambda, Lambda) with Lambda as the stalk in degree 0.
template <class F>
class YLLTensor {
public:
    struct Label { int n, t, b, m; Index z; };

    YLLTensor(const YonedaHom<F>& LL, const Complex<F>& Z, int lo, int hi) : LL_(&LL), Z_(&Z), lo_(lo), hi_(hi) {
        const auto& A = LL.algebra();
        const F& f = A.field();
        const auto& T = LL.tensors();
        cx_.A = &A;
        cx_.lo = lo;
        labels_.resize(hi - lo + 1);
        offset_.assign(hi - lo + 1, std::vector<std::vector<long>>(Z.comp.size()));
        pos_.resize(Z.comp.size());
        for (int m = Z.lo; m <= Z.hi(); ++m) {
            auto& P = pos_[m - Z.lo];
            P.assign(Z.dim(m), 0);
            for (auto& idx : Z.at(m).by_vertex)
                for (std::size_t i = 0; i < idx.size(); ++i) P[idx[i]] = static_cast<Index>(i);
        }
        for (int j = lo; j <= hi; ++j) {
            auto& L = labels_[j - lo];
            for (int m = Z.lo; m <= Z.hi(); ++m) {
                int n = j - m;
                if (n < 0 || n > LL.pmax() || Z.dim(m) == 0) continue;
                offset_[j - lo][m - Z.lo].assign(T[n].size() * A.dim(), -1);
                for (std::size_t t = 0; t < T[n].size(); ++t)
                    for (int b = 0; b < A.dim(); ++b) {
                        if (A.left(b) != T[n].rv[t]) continue;
                        offset_[j - lo][m - Z.lo][t * A.dim() + b] = static_cast<long>(L.size());
                        for (Index z : Z.at(m).by_vertex[T[n].lv[t]]) L.push_back({n, static_cast<int>(t), b, m, z});
                    }
            }
        }
        std::vector<std::vector<std::vector<std::pair<int, Val<F>>>>> pre(A.dim(), std::vector<std::vector<std::pair<int, Val<F>>>>(A.dim()));
        for (int bp = 0; bp < A.dim(); ++bp)
            for (int l = 0; l < A.dim(); ++l)
                for (auto& [b, c] : A.prod(bp, l)) pre[l][b].emplace_back(bp, c);
        for (int j = lo; j <= hi; ++j) {
            auto& L = labels_[j - lo];
            Module<F> M;
            M.A = &A;
            M.dim = L.size();
            for (auto& l : L) M.vertex.push_back(A.right(l.b));
            for (int lam = 0; lam < A.dim(); ++lam) {
                std::vector<SVec<F>> cols;
                cols.reserve(L.size());
                for (auto& l : L) {
                    SVec<F> v;
                    for (auto& [bp, c] : pre[lam][l.b]) {
                        long k = find(l.n, l.t, bp, l.m, l.z);
                        if (k >= 0) v.emplace_back(static_cast<Index>(k), c);
                    }
                    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
                    cols.push_back(std::move(v));
                }
                M.act.push_back(from_columns(f, M.dim, std::move(cols)));
            }
            M.finalize();
            cx_.comp.push_back(std::move(M));
        }
        for (int j = lo; j < hi; ++j) cx_.d.push_back(differential(j));
    }
    YLLTensor(const YLLTensor&) = delete;
    YLLTensor& operator=(const YLLTensor&) = delete;

    const Complex<F>& complex() const { return cx_; }
    const Complex<F>& factor() const { return *Z_; }
    const YonedaHom<F>& yll() const { return *LL_; }
    const Label& label(int j, Index i) const { return labels_[j - cx_.lo][i]; }

    long find(int n, int t, int b, int m, Index z) const {
        int j = n + m;
        if (j < lo_ || j > hi_ || m < Z_->lo || m > Z_->hi()) return -1;
        auto& o = offset_[j - lo_][m - Z_->lo];
        std::size_t k = static_cast<std::size_t>(t) * LL_->algebra().dim() + b;
        if (k >= o.size() || o[k] < 0) return -1;
        if (Z_->at(m).vertex[z] != LL_->tensors()[n].lv[t]) return -1;
        return o[k] + static_cast<long>(pos_[m - Z_->lo][z]);
    }

private:

    // d(f ⊗ z) = delta f ⊗ z + (-1)^n f ⊗ dz
    SparseMatrix<F> differential(int j) const {
        const auto& A = LL_->algebra();
        const F& f = A.field();
        const auto& T = LL_->tensors();
        std::map<std::tuple<int, int, int>, std::vector<std::tuple<int, int, Index, Val<F>>>> cache;
        auto delta_of = [&](int n, int t, int b) -> const std::vector<std::tuple<int, int, Index, Val<F>>>& {
            auto it = cache.find({n, t, b});
            if (it != cache.end()) return it->second;
            std::vector<std::tuple<int, int, Index, Val<F>>> out;
            long i0 = LL_->space(n).find(n, 0, t, static_cast<Index>(b), static_cast<Index>(A.idempotent(T[n].lv[t])));
            if (i0 >= 0 && n + 1 <= LL_->pmax()) {
                auto& S1 = LL_->space(n + 1);
                for (auto& [k, c] : LL_->delta_unit(n, static_cast<Index>(i0))) {
                    auto co = S1.coord(k);
                    out.emplace_back(co.t, static_cast<int>(co.x), co.y, c);
                }
            }
            return cache.emplace(std::tuple<int, int, int>{n, t, b}, std::move(out)).first->second;
        };
        std::vector<SVec<F>> cols;
        std::size_t rows = cx_.dim(j + 1);
        std::map<int, SparseMatrix<F>> dZ;
        for (int m = Z_->lo; m <= Z_->hi(); ++m) dZ.emplace(m, Z_->diff(m));
        Accumulator<F> acc(f, rows);
        for (auto& l : labels_[j - cx_.lo]) {
            for (auto& [t2, b2, y, c] : delta_of(l.n, l.t, l.b))
                for (auto& [z2, c2] : Z_->at(l.m).act[y].col(l.z)) {
                    long k = find(l.n + 1, t2, b2, l.m, z2);
                    if (k >= 0) acc.add(static_cast<Index>(k), f.mul(c, c2));
                }
            Val<F> s = (l.n % 2 == 0) ? f.one() : f.neg(f.one());
            for (auto& [z2, c] : dZ.at(l.m).col(l.z)) {
                long k = find(l.n, l.t, l.b, l.m + 1, z2);
                if (k >= 0) acc.add(static_cast<Index>(k), f.mul(s, c));
            }
            cols.push_back(acc.take());
        }
        return from_columns(f, rows, std::move(cols));
    }

    const YonedaHom<F>* LL_;
    const Complex<F>* Z_;
    int lo_, hi_;
    Complex<F> cx_;
    std::vector<std::vector<Label>> labels_;
    // offset_[j][m][t * dim + b]: first label of the block (n, t, b, m), -1 if absent
    std::vector<std::vector<std::vector<long>>> offset_;
    std::vector<std::vector<Index>> pos_;  // position of z inside its vertex block
};

// epsilon_Z(f ⊗ z) = (-1)^{|z||f|} f(-) z, into Y(Lambda, Z) given by LZ.
template <class F>
CochainMap<F> epsilon_map(const YLLTensor<F>& S, const YonedaHom<F>& LZ) {
    if (&S.factor() != &LZ.target()) throw std::invalid_argument("epsilon_map: mismatched target");
    const auto& C = S.complex();
    const F& f = LZ.field();
    CochainMap<F> e;
    for (int j = C.lo; j <= C.hi(); ++j) {
        auto& Sp = LZ.space(j);
        std::vector<SVec<F>> cols;
        for (Index i = 0; i < C.dim(j); ++i) {
            auto& l = S.label(j, i);
            long k = LZ.space(j).find(l.n, 0, l.t, static_cast<Index>(l.b), l.z);
            if (k < 0) { cols.push_back({}); continue; }
            Val<F> s = ((l.n * l.m) % 2 == 0) ? f.one() : f.neg(f.one());
            cols.push_back({{static_cast<Index>(k), s}});
        }
        e.comp[j] = from_columns(f, Sp.dim(), std::move(cols));
    }
    return e;
}

// Id ⊗ g for a degree-0 cochain map g : Z -> W
template <class F>
CochainMap<F> tensor_id(const YLLTensor<F>& S, const CochainMap<F>& g, const YLLTensor<F>& D) {
    const auto& C = S.complex();
    const auto& Z = S.factor();
    const auto& W = D.factor();
    const F& f = C.A->field();
    CochainMap<F> out;
    std::map<int, SparseMatrix<F>> gm;
    for (int m = Z.lo; m <= Z.hi(); ++m) gm.emplace(m, g.at(m, Z, W, f));
    for (int j = C.lo; j <= C.hi(); ++j) {
        std::vector<SVec<F>> cols;
        for (Index i = 0; i < C.dim(j); ++i) {
            auto& l = S.label(j, i);
            SVec<F> v;
            for (auto& [z2, c] : gm.at(l.m).col(l.z)) {
                long k = D.find(l.n, l.t, l.b, l.m, z2);
                if (k >= 0) v.emplace_back(static_cast<Index>(k), c);
            }
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
            cols.push_back(std::move(v));
        }
        out.comp[j] = from_columns(f, D.complex().dim(j), std::move(cols));
    }
    return out;
}

// kappa_X(f ⊗ (a_0 ⊗ t ⊗ x)) = delta_{q,0} (-1)^{|x||f|} f(-) a_0 x; S is built over B.complex().
template <class F>
CochainMap<F> kappa(const YLLTensor<F>& S, const BarTensor<F>& B, const YonedaHom<F>& LX) {
    if (&S.factor() != &B.complex()) throw std::invalid_argument("kappa: mismatched contexts");
    const auto& C = S.complex();
    const auto& X = B.source();
    const F& f = LX.field();
    CochainMap<F> out;
    for (int j = C.lo; j <= C.hi(); ++j) {
        auto& Sp = LX.space(j);
        std::vector<SVec<F>> cols;
        for (Index i = 0; i < C.dim(j); ++i) {
            auto& l = S.label(j, i);
            auto& w = B.label(l.m, l.z);
            if (w.n != 0) { cols.push_back({}); continue; }
            Val<F> s = ((l.n * l.m) % 2 == 0) ? f.one() : f.neg(f.one());
            SVec<F> v;
            for (auto& [x2, c] : X.at(w.m).act[w.a].col(static_cast<Index>(w.x))) {
                long k = Sp.find(l.n, 0, l.t, static_cast<Index>(l.b), x2);
                if (k >= 0) v.emplace_back(static_cast<Index>(k), f.mul(s, c));
            }
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
            cols.push_back(std::move(v));
        }
        out.comp[j] = from_columns(f, Sp.dim(), std::move(cols));
    }
    return out;
}

// Y(Lambda, g) for a degree-0 cochain map g : Z -> W, on degrees lo..hi.
// LZ and LW share the source; coordinates beyond LW's cap are dropped.
template <class F>
CochainMap<F> yoneda_postcompose(const YonedaHom<F>& LZ, const YonedaHom<F>& LW, const CochainMap<F>& g, int lo, int hi) {
    if (&LZ.source() != &LW.source()) throw std::invalid_argument("yoneda_postcompose: different sources");
    const auto& Z = LZ.target();
    const auto& W = LW.target();
    const F& f = LZ.field();
    CochainMap<F> out;
    std::map<int, SparseMatrix<F>> gm;
    for (int m = Z.lo; m <= Z.hi(); ++m) gm.emplace(m, g.at(m, Z, W, f));
    for (int n = lo; n <= hi; ++n) {
        auto& S = LZ.space(n);
        auto& D = LW.space(n);
        std::vector<SVec<F>> cols;
        cols.reserve(S.dim());
        for (Index i = 0; i < S.dim(); ++i) {
            auto c = S.coord(i);
            int jy = c.m - c.p + n;
            SVec<F> v;
            for (auto& [y2, a] : gm.at(jy).col(c.y)) {
                long k = D.find(c.p, c.m, c.t, c.x, y2);
                if (k >= 0) v.emplace_back(static_cast<Index>(k), a);
            }
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
            cols.push_back(std::move(v));
        }
        out.comp[n] = from_columns(f, D.dim(), std::move(cols));
    }
    return out;
}

// ---------------------------------------------------------------- minimal models

// Basis of e_v soc M; needs the radical to be spanned by the bar basis.
template <class F>
std::vector<SVec<F>> socle_basis(const Module<F>& M, int v) {
    const auto& A = *M.A;
    const F& f = A.field();
    const auto& idx = M.by_vertex[v];
    if (idx.empty()) return {};
    std::size_t nb = static_cast<std::size_t>(A.bar_dim());
    std::vector<SVec<F>> cols;
    for (Index i : idx) {
        SVec<F> c;
        for (std::size_t a = 0; a < nb; ++a)
            for (auto& [r, x] : M.act[A.bar_basis(static_cast<int>(a))].col(i)) c.emplace_back(static_cast<Index>(a * M.dim + r), x);
        cols.push_back(std::move(c));
    }
    auto K = kernel_basis(from_columns(f, std::max<std::size_t>(nb * M.dim, 1), std::move(cols)));
    std::vector<SVec<F>> out;
    for (auto& k : K) {
        SVec<F> v2;
        for (auto& [j, x] : k) v2.emplace_back(idx[j], x);
        std::sort(v2.begin(), v2.end(), [](auto& a, auto& b) { return a.first < b.first; });
        out.push_back(std::move(v2));
    }
    return out;
}

// Dimensions and differential ranks of the minimal part of a complex of
// injectives. mult_v(n) = dim e_v soc C^n - rank(d^n | e_v soc C^n) - rank(d^{n-1} | e_v soc C^{n-1}),
// reported for C.lo < n < C.hi(); ranks for C.lo < n < C.hi() - 1.
struct MinimalDims {
    int lo = 0;
    std::vector<long long> dims;
    std::vector<long long> ranks;
    long long dim(int n) const { return (n < lo || n - lo >= static_cast<int>(dims.size())) ? 0 : dims[n - lo]; }
    long long rank(int n) const { return (n < lo || n - lo >= static_cast<int>(ranks.size())) ? 0 : ranks[n - lo]; }
    // dim of the injective envelope of C^n, for C.lo <= n <= C.hi()
    int env_lo = 0;
    std::vector<long long> envelope;
    long long envelope_dim(int n) const { return envelope.at(n - env_lo); }
};

template <class F>
MinimalDims minimal_dims(const Complex<F>& C) {
    const auto& A = *C.A;
    if (!radical_is_bar(A)) throw std::invalid_argument("minimal_dims: radical is not spanned by the bar basis");
    int nv = A.vertices();
    std::vector<long long> inj(nv, 0);
    for (int b = 0; b < A.dim(); ++b) ++inj[A.left(b)];
    int lo = C.lo, hi = C.hi();
    std::vector<std::vector<long long>> soc(hi - lo + 1, std::vector<long long>(nv, 0)), r(hi - lo + 1, std::vector<long long>(nv, 0));
    for (int n = lo; n <= hi; ++n)
        for (int v = 0; v < nv; ++v) {
            auto S = socle_basis(C.at(n), v);
            soc[n - lo][v] = static_cast<long long>(S.size());
            if (n < hi && !S.empty()) {
                ColumnReducer<F> red(A.field(), C.dim(n + 1));
                auto d = C.diff(n);
                for (auto& s : S) red.insert(d.apply(s));
                r[n - lo][v] = static_cast<long long>(red.rank());
            }
        }
    MinimalDims M;
    M.lo = lo + 1;
    M.env_lo = lo;
    for (int n = lo; n <= hi; ++n) {
        long long e = 0;
        for (int v = 0; v < nv; ++v) e += soc[n - lo][v] * inj[v];
        M.envelope.push_back(e);
    }
    for (int n = lo + 1; n < hi; ++n) {
        long long dsum = 0;
        for (int v = 0; v < nv; ++v) dsum += (soc[n - lo][v] - r[n - lo][v] - r[n - 1 - lo][v]) * inj[v];
        M.dims.push_back(dsum);
    }
    for (int n = lo + 1; n < hi - 1; ++n) {
        long long rk = static_cast<long long>(rank(C.diff(n)));
        for (int v = 0; v < nv; ++v) rk -= r[n - lo][v] * inj[v];
        M.ranks.push_back(rk);
    }
    return M;
}

// Z^n = ker d^n is an injective module for every lo <= n <= hi with n < C.hi()
template <class F>
bool cocycles_injective(const Complex<F>& C, int lo, int hi) {
    const auto& A = *C.A;
    for (int n = std::max(lo, C.lo); n <= std::min(hi, C.hi() - 1); ++n) {
        auto& M = C.at(n);
        auto d = C.diff(n);
        std::vector<SVec<F>> basis;
        std::vector<int> vert;
        for (int v = 0; v < A.vertices(); ++v) {
            auto& idx = M.by_vertex[v];
            if (idx.empty()) continue;
            std::vector<SVec<F>> cols;
            for (Index i : idx) cols.push_back(d.col(i));
            for (auto& k : kernel_basis(from_columns(A.field(), d.rows(), std::move(cols)))) {
                SVec<F> z;
                for (auto& [j, x] : k) z.emplace_back(idx[j], x);
                std::sort(z.begin(), z.end(), [](auto& a, auto& b) { return a.first < b.first; });
                basis.push_back(std::move(z));
                vert.push_back(v);
            }
        }
        if (!is_injective(submodule(M, basis, vert))) return false;
    }
    return true;
}

// M embeds in its injective envelope, so it is injective iff the dimensions agree
template <class F>
long long injective_envelope_dim(const Module<F>& M) {
    const auto& A = *M.A;
    std::vector<long long> inj(A.vertices(), 0);
    for (int b = 0; b < A.dim(); ++b) ++inj[A.left(b)];
    long long e = 0;
    for (int v = 0; v < A.vertices(); ++v) e += static_cast<long long>(socle_basis(M, v).size()) * inj[v];
    return e;
}

template <class F>
bool injective_by_socle(const Module<F>& M) {
    if (!radical_is_bar(*M.A)) return is_injective(M);
    return injective_envelope_dim(M) == static_cast<long long>(M.dim);
}

template <class F>
bool components_injective(const Complex<F>& C) {
    for (auto& M : C.comp)
        if (M.dim && !injective_by_socle(M)) return false;
    return true;
}

// ---------------------------------------------------------------- the S window

template <class F>
struct StabWindow {
    int lo = 0, hi = 0;
    int bar_cap = 0, filt_cap = 0;
    Complex<F> cx;                 // Cone(kappa_X) on lo..hi
    std::vector<long long> h;      // H^n for lo..hi
    MinimalDims minimal;           // on lo..hi, ranks on lo..hi-1
    bool acyclic = false;
    bool injective = false;
    bool canonical_qi = false;     // Y(Lambda, X) -> Cone(kappa_X) is a quasi-isomorphism in degrees 1..hi
    long long cohomology(int n) const { return h.at(n - lo); }
};

// Caps for the window [lo, hi] of Cone(kappa_X): H^n is exact for lo <= n <= hi
// when the bar cap is at least b_X - lo + 1 and the filtration cap covers degree hi + 2.
inline int stab_bar_cap(int bX, int lo) { return std::max(0, bX - lo + 1); }
inline int stab_filt_cap(int aX, int hi, int bar_cap) { return std::max(0, hi + 2 + bar_cap - aX); }

template <class F>
StabWindow<F> stab(const Complex<F>& X, int lo, int hi, std::optional<int> bar_cap = std::nullopt,
                   std::optional<int> filt_cap = std::nullopt) {
    if (lo > hi) throw std::invalid_argument("empty window");
    const auto& A = *X.A;
    int wlo = lo - 1, whi = hi + 1;
    int aX = X.empty() ? 0 : X.amin(), bX = X.empty() ? 0 : X.bmax();
    int Q = stab_bar_cap(bX, lo), P = stab_filt_cap(aX, hi, Q);
    if (bar_cap) {
        if (*bar_cap < Q) throw CapError("bar cap " + std::to_string(*bar_cap) + " is below the " + std::to_string(Q) + " required by the window");
        Q = *bar_cap;
        P = stab_filt_cap(aX, hi, Q);
    }
    if (filt_cap) {
        if (*filt_cap < P) throw CapError("filtration cap " + std::to_string(*filt_cap) + " is below the " + std::to_string(P) + " required by the window");
        P = *filt_cap;
    }
    auto L = stalk(regular_module(A));
    YonedaHom<F> LL(L, L, P), LX(L, X, P);
    BarTensor<F> B(X, Q);
    YLLTensor<F> S(LL, B.complex(), wlo, whi + 1);
    auto Y = yoneda_lambda_complex(LX, wlo, whi + 1);
    auto k = kappa(S, B, LX);
    auto C = restrict_window(cone(S.complex(), Y, k), wlo, whi);
    StabWindow<F> W;
    W.lo = lo;
    W.hi = hi;
    W.bar_cap = Q;
    W.filt_cap = P;
    W.acyclic = true;
    for (int n = lo; n <= hi; ++n) {
        W.h.push_back(cohomology_dim<F>(C, n));
        if (W.h.back() != 0) W.acyclic = false;
    }
    W.minimal = minimal_dims(C);
    W.cx = restrict_window(C, lo, hi);
    W.injective = true;
    for (int n = lo; n <= hi; ++n)
        if (W.minimal.envelope_dim(n) != static_cast<long long>(C.dim(n))) W.injective = false;
    // the inclusion y -> (y, 0)
    CochainMap<F> inc;
    for (int n = wlo; n <= whi; ++n) {
        SparseMatrix<F> m(A.field(), C.dim(n), Y.dim(n));
        m.paste(SparseMatrix<F>::identity(A.field(), Y.dim(n)), 0, 0);
        inc.comp[n] = m;
    }
    W.canonical_qi = hi < 1 || quasi_iso_window(restrict_window(Y, wlo, whi), C, inc, 1, hi);
    return W;
}

// ---------------------------------------------------------------- stage-wise colimits

// H^n of a colimit along injective stage maps, stopping after s consecutive bijections.
// stage(p) returns a vector-space complex covering degrees n-1..n+1;
// step(p) the degree-n component of the stage map p -> p+1.
template <class F>
StabilizationReport stabilize_colimit(const F& f, int n, int first, int s, int max_stage,
                                      const std::function<VComplex<F>(int)>& stage,
                                      const std::function<SparseMatrix<F>(int)>& step) {
    StabilizationReport R;
    R.degree = n;
    R.first_stage = first;
    int run = 0;
    std::vector<SVec<F>> prev;
    long long prev_h = 0;
    for (int p = first; p <= max_stage; ++p) {
        auto C = stage(p);
        StageInfo info;
        info.stage = p;
        info.space_dim = C.dim(n);
        info.h = cohomology_dim<F>(C, n);
        if (p > first) {
            ColumnReducer<F> red(f, C.dim(n));
            auto Bd = C.diff(n - 1);
            for (std::size_t j = 0; j < Bd.cols(); ++j) red.insert(Bd.col(j));
            auto m = step(p - 1);
            long long r = 0;
            for (auto& z : prev)
                if (red.insert(m.apply(z))) ++r;
            info.rank_from_prev = r;
            run = (r == prev_h && r == info.h) ? run + 1 : 0;
        }
        R.stages.push_back(info);
        if (run >= s) {
            R.stable = true;
            R.value = info.h;
            R.stage = p;
            break;
        }
        prev = cohomology_basis(C, n, f);
        prev_h = info.h;
    }
    return R;
}

// Vector-space cone of a degree-0 map g : X -> Y on degrees lo..hi.
template <class F, class CX, class CY>
VComplex<F> vcone(const CX& X, const CY& Y, const CochainMap<F>& g, int lo, int hi, const F& k) {
    VComplex<F> C;
    C.f = k;
    C.lo = lo;
    for (int n = lo; n <= hi; ++n) C.dims.push_back(Y.dim(n) + X.dim(n + 1));
    for (int n = lo; n < hi; ++n) {
        std::size_t ry = Y.dim(n + 1), cy = Y.dim(n);
        SparseMatrix<F> m(k, ry + X.dim(n + 2), cy + X.dim(n + 1));
        m.paste(Y.diff(n), 0, 0);
        m.paste(g.at(n + 1, X, Y, k), 0, cy);
        m.paste(X.diff(n + 1).scaled(k.neg(k.one())), ry, cy);
        C.d.push_back(std::move(m));
    }
    return C;
}

// diag(a^n, b^{n+1}) between cones
template <class F>
SparseMatrix<F> cone_map(const SparseMatrix<F>& a, const SparseMatrix<F>& b) {
    SparseMatrix<F> m(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    m.paste(a, 0, 0);
    m.paste(b, a.rows(), a.cols());
    return m;
}

// The stages of vartheta_X : colim_q Y(Lambda, B_{<=q} ⊗ X) -> Y(Lambda, X),
// exact in degrees <= nmax + 1.
template <class F>
class VarthetaSystem {
public:
    VarthetaSystem(const Complex<F>& X, int nmax)
        : X_(&X), nmax_(nmax), L_(stalk(regular_module(*X.A))),
          LX_(std::make_unique<YonedaHom<F>>(L_, X, cap(0))) {}
    VarthetaSystem(const VarthetaSystem&) = delete;
    VarthetaSystem& operator=(const VarthetaSystem&) = delete;

    int nmax() const { return nmax_; }
    int cap(int q) const { return std::max(0, nmax_ + 3 + q - (X_->empty() ? 0 : X_->amin())); }
    const YonedaHom<F>& target() const { return *LX_; }
    const BarTensor<F>& bar(int q) const { ensure(q); return *bars_[q]; }
    const YonedaHom<F>& stage(int q) const { ensure(q); return *homs_[q]; }

    // Y(Lambda, eps ⊗ Id) at stage q
    CochainMap<F> map(int q, int lo, int hi) const {
        return yoneda_postcompose(stage(q), *LX_, epsilon_tensor(bar(q)), lo, hi);
    }
    // Y(Lambda, inclusion) from stage q to q + 1
    CochainMap<F> inclusion(int q, int lo, int hi) const {
        return yoneda_postcompose(stage(q), stage(q + 1), coordinate_map(bar(q), bar(q + 1)), lo, hi);
    }
    VComplex<F> cone_stage(int q, int lo, int hi) const {
        return vcone(stage(q).complex(lo, hi + 1), LX_->complex(lo, hi + 1), map(q, lo, hi + 1), lo, hi, X_->A->field());
    }

    // H^n of Cone(vartheta), stage-wise
    StabilizationReport cone_cohomology(int n, int s = 3, int max_stage = 10) const {
        if (n > nmax_) throw std::invalid_argument("degree above the configured nmax");
        const F& f = X_->A->field();
        return stabilize_colimit<F>(
            f, n, 0, s, max_stage, [&](int q) { return cone_stage(q, n - 1, n + 1); },
            [&](int q) {
                return cone_map(SparseMatrix<F>::identity(f, LX_->space(n).dim()), inclusion(q, n + 1, n + 1).comp.at(n + 1));
            });
    }

    // H^n of the colimit itself
    StabilizationReport source_cohomology(int n, int s = 3, int max_stage = 10) const {
        const F& f = X_->A->field();
        return stabilize_colimit<F>(
            f, n, 0, s, max_stage, [&](int q) { return stage(q).complex(n - 1, n + 1); },
            [&](int q) { return inclusion(q, n, n).comp.at(n); });
    }

    // rank of H^n(vartheta) at stage q
    long long map_rank(int n, int q) const {
        const F& f = X_->A->field();
        auto C = stage(q).complex(n - 1, n + 1);
        auto T = LX_->complex(n - 1, n + 1);
        auto m = map(q, n, n).comp.at(n);
        ColumnReducer<F> red(f, T.dim(n));
        auto Bd = T.diff(n - 1);
        for (std::size_t j = 0; j < Bd.cols(); ++j) red.insert(Bd.col(j));
        long long r = 0;
        for (auto& z : cohomology_basis(C, n, f))
            if (red.insert(m.apply(z))) ++r;
        return r;
    }

private:
    void ensure(int q) const {
        while (static_cast<int>(bars_.size()) <= q) {
            int k = static_cast<int>(bars_.size());
            bars_.push_back(std::make_unique<BarTensor<F>>(*X_, k));
            homs_.push_back(std::make_unique<YonedaHom<F>>(L_, bars_.back()->complex(), cap(k)));
        }
    }

    const Complex<F>* X_;
    int nmax_;
    Complex<F> L_;
    std::unique_ptr<YonedaHom<F>> LX_;
    mutable std::vector<std::unique_ptr<BarTensor<F>>> bars_;
    mutable std::vector<std::unique_ptr<YonedaHom<F>>> homs_;
};

// dim coker H^n(vartheta) + dim ker H^{n+1}(vartheta), read at stabilized stages
struct TriangleCheck {
    int degree = 0;
    long long cone = 0;        // H^n Cone(vartheta)
    long long coker = 0;
    long long ker = 0;
    bool stable = false;
    bool holds() const { return stable && cone == coker + ker; }
};

template <class F>
TriangleCheck triangle_check(const VarthetaSystem<F>& V, int n, int s = 3, int max_stage = 10) {
    TriangleCheck T;
    T.degree = n;
    auto c = V.cone_cohomology(n, s, max_stage);
    auto a = V.source_cohomology(n, s, max_stage);
    auto b = V.source_cohomology(n + 1, s, max_stage);
    T.stable = c.stable && a.stable && b.stable;
    if (!T.stable) return T;
    const auto& LX = V.target();
    long long hn = cohomology_dim<F>(LX.complex(n - 1, n + 1), n);
    T.cone = c.value;
    T.coker = hn - V.map_rank(n, a.stage);
    T.ker = b.value - V.map_rank(n + 1, b.stage);
    return T;
}

// ---------------------------------------------------------------- certificates

struct KCertificate {
    bool acyclic = false;
    bool cocycles_injective = false;
};

// Cone(epsilon_X) on [lo, hi]
template <class F>
KCertificate class_K_certificate(const Complex<F>& X, int lo, int hi) {
    const auto& A = *X.A;
    auto L = stalk(regular_module(A));
    int aX = X.empty() ? 0 : X.amin();
    int P = std::max(0, hi + 3 - aX);
    YonedaHom<F> LL(L, L, P), LX(L, X, P);
    YLLTensor<F> S(LL, X, lo - 1, hi + 2);
    auto Y = yoneda_lambda_complex(LX, lo - 1, hi + 2);
    auto C = restrict_window(cone(S.complex(), Y, epsilon_map(S, LX)), lo - 1, hi + 1);
    KCertificate K;
    K.acyclic = true;
    for (int n = lo; n <= hi; ++n)
        if (cohomology_dim<F>(C, n) != 0) K.acyclic = false;
    K.cocycles_injective = cocycles_injective(C, lo, hi);
    return K;
}

struct GorensteinReport {
    int n_max = 0;
    int tail = 0;
    std::vector<std::vector<int>> nonvanishing; // per simple module
    bool consistent = false;
};

// Ext^n(S_v, Lambda) != 0 for 0 <= n <= n_max; consistent when every list stays below n_max - tail + 1
template <class F>
GorensteinReport gorenstein_probe(const Algebra<F>& A, int n_max, int tail = 3) {
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    GorensteinReport R;
    R.n_max = n_max;
    R.tail = tail;
    R.consistent = true;
    auto Lam = regular_module(A);
    for (int v = 0; v < A.vertices(); ++v) {
        auto S = simple_module(A, v);
        std::vector<int> nz;
        for (int n = 0; n <= n_max; ++n)
            if (ext_oracle(S, Lam, n) != 0) nz.push_back(n);
        if (!nz.empty() && nz.back() > n_max - tail) R.consistent = false;
        R.nonvanishing.push_back(std::move(nz));
    }
    return R;
}

// ---------------------------------------------------------------- comparison c_X

template <class F>
struct ComparisonReport {
    int lo = 0, hi = 0;
    std::vector<StabilizationReport> cone_h;   // H^n colim Cone(epsilon_{B<=p ⊗ X}), n in lo..hi
    bool cocycles_injective = false;
    bool certified = false;
    int sy_stage = 0;
    MinimalDims sy_minimal;                    // SY(Lambda, X) at stage sy_stage
    std::vector<long long> sy_h;
    MinimalDims stab_minimal;
    std::vector<long long> stab_h;
    bool comparable = false;                   // Gorenstein probe consistent: dims independent of caps
    bool agree = false;
    std::vector<std::string> warnings;
};

template <class F>
ComparisonReport<F> comparison_c(const Complex<F>& X, int lo, int hi, int s = 3, int max_stage = 10) {
    const auto& A = *X.A;
    const F& f = A.field();
    auto L = stalk(regular_module(A));
    ComparisonReport<F> R;
    R.lo = lo;
    R.hi = hi;
    int aX = X.empty() ? 0 : X.amin();

    // stage p: Cone(epsilon) for B_{<=p} ⊗ X
    struct Stage {
        std::unique_ptr<BarTensor<F>> B;
        std::unique_ptr<YonedaHom<F>> LL, LB;
        std::unique_ptr<YLLTensor<F>> S;
        CochainMap<F> eps;
    };
    std::vector<std::unique_ptr<Stage>> stages;
    auto get = [&](int p) -> Stage& {
        while (static_cast<int>(stages.size()) <= p) {
            int q = static_cast<int>(stages.size());
            auto st = std::make_unique<Stage>();
            int P = std::max(0, hi + 3 + q - aX);
            st->B = std::make_unique<BarTensor<F>>(X, q);
            st->LL = std::make_unique<YonedaHom<F>>(L, L, P);
            st->LB = std::make_unique<YonedaHom<F>>(L, st->B->complex(), P);
            st->S = std::make_unique<YLLTensor<F>>(*st->LL, st->B->complex(), lo - 1, hi + 2);
            st->eps = epsilon_map(*st->S, *st->LB);
            stages.push_back(std::move(st));
        }
        return *stages[p];
    };
    for (int n = lo; n <= hi; ++n) {
        auto rep = stabilize_colimit<F>(
            f, n, 0, s, max_stage,
            [&](int p) {
                auto& st = get(p);
                return vcone(st.S->complex(), st.LB->complex(lo - 1, hi + 2), st.eps, n - 1, n + 1, f);
            },
            [&](int p) {
                auto& a = get(p);
                auto& b = get(p + 1);
                auto inc = coordinate_map(*a.B, *b.B);
                auto y = yoneda_postcompose(*a.LB, *b.LB, inc, n, n).comp.at(n);
                auto t = tensor_id(*a.S, inc, *b.S);
                return cone_map(y, t.at(n + 1, a.S->complex(), b.S->complex(), f));
            });
        if (!rep.stable) R.warnings.push_back("H^" + std::to_string(n) + " of Cone(epsilon) did not stabilize by stage " + std::to_string(max_stage));
        R.cone_h.push_back(std::move(rep));
    }
    int pstar = 0;
    for (auto& r : R.cone_h) pstar = std::max(pstar, r.stage);
    {
        auto& st = get(pstar);
        auto C = restrict_window(cone(st.S->complex(), yoneda_lambda_complex(*st.LB, lo - 1, hi + 2), st.eps), lo - 1, hi + 1);
        R.cocycles_injective = cocycles_injective(C, lo, hi);
    }
    R.certified = R.cocycles_injective;
    for (auto& r : R.cone_h) R.certified = R.certified && r.stable && r.value == 0;

    // S(X) with bar cap Q is matched by SY(Lambda, X) at stage Q + 1; off the
    // Gorenstein case both minimal parts grow with the truncation
    auto W = stab(X, lo, hi);
    R.stab_minimal = W.minimal;
    R.stab_h = W.h;
    SYHom<F> H(L, X, hi + 2);
    R.sy_stage = W.bar_cap + 1;
    auto Csy = yoneda_lambda_complex(H.stage(R.sy_stage), lo - 1, hi + 1);
    for (int n = lo; n <= hi; ++n) R.sy_h.push_back(cohomology_dim<F>(Csy, n));
    R.sy_minimal = minimal_dims(Csy);
    R.agree = R.sy_minimal.dims == W.minimal.dims && R.sy_minimal.ranks == W.minimal.ranks && R.sy_h == W.h;
    R.comparable = gorenstein_probe(A, 8).consistent;
    if (!R.comparable) R.warnings.push_back("Gorenstein probe inconsistent; window dimensions depend on the truncation");
    return R;
}

// ---------------------------------------------------------------- complete resolutions

template <class F>
struct CompleteResolution {
    StabWindow<F> window;
    bool probe_consistent = false;
    bool contractible = false;
    std::vector<std::string> warnings;
};

template <class F>
CompleteResolution<F> complete_resolution(const Module<F>& M, int lo, int hi, int probe_max = 8) {
    CompleteResolution<F> R;
    auto P = gorenstein_probe(*M.A, probe_max);
    R.probe_consistent = P.consistent;
    if (!P.consistent) R.warnings.push_back("Gorenstein probe inconsistent up to n = " + std::to_string(probe_max) + "; the window need not be a complete resolution");
    auto X = stalk(M);
    R.window = stab(X, lo, hi);
    bool zero = true;
    for (auto d : R.window.minimal.dims) zero = zero && d == 0;
    R.contractible = zero && R.window.acyclic && cocycles_injective(R.window.cx, lo, hi);
    return R;
}

} // namespace yl
