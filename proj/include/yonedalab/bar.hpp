#pragma once

#include <unordered_map>
#include <vector>

#include "homalg.hpp"

namespace yl {

// Truncated bar tensor B_{[pmin, cap]} ⊗_Lambda X in the collapsed form
// Lambda ⊗ (s Lambda-bar)^{⊗n} ⊗ X. Basis element (n, a, t, x): a an algebra
// basis element, t in T_n, x a basis vector of X^m; degree m - n, vertex left(a).
// pmin > 0 gives the quotient B_{>=pmin}; cap bounds the subcomplex B_{<=cap}.
template <class F>
class BarTensor {
public:
    struct Label { int n, a, t, m, x; };

    BarTensor() = default;
    BarTensor(const Complex<F>& X, int cap, int pmin = 0) : A_(X.A), X_(X), pmin_(pmin), cap_(cap) {
        if (pmin < 0) throw std::invalid_argument("negative lower bar degree");
        T_ = Tensors(*A_, std::max(cap, 0));
        build();
    }

    const Complex<F>& complex() const { return cx_; }
    const Complex<F>& source() const { return X_; }
    const Tensors& tensors() const { return T_; }
    int cap() const { return cap_; }
    int pmin() const { return pmin_; }
    const Label& label(int j, Index i) const { return labels_[j - cx_.lo][i]; }

    // index of (n, a, t, x in X^m) inside degree m - n, or -1
    long find(int n, int a, int t, int m, int x) const {
        if (n < pmin_ || n > cap_) return -1;
        int j = m - n;
        if (j < cx_.lo || j - cx_.lo >= static_cast<int>(index_.size())) return -1;
        auto& h = index_[j - cx_.lo];
        auto it = h.find(key(n, a, t, x));
        return it == h.end() ? -1 : static_cast<long>(it->second);
    }

private:
    static Index idx(long k) {
        if (k < 0) throw std::logic_error("bar tensor: missing basis element");
        return static_cast<Index>(k);
    }

    std::uint64_t key(int n, int a, int t, int x) const {
        return ((static_cast<std::uint64_t>(n) * A_->dim() + a) * tmax_ + static_cast<std::uint64_t>(t)) * xmax_ + x;
    }

    void build() {
        const F& f = A_->field();
        cx_.A = A_;
        if (X_.comp.empty() || cap_ < pmin_) { cx_.lo = 0; return; }
        tmax_ = 1;
        for (int n = 0; n <= cap_; ++n) tmax_ = std::max<std::uint64_t>(tmax_, T_[n].size());
        xmax_ = 1;
        for (auto& M : X_.comp) xmax_ = std::max<std::uint64_t>(xmax_, M.dim);
        int lo = X_.lo - cap_, hi = X_.hi() - pmin_;
        cx_.lo = lo;
        labels_.assign(hi - lo + 1, {});
        index_.assign(hi - lo + 1, {});
        for (int j = lo; j <= hi; ++j) {
            auto& L = labels_[j - lo];
            for (int n = pmin_; n <= cap_; ++n) {
                int m = j + n;
                if (!X_.has(m)) continue;
                auto& Xm = X_.at(m);
                auto& Tn = T_[n];
                for (std::size_t t = 0; t < Tn.size(); ++t)
                    for (int a = 0; a < A_->dim(); ++a) {
                        if (A_->right(a) != Tn.lv[t]) continue;
                        for (Index x : Xm.by_vertex[Tn.rv[t]]) {
                            index_[j - lo].emplace(key(n, a, static_cast<int>(t), x), static_cast<Index>(L.size()));
                            L.push_back({n, a, static_cast<int>(t), m, static_cast<int>(x)});
                        }
                    }
            }
        }
        // components with the outer left action
        for (int j = lo; j <= hi; ++j) {
            auto& L = labels_[j - lo];
            Module<F> M;
            M.A = A_;
            M.dim = L.size();
            for (auto& l : L) M.vertex.push_back(A_->left(l.a));
            for (int lam = 0; lam < A_->dim(); ++lam) {
                std::vector<SVec<F>> cols;
                cols.reserve(L.size());
                for (auto& l : L) {
                    SVec<F> v;
                    for (auto& [c, k] : A_->prod(lam, l.a))
                        v.emplace_back(idx(find(l.n, static_cast<int>(c), l.t, l.m, l.x)), k);
                    std::sort(v.begin(), v.end(), [](auto& p, auto& q) { return p.first < q.first; });
                    cols.push_back(std::move(v));
                }
                M.act.push_back(from_columns(f, M.dim, std::move(cols)));
            }
            M.finalize();
            cx_.comp.push_back(std::move(M));
        }
        for (int j = lo; j < hi; ++j) cx_.d.push_back(differential(j));
    }

    SparseMatrix<F> differential(int j) const {
        const F& f = A_->field();
        auto& L = labels_[j - cx_.lo];
        std::size_t rows = labels_[j + 1 - cx_.lo].size();
        std::vector<SVec<F>> cols;
        cols.reserve(L.size());
        Accumulator<F> acc(f, rows);
        std::vector<int> tup;
        for (auto& l : L) {
            const auto& t = T_[l.n].tuples[l.t];
            int n = l.n;
            Val<F> sn = (n % 2 == 0) ? f.one() : f.neg(f.one());
            if (n >= 1 && n - 1 >= pmin_) {
                auto& Tm = T_[n - 1];
                auto tindex = [&](const std::vector<int>& u, int vertex) {
                    return n - 1 == 0 ? vertex : Tm.find(u);
                };
                // a a_1 ⊗ a_2..a_n ⊗ x
                tup.assign(t.begin() + 1, t.end());
                int ti = tindex(tup, X_.at(l.m).vertex[l.x]);
                for (auto& [c, k] : A_->prod(l.a, A_->bar_basis(t[0])))
                    acc.add(idx(find(n - 1, static_cast<int>(c), ti, l.m, l.x)), k);
                // (-1)^n a ⊗ a_1..a_{n-1} ⊗ a_n x
                tup.assign(t.begin(), t.end() - 1);
                ti = tindex(tup, A_->bar_left(t.back()));
                for (auto& [y, k] : X_.at(l.m).act[A_->bar_basis(t.back())].col(l.x))
                    acc.add(idx(find(n - 1, l.a, ti, l.m, static_cast<int>(y))), f.mul(sn, k));
                // sum_i (-1)^i a ⊗ .. (a_i a_{i+1}) .. ⊗ x
                for (int i = 1; i < n; ++i) {
                    Val<F> si = (i % 2 == 0) ? f.one() : f.neg(f.one());
                    for (auto& [c, k] : A_->bar_prod(t[i - 1], t[i])) {
                        tup.assign(t.begin(), t.begin() + (i - 1));
                        tup.push_back(static_cast<int>(c));
                        tup.insert(tup.end(), t.begin() + i + 1, t.end());
                        int u = Tm.find(tup);
                        acc.add(idx(find(n - 1, l.a, u, l.m, l.x)), f.mul(si, k));
                    }
                }
            }
            // (-1)^n a ⊗ t ⊗ d_X x
            if (l.m < X_.hi())
                for (auto& [y, k] : X_.d[l.m - X_.lo].col(l.x))
                    acc.add(idx(find(n, l.a, l.t, l.m + 1, static_cast<int>(y))), f.mul(sn, k));
            cols.push_back(acc.take());
        }
        return from_columns(f, rows, std::move(cols));
    }

    const Algebra<F>* A_ = nullptr;
    Complex<F> X_;
    int pmin_ = 0, cap_ = 0;
    Tensors T_;
    Complex<F> cx_;
    std::vector<std::vector<Label>> labels_;
    std::vector<std::unordered_map<std::uint64_t, Index>> index_;
    std::uint64_t tmax_ = 1, xmax_ = 1;
};

// The bar complex B_{<=cap} itself: B ⊗_Lambda Lambda, basis (a, t, b).
template <class F>
BarTensor<F> bar_complex(const Algebra<F>& A, int cap) {
    return BarTensor<F>(stalk(regular_module(A)), cap);
}

// d_ex : B^{-n} -> B^{-n+1} on the basis (a, t, b)
template <class F>
SparseMatrix<F> external_differential(const Algebra<F>& A, int n) {
    if (n < 1) throw std::invalid_argument("external differential needs n >= 1");
    auto B = bar_complex(A, n);
    return B.complex().diff(-n);
}

// epsilon ⊗ Id_X : B ⊗ X -> X, nonzero only on bar degree 0: a ⊗ x -> a x
template <class F>
CochainMap<F> epsilon_tensor(const BarTensor<F>& B) {
    const auto& X = B.source();
    const auto& C = B.complex();
    const F& f = X.A->field();
    CochainMap<F> e;
    if (B.pmin() > 0) return e;
    for (int j = C.lo; j <= C.hi(); ++j) {
        if (!X.has(j)) continue;
        std::vector<SVec<F>> cols;
        for (Index i = 0; i < C.dim(j); ++i) {
            auto& l = B.label(j, i);
            if (l.n != 0) { cols.push_back({}); continue; }
            cols.push_back(X.at(j).act[l.a].col(l.x));
        }
        e.comp[j] = from_columns(f, X.dim(j), std::move(cols));
    }
    return e;
}

// epsilon : B -> Lambda as a cochain map to the stalk
template <class F>
CochainMap<F> epsilon(const BarTensor<F>& bar) { return epsilon_tensor(bar); }

// Sends each basis label of src to the same label of dst when it exists:
// covers the inclusions B_{<p} -> B and the projections B_{>=p} -> B_{>=p+1}.
template <class F>
CochainMap<F> coordinate_map(const BarTensor<F>& src, const BarTensor<F>& dst) {
    const auto& S = src.complex();
    const auto& D = dst.complex();
    const F& f = S.A->field();
    CochainMap<F> g;
    for (int j = S.lo; j <= S.hi(); ++j) {
        if (S.dim(j) == 0) continue;
        std::vector<SVec<F>> cols;
        for (Index i = 0; i < S.dim(j); ++i) {
            auto& l = src.label(j, i);
            long k = dst.find(l.n, l.a, l.t, l.m, l.x);
            if (k < 0) cols.push_back({});
            else cols.push_back({{static_cast<Index>(k), f.one()}});
        }
        g.comp[j] = from_columns(f, D.dim(j), std::move(cols));
    }
    return g;
}

// inclusion B_{<p} -> B_{<=cap} and projection B_{>=p} -> B_{>=p+1}, both over X
template <class F>
struct TruncationMaps {
    BarTensor<F> below, full, ge_p, ge_p1;
    CochainMap<F> inclusion, projection;
};

template <class F>
TruncationMaps<F> truncation_maps(const Complex<F>& X, int p, int cap) {
    if (p < 0 || p > cap) throw std::invalid_argument("truncation index out of range");
    TruncationMaps<F> T;
    T.below = BarTensor<F>(X, p - 1);
    T.full = BarTensor<F>(X, cap);
    T.ge_p = BarTensor<F>(X, cap, p);
    T.ge_p1 = BarTensor<F>(X, cap, p + 1);
    T.inclusion = coordinate_map(T.below, T.full);
    T.projection = coordinate_map(T.ge_p, T.ge_p1);
    return T;
}

} // namespace yl
