#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "linalg.hpp"

namespace yl {

struct ModuleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Left module in an E-adapted basis: every basis vector lies in some e_v M.
template <class F>
struct Module {
    const Algebra<F>* A = nullptr;
    std::size_t dim = 0;
    std::vector<int> vertex;
    std::vector<SparseMatrix<F>> act;  // one matrix per algebra basis element
    std::string label;

    // derived data
    std::vector<Index> vpos;                   // position inside its vertex class
    std::vector<std::vector<Index>> by_vertex; // basis indices per vertex

    void finalize() {
        int r = A->vertices();
        by_vertex.assign(r, {});
        vpos.assign(dim, 0);
        for (std::size_t i = 0; i < dim; ++i) {
            vpos[i] = static_cast<Index>(by_vertex[vertex[i]].size());
            by_vertex[vertex[i]].push_back(static_cast<Index>(i));
        }
    }
    std::size_t vcount(int v) const { return by_vertex[v].size(); }
    const F& field() const { return A->field(); }

    SVec<F> apply(int b, const SVec<F>& x) const { return act[b].apply(x); }
    SVec<F> apply(const SVec<F>& lambda, const SVec<F>& x) const {
        Accumulator<F> acc(field(), dim);
        for (auto& [b, c] : lambda) acc.add(act[b].apply(x), c);
        return acc.take();
    }
};

template <class F>
Module<F> zero_module(const Algebra<F>& A) {
    Module<F> M;
    M.A = &A;
    for (int b = 0; b < A.dim(); ++b) M.act.emplace_back(A.field(), 0, 0);
    M.finalize();
    return M;
}

// Checks rho(1) = I and rho(b_i) rho(b_j) = sum_k c_ij^k rho(b_k).
template <class F>
void validate_module(const Module<F>& M) {
    const auto& A = *M.A;
    const F& f = A.field();
    if (static_cast<int>(M.act.size()) != A.dim()) throw ModuleError("module " + M.label + ": wrong number of action matrices");
    for (auto& m : M.act)
        if (m.rows() != M.dim || m.cols() != M.dim) throw ModuleError("module " + M.label + ": action matrix has wrong shape");
    SparseMatrix<F> one(f, M.dim, M.dim);
    for (int v = 0; v < A.vertices(); ++v) one = one + M.act[A.idempotent(v)];
    if (!(one == SparseMatrix<F>::identity(f, M.dim))) throw ModuleError("module " + M.label + ": unit does not act as identity");
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) {
            SparseMatrix<F> rhs(f, M.dim, M.dim);
            for (auto& [k, c] : A.prod(i, j)) rhs = rhs + M.act[k].scaled(c);
            if (!(M.act[i] * M.act[j] == rhs))
                throw ModuleError("module " + M.label + ": action fails on the product " + A.label(i) + "*" + A.label(j));
        }
}

// Builds a module from arbitrary action matrices, validating and changing to
// an adapted basis if needed. Column j of actions[b] is b * (basis vector j).
template <class F>
Module<F> make_module(const Algebra<F>& A, const std::vector<Matrix<F>>& actions, const std::string& label = "") {
    const F& f = A.field();
    Module<F> M;
    M.A = &A;
    M.label = label;
    M.dim = actions.empty() ? 0 : actions[0].rows();
    for (auto& a : actions) M.act.push_back(SparseMatrix<F>::from_dense(a));
    M.vertex.assign(M.dim, -1);
    validate_module(M);
    // already adapted?
    bool adapted = true;
    for (int v = 0; v < A.vertices() && adapted; ++v) {
        const auto& e = actions[A.idempotent(v)];
        for (std::size_t i = 0; i < M.dim && adapted; ++i)
            for (std::size_t j = 0; j < M.dim; ++j) {
                auto x = e(i, j);
                if (i != j && !f.is_zero(x)) { adapted = false; break; }
                if (i == j && f.is_one(x)) M.vertex[i] = v;
                else if (i == j && !f.is_zero(x)) { adapted = false; break; }
            }
    }
    if (adapted) { M.finalize(); return M; }
    // change of basis: concatenate column bases of the images of rho(e_v)
    Matrix<F> P(f, M.dim, 0);
    std::vector<int> vert;
    for (int v = 0; v < A.vertices(); ++v) {
        Matrix<F> e = actions[A.idempotent(v)];
        Matrix<F> w = e;
        auto piv = rref(w);
        Matrix<F> cols = e.columns(piv);
        P = P.hcat(cols);
        for (std::size_t k = 0; k < piv.size(); ++k) vert.push_back(v);
    }
    auto Pinv = solve(P, Matrix<F>::identity(f, M.dim));
    if (!Pinv) throw ModuleError("module " + label + ": idempotents do not decompose the space");
    for (int b = 0; b < A.dim(); ++b) M.act[b] = SparseMatrix<F>::from_dense(*Pinv * actions[b] * P);
    M.vertex = vert;
    M.finalize();
    return M;
}

// Lambda as a left module over itself.
template <class F>
Module<F> regular_module(const Algebra<F>& A) {
    Module<F> M;
    M.A = &A;
    M.label = "Lambda";
    M.dim = A.dim();
    for (int i = 0; i < A.dim(); ++i) { M.act.push_back(A.left_mult(i)); M.vertex.push_back(A.left(i)); }
    M.finalize();
    return M;
}

// The subspace spanned by the given E-homogeneous vectors must be a submodule.
template <class F>
Module<F> submodule(const Module<F>& M, const std::vector<SVec<F>>& basis, const std::vector<int>& vert,
                    const std::string& label = "") {
    const F& f = M.field();
    Module<F> S;
    S.A = M.A;
    S.label = label;
    S.dim = basis.size();
    S.vertex = vert;
    ColumnReducer<F> red(f, M.dim, true);
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!red.insert(basis[i], static_cast<Index>(i))) throw ModuleError("submodule basis is dependent");
    for (int b = 0; b < M.A->dim(); ++b) {
        SparseMatrix<F> m(f, S.dim, S.dim);
        for (std::size_t i = 0; i < S.dim; ++i) {
            SVec<F> c;
            if (!red.reduce(M.act[b].apply(basis[i]), &c).empty()) throw ModuleError("subspace is not a submodule");
            m.set_col(i, std::move(c));
        }
        S.act.push_back(std::move(m));
    }
    S.finalize();
    return S;
}

template <class F>
Module<F> direct_sum(const Module<F>& X, const Module<F>& Y) {
    Module<F> S;
    S.A = X.A;
    S.dim = X.dim + Y.dim;
    S.vertex = X.vertex;
    S.vertex.insert(S.vertex.end(), Y.vertex.begin(), Y.vertex.end());
    for (int b = 0; b < X.A->dim(); ++b) {
        SparseMatrix<F> m(X.field(), S.dim, S.dim);
        m.paste(X.act[b], 0, 0);
        m.paste(Y.act[b], X.dim, X.dim);
        S.act.push_back(std::move(m));
    }
    S.finalize();
    return S;
}

// Requires the bar basis to span the Jacobson radical, so simples are the
// vertex modules. Checked by radical_is_bar().
template <class F>
bool radical_is_bar(const Algebra<F>& A) {
    // span of bar basis is a two-sided ideal ...
    for (int i = 0; i < A.dim(); ++i)
        for (int a = 0; a < A.bar_dim(); ++a) {
            for (auto& [k, c] : A.prod(i, A.bar_basis(a))) if (A.bar_pos(k) < 0) return false;
            for (auto& [k, c] : A.prod(A.bar_basis(a), i)) if (A.bar_pos(k) < 0) return false;
        }
    // ... and nilpotent
    std::vector<SVec<F>> cur;
    for (int a = 0; a < A.bar_dim(); ++a) cur.push_back({{static_cast<Index>(A.bar_basis(a)), A.field().one()}});
    for (int step = 0; step <= A.dim() && !cur.empty(); ++step) {
        std::vector<SVec<F>> nxt;
        ColumnReducer<F> red(A.field(), A.dim());
        for (auto& x : cur)
            for (int a = 0; a < A.bar_dim(); ++a) {
                auto y = A.mul(x, {{static_cast<Index>(A.bar_basis(a)), A.field().one()}});
                if (red.insert(y)) nxt.push_back(y);
            }
        cur.swap(nxt);
    }
    return cur.empty();
}

template <class F>
Module<F> simple_module(const Algebra<F>& A, int v) {
    Module<F> M;
    M.A = &A;
    M.label = "S" + std::to_string(v + 1);
    M.dim = 1;
    M.vertex = {v};
    for (int b = 0; b < A.dim(); ++b) {
        SparseMatrix<F> m(A.field(), 1, 1);
        if (b == A.idempotent(v)) m.set_col(0, {{0, A.field().one()}});
        M.act.push_back(std::move(m));
    }
    M.finalize();
    return M;
}

// Indecomposable projective Lambda e_v with basis {b : right(b) = v}.
template <class F>
Module<F> projective_module(const Algebra<F>& A, int v) {
    std::vector<SVec<F>> basis;
    std::vector<int> vert;
    for (int b = 0; b < A.dim(); ++b)
        if (A.right(b) == v) { basis.push_back({{static_cast<Index>(b), A.field().one()}}); vert.push_back(A.left(b)); }
    auto P = submodule(regular_module(A), basis, vert, "P" + std::to_string(v + 1));
    return P;
}

// Indecomposable injective D(e_v Lambda): dual basis of {b : left(b) = v},
// with (lambda . phi)(x) = phi(x lambda).
template <class F>
Module<F> injective_module(const Algebra<F>& A, int v) {
    const F& f = A.field();
    std::vector<int> idx;
    for (int b = 0; b < A.dim(); ++b) if (A.left(b) == v) idx.push_back(b);
    std::vector<int> pos(A.dim(), -1);
    for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);
    Module<F> I;
    I.A = &A;
    I.label = "I" + std::to_string(v + 1);
    I.dim = idx.size();
    for (int b : idx) I.vertex.push_back(A.right(b));
    for (int l = 0; l < A.dim(); ++l) {
        // (l . phi_i)(b_j) = phi_i(b_j l): coefficient of b_i in b_j l
        std::vector<SVec<F>> cols(I.dim);
        Accumulator<F> acc(f, I.dim);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idx.size(); ++j)
                for (auto& [k, c] : A.prod(idx[j], l))
                    if (static_cast<int>(k) == idx[i]) acc.add(static_cast<Index>(j), c);
            cols[i] = acc.take();
        }
        I.act.push_back(from_columns(f, I.dim, std::move(cols)));
    }
    I.finalize();
    return I;
}

// ---------------------------------------------------------------- complexes

// Complex of ground-field vector spaces.
template <class F>
struct VComplex {
    F f{};
    int lo = 0;
    std::vector<std::size_t> dims;
    std::vector<SparseMatrix<F>> d;  // d[i]: degree lo+i -> lo+i+1

    int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
    std::size_t dim(int n) const { return (n < lo || n > hi()) ? 0 : dims[n - lo]; }
    SparseMatrix<F> diff(int n) const {
        if (n < lo || n >= hi()) return SparseMatrix<F>(f, dim(n + 1), dim(n));
        return d[n - lo];
    }
};

template <class F>
struct Complex {
    const Algebra<F>* A = nullptr;
    int lo = 0;
    std::vector<Module<F>> comp;
    std::vector<SparseMatrix<F>> d;  // d[i]: comp[i] -> comp[i+1]
    std::string label;

    int hi() const { return lo + static_cast<int>(comp.size()) - 1; }
    bool has(int n) const { return n >= lo && n <= hi(); }
    std::size_t dim(int n) const { return has(n) ? comp[n - lo].dim : 0; }
    const Module<F>& at(int n) const {
        if (!has(n)) throw std::out_of_range("complex has no component in degree " + std::to_string(n));
        return comp[n - lo];
    }
    SparseMatrix<F> diff(int n) const {
        if (n < lo || n >= hi()) return SparseMatrix<F>(A->field(), dim(n + 1), dim(n));
        return d[n - lo];
    }
    // lowest and highest degree with a nonzero component
    int amin() const { for (int n = lo; n <= hi(); ++n) if (dim(n)) return n; return 0; }
    int bmax() const { for (int n = hi(); n >= lo; --n) if (dim(n)) return n; return -1; }
    bool empty() const { for (auto& m : comp) if (m.dim) return false; return true; }

    VComplex<F> vspace() const {
        VComplex<F> v;
        v.f = A->field();
        v.lo = lo;
        for (auto& m : comp) v.dims.push_back(m.dim);
        v.d = d;
        return v;
    }
};

template <class F>
Complex<F> stalk(const Module<F>& M, int n = 0) {
    Complex<F> X;
    X.A = M.A;
    X.lo = n;
    X.comp.push_back(M);
    X.label = M.label;
    return X;
}

// d∘d = 0 and every differential is Lambda-linear
template <class F>
void validate_complex(const Complex<F>& X) {
    for (int n = X.lo; n < X.hi(); ++n) {
        auto& dn = X.d[n - X.lo];
        if (dn.rows() != X.dim(n + 1) || dn.cols() != X.dim(n)) throw ModuleError("complex " + X.label + ": differential has wrong shape at degree " + std::to_string(n));
        for (int b = 0; b < X.A->dim(); ++b)
            if (!(dn * X.at(n).act[b] == X.at(n + 1).act[b] * dn))
                throw ModuleError("complex " + X.label + ": differential is not Lambda-linear at degree " + std::to_string(n));
        if (n + 1 < X.hi() && !(X.d[n + 1 - X.lo] * dn).is_zero())
            throw ModuleError("complex " + X.label + ": d∘d is nonzero at degree " + std::to_string(n));
    }
}

// Graded map of a fixed degree, stored per source degree.
template <class F>
struct GradedMap {
    int degree = 0;
    std::map<int, SparseMatrix<F>> comp;

    template <class CX, class CY>
    SparseMatrix<F> at(int n, const CX& X, const CY& Y, const F& f) const {
        auto it = comp.find(n);
        if (it != comp.end()) return it->second;
        return SparseMatrix<F>(f, Y.dim(n + degree), X.dim(n));
    }
};
template <class F> using CochainMap = GradedMap<F>;

// Hom-complex differential on a graded map: d_Y g - (-1)^{|g|} g d_X
template <class F, class CX, class CY>
GradedMap<F> hom_differential(const GradedMap<F>& g, const CX& X, const CY& Y, const F& f) {
    GradedMap<F> out;
    out.degree = g.degree + 1;
    Val<F> sgn = (g.degree % 2 == 0) ? f.one() : f.neg(f.one());
    for (int n = std::min(X.lo, Y.lo - g.degree) - 1; n <= std::max(X.hi(), Y.hi() - g.degree) + 1; ++n) {
        auto a = Y.diff(n + g.degree) * g.at(n, X, Y, f);
        auto b = g.at(n + 1, X, Y, f) * X.diff(n);
        auto c = a - b.scaled(sgn);
        if (!c.is_zero()) out.comp[n] = c;
    }
    return out;
}

template <class F, class CX, class CY>
bool graded_equal(const GradedMap<F>& g, const GradedMap<F>& h, const CX& X, const CY& Y, const F& f) {
    if (g.degree != h.degree) return false;
    for (int n = X.lo; n <= X.hi(); ++n)
        if (!(g.at(n, X, Y, f) == h.at(n, X, Y, f))) return false;
    return true;
}

template <class F>
bool is_cochain_map(const GradedMap<F>& g, const Complex<F>& X, const Complex<F>& Y) {
    auto D = hom_differential(g, X, Y, X.A->field());
    for (auto& [n, m] : D.comp) if (!m.is_zero()) return false;
    return true;
}

template <class F>
bool is_lambda_linear(const GradedMap<F>& g, const Complex<F>& X, const Complex<F>& Y) {
    const F& f = X.A->field();
    for (int n = X.lo; n <= X.hi(); ++n) {
        if (!Y.has(n + g.degree) || X.dim(n) == 0) continue;
        auto m = g.at(n, X, Y, f);
        for (int b = 0; b < X.A->dim(); ++b)
            if (!(m * X.at(n).act[b] == Y.at(n + g.degree).act[b] * m)) return false;
    }
    return true;
}

// Sigma(X)^n = X^{n+1}, d = -d_X
template <class F>
Complex<F> shift(const Complex<F>& X) {
    Complex<F> S = X;
    S.lo = X.lo - 1;
    for (auto& m : S.d) m = m.scaled(X.A->field().neg(X.A->field().one()));
    S.label = "Sigma(" + X.label + ")";
    return S;
}

// Cone(f)^n = Y^n ⊕ X^{n+1}, d = [[d_Y, f^{n+1}], [0, -d_X^{n+1}]]
template <class F>
Complex<F> cone(const Complex<F>& X, const Complex<F>& Y, const CochainMap<F>& f) {
    const F& k = X.A->field();
    Complex<F> C;
    C.A = X.A;
    int lo = std::min(Y.lo, X.lo - 1), hi = std::max(Y.hi(), X.hi() - 1);
    if (Y.comp.empty()) { lo = X.lo - 1; hi = X.hi() - 1; }
    if (X.comp.empty()) { lo = Y.lo; hi = Y.hi(); }
    C.lo = lo;
    auto zero = zero_module(*X.A);
    auto comp_of = [&](const Complex<F>& Z, int n) -> const Module<F>& { return Z.has(n) ? Z.at(n) : zero; };
    for (int n = lo; n <= hi; ++n) C.comp.push_back(direct_sum(comp_of(Y, n), comp_of(X, n + 1)));
    for (int n = lo; n < hi; ++n) {
        std::size_t ry = Y.dim(n + 1), cy = Y.dim(n), cx = X.dim(n + 1);
        SparseMatrix<F> m(k, ry + X.dim(n + 2), cy + cx);
        m.paste(Y.diff(n), 0, 0);
        m.paste(f.at(n + 1, X, Y, k), 0, cy);
        m.paste(X.diff(n + 1).scaled(k.neg(k.one())), ry, cy);
        C.d.push_back(std::move(m));
    }
    C.label = "Cone";
    return C;
}

template <class F, class CX>
long long cohomology_dim(const CX& X, int n) {
    std::size_t dn = X.dim(n);
    if (dn == 0) return 0;
    return static_cast<long long>(dn) - static_cast<long long>(rank(X.diff(n))) -
           static_cast<long long>(rank(X.diff(n - 1)));
}

// Cocycles representing a basis of H^n, chosen deterministically.
template <class F, class CX>
std::vector<SVec<F>> cohomology_basis(const CX& X, int n, const F& f) {
    std::vector<SVec<F>> reps;
    if (X.dim(n) == 0) return reps;
    auto Z = kernel_basis(X.diff(n));
    ColumnReducer<F> red(f, X.dim(n));
    auto B = X.diff(n - 1);
    for (std::size_t j = 0; j < B.cols(); ++j) red.insert(B.col(j));
    for (auto& z : Z)
        if (red.insert(z)) reps.push_back(z);
    return reps;
}

// H^n(Cone f) = 0 for lo <= n <= hi
template <class F>
bool quasi_iso_window(const Complex<F>& X, const Complex<F>& Y, const CochainMap<F>& f, int lo, int hi) {
    auto C = cone(X, Y, f);
    for (int n = lo; n <= hi; ++n)
        if (cohomology_dim<F>(C, n) != 0) return false;
    return true;
}

// ---------------------------------------------------------------- Hom

// Basis of Hom_Lambda(M, N) as dense matrices (N.dim x M.dim).
template <class F>
std::vector<Matrix<F>> hom_basis(const Module<F>& M, const Module<F>& N) {
    const auto& A = *M.A;
    const F& f = A.field();
    // unknowns: entries (i, j) with vertex(N_i) = vertex(M_j)
    std::vector<std::pair<Index, Index>> unk;
    for (std::size_t j = 0; j < M.dim; ++j)
        for (Index i : N.by_vertex[M.vertex[j]]) unk.emplace_back(i, static_cast<Index>(j));
    std::vector<std::vector<Index>> uid(N.dim, std::vector<Index>(M.dim, static_cast<Index>(-1)));
    for (std::size_t u = 0; u < unk.size(); ++u) uid[unk[u].first][unk[u].second] = static_cast<Index>(u);
    // equations: (rho_N(b) f - f rho_M(b))_{ij} = 0 for each bar basis element b
    std::vector<SVec<F>> rows_by_unknown(unk.size());
    std::size_t eq = 0;
    std::vector<std::vector<std::pair<Index, Val<F>>>> eqs;
    for (int a = 0; a < A.bar_dim(); ++a) {
        int b = A.bar_basis(a);
        auto rN = N.act[b].to_dense();
        auto rM = M.act[b].to_dense();
        for (std::size_t i = 0; i < N.dim; ++i)
            for (std::size_t j = 0; j < M.dim; ++j) {
                std::vector<std::pair<Index, Val<F>>> e;
                for (std::size_t k = 0; k < N.dim; ++k)
                    if (!f.is_zero(rN(i, k)) && uid[k][j] != static_cast<Index>(-1)) e.emplace_back(uid[k][j], rN(i, k));
                for (std::size_t k = 0; k < M.dim; ++k)
                    if (!f.is_zero(rM(k, j)) && uid[i][k] != static_cast<Index>(-1)) e.emplace_back(uid[i][k], f.neg(rM(k, j)));
                if (!e.empty()) eqs.push_back(std::move(e));
            }
    }
    eq = eqs.size();
    Matrix<F> S(f, eq, unk.size());
    for (std::size_t r = 0; r < eq; ++r)
        for (auto& [u, c] : eqs[r]) S(r, u) = f.add(S(r, u), c);
    auto K = kernel_basis(S);
    std::vector<Matrix<F>> out;
    for (std::size_t c = 0; c < K.cols(); ++c) {
        Matrix<F> h(f, N.dim, M.dim);
        for (std::size_t u = 0; u < unk.size(); ++u) h(unk[u].first, unk[u].second) = K(u, c);
        out.push_back(std::move(h));
    }
    return out;
}

template <class F>
SVec<F> flatten(const Matrix<F>& m) {
    SVec<F> v;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m.field().is_zero(m(i, j))) v.emplace_back(static_cast<Index>(i * m.cols() + j), m(i, j));
    return v;
}

// Hom_Lambda(X, Y) as a complex of vector spaces; also returns the chosen
// basis of each degree (per basis element: map from source degree to block).
template <class F>
struct HomComplex {
    VComplex<F> cx;
    std::map<int, std::vector<GradedMap<F>>> basis;
};

template <class F>
HomComplex<F> hom_complex(const Complex<F>& X, const Complex<F>& Y) {
    const F& f = X.A->field();
    HomComplex<F> H;
    H.cx.f = f;
    int lo = Y.lo - X.hi(), hi = Y.hi() - X.lo;
    H.cx.lo = lo;
    // layout of flattened coordinates per degree
    std::map<int, std::vector<std::pair<int, std::size_t>>> layout;
    for (int n = lo; n <= hi; ++n) {
        std::vector<GradedMap<F>> B;
        std::size_t off = 0;
        for (int m = X.lo; m <= X.hi(); ++m) {
            if (!Y.has(m + n)) continue;
            layout[n].emplace_back(m, off);
            off += Y.dim(m + n) * X.dim(m);
            for (auto& h : hom_basis(X.at(m), Y.at(m + n))) {
                GradedMap<F> g;
                g.degree = n;
                g.comp[m] = SparseMatrix<F>::from_dense(h);
                B.push_back(std::move(g));
            }
        }
        H.cx.dims.push_back(B.size());
        H.basis[n] = std::move(B);
    }
    auto flat = [&](const GradedMap<F>& g, int n) {
        SVec<F> v;
        for (auto& [m, off] : layout[n]) {
            auto blk = g.at(m, X, Y, f).to_dense();
            for (auto& [i, c] : flatten(blk)) v.emplace_back(static_cast<Index>(i + off), c);
        }
        return v;
    };
    for (int n = lo; n < hi; ++n) {
        std::size_t amb = 0;
        for (int m = X.lo; m <= X.hi(); ++m) if (Y.has(m + n + 1)) amb += Y.dim(m + n + 1) * X.dim(m);
        ColumnReducer<F> red(f, std::max<std::size_t>(amb, 1), true);
        auto& tgt = H.basis[n + 1];
        for (std::size_t i = 0; i < tgt.size(); ++i) red.insert(flat(tgt[i], n + 1), static_cast<Index>(i));
        SparseMatrix<F> D(f, tgt.size(), H.basis[n].size());
        for (std::size_t j = 0; j < H.basis[n].size(); ++j) {
            auto dg = hom_differential(H.basis[n][j], X, Y, f);
            SVec<F> c;
            if (!red.reduce(flat(dg, n + 1), &c).empty()) throw std::logic_error("hom differential left the Hom space");
            D.set_col(j, std::move(c));
        }
        H.cx.d.push_back(std::move(D));
    }
    return H;
}

// ---------------------------------------------------------------- tensor

// Bimodule with commuting left and right actions.
template <class F>
struct Bimodule {
    const Algebra<F>* A = nullptr;
    std::size_t dim = 0;
    std::vector<int> lvertex;
    std::vector<SparseMatrix<F>> left, right;  // right[b] column j = (basis j) * b
};

// B ⊗_Lambda M as a left module: (B ⊗ M) modulo (b lambda ⊗ m - b ⊗ lambda m).
template <class F>
Module<F> tensor_over_algebra(const Bimodule<F>& B, const Module<F>& M) {
    const auto& A = *B.A;
    const F& f = A.field();
    std::size_t n = B.dim * M.dim;
    auto id = [&](std::size_t b, std::size_t m) { return static_cast<Index>(b * M.dim + m); };
    ColumnReducer<F> rel(f, std::max<std::size_t>(n, 1));
    Accumulator<F> acc(f, n);
    for (int l = 0; l < A.dim(); ++l)
        for (std::size_t b = 0; b < B.dim; ++b)
            for (std::size_t m = 0; m < M.dim; ++m) {
                for (auto& [bb, c] : B.right[l].col(b)) acc.add(id(bb, m), c);
                for (auto& [mm, c] : M.act[l].col(m)) acc.add(id(b, mm), f.neg(c));
                rel.insert(acc.take());
            }
    // normal forms: full reduction leaves only non-pivot coordinates
    std::vector<Index> qpos(n, static_cast<Index>(-1));
    std::vector<Index> keep;
    for (std::size_t i = 0; i < n; ++i) {
        SVec<F> e{{static_cast<Index>(i), f.one()}};
        auto r = rel.reduce(e);
        if (!r.empty() && r.back().first == i) { qpos[i] = static_cast<Index>(keep.size()); keep.push_back(static_cast<Index>(i)); }
    }
    auto normal = [&](SVec<F> v) {
        // repeated trailing reduction until only kept coordinates remain
        SVec<F> out;
        while (!v.empty()) {
            v = rel.reduce(std::move(v));
            if (v.empty()) break;
            auto [i, c] = v.back();
            out.emplace_back(qpos[i], c);
            v.pop_back();
        }
        std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
        return out;
    };
    Module<F> T;
    T.A = &A;
    T.dim = keep.size();
    for (Index i : keep) T.vertex.push_back(B.lvertex[i / M.dim]);
    for (int l = 0; l < A.dim(); ++l) {
        std::vector<SVec<F>> cols;
        for (Index i : keep) {
            std::size_t b = i / M.dim, m = i % M.dim;
            SVec<F> v;
            for (auto& [bb, c] : B.left[l].col(b)) v.emplace_back(id(bb, m), c);
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
            cols.push_back(normal(std::move(v)));
        }
        T.act.push_back(from_columns(f, T.dim, std::move(cols)));
    }
    T.finalize();
    return T;
}

// Lambda ⊗_E V ⊗_E Lambda for an E-bimodule V given by bidegrees.
template <class F>
Bimodule<F> free_bimodule(const Algebra<F>& A, const std::vector<std::pair<int, int>>& vbideg) {
    const F& f = A.field();
    Bimodule<F> B;
    B.A = &A;
    std::vector<std::array<int, 3>> basis;
    for (int a = 0; a < A.dim(); ++a)
        for (std::size_t v = 0; v < vbideg.size(); ++v)
            for (int b = 0; b < A.dim(); ++b)
                if (A.right(a) == vbideg[v].first && vbideg[v].second == A.left(b))
                    basis.push_back({a, static_cast<int>(v), b});
    B.dim = basis.size();
    std::map<std::array<int, 3>, Index> id;
    for (std::size_t i = 0; i < basis.size(); ++i) { id[basis[i]] = static_cast<Index>(i); B.lvertex.push_back(A.left(basis[i][0])); }
    for (int l = 0; l < A.dim(); ++l) {
        std::vector<SVec<F>> L, R;
        for (auto& t : basis) {
            Accumulator<F> al(f, B.dim), ar(f, B.dim);
            for (auto& [k, c] : A.prod(l, t[0])) al.add(id.at({static_cast<int>(k), t[1], t[2]}), c);
            for (auto& [k, c] : A.prod(t[2], l)) ar.add(id.at({t[0], t[1], static_cast<int>(k)}), c);
            L.push_back(al.take());
            R.push_back(ar.take());
        }
        B.left.push_back(from_columns(f, B.dim, std::move(L)));
        B.right.push_back(from_columns(f, B.dim, std::move(R)));
    }
    return B;
}

// ---------------------------------------------------------------- resolutions

// Minimal projective presentation data: P = ⊕_j Lambda e_{v_j}; the basis of P
// lists, per generator j, the algebra basis elements b with right(b) = v_j.
template <class F>
struct FreeProjective {
    std::vector<int> gens;                       // vertex of each generator
    std::vector<std::pair<int, int>> basis;      // (generator, algebra basis index)
    std::map<std::pair<int, int>, Index> index;
    Module<F> module;
};

template <class F>
FreeProjective<F> free_projective(const Algebra<F>& A, const std::vector<int>& gens) {
    const F& f = A.field();
    FreeProjective<F> P;
    P.gens = gens;
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (int b = 0; b < A.dim(); ++b)
            if (A.right(b) == gens[j]) {
                P.index[{static_cast<int>(j), b}] = static_cast<Index>(P.basis.size());
                P.basis.emplace_back(static_cast<int>(j), b);
            }
    Module<F>& M = P.module;
    M.A = &A;
    M.dim = P.basis.size();
    for (auto& [j, b] : P.basis) M.vertex.push_back(A.left(b));
    for (int l = 0; l < A.dim(); ++l) {
        std::vector<SVec<F>> cols;
        Accumulator<F> acc(f, M.dim);
        for (auto& [j, b] : P.basis) {
            for (auto& [k, c] : A.prod(l, b)) acc.add(P.index.at({j, static_cast<int>(k)}), c);
            cols.push_back(acc.take());
        }
        M.act.push_back(from_columns(f, M.dim, std::move(cols)));
    }
    M.finalize();
    return P;
}

// rad M = sum of images of the bar basis; top basis chosen per vertex.
template <class F>
struct Cover {
    FreeProjective<F> P;
    std::vector<SVec<F>> images;   // image in M of each generator
    SparseMatrix<F> map;           // P -> M
    std::vector<SVec<F>> kernel;   // E-homogeneous basis of ker
    std::vector<int> kernel_vertex;
};

template <class F>
Cover<F> projective_cover(const Module<F>& M) {
    const auto& A = *M.A;
    const F& f = A.field();
    if (!radical_is_bar(A)) throw ModuleError("projective covers need the bar basis to span the radical");
    Cover<F> C;
    std::vector<int> gens;
    for (int v = 0; v < A.vertices(); ++v) {
        ColumnReducer<F> red(f, std::max<std::size_t>(M.dim, 1));
        for (int a = 0; a < A.bar_dim(); ++a) {
            if (A.bar_left(a) != v) continue;
            auto& act = M.act[A.bar_basis(a)];
            for (std::size_t j = 0; j < M.dim; ++j) red.insert(act.col(j));
        }
        for (Index i : M.by_vertex[v]) {
            SVec<F> e{{i, f.one()}};
            if (red.insert(e)) { gens.push_back(v); C.images.push_back(e); }
        }
    }
    C.P = free_projective(A, gens);
    auto& P = C.P;
    std::vector<SVec<F>> cols;
    for (auto& [j, b] : P.basis) cols.push_back(M.act[b].apply(C.images[j]));
    C.map = from_columns(f, M.dim, std::move(cols));
    // kernel per vertex keeps the basis adapted
    for (int v = 0; v < A.vertices(); ++v) {
        auto& idx = P.module.by_vertex[v];
        SparseMatrix<F> sub(f, M.dim, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) sub.set_col(k, C.map.col(idx[k]));
        for (auto& z : kernel_basis(sub)) {
            SVec<F> w;
            for (auto& [k, c] : z) w.emplace_back(idx[k], c);
            std::sort(w.begin(), w.end(), [](auto& a, auto& b) { return a.first < b.first; });
            C.kernel.push_back(std::move(w));
            C.kernel_vertex.push_back(v);
        }
    }
    return C;
}

template <class F>
Module<F> syzygy(const Module<F>& M) {
    auto C = projective_cover(M);
    return submodule(C.P.module, C.kernel, C.kernel_vertex, "Omega(" + M.label + ")");
}

// Minimal projective resolution P_len -> ... -> P_0 -> M. Each differential
// d_i : P_i -> P_{i-1} is recorded by the images of the generators of P_i.
template <class F>
struct ProjResolution {
    std::vector<FreeProjective<F>> P;
    std::vector<std::vector<SVec<F>>> gen_images;  // gen_images[i][g] in P_{i-1} (i >= 1), in M for i = 0
    std::vector<SparseMatrix<F>> d;                // d[i] : P_i -> P_{i-1}, i >= 1 (d[0] is the augmentation)

    // P_len -> ... -> P_0 in degrees -len .. 0
    Complex<F> complex() const {
        Complex<F> X;
        X.A = P[0].module.A;
        int len = static_cast<int>(P.size()) - 1;
        X.lo = -len;
        for (int i = len; i >= 0; --i) X.comp.push_back(P[i].module);
        for (int i = len; i >= 1; --i) X.d.push_back(d[i]);
        return X;
    }
};

template <class F>
ProjResolution<F> proj_resolution(const Module<F>& M, int length) {
    if (length < 0) throw std::invalid_argument("negative resolution length");
    ProjResolution<F> R;
    const F& f = M.field();
    auto C = projective_cover(M);
    R.P.push_back(C.P);
    R.gen_images.push_back(C.images);
    R.d.push_back(C.map);
    for (int i = 1; i <= length; ++i) {
        // kernel of the previous map as a submodule of P_{i-1}
        auto& prevP = R.P.back();
        auto K = submodule(prevP.module, C.kernel, C.kernel_vertex);
        if (K.dim == 0) break;
        auto CK = projective_cover(K);
        // compose cover with inclusion K -> P_{i-1}
        std::vector<SVec<F>> imgs;
        Accumulator<F> acc(f, prevP.module.dim);
        for (auto& y : CK.images) {
            for (auto& [k, c] : y) acc.add(C.kernel[k], c);
            imgs.push_back(acc.take());
        }
        std::vector<SVec<F>> cols;
        for (auto& [j, b] : CK.P.basis) cols.push_back(prevP.module.act[b].apply(imgs[j]));
        SparseMatrix<F> di = from_columns(f, prevP.module.dim, std::move(cols));
        // kernel of di, per vertex
        Cover<F> next;
        next.P = CK.P;
        for (int v = 0; v < M.A->vertices(); ++v) {
            auto& idx = CK.P.module.by_vertex[v];
            SparseMatrix<F> sub(f, prevP.module.dim, idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) sub.set_col(k, di.col(idx[k]));
            for (auto& z : kernel_basis(sub)) {
                SVec<F> w;
                for (auto& [k, c] : z) w.emplace_back(idx[k], c);
                std::sort(w.begin(), w.end(), [](auto& a, auto& b) { return a.first < b.first; });
                next.kernel.push_back(std::move(w));
                next.kernel_vertex.push_back(v);
            }
        }
        R.P.push_back(CK.P);
        R.gen_images.push_back(std::move(imgs));
        R.d.push_back(std::move(di));
        C = std::move(next);
    }
    return R;
}

// Hom(P_i, N) ≅ ⊕_g e_{v_g} N; the cochain differential Hom(P_{i-1},N) -> Hom(P_i,N).
template <class F>
SparseMatrix<F> hom_into(const ProjResolution<F>& R, int i, const Module<F>& N) {
    const F& f = N.field();
    auto off = [&](const FreeProjective<F>& P) {
        std::vector<std::size_t> o{0};
        for (int v : P.gens) o.push_back(o.back() + N.vcount(v));
        return o;
    };
    auto& Pi = R.P[i];
    auto& Pp = R.P[i - 1];
    auto oi = off(Pi), op = off(Pp);
    SparseMatrix<F> D(f, oi.back(), op.back());
    // f in Hom(P_{i-1}, N) is determined by f(gen_k) in e_{v_k} N;
    // (f∘d)(gen_g) = sum over basis (k, b) of coefficient * b f(gen_k)
    std::vector<SVec<F>> cols(op.back());
    Accumulator<F> acc(f, oi.back());
    for (std::size_t k = 0; k < Pp.gens.size(); ++k)
        for (std::size_t y = 0; y < N.vcount(Pp.gens[k]); ++y) {
            Index ny = N.by_vertex[Pp.gens[k]][y];
            for (std::size_t g = 0; g < Pi.gens.size(); ++g)
                for (auto& [pidx, c] : R.gen_images[i][g]) {
                    auto [kk, b] = Pp.basis[pidx];
                    if (kk != static_cast<int>(k)) continue;
                    for (auto& [z, cz] : N.act[b].col(ny)) {
                        if (N.vertex[z] != Pi.gens[g]) continue;
                        acc.add(static_cast<Index>(oi[g] + N.vpos[z]), f.mul(c, cz));
                    }
                }
            cols[op[k] + y] = acc.take();
        }
    for (std::size_t j = 0; j < cols.size(); ++j) D.set_col(j, std::move(cols[j]));
    return D;
}

template <class F>
std::size_t hom_dim_projective(const FreeProjective<F>& P, const Module<F>& N) {
    std::size_t s = 0;
    for (int v : P.gens) s += N.vcount(v);
    return s;
}

template <class F>
long long ext_oracle(const Module<F>& M, const Module<F>& N, int deg) {
    if (deg < 0) return 0;
    auto R = proj_resolution(M, deg + 1);
    if (deg >= static_cast<int>(R.P.size())) return 0;
    long long dim = static_cast<long long>(hom_dim_projective(R.P[deg], N));
    long long r_out = deg + 1 < static_cast<int>(R.P.size()) ? static_cast<long long>(rank(hom_into(R, deg + 1, N))) : 0;
    long long r_in = deg >= 1 ? static_cast<long long>(rank(hom_into(R, deg, N))) : 0;
    return dim - r_out - r_in;
}

template <class F>
bool is_injective(const Module<F>& M) {
    const auto& A = *M.A;
    for (int v = 0; v < A.vertices(); ++v) {
        auto S = simple_module(A, v);
        auto R = proj_resolution(S, 2);
        if (R.P.size() < 2) continue;
        long long dim = static_cast<long long>(hom_dim_projective(R.P[1], M));
        long long r_out = R.P.size() > 2 ? static_cast<long long>(rank(hom_into(R, 2, M))) : 0;
        long long r_in = static_cast<long long>(rank(hom_into(R, 1, M)));
        if (dim - r_out - r_in != 0) return false;
    }
    return true;
}

template <class F>
bool is_self_injective(const Algebra<F>& A) { return is_injective(regular_module(A)); }

// Opposite algebra and duals give cosyzygies: Omega^{-1} M = D Omega_op D M.
template <class F>
Algebra<F> opposite(const Algebra<F>& A) {
    std::vector<std::vector<SVec<F>>> mult(A.dim(), std::vector<SVec<F>>(A.dim()));
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) mult[i][j] = A.prod(j, i);
    return Algebra<F>(A.field(), A.labels(), std::move(mult), A.idempotents());
}

template <class F>
Module<F> dual(const Module<F>& M, const Algebra<F>& target) {
    Module<F> D;
    D.A = &target;
    D.dim = M.dim;
    D.vertex = M.vertex;
    for (auto& m : M.act) D.act.push_back(m.transpose());
    D.label = "D(" + M.label + ")";
    D.finalize();
    return D;
}

template <class F>
Module<F> cosyzygy(const Module<F>& M) {
    auto Aop = opposite(*M.A);
    auto DM = dual(M, Aop);
    auto Om = syzygy(DM);
    auto out = dual(Om, *M.A);
    out.label = "Omega^-1(" + M.label + ")";
    return out;
}

// dim of Hom modulo maps factoring through projectives, for self-injective algebras.
template <class F>
long long stable_hom_oracle(const Module<F>& M, const Module<F>& N, int deg) {
    const auto& A = *M.A;
    if (!is_self_injective(A)) throw ModuleError("stable_hom_oracle requires a self-injective algebra");
    Module<F> X = M;
    for (int i = 0; i < deg; ++i) X = syzygy(X);
    for (int i = 0; i > deg; --i) X = cosyzygy(X);
    if (X.dim == 0) return 0;
    auto H = hom_basis(X, N);
    if (H.empty()) return 0;
    auto C = projective_cover(N);
    auto HP = hom_basis(X, C.P.module);
    auto pi = C.map.to_dense();
    ColumnReducer<F> red(M.field(), std::max<std::size_t>(N.dim * X.dim, 1));
    for (auto& h : HP) red.insert(flatten(pi * h));
    return static_cast<long long>(H.size()) - static_cast<long long>(red.rank());
}

} // namespace yl
