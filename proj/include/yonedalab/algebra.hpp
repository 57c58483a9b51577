#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace yl {

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite-dimensional algebra with a split semisimple subalgebra E spanned by
// orthogonal idempotents that belong to the basis. Every basis element b is
// E-bihomogeneous: e_l b e_r = b for a unique pair (l, r).
template <class F>
class Algebra {
public:
    Algebra() = default;

    // mult[i][j] lists the coordinates of b_i b_j; idem[v] is the basis index of e_v.
    Algebra(F f, std::vector<std::string> labels, std::vector<std::vector<SVec<F>>> mult,
            std::vector<int> idem)
        : f_(f), labels_(std::move(labels)), idem_(std::move(idem)) {
        n_ = static_cast<int>(labels_.size());
        if (static_cast<int>(mult.size()) != n_) throw AlgebraError("structure table has wrong size");
        table_.resize(static_cast<std::size_t>(n_) * n_);
        for (int i = 0; i < n_; ++i) {
            if (static_cast<int>(mult[i].size()) != n_) throw AlgebraError("structure table has wrong size");
            for (int j = 0; j < n_; ++j) {
                auto v = mult[i][j];
                std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
                SVec<F> clean;
                for (auto& e : v) {
                    if (e.first >= static_cast<Index>(n_)) throw AlgebraError("structure constant index out of range");
                    if (!clean.empty() && clean.back().first == e.first) {
                        clean.back().second = f_.add(clean.back().second, e.second);
                        if (f_.is_zero(clean.back().second)) clean.pop_back();
                    } else if (!f_.is_zero(e.second)) {
                        clean.push_back(e);
                    }
                }
                table_[i * n_ + j] = std::move(clean);
            }
        }
        validate();
        build_bar();
    }

    const F& field() const { return f_; }
    int dim() const { return n_; }
    int vertices() const { return static_cast<int>(idem_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_[i]; }
    int idempotent(int v) const { return idem_[v]; }
    const std::vector<int>& idempotents() const { return idem_; }
    int left(int i) const { return left_[i]; }
    int right(int i) const { return right_[i]; }
    const SVec<F>& prod(int i, int j) const { return table_[i * n_ + j]; }

    // bar basis: the non-idempotent basis elements, projecting to a basis of Lambda/E
    int bar_dim() const { return static_cast<int>(bar_.size()); }
    int bar_basis(int a) const { return bar_[a]; }
    int bar_pos(int i) const { return bar_pos_[i]; }
    int bar_left(int a) const { return left_[bar_[a]]; }
    int bar_right(int a) const { return right_[bar_[a]]; }
    // projection of bar_a * bar_b to bar coordinates
    const SVec<F>& bar_prod(int a, int b) const { return bar_prod_[a * bar_dim() + b]; }
    // all (a, b, c) with the bar coordinate c of bar_a*bar_b nonzero, keyed by c
    struct Split { int a, b; Val<F> coeff; };
    const std::vector<Split>& splits(int c) const { return splits_[c]; }

    SVec<F> unit() const {
        SVec<F> u;
        for (int e : idem_) u.emplace_back(static_cast<Index>(e), f_.one());
        std::sort(u.begin(), u.end(), [](auto& a, auto& b) { return a.first < b.first; });
        return u;
    }

    SVec<F> mul(const SVec<F>& x, const SVec<F>& y) const {
        Accumulator<F> acc(f_, n_);
        for (auto& [i, a] : x)
            for (auto& [j, b] : y) acc.add(prod(i, j), f_.mul(a, b));
        return acc.take();
    }

    // regular representation: column j of lmul(i) is b_i b_j
    SparseMatrix<F> left_mult(int i) const {
        SparseMatrix<F> m(f_, n_, n_);
        for (int j = 0; j < n_; ++j) m.set_col(j, prod(i, j));
        return m;
    }
    // column j of right_mult(i) is b_j b_i
    SparseMatrix<F> right_mult(int i) const {
        SparseMatrix<F> m(f_, n_, n_);
        for (int j = 0; j < n_; ++j) m.set_col(j, prod(j, i));
        return m;
    }

    // dim e_v Lambda e_w style counts
    int count_bidegree(int l, int r) const {
        int c = 0;
        for (int i = 0; i < n_; ++i) if (left_[i] == l && right_[i] == r) ++c;
        return c;
    }

private:
    void validate() {
        // associativity
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k) {
                    SVec<F> bi{{static_cast<Index>(i), f_.one()}}, bk{{static_cast<Index>(k), f_.one()}};
                    auto lhs = mul(prod(i, j), bk);
                    auto rhs = mul(bi, prod(j, k));
                    if (lhs != rhs)
                        throw AlgebraError("associativity fails for basis triple (" + labels_[i] + ", " +
                                           labels_[j] + ", " + labels_[k] + ") = (" + std::to_string(i) +
                                           "," + std::to_string(j) + "," + std::to_string(k) + ")");
                }
        if (idem_.empty()) throw AlgebraError("no idempotents given");
        std::vector<char> seen(n_, 0);
        for (int e : idem_) {
            if (e < 0 || e >= n_) throw AlgebraError("idempotent index out of range");
            if (seen[e]) throw AlgebraError("idempotent listed twice: " + labels_[e]);
            seen[e] = 1;
        }
        for (std::size_t v = 0; v < idem_.size(); ++v)
            for (std::size_t w = 0; w < idem_.size(); ++w) {
                SVec<F> expect;
                if (v == w) expect.emplace_back(static_cast<Index>(idem_[v]), f_.one());
                if (prod(idem_[v], idem_[w]) != expect)
                    throw AlgebraError("idempotent axiom fails: " + labels_[idem_[v]] + " * " + labels_[idem_[w]]);
            }
        auto u = unit();
        for (int i = 0; i < n_; ++i) {
            SVec<F> bi{{static_cast<Index>(i), f_.one()}};
            if (mul(u, bi) != bi || mul(bi, u) != bi)
                throw AlgebraError("sum of idempotents is not a unit (fails on " + labels_[i] + ")");
        }
        left_.assign(n_, -1);
        right_.assign(n_, -1);
        for (int i = 0; i < n_; ++i) {
            SVec<F> bi{{static_cast<Index>(i), f_.one()}};
            for (std::size_t v = 0; v < idem_.size(); ++v) {
                auto l = prod(idem_[v], i);
                auto r = prod(i, idem_[v]);
                if (l == bi) {
                    if (left_[i] >= 0) throw AlgebraError("basis element not bihomogeneous: " + labels_[i]);
                    left_[i] = static_cast<int>(v);
                } else if (!l.empty()) {
                    throw AlgebraError("basis element not bihomogeneous: " + labels_[i]);
                }
                if (r == bi) {
                    if (right_[i] >= 0) throw AlgebraError("basis element not bihomogeneous: " + labels_[i]);
                    right_[i] = static_cast<int>(v);
                } else if (!r.empty()) {
                    throw AlgebraError("basis element not bihomogeneous: " + labels_[i]);
                }
            }
            if (left_[i] < 0 || right_[i] < 0) throw AlgebraError("basis element not bihomogeneous: " + labels_[i]);
        }
    }

    void build_bar() {
        bar_pos_.assign(n_, -1);
        std::vector<char> is_idem(n_, 0);
        for (int e : idem_) is_idem[e] = 1;
        for (int i = 0; i < n_; ++i)
            if (!is_idem[i]) { bar_pos_[i] = static_cast<int>(bar_.size()); bar_.push_back(i); }
        int nb = bar_dim();
        bar_prod_.assign(static_cast<std::size_t>(nb) * nb, {});
        splits_.assign(nb, {});
        for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b) {
                SVec<F> pr;
                for (auto& [k, v] : prod(bar_[a], bar_[b]))
                    if (bar_pos_[k] >= 0) pr.emplace_back(static_cast<Index>(bar_pos_[k]), v);
                for (auto& [c, v] : pr) splits_[c].push_back({a, b, v});
                bar_prod_[a * nb + b] = std::move(pr);
            }
    }

    F f_{};
    int n_ = 0;
    std::vector<std::string> labels_;
    std::vector<SVec<F>> table_;
    std::vector<int> idem_;
    std::vector<int> left_, right_;
    std::vector<int> bar_, bar_pos_;
    std::vector<SVec<F>> bar_prod_;
    std::vector<std::vector<Split>> splits_;
};

// Basis of the p-th tensor power of Lambda-bar over E: composable tuples
// (a_1, ..., a_p) with right(a_i) = left(a_{i+1}). For p = 0 the basis is
// one empty tuple per vertex.
struct TensorBasis {
    int p = 0;
    std::vector<std::vector<int>> tuples;
    std::vector<int> lv, rv;
    std::unordered_map<std::uint64_t, int> index;
    std::uint64_t radix = 1;

    std::size_t size() const { return tuples.size(); }

    std::uint64_t code(const std::vector<int>& t) const {
        std::uint64_t c = 0;
        for (std::size_t i = t.size(); i-- > 0;) c = c * radix + static_cast<std::uint64_t>(t[i] + 1);
        return c;
    }
    // index of a tuple, -1 if not composable; for p = 0 pass the vertex
    int find(const std::vector<int>& t) const {
        auto it = index.find(code(t));
        return it == index.end() ? -1 : it->second;
    }
    int find_vertex(int v) const { return v; }
};

template <class F>
TensorBasis barlambda_tensor_power(const Algebra<F>& A, int p) {
    if (p < 0) throw std::invalid_argument("negative tensor power");
    TensorBasis T;
    T.p = p;
    T.radix = static_cast<std::uint64_t>(A.bar_dim()) + 1;
    if (p == 0) {
        for (int v = 0; v < A.vertices(); ++v) {
            T.tuples.push_back({});
            T.lv.push_back(v);
            T.rv.push_back(v);
        }
        return T;
    }
    // overflow guard on the packed code
    long double cap = 1;
    for (int i = 0; i < p; ++i) cap *= static_cast<long double>(T.radix);
    if (cap > 1.8e19L) throw std::overflow_error("tensor power too large to index");
    std::vector<std::vector<int>> cur;
    for (int a = 0; a < A.bar_dim(); ++a) cur.push_back({a});
    for (int k = 1; k < p; ++k) {
        std::vector<std::vector<int>> nxt;
        for (auto& t : cur)
            for (int a = 0; a < A.bar_dim(); ++a)
                if (A.bar_right(t.back()) == A.bar_left(a)) {
                    auto u = t;
                    u.push_back(a);
                    nxt.push_back(std::move(u));
                }
        cur.swap(nxt);
    }
    for (auto& t : cur) {
        T.index.emplace(T.code(t), static_cast<int>(T.tuples.size()));
        T.lv.push_back(A.bar_left(t.front()));
        T.rv.push_back(A.bar_right(t.back()));
        T.tuples.push_back(std::move(t));
    }
    return T;
}

// Cache of tensor powers 0..pmax.
class Tensors {
public:
    Tensors() = default;
    template <class F>
    Tensors(const Algebra<F>& A, int pmax) {
        for (int p = 0; p <= pmax; ++p) T_.push_back(barlambda_tensor_power(A, p));
    }
    const TensorBasis& operator[](int p) const { return T_.at(p); }
    int pmax() const { return static_cast<int>(T_.size()) - 1; }
private:
    std::vector<TensorBasis> T_;
};

// ---------------------------------------------------------------- quivers

struct Arrow {
    std::string name;
    int source = 0, target = 0;
};

// A relation is a list of (coefficient, path); a path is a word of arrow
// names read as an algebra product, so "b a" means b*a (first a, then b).
struct QuiverPresentation {
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<std::vector<std::pair<mpq_class, std::vector<std::string>>>> relations;
    int max_length = 12;
};

template <class F>
Algebra<F> quiver_to_algebra(const F& f, const QuiverPresentation& q) {
    int nv = static_cast<int>(q.vertices.size());
    if (nv == 0) throw AlgebraError("quiver has no vertices");
    std::map<std::string, int> arrow_id;
    for (std::size_t i = 0; i < q.arrows.size(); ++i) {
        auto& a = q.arrows[i];
        if (a.source < 0 || a.source >= nv || a.target < 0 || a.target >= nv)
            throw AlgebraError("arrow " + a.name + " has an unknown endpoint");
        if (!arrow_id.emplace(a.name, static_cast<int>(i)).second)
            throw AlgebraError("arrow name repeated: " + a.name);
    }
    // paths as arrow words in product order; a word w = w_0 w_1 ... has
    // left vertex target(w_0) and right vertex source(w_last)
    struct Path { std::vector<int> w; int l, r; };
    auto composable = [&](int x, int y) { return q.arrows[x].source == q.arrows[y].target; };

    std::vector<std::vector<std::pair<mpq_class, std::vector<int>>>> rels;
    for (auto& rel : q.relations) {
        std::vector<std::pair<mpq_class, std::vector<int>>> r;
        for (auto& [c, word] : rel) {
            std::vector<int> w;
            for (auto& s : word) {
                auto it = arrow_id.find(s);
                if (it == arrow_id.end()) throw AlgebraError("relation uses unknown arrow " + s);
                w.push_back(it->second);
            }
            if (w.size() < 2) throw AlgebraError("relation is not admissible: it has a term of length < 2");
            for (std::size_t i = 0; i + 1 < w.size(); ++i)
                if (!composable(w[i], w[i + 1])) throw AlgebraError("relation contains a non-composable path");
            r.emplace_back(c, std::move(w));
        }
        rels.push_back(std::move(r));
    }

    for (int L = 2; L <= q.max_length; ++L) {
        // all paths of length <= L, ordered by length then lexicographically
        std::vector<Path> paths;
        for (int v = 0; v < nv; ++v) paths.push_back({{}, v, v});
        std::vector<Path> layer;
        for (std::size_t a = 0; a < q.arrows.size(); ++a)
            layer.push_back({{static_cast<int>(a)}, q.arrows[a].target, q.arrows[a].source});
        for (int len = 1; len <= L; ++len) {
            for (auto& p : layer) paths.push_back(p);
            if (len == L) break;
            std::vector<Path> nxt;
            for (auto& p : layer)
                for (std::size_t a = 0; a < q.arrows.size(); ++a)
                    if (composable(p.w.back(), static_cast<int>(a))) {
                        Path np = p;
                        np.w.push_back(static_cast<int>(a));
                        np.r = q.arrows[a].source;
                        nxt.push_back(std::move(np));
                    }
            layer.swap(nxt);
        }
        std::map<std::vector<int>, int> pid;
        for (std::size_t i = 0; i < paths.size(); ++i) pid[paths[i].w] = static_cast<int>(i);
        int np = static_cast<int>(paths.size());
        // generators u r v of the ideal, truncated modulo paths longer than L;
        // columns reversed so rref pivots land on the longest paths
        std::vector<std::vector<Val<F>>> gens;
        auto col = [&](int i) { return np - 1 - i; };
        for (auto& rel : rels)
            for (int ui = 0; ui < np; ++ui)
                for (int vi = 0; vi < np; ++vi) {
                    std::vector<Val<F>> row(np, f.zero());
                    bool any = false;
                    for (auto& [c, w] : rel) {
                        auto& u = paths[ui];
                        auto& v = paths[vi];
                        std::vector<int> full;
                        // vertex paths act as idempotents
                        int wl = q.arrows[w.front()].target, wr = q.arrows[w.back()].source;
                        if (u.r != wl || wr != v.l) continue;
                        full = u.w;
                        full.insert(full.end(), w.begin(), w.end());
                        full.insert(full.end(), v.w.begin(), v.w.end());
                        if (static_cast<int>(full.size()) > L) continue;
                        int k = pid.at(full);
                        row[col(k)] = f.add(row[col(k)], f.from_ratio(c));
                        any = true;
                    }
                    if (any) gens.push_back(std::move(row));
                }
        Matrix<F> R(f, gens.size(), np);
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (int j = 0; j < np; ++j) R(i, j) = gens[i][j];
        auto piv = rref(R);
        std::vector<int> pivot_row(np, -1);
        for (std::size_t i = 0; i < piv.size(); ++i) pivot_row[np - 1 - static_cast<int>(piv[i])] = static_cast<int>(i);
        // every path of length exactly L must be a pivot (J^L inside I + J^{L+1})
        bool top_killed = true;
        for (int i = 0; i < np; ++i)
            if (static_cast<int>(paths[i].w.size()) == L && pivot_row[i] < 0) top_killed = false;
        if (!top_killed) continue;

        std::vector<int> basis_paths;
        std::vector<int> bidx(np, -1);
        for (int i = 0; i < np; ++i)
            if (pivot_row[i] < 0) { bidx[i] = static_cast<int>(basis_paths.size()); basis_paths.push_back(i); }
        int n = static_cast<int>(basis_paths.size());
        auto normal_form = [&](const std::vector<int>& w) -> SVec<F> {
            if (static_cast<int>(w.size()) > L) return {};
            int k = pid.at(w);
            SVec<F> out;
            if (pivot_row[k] < 0) { out.emplace_back(static_cast<Index>(bidx[k]), f.one()); return out; }
            int row = pivot_row[k];
            for (int j = 0; j < np; ++j) {
                int pj = np - 1 - j;
                if (bidx[pj] >= 0 && !f.is_zero(R(row, j))) out.emplace_back(static_cast<Index>(bidx[pj]), f.neg(R(row, j)));
            }
            std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
            return out;
        };
        std::vector<std::string> labels;
        for (int i : basis_paths) {
            auto& p = paths[i];
            if (p.w.empty()) { labels.push_back("e" + q.vertices[p.l]); continue; }
            std::string s;
            for (std::size_t t = 0; t < p.w.size(); ++t) s += (t ? "*" : "") + q.arrows[p.w[t]].name;
            labels.push_back(s);
        }
        std::vector<std::vector<SVec<F>>> mult(n, std::vector<SVec<F>>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto& p = paths[basis_paths[i]];
                auto& r = paths[basis_paths[j]];
                if (p.r != r.l) continue;
                std::vector<int> w = p.w;
                w.insert(w.end(), r.w.begin(), r.w.end());
                if (w.empty()) { mult[i][j] = {{static_cast<Index>(i), f.one()}}; continue; }
                mult[i][j] = normal_form(w);
            }
        std::vector<int> idem;
        for (int v = 0; v < nv; ++v) idem.push_back(v);  // vertex paths come first
        return Algebra<F>(f, std::move(labels), std::move(mult), std::move(idem));
    }
    throw AlgebraError("quotient is not finite-dimensional within path-length bound " + std::to_string(q.max_length));
}

} // namespace yl
