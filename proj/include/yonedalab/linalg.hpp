#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace yl {

using Index = std::uint32_t;

template <class F> using Val = typename F::value_type;

// Sparse vector: sorted by index, no explicit zeros.
template <class F> using SVec = std::vector<std::pair<Index, Val<F>>>;

// y += a*x
template <class F>
void axpy(const F& f, SVec<F>& y, const Val<F>& a, const SVec<F>& x) {
    if (f.is_zero(a) || x.empty()) return;
    SVec<F> out;
    out.reserve(y.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(std::move(y[i++]));
        } else if (i == y.size() || x[j].first < y[i].first) {
            out.emplace_back(x[j].first, f.mul(a, x[j].second));
            ++j;
        } else {
            Val<F> s = f.add(y[i].second, f.mul(a, x[j].second));
            if (!f.is_zero(s)) out.emplace_back(y[i].first, std::move(s));
            ++i; ++j;
        }
    }
    y.swap(out);
}

template <class F>
SVec<F> scaled(const F& f, const SVec<F>& x, const Val<F>& a) {
    SVec<F> out;
    if (f.is_zero(a)) return out;
    out.reserve(x.size());
    for (auto& [i, v] : x) out.emplace_back(i, f.mul(a, v));
    return out;
}

// Accumulates many scattered contributions into one sparse vector.
template <class F>
class Accumulator {
public:
    Accumulator(const F& f, std::size_t n) : f_(f), val_(n, f.zero()), used_(n, 0) {}
    void add(Index i, const Val<F>& v) {
        if (f_.is_zero(v)) return;
        if (!used_[i]) { used_[i] = 1; touched_.push_back(i); val_[i] = v; }
        else val_[i] = f_.add(val_[i], v);
    }
    void add(const SVec<F>& x, const Val<F>& a) {
        for (auto& [i, v] : x) add(i, f_.mul(a, v));
    }
    SVec<F> take() {
        std::sort(touched_.begin(), touched_.end());
        SVec<F> out;
        out.reserve(touched_.size());
        for (Index i : touched_) {
            if (!f_.is_zero(val_[i])) out.emplace_back(i, val_[i]);
            val_[i] = f_.zero();
            used_[i] = 0;
        }
        touched_.clear();
        return out;
    }
private:
    F f_;
    std::vector<Val<F>> val_;
    std::vector<char> used_;
    std::vector<Index> touched_;
};

// ---------------------------------------------------------------- dense

template <class F>
class Matrix {
public:
    using V = Val<F>;

    Matrix() = default;
    Matrix(const F& f, std::size_t r, std::size_t c) : f_(f), r_(r), c_(c), a_(r * c, f.zero()) {}

    static Matrix identity(const F& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
        return m;
    }
    static Matrix from_ints(const F& f, const std::vector<std::vector<long long>>& rows) {
        std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        Matrix m(f, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = f.from_int(rows[i][j]);
        }
        return m;
    }

    const F& field() const { return f_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    V& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const V& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    bool is_zero() const {
        for (auto& v : a_) if (!f_.is_zero(v)) return false;
        return true;
    }
    bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    Matrix operator*(const Matrix& o) const {
        if (c_ != o.r_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix m(f_, r_, o.c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                const V& a = (*this)(i, k);
                if (f_.is_zero(a)) continue;
                for (std::size_t j = 0; j < o.c_; ++j)
                    if (!f_.is_zero(o(k, j))) m(i, j) = f_.add(m(i, j), f_.mul(a, o(k, j)));
            }
        return m;
    }
    Matrix operator+(const Matrix& o) const {
        check_same(o);
        Matrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_.add(a_[i], o.a_[i]);
        return m;
    }
    Matrix operator-(const Matrix& o) const {
        check_same(o);
        Matrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_.sub(a_[i], o.a_[i]);
        return m;
    }
    Matrix scaled(const V& s) const {
        Matrix m = *this;
        for (auto& v : m.a_) v = f_.mul(v, s);
        return m;
    }
    Matrix transpose() const {
        Matrix m(f_, c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    Matrix columns(const std::vector<std::size_t>& idx) const {
        Matrix m(f_, r_, idx.size());
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
        return m;
    }
    Matrix hcat(const Matrix& o) const {
        if (r_ != o.r_) throw std::invalid_argument("hcat row mismatch");
        Matrix m(f_, r_, c_ + o.c_);
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < c_; ++j) m(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < o.c_; ++j) m(i, c_ + j) = o(i, j);
        }
        return m;
    }

private:
    void check_same(const Matrix& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
    }
    F f_{};
    std::size_t r_ = 0, c_ = 0;
    std::vector<V> a_;
};

// Reduced row echelon form with first-nonzero pivoting, returns pivot columns.
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m) {
    const F& f = m.field();
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        std::size_t r = row;
        while (r < m.rows() && f.is_zero(m(r, c))) ++r;
        if (r == m.rows()) continue;
        if (r != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(row, j));
        auto iv = f.inv(m(row, c));
        for (std::size_t j = c; j < m.cols(); ++j) m(row, j) = f.mul(m(row, j), iv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || f.is_zero(m(i, c))) continue;
            auto s = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!f.is_zero(m(row, j))) m(i, j) = f.sub(m(i, j), f.mul(s, m(row, j)));
        }
        piv.push_back(c);
        ++row;
    }
    return piv;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    Matrix<F> w = m;
    return rref(w).size();
}

// Columns form a basis of {x : m x = 0}.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
    const F& f = m.field();
    Matrix<F> w = m;
    auto piv = rref(w);
    std::vector<char> is_piv(m.cols(), 0);
    for (auto c : piv) is_piv[c] = 1;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < m.cols(); ++c) if (!is_piv[c]) free.push_back(c);
    Matrix<F> k(f, m.cols(), free.size());
    for (std::size_t j = 0; j < free.size(); ++j) {
        k(free[j], j) = f.one();
        for (std::size_t i = 0; i < piv.size(); ++i) k(piv[i], j) = f.neg(w(i, free[j]));
    }
    return k;
}

// Some x with m x = b, or nothing when b leaves the column space.
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& m, const Matrix<F>& b) {
    if (m.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
    const F& f = m.field();
    Matrix<F> aug = m.hcat(b);
    auto piv = rref(aug);
    for (auto c : piv)
        if (c >= m.cols()) return std::nullopt;
    Matrix<F> x(f, m.cols(), b.cols());
    for (std::size_t i = 0; i < piv.size(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(piv[i], j) = aug(i, m.cols() + j);
#ifndef NDEBUG
    if (!(m * x == b)) throw std::logic_error("solve: verification failed");
#endif
    return x;
}

// dim ker(d_next) - rank(d_prev)
template <class F>
long long cohomology_dims(const Matrix<F>& d_prev, const Matrix<F>& d_next) {
    if (d_prev.rows() != d_next.cols()) throw std::invalid_argument("cohomology_dims: shape mismatch");
    if (!(d_next * d_prev).is_zero()) throw std::logic_error("cohomology_dims: composition is nonzero");
    return static_cast<long long>(d_next.cols() - rank(d_next)) - static_cast<long long>(rank(d_prev));
}

// ---------------------------------------------------------------- sparse

// Column-major sparse matrix.
template <class F>
class SparseMatrix {
public:
    using V = Val<F>;

    SparseMatrix() = default;
    SparseMatrix(const F& f, std::size_t r, std::size_t c) : f_(f), r_(r), cols_(c) {}

    static SparseMatrix identity(const F& f, std::size_t n) {
        SparseMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.cols_[i].emplace_back(static_cast<Index>(i), f.one());
        return m;
    }
    static SparseMatrix from_dense(const Matrix<F>& d) {
        SparseMatrix m(d.field(), d.rows(), d.cols());
        for (std::size_t j = 0; j < d.cols(); ++j)
            for (std::size_t i = 0; i < d.rows(); ++i)
                if (!d.field().is_zero(d(i, j))) m.cols_[j].emplace_back(static_cast<Index>(i), d(i, j));
        return m;
    }
    Matrix<F> to_dense() const {
        Matrix<F> d(f_, r_, cols_.size());
        for (std::size_t j = 0; j < cols_.size(); ++j)
            for (auto& [i, v] : cols_[j]) d(i, j) = v;
        return d;
    }

    const F& field() const { return f_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return cols_.size(); }
    const SVec<F>& col(std::size_t j) const { return cols_[j]; }
    SVec<F>& col(std::size_t j) { return cols_[j]; }
    void set_col(std::size_t j, SVec<F> v) { cols_[j] = std::move(v); }
    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& c : cols_) n += c.size();
        return n;
    }

    V at(std::size_t i, std::size_t j) const {
        auto& c = cols_[j];
        auto it = std::lower_bound(c.begin(), c.end(), static_cast<Index>(i),
                                   [](const auto& e, Index k) { return e.first < k; });
        return (it != c.end() && it->first == i) ? it->second : f_.zero();
    }

    bool is_zero() const {
        for (auto& c : cols_) if (!c.empty()) return false;
        return true;
    }
    bool operator==(const SparseMatrix& o) const { return r_ == o.r_ && cols_ == o.cols_; }

    SVec<F> apply(const SVec<F>& x) const {
        SVec<F> t;
        for (auto& [j, v] : x)
            for (auto& [i, w] : cols_[j]) t.emplace_back(i, f_.mul(v, w));
        std::stable_sort(t.begin(), t.end(), [](auto& a, auto& b) { return a.first < b.first; });
        SVec<F> out;
        for (auto& [i, w] : t) {
            if (!out.empty() && out.back().first == i) out.back().second = f_.add(out.back().second, w);
            else out.emplace_back(i, w);
        }
        std::erase_if(out, [&](auto& e) { return f_.is_zero(e.second); });
        return out;
    }

    SparseMatrix operator*(const SparseMatrix& o) const {
        if (cols() != o.rows()) throw std::invalid_argument("sparse product shape mismatch");
        SparseMatrix m(f_, r_, o.cols());
        Accumulator<F> acc(f_, r_);
        for (std::size_t j = 0; j < o.cols(); ++j) {
            for (auto& [k, v] : o.cols_[j]) acc.add(cols_[k], v);
            m.cols_[j] = acc.take();
        }
        return m;
    }
    SparseMatrix operator+(const SparseMatrix& o) const {
        check_same(o);
        SparseMatrix m = *this;
        for (std::size_t j = 0; j < cols(); ++j) axpy(f_, m.cols_[j], f_.one(), o.cols_[j]);
        return m;
    }
    SparseMatrix operator-(const SparseMatrix& o) const {
        check_same(o);
        SparseMatrix m = *this;
        for (std::size_t j = 0; j < cols(); ++j) axpy(f_, m.cols_[j], f_.neg(f_.one()), o.cols_[j]);
        return m;
    }
    SparseMatrix scaled(const V& s) const {
        SparseMatrix m(f_, r_, cols());
        for (std::size_t j = 0; j < cols(); ++j) m.cols_[j] = yl::scaled(f_, cols_[j], s);
        return m;
    }
    SparseMatrix transpose() const {
        SparseMatrix t(f_, cols(), r_);
        for (std::size_t j = 0; j < cols(); ++j)
            for (auto& [i, v] : cols_[j]) t.cols_[i].emplace_back(static_cast<Index>(j), v);
        return t;
    }
    // rows [r0, r0+nr) x cols [c0, c0+nc)
    SparseMatrix block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
        SparseMatrix m(f_, nr, nc);
        for (std::size_t j = 0; j < nc; ++j)
            for (auto& [i, v] : cols_[c0 + j])
                if (i >= r0 && i < r0 + nr) m.cols_[j].emplace_back(static_cast<Index>(i - r0), v);
        return m;
    }
    // place o with its top-left corner at (r0, c0); the target area must be empty
    void paste(const SparseMatrix& o, std::size_t r0, std::size_t c0) {
        for (std::size_t j = 0; j < o.cols(); ++j) {
            SVec<F> shifted;
            shifted.reserve(o.cols_[j].size());
            for (auto& [i, v] : o.cols_[j]) shifted.emplace_back(static_cast<Index>(i + r0), v);
            axpy(f_, cols_[c0 + j], f_.one(), shifted);
        }
    }

private:
    void check_same(const SparseMatrix& o) const {
        if (r_ != o.r_ || cols() != o.cols()) throw std::invalid_argument("sparse shape mismatch");
    }
    F f_{};
    std::size_t r_ = 0;
    std::vector<SVec<F>> cols_;
};

// Incremental column echelon basis. Each stored column has a distinct last
// row (its pivot); reduction clears the trailing entry repeatedly, so the
// outcome depends only on the insertion order.
template <class F>
class ColumnReducer {
public:
    ColumnReducer(const F& f, std::size_t ambient, bool track = false)
        : f_(f), pivot_(ambient, -1), track_(track) {}

    std::size_t rank() const { return cols_.size(); }

    // Reduces v modulo the span; if track, also returns coefficients c with
    // v_in - residual = sum_k c_k * input_k over the tracked inputs.
    SVec<F> reduce(SVec<F> v, SVec<F>* combo = nullptr) const {
        while (!v.empty()) {
            int k = pivot_[v.back().first];
            if (k < 0) break;
            Val<F> c = v.back().second;
            axpy(f_, v, f_.neg(c), cols_[k]);
            if (combo) axpy(f_, *combo, c, combos_[k]);
        }
        return v;
    }

    bool in_span(const SVec<F>& v) const { return reduce(v).empty(); }

    // Returns true if v was independent. With tracking, 'label' names the
    // input; when v is dependent, *relation receives label minus the
    // combination of earlier inputs (a kernel vector).
    bool insert(SVec<F> v, Index label = 0, SVec<F>* relation = nullptr) {
        SVec<F> combo;
        SVec<F>* cp = track_ ? &combo : nullptr;
        while (!v.empty()) {
            int k = pivot_[v.back().first];
            if (k < 0) break;
            Val<F> c = v.back().second;
            axpy(f_, v, f_.neg(c), cols_[k]);
            if (cp) axpy(f_, combo, f_.neg(c), combos_[k]);
        }
        if (track_) axpy(f_, combo, f_.one(), SVec<F>{{label, f_.one()}});
        if (v.empty()) {
            if (relation) *relation = std::move(combo);
            return false;
        }
        Val<F> iv = f_.inv(v.back().second);
        pivot_[v.back().first] = static_cast<int>(cols_.size());
        if (track_) combos_.push_back(scaled(f_, combo, iv));
        cols_.push_back(scaled(f_, v, iv));
        return true;
    }

private:
    F f_;
    std::vector<SVec<F>> cols_;
    std::vector<SVec<F>> combos_;
    std::vector<int> pivot_;
    bool track_;
};

template <class F>
std::size_t rank(const SparseMatrix<F>& m) {
    ColumnReducer<F> red(m.field(), m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) red.insert(m.col(j));
    return red.rank();
}

template <class F>
std::vector<SVec<F>> kernel_basis(const SparseMatrix<F>& m) {
    ColumnReducer<F> red(m.field(), m.rows(), true);
    std::vector<SVec<F>> ker;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        SVec<F> rel;
        if (!red.insert(m.col(j), static_cast<Index>(j), &rel)) ker.push_back(std::move(rel));
    }
    return ker;
}

template <class F>
std::optional<SVec<F>> solve(const SparseMatrix<F>& m, const SVec<F>& b) {
    ColumnReducer<F> red(m.field(), m.rows(), true);
    for (std::size_t j = 0; j < m.cols(); ++j) red.insert(m.col(j), static_cast<Index>(j));
    SVec<F> x;
    if (!red.reduce(b, &x).empty()) return std::nullopt;
    return x;
}

template <class F>
SparseMatrix<F> from_columns(const F& f, std::size_t rows, std::vector<SVec<F>> cols) {
    SparseMatrix<F> m(f, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, std::move(cols[j]));
    return m;
}

} // namespace yl
