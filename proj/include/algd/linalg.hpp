#pragma once

#include "algd/rational.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace algd {

using Vec = std::vector<Rational>;

// Sparse row: (column, value) pairs, columns strictly ascending, values nonzero.
using SparseRow = std::vector<std::pair<int, Rational>>;

inline bool is_zero(const Vec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

inline Vec& axpy(Vec& y, const Rational& c, const Vec& x) {
    for (size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) y[i] += c * x[i];
    return y;
}

inline Vec add(Vec a, const Vec& b) { return axpy(a, Rational(1), b); }
inline Vec sub(Vec a, const Vec& b) { return axpy(a, Rational(-1), b); }

inline Vec scale(Vec v, const Rational& c) {
    for (auto& x : v) x *= c;
    return v;
}

inline Vec unit_vec(int dim, int i, Rational c = Rational(1)) {
    Vec v(dim);
    v[i] = std::move(c);
    return v;
}

inline SparseRow to_sparse(const Vec& v) {
    SparseRow r;
    for (size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) r.emplace_back((int)i, v[i]);
    return r;
}

inline Vec to_dense(const SparseRow& r, int dim) {
    Vec v(dim);
    for (const auto& [c, x] : r) v[c] = x;
    return v;
}

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}

    Rational& at(int i, int j) { return a[(size_t)i * cols + j]; }
    const Rational& at(int i, int j) const { return a[(size_t)i * cols + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
        return m;
    }

    Vec row(int i) const { return Vec(a.begin() + (size_t)i * cols, a.begin() + (size_t)(i + 1) * cols); }
    Vec col(int j) const {
        Vec v(rows);
        for (int i = 0; i < rows; ++i) v[i] = at(i, j);
        return v;
    }
    void set_col(int j, const Vec& v) {
        for (int i = 0; i < rows; ++i) at(i, j) = v[i];
    }

    Vec apply(const Vec& x) const {
        if ((int)x.size() != cols) throw std::invalid_argument("matrix apply: dimension mismatch");
        Vec y(rows);
        for (int j = 0; j < cols; ++j) {
            if (x[j].is_zero()) continue;
            for (int i = 0; i < rows; ++i) {
                const Rational& m = at(i, j);
                if (!m.is_zero()) y[i] += m * x[j];
            }
        }
        return y;
    }

    friend Matrix operator*(const Matrix& l, const Matrix& r) {
        if (l.cols != r.rows) throw std::invalid_argument("matrix product: dimension mismatch");
        Matrix out(l.rows, r.cols);
        for (int i = 0; i < l.rows; ++i)
            for (int k = 0; k < l.cols; ++k) {
                const Rational& lv = l.at(i, k);
                if (lv.is_zero()) continue;
                for (int j = 0; j < r.cols; ++j)
                    if (!r.at(k, j).is_zero()) out.at(i, j) += lv * r.at(k, j);
            }
        return out;
    }

    friend bool operator==(const Matrix& l, const Matrix& r) {
        return l.rows == r.rows && l.cols == r.cols && l.a == r.a;
    }
};

// Row set in echelon form: each row's leading column is its pivot, leading
// coefficient 1, pivots pairwise distinct. Rows are not necessarily mutually
// reduced; the induced reduction map depends only on the span and the pivot
// set, and the pivot set of a span is unique, so reduce() is canonical.
class EchelonBasis {
public:
    explicit EchelonBasis(int ambient) : ambient_(ambient), row_of_pivot_(ambient, -1) {}

    int ambient() const { return ambient_; }
    int rank() const { return (int)rows_.size(); }
    const std::vector<SparseRow>& rows() const { return rows_; }
    int row_at_pivot(int col) const { return row_of_pivot_[col]; }
    bool is_pivot(int col) const { return row_of_pivot_[col] >= 0; }

    // Reduces v against the basis; if a nonzero remainder is left it becomes
    // a new row. Returns true when the rank grew.
    bool insert(SparseRow v) {
        v = reduce(std::move(v));
        if (v.empty()) return false;
        Rational lead = v.front().second;
        if (!lead.is_one())
            for (auto& [c, x] : v) x /= lead;
        row_of_pivot_[v.front().first] = (int)rows_.size();
        rows_.push_back(std::move(v));
        return true;
    }

    SparseRow reduce(SparseRow v) const {
        size_t done = 0;  // entries before 'done' are at non-pivot columns
        while (done < v.size()) {
            int c = v[done].first;
            int ri = row_of_pivot_[c];
            if (ri < 0) {
                ++done;
                continue;
            }
            v = axpy_sparse(std::move(v), -v[done].second, rows_[ri], done);
        }
        return v;
    }

    void reduce_inplace(Vec& v) const {
        for (int c = 0; c < ambient_; ++c) {
            if (v[c].is_zero()) continue;
            int ri = row_of_pivot_[c];
            if (ri < 0) continue;
            Rational f = v[c];
            for (const auto& [col, x] : rows_[ri]) v[col] -= f * x;
        }
    }

    bool contains(const Vec& v) const {
        Vec w = v;
        reduce_inplace(w);
        return is_zero(w);
    }

    // Mutual reduction: afterwards rows are the canonical RREF basis, sorted
    // by pivot column.
    void back_reduce() {
        std::vector<int> order(rows_.size());
        for (size_t i = 0; i < rows_.size(); ++i) order[i] = (int)i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return rows_[a].front().first < rows_[b].front().first; });
        // reduce tails, deepest pivot first so reducers are already final
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            SparseRow& r = rows_[*it];
            size_t done = 1;  // keep own pivot
            while (done < r.size()) {
                int c = r[done].first;
                int ri = row_of_pivot_[c];
                if (ri < 0) {
                    ++done;
                    continue;
                }
                r = axpy_sparse(std::move(r), -r[done].second, rows_[ri], done);
            }
        }
        std::vector<SparseRow> sorted;
        sorted.reserve(rows_.size());
        for (int i : order) sorted.push_back(std::move(rows_[i]));
        rows_ = std::move(sorted);
        for (size_t i = 0; i < rows_.size(); ++i) row_of_pivot_[rows_[i].front().first] = (int)i;
    }

    std::vector<int> pivots_sorted() const {
        std::vector<int> p;
        p.reserve(rows_.size());
        for (int c = 0; c < ambient_; ++c)
            if (row_of_pivot_[c] >= 0) p.push_back(c);
        return p;
    }

private:
    // v -= f * r, preserving sorted sparse form; entries of v before index
    // 'from' are untouched (their columns precede r's pivot).
    static SparseRow axpy_sparse(SparseRow v, const Rational& f, const SparseRow& r, size_t from) {
        SparseRow out;
        out.reserve(v.size() + r.size());
        out.insert(out.end(), v.begin(), v.begin() + from);
        size_t i = from, j = 0;
        while (i < v.size() || j < r.size()) {
            if (j >= r.size() || (i < v.size() && v[i].first < r[j].first)) {
                out.push_back(std::move(v[i++]));
            } else if (i >= v.size() || r[j].first < v[i].first) {
                out.emplace_back(r[j].first, f * r[j].second);
                ++j;
            } else {
                Rational x = v[i].second + f * r[j].second;
                if (!x.is_zero()) out.emplace_back(v[i].first, std::move(x));
                ++i;
                ++j;
            }
        }
        return out;
    }

    int ambient_;
    std::vector<SparseRow> rows_;
    std::vector<int> row_of_pivot_;
};

// Subspace in canonical form: basis rows are the unique RREF of any spanning
// set, so subspace equality is row-list equality.
class Subspace {
public:
    Subspace() : basis_(0) {}
    explicit Subspace(int ambient) : basis_(ambient) {}
    explicit Subspace(EchelonBasis b) : basis_(std::move(b)) { basis_.back_reduce(); }

    static Subspace span(int ambient, const std::vector<Vec>& vectors) {
        EchelonBasis b(ambient);
        for (const Vec& v : vectors) b.insert(to_sparse(v));
        return Subspace(std::move(b));
    }

    int ambient_dim() const { return basis_.ambient(); }
    int dim() const { return basis_.rank(); }
    bool contains(const Vec& v) const { return basis_.contains(v); }
    const std::vector<SparseRow>& rows() const { return basis_.rows(); }
    std::vector<int> pivots() const { return basis_.pivots_sorted(); }
    const EchelonBasis& echelon() const { return basis_; }

    void reduce_inplace(Vec& v) const { basis_.reduce_inplace(v); }

    Matrix basis_matrix() const {
        Matrix m(dim(), ambient_dim());
        for (int i = 0; i < dim(); ++i)
            for (const auto& [c, x] : basis_.rows()[i]) m.at(i, c) = x;
        return m;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.basis_.ambient() == b.basis_.ambient() && a.basis_.rows() == b.basis_.rows();
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

private:
    EchelonBasis basis_;
};

// Quotient of k^ambient by a kernel subspace. Canonical coset representative:
// zero at every kernel pivot column; the non-pivot columns are the section.
class QuotientSpace {
public:
    QuotientSpace() = default;
    QuotientSpace(int ambient, Subspace kernel) : ambient_(ambient), kernel_(std::move(kernel)) {
        for (int c = 0; c < ambient_; ++c)
            if (!kernel_.echelon().is_pivot(c)) section_.push_back(c);
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return (int)section_.size(); }
    const Subspace& kernel() const { return kernel_; }
    const std::vector<int>& section() const { return section_; }

    Vec reduce(Vec v) const {
        if ((int)v.size() != ambient_) throw std::invalid_argument("quotient reduce: dimension mismatch");
        kernel_.reduce_inplace(v);
        return v;
    }

    // Embeds section coordinates back as the canonical ambient representative.
    Vec lift(const Vec& rep) const {
        Vec v(ambient_);
        for (size_t i = 0; i < section_.size(); ++i) v[section_[i]] = rep[i];
        return v;
    }

    Vec compress(const Vec& v) const {
        Vec r(section_.size());
        for (size_t i = 0; i < section_.size(); ++i) r[i] = v[section_[i]];
        return r;
    }

private:
    int ambient_ = 0;
    Subspace kernel_;
    std::vector<int> section_;
};

inline Vec quotient_reduce(const QuotientSpace& q, Vec v) { return q.reduce(std::move(v)); }

// Unique reduced row-echelon form; zero rows dropped.
inline Matrix rref(const Matrix& m) {
    EchelonBasis b(m.cols);
    for (int i = 0; i < m.rows; ++i) b.insert(to_sparse(m.row(i)));
    b.back_reduce();
    Matrix out(b.rank(), m.cols);
    for (int i = 0; i < b.rank(); ++i)
        for (const auto& [c, x] : b.rows()[i]) out.at(i, c) = x;
    return out;
}

struct LinearSolution {
    Vec particular;
    Subspace nullspace;
};

// Exact solve A x = b. Absence (inconsistency) is a value, not an error.
inline std::optional<LinearSolution> solve_linear(const Matrix& A, const Vec& b) {
    if ((int)b.size() != A.rows) throw std::invalid_argument("solve_linear: dimension mismatch");
    Matrix aug(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols) = b[i];
    }
    Matrix r = rref(aug);
    std::vector<int> pivot_col(r.rows);
    std::vector<int> row_of_col(A.cols, -1);
    for (int i = 0; i < r.rows; ++i) {
        int c = 0;
        while (c <= A.cols && r.at(i, c).is_zero()) ++c;
        if (c == A.cols) return std::nullopt;  // 0 = 1 row
        pivot_col[i] = c;
        row_of_col[c] = i;
    }
    Vec x(A.cols);
    for (int i = 0; i < r.rows; ++i) x[pivot_col[i]] = r.at(i, A.cols);
    EchelonBasis null(A.cols);
    for (int f = A.cols - 1; f >= 0; --f) {
        if (row_of_col[f] >= 0) continue;
        Vec v(A.cols);
        v[f] = Rational(1);
        for (int i = 0; i < r.rows; ++i)
            if (!r.at(i, f).is_zero()) v[pivot_col[i]] = -r.at(i, f);
        null.insert(to_sparse(v));
    }
    return LinearSolution{std::move(x), Subspace(std::move(null))};
}

}  // namespace algd
