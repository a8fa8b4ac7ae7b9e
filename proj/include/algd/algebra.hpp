#pragma once

#include "algd/linalg.hpp"
#include "algd/report.hpp"

#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace algd {

// Finite-dimensional unital associative algebra given by structure constants:
// b_i * b_j = sum_k c[i][j][k] b_k. Basis order is fixed by the input; all
// reports reference basis indices.
struct AlgebraPresentation {
    int dim = 0;
    Vec unit;
    std::vector<SparseRow> table;  // table[i*dim+j] = sparse product b_i*b_j

    const SparseRow& prod(int i, int j) const { return table[(size_t)i * dim + j]; }

    static AlgebraPresentation from_triples(int dim, Vec unit,
                                            const std::vector<std::tuple<int, int, int, Rational>>& mu) {
        AlgebraPresentation a;
        a.dim = dim;
        a.unit = std::move(unit);
        std::vector<Vec> dense((size_t)dim * dim, Vec(dim));
        for (const auto& [i, j, k, c] : mu) {
            if (i < 0 || i >= dim || j < 0 || j >= dim || k < 0 || k >= dim)
                throw std::out_of_range("structure constant index out of range");
            dense[(size_t)i * dim + j][k] += c;
        }
        a.table.reserve(dense.size());
        for (auto& v : dense) a.table.push_back(to_sparse(v));
        return a;
    }

    Vec mul(const Vec& x, const Vec& y) const {
        if ((int)x.size() != dim || (int)y.size() != dim)
            throw std::invalid_argument("algebra multiply: dimension mismatch");
        Vec out(dim);
        for (int i = 0; i < dim; ++i) {
            if (x[i].is_zero()) continue;
            for (int j = 0; j < dim; ++j) {
                if (y[j].is_zero()) continue;
                Rational c = x[i] * y[j];
                for (const auto& [k, v] : prod(i, j)) out[k] += c * v;
            }
        }
        return out;
    }

    Matrix left_mult(const Vec& x) const {
        Matrix m(dim, dim);
        for (int j = 0; j < dim; ++j) m.set_col(j, mul(x, unit_vec(dim, j)));
        return m;
    }
    Matrix right_mult(const Vec& x) const {
        Matrix m(dim, dim);
        for (int j = 0; j < dim; ++j) m.set_col(j, mul(unit_vec(dim, j), x));
        return m;
    }

    // Exhaustive associativity and two-sided unit check over basis triples.
    Report validate() const {
        Report rep;
        bool assoc = true;
        std::string w;
        for (int i = 0; i < dim && assoc; ++i)
            for (int j = 0; j < dim && assoc; ++j)
                for (int k = 0; k < dim && assoc; ++k) {
                    Vec l = mul(mul(unit_vec(dim, i), unit_vec(dim, j)), unit_vec(dim, k));
                    Vec r = mul(unit_vec(dim, i), mul(unit_vec(dim, j), unit_vec(dim, k)));
                    if (l != r) {
                        assoc = false;
                        w = "basis triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) + ")";
                    }
                }
        rep.add("associativity", assoc, w);
        bool unital = true;
        std::string wu;
        for (int i = 0; i < dim && unital; ++i) {
            Vec e = unit_vec(dim, i);
            if (mul(unit, e) != e || mul(e, unit) != e) {
                unital = false;
                wu = "basis " + std::to_string(i);
            }
        }
        rep.add("unitality", unital, wu);
        return rep;
    }
};

inline Vec multiply(const AlgebraPresentation& a, const Vec& x, const Vec& y) { return a.mul(x, y); }

inline AlgebraPresentation opposite(const AlgebraPresentation& a) {
    AlgebraPresentation o;
    o.dim = a.dim;
    o.unit = a.unit;
    o.table.resize(a.table.size());
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) o.table[(size_t)i * a.dim + j] = a.prod(j, i);
    return o;
}

// Two-sided inverse, or absence. In a finite-dimensional associative algebra
// a one-sided inverse is automatically two-sided and unique; both sides are
// verified anyway so corrupted presentations cannot smuggle one through.
inline std::optional<Vec> invert_element(const AlgebraPresentation& a, const Vec& v) {
    auto sol = solve_linear(a.left_mult(v), a.unit);
    if (!sol) return std::nullopt;
    const Vec& w = sol->particular;
    if (a.mul(v, w) != a.unit || a.mul(w, v) != a.unit) return std::nullopt;
    return w;
}

struct AlgebraMap {
    AlgebraPresentation source;
    AlgebraPresentation target;
    Matrix matrix;  // target.dim x source.dim

    Vec apply(const Vec& x) const { return matrix.apply(x); }
};

// Multiplicative on all basis pairs and unital; names the first failing pair.
inline Report check_algebra_map(const AlgebraMap& f) {
    Report rep;
    bool mult = true;
    std::string w;
    for (int i = 0; i < f.source.dim && mult; ++i)
        for (int j = 0; j < f.source.dim && mult; ++j) {
            Vec lhs = f.apply(f.source.mul(unit_vec(f.source.dim, i), unit_vec(f.source.dim, j)));
            Vec rhs = f.target.mul(f.apply(unit_vec(f.source.dim, i)), f.apply(unit_vec(f.source.dim, j)));
            if (lhs != rhs) {
                mult = false;
                w = "basis pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
        }
    rep.add("multiplicative", mult, w);
    rep.add("unital", f.apply(f.source.unit) == f.target.unit);
    return rep;
}

}  // namespace algd
