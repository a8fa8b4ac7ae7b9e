#pragma once

#include "algd/twist.hpp"

#include <algorithm>

namespace algd {

struct GroupTable {
    int order = 0;
    std::vector<std::vector<int>> product;  // product[i][j] = index of g_i g_j
    int identity = -1;
    std::vector<int> inverse;

    static GroupTable from_product(std::vector<std::vector<int>> prod) {
        GroupTable g;
        g.order = (int)prod.size();
        g.product = std::move(prod);
        for (int e = 0; e < g.order; ++e) {
            bool id = true;
            for (int i = 0; i < g.order; ++i)
                if (g.product[e][i] != i || g.product[i][e] != i) id = false;
            if (id) g.identity = e;
        }
        if (g.identity < 0) throw std::invalid_argument("group table: no identity");
        g.inverse.assign(g.order, -1);
        for (int i = 0; i < g.order; ++i)
            for (int j = 0; j < g.order; ++j)
                if (g.product[i][j] == g.identity && g.product[j][i] == g.identity) g.inverse[i] = j;
        for (int i = 0; i < g.order; ++i)
            if (g.inverse[i] < 0) throw std::invalid_argument("group table: missing inverse");
        for (int i = 0; i < g.order; ++i)
            for (int j = 0; j < g.order; ++j)
                for (int k = 0; k < g.order; ++k)
                    if (g.product[g.product[i][j]][k] != g.product[i][g.product[j][k]])
                        throw std::invalid_argument("group table: not associative");
        return g;
    }

    bool abelian() const {
        for (int i = 0; i < order; ++i)
            for (int j = 0; j < order; ++j)
                if (product[i][j] != product[j][i]) return false;
        return true;
    }
};

struct GroupoidTable {
    int objects = 0;
    std::vector<std::pair<int, int>> morphisms;  // (source, target)
    std::vector<std::vector<int>> product;       // product[i][j] = index of f_i o f_j, -1 undefined
    std::vector<int> inverse;
    std::vector<int> identity_of;  // identity morphism per object

    int source(int f) const { return morphisms[f].first; }
    int target(int f) const { return morphisms[f].second; }

    void validate() const {
        int m = (int)morphisms.size();
        if ((int)product.size() != m) throw std::invalid_argument("groupoid: bad product table");
        if ((int)identity_of.size() != objects) throw std::invalid_argument("groupoid: bad identity list");
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                bool composable = source(i) == target(j);
                if (composable != (product[i][j] >= 0))
                    throw std::invalid_argument("groupoid: composability mismatch");
                if (composable) {
                    int k = product[i][j];
                    if (source(k) != source(j) || target(k) != target(i))
                        throw std::invalid_argument("groupoid: product endpoints wrong");
                }
            }
        for (int x = 0; x < objects; ++x) {
            int e = identity_of[x];
            if (source(e) != x || target(e) != x) throw std::invalid_argument("groupoid: bad identity");
        }
        for (int f = 0; f < m; ++f) {
            int g = inverse[f];
            if (product[f][g] != identity_of[target(f)] || product[g][f] != identity_of[source(f)])
                throw std::invalid_argument("groupoid: bad inverse");
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) {
                    if (product[j][k] < 0) continue;
                    if (product[i][j] < 0) {
                        if (product[i][product[j][k]] >= 0)
                            throw std::invalid_argument("groupoid: associativity domain mismatch");
                        continue;
                    }
                    if (product[i][product[j][k]] != product[product[i][j]][k])
                        throw std::invalid_argument("groupoid: not associative");
                }
    }

    // indiscrete groupoid: one morphism x -> y for every ordered pair
    static GroupoidTable pair_groupoid(int objects) {
        GroupoidTable g;
        g.objects = objects;
        for (int t = 0; t < objects; ++t)
            for (int s = 0; s < objects; ++s) g.morphisms.emplace_back(s, t);
        auto idx = [&](int s, int t) { return t * objects + s; };
        int m = (int)g.morphisms.size();
        g.product.assign(m, std::vector<int>(m, -1));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (g.source(i) == g.target(j)) g.product[i][j] = idx(g.source(j), g.target(i));
        g.inverse.resize(m);
        for (int i = 0; i < m; ++i) g.inverse[i] = idx(g.target(i), g.source(i));
        g.identity_of.resize(objects);
        for (int x = 0; x < objects; ++x) g.identity_of[x] = idx(x, x);
        g.validate();
        return g;
    }

    // disjoint union of copies of one group, one object per copy
    static GroupoidTable disjoint_union(const GroupTable& grp, int copies) {
        GroupoidTable g;
        g.objects = copies;
        int m = copies * grp.order;
        auto idx = [&](int obj, int el) { return obj * grp.order + el; };
        for (int o = 0; o < copies; ++o)
            for (int e = 0; e < grp.order; ++e) g.morphisms.emplace_back(o, o);
        g.product.assign(m, std::vector<int>(m, -1));
        for (int o = 0; o < copies; ++o)
            for (int e = 0; e < grp.order; ++e)
                for (int f = 0; f < grp.order; ++f)
                    g.product[idx(o, e)][idx(o, f)] = idx(o, grp.product[e][f]);
        g.inverse.resize(m);
        g.identity_of.resize(copies);
        for (int o = 0; o < copies; ++o) {
            g.identity_of[o] = idx(o, grp.identity);
            for (int e = 0; e < grp.order; ++e) g.inverse[idx(o, e)] = idx(o, grp.inverse[e]);
        }
        g.validate();
        return g;
    }
};

struct HopfInstance {
    BialgebroidInstance B;
    AntipodePair S;
};

namespace detail {
inline AlgebraPresentation trivial_base() {
    return AlgebraPresentation::from_triples(1, Vec{Rational(1)}, {{0, 0, 0, Rational(1)}});
}
}  // namespace detail

// Group algebra as a Hopf algebra over the trivial base: Delta(g) = g (x) g,
// eps(g) = 1, S(g) = g^-1.
inline HopfInstance build_group_hopf(const GroupTable& g) {
    const int n = g.order;
    std::vector<std::tuple<int, int, int, Rational>> mu;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mu.emplace_back(i, j, g.product[i][j], Rational(1));
    AlgebraPresentation H = AlgebraPresentation::from_triples(n, unit_vec(n, g.identity), mu);
    AlgebraPresentation R = detail::trivial_base();
    Matrix alpha(n, 1), beta(n, 1);
    alpha.set_col(0, H.unit);
    beta.set_col(0, H.unit);
    CtxPtr ctx = build_context(std::move(H), std::move(R), std::move(alpha), std::move(beta));

    Matrix delta(ctx->n2(), n), eps(1, n);
    for (int i = 0; i < n; ++i) {
        delta.at(ctx->idx2(i, i), i) = Rational(1);
        eps.at(0, i) = Rational(1);
    }
    AntipodePair S;
    S.S = Matrix(n, n);
    for (int i = 0; i < n; ++i) S.S.at(g.inverse[i], i) = Rational(1);
    S.S_inv = S.S;
    return HopfInstance{make_bialgebroid(std::move(ctx), std::move(delta), std::move(eps)), std::move(S)};
}

// Rational character table of an abelian group: all homomorphisms into {±1},
// in lexicographic order of their value tuples. Over the rationals this is
// the full dual exactly when the group has exponent 2.
inline std::vector<std::vector<int>> rational_characters(const GroupTable& g) {
    std::vector<std::vector<int>> chars;
    std::vector<int> signs(g.order, 1);
    auto is_hom = [&]() {
        for (int i = 0; i < g.order; ++i)
            for (int j = 0; j < g.order; ++j)
                if (signs[g.product[i][j]] != signs[i] * signs[j]) return false;
        return true;
    };
    for (int mask = 0; mask < (1 << g.order); ++mask) {
        for (int i = 0; i < g.order; ++i) signs[i] = (mask >> i) & 1 ? -1 : 1;
        if (is_hom()) chars.push_back(signs);
    }
    std::sort(chars.begin(), chars.end());
    return chars;
}

struct NotAbelian : std::runtime_error {
    NotAbelian() : std::runtime_error("bicharacter cocycle: group is not abelian") {}
};
struct NotBicharacter : std::runtime_error {
    int i, j;
    NotBicharacter(int i_, int j_)
        : std::runtime_error("chi is not multiplicative at dual pair (" + std::to_string(i_) + "," +
                             std::to_string(j_) + ")"),
          i(i_), j(j_) {}
};

// F = sum chi(p,q) P_p (x) P_q over the dual-group projectors, expressed in
// the group basis. chi is indexed by the canonical character order.
inline Cocycle build_bicharacter_cocycle(const BialgebroidInstance& B, const GroupTable& g,
                                         const Matrix& chi) {
    if (!g.abelian()) throw NotAbelian();
    auto chars = rational_characters(g);
    const int m = (int)chars.size();
    if (m != g.order)
        throw std::runtime_error("bicharacter cocycle: rational dual is too small (group exponent > 2)");
    if (chi.rows != m || chi.cols != m) throw std::invalid_argument("chi has wrong shape");

    // dual product: pointwise multiplication of characters
    auto dual_mul = [&](int a, int b) {
        std::vector<int> prod(g.order);
        for (int x = 0; x < g.order; ++x) prod[x] = chars[a][x] * chars[b][x];
        auto it = std::lower_bound(chars.begin(), chars.end(), prod);
        return (int)(it - chars.begin());
    };
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int cdx = 0; cdx < m; ++cdx) {
                if (chi.at(dual_mul(a, b), cdx) != chi.at(a, cdx) * chi.at(b, cdx))
                    throw NotBicharacter(a, cdx);
                if (chi.at(cdx, dual_mul(a, b)) != chi.at(cdx, a) * chi.at(cdx, b))
                    throw NotBicharacter(cdx, a);
            }

    const int n = g.order;
    const TensorContext& ctx = *B.ctx;
    std::vector<Vec> proj(m, Vec(n));
    Rational inv_order = Rational(1, n);
    for (int p = 0; p < m; ++p)
        for (int x = 0; x < n; ++x) proj[p][x] = inv_order * Rational(chars[p][g.inverse[x]]);

    Vec F((size_t)ctx.n2()), Fbar((size_t)ctx.n2());
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            const Rational& w = chi.at(p, q);
            if (w.is_zero()) throw std::invalid_argument("chi has a zero entry");
            Vec pq = ctx.outer2(proj[p], proj[q]);
            axpy(F, w, pq);
            axpy(Fbar, w.inv(), pq);
        }
    return Cocycle{ctx.reduce2(std::move(F)), std::move(Fbar)};
}

// Groupoid algebra over the base of object idempotents: alpha = beta sends
// the idempotent of x to id_x, Delta(f) = f (x) f, eps(f) = target idempotent,
// S(f) = f^-1. The kernel is nonzero as soon as there are two objects.
inline HopfInstance build_groupoid_algebroid(const GroupoidTable& g) {
    g.validate();
    const int n = (int)g.morphisms.size();
    const int r = g.objects;
    std::vector<std::tuple<int, int, int, Rational>> mu;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (g.product[i][j] >= 0) mu.emplace_back(i, j, g.product[i][j], Rational(1));
    Vec unitH(n);
    for (int x = 0; x < r; ++x) unitH[g.identity_of[x]] = Rational(1);
    AlgebraPresentation H = AlgebraPresentation::from_triples(n, unitH, mu);

    std::vector<std::tuple<int, int, int, Rational>> muR;
    for (int x = 0; x < r; ++x) muR.emplace_back(x, x, x, Rational(1));
    AlgebraPresentation R = AlgebraPresentation::from_triples(r, Vec(r, Rational(1)), muR);

    Matrix alpha(n, r);
    for (int x = 0; x < r; ++x) alpha.at(g.identity_of[x], x) = Rational(1);
    Matrix beta = alpha;
    CtxPtr ctx = build_context(std::move(H), std::move(R), std::move(alpha), std::move(beta));

    Matrix delta(ctx->n2(), n), eps(r, n);
    for (int f = 0; f < n; ++f) {
        delta.at(ctx->idx2(f, f), f) = Rational(1);
        eps.at(g.target(f), f) = Rational(1);
    }
    AntipodePair S;
    S.S = Matrix(n, n);
    for (int f = 0; f < n; ++f) S.S.at(g.inverse[f], f) = Rational(1);
    S.S_inv = S.S;
    return HopfInstance{make_bialgebroid(std::move(ctx), std::move(delta), std::move(eps)), std::move(S)};
}

// Pair algebroid H = R (x) R^op over R: alpha(r) = r (x) 1, beta(r) = 1 (x) r,
// Delta(a (x) b) = (a (x) 1) (x)_R (1 (x) b), eps(a (x) b) = ab, the antipode
// swaps the legs. Exercises a genuinely noncommutative base.
inline HopfInstance build_pair_algebroid(const AlgebraPresentation& R) {
    const int r = R.dim;
    const int n = r * r;
    auto hx = [&](int i, int j) { return i * r + j; };
    std::vector<std::tuple<int, int, int, Rational>> mu;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                for (int l = 0; l < r; ++l)
                    for (const auto& [p, a] : R.prod(i, k))
                        for (const auto& [q, b] : R.prod(l, j))
                            mu.emplace_back(hx(i, j), hx(k, l), hx(p, q), a * b);
    Vec unitH(n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Rational v = R.unit[i] * R.unit[j];
            if (!v.is_zero()) unitH[hx(i, j)] = v;
        }
    AlgebraPresentation H = AlgebraPresentation::from_triples(n, unitH, mu);

    Matrix alpha(n, r), beta(n, r);
    for (int k = 0; k < r; ++k) {
        Vec ca(n), cb(n);
        for (int j = 0; j < r; ++j)
            if (!R.unit[j].is_zero()) {
                ca[hx(k, j)] += R.unit[j];
                cb[hx(j, k)] += R.unit[j];
            }
        alpha.set_col(k, ca);
        beta.set_col(k, cb);
    }
    CtxPtr ctx = build_context(H, R, std::move(alpha), std::move(beta));

    Matrix delta(ctx->n2(), n), eps(r, n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            int h = hx(i, j);
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) {
                    Rational v = R.unit[a] * R.unit[b];
                    if (!v.is_zero()) delta.at(ctx->idx2(hx(i, a), hx(b, j)), h) += v;
                }
            Vec e(r);
            for (const auto& [k, v] : R.prod(i, j)) e[k] = v;
            eps.set_col(h, e);
        }
    AntipodePair S;
    S.S = Matrix(n, n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) S.S.at(hx(j, i), hx(i, j)) = Rational(1);
    S.S_inv = S.S;
    return HopfInstance{make_bialgebroid(std::move(ctx), std::move(delta), std::move(eps)), std::move(S)};
}

inline GroupTable cyclic2() { return GroupTable::from_product({{0, 1}, {1, 0}}); }

inline GroupTable klein4() {
    // generators g1 = index 1, g2 = index 2, g1 g2 = index 3
    return GroupTable::from_product({{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}});
}

inline AlgebraPresentation group_algebra(const GroupTable& g) {
    std::vector<std::tuple<int, int, int, Rational>> mu;
    for (int i = 0; i < g.order; ++i)
        for (int j = 0; j < g.order; ++j) mu.emplace_back(i, j, g.product[i][j], Rational(1));
    return AlgebraPresentation::from_triples(g.order, unit_vec(g.order, g.identity), mu);
}

inline AlgebraPresentation matrix_algebra(int k) {
    // basis E_{ab} row-major
    auto e = [&](int a, int b) { return a * k + b; };
    std::vector<std::tuple<int, int, int, Rational>> mu;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int d = 0; d < k; ++d)
                    if (b == c) mu.emplace_back(e(a, b), e(c, d), e(a, d), Rational(1));
    Vec unit(k * k);
    for (int a = 0; a < k; ++a) unit[e(a, a)] = Rational(1);
    return AlgebraPresentation::from_triples(k * k, unit, mu);
}

}  // namespace algd
