#pragma once

#include "algd/algebra.hpp"
#include "algd/linalg.hpp"
#include "algd/report.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace algd {

struct CommutationFailure : std::runtime_error {
    int r, s;
    CommutationFailure(int r_, int s_)
        : std::runtime_error("source/target images do not commute at base pair (" + std::to_string(r_) +
                             "," + std::to_string(s_) + ")"),
          r(r_), s(s_) {}
};

struct IllDefined : std::runtime_error {
    std::string where;
    Vec witness;
    IllDefined(std::string where_, Vec witness_)
        : std::runtime_error("ill-defined operation: " + where_), where(std::move(where_)),
          witness(std::move(witness_)) {}
};

// The tensor square H (x)_R H and cube as explicit quotients of the k-tensor
// powers by the relator span {beta(r)x (x) y - x (x) alpha(r)y} and its two
// leg embeddings. `side` selects on which side the structure-map images
// multiply when forming relators: `left` is the standard orientation, `right`
// arises for the flipped/opposite context.
class TensorContext {
public:
    enum class Side { left, right };

    AlgebraPresentation H, R;
    Matrix alpha, beta;  // dimH x dimR
    Side side = Side::left;

    int n() const { return H.dim; }
    int n2() const { return H.dim * H.dim; }
    int n3() const { return H.dim * H.dim * H.dim; }
    int idx2(int i, int j) const { return i * H.dim + j; }
    int idx3(int i, int j, int k) const { return (i * H.dim + j) * H.dim + k; }

    Vec unitH;  // 1_H
    Vec unit2;  // 1 (x) 1

    const Subspace& I2() const { return Q2.kernel(); }
    const QuotientSpace& quotient2() const { return Q2; }
    int dim2() const { return Q2.dim(); }
    int dim3() const { return dim3_; }
    const std::vector<int>& section3() const { return section3_; }

    Vec alpha_col(int r) const { return alpha.col(r); }
    Vec beta_col(int r) const { return beta.col(r); }

    // factorwise product in H (x)_k H
    Vec mul2(const Vec& x, const Vec& y) const {
        const int d = n();
        Vec out((size_t)n2());
        for (int i1 = 0; i1 < d; ++i1)
            for (int j1 = 0; j1 < d; ++j1) {
                const Rational& xv = x[idx2(i1, j1)];
                if (xv.is_zero()) continue;
                for (int i2 = 0; i2 < d; ++i2)
                    for (int j2 = 0; j2 < d; ++j2) {
                        const Rational& yv = y[idx2(i2, j2)];
                        if (yv.is_zero()) continue;
                        Rational c = xv * yv;
                        for (const auto& [k, a] : H.prod(i1, i2))
                            for (const auto& [l, b] : H.prod(j1, j2)) out[idx2(k, l)] += c * a * b;
                    }
            }
        return out;
    }

    Vec mul3(const Vec& x, const Vec& y) const {
        const int d = n();
        Vec out((size_t)n3());
        for (int g1 = 0; g1 < n3(); ++g1) {
            if (x[g1].is_zero()) continue;
            int i1 = g1 / (d * d), j1 = (g1 / d) % d, k1 = g1 % d;
            for (int g2 = 0; g2 < n3(); ++g2) {
                if (y[g2].is_zero()) continue;
                int i2 = g2 / (d * d), j2 = (g2 / d) % d, k2 = g2 % d;
                Rational c = x[g1] * y[g2];
                for (const auto& [p, a] : H.prod(i1, i2))
                    for (const auto& [q, b] : H.prod(j1, j2))
                        for (const auto& [s, e] : H.prod(k1, k2)) out[idx3(p, q, s)] += c * a * b * e;
            }
        }
        return out;
    }

    Vec outer2(const Vec& x, const Vec& y) const {
        Vec out((size_t)n2());
        for (int i = 0; i < n(); ++i) {
            if (x[i].is_zero()) continue;
            for (int j = 0; j < n(); ++j)
                if (!y[j].is_zero()) out[idx2(i, j)] = x[i] * y[j];
        }
        return out;
    }

    Vec reduce2(Vec v) const { return Q2.reduce(std::move(v)); }
    bool in_I2(const Vec& v) const { return I2().contains(v); }

    // Canonical representative modulo the cube kernel. Stage 1 clears the
    // relator pivots of one leg pair sliced over the remaining leg; stage 2
    // clears the echelon rows spanning the image of the other family. The
    // combined pivot set is the RREF pivot set of the full relator span, so
    // the result is the canonical zero-the-pivots representative and does not
    // depend on the stage orientation.
    Vec reduce3(Vec v) const {
        stage1_sweep(v);
        const EchelonBasis& K = K3_;
        for (int g = 0; g < n3(); ++g) {
            if (v[g].is_zero()) continue;
            int ri = K.row_at_pivot(g);
            if (ri < 0) continue;
            Rational f = v[g];
            for (const auto& [col, x] : K.rows()[ri]) v[col] -= f * x;
        }
        return v;
    }

    bool in_I3(const Vec& v) const { return is_zero(reduce3(v)); }

    // Spanning rows of the cube kernel, generated from the RREF basis of I2
    // embedded into legs (1,2) and legs (2,3); same span as the raw relator
    // families. Callback receives (row, family, index).
    void for_each_I3_row(const std::function<void(const SparseRow&, const std::string&)>& f) const {
        const int d = n();
        const auto& rows = I2().rows();
        for (size_t ui = 0; ui < rows.size(); ++ui)
            for (int k = 0; k < d; ++k) {
                SparseRow row;
                row.reserve(rows[ui].size());
                for (const auto& [c2, x] : rows[ui]) row.emplace_back(c2 * d + k, x);
                f(row, "legs12 u" + std::to_string(ui) + " k" + std::to_string(k));
            }
        for (int i = 0; i < d; ++i)
            for (size_t ui = 0; ui < rows.size(); ++ui) {
                SparseRow row;
                row.reserve(rows[ui].size());
                for (const auto& [c2, x] : rows[ui]) row.emplace_back(i * d * d + c2, x);
                f(row, "legs23 i" + std::to_string(i) + " u" + std::to_string(ui));
            }
    }

    QuotientSpace Q2;

private:
    friend std::shared_ptr<const TensorContext> build_context_impl(AlgebraPresentation, AlgebraPresentation,
                                                                   Matrix, Matrix, TensorContext::Side, bool);

    bool legs12_first_ = true;
    EchelonBasis K3_{0};
    int dim3_ = 0;
    std::vector<int> section3_;

    void stage1_sweep(Vec& v) const {
        const int d = n();
        const EchelonBasis& e = I2().echelon();
        if (legs12_first_) {
            for (int c2 = 0; c2 < n2(); ++c2) {
                int ri = e.row_at_pivot(c2);
                if (ri < 0) continue;
                for (int k = 0; k < d; ++k) {
                    Rational f = v[c2 * d + k];
                    if (f.is_zero()) continue;
                    for (const auto& [col, x] : e.rows()[ri]) v[col * d + k] -= f * x;
                }
            }
        } else {
            for (int i = 0; i < d; ++i)
                for (int c2 = 0; c2 < n2(); ++c2) {
                    int ri = e.row_at_pivot(c2);
                    if (ri < 0) continue;
                    Rational f = v[i * d * d + c2];
                    if (f.is_zero()) continue;
                    for (const auto& [col, x] : e.rows()[ri]) v[i * d * d + col] -= f * x;
                }
        }
    }
};

using CtxPtr = std::shared_ptr<const TensorContext>;

inline std::shared_ptr<const TensorContext> build_context_impl(AlgebraPresentation H, AlgebraPresentation R,
                                                               Matrix alpha, Matrix beta,
                                                               TensorContext::Side side, bool legs12_first) {
    auto ctx = std::make_shared<TensorContext>();
    ctx->H = std::move(H);
    ctx->R = std::move(R);
    ctx->alpha = std::move(alpha);
    ctx->beta = std::move(beta);
    ctx->side = side;
    const int d = ctx->n();
    ctx->unitH = ctx->H.unit;
    ctx->unit2 = ctx->outer2(ctx->unitH, ctx->unitH);

    for (int r = 0; r < ctx->R.dim; ++r)
        for (int s = 0; s < ctx->R.dim; ++s) {
            Vec a = ctx->alpha_col(r), b = ctx->beta_col(s);
            if (ctx->H.mul(a, b) != ctx->H.mul(b, a)) throw CommutationFailure(r, s);
        }

    // I2 relators: images multiply on `side` of the leg vectors
    EchelonBasis basis(ctx->n2());
    Vec tmp((size_t)ctx->n2());
    for (int r = 0; r < ctx->R.dim; ++r) {
        Vec bcol = ctx->beta_col(r), acol = ctx->alpha_col(r);
        std::vector<Vec> bmul(d), amul(d);
        for (int x = 0; x < d; ++x) {
            Vec ex = unit_vec(d, x);
            bmul[x] = side == TensorContext::Side::left ? ctx->H.mul(bcol, ex) : ctx->H.mul(ex, bcol);
            amul[x] = side == TensorContext::Side::left ? ctx->H.mul(acol, ex) : ctx->H.mul(ex, acol);
        }
        for (int x = 0; x < d; ++x)
            for (int y = 0; y < d; ++y) {
                std::fill(tmp.begin(), tmp.end(), Rational());
                for (int k = 0; k < d; ++k)
                    if (!bmul[x][k].is_zero()) tmp[ctx->idx2(k, y)] += bmul[x][k];
                for (int l = 0; l < d; ++l)
                    if (!amul[y][l].is_zero()) tmp[ctx->idx2(x, l)] -= amul[y][l];
                basis.insert(to_sparse(tmp));
            }
    }
    ctx->Q2 = QuotientSpace(ctx->n2(), Subspace(std::move(basis)));

    // cube kernel, staged
    ctx->legs12_first_ = legs12_first;
    ctx->K3_ = EchelonBasis(ctx->n3());
    const auto& rows = ctx->I2().rows();
    Vec buf((size_t)ctx->n3());
    for (int i = 0; i < d; ++i)
        for (const auto& u : rows) {
            std::fill(buf.begin(), buf.end(), Rational());
            if (legs12_first) {
                for (const auto& [c2, x] : u) buf[i * d * d + c2] = x;  // e_i (x) u
            } else {
                for (const auto& [c2, x] : u) buf[c2 * d + i] = x;  // u (x) e_i
            }
            ctx->stage1_sweep(buf);
            ctx->K3_.insert(to_sparse(buf));
        }
    ctx->dim3_ = ctx->n3() - d * ctx->I2().dim() - ctx->K3_.rank();
    for (int g = 0; g < ctx->n3(); ++g) {
        int c2 = legs12_first ? g / d : g % (d * d);
        if (ctx->I2().echelon().is_pivot(c2)) continue;
        if (ctx->K3_.is_pivot(g)) continue;
        ctx->section3_.push_back(g);
    }
    return ctx;
}

// Standard orientation: alpha and beta images multiply from the left.
// pre: images commute (checked); alpha, beta valid algebra maps (caller's
// contract, checked separately by the instance loaders).
inline CtxPtr build_context(AlgebraPresentation H, AlgebraPresentation R, Matrix alpha, Matrix beta) {
    return build_context_impl(std::move(H), std::move(R), std::move(alpha), std::move(beta),
                              TensorContext::Side::left, true);
}

inline CtxPtr build_context_mirror(AlgebraPresentation H, AlgebraPresentation R, Matrix alpha, Matrix beta) {
    return build_context_impl(std::move(H), std::move(R), std::move(alpha), std::move(beta),
                              TensorContext::Side::left, false);
}

// Context for the flipped tensor factors: same underlying vector spaces with
// the opposite products, structure maps swapped, images now multiplying from
// the right. Its kernel is exactly the flip of the original kernel.
inline CtxPtr opposite_context(const TensorContext& ctx) {
    return build_context_impl(opposite(ctx.H), opposite(ctx.R), ctx.beta, ctx.alpha,
                              ctx.side == TensorContext::Side::left ? TensorContext::Side::right
                                                                    : TensorContext::Side::left,
                              true);
}

// Element of H (x)_R H (arity 2) or the triple tensor (arity 3), stored as
// the canonical lift; coset equality is lift equality.
struct TensorCoset {
    CtxPtr ctx;
    int arity = 2;
    Vec lift;

    friend bool operator==(const TensorCoset& a, const TensorCoset& b) {
        return a.arity == b.arity && a.lift == b.lift;
    }
    friend bool operator!=(const TensorCoset& a, const TensorCoset& b) { return !(a == b); }
};

inline TensorCoset make_coset(CtxPtr ctx, int arity, Vec lift) {
    if (arity == 2) {
        if ((int)lift.size() != ctx->n2()) throw std::invalid_argument("coset lift: wrong size");
        Vec red = ctx->reduce2(std::move(lift));
        return TensorCoset{std::move(ctx), 2, std::move(red)};
    }
    if (arity == 3) {
        if ((int)lift.size() != ctx->n3()) throw std::invalid_argument("coset lift: wrong size");
        Vec red = ctx->reduce3(std::move(lift));
        return TensorCoset{std::move(ctx), 3, std::move(red)};
    }
    throw std::invalid_argument("coset arity must be 2 or 3");
}

// Class of m * lift(t) under factorwise multiplication. pre: m stabilizes the
// kernel (Takeuchi elements and coproduct images qualify); with validate set
// this is checked on the spanning set and IllDefined carries a witness.
inline TensorCoset factorwise_left_multiply(const TensorCoset& t, const Vec& m, bool validate = false) {
    if (t.arity != 2) throw std::invalid_argument("factorwise_left_multiply: arity 2 only");
    const TensorContext& ctx = *t.ctx;
    if (validate)
        for (const auto& u : ctx.I2().rows()) {
            Vec w = ctx.mul2(m, to_dense(u, ctx.n2()));
            if (!ctx.in_I2(w)) throw IllDefined("factorwise multiplier does not stabilize the kernel",
                                                to_dense(u, ctx.n2()));
        }
    return make_coset(t.ctx, 2, ctx.mul2(m, t.lift));
}

// Evaluates `expr` on the canonical lift and on the lift shifted by every
// spanning vector of the relevant kernel; passes iff all results agree.
// `extra_samples` adds deterministic pseudo-random kernel combinations.
inline Report check_lift_independence(const std::function<Vec(const Vec&)>& expr, const TensorCoset& t,
                                      int extra_samples = 0, unsigned long long seed = 0) {
    Report rep;
    const TensorContext& ctx = *t.ctx;
    Vec base = expr(t.lift);
    bool ok = true;
    std::string witness;
    std::vector<SparseRow> spanning;
    if (t.arity == 2) {
        for (const auto& u : ctx.I2().rows()) spanning.push_back(u);
    } else {
        ctx.for_each_I3_row([&](const SparseRow& r, const std::string&) { spanning.push_back(r); });
    }
    for (size_t i = 0; i < spanning.size() && ok; ++i) {
        Vec shifted = t.lift;
        for (const auto& [c, x] : spanning[i]) shifted[c] += x;
        if (expr(shifted) != base) {
            ok = false;
            witness = "kernel spanning vector " + std::to_string(i);
        }
    }
    unsigned long long state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    for (int s = 0; s < extra_samples && ok; ++s) {
        Vec shifted = t.lift;
        for (const auto& row : spanning) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            long long c = (long long)((state >> 33) % 5) - 2;  // in [-2, 2]
            if (c == 0) continue;
            for (const auto& [col, x] : row) shifted[col] += Rational(c) * x;
        }
        if (expr(shifted) != base) {
            ok = false;
            witness = "random kernel combination, sample " + std::to_string(s);
        }
    }
    rep.add("lift_independence", ok, witness);
    return rep;
}

inline TensorCoset flip_to_opposite(const TensorCoset& t, CtxPtr op_ctx) {
    if (t.arity != 2) throw std::invalid_argument("flip_to_opposite: arity 2 only");
    const int d = t.ctx->n();
    Vec w((size_t)t.ctx->n2());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) w[t.ctx->idx2(j, i)] = t.lift[t.ctx->idx2(i, j)];
    return make_coset(std::move(op_ctx), 2, std::move(w));
}

inline TensorCoset flip_to_opposite(const TensorCoset& t) { return flip_to_opposite(t, opposite_context(*t.ctx)); }

}  // namespace algd
