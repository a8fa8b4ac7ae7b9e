#pragma once

#include "algd/rtensor.hpp"

#include <memory>

namespace algd {

// Left bialgebroid bundle: context (H, R, alpha, beta) plus the coproduct
// lift and the counit. Coproduct columns are kept canonical modulo the
// kernel, so structure matrices compare bit-exactly across twist round
// trips. Verification is explicit via check_bialgebroid.
struct BialgebroidInstance {
    CtxPtr ctx;
    Matrix delta;    // n^2 x n, column j = canonical lift of Delta(b_j)
    Matrix epsilon;  // dimR x n

    std::vector<SparseRow> delta_cols;  // sparse view of delta columns

    const SparseRow& dcol(int j) const { return delta_cols[j]; }

    Vec delta_of(const Vec& h) const {
        Vec out((size_t)ctx->n2());
        for (int j = 0; j < ctx->n(); ++j) {
            if (h[j].is_zero()) continue;
            for (const auto& [c, x] : delta_cols[j]) out[c] += h[j] * x;
        }
        return out;
    }

    Vec eps_of(const Vec& h) const { return epsilon.apply(h); }

    // h |> r = eps(h * alpha(r))
    Vec act(const Vec& h, const Vec& r) const { return eps_of(ctx->H.mul(h, ctx->alpha.apply(r))); }
};

inline BialgebroidInstance make_bialgebroid(CtxPtr ctx, Matrix delta_lift, Matrix eps) {
    if (delta_lift.rows != ctx->n2() || delta_lift.cols != ctx->n())
        throw std::invalid_argument("bialgebroid: coproduct lift has wrong shape");
    if (eps.rows != ctx->R.dim || eps.cols != ctx->n())
        throw std::invalid_argument("bialgebroid: counit has wrong shape");
    BialgebroidInstance b;
    for (int j = 0; j < ctx->n(); ++j) delta_lift.set_col(j, ctx->reduce2(delta_lift.col(j)));
    b.delta = std::move(delta_lift);
    b.epsilon = std::move(eps);
    b.delta_cols.reserve(ctx->n());
    for (int j = 0; j < ctx->n(); ++j) b.delta_cols.push_back(to_sparse(b.delta.col(j)));
    b.ctx = std::move(ctx);
    return b;
}

inline Vec action(const BialgebroidInstance& b, const Vec& h, const Vec& r) { return b.act(h, r); }

namespace detail {
inline std::string bw(std::initializer_list<int> idx) {
    std::string s = "basis (";
    bool first = true;
    for (int i : idx) {
        if (!first) s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + ")";
}
}  // namespace detail

// Full axiom suite, exhaustive over bases. Failures are report entries with
// witness indices; no fail-fast, so corrupted instances get full diagnostics.
inline Report check_bialgebroid(const BialgebroidInstance& B) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n(), r = ctx.R.dim;

    // (a) coproduct is an R-bimodule map:
    //     Delta(alpha(a) beta(b) h) = alpha(a) h1 (x) beta(b) h2
    {
        bool ok = true;
        std::string w;
        for (int a = 0; a < r && ok; ++a)
            for (int b = 0; b < r && ok; ++b) {
                Vec ab = ctx.H.mul(ctx.alpha_col(a), ctx.beta_col(b));
                Vec mult2 = ctx.outer2(ctx.alpha_col(a), ctx.beta_col(b));
                for (int h = 0; h < n && ok; ++h) {
                    Vec lhs = ctx.reduce2(B.delta_of(ctx.H.mul(ab, unit_vec(n, h))));
                    Vec rhs = ctx.reduce2(ctx.mul2(mult2, to_dense(B.dcol(h), ctx.n2())));
                    if (lhs != rhs) {
                        ok = false;
                        w = detail::bw({a, b, h});
                    }
                }
            }
        rep.add("delta_bimodule_map", ok, w);
    }

    // (b) coassociativity in the triple quotient
    {
        bool ok = true;
        std::string w;
        for (int h = 0; h < n && ok; ++h) {
            Vec lhs((size_t)ctx.n3()), rhs((size_t)ctx.n3());
            for (const auto& [c, x] : B.dcol(h)) {
                int i = c / n, j = c % n;
                for (const auto& [c2, y] : B.dcol(i)) lhs[c2 * n + j] += x * y;
                for (const auto& [c2, y] : B.dcol(j)) rhs[i * n * n + c2] += x * y;
            }
            if (ctx.reduce3(std::move(lhs)) != ctx.reduce3(std::move(rhs))) {
                ok = false;
                w = detail::bw({h});
            }
        }
        rep.add("coassociativity", ok, w);
    }

    // (c) counit axioms: alpha(eps(h1)) h2 = h = beta(eps(h2)) h1
    {
        bool okl = true, okr = true;
        std::string wl, wr;
        for (int h = 0; h < n; ++h) {
            Vec left(n), right(n);
            for (const auto& [c, x] : B.dcol(h)) {
                int i = c / n, j = c % n;
                axpy(left, x, ctx.H.mul(ctx.alpha.apply(B.eps_of(unit_vec(n, i))), unit_vec(n, j)));
                axpy(right, x, ctx.H.mul(ctx.beta.apply(B.eps_of(unit_vec(n, j))), unit_vec(n, i)));
            }
            if (okl && left != unit_vec(n, h)) {
                okl = false;
                wl = detail::bw({h});
            }
            if (okr && right != unit_vec(n, h)) {
                okr = false;
                wr = detail::bw({h});
            }
        }
        rep.add("counit_left", okl, wl);
        rep.add("counit_right", okr, wr);
    }

    // (d) counit relations: eps(alpha(a)h) = a eps(h), eps(beta(a)h) = eps(h) a,
    //     eps o alpha = id = eps o beta
    {
        bool ok = true;
        std::string w;
        for (int a = 0; a < r && ok; ++a)
            for (int h = 0; h < n && ok; ++h) {
                Vec eh = B.eps_of(unit_vec(n, h));
                if (B.eps_of(ctx.H.mul(ctx.alpha_col(a), unit_vec(n, h))) !=
                        ctx.R.mul(unit_vec(r, a), eh) ||
                    B.eps_of(ctx.H.mul(ctx.beta_col(a), unit_vec(n, h))) !=
                        ctx.R.mul(eh, unit_vec(r, a))) {
                    ok = false;
                    w = detail::bw({a, h});
                }
            }
        rep.add("epsilon_bilinear", ok, w);
        bool sec = true;
        for (int a = 0; a < r && sec; ++a)
            if (B.eps_of(ctx.alpha_col(a)) != unit_vec(r, a) || B.eps_of(ctx.beta_col(a)) != unit_vec(r, a))
                sec = false;
        rep.add("epsilon_section", sec);
    }

    // (e) weak multiplicativity: eps(gh) = eps(g alpha(eps(h)))
    {
        bool ok = true;
        std::string w;
        for (int g = 0; g < n && ok; ++g)
            for (int h = 0; h < n && ok; ++h) {
                Vec lhs = B.eps_of(ctx.H.mul(unit_vec(n, g), unit_vec(n, h)));
                Vec rhs = B.eps_of(
                    ctx.H.mul(unit_vec(n, g), ctx.alpha.apply(B.eps_of(unit_vec(n, h)))));
                if (lhs != rhs) {
                    ok = false;
                    w = detail::bw({g, h});
                }
            }
        rep.add("weak_multiplicativity", ok, w);
    }

    // (f) Takeuchi: Delta(h) I_R inside I_R, on the kernel's RREF basis
    {
        bool ok = true;
        std::string w;
        for (int h = 0; h < n && ok; ++h) {
            Vec dh = to_dense(B.dcol(h), ctx.n2());
            for (size_t ui = 0; ui < ctx.I2().rows().size() && ok; ++ui) {
                Vec ku = to_dense(ctx.I2().rows()[ui], ctx.n2());
                if (!ctx.in_I2(ctx.mul2(dh, ku))) {
                    ok = false;
                    w = detail::bw({h}) + " kernel row " + std::to_string(ui);
                }
            }
        }
        rep.add("takeuchi", ok, w);
    }

    // (g) h (x) (k (x)_R l) -> h1 k (x)_R h2 l is a unital action; checked on
    //     the canonical basis of the quotient, which spans it
    {
        Vec d1 = B.delta_of(ctx.unitH);
        bool unital = true;
        std::string wu;
        for (size_t s = 0; s < ctx.Q2.section().size() && unital; ++s) {
            Vec rep2 = unit_vec(ctx.n2(), ctx.Q2.section()[s]);
            if (ctx.reduce2(ctx.mul2(d1, rep2)) != rep2) {
                unital = false;
                wu = "quotient basis " + std::to_string(s);
            }
        }
        rep.add("action_unital", unital, wu);

        bool assoc = true;
        std::string wa;
        for (int g = 0; g < n && assoc; ++g)
            for (int h = 0; h < n && assoc; ++h) {
                Vec dgh = B.delta_of(ctx.H.mul(unit_vec(n, g), unit_vec(n, h)));
                Vec dg = to_dense(B.dcol(g), ctx.n2()), dh = to_dense(B.dcol(h), ctx.n2());
                for (size_t s = 0; s < ctx.Q2.section().size() && assoc; ++s) {
                    Vec rep2 = unit_vec(ctx.n2(), ctx.Q2.section()[s]);
                    Vec lhs = ctx.reduce2(ctx.mul2(dgh, rep2));
                    Vec rhs = ctx.reduce2(ctx.mul2(dg, ctx.mul2(dh, rep2)));
                    if (lhs != rhs) {
                        assoc = false;
                        wa = detail::bw({g, h}) + " quotient basis " + std::to_string(s);
                    }
                }
            }
        rep.add("action_associative", assoc, wa);
    }

    return rep;
}

// h alpha(r) = alpha(h1 |> r) h2  and  h beta(r) = beta(h2 |> r) h1
inline Report check_lemma_halphar(const BialgebroidInstance& B) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n(), r = ctx.R.dim;
    bool oka = true, okb = true;
    std::string wa, wb;
    for (int h = 0; h < n; ++h)
        for (int a = 0; a < r; ++a) {
            Vec er = unit_vec(r, a);
            Vec lhs_a = ctx.H.mul(unit_vec(n, h), ctx.alpha_col(a));
            Vec lhs_b = ctx.H.mul(unit_vec(n, h), ctx.beta_col(a));
            Vec rhs_a(n), rhs_b(n);
            for (const auto& [c, x] : B.dcol(h)) {
                int i = c / n, j = c % n;
                axpy(rhs_a, x, ctx.H.mul(ctx.alpha.apply(B.act(unit_vec(n, i), er)), unit_vec(n, j)));
                axpy(rhs_b, x, ctx.H.mul(ctx.beta.apply(B.act(unit_vec(n, j), er)), unit_vec(n, i)));
            }
            if (oka && lhs_a != rhs_a) {
                oka = false;
                wa = detail::bw({h, a});
            }
            if (okb && lhs_b != rhs_b) {
                okb = false;
                wb = detail::bw({h, a});
            }
        }
    rep.add("absorb_alpha", oka, wa);
    rep.add("absorb_beta", okb, wb);
    return rep;
}

}  // namespace algd
