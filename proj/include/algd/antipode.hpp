#pragma once

#include "algd/bialgebroid.hpp"

namespace algd {

struct AntipodePair {
    Matrix S;
    Matrix S_inv;
};

// Hopf axioms. Sub-checks exhaustively evaluated on bases and reduced in the
// tensor-square quotient:
//   invertibility and antihomomorphism of S,
//   (a) S o beta = alpha,
//   (b) (S h1)1 h2 (x)_R (S h1)2 = 1 (x)_R S h,
//   (c) (S^-1 h2)1 (x)_R (S^-1 h2)2 h1 = S^-1 h (x)_R 1,
//   (d) mu (S (x) id) I_R = 0.
inline Report check_hopf(const BialgebroidInstance& B, const AntipodePair& A) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();

    Matrix id = Matrix::identity(n);
    rep.add("S_invertible", A.S * A.S_inv == id && A.S_inv * A.S == id);

    {
        bool ok = true;
        std::string w;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                Vec lhs = A.S.apply(ctx.H.mul(unit_vec(n, i), unit_vec(n, j)));
                Vec rhs = ctx.H.mul(A.S.apply(unit_vec(n, j)), A.S.apply(unit_vec(n, i)));
                if (lhs != rhs) {
                    ok = false;
                    w = detail::bw({i, j});
                }
            }
        rep.add("S_antihom", ok, w);
    }

    rep.add("S_beta_alpha", A.S * ctx.beta == ctx.alpha);

    {
        bool ok = true;
        std::string w;
        for (int h = 0; h < n && ok; ++h) {
            Vec lhs((size_t)ctx.n2());
            for (const auto& [c, x] : B.dcol(h)) {
                int i = c / n, j = c % n;
                // Delta(S h1) * (h2 (x) 1)
                Vec ds = B.delta_of(A.S.apply(unit_vec(n, i)));
                axpy(lhs, x, ctx.mul2(ds, ctx.outer2(unit_vec(n, j), ctx.unitH)));
            }
            Vec rhs = ctx.outer2(ctx.unitH, A.S.apply(unit_vec(n, h)));
            if (ctx.reduce2(std::move(lhs)) != ctx.reduce2(std::move(rhs))) {
                ok = false;
                w = detail::bw({h});
            }
        }
        rep.add("antipode_left", ok, w);
    }

    {
        bool ok = true;
        std::string w;
        for (int h = 0; h < n && ok; ++h) {
            Vec lhs((size_t)ctx.n2());
            for (const auto& [c, x] : B.dcol(h)) {
                int i = c / n, j = c % n;
                // Delta(S^-1 h2) * (1 (x) h1)
                Vec ds = B.delta_of(A.S_inv.apply(unit_vec(n, j)));
                axpy(lhs, x, ctx.mul2(ds, ctx.outer2(ctx.unitH, unit_vec(n, i))));
            }
            Vec rhs = ctx.outer2(A.S_inv.apply(unit_vec(n, h)), ctx.unitH);
            if (ctx.reduce2(std::move(lhs)) != ctx.reduce2(std::move(rhs))) {
                ok = false;
                w = detail::bw({h});
            }
        }
        rep.add("antipode_right", ok, w);
    }

    {
        bool ok = true;
        std::string w;
        const auto& rows = ctx.I2().rows();
        for (size_t ui = 0; ui < rows.size() && ok; ++ui) {
            Vec acc(n);
            for (const auto& [c, x] : rows[ui])
                axpy(acc, x, ctx.H.mul(A.S.apply(unit_vec(n, c / n)), unit_vec(n, c % n)));
            if (!is_zero(acc)) {
                ok = false;
                w = "kernel row " + std::to_string(ui);
            }
        }
        rep.add("mu_S_id_kernel", ok, w);
    }

    return rep;
}

// Diagnostic, not part of the Hopf suite: whether (S (x) id) maps the kernel
// into itself. This holds when the base is trivial but fails on instances
// with a genuinely two-sided base; see the twist tests for the recorded
// counterexamples.
inline bool kernel_S_id_stable(const BialgebroidInstance& B, const AntipodePair& A) {
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();
    for (const auto& u : ctx.I2().rows()) {
        Vec img((size_t)ctx.n2());
        for (const auto& [c, x] : u) {
            Vec si = A.S.apply(unit_vec(n, c / n));
            for (int k = 0; k < n; ++k)
                if (!si[k].is_zero()) img[ctx.idx2(k, c % n)] += x * si[k];
        }
        if (!ctx.in_I2(img)) return false;
    }
    return true;
}

// (S h)1 (x)_R (S h)2 = S(h2) (x)_R S(h1). The right-hand side is built from
// a representative of the coproduct and the map x (x) y -> S(y) (x) S(x) does
// not stabilize the kernel away from a trivial base, so the identity is
// asserted for some representative: the defect against the stored lift must
// lie in the image of the kernel under that map. The natural coproduct
// decomposition is then a witness.
inline Report check_coring_antihom(const BialgebroidInstance& B, const AntipodePair& A) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();

    auto phi = [&](const Vec& lift) {
        Vec out((size_t)ctx.n2());
        for (int g = 0; g < ctx.n2(); ++g)
            if (!lift[g].is_zero())
                axpy(out, lift[g],
                     ctx.outer2(A.S.apply(unit_vec(n, g % n)), A.S.apply(unit_vec(n, g / n))));
        return out;
    };

    std::vector<Vec> image;
    for (const auto& u : ctx.I2().rows()) image.push_back(ctx.reduce2(phi(to_dense(u, ctx.n2()))));
    Subspace W = Subspace::span(ctx.n2(), image);

    bool ok = true;
    std::string w;
    for (int h = 0; h < n && ok; ++h) {
        Vec lhs = ctx.reduce2(B.delta_of(A.S.apply(unit_vec(n, h))));
        Vec rhs = ctx.reduce2(phi(to_dense(B.dcol(h), ctx.n2())));
        if (!W.contains(sub(lhs, rhs))) {
            ok = false;
            w = detail::bw({h});
        }
    }
    rep.add("coring_antihom", ok, w);
    return rep;
}

// The two linear maps sending x (x)_R y (x)_R z to (S x)1 y (x)_R (S x)2 z
// resp. (S^-1 z)1 x (x)_R (S^-1 z)2 y. Applied many times in the twist
// identity suite, so the quotient-basis matrix is precomputed once; the lift
// path stays available for arbitrary representatives. Well-definedness is
// validated on the full spanning set of the cube kernel at construction.
class DeltaMaps {
public:
    DeltaMaps(const BialgebroidInstance& B, const AntipodePair& A) : B_(&B), A_(&A) {
        const TensorContext& ctx = *B.ctx;
        const int n = ctx.n();
        ds_cols_.reserve(n);
        dsinv_cols_.reserve(n);
        for (int i = 0; i < n; ++i) {
            ds_cols_.push_back(to_sparse(B.delta_of(A.S.apply(unit_vec(n, i)))));
            dsinv_cols_.push_back(to_sparse(B.delta_of(A.S_inv.apply(unit_vec(n, i)))));
        }
        const auto& sec = ctx.section3();
        mat_S_.assign(sec.size(), Vec());
        mat_Sinv_.assign(sec.size(), Vec());
        coord_to_sec_.assign(ctx.n3(), -1);
        for (size_t s = 0; s < sec.size(); ++s) {
            coord_to_sec_[sec[s]] = (int)s;
            Vec lift((size_t)ctx.n3());
            lift[sec[s]] = Rational(1);
            mat_S_[s] = ctx.reduce2(apply_S_lift(lift));
            mat_Sinv_[s] = ctx.reduce2(apply_Sinv_lift(lift));
        }
    }

    // raw lift path; caller reduces
    Vec apply_S_lift(const Vec& lift3) const { return apply_lift(lift3, ds_cols_, false); }
    Vec apply_Sinv_lift(const Vec& lift3) const { return apply_lift(lift3, dsinv_cols_, true); }

    TensorCoset delta_S(const TensorCoset& t) const { return apply_coset(t, mat_S_); }
    TensorCoset delta_S_inv(const TensorCoset& t) const { return apply_coset(t, mat_Sinv_); }

    // Vanishing on the spanning set of the cube kernel, both leg families.
    Report validate() const {
        Report rep;
        const TensorContext& ctx = *B_->ctx;
        bool okS = true, okSinv = true;
        std::string wS, wSinv;
        ctx.for_each_I3_row([&](const SparseRow& row, const std::string& label) {
            if (!okS && !okSinv) return;
            Vec lift = to_dense(row, ctx.n3());
            if (okS && !is_zero(ctx.reduce2(apply_S_lift(lift)))) {
                okS = false;
                wS = label;
            }
            if (okSinv && !is_zero(ctx.reduce2(apply_Sinv_lift(lift)))) {
                okSinv = false;
                wSinv = label;
            }
        });
        rep.add("delta_S_welldefined", okS, wS);
        rep.add("delta_S_inv_welldefined", okSinv, wSinv);
        return rep;
    }

private:
    Vec apply_lift(const Vec& lift3, const std::vector<SparseRow>& cols, bool from_leg3) const {
        const TensorContext& ctx = *B_->ctx;
        const int n = ctx.n();
        Vec out((size_t)ctx.n2());
        for (int g = 0; g < ctx.n3(); ++g) {
            if (lift3[g].is_zero()) continue;
            int i = g / (n * n), j = (g / n) % n, k = g % n;
            int split = from_leg3 ? k : i;
            int f1 = from_leg3 ? i : j;
            int f2 = from_leg3 ? j : k;
            for (const auto& [c, x] : cols[split]) {
                Rational cx = lift3[g] * x;
                for (const auto& [p, a] : ctx.H.prod(c / n, f1))
                    for (const auto& [q, b] : ctx.H.prod(c % n, f2)) out[ctx.idx2(p, q)] += cx * a * b;
            }
        }
        return out;
    }

    TensorCoset apply_coset(const TensorCoset& t, const std::vector<Vec>& mat) const {
        if (t.arity != 3) throw std::invalid_argument("delta map: arity 3 input required");
        const TensorContext& ctx = *B_->ctx;
        Vec out((size_t)ctx.n2());
        for (int g = 0; g < ctx.n3(); ++g) {
            if (t.lift[g].is_zero()) continue;
            int s = coord_to_sec_[g];
            if (s < 0) throw std::logic_error("canonical lift has support on a pivot coordinate");
            axpy(out, t.lift[g], mat[s]);
        }
        return TensorCoset{t.ctx, 2, std::move(out)};
    }

    const BialgebroidInstance* B_;
    const AntipodePair* A_;
    std::vector<SparseRow> ds_cols_, dsinv_cols_;
    std::vector<Vec> mat_S_, mat_Sinv_;
    std::vector<int> coord_to_sec_;
};

inline DeltaMaps make_delta_maps(const BialgebroidInstance& B, const AntipodePair& A, bool validate = true) {
    DeltaMaps d(B, A);
    if (validate) {
        Report rep = d.validate();
        if (!rep.ok())
            throw IllDefined("delta map fails on kernel relator: " + rep.entries[0].detail, Vec());
    }
    return d;
}

// alpha((S h1)1 h2 |> b) (S h1)2 = alpha(b) S h, plus well-definedness of the
// auxiliary map x (x)_R y -> alpha(x |> b) y on the kernel relators.
inline Report check_alpha_S_lemma(const BialgebroidInstance& B, const AntipodePair& A) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n(), r = ctx.R.dim;

    bool wd = true;
    std::string wwd;
    for (int b = 0; b < r && wd; ++b) {
        const auto& rows = ctx.I2().rows();
        for (size_t ui = 0; ui < rows.size() && wd; ++ui) {
            Vec acc(n);
            for (const auto& [c, x] : rows[ui])
                axpy(acc, x,
                     ctx.H.mul(ctx.alpha.apply(B.act(unit_vec(n, c / n), unit_vec(r, b))),
                               unit_vec(n, c % n)));
            if (!is_zero(acc)) {
                wd = false;
                wwd = "b=" + std::to_string(b) + " kernel row " + std::to_string(ui);
            }
        }
    }
    rep.add("aux_map_welldefined", wd, wwd);

    bool ok = true;
    std::string w;
    for (int h = 0; h < n && ok; ++h)
        for (int b = 0; b < r && ok; ++b) {
            Vec lhs(n);
            for (const auto& [c, x] : B.dcol(h)) {
                int i = c / n, j = c % n;
                for (const auto& [c2, y] : to_sparse(B.delta_of(A.S.apply(unit_vec(n, i))))) {
                    Vec inner = ctx.H.mul(unit_vec(n, c2 / n), unit_vec(n, j));
                    axpy(lhs, x * y,
                         ctx.H.mul(ctx.alpha.apply(B.act(inner, unit_vec(r, b))), unit_vec(n, c2 % n)));
                }
            }
            Vec rhs = ctx.H.mul(ctx.alpha.apply(unit_vec(r, b)), A.S.apply(unit_vec(n, h)));
            if (lhs != rhs) {
                ok = false;
                w = detail::bw({h, b});
            }
        }
    rep.add("alpha_S_identity", ok, w);
    return rep;
}

// The kernel absorbs factorwise multiplication from the right, and coproduct
// images stabilize it; together these give the push-through property: any
// vanishing sum h_i (x)_R g_i stays zero after x1 h_i y (x)_R x2 g_i z.
inline Report check_pushthrough(const BialgebroidInstance& B) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();
    const auto& rows = ctx.I2().rows();

    bool right_ideal = true;
    std::string wri;
    for (size_t ui = 0; ui < rows.size() && right_ideal; ++ui) {
        Vec u = to_dense(rows[ui], ctx.n2());
        for (int y = 0; y < n && right_ideal; ++y)
            for (int z = 0; z < n && right_ideal; ++z) {
                if (!ctx.in_I2(ctx.mul2(u, ctx.outer2(unit_vec(n, y), unit_vec(n, z))))) {
                    right_ideal = false;
                    wri = "kernel row " + std::to_string(ui) + ", " + detail::bw({y, z});
                }
            }
    }
    rep.add("kernel_right_ideal", right_ideal, wri);

    bool stable = true;
    std::string ws;
    for (int x = 0; x < n && stable; ++x) {
        Vec dx = to_dense(B.dcol(x), ctx.n2());
        for (size_t ui = 0; ui < rows.size() && stable; ++ui) {
            if (!ctx.in_I2(ctx.mul2(dx, to_dense(rows[ui], ctx.n2())))) {
                stable = false;
                ws = detail::bw({x}) + " kernel row " + std::to_string(ui);
            }
        }
    }
    rep.add("kernel_delta_stable", stable, ws);
    return rep;
}

// Direct form of the push-through on the spanning set; cubic in dim H, meant
// for small instances (the composite check above covers the general case).
inline Report check_pushthrough_direct(const BialgebroidInstance& B) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();
    bool ok = true;
    std::string w;
    const auto& rows = ctx.I2().rows();
    for (size_t ui = 0; ui < rows.size() && ok; ++ui) {
        Vec u = to_dense(rows[ui], ctx.n2());
        for (int x = 0; x < n && ok; ++x) {
            Vec dx = to_dense(B.dcol(x), ctx.n2());
            for (int y = 0; y < n && ok; ++y)
                for (int z = 0; z < n && ok; ++z) {
                    Vec v = ctx.mul2(dx, ctx.mul2(u, ctx.outer2(unit_vec(n, y), unit_vec(n, z))));
                    if (!is_zero(ctx.reduce2(std::move(v)))) {
                        ok = false;
                        w = "kernel row " + std::to_string(ui) + ", " + detail::bw({x, y, z});
                    }
                }
        }
    }
    rep.add("pushthrough_direct", ok, w);
    return rep;
}

}  // namespace algd
