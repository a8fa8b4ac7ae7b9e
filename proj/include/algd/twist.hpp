#pragma once

#include "algd/antipode.hpp"

#include <optional>

namespace algd {

// Counital 2-cocycle on a bialgebroid instance. F is the canonical
// representative of the class in H (x)_R H; Fbar is a stored lift of the
// inverse class (canonical only modulo the twisted kernel, so kept as given).
struct Cocycle {
    Vec F;
    Vec Fbar;
};

struct AssociativityFailure : std::runtime_error {
    explicit AssociativityFailure(const std::string& w)
        : std::runtime_error("twisted base product is not associative/unital: " + w) {}
};

struct MissingInverse : std::runtime_error {
    MissingInverse() : std::runtime_error("V_F has no two-sided inverse") {}
};

inline Cocycle identity_cocycle(const BialgebroidInstance& B) {
    return Cocycle{B.ctx->reduce2(B.ctx->unit2), B.ctx->unit2};
}

// Cocycle identity in the triple quotient, counitality, and both
// invertibility congruences for the stored lifts.
inline Report check_cocycle(const BialgebroidInstance& B, const Cocycle& c) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();

    {
        // [(Delta (x) id)(F)](F (x) 1)  vs  [(id (x) Delta)(F)](1 (x) F)
        Vec d1((size_t)ctx.n3()), d2((size_t)ctx.n3());
        for (int g = 0; g < ctx.n2(); ++g) {
            if (c.F[g].is_zero()) continue;
            int i = g / n, j = g % n;
            for (const auto& [c2, y] : B.dcol(i)) d1[c2 * n + j] += c.F[g] * y;
            for (const auto& [c2, y] : B.dcol(j)) d2[i * n * n + c2] += c.F[g] * y;
        }
        Vec f1((size_t)ctx.n3()), f2((size_t)ctx.n3());
        for (int g = 0; g < ctx.n2(); ++g) {
            if (c.F[g].is_zero()) continue;
            for (int u = 0; u < n; ++u) {
                if (ctx.unitH[u].is_zero()) continue;
                f1[g * n + u] += c.F[g] * ctx.unitH[u];
                f2[u * n * n + g] += c.F[g] * ctx.unitH[u];
            }
        }
        Vec lhs = ctx.reduce3(ctx.mul3(d1, f1));
        Vec rhs = ctx.reduce3(ctx.mul3(d2, f2));
        rep.add("cocycle_identity", lhs == rhs);
    }

    {
        Vec l(n), r(n);
        for (int g = 0; g < ctx.n2(); ++g) {
            if (c.F[g].is_zero()) continue;
            int i = g / n, j = g % n;
            axpy(l, c.F[g], ctx.H.mul(ctx.beta.apply(B.eps_of(unit_vec(n, j))), unit_vec(n, i)));
            axpy(r, c.F[g], ctx.H.mul(ctx.alpha.apply(B.eps_of(unit_vec(n, i))), unit_vec(n, j)));
        }
        rep.add("counital_left", r == ctx.unitH);
        rep.add("counital_right", l == ctx.unitH);
    }

    {
        Vec prod = ctx.mul2(c.F, c.Fbar);
        rep.add("invertible_right", ctx.reduce2(sub(prod, ctx.unit2)) == Vec((size_t)ctx.n2()));

        std::vector<Vec> span;
        for (const auto& u : ctx.I2().rows()) span.push_back(ctx.mul2(c.Fbar, to_dense(u, ctx.n2())));
        Subspace FbarI = Subspace::span(ctx.n2(), span);
        Vec v = sub(ctx.mul2(c.Fbar, c.F), ctx.unit2);
        rep.add("invertible_left", FbarI.contains(v));
    }

    return rep;
}

// Solves F X = 1 (x) 1 modulo the kernel, then filters the affine solution
// space by the left congruence (which depends on the candidate through its
// own kernel translate). Bounded search; absence is a value.
inline std::optional<Vec> invert_cocycle(const BialgebroidInstance& B, const Vec& F) {
    const TensorContext& ctx = *B.ctx;
    const int m = ctx.n2();
    Matrix M(m, m);
    for (int cidx = 0; cidx < m; ++cidx)
        M.set_col(cidx, ctx.reduce2(ctx.mul2(F, unit_vec(m, cidx))));
    auto sol = solve_linear(M, ctx.reduce2(ctx.unit2));
    if (!sol) return std::nullopt;

    std::vector<Vec> candidates;
    candidates.push_back(sol->particular);
    const auto& null_rows = sol->nullspace.rows();
    for (size_t i = 0; i < null_rows.size() && i < 24; ++i) {
        Vec plus = sol->particular, minus = sol->particular;
        for (const auto& [col, x] : null_rows[i]) {
            plus[col] += x;
            minus[col] -= x;
        }
        candidates.push_back(std::move(plus));
        candidates.push_back(std::move(minus));
    }
    for (size_t i = 0; i < null_rows.size() && i < 8; ++i)
        for (size_t j = i + 1; j < null_rows.size() && j < 8; ++j) {
            Vec v = sol->particular;
            for (const auto& [col, x] : null_rows[i]) v[col] += x;
            for (const auto& [col, x] : null_rows[j]) v[col] += x;
            candidates.push_back(std::move(v));
        }
    // A valid witness maximizes the span of its kernel translate; generic
    // affine combinations reach that span, and the exact membership test
    // below keeps this sound. Deterministic sampling.
    unsigned long long state = 0x9e3779b97f4a7c15ULL;
    for (int s = 0; s < 16; ++s) {
        Vec v = sol->particular;
        for (const auto& row : null_rows) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            long long cc = (long long)((state >> 33) % 5) - 2;
            if (cc == 0) continue;
            for (const auto& [col, x] : row) v[col] += Rational(cc) * x;
        }
        candidates.push_back(std::move(v));
    }

    for (const Vec& X : candidates) {
        std::vector<Vec> span;
        for (const auto& u : ctx.I2().rows()) span.push_back(ctx.mul2(X, to_dense(u, ctx.n2())));
        Subspace XI = Subspace::span(m, span);
        if (XI.contains(sub(ctx.mul2(X, F), ctx.unit2))) return X;
    }
    return std::nullopt;
}

// Twisted base product f *_F g = (F1 |> f)(F2 |> g), checked associative and
// unital with the original unit.
inline AlgebraPresentation twist_base(const BialgebroidInstance& B, const Cocycle& c) {
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n(), r = ctx.R.dim;
    std::vector<std::tuple<int, int, int, Rational>> triples;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Vec prod(r);
            for (int g = 0; g < ctx.n2(); ++g) {
                if (c.F[g].is_zero()) continue;
                axpy(prod, c.F[g],
                     ctx.R.mul(B.act(unit_vec(n, g / n), unit_vec(r, i)),
                               B.act(unit_vec(n, g % n), unit_vec(r, j))));
            }
            for (int k = 0; k < r; ++k)
                if (!prod[k].is_zero()) triples.emplace_back(i, j, k, prod[k]);
        }
    AlgebraPresentation RF = AlgebraPresentation::from_triples(r, ctx.R.unit, triples);
    Report v = RF.validate();
    if (!v.ok()) throw AssociativityFailure(v.entries[0].name + " " + v.entries[0].detail);
    return RF;
}

struct TwistedStructure {
    AlgebraPresentation R_F;
    Matrix alpha_F, beta_F;
    BialgebroidInstance twisted;  // over (H, R_F, alpha_F, beta_F), Delta_F, same eps
    Subspace I_RF_transport;      // span of Fbar * I_R, cross-checked against the relator span
    Report structure_report;
    Vec V_F;
    std::optional<Vec> V_F_inv;
    std::optional<AntipodePair> S_F;
};

inline TwistedStructure twist_structure(const BialgebroidInstance& B, const Cocycle& c) {
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n(), r = ctx.R.dim;
    TwistedStructure T;
    T.R_F = twist_base(B, c);

    T.alpha_F = Matrix(n, r);
    T.beta_F = Matrix(n, r);
    for (int a = 0; a < r; ++a) {
        Vec ca(n), cb(n);
        for (int g = 0; g < ctx.n2(); ++g) {
            if (c.F[g].is_zero()) continue;
            int i = g / n, j = g % n;
            axpy(ca, c.F[g],
                 ctx.H.mul(ctx.alpha.apply(B.act(unit_vec(n, i), unit_vec(r, a))), unit_vec(n, j)));
            axpy(cb, c.F[g],
                 ctx.H.mul(ctx.beta.apply(B.act(unit_vec(n, j), unit_vec(r, a))), unit_vec(n, i)));
        }
        T.alpha_F.set_col(a, ca);
        T.beta_F.set_col(a, cb);
    }
    T.structure_report.merge("alphaF.",
                             check_algebra_map({T.R_F, ctx.H, T.alpha_F}));
    T.structure_report.merge("betaF.",
                             check_algebra_map({opposite(T.R_F), ctx.H, T.beta_F}));

    CtxPtr ctxF = build_context(ctx.H, T.R_F, T.alpha_F, T.beta_F);

    std::vector<Vec> span;
    for (const auto& u : ctx.I2().rows()) span.push_back(ctx.mul2(c.Fbar, to_dense(u, ctx.n2())));
    T.I_RF_transport = Subspace::span(ctx.n2(), span);
    T.structure_report.add("IRF_crosscheck", T.I_RF_transport == ctxF->I2());

    Matrix deltaF(ctx.n2(), n);
    for (int h = 0; h < n; ++h)
        deltaF.set_col(h, ctx.mul2(c.Fbar, ctx.mul2(to_dense(B.dcol(h), ctx.n2()), c.F)));
    T.twisted = make_bialgebroid(ctxF, std::move(deltaF), B.epsilon);

    T.structure_report.merge("twisted.", check_bialgebroid(T.twisted));
    return T;
}

struct VFData {
    Vec V;
    std::optional<Vec> Vinv;
    Report rep;
};

// V_F = (S F1) F2; lift-independent because mu (S (x) id) kills the kernel,
// which is validated here. Inverse decided by exact linear solve; absence is
// reported, never an error.
inline VFData compute_VF(const BialgebroidInstance& B, const Cocycle& c, const AntipodePair& A) {
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();
    VFData out;

    bool wd = true;
    std::string w;
    const auto& rows = ctx.I2().rows();
    for (size_t ui = 0; ui < rows.size() && wd; ++ui) {
        Vec acc(n);
        for (const auto& [g, x] : rows[ui])
            axpy(acc, x, ctx.H.mul(A.S.apply(unit_vec(n, g / n)), unit_vec(n, g % n)));
        if (!is_zero(acc)) {
            wd = false;
            w = "kernel row " + std::to_string(ui);
        }
    }
    out.rep.add("VF_welldefined", wd, w);

    Vec V(n);
    for (int g = 0; g < ctx.n2(); ++g)
        if (!c.F[g].is_zero())
            axpy(V, c.F[g], ctx.H.mul(A.S.apply(unit_vec(n, g / n)), unit_vec(n, g % n)));
    out.V = std::move(V);
    out.Vinv = invert_element(ctx.H, out.V);
    if (out.Vinv)
        out.rep.add("VF_invertible", true);
    else
        out.rep.skip("VF_invertible", "no two-sided inverse found");
    return out;
}

// S_F h = V^-1 (S h) V and its inverse (S^-1 V^-1)(S^-1 h)(S^-1 V), with the
// auxiliary identities for S^-1 V_F and for V_F^-1 = (S_F Fbar1) Fbar2
// including well-definedness of that right-hand side.
inline std::pair<AntipodePair, Report> twisted_antipode(const BialgebroidInstance& B, const Cocycle& c,
                                                        const TwistedStructure& T, const AntipodePair& A,
                                                        const Vec& V, const std::optional<Vec>& Vinv) {
    if (!Vinv) throw MissingInverse();
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();
    Report rep;

    AntipodePair SF;
    SF.S = Matrix(n, n);
    SF.S_inv = Matrix(n, n);
    Vec sinvV = A.S_inv.apply(V), sinvVinv = A.S_inv.apply(*Vinv);
    for (int h = 0; h < n; ++h) {
        SF.S.set_col(h, ctx.H.mul(ctx.H.mul(*Vinv, A.S.apply(unit_vec(n, h))), V));
        SF.S_inv.set_col(h, ctx.H.mul(ctx.H.mul(sinvVinv, A.S_inv.apply(unit_vec(n, h))), sinvV));
    }

    Matrix id = Matrix::identity(n);
    rep.add("SF_mutually_inverse", SF.S * SF.S_inv == id && SF.S_inv * SF.S == id);
    {
        bool ok = true;
        std::string w;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                Vec lhs = SF.S.apply(ctx.H.mul(unit_vec(n, i), unit_vec(n, j)));
                Vec rhs = ctx.H.mul(SF.S.apply(unit_vec(n, j)), SF.S.apply(unit_vec(n, i)));
                if (lhs != rhs) {
                    ok = false;
                    w = detail::bw({i, j});
                }
            }
        rep.add("SF_antihom", ok, w);
    }

    {
        Vec rhs(n);
        for (int g = 0; g < ctx.n2(); ++g)
            if (!c.F[g].is_zero())
                axpy(rhs, c.F[g], ctx.H.mul(A.S_inv.apply(unit_vec(n, g % n)), unit_vec(n, g / n)));
        rep.add("Sinv_V_formula", sinvV == rhs);
    }
    {
        Vec rhs(n);
        for (int g = 0; g < ctx.n2(); ++g)
            if (!c.Fbar[g].is_zero())
                axpy(rhs, c.Fbar[g], ctx.H.mul(SF.S.apply(unit_vec(n, g / n)), unit_vec(n, g % n)));
        rep.add("VF_inv_formula", *Vinv == rhs);

        bool wd = true;
        std::string w;
        const auto& rows = T.twisted.ctx->I2().rows();
        for (size_t ui = 0; ui < rows.size() && wd; ++ui) {
            Vec acc(n);
            for (const auto& [g, x] : rows[ui])
                axpy(acc, x, ctx.H.mul(SF.S.apply(unit_vec(n, g / n)), unit_vec(n, g % n)));
            if (!is_zero(acc)) {
                wd = false;
                w = "twisted kernel row " + std::to_string(ui);
            }
        }
        rep.add("VF_inv_formula_welldefined", wd, w);
    }
    {
        Vec rhs(n);
        for (int g = 0; g < ctx.n2(); ++g)
            if (!c.Fbar[g].is_zero())
                axpy(rhs, c.Fbar[g], ctx.H.mul(SF.S_inv.apply(unit_vec(n, g % n)), unit_vec(n, g / n)));
        rep.add("Sinv_Vinv_formula", sinvVinv == rhs);
    }

    return {SF, rep};
}

namespace detail {

// (S Fbar1)1 (V)1 F1 Fbar2 (x)_R (S Fbar1)2 (V)2 F2, reduced
inline Vec conjugation_expr(const BialgebroidInstance& B, const AntipodePair& A, const Vec& V,
                            const Vec& F, const Vec& Fbar) {
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();
    std::vector<SparseRow> dS(n);
    for (int i = 0; i < n; ++i) dS[i] = to_sparse(B.delta_of(A.S.apply(unit_vec(n, i))));
    SparseRow dV = to_sparse(B.delta_of(V));
    Vec out((size_t)ctx.n2());
    for (int g = 0; g < ctx.n2(); ++g) {
        if (Fbar[g].is_zero()) continue;
        int p = g / n, q = g % n;
        for (const auto& [c1, y1] : dS[p]) {
            int a = c1 / n, b = c1 % n;
            for (const auto& [c2, y2] : dV) {
                int cc = c2 / n, dd = c2 % n;
                Vec leg1a = ctx.H.mul(unit_vec(n, a), unit_vec(n, cc));
                Vec leg2a = ctx.H.mul(unit_vec(n, b), unit_vec(n, dd));
                for (int g2 = 0; g2 < ctx.n2(); ++g2) {
                    if (F[g2].is_zero()) continue;
                    int s = g2 / n, t = g2 % n;
                    Rational co = Fbar[g] * y1 * y2 * F[g2];
                    Vec leg1 = ctx.H.mul(ctx.H.mul(leg1a, unit_vec(n, s)), unit_vec(n, q));
                    Vec leg2 = ctx.H.mul(leg2a, unit_vec(n, t));
                    axpy(out, co, ctx.outer2(leg1, leg2));
                }
            }
        }
    }
    return ctx.reduce2(std::move(out));
}

// (S^-1 Fbar2)1 (S^-1 V)1 F1 (x)_R (S^-1 Fbar2)2 (S^-1 V)2 F2 Fbar1, reduced
inline Vec inverse_conjugation_expr(const BialgebroidInstance& B, const AntipodePair& A, const Vec& V,
                                    const Vec& F, const Vec& Fbar) {
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();
    std::vector<SparseRow> dSinv(n);
    for (int i = 0; i < n; ++i) dSinv[i] = to_sparse(B.delta_of(A.S_inv.apply(unit_vec(n, i))));
    SparseRow dSV = to_sparse(B.delta_of(A.S_inv.apply(V)));
    Vec out((size_t)ctx.n2());
    for (int g = 0; g < ctx.n2(); ++g) {
        if (Fbar[g].is_zero()) continue;
        int p = g / n, q = g % n;
        for (const auto& [c1, y1] : dSinv[q]) {
            int a = c1 / n, b = c1 % n;
            for (const auto& [c2, y2] : dSV) {
                int cc = c2 / n, dd = c2 % n;
                Vec leg1a = ctx.H.mul(unit_vec(n, a), unit_vec(n, cc));
                Vec leg2a = ctx.H.mul(unit_vec(n, b), unit_vec(n, dd));
                for (int g2 = 0; g2 < ctx.n2(); ++g2) {
                    if (F[g2].is_zero()) continue;
                    int s = g2 / n, t = g2 % n;
                    Rational co = Fbar[g] * y1 * y2 * F[g2];
                    Vec leg1 = ctx.H.mul(leg1a, unit_vec(n, s));
                    Vec leg2 = ctx.H.mul(ctx.H.mul(leg2a, unit_vec(n, t)), unit_vec(n, p));
                    axpy(out, co, ctx.outer2(leg1, leg2));
                }
            }
        }
    }
    return ctx.reduce2(std::move(out));
}

}  // namespace detail

// The identity catalog behind the main theorem, each entry exhaustively
// evaluated on lifts with end reduction:
//   (i)    S_F o beta_F = alpha_F, also in the (S beta_F(r)) V = V alpha_F(r) form
//   (ii)   the conjugation expression is representative-independent
//   (iii)  the inverse-side expression is representative-independent
//   (iv)   both evaluate to 1 (x) V resp. S^-1 V (x) 1
//   (v)    left antipode axiom for (H_F, S_F)
//   (vi)   the primed-copy variant of (iv) left
//   (vii)  right antipode axiom for (H_F, S_F^-1)
//   (viii) the inverse-side lemma repeated on the stored representative
inline Report verify_section3(const BialgebroidInstance& B, const Cocycle& c, const AntipodePair& A,
                              const TwistedStructure& T) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n(), r = ctx.R.dim;
    const AntipodePair& SF = *T.S_F;
    const Vec& V = T.V_F;

    {
        bool ok = SF.S * T.beta_F == T.alpha_F;
        bool ok2 = true;
        std::string w;
        for (int a = 0; a < r && ok2; ++a) {
            Vec lhs = ctx.H.mul(A.S.apply(T.beta_F.col(a)), V);
            Vec rhs = ctx.H.mul(V, T.alpha_F.col(a));
            if (lhs != rhs) {
                ok2 = false;
                w = "base index " + std::to_string(a);
            }
        }
        rep.add("twisted_S_beta_alpha", ok && ok2, w);
    }

    auto conj = [&](const Vec& fb) { return detail::conjugation_expr(B, A, V, c.F, fb); };
    auto invconj = [&](const Vec& fb) { return detail::inverse_conjugation_expr(B, A, V, c.F, fb); };

    {
        Vec base = conj(c.Fbar);
        bool ok = true;
        std::string w;
        const auto& rows = T.twisted.ctx->I2().rows();
        for (size_t ui = 0; ui < rows.size() && ok; ++ui) {
            Vec shifted = c.Fbar;
            for (const auto& [col, x] : rows[ui]) shifted[col] += x;
            if (conj(shifted) != base) {
                ok = false;
                w = "twisted kernel row " + std::to_string(ui);
            }
        }
        rep.add("conjugation_expr_welldefined", ok, w);
        rep.add("conjugation_lemma_left", base == ctx.reduce2(ctx.outer2(ctx.unitH, V)));
        rep.add("conjugation_lemma_left_primed", conj(c.Fbar) == ctx.reduce2(ctx.outer2(ctx.unitH, V)));
    }

    {
        Vec base = invconj(c.Fbar);
        bool ok = true;
        std::string w;
        const auto& rows = T.twisted.ctx->I2().rows();
        for (size_t ui = 0; ui < rows.size() && ok; ++ui) {
            Vec shifted = c.Fbar;
            for (const auto& [col, x] : rows[ui]) shifted[col] += x;
            if (invconj(shifted) != base) {
                ok = false;
                w = "twisted kernel row " + std::to_string(ui);
            }
        }
        rep.add("inverse_expr_welldefined", ok, w);
        Vec rhs = ctx.reduce2(ctx.outer2(A.S_inv.apply(V), ctx.unitH));
        rep.add("conjugation_lemma_right", base == rhs);
        rep.add("inverse_conjugation_lemma", invconj(c.Fbar) == rhs);
    }

    {
        Report h = check_hopf(T.twisted, SF);
        const CheckResult* left = h.find("antipode_left");
        const CheckResult* right = h.find("antipode_right");
        rep.add("twisted_antipode_left", left && left->verdict == Verdict::pass,
                left ? left->detail : "");
        rep.add("twisted_antipode_right", right && right->verdict == Verdict::pass,
                right ? right->detail : "");
    }

    return rep;
}

struct MainTheoremResult {
    Report report;
    std::optional<TwistedStructure> T;  // absent when the structure stage already broke
};

// Orchestrates check_cocycle -> twist_structure -> compute_VF ->
// twisted_antipode -> check_hopf on the twisted pair -> the identity catalog.
// V_F non-invertibility skips the antipode stages and is not a failure;
// structural breakage (a non-cocycle input) becomes a named failed entry.
inline MainTheoremResult verify_main_theorem(const BialgebroidInstance& B, const Cocycle& c,
                                             const AntipodePair& A) {
    MainTheoremResult out;
    out.report.merge("cocycle.", check_cocycle(B, c));
    try {
        out.T = twist_structure(B, c);
    } catch (const std::runtime_error& e) {
        out.report.add("twist.structure", false, e.what());
        return out;
    }
    out.report.merge("twist.", out.T->structure_report);
    VFData vf = compute_VF(B, c, A);
    out.report.merge("vf.", vf.rep);
    out.T->V_F = vf.V;
    out.T->V_F_inv = vf.Vinv;
    if (!vf.Vinv) {
        out.report.skip("twisted_antipode", "V_F not invertible; antipode stage skipped");
        return out;
    }
    auto [SF, arep] = twisted_antipode(B, c, *out.T, A, vf.V, vf.Vinv);
    out.T->S_F = SF;
    out.report.merge("antipode.", arep);
    out.report.merge("twisted_hopf.", check_hopf(out.T->twisted, SF));
    out.report.merge("sec3.", verify_section3(B, c, A, *out.T));
    return out;
}

// Twists the twisted instance by the inverse cocycle and demands bit-exact
// recovery of every structure matrix, the antipode included, plus
// V over the twisted instance = V_F^-1 exactly.
inline Report untwist_roundtrip(const BialgebroidInstance& B, const Cocycle& c, const AntipodePair& A,
                                const TwistedStructure& T) {
    Report rep;
    if (!T.V_F_inv || !T.S_F) {
        rep.skip("untwist", "V_F not invertible; nothing to recover");
        return rep;
    }
    const BialgebroidInstance& Tw = T.twisted;
    Cocycle cbar{Tw.ctx->reduce2(c.Fbar), c.F};
    // The stored witness F satisfies the right congruence (it is in the right
    // class), but the left congruence is existential over witnesses, so a
    // proper one is searched for the invertibility entries; the recovery
    // itself may use F, since witnesses agree modulo the original kernel and
    // that kernel is a right ideal.
    {
        Report cc = check_cocycle(Tw, cbar);
        for (const auto& e : cc.entries)
            if (e.name != "invertible_left") rep.entries.push_back({"inverse_cocycle." + e.name, e.verdict, e.detail});
        auto witness = invert_cocycle(Tw, cbar.F);
        rep.add("inverse_cocycle.invertible_left", witness.has_value());
        // witnesses differ from F by F * I_RF, a subspace of the original kernel
        if (witness) rep.add("inverse_cocycle.witness_class", B.ctx->in_I2(sub(*witness, c.F)));
    }

    TwistedStructure T2 = twist_structure(Tw, cbar);
    rep.add("roundtrip_base", T2.R_F.table == B.ctx->R.table && T2.R_F.unit == B.ctx->R.unit);
    rep.add("roundtrip_alpha", T2.alpha_F == B.ctx->alpha);
    rep.add("roundtrip_beta", T2.beta_F == B.ctx->beta);
    rep.add("roundtrip_delta", T2.twisted.delta == B.delta);
    rep.add("roundtrip_epsilon", T2.twisted.epsilon == B.epsilon);

    VFData vf2 = compute_VF(Tw, cbar, *T.S_F);
    rep.add("roundtrip_V", vf2.V == *T.V_F_inv);
    rep.add("roundtrip_V_inverse", vf2.Vinv && *vf2.Vinv == T.V_F);
    if (vf2.Vinv) {
        auto [S2, arep2] = twisted_antipode(Tw, cbar, T2, *T.S_F, vf2.V, vf2.Vinv);
        (void)arep2;
        rep.add("roundtrip_S", S2.S == A.S && S2.S_inv == A.S_inv);
    } else {
        rep.add("roundtrip_S", false, "inverse V not invertible");
    }
    return rep;
}

// Executable form of the kernel-relocation observation: a sum vanishes over
// the original base iff its Fbar translate vanishes over the twisted base,
// checked in both directions on the spanning sets.
inline Report check_twist_transport(const BialgebroidInstance& B, const Cocycle& c,
                                    const TwistedStructure& T) {
    Report rep;
    const TensorContext& ctx = *B.ctx;
    const TensorContext& ctxF = *T.twisted.ctx;
    bool fwd = true;
    std::string wf;
    const auto& rows = ctx.I2().rows();
    for (size_t ui = 0; ui < rows.size() && fwd; ++ui) {
        if (!ctxF.in_I2(ctx.mul2(c.Fbar, to_dense(rows[ui], ctx.n2())))) {
            fwd = false;
            wf = "kernel row " + std::to_string(ui);
        }
    }
    rep.add("transport_forward", fwd, wf);
    bool bwd = true;
    std::string wb;
    const auto& rowsF = ctxF.I2().rows();
    for (size_t ui = 0; ui < rowsF.size() && bwd; ++ui) {
        if (!ctx.in_I2(ctx.mul2(c.F, to_dense(rowsF[ui], ctx.n2())))) {
            bwd = false;
            wb = "twisted kernel row " + std::to_string(ui);
        }
    }
    rep.add("transport_backward", bwd, wb);
    return rep;
}

struct CocycleSearchResult {
    std::vector<Cocycle> found;
    Report rep;
};

// Best-effort search for nontrivial cocycles along one-parameter families
// 1 (x) 1 + t N: the counitality and linearized cocycle conditions cut out a
// linear space, whose small combinations are then filtered by the exact
// quadratic condition and full verification. Finding nothing is an outcome,
// not an error.
inline CocycleSearchResult find_cocycles_near_identity(const BialgebroidInstance& B, size_t max_candidates = 200) {
    const TensorContext& ctx = *B.ctx;
    const int n = ctx.n();
    CocycleSearchResult out;

    Vec unit3((size_t)ctx.n3());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Rational v = ctx.unitH[i] * ctx.unitH[j] * ctx.unitH[k];
                if (!v.is_zero()) unit3[ctx.idx3(i, j, k)] = v;
            }

    auto d1 = [&](const Vec& f) {
        Vec o((size_t)ctx.n3());
        for (int g = 0; g < ctx.n2(); ++g) {
            if (f[g].is_zero()) continue;
            for (const auto& [c2, y] : B.dcol(g / n)) o[c2 * n + (g % n)] += f[g] * y;
        }
        return o;
    };
    auto d2 = [&](const Vec& f) {
        Vec o((size_t)ctx.n3());
        for (int g = 0; g < ctx.n2(); ++g) {
            if (f[g].is_zero()) continue;
            for (const auto& [c2, y] : B.dcol(g % n)) o[(g / n) * n * n + c2] += f[g] * y;
        }
        return o;
    };
    auto leg12 = [&](const Vec& f) {  // f (x) 1
        Vec o((size_t)ctx.n3());
        for (int g = 0; g < ctx.n2(); ++g)
            if (!f[g].is_zero())
                for (int u = 0; u < n; ++u)
                    if (!ctx.unitH[u].is_zero()) o[g * n + u] += f[g] * ctx.unitH[u];
        return o;
    };
    auto leg23 = [&](const Vec& f) {  // 1 (x) f
        Vec o((size_t)ctx.n3());
        for (int g = 0; g < ctx.n2(); ++g)
            if (!f[g].is_zero())
                for (int u = 0; u < n; ++u)
                    if (!ctx.unitH[u].is_zero()) o[u * n * n + g] += f[g] * ctx.unitH[u];
        return o;
    };

    Vec one2 = ctx.unit2;
    const auto& sec = ctx.Q2.section();
    const int cols = (int)sec.size();
    const int linrows = ctx.n3() + 2 * n;
    Matrix L(linrows, cols);
    for (int s = 0; s < cols; ++s) {
        Vec N = unit_vec(ctx.n2(), sec[s]);
        Vec lin = ctx.reduce3(add(add(ctx.mul3(d1(N), leg12(one2)), ctx.mul3(d1(one2), leg12(N))),
                                  scale(add(ctx.mul3(d2(N), leg23(one2)), ctx.mul3(d2(one2), leg23(N))),
                                        Rational(-1))));
        Vec col(linrows);
        for (int g = 0; g < ctx.n3(); ++g) col[g] = lin[g];
        Vec cl(n), cr(n);
        for (int g = 0; g < ctx.n2(); ++g) {
            if (N[g].is_zero()) continue;
            axpy(cl, N[g], ctx.H.mul(ctx.alpha.apply(B.eps_of(unit_vec(n, g / n))), unit_vec(n, g % n)));
            axpy(cr, N[g], ctx.H.mul(ctx.beta.apply(B.eps_of(unit_vec(n, g % n))), unit_vec(n, g / n)));
        }
        for (int k = 0; k < n; ++k) {
            col[ctx.n3() + k] = cl[k];
            col[ctx.n3() + n + k] = cr[k];
        }
        L.set_col(s, col);
    }
    auto sol = solve_linear(L, Vec(linrows));
    if (!sol) {
        out.rep.add("search_setup", false, "linear stage inconsistent");
        return out;
    }
    std::vector<Vec> dirs;
    for (const auto& row : sol->nullspace.rows()) {
        Vec N((size_t)ctx.n2());
        for (const auto& [col, x] : row) N[sec[col]] = x;
        dirs.push_back(std::move(N));
    }
    std::vector<Vec> candidates;
    for (const auto& dv : dirs) candidates.push_back(dv);
    for (size_t i = 0; i < dirs.size(); ++i)
        for (size_t j = i + 1; j < dirs.size() && candidates.size() < max_candidates; ++j)
            candidates.push_back(add(dirs[i], dirs[j]));

    auto quad = [&](const Vec& N) {
        Vec q = sub(ctx.mul3(d1(N), leg12(N)), ctx.mul3(d2(N), leg23(N)));
        return is_zero(ctx.reduce3(std::move(q)));
    };

    int verified = 0;
    for (const Vec& N : candidates) {
        if (out.found.size() >= 4) break;
        if (!quad(N)) continue;
        Vec F = ctx.reduce2(add(one2, N));
        if (F == ctx.reduce2(one2)) continue;
        auto Fbar = invert_cocycle(B, F);
        if (!Fbar) continue;
        Cocycle c{F, *Fbar};
        if (check_cocycle(B, c).ok()) {
            out.found.push_back(std::move(c));
            ++verified;
        }
    }
    out.rep.add("search_done", true,
                "directions=" + std::to_string(dirs.size()) + " verified=" + std::to_string(verified));
    return out;
}

}  // namespace algd
