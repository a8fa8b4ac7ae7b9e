#include "algd/antipode.hpp"

#include "algd/instances.hpp"
#include "algd/twist.hpp"
#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace algd;
using test::klein_pairing_chi;

TEST_CASE("group algebras satisfy the Hopf axioms with S(g) = g^-1") {
    for (auto tab : {cyclic2(), klein4()}) {
        HopfInstance g = build_group_hopf(tab);
        Report rep = check_hopf(g.B, g.S);
        INFO(rep.to_text());
        CHECK(rep.ok());
        CHECK(check_coring_antihom(g.B, g.S).ok());
        CHECK(check_alpha_S_lemma(g.B, g.S).ok());
    }
}

TEST_CASE("pair algebroid with the swap antipode") {
    HopfInstance p = build_pair_algebroid(matrix_algebra(2));
    CHECK(p.S.S * p.S.S == Matrix::identity(16));  // involution
    Report rep = check_hopf(p.B, p.S);
    INFO(rep.to_text());
    CHECK(rep.ok());
    CHECK(check_coring_antihom(p.B, p.S).ok());
    CHECK(check_alpha_S_lemma(p.B, p.S).ok());
}

TEST_CASE("coring antihom witness: the natural pair coproduct decomposition") {
    HopfInstance p = build_pair_algebroid(matrix_algebra(2));
    const TensorContext& ctx = *p.B.ctx;
    const int n = ctx.n(), r = ctx.R.dim;
    auto hx = [&](int i, int j) { return i * r + j; };
    auto phi = [&](const Vec& lift) {
        Vec out((size_t)ctx.n2());
        for (int g = 0; g < ctx.n2(); ++g)
            if (!lift[g].is_zero())
                axpy(out, lift[g],
                     ctx.outer2(p.S.S.apply(unit_vec(n, g % n)), p.S.S.apply(unit_vec(n, g / n))));
        return ctx.reduce2(out);
    };
    int natural_hits = 0, canonical_hits = 0;
    for (int h = 0; h < n; ++h) {
        Vec natural((size_t)ctx.n2());
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) {
                Rational v = ctx.R.unit[a] * ctx.R.unit[b];
                if (!v.is_zero()) natural[ctx.idx2(hx(h / r, a), hx(b, h % r))] += v;
            }
        Vec lhs = ctx.reduce2(p.B.delta_of(p.S.S.apply(unit_vec(n, h))));
        natural_hits += phi(natural) == lhs;
        canonical_hits += phi(to_dense(p.B.dcol(h), ctx.n2())) == lhs;
    }
    CHECK(natural_hits == n);   // the defining decomposition satisfies the identity on the nose
    CHECK(canonical_hits < n);  // the expression is representative-sensitive
}

TEST_CASE("replacing S by the identity map is caught by the left axiom") {
    HopfInstance g = build_groupoid_algebroid(GroupoidTable::pair_groupoid(2));
    AntipodePair id{Matrix::identity(4), Matrix::identity(4)};
    Report rep = check_hopf(g.B, id);
    CHECK_FALSE(rep.ok());
    CHECK(rep.find("antipode_left")->verdict == Verdict::fail);
}

TEST_CASE("delta maps on the groupoid and pair instances") {
    for (auto make : {+[] { return build_groupoid_algebroid(GroupoidTable::pair_groupoid(2)); },
                      +[] { return build_pair_algebroid(group_algebra(cyclic2())); }}) {
        HopfInstance p = make();
        DeltaMaps dm = make_delta_maps(p.B, p.S);
        const TensorContext& ctx = *p.B.ctx;
        const int n = ctx.n();
        test::Rng rng(77);

        // x = 1 leaves y (x)_R z unchanged
        for (int t = 0; t < 5; ++t) {
            Vec y = rng.vec(n), z = rng.vec(n);
            Vec lift3((size_t)ctx.n3());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        Rational v = ctx.unitH[i] * y[j] * z[k];
                        if (!v.is_zero()) lift3[ctx.idx3(i, j, k)] += v;
                    }
            TensorCoset t3 = make_coset(p.B.ctx, 3, lift3);
            TensorCoset got = dm.delta_S(t3);
            CHECK(got.lift == ctx.reduce2(ctx.outer2(y, z)));
        }

        // restatements of the antipode axioms
        for (int h = 0; h < n; ++h) {
            Vec lhs((size_t)ctx.n3());
            for (const auto& [c, x] : p.B.dcol(h))
                for (int u = 0; u < n; ++u)
                    if (!ctx.unitH[u].is_zero()) lhs[c * n + u] += x * ctx.unitH[u];
            TensorCoset t3 = make_coset(p.B.ctx, 3, lhs);
            CHECK(dm.delta_S(t3).lift ==
                  ctx.reduce2(ctx.outer2(ctx.unitH, p.S.S.apply(unit_vec(n, h)))));

            Vec rhs((size_t)ctx.n3());
            for (const auto& [c, x] : p.B.dcol(h))
                for (int u = 0; u < n; ++u)
                    if (!ctx.unitH[u].is_zero()) rhs[u * n * n + c] += x * ctx.unitH[u];
            TensorCoset t3b = make_coset(p.B.ctx, 3, rhs);
            CHECK(dm.delta_S_inv(t3b).lift ==
                  ctx.reduce2(ctx.outer2(p.S.S_inv.apply(unit_vec(n, h)), ctx.unitH)));
        }

        // linearity on lifts
        Vec a = rng.vec(ctx.n3()), b = rng.vec(ctx.n3());
        Rational s = rng.rat();
        Vec lin = dm.apply_S_lift(add(scale(a, s), b));
        CHECK(ctx.reduce2(lin) ==
              ctx.reduce2(add(scale(dm.apply_S_lift(a), s), dm.apply_S_lift(b))));

        // lift path and matrix path agree on cosets
        TensorCoset t3 = make_coset(p.B.ctx, 3, a);
        CHECK(dm.delta_S(t3).lift == ctx.reduce2(dm.apply_S_lift(t3.lift)));
        CHECK(dm.delta_S_inv(t3).lift == ctx.reduce2(dm.apply_Sinv_lift(t3.lift)));
    }
}

TEST_CASE("delta maps against a concrete cocycle") {
    HopfInstance g = build_group_hopf(klein4());
    Cocycle c = build_bicharacter_cocycle(g.B, klein4(), klein_pairing_chi());
    REQUIRE(check_cocycle(g.B, c).ok());
    DeltaMaps dm = make_delta_maps(g.B, g.S);
    const TensorContext& ctx = *g.B.ctx;
    const int n = ctx.n();

    Vec V(n);
    for (int gg = 0; gg < ctx.n2(); ++gg)
        if (!c.F[gg].is_zero())
            axpy(V, c.F[gg], ctx.H.mul(g.S.S.apply(unit_vec(n, gg / n)), unit_vec(n, gg % n)));

    // delta_S(F1_(1) (x) F1_(2) (x) F2) = 1 (x)_R (S F1) F2
    Vec lhs((size_t)ctx.n3());
    for (int gg = 0; gg < ctx.n2(); ++gg) {
        if (c.F[gg].is_zero()) continue;
        for (const auto& [c2, y] : g.B.dcol(gg / n)) lhs[c2 * n + (gg % n)] += c.F[gg] * y;
    }
    TensorCoset t3 = make_coset(g.B.ctx, 3, lhs);
    CHECK(dm.delta_S(t3).lift == ctx.reduce2(ctx.outer2(ctx.unitH, V)));

    // delta_S_inv(F1 (x) F2_(1) (x) F2_(2)) = (S^-1 F2) F1 (x)_R 1
    Vec rhs((size_t)ctx.n3());
    Vec SinvV(n);
    for (int gg = 0; gg < ctx.n2(); ++gg) {
        if (c.F[gg].is_zero()) continue;
        for (const auto& [c2, y] : g.B.dcol(gg % n)) rhs[(gg / n) * n * n + c2] += c.F[gg] * y;
        axpy(SinvV, c.F[gg], ctx.H.mul(g.S.S_inv.apply(unit_vec(n, gg % n)), unit_vec(n, gg / n)));
    }
    TensorCoset t3b = make_coset(g.B.ctx, 3, rhs);
    CHECK(dm.delta_S_inv(t3b).lift == ctx.reduce2(ctx.outer2(SinvV, ctx.unitH)));
}

TEST_CASE("kernel stability of S (x) id holds only over the trivial base") {
    HopfInstance g = build_group_hopf(klein4());
    CHECK(kernel_S_id_stable(g.B, g.S));

    // recorded counterexamples: both checks below document that the
    // inclusion (S (x) id) I_R inside I_R genuinely fails away from the
    // trivial base even though mu (S (x) id) I_R = 0 always holds
    HopfInstance gd = build_groupoid_algebroid(GroupoidTable::pair_groupoid(2));
    CHECK(check_hopf(gd.B, gd.S).find("mu_S_id_kernel")->verdict == Verdict::pass);
    CHECK_FALSE(kernel_S_id_stable(gd.B, gd.S));

    HopfInstance pm = build_pair_algebroid(matrix_algebra(2));
    CHECK(check_hopf(pm.B, pm.S).find("mu_S_id_kernel")->verdict == Verdict::pass);
    CHECK_FALSE(kernel_S_id_stable(pm.B, pm.S));
}

TEST_CASE("push-through of vanishing sums") {
    for (auto make : {+[] { return build_group_hopf(klein4()); },
                      +[] { return build_groupoid_algebroid(GroupoidTable::pair_groupoid(2)); },
                      +[] { return build_pair_algebroid(group_algebra(cyclic2())); }}) {
        HopfInstance p = make();
        CHECK(check_pushthrough(p.B).ok());
        CHECK(check_pushthrough_direct(p.B).ok());
    }
    // composite form only on the large instance; it implies the direct form
    HopfInstance pm = build_pair_algebroid(matrix_algebra(2));
    CHECK(check_pushthrough(pm.B).ok());
}

TEST_CASE("delta map construction rejects broken instances") {
    HopfInstance g = build_groupoid_algebroid(GroupoidTable::pair_groupoid(2));
    AntipodePair id{Matrix::identity(4), Matrix::identity(4)};
    CHECK_THROWS_AS(make_delta_maps(g.B, id), IllDefined);
}
