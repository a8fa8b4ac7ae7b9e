#include "algd/sweedler.hpp"

#include "algd/instances.hpp"
#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

using namespace algd;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<CorpusEntry> corpus() {
    static std::vector<CorpusEntry> c = parse_corpus(read_file(std::string(ALGD_DATA_DIR) + "/corpus.txt"));
    return c;
}

struct BoundInstance {
    HopfInstance inst;
    Cocycle c;
    std::optional<TwistedStructure> T;
    Binding bind() {
        Binding b;
        b.B = &inst.B;
        b.S = &inst.S;
        b.c = &c;
        if (T) b.T = &*T;
        return b;
    }
};

BoundInstance bound_klein() {
    BoundInstance bi{build_group_hopf(klein4()), {}, {}};
    bi.c = build_bicharacter_cocycle(bi.inst.B, klein4(), test::klein_pairing_chi());
    bi.T = *verify_main_theorem(bi.inst.B, bi.c, bi.inst.S).T;
    return bi;
}

BoundInstance bound_groupoid() {
    BoundInstance bi{build_groupoid_algebroid(GroupoidTable::pair_groupoid(2)), {}, {}};
    auto res = find_cocycles_near_identity(bi.inst.B);
    REQUIRE_FALSE(res.found.empty());
    bi.c = res.found[0];
    bi.T = *verify_main_theorem(bi.inst.B, bi.c, bi.inst.S).T;
    return bi;
}

BoundInstance bound_sweedler() {
    BoundInstance bi{test::sweedler4(), {}, {}};
    const TensorContext& ctx = *bi.inst.B.ctx;
    Vec F = ctx.unit2;
    for (auto [i, j, v] : {std::tuple<int, int, int>{0, 0, 1}, {0, 1, -1}, {1, 0, -1}, {1, 1, 1}})
        F[ctx.idx2(i, j)] += Rational(v);
    auto Fbar = invert_cocycle(bi.inst.B, ctx.reduce2(F));
    REQUIRE(Fbar);
    bi.c = Cocycle{ctx.reduce2(F), *Fbar};
    bi.T = *verify_main_theorem(bi.inst.B, bi.c, bi.inst.S).T;
    return bi;
}

}  // namespace

TEST_CASE("parser round trips") {
    for (const auto& entry : corpus()) {
        Identity id = parse_identity(entry.text);
        std::string printed = print_identity(id);
        Identity again = parse_identity(printed);
        INFO(entry.name << ": " << printed);
        CHECK(expr_equal(id.lhs, again.lhs));
        CHECK(expr_equal(id.rhs, again.rhs));
        CHECK(print_identity(again) == printed);
    }
}

TEST_CASE("parser structure and precedence") {
    Identity id = parse_identity("1 (x)R S(h) == 1 (x)R S(h)");
    REQUIRE(id.lhs->kind == Expr::Kind::Tensor);
    CHECK(id.lhs->legs.size() == 2);
    CHECK_FALSE(id.lhs->twisted_tensor);

    // splits bind tighter than products: S(F1)_(1) * F2 is (S(F1)_(1)) * F2
    ExprPtr e = parse_expression("S(F1)_(1) * F2 (x)R S(F1)_(2) * S(h) * V");
    REQUIRE(e->kind == Expr::Kind::Tensor);
    REQUIRE(e->legs[0]->kind == Expr::Kind::Prod);
    CHECK(e->legs[0]->factors[0]->kind == Expr::Kind::Split);
    CHECK(e->legs[0]->factors[0]->base->kind == Expr::Kind::Map);
    CHECK(e->legs[1]->factors.size() == 3);

    ExprPtr tw = parse_expression("h_(1F) (x)RF h_(2F)");
    CHECK(tw->twisted_tensor);
    CHECK(tw->legs[0]->twisted_split);

    ExprPtr sc = parse_expression("1/2 * h + 3 * S(h) - h");
    REQUIRE(sc->kind == Expr::Kind::Sum);
    CHECK(sc->terms.size() == 3);
    CHECK(sc->terms[0].second->coef == Rational(1, 2));
}

TEST_CASE("parser rejects malformed input with positions") {
    auto expect_err = [](const std::string& text, int line, int col) {
        try {
            parse_identity(text);
            FAIL("expected syntax error for: " << text);
        } catch (const SyntaxError& e) {
            CHECK(e.line == line);
            if (col > 0) CHECK(e.col == col);
        }
    };
    expect_err("h ==", 1, 5);
    expect_err("h == )", 1, 6);
    expect_err("h_(3) == h", 1, 4);
    expect_err("qq == h", 1, 1);
    expect_err("h == h (x)R", 1, 12);
    expect_err("h_(1) (x)R h_(2) (x)RF h == h", 1, -1);  // mixed tags in one term
}

TEST_CASE("evaluation basics") {
    HopfInstance g = build_group_hopf(klein4());
    Binding b;
    b.B = &g.B;
    b.S = &g.S;

    CHECK(evaluate(parse_identity("h * 1 == h"), b).verdict == Verdict::pass);
    CHECK(evaluate(parse_identity("alpha(eps(h_(1))) * h_(2) == h"), b).verdict == Verdict::pass);
    CHECK(evaluate(parse_identity("S(h) == h"), b).verdict == Verdict::pass);  // exponent two
    CHECK(evaluate(parse_identity("2 * h == h + h"), b).verdict == Verdict::pass);
    CHECK(evaluate(parse_identity("h - h == 1 - 1"), b).verdict == Verdict::pass);

    // false identity carries a witness
    EvalOutcome bad = evaluate(parse_identity("h == 1"), b);
    CHECK(bad.verdict == Verdict::fail);
    CHECK(bad.detail.find("h=") != std::string::npos);

    // cocycle generators without a cocycle: skipped with reason
    EvalOutcome skip = evaluate(parse_identity("alpha(eps(F1)) * F2 == 1"), b);
    CHECK(skip.verdict == Verdict::skipped);
    CHECK(skip.detail == "no cocycle bound");
}

TEST_CASE("noncommutative flip identity fails with witness") {
    HopfInstance p = build_pair_algebroid(matrix_algebra(2));
    Binding b;
    b.B = &p.B;
    b.S = &p.S;
    EvalOutcome o = evaluate(parse_identity("S(h) (x)R 1 == 1 (x)R S(h)"), b);
    CHECK(o.verdict == Verdict::fail);
    CHECK_FALSE(o.detail.empty());
}

TEST_CASE("full corpus passes on the bound instances") {
    auto entries = corpus();
    for (auto make : {&bound_klein, &bound_groupoid, &bound_sweedler}) {
        BoundInstance bi = make();
        Binding b = bi.bind();
        Report rep = run_corpus(entries, b);
        INFO(rep.to_text());
        CHECK(rep.ok());
        for (const auto& e : rep.entries) CHECK(e.verdict == Verdict::pass);
    }
}

TEST_CASE("corpus without antipode or twist skips the dependent entries") {
    HopfInstance g = build_group_hopf(klein4());
    Binding b;
    b.B = &g.B;  // no antipode, no cocycle
    Report rep = run_corpus(corpus(), b);
    CHECK(rep.ok());
    int skipped = 0, passed = 0;
    for (const auto& e : rep.entries) {
        skipped += e.verdict == Verdict::skipped;
        passed += e.verdict == Verdict::pass;
    }
    CHECK(passed >= 4);   // counit and absorption identities need no extras
    CHECK(skipped >= 15);
    CHECK(rep.find("antipode-axiom-left")->verdict == Verdict::skipped);
    CHECK(rep.find("antipode-axiom-left")->detail == "no antipode bound");
}

TEST_CASE("differential agreement between the evaluator and the native engine") {
    for (auto make : {&bound_klein, &bound_groupoid, &bound_sweedler}) {
        BoundInstance bi = make();
        Binding b = bi.bind();
        auto entries = corpus();
        Report dsl = run_corpus(entries, b);

        Report native;
        native.merge("hopf.", check_hopf(bi.inst.B, bi.inst.S));
        native.merge("halphar.", check_lemma_halphar(bi.inst.B));
        native.merge("cocycle.", check_cocycle(bi.inst.B, bi.c));
        native.merge("sec3.", verify_section3(bi.inst.B, bi.c, bi.inst.S, *bi.T));

        auto agree = [&](const char* dname, const char* nname) {
            const CheckResult* d = dsl.find(dname);
            const CheckResult* n = native.find(nname);
            REQUIRE(d);
            REQUIRE(n);
            INFO(dname << " vs " << nname);
            CHECK((d->verdict == Verdict::pass) == (n->verdict == Verdict::pass));
        };
        agree("antipode-axiom-left", "hopf.antipode_left");
        agree("antipode-axiom-right", "hopf.antipode_right");
        agree("absorb-source", "halphar.absorb_alpha");
        agree("absorb-target", "halphar.absorb_beta");
        agree("cocycle-identity", "cocycle.cocycle_identity");
        agree("cocycle-counital-left", "cocycle.counital_left");
        agree("cocycle-counital-right", "cocycle.counital_right");
        agree("cocycle-inverse-right", "cocycle.invertible_right");
        agree("twisted-source-target", "sec3.twisted_S_beta_alpha");
        agree("conjugation-lemma-left", "sec3.conjugation_lemma_left");
        agree("conjugation-lemma-right", "sec3.conjugation_lemma_right");
        agree("twisted-antipode-axiom-left", "sec3.twisted_antipode_left");
        agree("twisted-antipode-axiom-right", "sec3.twisted_antipode_right");

        // corruption: both engines must flip together on a broken twisted antipode
        TwistedStructure T2 = *bi.T;
        T2.S_F->S.at(0, 0) += Rational(1);
        Binding b2 = b;
        b2.T = &T2;
        EvalOutcome d2 = evaluate(parse_identity("SF(h_(1F))_(1F) * h_(2F) (x)RF SF(h_(1F))_(2F) == 1 (x)RF SF(h)"), b2);
        Report n2 = verify_section3(bi.inst.B, bi.c, bi.inst.S, T2);
        CHECK((d2.verdict == Verdict::pass) ==
              (n2.find("twisted_antipode_left")->verdict == Verdict::pass));
    }
}

TEST_CASE("evaluator linearity in a fixed generator") {
    BoundInstance bi = bound_klein();
    Binding b = bi.bind();
    test::Rng rng(5);
    Vec hval = rng.vec(4);

    // evaluate an open expression at h and at 3h: the value scales
    auto value_of = [&](const Vec& hv) {
        Binding bb = b;
        bb.fixed["h"] = hv;
        dsl::Evaluator ev(bb, {});
        return ev.eval_side(parse_expression("S(h_(1))_(1) * h_(2) (x)R S(h_(1))_(2)")).v;
    };
    Vec v1 = value_of(hval);
    Vec v3 = value_of(scale(hval, Rational(3)));
    CHECK(v3 == scale(v1, Rational(3)));
}

TEST_CASE("verdicts are stable under basis permutation of the instance") {
    // permute the Klein basis: conjugate every structure map and re-run
    GroupTable g = klein4();
    std::vector<int> perm{2, 3, 0, 1};  // relabel e<->g2, g1<->g1g2
    // the permuted table: new index p(i); products conjugate
    std::vector<int> inv(4);
    for (int i = 0; i < 4; ++i) inv[perm[i]] = i;
    // permuting the basis of a group algebra means permuting the group table
    std::vector<std::vector<int>> prod(4, std::vector<int>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) prod[perm[i]][perm[j]] = perm[g.product[i][j]];
    GroupTable g2 = GroupTable::from_product(prod);
    HopfInstance a = build_group_hopf(g), bb = build_group_hopf(g2);

    // transport the cocycle along the permutation
    Cocycle ca = build_bicharacter_cocycle(a.B, g, test::klein_pairing_chi());
    Cocycle cb;
    cb.F.assign(16, Rational());
    cb.Fbar.assign(16, Rational());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cb.F[perm[i] * 4 + perm[j]] = ca.F[i * 4 + j];
            cb.Fbar[perm[i] * 4 + perm[j]] = ca.Fbar[i * 4 + j];
        }
    REQUIRE(check_cocycle(bb.B, cb).ok());

    auto Ta = *verify_main_theorem(a.B, ca, a.S).T;
    auto Tb = *verify_main_theorem(bb.B, cb, bb.S).T;
    Binding ba{&a.B, &a.S, &ca, &Ta, {}};
    Binding bbd{&bb.B, &bb.S, &cb, &Tb, {}};
    Report ra = run_corpus(corpus(), ba);
    Report rb = run_corpus(corpus(), bbd);
    REQUIRE(ra.entries.size() == rb.entries.size());
    for (size_t i = 0; i < ra.entries.size(); ++i) CHECK(ra.entries[i].verdict == rb.entries[i].verdict);
}

TEST_CASE("cocycle representative validation") {
    BoundInstance bi = bound_groupoid();
    Binding b = bi.bind();
    EvalOptions opts;
    opts.validate_cocycle_lifts = true;
    // verdicts of the conjugation lemma are representative independent
    CHECK_NOTHROW(evaluate(parse_identity("S(Fbar1)_(1) * V_(1) * F1 * Fbar2 (x)R "
                                          "S(Fbar1)_(2) * V_(2) * F2 == 1 (x)R V"),
                           b, opts));
}
