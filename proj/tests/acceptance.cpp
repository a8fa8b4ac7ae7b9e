// Acceptance suite: runs every acceptance criterion against the bundled data
// files and prints one PASS/FAIL line per criterion. All comparisons are
// exact (rational arithmetic, zero tolerance); the only numeric thresholds
// are the wall-clock budgets stated with each criterion.

#include "algd/instances.hpp"
#include "algd/io.hpp"
#include "algd/sweedler.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace algd;

namespace {

const std::string kData = ALGD_DATA_DIR;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Criterion {
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Criterion> g_results;

void record(const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({name, pass, detail});
    std::printf("%s %s  (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing data file " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct Bundled {
    std::string name;
    LoadedInstance inst;
};

struct BundledPair {
    std::string name;
    const Bundled* inst;
    Cocycle c;
    std::optional<TwistedStructure> T;  // filled by the main-theorem sweep
    bool main_ok = false;
};

std::vector<Bundled> load_instances() {
    std::vector<Bundled> out;
    for (const char* n : {"z2", "z2z2", "gpd_pair2", "gpd_z2disj", "pair_qz2", "pair_m2", "sweedler4"}) {
        Bundled b;
        b.name = n;
        b.inst = load_instance(kData + "/instances/" + std::string(n) + ".json");
        if (!b.inst.S) throw std::runtime_error("bundled instance lacks an antipode");
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<BundledPair> load_pairs(const std::vector<Bundled>& instances) {
    auto find = [&](const std::string& n) -> const Bundled* {
        for (const auto& b : instances)
            if (b.name == n) return &b;
        throw std::runtime_error("unknown instance " + n);
    };
    std::vector<std::pair<std::string, std::string>> spec = {
        {"z2z2", "z2z2_bichar"},   {"z2z2", "z2z2_id"},
        {"z2", "z2_self"},         {"gpd_pair2", "gpd_pair2_twist"},
        {"gpd_z2disj", "gpd_z2disj_block"}, {"pair_qz2", "pair_qz2_id"},
        {"pair_m2", "pair_m2_id"}, {"pair_m2", "pair_m2_twist"},
        {"sweedler4", "sweedler_twist_g"},  {"sweedler4", "sweedler_twist_xgx"}};
    std::vector<BundledPair> out;
    for (const auto& [iname, cname] : spec) {
        BundledPair p;
        p.inst = find(iname);
        p.name = iname + " x " + cname;
        LoadedCocycle lc = load_cocycle(kData + "/cocycles/" + cname + ".json", *p.inst->inst.B.ctx);
        if (!lc.Fbar) lc.Fbar = invert_cocycle(p.inst->inst.B, lc.F);
        if (!lc.Fbar) throw std::runtime_error("bundled cocycle not invertible: " + cname);
        p.c = Cocycle{lc.F, *lc.Fbar};
        out.push_back(std::move(p));
    }
    return out;
}

// ---- criterion 1: identity twist reproduces everything bit-exactly --------

void criterion_fixed_point(const std::vector<Bundled>& instances) {
    bool ok = true;
    std::string detail;
    for (const auto& b : instances) {
        double t0 = now_ms();
        Cocycle c = identity_cocycle(b.inst.B);
        MainTheoremResult mt = verify_main_theorem(b.inst.B, c, *b.inst.S);
        double dt = (now_ms() - t0) / 1000.0;
        bool exact = mt.report.ok() && mt.T && mt.T->S_F && mt.T->R_F.table == b.inst.B.ctx->R.table &&
                     mt.T->R_F.unit == b.inst.B.ctx->R.unit && mt.T->alpha_F == b.inst.B.ctx->alpha &&
                     mt.T->beta_F == b.inst.B.ctx->beta && mt.T->twisted.delta == b.inst.B.delta &&
                     mt.T->twisted.epsilon == b.inst.B.epsilon && mt.T->V_F == b.inst.B.ctx->unitH &&
                     mt.T->S_F->S == b.inst.S->S && mt.T->S_F->S_inv == b.inst.S->S_inv;
        bool in_time = dt < 5.0;
        if (!exact || !in_time) {
            ok = false;
            detail += b.name + (exact ? " slow" : " inexact") + "; ";
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s %.2fs ", b.name.c_str(), dt);
        detail += buf;
    }
    record("fixed-point: identity twist is exact on every bundled instance, < 5 s each", ok, detail);
}

// ---- criterion 2: main theorem on the group-algebra twist -----------------

void criterion_main_theorem_group(const std::vector<Bundled>& instances) {
    double t0 = now_ms();
    const Bundled* z2z2 = nullptr;
    for (const auto& b : instances)
        if (b.name == "z2z2") z2z2 = &b;
    LoadedCocycle lc = load_cocycle(kData + "/cocycles/z2z2_bichar.json", *z2z2->inst.B.ctx);
    Cocycle c{lc.F, *lc.Fbar};
    bool ok = check_cocycle(z2z2->inst.B, c).ok();
    MainTheoremResult mt = verify_main_theorem(z2z2->inst.B, c, *z2z2->inst.S);
    ok = ok && mt.report.ok() && mt.T;
    std::string stage = "cocycle+structure+VF";
    if (ok && mt.T->V_F_inv) {
        // V_F invertibility decided by the solver: the antipode stage plus the
        // full catalog ran inside verify_main_theorem; double-check the suite
        ok = ok && mt.T->S_F && check_hopf(mt.T->twisted, *mt.T->S_F).ok();
        stage = "full catalog incl. twisted Hopf suite";
    }
    double dt = (now_ms() - t0) / 1000.0;
    ok = ok && dt < 30.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s, %.2fs", stage.c_str(), dt);
    record("main theorem: group-algebra bicharacter twist verifies end to end, < 30 s", ok, buf);
}

// ---- criterion 3: the noncommutative base instance -------------------------

void criterion_noncommutative_base(const std::vector<Bundled>& instances) {
    double t0 = now_ms();
    const Bundled* pm = nullptr;
    for (const auto& b : instances)
        if (b.name == "pair_m2") pm = &b;
    const BialgebroidInstance& B = pm->inst.B;
    const AntipodePair& S = *pm->inst.S;
    bool ok = B.ctx->n() == 16 && B.ctx->n2() == 256 && B.ctx->dim2() == 64;
    ok = ok && check_bialgebroid(B).ok();
    ok = ok && check_hopf(B, S).ok();
    ok = ok && check_coring_antihom(B, S).ok();
    ok = ok && check_alpha_S_lemma(B, S).ok();
    DeltaMaps dm(B, S);
    ok = ok && dm.validate().ok();
    double dt = (now_ms() - t0) / 1000.0;
    ok = ok && dt < 120.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "dim H(x)_R H = %d, %.2fs", B.ctx->dim2(), dt);
    record("noncommutative base: matrix pair algebroid passes the full suite, < 2 min", ok, buf);
}

// ---- criterion 4: groupoid pipeline with nontrivial kernel ----------------

void criterion_groupoid(const std::vector<Bundled>& instances, const std::vector<BundledPair>& pairs) {
    double t0 = now_ms();
    bool ok = true;
    std::string detail;
    for (const char* name : {"gpd_pair2", "gpd_z2disj"}) {
        const Bundled* g = nullptr;
        for (const auto& b : instances)
            if (b.name == name) g = &b;
        ok = ok && g->inst.B.ctx->I2().dim() > 0;
        ok = ok && check_bialgebroid(g->inst.B).ok() && check_hopf(g->inst.B, *g->inst.S).ok();
    }
    // kernel cross-check for every verified cocycle: the supplied/bundled
    // ones plus everything the solver finds on the groupoid instance
    int checked = 0;
    for (const auto& p : pairs) {
        if (p.inst->name != "gpd_pair2" && p.inst->name != "gpd_z2disj") continue;
        if (!check_cocycle(p.inst->inst.B, p.c).ok()) {
            ok = false;
            continue;
        }
        TwistedStructure T = twist_structure(p.inst->inst.B, p.c);
        const CheckResult* cx = T.structure_report.find("IRF_crosscheck");
        ok = ok && cx && cx->verdict == Verdict::pass && T.structure_report.ok();
        ++checked;
    }
    for (const auto& b : instances) {
        if (b.name != "gpd_pair2") continue;
        auto res = find_cocycles_near_identity(b.inst.B);
        for (const auto& c : res.found) {
            TwistedStructure T = twist_structure(b.inst.B, c);
            const CheckResult* cx = T.structure_report.find("IRF_crosscheck");
            ok = ok && cx && cx->verdict == Verdict::pass;
            ++checked;
        }
    }
    double dt = (now_ms() - t0) / 1000.0;
    ok = ok && dt < 60.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d cocycles cross-checked, %.2fs", checked, dt);
    record("groupoid pipeline: nontrivial kernel, kernel transport cross-check, < 1 min", ok, buf);
}

// ---- criterion 5: untwist round trip ---------------------------------------

void criterion_untwist(std::vector<BundledPair>& pairs) {
    bool ok = true;
    int covered = 0;
    std::string detail;
    for (auto& p : pairs) {
        MainTheoremResult mt = verify_main_theorem(p.inst->inst.B, p.c, *p.inst->inst.S);
        p.main_ok = mt.report.ok() && mt.T && mt.T->S_F;
        if (mt.T) p.T = std::move(mt.T);
        if (!p.main_ok) continue;  // criterion ranges over pairs where the theorem verified
        Report rt = untwist_roundtrip(p.inst->inst.B, p.c, *p.inst->inst.S, *p.T);
        bool v_exact = rt.find("roundtrip_V") && rt.find("roundtrip_V")->verdict == Verdict::pass &&
                       rt.find("roundtrip_V_inverse")->verdict == Verdict::pass;
        if (!rt.ok() || !v_exact) {
            ok = false;
            detail += p.name + "; ";
        }
        ++covered;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d pairs recovered exactly", covered);
    record("untwist: inverse twist recovers all matrices and V exactly wherever the theorem verified",
           ok && covered > 0, detail + buf);
}

// ---- criterion 6: evaluator vs native engine -------------------------------

void criterion_differential(const std::vector<BundledPair>& pairs) {
    auto corpus = parse_corpus(read_file(kData + "/corpus.txt"));
    int disagreements = 0, compared = 0;
    for (const auto& p : pairs) {
        const BialgebroidInstance& B = p.inst->inst.B;
        const AntipodePair& S = *p.inst->inst.S;
        Binding b;
        b.B = &B;
        b.S = &S;
        b.c = &p.c;
        if (p.T && p.T->S_F) b.T = &*p.T;
        Report dsl = run_corpus(corpus, b);

        Report native;
        native.merge("hopf.", check_hopf(B, S));
        native.merge("halphar.", check_lemma_halphar(B));
        native.merge("cocycle.", check_cocycle(B, p.c));
        if (b.T) native.merge("sec3.", verify_section3(B, p.c, S, *p.T));

        const std::vector<std::pair<const char*, const char*>> table = {
            {"absorb-source", "halphar.absorb_alpha"},
            {"absorb-target", "halphar.absorb_beta"},
            {"antipode-axiom-left", "hopf.antipode_left"},
            {"antipode-axiom-right", "hopf.antipode_right"},
            {"cocycle-identity", "cocycle.cocycle_identity"},
            {"cocycle-counital-left", "cocycle.counital_left"},
            {"cocycle-counital-right", "cocycle.counital_right"},
            {"cocycle-inverse-right", "cocycle.invertible_right"},
            {"twisted-source-target", "sec3.twisted_S_beta_alpha"},
            {"conjugation-lemma-left", "sec3.conjugation_lemma_left"},
            {"conjugation-lemma-right", "sec3.conjugation_lemma_right"},
            {"twisted-antipode-axiom-left", "sec3.twisted_antipode_left"},
            {"twisted-antipode-axiom-right", "sec3.twisted_antipode_right"}};
        for (const auto& [dname, nname] : table) {
            const CheckResult* d = dsl.find(dname);
            const CheckResult* n = native.find(nname);
            if (!d || !n || d->verdict == Verdict::skipped || n->verdict == Verdict::skipped) continue;
            ++compared;
            if ((d->verdict == Verdict::pass) != (n->verdict == Verdict::pass)) ++disagreements;
        }
        // and every corpus verdict on a verified pair must be a pass
        for (const auto& e : dsl.entries)
            if (e.verdict == Verdict::fail) ++disagreements;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d comparisons, %d disagreements", compared, disagreements);
    record("differential: evaluator verdicts equal native verdicts on every bundled pair",
           disagreements == 0 && compared > 0, buf);
}

// ---- criterion 7: mutation suite -------------------------------------------

// Deterministic single-entry mutants per instance: structure constants, the
// coproduct lift (positions that change the class), the antipode, the counit.
void criterion_mutants(const std::vector<Bundled>& instances) {
    int total = 0, detected = 0;
    std::string misses;
    for (const auto& b : instances) {
        const BialgebroidInstance& B = b.inst.B;
        const AntipodePair& S = *b.inst.S;
        const TensorContext& ctx = *B.ctx;
        const int n = ctx.n();

        auto detects = [&](const BialgebroidInstance& mb, const AntipodePair& ms) {
            if (!mb.ctx->H.validate().ok() || !mb.ctx->R.validate().ok()) return true;
            if (!check_algebra_map({mb.ctx->R, mb.ctx->H, mb.ctx->alpha}).ok()) return true;
            if (!check_bialgebroid(mb).ok()) return true;
            if (!check_hopf(mb, ms).ok()) return true;
            return false;
        };

        // structure constants of H: three deterministic positions
        for (int k = 0; k < 3; ++k) {
            size_t pos = ((size_t)k * 7919 + 13) % ((size_t)n * n * n);
            int i = (int)(pos / (n * n)), j = (int)((pos / n) % n), l = (int)(pos % n);
            std::vector<std::tuple<int, int, int, Rational>> mu;
            for (int a = 0; a < n; ++a)
                for (int bb = 0; bb < n; ++bb)
                    for (const auto& [cc, v] : ctx.H.prod(a, bb)) mu.emplace_back(a, bb, cc, v);
            mu.emplace_back(i, j, l, Rational(1));
            AlgebraPresentation H2 = AlgebraPresentation::from_triples(n, ctx.H.unit, mu);
            ++total;
            bool caught = true;
            if (H2.validate().ok()) {
                // mutation kept associativity: rebuild and run the suite
                try {
                    CtxPtr c2 = build_context(H2, ctx.R, ctx.alpha, ctx.beta);
                    BialgebroidInstance B2 = make_bialgebroid(c2, B.delta, B.epsilon);
                    caught = detects(B2, S);
                } catch (const CommutationFailure&) {
                    caught = true;
                }
            }
            detected += caught;
            if (!caught) misses += b.name + ".mu" + std::to_string(k) + " ";
        }

        // coproduct lift: three positions whose perturbation changes the class
        int made = 0;
        for (int col = 0; col < n && made < 3; ++col)
            for (int row = 0; row < ctx.n2() && made < 3; ++row) {
                Vec v = B.delta.col(col);
                v[row] += Rational(1);
                if (ctx.reduce2(v) == B.delta.col(col)) continue;  // same class, same instance
                Matrix d2 = B.delta;
                d2.at(row, col) += Rational(1);
                BialgebroidInstance B2 = make_bialgebroid(B.ctx, d2, B.epsilon);
                ++total;
                ++made;
                bool caught = detects(B2, S);
                detected += caught;
                if (!caught) misses += b.name + ".delta ";
                col += 3;  // spread positions across columns
                break;
            }

        // antipode entries
        for (int k = 0; k < 3; ++k) {
            int i = (int)((7 * k + 1) % n), j = (int)((11 * k + 2) % n);
            AntipodePair S2 = S;
            S2.S.at(i, j) += Rational(1);
            ++total;
            bool caught = detects(B, S2);
            detected += caught;
            if (!caught) misses += b.name + ".S" + std::to_string(k) + " ";
        }

        // counit entries
        for (int k = 0; k < 2; ++k) {
            int i = (int)(k % ctx.R.dim), j = (int)((5 * k + 3) % n);
            Matrix e2 = B.epsilon;
            e2.at(i, j) += Rational(1);
            BialgebroidInstance B2 = make_bialgebroid(B.ctx, B.delta, e2);
            ++total;
            bool caught = detects(B2, S);
            detected += caught;
            if (!caught) misses += b.name + ".eps" + std::to_string(k) + " ";
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d/%d mutants detected %s", detected, total, misses.c_str());
    record("negative controls: every bundled mutant trips at least one named check", detected == total,
           buf);
}

// ---- criterion 8: kernel observations ---------------------------------------

void criterion_observations(const std::vector<Bundled>& instances, const std::vector<BundledPair>& pairs) {
    bool ok = true;
    std::string detail;
    for (const auto& b : instances) {
        Report pt = check_pushthrough(b.inst.B);
        if (!pt.ok()) {
            ok = false;
            detail += b.name + " pushthrough; ";
        }
        if (b.inst.B.ctx->n() <= 4 && !check_pushthrough_direct(b.inst.B).ok()) {
            ok = false;
            detail += b.name + " direct; ";
        }
    }
    int transports = 0;
    for (const auto& p : pairs) {
        if (!p.T) continue;
        Report tr = check_twist_transport(p.inst->inst.B, p.c, *p.T);
        if (!tr.ok()) {
            ok = false;
            detail += p.name + " transport; ";
        }
        ++transports;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu instances, %d transports", instances.size(), transports);
    record("observations: push-through and kernel relocation hold on all spanning sets", ok,
           detail + buf);
}

}  // namespace

int main() {
    try {
        std::vector<Bundled> instances = load_instances();
        std::vector<BundledPair> pairs = load_pairs(instances);

        criterion_fixed_point(instances);
        criterion_main_theorem_group(instances);
        criterion_noncommutative_base(instances);
        criterion_groupoid(instances, pairs);
        criterion_untwist(pairs);
        criterion_differential(pairs);
        criterion_mutants(instances);
        criterion_observations(instances, pairs);
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance harness (%s)\n", e.what());
        return 1;
    }

    int failures = 0;
    for (const auto& c : g_results) failures += !c.pass;
    std::printf("%d/%zu criteria passed\n", (int)g_results.size() - failures, g_results.size());
    return failures == 0 ? 0 : 1;
}
