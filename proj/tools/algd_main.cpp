// Command-line front end: load instances and cocycles, run the check suites,
// twist, evaluate identities, and build instances from table files.
//
// Exit codes: 0 all checks passed (skips allowed), 1 a named check failed,
// 2 malformed input or syntax error, 3 structurally ill-defined input
// (non-commuting source/target images, ill-defined quotient operation).

#include "algd/instances.hpp"
#include "algd/io.hpp"
#include "algd/sweedler.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace algd;

namespace {

struct Flags {
    bool verify_all = false;
    bool skip_lift_validation = false;
    bool json_out = false;
    unsigned long long seed = 0;
    int extra_samples = 0;
};

void print_report(const Report& rep, bool json) {
    if (json) {
        nlohmann::ordered_json j;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& e : rep.entries) {
            nlohmann::ordered_json c;
            c["name"] = e.name;
            c["verdict"] = e.verdict == Verdict::pass ? "pass" : e.verdict == Verdict::fail ? "fail" : "skipped";
            if (!e.detail.empty()) c["detail"] = e.detail;
            j["checks"].push_back(std::move(c));
        }
        j["failures"] = rep.failures();
        j["elapsed_ms"] = rep.elapsed_ms;
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << rep.to_text();
        std::cout << (rep.ok() ? "OK" : "FAILED") << " (" << rep.entries.size() << " checks, "
                  << rep.failures() << " failures, " << rep.elapsed_ms << " ms)\n";
    }
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

int run_check(const std::string& instance_path, const Flags& flags) {
    Timer timer;
    LoadedInstance inst = load_instance(instance_path);
    Report rep = inst.structural;
    rep.merge("bialgebroid.", check_bialgebroid(inst.B));
    if (inst.S) {
        rep.merge("hopf.", check_hopf(inst.B, *inst.S));
        rep.merge("coring.", check_coring_antihom(inst.B, *inst.S));
        rep.merge("alphaS.", check_alpha_S_lemma(inst.B, *inst.S));
        if (!flags.skip_lift_validation) {
            DeltaMaps dm(inst.B, *inst.S);
            rep.merge("delta_maps.", dm.validate());
        }
    } else {
        rep.skip("hopf", "no antipode in the file");
    }
    rep.elapsed_ms = timer.ms();
    print_report(rep, flags.json_out);
    return rep.ok() ? 0 : 1;
}

int run_twist(const std::string& instance_path, const std::string& cocycle_path,
              const std::string& emit_path, const Flags& flags) {
    Timer timer;
    LoadedInstance inst = load_instance(instance_path);
    Report rep = inst.structural;
    LoadedCocycle lc = load_cocycle(cocycle_path, *inst.B.ctx);
    if (!lc.Fbar) {
        lc.Fbar = invert_cocycle(inst.B, lc.F);
        rep.add("cocycle_inverted", lc.Fbar.has_value(),
                lc.Fbar ? "" : "no inverse witness found in the bounded search");
        if (!lc.Fbar) {
            rep.elapsed_ms = timer.ms();
            print_report(rep, flags.json_out);
            return 1;
        }
    }
    Cocycle c{lc.F, *lc.Fbar};

    std::optional<TwistedStructure> T;
    if (!inst.S) {
        rep.merge("cocycle.", check_cocycle(inst.B, c));
        try {
            T = twist_structure(inst.B, c);
            rep.merge("twist.", T->structure_report);
        } catch (const AssociativityFailure& e) {
            rep.add("twist.structure", false, e.what());
        }
        rep.skip("antipode_stage", "no antipode in the file");
    } else if (flags.verify_all) {
        MainTheoremResult mt = verify_main_theorem(inst.B, c, *inst.S);
        rep.merge("", mt.report);
        T = std::move(mt.T);
        if (T && T->S_F) {
            rep.merge("untwist.", untwist_roundtrip(inst.B, c, *inst.S, *T));
            rep.merge("transport.", check_twist_transport(inst.B, c, *T));
        }
    } else {
        rep.merge("cocycle.", check_cocycle(inst.B, c));
        try {
            T = twist_structure(inst.B, c);
        } catch (const AssociativityFailure& e) {
            rep.add("twist.structure", false, e.what());
        }
        if (T) {
            rep.merge("twist.", T->structure_report);
            VFData vf = compute_VF(inst.B, c, *inst.S);
            rep.merge("vf.", vf.rep);
            T->V_F = vf.V;
            T->V_F_inv = vf.Vinv;
            if (vf.Vinv) {
                auto [SF, arep] = twisted_antipode(inst.B, c, *T, *inst.S, vf.V, vf.Vinv);
                T->S_F = SF;
                rep.merge("antipode.", arep);
            } else {
                rep.skip("antipode_stage", "V_F not invertible");
            }
        }
    }

    if (!emit_path.empty() && T) {
        write_json_file(emit_path, instance_to_json(T->twisted, T->S_F ? &*T->S_F : nullptr));
        rep.add("emitted", true, emit_path);
    }
    rep.elapsed_ms = timer.ms();
    print_report(rep, flags.json_out);
    return rep.ok() ? 0 : 1;
}

int run_eval(const std::string& instance_path, const std::string& cocycle_path,
             const std::string& what, const Flags& flags) {
    Timer timer;
    LoadedInstance inst = load_instance(instance_path);
    Report rep;

    std::optional<Cocycle> c;
    std::optional<TwistedStructure> T;
    if (!cocycle_path.empty()) {
        LoadedCocycle lc = load_cocycle(cocycle_path, *inst.B.ctx);
        if (!lc.Fbar) lc.Fbar = invert_cocycle(inst.B, lc.F);
        if (!lc.Fbar) {
            rep.add("cocycle_inverted", false, "no inverse witness found");
        } else {
            c = Cocycle{lc.F, *lc.Fbar};
            Report cr = check_cocycle(inst.B, *c);
            rep.merge("cocycle.", cr);
            if (cr.ok() && inst.S) {
                T = twist_structure(inst.B, *c);
                VFData vf = compute_VF(inst.B, *c, *inst.S);
                T->V_F = vf.V;
                T->V_F_inv = vf.Vinv;
                if (vf.Vinv) {
                    auto [SF, arep] = twisted_antipode(inst.B, *c, *T, *inst.S, vf.V, vf.Vinv);
                    T->S_F = SF;
                }
            }
        }
    }

    Binding b;
    b.B = &inst.B;
    if (inst.S) b.S = &*inst.S;
    if (c) b.c = &*c;
    if (T) b.T = &*T;
    EvalOptions opts;
    opts.validate_cocycle_lifts = !flags.skip_lift_validation && c.has_value();

    std::vector<CorpusEntry> entries;
    if (std::filesystem::exists(what)) {
        std::ifstream in(what);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        entries = parse_corpus(text);
    } else {
        entries.push_back({"identity", what});
    }
    rep.merge("", run_corpus(entries, b, opts));
    rep.elapsed_ms = timer.ms();
    print_report(rep, flags.json_out);
    return rep.ok() ? 0 : 1;
}

int run_build(const std::string& table_path, const std::string& emit_instance,
              const std::string& emit_cocycle, const Flags& flags) {
    using nlohmann::json;
    Timer timer;
    json j = io_detail::read_json(table_path);
    if (!j.contains("type") || !j["type"].is_string()) throw MalformedFile("table needs a type tag");
    std::string type = j["type"].get<std::string>();
    Report rep;

    auto emit = [&](const HopfInstance& inst) {
        if (!emit_instance.empty()) {
            write_json_file(emit_instance, instance_to_json(inst.B, &inst.S));
            rep.add("emitted_instance", true, emit_instance);
        }
    };

    auto group_table = [&](const json& tj) {
        if (!tj.contains("product")) throw MalformedFile("group table needs a product matrix");
        std::vector<std::vector<int>> prod;
        for (const auto& row : tj["product"]) prod.push_back(row.get<std::vector<int>>());
        return GroupTable::from_product(std::move(prod));
    };

    if (type == "group") {
        HopfInstance inst = build_group_hopf(group_table(j));
        rep.merge("bialgebroid.", check_bialgebroid(inst.B));
        rep.merge("hopf.", check_hopf(inst.B, inst.S));
        emit(inst);
    } else if (type == "bicharacter") {
        GroupTable g = group_table(j);
        HopfInstance inst = build_group_hopf(g);
        if (!j.contains("chi")) throw MalformedFile("bicharacter table needs chi");
        Matrix chi = io_detail::matrix(j["chi"], g.order, g.order, "chi");
        Cocycle c = build_bicharacter_cocycle(inst.B, g, chi);
        rep.merge("cocycle.", check_cocycle(inst.B, c));
        emit(inst);
        if (!emit_cocycle.empty()) {
            write_json_file(emit_cocycle, cocycle_to_json(c, *inst.B.ctx));
            rep.add("emitted_cocycle", true, emit_cocycle);
        }
    } else if (type == "groupoid") {
        GroupoidTable g;
        g.objects = j.at("objects").get<int>();
        for (const auto& m : j.at("morphisms")) g.morphisms.emplace_back(m[0].get<int>(), m[1].get<int>());
        for (const auto& row : j.at("product")) g.product.push_back(row.get<std::vector<int>>());
        g.inverse = j.at("inverse").get<std::vector<int>>();
        g.identity_of = j.at("identity_of").get<std::vector<int>>();
        HopfInstance inst = build_groupoid_algebroid(g);
        rep.merge("bialgebroid.", check_bialgebroid(inst.B));
        rep.merge("hopf.", check_hopf(inst.B, inst.S));
        emit(inst);
    } else if (type == "pair") {
        if (!j.contains("R")) throw MalformedFile("pair table needs the base presentation R");
        AlgebraPresentation R = io_detail::algebra(j["R"], "R");
        HopfInstance inst = build_pair_algebroid(R);
        rep.merge("bialgebroid.", check_bialgebroid(inst.B));
        rep.merge("hopf.", check_hopf(inst.B, inst.S));
        emit(inst);
    } else {
        throw MalformedFile("unknown table type: " + type);
    }
    rep.elapsed_ms = timer.ms();
    print_report(rep, flags.json_out);
    return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Hopf algebroid twisting kit"};
    app.require_subcommand(1);
    Flags flags;

    std::string instance_path, cocycle_path, emit_path, eval_what, table_path, emit_instance, emit_cocycle;

    CLI::App* check = app.add_subcommand("check", "verify the axioms of an instance file");
    check->add_option("--instance", instance_path, "instance file")->required();
    check->add_flag("--skip-lift-validation", flags.skip_lift_validation,
                    "skip well-definedness validation of quotient operations");
    check->add_flag("--json", flags.json_out, "structured report");

    CLI::App* twist = app.add_subcommand("twist", "twist an instance by a cocycle");
    twist->add_option("--instance", instance_path, "instance file")->required();
    twist->add_option("--cocycle", cocycle_path, "cocycle file")->required();
    twist->add_flag("--verify-all", flags.verify_all, "full identity catalog and untwist round trip");
    twist->add_option("--emit", emit_path, "write the twisted instance");
    twist->add_flag("--json", flags.json_out, "structured report");

    CLI::App* eval = app.add_subcommand("eval", "evaluate identities against an instance");
    eval->add_option("--instance", instance_path, "instance file")->required();
    eval->add_option("--cocycle", cocycle_path, "cocycle file");
    eval->add_option("what", eval_what, "corpus file path or a single identity text")->required();
    eval->add_flag("--skip-lift-validation", flags.skip_lift_validation,
                   "skip representative validation of cocycle lifts");
    eval->add_flag("--json", flags.json_out, "structured report");

    CLI::App* build = app.add_subcommand("build", "build an instance from a table file");
    build->add_option("--table", table_path, "table file")->required();
    build->add_option("--emit-instance", emit_instance, "write the instance");
    build->add_option("--emit-cocycle", emit_cocycle, "write the cocycle (bicharacter tables)");
    build->add_flag("--json", flags.json_out, "structured report");

    app.add_option("--seed", flags.seed, "seed for sampling beyond the spanning sets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(instance_path, flags);
        if (twist->parsed()) return run_twist(instance_path, cocycle_path, emit_path, flags);
        if (eval->parsed()) return run_eval(instance_path, cocycle_path, eval_what, flags);
        if (build->parsed()) return run_build(table_path, emit_instance, emit_cocycle, flags);
    } catch (const MalformedFile& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const SyntaxError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const MalformedCorpus& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const CommutationFailure& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const IllDefined& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const AssociativityFailure& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
