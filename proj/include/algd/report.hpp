#pragma once

#include <string>
#include <vector>

namespace algd {

enum class Verdict { pass, fail, skipped };

struct CheckResult {
    std::string name;
    Verdict verdict = Verdict::pass;
    std::string detail;  // witness description on failure, reason on skip
};

// Ordered list of named check outcomes. Deterministic for a given input;
// elapsed_ms is the only non-reproducible field.
struct Report {
    std::vector<CheckResult> entries;
    double elapsed_ms = 0.0;

    void add(std::string name, bool pass, std::string detail = "") {
        entries.push_back({std::move(name), pass ? Verdict::pass : Verdict::fail, std::move(detail)});
    }
    void skip(std::string name, std::string reason) {
        entries.push_back({std::move(name), Verdict::skipped, std::move(reason)});
    }
    void merge(const std::string& prefix, const Report& other) {
        for (const auto& e : other.entries)
            entries.push_back({prefix + e.name, e.verdict, e.detail});
    }

    bool ok() const {
        for (const auto& e : entries)
            if (e.verdict == Verdict::fail) return false;
        return true;
    }
    int failures() const {
        int n = 0;
        for (const auto& e : entries) n += e.verdict == Verdict::fail;
        return n;
    }
    const CheckResult* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }

    std::string to_text() const {
        std::string out;
        for (const auto& e : entries) {
            out += e.verdict == Verdict::pass ? "PASS " : e.verdict == Verdict::fail ? "FAIL " : "SKIP ";
            out += e.name;
            if (!e.detail.empty()) out += "  [" + e.detail + "]";
            out += "\n";
        }
        return out;
    }
};

}  // namespace algd
