#pragma once

#include "algd/antipode.hpp"
#include "algd/twist.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>

namespace algd {

struct MalformedFile : std::runtime_error {
    explicit MalformedFile(const std::string& what) : std::runtime_error("malformed file: " + what) {}
};

struct LoadedInstance {
    BialgebroidInstance B;
    std::optional<AntipodePair> S;
    Report structural;  // presentation and map validation, commuting images
};

namespace io_detail {

using nlohmann::json;
using nlohmann::ordered_json;

inline Rational rat(const json& j) {
    if (j.is_number_integer()) return Rational((long long)j.get<long long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw MalformedFile("expected rational string");
}

inline Matrix matrix(const json& j, int rows, int cols, const std::string& name) {
    if (!j.is_array() || (int)j.size() != rows) throw MalformedFile(name + ": expected " + std::to_string(rows) + " rows");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || (int)j[i].size() != cols)
            throw MalformedFile(name + ": row " + std::to_string(i) + " has wrong length");
        for (int c = 0; c < cols; ++c) m.at(i, c) = rat(j[i][c]);
    }
    return m;
}

inline ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline AlgebraPresentation algebra(const json& j, const std::string& name) {
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw MalformedFile(name + ": missing dim");
    int dim = j["dim"].get<int>();
    if (dim <= 0) throw MalformedFile(name + ": dim must be positive");
    if (!j.contains("unit") || (int)j["unit"].size() != dim) throw MalformedFile(name + ": bad unit");
    Vec unit(dim);
    for (int i = 0; i < dim; ++i) unit[i] = rat(j["unit"][i]);
    std::vector<std::tuple<int, int, int, Rational>> mu;
    if (!j.contains("mu") || !j["mu"].is_array()) throw MalformedFile(name + ": missing mu");
    for (const auto& t : j["mu"]) {
        if (!t.is_array() || t.size() != 4) throw MalformedFile(name + ": mu entries are [i,j,k,c]");
        int a = t[0].get<int>(), b = t[1].get<int>(), c = t[2].get<int>();
        if (a < 0 || a >= dim || b < 0 || b >= dim || c < 0 || c >= dim)
            throw MalformedFile(name + ": mu index out of range");
        mu.emplace_back(a, b, c, rat(t[3]));
    }
    return AlgebraPresentation::from_triples(dim, std::move(unit), mu);
}

inline ordered_json algebra_json(const AlgebraPresentation& a) {
    ordered_json out;
    out["dim"] = a.dim;
    ordered_json unit = ordered_json::array();
    for (const auto& x : a.unit) unit.push_back(x.str());
    out["unit"] = std::move(unit);
    ordered_json mu = ordered_json::array();
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j)
            for (const auto& [k, v] : a.prod(i, j)) mu.push_back({i, j, k, v.str()});
    out["mu"] = std::move(mu);
    return out;
}

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedFile("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw MalformedFile(std::string("json parse error: ") + e.what());
    }
    return j;
}

}  // namespace io_detail

// Loads and structurally validates an instance file. Algebra/map validity is
// reported (named checks); non-commuting images or shape errors throw.
inline LoadedInstance parse_instance(const nlohmann::json& j) {
    using namespace io_detail;
    if (!j.contains("scalar") || j["scalar"] != "rational") throw MalformedFile("scalar kind must be \"rational\"");
    if (!j.contains("R") || !j.contains("H")) throw MalformedFile("missing R or H presentation");
    AlgebraPresentation R = algebra(j["R"], "R");
    AlgebraPresentation H = algebra(j["H"], "H");
    const int n = H.dim, r = R.dim;
    Matrix alpha = matrix(j.at("alpha"), n, r, "alpha");
    Matrix beta = matrix(j.at("beta"), n, r, "beta");
    Matrix eps = matrix(j.at("epsilon"), r, n, "epsilon");
    if (!j.contains("delta") || !j["delta"].is_array() || (int)j["delta"].size() != n)
        throw MalformedFile("delta: expected one lift term list per basis element");
    Matrix delta(n * n, n);
    for (int h = 0; h < n; ++h)
        for (const auto& t : j["delta"][h]) {
            if (!t.is_array() || t.size() != 3) throw MalformedFile("delta entries are [i,j,c]");
            int a = t[0].get<int>(), b = t[1].get<int>();
            if (a < 0 || a >= n || b < 0 || b >= n) throw MalformedFile("delta index out of range");
            delta.at(a * n + b, h) += rat(t[2]);
        }

    LoadedInstance out;
    out.structural.merge("H.", H.validate());
    out.structural.merge("R.", R.validate());
    out.structural.merge("alpha.", check_algebra_map({R, H, alpha}));
    out.structural.merge("beta.", check_algebra_map({opposite(R), H, beta}));

    CtxPtr ctx = build_context(std::move(H), std::move(R), std::move(alpha), std::move(beta));
    out.B = make_bialgebroid(std::move(ctx), std::move(delta), std::move(eps));

    if (j.contains("S")) {
        AntipodePair A;
        A.S = matrix(j["S"], n, n, "S");
        if (j.contains("S_inv"))
            A.S_inv = matrix(j["S_inv"], n, n, "S_inv");
        else {
            Matrix inv(n, n);
            bool ok = true;
            for (int c = 0; c < n; ++c) {
                auto s = solve_linear(A.S, unit_vec(n, c));
                if (!s) {
                    ok = false;
                    break;
                }
                inv.set_col(c, s->particular);
            }
            if (!ok) throw MalformedFile("S is singular and no S_inv supplied");
            A.S_inv = std::move(inv);
        }
        out.S = std::move(A);
    }
    return out;
}

inline LoadedInstance load_instance(const std::string& path) {
    return parse_instance(io_detail::read_json(path));
}

inline nlohmann::ordered_json instance_to_json(const BialgebroidInstance& B, const AntipodePair* S) {
    using namespace io_detail;
    ordered_json j;
    j["scalar"] = "rational";
    j["R"] = algebra_json(B.ctx->R);
    j["H"] = algebra_json(B.ctx->H);
    j["alpha"] = matrix_json(B.ctx->alpha);
    j["beta"] = matrix_json(B.ctx->beta);
    j["epsilon"] = matrix_json(B.epsilon);
    ordered_json delta = ordered_json::array();
    const int n = B.ctx->n();
    for (int h = 0; h < n; ++h) {
        ordered_json terms = ordered_json::array();
        for (const auto& [c, v] : B.dcol(h)) terms.push_back({c / n, c % n, v.str()});
        delta.push_back(std::move(terms));
    }
    j["delta"] = std::move(delta);
    if (S) {
        j["S"] = matrix_json(S->S);
        j["S_inv"] = matrix_json(S->S_inv);
    }
    return j;
}

struct LoadedCocycle {
    Vec F;
    std::optional<Vec> Fbar;  // absent when the file omits it; resolved by inversion
};

inline LoadedCocycle parse_cocycle(const nlohmann::json& j, const TensorContext& ctx) {
    using namespace io_detail;
    auto terms = [&](const json& arr) {
        Vec v((size_t)ctx.n2());
        for (const auto& t : arr) {
            if (!t.is_array() || t.size() != 3) throw MalformedFile("cocycle entries are [i,j,c]");
            int a = t[0].get<int>(), b = t[1].get<int>();
            if (a < 0 || a >= ctx.n() || b < 0 || b >= ctx.n())
                throw MalformedFile("cocycle index out of range");
            v[ctx.idx2(a, b)] += rat(t[2]);
        }
        return v;
    };
    if (!j.contains("F")) throw MalformedFile("cocycle file needs F");
    LoadedCocycle out;
    out.F = ctx.reduce2(terms(j["F"]));
    if (j.contains("Fbar")) out.Fbar = terms(j["Fbar"]);
    return out;
}

inline LoadedCocycle load_cocycle(const std::string& path, const TensorContext& ctx) {
    return parse_cocycle(io_detail::read_json(path), ctx);
}

inline nlohmann::ordered_json cocycle_to_json(const Cocycle& c, const TensorContext& ctx) {
    using nlohmann::ordered_json;
    ordered_json j;
    ordered_json f = ordered_json::array(), fb = ordered_json::array();
    for (int g = 0; g < ctx.n2(); ++g) {
        if (!c.F[g].is_zero()) f.push_back({g / ctx.n(), g % ctx.n(), c.F[g].str()});
        if (!c.Fbar[g].is_zero()) fb.push_back({g / ctx.n(), g % ctx.n(), c.Fbar[g].str()});
    }
    j["F"] = std::move(f);
    j["Fbar"] = std::move(fb);
    return j;
}

inline void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(1) << "\n";
}

}  // namespace algd
