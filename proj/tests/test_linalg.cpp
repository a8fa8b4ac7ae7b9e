#include "algd/linalg.hpp"

#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace algd;

namespace {
Matrix from_rows(const std::vector<std::vector<long long>>& rows) {
    Matrix m((int)rows.size(), (int)rows[0].size());
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.at(i, j) = Rational(rows[i][j]);
    return m;
}
}  // namespace

TEST_CASE("rref fixes identity and drops dependent rows") {
    Matrix id = Matrix::identity(4);
    CHECK(rref(id) == id);

    Matrix m = from_rows({{2, 4}, {1, 2}});
    Matrix r = rref(m);
    CHECK(r.rows == 1);
    CHECK(r.at(0, 0) == Rational(1));
    CHECK(r.at(0, 1) == Rational(2));
}

TEST_CASE("rref preserves the row space (mutual membership oracle)") {
    test::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = rng.mat(6, 6, 5);
        Matrix r = rref(m);
        // every row of each matrix lies in the span of the other
        Subspace sm = Subspace::span(6, [&] {
            std::vector<Vec> v;
            for (int i = 0; i < m.rows; ++i) v.push_back(m.row(i));
            return v;
        }());
        Subspace sr = Subspace::span(6, [&] {
            std::vector<Vec> v;
            for (int i = 0; i < r.rows; ++i) v.push_back(r.row(i));
            return v;
        }());
        for (int i = 0; i < r.rows; ++i) CHECK(sm.contains(r.row(i)));
        for (int i = 0; i < m.rows; ++i) CHECK(sr.contains(m.row(i)));
        CHECK(sm == sr);
        CHECK(rref(r) == r);
    }
}

TEST_CASE("subspace equality is canonical") {
    test::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec> gens;
        for (int i = 0; i < 4; ++i) gens.push_back(rng.vec(5, 4));
        // same span, different presentation: scaled sums
        std::vector<Vec> gens2;
        gens2.push_back(add(gens[0], gens[1]));
        gens2.push_back(scale(gens[1], Rational(3)));
        gens2.push_back(sub(gens[2], gens[0]));
        gens2.push_back(scale(gens[3], Rational(-1, 2)));
        gens2.push_back(add(gens[0], gens[3]));
        CHECK(Subspace::span(5, gens) == Subspace::span(5, gens2));
    }
}

TEST_CASE("solve_linear trivial systems") {
    Matrix id = Matrix::identity(3);
    Vec b{Rational(3), Rational(-1, 2), Rational(7)};
    auto sol = solve_linear(id, b);
    REQUIRE(sol);
    CHECK(sol->particular == b);
    CHECK(sol->nullspace.dim() == 0);

    Matrix zero(3, 3);
    auto sol0 = solve_linear(zero, Vec(3));
    REQUIRE(sol0);
    CHECK(is_zero(sol0->particular));
    CHECK(sol0->nullspace.dim() == 3);

    auto none = solve_linear(zero, b);
    CHECK_FALSE(none.has_value());
}

TEST_CASE("solve_linear underdetermined, verified by substitution") {
    Matrix A = from_rows({{1, 1}});
    auto sol = solve_linear(A, Vec{Rational(1)});
    REQUIRE(sol);
    CHECK(sol->nullspace.dim() == 1);
    CHECK(A.apply(sol->particular) == Vec{Rational(1)});
    // every basis solution of the homogeneous part substitutes to zero
    for (const auto& row : sol->nullspace.rows()) {
        Vec v = to_dense(row, 2);
        CHECK(is_zero(A.apply(v)));
    }
}

TEST_CASE("solve_linear random systems substitute exactly") {
    test::Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix A = rng.mat(4, 5, 6);
        Vec x = rng.vec(5, 6);
        Vec b = A.apply(x);
        auto sol = solve_linear(A, b);
        REQUIRE(sol);
        CHECK(A.apply(sol->particular) == b);
        for (const auto& row : sol->nullspace.rows()) CHECK(is_zero(A.apply(to_dense(row, 5))));
        // the known solution lies in particular + nullspace
        CHECK(sol->nullspace.contains(sub(x, sol->particular)));
    }
}

TEST_CASE("quotient reduce") {
    // kernel {0}: reduce is the identity
    QuotientSpace q0(3, Subspace(3));
    Vec v{Rational(1), Rational(2), Rational(3)};
    CHECK(q0.reduce(v) == v);

    test::Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(rng.vec(6, 4));
        Subspace k = Subspace::span(6, gens);
        QuotientSpace q(6, k);
        CHECK(q.dim() + k.dim() == 6);

        // vectors in the kernel reduce to zero
        for (const auto& g : gens) CHECK(is_zero(q.reduce(g)));

        Vec w = rng.vec(6, 9);
        Vec r = q.reduce(w);
        CHECK(k.contains(sub(w, r)));       // difference lies in the kernel
        CHECK(q.reduce(r) == r);            // idempotent
        CHECK(q.reduce(q.lift(q.compress(r))) == r);  // reduce o lift = id on representatives

        // additivity: reduce(v + w) = reduce(reduce v + reduce w)
        Vec v2 = rng.vec(6, 9);
        CHECK(q.reduce(add(v2, w)) == q.reduce(add(q.reduce(v2), q.reduce(w))));
    }
}
