#include <doctest.h>

#include <random>

#include "kex/intmat.hpp"

using namespace kex;

namespace {

IntMat mat(std::size_t r, std::size_t c, std::vector<long> v) {
    IntMat m(r, c);
    for (std::size_t i = 0; i < v.size(); ++i) m.e[i] = v[i];
    return m;
}

// gcd of all k x k minors, 0 if all vanish.
Int minor_gcd(const IntMat& m, std::size_t k) {
    std::vector<std::size_t> ri(k), ci(k);
    Int g = 0;
    std::vector<std::size_t> rows(m.rows), cols(m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) rows[i] = i;
    for (std::size_t j = 0; j < m.cols; ++j) cols[j] = j;
    std::vector<bool> rsel(m.rows, false);

    // enumerate k-subsets of rows and cols
    std::vector<std::size_t> rc(k), cc(k);
    std::function<void(std::size_t, std::size_t)> rec_cols = [&](std::size_t start,
                                                                 std::size_t depth) {
        if (depth == k) {
            IntMat sub(k, k);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) sub.at(a, b) = m.at(rc[a], cc[b]);
            g = gcd(g, det(sub));
            return;
        }
        for (std::size_t j = start; j < m.cols; ++j) {
            cc[depth] = j;
            rec_cols(j + 1, depth + 1);
        }
    };
    std::function<void(std::size_t, std::size_t)> rec_rows = [&](std::size_t start,
                                                                 std::size_t depth) {
        if (depth == k) {
            rec_cols(0, 0);
            return;
        }
        for (std::size_t i = start; i < m.rows; ++i) {
            rc[depth] = i;
            rec_rows(i + 1, depth + 1);
        }
    };
    rec_rows(0, 0);
    return abs(g);
}

void check_snf_postconditions(const IntMat& m) {
    SmithResult s = smith_normal_form(m);
    CHECK(s.u.mul(m).mul(s.v) == s.d);
    CHECK(abs(det(s.u)) == 1);
    CHECK(abs(det(s.v)) == 1);
    CHECK(s.u.mul(s.uinv) == IntMat::identity(m.rows));
    CHECK(s.v.mul(s.vinv) == IntMat::identity(m.cols));
    std::size_t nmin = std::min(m.rows, m.cols);
    for (std::size_t i = 0; i < nmin; ++i) {
        CHECK(s.d.at(i, i) >= 0);
        if (i + 1 < nmin && s.d.at(i + 1, i + 1) != 0) {
            if (s.d.at(i, i) == 0)
                CHECK(s.d.at(i + 1, i + 1) == 0);
            else
                CHECK(s.d.at(i + 1, i + 1) % s.d.at(i, i) == 0);
        }
    }
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (i != j) CHECK(s.d.at(i, j) == 0);
}

}  // namespace

TEST_CASE("smith normal form on pinned examples") {
    SmithResult s1 = smith_normal_form(IntMat::identity(2));
    CHECK(s1.d == IntMat::identity(2));

    SmithResult s2 = smith_normal_form(mat(1, 1, {0}));
    CHECK(s2.d == mat(1, 1, {0}));

    SmithResult s3 = smith_normal_form(mat(2, 2, {2, 4, 6, 8}));
    // minor-gcd oracle: d1 = gcd of entries = 2, d1*d2 = |det| = 8
    CHECK(s3.d.at(0, 0) == 2);
    CHECK(s3.d.at(1, 1) == 4);
    check_snf_postconditions(mat(2, 2, {2, 4, 6, 8}));
}

TEST_CASE("smith normal form with empty dimensions") {
    check_snf_postconditions(IntMat(0, 3));
    check_snf_postconditions(IntMat(3, 0));
    check_snf_postconditions(IntMat(0, 0));
}

TEST_CASE("smith diagonal equals the minor-gcd sequence on random small matrices") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> dim(1, 4), entry(-10, 10);
    for (int trial = 0; trial < 120; ++trial) {
        IntMat m(dim(rng), dim(rng));
        for (Int& v : m.e) v = entry(rng);
        SmithResult s = smith_normal_form(m);
        check_snf_postconditions(m);
        Int prev = 1;
        for (std::size_t k = 1; k <= std::min(m.rows, m.cols); ++k) {
            Int mk = minor_gcd(m, k);
            Int expect = (mk == 0 || prev == 0) ? Int(0) : mk / prev;
            CHECK(s.d.at(k - 1, k - 1) == expect);
            prev = mk;
        }
    }
}

TEST_CASE("solve_linear pinned examples") {
    auto s1 = solve_linear(mat(1, 1, {2}), {Int(4)});
    REQUIRE(s1.has_value());
    CHECK(s1->x == std::vector<Int>{2});
    CHECK(s1->kernel.cols == 0);

    CHECK(!solve_linear(mat(1, 1, {2}), {Int(3)}).has_value());

    auto s3 = solve_linear(mat(2, 2, {1, 2, 2, 4}), {Int(3), Int(6)});
    REQUIRE(s3.has_value());
    IntMat m = mat(2, 2, {1, 2, 2, 4});
    CHECK(m.apply(s3->x) == std::vector<Int>{3, 6});
    REQUIRE(s3->kernel.cols == 1);
    CHECK(m.mul(s3->kernel).is_zero());
    // kernel lattice is spanned by (-2, 1)
    CHECK(lattice_contains(s3->kernel, {Int(-2), Int(1)}));
    CHECK(lattice_contains(mat(2, 1, {-2, 1}), s3->kernel.col(0)));
}

TEST_CASE("solve_linear with empty shapes") {
    auto s = solve_linear(IntMat(0, 2), {});
    REQUIRE(s.has_value());
    CHECK(s->kernel.cols == 2);
    auto s2 = solve_linear(IntMat(2, 0), {Int(0), Int(0)});
    REQUIRE(s2.has_value());
    auto s3 = solve_linear(IntMat(2, 0), {Int(1), Int(0)});
    CHECK(!s3.has_value());
}

TEST_CASE("solve_mod_subgroup pinned examples") {
    auto s1 = solve_mod_subgroup(mat(1, 1, {1}), {Int(1)}, mat(1, 1, {2}));
    REQUIRE(s1.has_value());
    CHECK((s1->x[0] - 1) % 2 == 0);

    CHECK(!solve_mod_subgroup(mat(1, 1, {2}), {Int(1)}, mat(1, 1, {4})).has_value());

    auto s3 = solve_mod_subgroup(mat(1, 1, {3}), {Int(0)}, mat(1, 1, {6}));
    REQUIRE(s3.has_value());
    // solution lattice is the even integers
    REQUIRE(s3->kernel.cols == 1);
    CHECK(abs(s3->kernel.at(0, 0)) == 2);
}

TEST_CASE("random solve round trips") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> dim(1, 4), entry(-6, 6);
    for (int trial = 0; trial < 100; ++trial) {
        IntMat m(dim(rng), dim(rng));
        for (Int& v : m.e) v = entry(rng);
        std::vector<Int> x0(m.cols);
        for (Int& v : x0) v = entry(rng);
        std::vector<Int> b = m.apply(x0);
        auto s = solve_linear(m, b);
        REQUIRE(s.has_value());
        CHECK(m.apply(s->x) == b);
        for (std::size_t j = 0; j < s->kernel.cols; ++j)
            CHECK(m.apply(s->kernel.col(j)) == std::vector<Int>(m.rows));
        // the found solution differs from x0 by a kernel element
        std::vector<Int> diff(m.cols);
        for (std::size_t i = 0; i < m.cols; ++i) diff[i] = x0[i] - s->x[i];
        CHECK(lattice_contains(s->kernel, diff));
    }
}

TEST_CASE("hermite column form is canonical") {
    IntMat m = mat(2, 3, {2, 6, 4, 0, 3, 1});
    HermiteResult h = hermite_cols(m);
    CHECK(m.mul(h.u) == h.h);
    CHECK(abs(det(h.u)) == 1);
    // lattice bases of equal lattices agree
    CHECK(lattice_basis(m) == lattice_basis(h.h));
}
