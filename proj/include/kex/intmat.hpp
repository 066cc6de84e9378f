#pragma once
#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kex/error.hpp"

namespace kex {

using Int = mpz_class;

// Dense matrix over the arbitrary-precision integers, row-major.
// Empty dimensions are legal and stand for maps to/from the trivial group.
struct IntMat {
    std::size_t rows = 0, cols = 0;
    std::vector<Int> e;

    IntMat() = default;
    IntMat(std::size_t r, std::size_t c) : rows(r), cols(c), e(r * c) {}
    IntMat(std::size_t r, std::size_t c, std::vector<Int> entries);

    static IntMat identity(std::size_t n);

    Int& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }

    bool is_zero() const;
    bool is_square() const { return rows == cols; }

    IntMat transpose() const;
    IntMat mul(const IntMat& o) const;
    IntMat add(const IntMat& o) const;
    IntMat sub(const IntMat& o) const;
    IntMat neg() const;
    IntMat scaled(const Int& k) const;

    std::vector<Int> apply(const std::vector<Int>& x) const;  // this * x
    std::vector<Int> col(std::size_t j) const;
    void set_col(std::size_t j, const std::vector<Int>& v);

    friend bool operator==(const IntMat&, const IntMat&) = default;
};

IntMat hstack(const IntMat& a, const IntMat& b);
IntMat vstack(const IntMat& a, const IntMat& b);
IntMat cols_subset(const IntMat& m, const std::vector<std::size_t>& idx);

// Exact determinant (Bareiss), square input only.
Int det(const IntMat& m);

// u * m * v = d with u, v unimodular and d diagonal, d1 | d2 | ... >= 0.
// uinv/vinv are the inverses, tracked during the reduction.
struct SmithResult {
    IntMat u, d, v, uinv, vinv;
    std::size_t rank = 0;  // number of nonzero diagonal entries
};
SmithResult smith_normal_form(const IntMat& m);

// Column-style Hermite form: m * u = h with u unimodular, h in column
// echelon (pivot rows strictly increasing, pivots positive, entries left of
// a pivot reduced into [0, pivot)). pivots lists (row, col) pairs.
struct HermiteResult {
    IntMat h, u;
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
};
HermiteResult hermite_cols(const IntMat& m);

// Solutions of m x = b over the integers. kernel columns form a basis of
// {x : m x = 0}; absence of a solution is a valid return, not an error.
struct LinearSolution {
    std::vector<Int> x;
    IntMat kernel;
};
std::optional<LinearSolution> solve_linear(const IntMat& m, const std::vector<Int>& b);

// Solves m x = b + r y for some integer y, i.e. m x ≡ b modulo the column
// span of r. kernel columns generate the lattice of homogeneous x-solutions.
std::optional<LinearSolution> solve_mod_subgroup(const IntMat& m, const std::vector<Int>& b,
                                                 const IntMat& r);

// Canonical (HNF) basis of the lattice spanned by the columns of gens;
// zero columns dropped.
IntMat lattice_basis(const IntMat& gens);

bool lattice_contains(const IntMat& gens, const std::vector<Int>& v);

// Deterministic coset representative of v modulo the column span of lat.
std::vector<Int> reduce_mod_lattice(std::vector<Int> v, const IntMat& lat);

}  // namespace kex
