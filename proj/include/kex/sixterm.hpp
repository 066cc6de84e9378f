#pragma once
#include <array>
#include <optional>
#include <string>

#include "kex/fgab.hpp"

namespace kex {

// Cyclic six-term exact sequence. Index convention:
//   g[0] = K0(ideal), g[1] = K0(algebra), g[2] = K0(quotient),
//   g[3] = K1(ideal), g[4] = K1(algebra), g[5] = K1(quotient);
// f[i] : g[i] -> g[i+1 mod 6], f[2] the exponential map, f[5] the index map.
struct SixTerm {
    std::array<FgAb, 6> g;
    std::array<Hom, 6> f;

    static SixTerm all_zero();
};

struct ExactnessFailure {
    std::size_t node = 0;
    std::string reason;
    std::vector<Int> witness;  // coordinates in g[node]
};

struct ExactReport {
    bool pass = true;
    std::vector<ExactnessFailure> failures;
};

// Validates the source/target chain (usage error if malformed), then checks
// image(f[i-1]) = kernel(f[i]) at every node.
ExactReport check_exact(const SixTerm& s);

bool is_exact(const SixTerm& s);

// Degree-3 cyclic shift; swaps the K0 and K1 rows. An involution.
SixTerm suspend(const SixTerm& s);

struct ClassFlags {
    bool zero_exponential = false;
    bool quotient_k1_free = false;
    bool ideal_k1_zero = false;
    bool all_finitely_generated = true;
};
ClassFlags class_flags(const SixTerm& s);

// Levelwise map of six-term sequences.
struct SixTermHom {
    SixTerm src, dst;
    std::array<Hom, 6> phi;
};

struct SquareFailure {
    std::size_t index = 0;      // the square between index and index+1
    std::size_t generator = 0;  // generator of src.g[index] witnessing it
};
std::optional<SquareFailure> validate_sixterm_hom(const SixTermHom& h);

SixTermHom identity_sixterm_hom(const SixTerm& s);

// Adjacency-matrix input. ideal_block lists the 0-based vertices generating
// the ideal; the block must be hereditary: no edge from an ideal vertex to a
// quotient vertex. K0 = coker(A^T - I), K1 = ker(A^T - I) per block.
struct CKInput {
    IntMat adjacency;
    std::vector<std::size_t> ideal_block;
};

SixTerm ck_ktheory(const CKInput& input);

}  // namespace kex
