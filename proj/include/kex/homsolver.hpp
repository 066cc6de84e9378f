#pragma once
#include "kex/coeffs.hpp"

namespace kex {

// Solution group of all families commuting with the reduced catalog, with an
// explicit family behind every canonical generator and the data needed to
// move between group elements and families.
struct HomLambdaGroup {
    FgAb group;
    std::vector<CoeffHom> basis;

    CoeffHom from_element(const std::vector<Int>& coords) const;
    std::vector<Int> to_element(const CoeffHom& h) const;

    // layout
    std::vector<SlotId> slots;
    std::vector<FgAb> slot_src, slot_dst;
    std::vector<std::size_t> offsets;
    std::size_t entry_count = 0;
    IntMat gen_lattice;   // columns span the valid entry vectors
    IntMat zero_lattice;  // entry vectors representing the zero family
    IntMat proj, section;

    CoeffHom family_from_entries(const std::vector<Int>& entries) const;
    std::vector<Int> entries_of(const CoeffHom& h) const;
};

// Hom_six: families on the base alone.
HomLambdaGroup hom_six(const SixTerm& a, const SixTerm& b);

// Hom over the full reduced catalog. Supports must agree.
HomLambdaGroup hom_lambda_red(const CoeffInvariant& a, const CoeffInvariant& b);

// Forgetful map: keep the six base components.
CoeffHom delta(const CoeffHom& h);

// Matrix of the forgetful map between the two solution groups.
Hom delta_map(const HomLambdaGroup& lam, const HomLambdaGroup& six);

struct AutReport {
    bool end_finite = false;
    FgAb end_group;
    std::vector<CoeffHom> end_basis;
    bool aut_known = false;
    Int aut_order = 0;
    std::vector<CoeffHom> generators;
    std::vector<CoeffHom> generator_inverses;
    std::string note;
};

// Unit group of the endomorphism family ring: exact enumeration when the
// endomorphism group is finite and small, the rank-one recognition otherwise;
// predicate mode when neither applies.
AutReport aut_lambda_red(const CoeffInvariant& inv);

// Exhaustive oracle: enumerate component tuples and filter by the catalog.
// Requires every group of both invariants to be finite.
std::vector<CoeffHom> brute_force_hom_lambda(const CoeffInvariant& a, const CoeffInvariant& b);

// Deterministic comparison key for families (canonical reduced entries).
std::string coeff_hom_key(const CoeffHom& h);

}  // namespace kex
