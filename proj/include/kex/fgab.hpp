#pragma once
#include <cstddef>
#include <vector>

#include "kex/intmat.hpp"

namespace kex {

// Finitely generated abelian group in invariant-factor canonical form:
// Z/d1 + Z/d2 + ... + Z/dt + Z^free_rank with 2 <= d1 | d2 | ... | dt.
// Generator order: torsion generators first, then free generators.
struct FgAb {
    std::vector<Int> torsion;
    std::size_t free_rank = 0;

    std::size_t ngens() const { return torsion.size() + free_rank; }
    bool is_trivial() const { return torsion.empty() && free_rank == 0; }
    bool is_finite() const { return free_rank == 0; }
    bool is_free() const { return torsion.empty(); }
    Int gen_order(std::size_t j) const { return j < torsion.size() ? torsion[j] : Int(0); }
    Int order() const;     // finite groups only
    Int exponent() const;  // exponent of the torsion subgroup (1 if free)
    IntMat relations() const;

    static FgAb zero() { return FgAb{}; }
    static FgAb free_group(std::size_t rank) { return FgAb{{}, rank}; }
    static FgAb cyclic(const Int& d);

    friend bool operator==(const FgAb&, const FgAb&) = default;
};

// Canonical coordinates: torsion coordinate j reduced into [0, d_j).
std::vector<Int> reduce_coords(const FgAb& g, std::vector<Int> coords);

// Homomorphism given on generators; column j of m is the image of the j-th
// generator of src in dst coordinates. Stored canonically reduced.
struct Hom {
    FgAb src, dst;
    IntMat m;

    Hom() = default;
    Hom(FgAb s, FgAb d, IntMat mat);

    static Hom zero(const FgAb& s, const FgAb& d);
    static Hom identity(const FgAb& g);

    bool well_defined() const;
    bool is_zero() const { return m.is_zero(); }
    std::vector<Int> apply(const std::vector<Int>& x) const;

    friend bool operator==(const Hom&, const Hom&) = default;
};

Hom compose(const Hom& g, const Hom& h);  // g after h
Hom hom_add(const Hom& a, const Hom& b);
Hom hom_sub(const Hom& a, const Hom& b);
Hom hom_scaled(const Hom& a, const Int& k);
Hom hom_mul_n(const FgAb& g, const Int& n);  // multiplication by n on g

bool is_isomorphism(const Hom& h);
// Inverse of an isomorphism.
Hom inverse(const Hom& h);

// Z^gens modulo the column span of relations, with the canonical coordinate
// change: proj maps old coordinates onto the canonical ones, section picks
// representatives (proj * section = identity).
struct Presented {
    FgAb group;
    IntMat proj;
    IntMat section;
};
Presented from_presentation(std::size_t gens, const IntMat& relations);

struct SubgroupResult {
    FgAb group;
    Hom incl;
};
struct QuotientResult {
    FgAb group;
    Hom proj;
    IntMat section;  // proj.m * section = identity modulo group relations
};

// Subgroup of g generated by the columns of gens (coordinates of g).
SubgroupResult subgroup_from_lattice(const FgAb& g, const IntMat& gens);

SubgroupResult kernel(const Hom& h);
SubgroupResult image(const Hom& h);
QuotientResult cokernel(const Hom& h);

struct DirectSum {
    FgAb group;
    std::vector<Hom> inj;
    std::vector<Hom> proj;
};
DirectSum direct_sum(const std::vector<FgAb>& parts);

// Hom(A, B) with an explicit homomorphism behind every canonical generator.
// from_element/to_element realize the bijection between group elements and
// homomorphisms.
struct HomGroup {
    FgAb group;
    std::vector<Hom> basis;

    Hom from_element(const std::vector<Int>& coords) const;
    std::vector<Int> to_element(const Hom& h) const;

    FgAb src, dst;
    std::vector<Hom> cyclic_gens;                      // one per (i, j) generator pair
    std::vector<std::pair<std::size_t, std::size_t>> gen_pos;  // (dst row, src col)
    std::vector<Int> gen_mult;                         // entry multiple of each pair
    IntMat proj, section;                              // canonicalization data
};
HomGroup hom_group(const FgAb& a, const FgAb& b);

FgAb ext_group(const FgAb& a, const FgAb& b);

QuotientResult tensor_zn(const FgAb& a, const Int& n);  // a / n·a with quotient map
SubgroupResult torsion_n(const FgAb& a, const Int& n);  // n-torsion with inclusion

// Every homomorphism a -> b, each exactly once. Throws input_error when the
// hom set is infinite.
std::vector<Hom> enumerate_homs(const FgAb& a, const FgAb& b);

// All elements of a finite group, in odometer order.
std::vector<std::vector<Int>> all_elements(const FgAb& g);

// Full-preimage lattice in Z^ngens of the subgroup {x : h(x) = 0}.
IntMat kernel_lattice(const Hom& h);
// Lattice spanned by the image columns together with dst relations.
IntMat image_lattice(const Hom& h);

bool element_in_lattice(const IntMat& lat, const std::vector<Int>& coords);

}  // namespace kex
