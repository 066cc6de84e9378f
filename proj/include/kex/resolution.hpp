#pragma once
#include "kex/homsolver.hpp"

namespace kex {

// Primary decomposition of a finitely generated abelian group, with the
// explicit coordinate change between the canonical form and the primary form.
struct PrimaryPart {
    Int prime;
    std::vector<Int> exponents;        // strictly increasing
    std::vector<std::size_t> mults;    // parallel to exponents
};

struct PrimaryDecomposition {
    std::vector<PrimaryPart> parts;  // primes strictly increasing
    std::size_t free_rank = 0;
    FgAb primary_group;  // torsion generators in primary order, then free
    Hom to_group;        // primary coordinates -> original group (iso)
    Hom from_group;      // original group -> primary coordinates (inverse)

    std::vector<Int> prime_power_orders() const;  // with multiplicity, in order
};

PrimaryDecomposition primary_decompose(const FgAb& g);

// Levelwise-free resolution sub -> cover -> base of a six-term sequence with
// trivial g[3] and free g[5], built from the primary decomposition of g[2].
struct Resolution {
    SixTerm base;
    SixTerm cover;  // levelwise free, exact
    SixTerm sub;    // levelwise kernels, exact
    SixTermHom incl;  // sub -> cover
    SixTermHom proj;  // cover -> base, levelwise surjective
    FgAb free_cover0;  // free cover of base.g[0] used at index 0
    Hom lift;          // generator lifts cover.g[2]-side -> base.g[1]
    PrimaryDecomposition dec;               // of base.g[2]
    std::vector<Int> prime_power_diagonal;  // diagonal of the index-2 kernel inclusion
};

Resolution build_resolution(const SixTerm& g);

// Kernel of the map induced by the covering morphism on the degree-1 mod-n
// H-group, for n a prime power of the decomposition. Also returns the group
// predicted by the closed p-power formula; the two must be isomorphic.
struct HKernelResult {
    FgAb kernel_group;
    Hom inclusion;  // into the sub-row group H2/n
    FgAb formula_group;
};
HKernelResult kernel_on_H(const Resolution& res, const Int& n);

struct HomSequenceReport {
    FgAb hom_cover;      // Hom(K(cover), K(susp target))
    FgAb hom_sub;        // Hom(K(sub), K(susp target))
    FgAb hom_susp_base;  // Hom(K(susp base), K(susp target))
    bool middle_exact = false;
    std::vector<Int> middle_witness;  // element of hom_sub on failure
    bool continuation_exact = false;
    std::vector<Int> continuation_witness;  // element of hom_susp_base on failure
};

// Exactness of the induced Hom sequence
//   Hom(K(cover), K(S t)) -> Hom(K(sub), K(S t)) -> Hom(K(S base), K(S t))
// at the middle term, and of its continuation to Hom(K(S cover), K(S t)).
HomSequenceReport hom_sequence_report(const Resolution& res, const CoeffInvariant& target);

}  // namespace kex
