#pragma once
#include <optional>
#include <string>

#include "kex/sixterm.hpp"

namespace kex {

// One coefficient level of the reduced invariant. F[i] realizes the middle of
//   0 -> G_i/n -> F_{n,i} -> G_{i+3}[n] -> 0
// as a direct sum, H the middle of
//   0 -> coker(n f_4) -> H_{n,4} -> ker(n f_1) -> 0.
// rho/beta are the reduction and torsion-connecting maps, the h-maps the six
// structure maps in and out of H.
struct CoeffLevel {
    Int n;
    std::array<FgAb, 6> F;
    std::array<Hom, 6> f;     // f[i] : F[i] -> F[i+1]
    std::array<Hom, 6> rho;   // rho[i] : base[i] -> F[i]
    std::array<Hom, 6> beta;  // beta[i] : F[i] -> base[i+3]
    FgAb H;
    Hom h11_in;   // base[5] -> H
    Hom h11_out;  // H -> base[1]
    Hom hn1_in;   // F[4] -> H
    Hom hn1_out;  // H -> base[0]
    Hom h1n_in;   // base[0] -> H
    Hom h1n_out;  // H -> F[5]
};

// Comparison maps between levels small | big.
struct CoeffPair {
    Int small, big;
    std::array<Hom, 6> kappa;     // F_{big,i} -> F_{small,i}
    std::array<Hom, 6> varkappa;  // F_{small,i} -> F_{big,i}
    Hom omega;                    // H_big -> H_small
    Hom chi;                      // H_small -> H_big
};

struct CoeffInvariant {
    SixTerm base;
    std::vector<Int> support;  // ascending, each >= 2
    std::vector<CoeffLevel> levels;
    std::vector<CoeffPair> pairs;

    const CoeffLevel& level(const Int& n) const;
    const CoeffPair& pair(const Int& small, const Int& big) const;
};

// Prime powers dividing the exponent of some base torsion subgroup;
// empty when the whole K-theory is free.
std::vector<Int> default_support(const SixTerm& s);
std::vector<Int> support_join(const std::vector<SixTerm>& list);

CoeffInvariant build_invariant(const SixTerm& s, std::vector<Int> support);

struct RelationCheck {
    std::string name;
    bool pass = true;
    std::vector<Int> witness;  // generator coordinates when a check fails
};
struct VerifyReport {
    bool pass = true;
    std::vector<RelationCheck> checks;
    const RelationCheck* first_failure() const;
};
VerifyReport verify_invariant(const CoeffInvariant& inv);

// Component family between two invariants with equal supports.
struct CoeffHom {
    std::array<Hom, 6> alpha1;
    struct Level {
        Int n;
        std::array<Hom, 6> alpha;
        Hom alphaH;
    };
    std::vector<Level> levels;

    const Level& level(const Int& n) const;
};

CoeffHom identity_coeff_hom(const CoeffInvariant& inv);
CoeffHom zero_coeff_hom(const CoeffInvariant& a, const CoeffInvariant& b);
CoeffHom compose_coeff_hom(const CoeffHom& g, const CoeffHom& h);
CoeffHom coeff_hom_add(const CoeffHom& a, const CoeffHom& b);
CoeffHom coeff_hom_sub(const CoeffHom& a, const CoeffHom& b);
bool coeff_hom_equal(const CoeffHom& a, const CoeffHom& b);
bool coeff_hom_is_invertible(const CoeffHom& h);
CoeffHom coeff_hom_inverse(const CoeffHom& h);

// First commutation relation of the reduced catalog violated by the family,
// if any.
std::optional<std::string> validate_coeff_hom(const CoeffHom& h, const CoeffInvariant& a,
                                              const CoeffInvariant& b);

struct InducedHom {
    CoeffHom hom;
    std::size_t lattice_dim = 0;  // correction freedom of the solved family
};
InducedHom induce_hom(const SixTermHom& phi, const CoeffInvariant& a, const CoeffInvariant& b);

// Deterministic splitting data for one level; recomputable from the base
// alone, used by construction and by the resolution module.
struct LevelSplit {
    Int n;
    std::array<QuotientResult, 6> tq;   // T_i = base[i]/n with projection
    std::array<SubgroupResult, 6> sg;   // S_i = base[i+3][n] with inclusion
    std::array<DirectSum, 6> fsum;      // F_i = T_i + S_i
    std::array<Hom, 6> fbar;            // induced f on T
    std::array<Hom, 6> grestrict;       // restricted f on S
    QuotientResult ck;                  // coker(n f4) with projection
    SubgroupResult kr;                  // ker(n f1) with inclusion
    DirectSum hsum;                     // H = CK + KR
    Hom ind_f4;                         // T4 -> CK
    Hom ind_f5;                         // CK -> base[0]
    Hom s4_in_kr;                       // S4 -> KR
    Hom f0_into_kr;                     // base[0] -> KR
    Hom f1_into_s5;                     // KR -> S5
    Hom ck_factor;                      // CK -> T5
};
LevelSplit compute_level_split(const SixTerm& base, const Int& n);

// Sign convention of the stored mod-n cycle maps: the T-block of f_{n,i}
// carries sign(i) and the S-block is always negated.
int mod_cycle_sign(std::size_t i);

// Component slots of a CoeffHom, used to address families uniformly.
struct SlotId {
    enum Kind { Base, Level, LevelH } kind = Base;
    Int n;          // level, when applicable
    std::size_t i;  // index 0..5, when applicable
};

// One naturality constraint: alpha_dst ∘ map_a = map_b ∘ alpha_src for every
// family alpha : a -> b. Enumerating these is the whole reduced catalog.
struct NatRelation {
    std::string name;
    SlotId src_slot, dst_slot;
    Hom map_a, map_b;
};
std::vector<NatRelation> natural_relations(const CoeffInvariant& a, const CoeffInvariant& b);

const Hom& slot_of(const CoeffHom& h, const SlotId& id);
FgAb slot_group(const CoeffInvariant& inv, const SlotId& id);
std::vector<SlotId> all_slots(const CoeffInvariant& inv);

}  // namespace kex
