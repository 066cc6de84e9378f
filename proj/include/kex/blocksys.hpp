#pragma once
#include <optional>
#include <string>
#include <vector>

#include "kex/fgab.hpp"

namespace kex {

// Integer-linear constraint system whose variables are the matrix entries of
// unknown block maps between fixed groups. Constraints equate map expressions
// to zero modulo the relations of the target group. Solved exactly over Z;
// the returned representative is reduced deterministically modulo the
// homogeneous solution lattice.
class BlockSystem {
  public:
    struct Unknown {
        FgAb src, dst;
        bool hom = true;  // if set, well-definedness congruences are imposed
    };

    struct Term {
        Int scalar;
        std::size_t unknown = 0;
        IntMat post;  // expr_dst.ngens x unknown.dst.ngens
        IntMat pre;   // unknown.src.ngens x expr_src_gens
    };

    struct Expr {
        std::size_t src_gens = 0;
        FgAb dst;
        IntMat constant;  // dst.ngens x src_gens
        std::vector<Term> terms;

        Expr(std::size_t s, FgAb d) : src_gens(s), dst(std::move(d)) {
            constant = IntMat(dst.ngens(), src_gens);
        }
        void add_const(const IntMat& c, const Int& scalar = 1);
        void add_term(std::size_t unknown, IntMat post, IntMat pre, Int scalar = 1);
    };

    std::size_t add_unknown(FgAb src, FgAb dst, bool hom = true);
    void require_zero(Expr e, std::string name);

    struct Solution {
        std::vector<IntMat> matrices;
        IntMat entry_lattice;  // homogeneous solutions projected to the entries
        std::size_t entry_count = 0;
    };

    std::optional<Solution> solve() const;

    // Name of the first constraint (in insertion order) whose addition makes
    // the system infeasible. Only meaningful after solve() failed.
    std::string first_infeasible() const;

    const std::vector<Unknown>& unknowns() const { return uks_; }

    // Unpacks an entry vector of the homogeneous lattice into matrices.
    std::vector<IntMat> unpack(const std::vector<Int>& entries) const;

  private:
    struct Assembled;
    Assembled assemble(std::size_t n_constraints) const;

    std::vector<Unknown> uks_;
    std::vector<std::size_t> offsets_;
    std::size_t entry_count_ = 0;
    std::vector<std::pair<Expr, std::string>> constraints_;
};

}  // namespace kex
