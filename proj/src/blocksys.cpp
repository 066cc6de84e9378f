#include "kex/blocksys.hpp"

#include <map>

namespace kex {

void BlockSystem::Expr::add_const(const IntMat& c, const Int& scalar) {
    if (c.rows != dst.ngens() || c.cols != src_gens)
        throw internal_error("BlockSystem: constant shape mismatch");
    constant = constant.add(scalar == 1 ? c : c.scaled(scalar));
}

void BlockSystem::Expr::add_term(std::size_t unknown, IntMat post, IntMat pre, Int scalar) {
    terms.push_back({std::move(scalar), unknown, std::move(post), std::move(pre)});
}

std::size_t BlockSystem::add_unknown(FgAb src, FgAb dst, bool hom) {
    offsets_.push_back(entry_count_);
    entry_count_ += src.ngens() * dst.ngens();
    uks_.push_back({std::move(src), std::move(dst), hom});
    return uks_.size() - 1;
}

void BlockSystem::require_zero(Expr e, std::string name) {
    for (const Term& t : e.terms) {
        const Unknown& u = uks_.at(t.unknown);
        if (t.post.rows != e.dst.ngens() || t.post.cols != u.dst.ngens() ||
            t.pre.rows != u.src.ngens() || t.pre.cols != e.src_gens)
            throw internal_error("BlockSystem: term shape mismatch in " + name);
    }
    constraints_.emplace_back(std::move(e), std::move(name));
}

namespace {
struct RowAccum {
    std::map<std::size_t, Int> coeff;
    Int rhs;
};
}  // namespace

struct BlockSystem::Assembled {
    IntMat a;
    std::vector<Int> b;
};

BlockSystem::Assembled BlockSystem::assemble(std::size_t n_constraints) const {
    std::vector<RowAccum> rows;
    std::size_t slack = entry_count_;

    auto add_congruence_rows = [&](const FgAb& dst, std::size_t ncols,
                                   auto&& entry_coeff_fn, const IntMat* constant) {
        // One block of rows per column; torsion rows of dst get a slack var.
        for (std::size_t c = 0; c < ncols; ++c) {
            std::size_t slack_base = slack;
            slack += dst.torsion.size();
            for (std::size_t r = 0; r < dst.ngens(); ++r) {
                RowAccum row;
                entry_coeff_fn(r, c, row);
                if (r < dst.torsion.size()) row.coeff[slack_base + r] += dst.torsion[r];
                if (constant) row.rhs = -constant->at(r, c);
                bool nontrivial = row.rhs != 0;
                for (auto& [k, v] : row.coeff) nontrivial = nontrivial || v != 0;
                if (nontrivial) rows.push_back(std::move(row));
            }
        }
    };

    // Well-definedness of hom unknowns: d_q * column q dies in dst.
    for (std::size_t k = 0; k < uks_.size(); ++k) {
        const Unknown& u = uks_[k];
        if (!u.hom) continue;
        for (std::size_t q = 0; q < u.src.torsion.size(); ++q) {
            add_congruence_rows(
                u.dst, 1,
                [&](std::size_t r, std::size_t, RowAccum& row) {
                    row.coeff[offsets_[k] + r * u.src.ngens() + q] += u.src.torsion[q];
                },
                nullptr);
        }
    }

    for (std::size_t ci = 0; ci < n_constraints; ++ci) {
        const Expr& e = constraints_[ci].first;
        add_congruence_rows(
            e.dst, e.src_gens,
            [&](std::size_t r, std::size_t c, RowAccum& row) {
                for (const Term& t : e.terms) {
                    const Unknown& u = uks_[t.unknown];
                    for (std::size_t p = 0; p < u.dst.ngens(); ++p) {
                        if (t.post.at(r, p) == 0) continue;
                        for (std::size_t q = 0; q < u.src.ngens(); ++q) {
                            if (t.pre.at(q, c) == 0) continue;
                            row.coeff[offsets_[t.unknown] + p * u.src.ngens() + q] +=
                                t.scalar * t.post.at(r, p) * t.pre.at(q, c);
                        }
                    }
                }
            },
            &e.constant);
    }

    Assembled out;
    out.a = IntMat(rows.size(), slack);
    out.b.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (auto& [k, v] : rows[i].coeff) out.a.at(i, k) = v;
        out.b[i] = rows[i].rhs;
    }
    return out;
}

std::optional<BlockSystem::Solution> BlockSystem::solve() const {
    Assembled sys = assemble(constraints_.size());
    auto sol = solve_linear(sys.a, sys.b);
    if (!sol) return std::nullopt;

    IntMat proj(entry_count_, sol->kernel.cols);
    for (std::size_t i = 0; i < entry_count_; ++i)
        for (std::size_t j = 0; j < sol->kernel.cols; ++j) proj.at(i, j) = sol->kernel.at(i, j);
    IntMat lat = lattice_basis(proj);

    std::vector<Int> entries(sol->x.begin(), sol->x.begin() + entry_count_);
    entries = reduce_mod_lattice(std::move(entries), lat);

    Solution out;
    out.entry_count = entry_count_;
    out.entry_lattice = lat;
    out.matrices = unpack(entries);
    return out;
}

std::vector<IntMat> BlockSystem::unpack(const std::vector<Int>& entries) const {
    std::vector<IntMat> ms;
    for (std::size_t k = 0; k < uks_.size(); ++k) {
        const Unknown& u = uks_[k];
        IntMat m(u.dst.ngens(), u.src.ngens());
        for (std::size_t i = 0; i < m.e.size(); ++i) m.e[i] = entries[offsets_[k] + i];
        ms.push_back(std::move(m));
    }
    return ms;
}

std::string BlockSystem::first_infeasible() const {
    for (std::size_t n = 1; n <= constraints_.size(); ++n) {
        Assembled sys = assemble(n);
        if (!solve_linear(sys.a, sys.b)) return constraints_[n - 1].second;
    }
    return "unknown";
}

}  // namespace kex
