#include "kex/homsolver.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "kex/blocksys.hpp"

namespace kex {

namespace {

CoeffInvariant base_only(const SixTerm& s) {
    CoeffInvariant inv;
    inv.base = s;
    return inv;
}

HomLambdaGroup solve_family_space(const CoeffInvariant& a, const CoeffInvariant& b) {
    HomLambdaGroup out;
    out.slots = all_slots(a);

    BlockSystem sys;
    for (const SlotId& id : out.slots) {
        FgAb src = slot_group(a, id);
        FgAb dst = slot_group(b, id);
        sys.add_unknown(src, dst);
        out.offsets.push_back(out.entry_count);
        out.entry_count += src.ngens() * dst.ngens();
        out.slot_src.push_back(std::move(src));
        out.slot_dst.push_back(std::move(dst));
    }
    auto slot_index = [&](const SlotId& id) -> std::size_t {
        for (std::size_t k = 0; k < out.slots.size(); ++k)
            if (out.slots[k].kind == id.kind && out.slots[k].n == id.n &&
                out.slots[k].i == id.i)
                return k;
        throw internal_error("family space: slot not found");
    };
    for (const NatRelation& r : natural_relations(a, b)) {
        BlockSystem::Expr e(r.map_a.src.ngens(), r.map_b.dst);
        e.add_term(slot_index(r.dst_slot), IntMat::identity(r.map_b.dst.ngens()), r.map_a.m);
        e.add_term(slot_index(r.src_slot), r.map_b.m, IntMat::identity(r.map_a.src.ngens()),
                   -1);
        sys.require_zero(std::move(e), r.name);
    }
    auto sol = sys.solve();
    if (!sol) throw internal_error("family space: homogeneous system infeasible");
    out.gen_lattice = sol->entry_lattice;

    // Entry vectors that are the zero family: every column in dst relations.
    std::size_t zcols = 0;
    for (std::size_t k = 0; k < out.slots.size(); ++k)
        zcols += out.slot_src[k].ngens() * out.slot_dst[k].torsion.size();
    out.zero_lattice = IntMat(out.entry_count, zcols);
    std::size_t zc = 0;
    for (std::size_t k = 0; k < out.slots.size(); ++k) {
        const FgAb& dst = out.slot_dst[k];
        std::size_t scols = out.slot_src[k].ngens();
        for (std::size_t c = 0; c < scols; ++c)
            for (std::size_t r = 0; r < dst.torsion.size(); ++r) {
                out.zero_lattice.at(out.offsets[k] + r * scols + c, zc) = dst.torsion[r];
                ++zc;
            }
    }

    // Quotient: valid entry vectors modulo zero families.
    IntMat rel_among;
    {
        IntMat aug = hstack(out.gen_lattice, out.zero_lattice);
        auto hr = hermite_cols(aug);
        std::vector<bool> pivot(aug.cols, false);
        for (auto [r, c] : hr.pivots) pivot[c] = true;
        std::vector<std::size_t> free_cols;
        for (std::size_t j = 0; j < aug.cols; ++j)
            if (!pivot[j]) free_cols.push_back(j);
        IntMat ker = cols_subset(hr.u, free_cols);
        rel_among = IntMat(out.gen_lattice.cols, ker.cols);
        for (std::size_t i = 0; i < out.gen_lattice.cols; ++i)
            for (std::size_t j = 0; j < ker.cols; ++j) rel_among.at(i, j) = ker.at(i, j);
        rel_among = lattice_basis(rel_among);
    }
    Presented p = from_presentation(out.gen_lattice.cols, rel_among);
    out.group = p.group;
    out.proj = p.proj;
    out.section = p.section;
    for (std::size_t k = 0; k < out.group.ngens(); ++k) {
        std::vector<Int> coords(out.group.ngens());
        coords[k] = 1;
        out.basis.push_back(out.from_element(coords));
    }
    return out;
}

}  // namespace

CoeffHom HomLambdaGroup::family_from_entries(const std::vector<Int>& entries) const {
    CoeffHom h;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const FgAb& src = slot_src[k];
        const FgAb& dst = slot_dst[k];
        IntMat m(dst.ngens(), src.ngens());
        for (std::size_t i = 0; i < m.e.size(); ++i) m.e[i] = entries[offsets[k] + i];
        Hom hom(src, dst, std::move(m));
        const SlotId& id = slots[k];
        if (id.kind == SlotId::Base) {
            h.alpha1[id.i] = std::move(hom);
        } else {
            if (h.levels.empty() || !(h.levels.back().n == id.n)) {
                CoeffHom::Level lv;
                lv.n = id.n;
                h.levels.push_back(std::move(lv));
            }
            if (id.kind == SlotId::Level)
                h.levels.back().alpha[id.i] = std::move(hom);
            else
                h.levels.back().alphaH = std::move(hom);
        }
    }
    return h;
}

std::vector<Int> HomLambdaGroup::entries_of(const CoeffHom& h) const {
    std::vector<Int> entries(entry_count);
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const Hom& hom = slot_of(h, slots[k]);
        for (std::size_t i = 0; i < hom.m.e.size(); ++i) entries[offsets[k] + i] = hom.m.e[i];
    }
    return entries;
}

CoeffHom HomLambdaGroup::from_element(const std::vector<Int>& coords) const {
    std::vector<Int> c = section.apply(coords);
    return family_from_entries(gen_lattice.apply(c));
}

std::vector<Int> HomLambdaGroup::to_element(const CoeffHom& h) const {
    auto sol = solve_linear(hstack(gen_lattice, zero_lattice), entries_of(h));
    if (!sol) throw input_error("to_element: family is not in the solution space");
    std::vector<Int> c(gen_lattice.cols);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = sol->x[i];
    return reduce_coords(group, proj.apply(c));
}

HomLambdaGroup hom_six(const SixTerm& a, const SixTerm& b) {
    return solve_family_space(base_only(a), base_only(b));
}

HomLambdaGroup hom_lambda_red(const CoeffInvariant& a, const CoeffInvariant& b) {
    if (a.support != b.support) throw input_error("hom_lambda_red: support mismatch");
    return solve_family_space(a, b);
}

CoeffHom delta(const CoeffHom& h) {
    CoeffHom out;
    out.alpha1 = h.alpha1;
    return out;
}

Hom delta_map(const HomLambdaGroup& lam, const HomLambdaGroup& six) {
    IntMat m(six.group.ngens(), lam.group.ngens());
    for (std::size_t k = 0; k < lam.group.ngens(); ++k)
        m.set_col(k, six.to_element(delta(lam.basis[k])));
    return Hom(lam.group, six.group, m);
}

std::string coeff_hom_key(const CoeffHom& h) {
    std::ostringstream os;
    for (std::size_t i = 0; i < 6; ++i) os << h.alpha1[i].m.rows << ':';
    for (std::size_t i = 0; i < 6; ++i)
        for (const Int& v : h.alpha1[i].m.e) os << v.get_str() << ',';
    for (const CoeffHom::Level& l : h.levels) {
        os << "|n=" << l.n.get_str() << ';';
        for (std::size_t i = 0; i < 6; ++i)
            for (const Int& v : l.alpha[i].m.e) os << v.get_str() << ',';
        os << 'H';
        for (const Int& v : l.alphaH.m.e) os << v.get_str() << ',';
    }
    return os.str();
}

AutReport aut_lambda_red(const CoeffInvariant& inv) {
    AutReport rep;
    HomLambdaGroup end = hom_lambda_red(inv, inv);
    rep.end_group = end.group;
    rep.end_basis = end.basis;
    rep.end_finite = end.group.is_finite();

    const Int enumeration_cap = 1000000;
    if (rep.end_finite && end.group.order() <= enumeration_cap) {
        std::vector<CoeffHom> units;
        std::vector<std::vector<Int>> unit_coords;
        std::map<std::string, std::size_t> unit_index;
        for (const auto& coords : all_elements(end.group)) {
            CoeffHom fam = end.from_element(coords);
            if (coeff_hom_is_invertible(fam)) {
                unit_index[coeff_hom_key(fam)] = units.size();
                units.push_back(std::move(fam));
                unit_coords.push_back(coords);
            }
        }
        rep.aut_known = true;
        rep.aut_order = Int(units.size());
        // Greedy generating set under composition.
        std::vector<bool> generated(units.size(), false);
        std::size_t identity_idx = unit_index.at(coeff_hom_key(identity_coeff_hom(inv)));
        generated[identity_idx] = true;
        std::size_t covered = 1;
        for (std::size_t u = 0; u < units.size() && covered < units.size(); ++u) {
            if (generated[u]) continue;
            rep.generators.push_back(units[u]);
            rep.generator_inverses.push_back(coeff_hom_inverse(units[u]));
            // close under composition with everything already generated
            std::vector<std::size_t> frontier{u};
            generated[u] = true;
            ++covered;
            while (!frontier.empty()) {
                std::size_t g = frontier.back();
                frontier.pop_back();
                for (std::size_t w = 0; w < units.size(); ++w) {
                    if (!generated[w]) continue;
                    for (std::size_t prod :
                         {unit_index.at(coeff_hom_key(compose_coeff_hom(units[g], units[w]))),
                          unit_index.at(coeff_hom_key(compose_coeff_hom(units[w], units[g])))}) {
                        if (!generated[prod]) {
                            generated[prod] = true;
                            ++covered;
                            frontier.push_back(prod);
                        }
                    }
                }
            }
        }
        return rep;
    }

    // Rank-one recognition: End = Z * identity, units are +-identity.
    if (end.group.free_rank == 1 && end.group.torsion.empty()) {
        CoeffHom id = identity_coeff_hom(inv);
        std::vector<Int> id_coords = end.to_element(id);
        if (abs(id_coords[0]) == 1) {
            CoeffHom neg = coeff_hom_sub(zero_coeff_hom(inv, inv), id);
            rep.aut_known = true;
            rep.aut_order = 2;
            rep.generators.push_back(neg);
            rep.generator_inverses.push_back(neg);
            rep.note = "endomorphisms form Z(identity); units are +-identity";
            return rep;
        }
    }
    rep.note = "endomorphism group is infinite; invertibility predicate mode";
    return rep;
}

std::vector<CoeffHom> brute_force_hom_lambda(const CoeffInvariant& a, const CoeffInvariant& b) {
    if (a.support != b.support) throw input_error("brute force: support mismatch");
    std::vector<SlotId> slots = all_slots(a);
    std::vector<std::vector<Hom>> choices;
    for (const SlotId& id : slots) {
        FgAb src = slot_group(a, id);
        FgAb dst = slot_group(b, id);
        if (!src.is_finite() || !dst.is_finite())
            throw input_error("brute force: invariant has an infinite group");
        choices.push_back(enumerate_homs(src, dst));
    }
    auto slot_pos = [&](const SlotId& id) -> std::size_t {
        for (std::size_t k = 0; k < slots.size(); ++k)
            if (slots[k].kind == id.kind && slots[k].n == id.n && slots[k].i == id.i) return k;
        throw internal_error("brute force: slot not found");
    };
    // Relations become checkable once both endpoint slots are assigned.
    std::vector<NatRelation> rels = natural_relations(a, b);
    std::vector<std::vector<std::size_t>> due(slots.size());
    for (std::size_t r = 0; r < rels.size(); ++r)
        due[std::max(slot_pos(rels[r].src_slot), slot_pos(rels[r].dst_slot))].push_back(r);

    std::vector<CoeffHom> out;
    std::vector<std::size_t> pick(slots.size(), 0);
    std::vector<const Hom*> assigned(slots.size(), nullptr);

    auto relation_ok = [&](std::size_t r) {
        const NatRelation& rel = rels[r];
        const Hom& asrc = *assigned[slot_pos(rel.src_slot)];
        const Hom& adst = *assigned[slot_pos(rel.dst_slot)];
        return compose(adst, rel.map_a) == compose(rel.map_b, asrc);
    };

    std::size_t depth = 0;
    for (;;) {
        if (pick[depth] == choices[depth].size()) {
            pick[depth] = 0;
            if (depth == 0) break;
            --depth;
            ++pick[depth];
            continue;
        }
        assigned[depth] = &choices[depth][pick[depth]];
        bool ok = true;
        for (std::size_t r : due[depth])
            if (!relation_ok(r)) {
                ok = false;
                break;
            }
        if (!ok) {
            ++pick[depth];
            continue;
        }
        if (depth + 1 == slots.size()) {
            CoeffHom fam;
            for (std::size_t k = 0; k < slots.size(); ++k) {
                const SlotId& id = slots[k];
                if (id.kind == SlotId::Base) {
                    fam.alpha1[id.i] = *assigned[k];
                } else {
                    if (fam.levels.empty() || !(fam.levels.back().n == id.n)) {
                        CoeffHom::Level lv;
                        lv.n = id.n;
                        fam.levels.push_back(std::move(lv));
                    }
                    if (id.kind == SlotId::Level)
                        fam.levels.back().alpha[id.i] = *assigned[k];
                    else
                        fam.levels.back().alphaH = *assigned[k];
                }
            }
            out.push_back(std::move(fam));
            ++pick[depth];
        } else {
            ++depth;
        }
    }
    return out;
}

}  // namespace kex
