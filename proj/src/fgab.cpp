#include "kex/fgab.hpp"

#include <algorithm>

namespace kex {

Int FgAb::order() const {
    if (!is_finite()) throw internal_error("order of infinite group");
    Int o = 1;
    for (const Int& d : torsion) o *= d;
    return o;
}

Int FgAb::exponent() const { return torsion.empty() ? Int(1) : torsion.back(); }

IntMat FgAb::relations() const {
    IntMat r(ngens(), torsion.size());
    for (std::size_t j = 0; j < torsion.size(); ++j) r.at(j, j) = torsion[j];
    return r;
}

FgAb FgAb::cyclic(const Int& d) {
    if (d == 0) return free_group(1);
    if (d == 1 || d == -1) return zero();
    FgAb g;
    g.torsion.push_back(abs(d));
    return g;
}

std::vector<Int> reduce_coords(const FgAb& g, std::vector<Int> coords) {
    if (coords.size() != g.ngens()) throw internal_error("reduce_coords: size mismatch");
    for (std::size_t j = 0; j < g.torsion.size(); ++j)
        mpz_fdiv_r(coords[j].get_mpz_t(), coords[j].get_mpz_t(), g.torsion[j].get_mpz_t());
    return coords;
}

namespace {
IntMat reduce_matrix(const FgAb& dst, IntMat m) {
    for (std::size_t i = 0; i < dst.torsion.size(); ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            mpz_fdiv_r(m.at(i, j).get_mpz_t(), m.at(i, j).get_mpz_t(),
                       dst.torsion[i].get_mpz_t());
    return m;
}
}  // namespace

Hom::Hom(FgAb s, FgAb d, IntMat mat) : src(std::move(s)), dst(std::move(d)) {
    if (mat.rows != dst.ngens() || mat.cols != src.ngens())
        throw internal_error("Hom: matrix shape mismatch");
    m = reduce_matrix(dst, std::move(mat));
}

Hom Hom::zero(const FgAb& s, const FgAb& d) { return Hom(s, d, IntMat(d.ngens(), s.ngens())); }

Hom Hom::identity(const FgAb& g) { return Hom(g, g, IntMat::identity(g.ngens())); }

bool Hom::well_defined() const {
    // d_j * (column j) must die in dst: torsion rows mod d, free rows exactly.
    for (std::size_t j = 0; j < src.torsion.size(); ++j) {
        for (std::size_t i = 0; i < dst.ngens(); ++i) {
            Int v = src.torsion[j] * m.at(i, j);
            if (i < dst.torsion.size()) {
                if (v % dst.torsion[i] != 0) return false;
            } else if (v != 0) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Int> Hom::apply(const std::vector<Int>& x) const {
    return reduce_coords(dst, m.apply(x));
}

Hom compose(const Hom& g, const Hom& h) {
    if (!(h.dst == g.src)) throw internal_error("compose: source/target mismatch");
    return Hom(h.src, g.dst, g.m.mul(h.m));
}

Hom hom_add(const Hom& a, const Hom& b) {
    if (!(a.src == b.src && a.dst == b.dst)) throw internal_error("hom_add: shape mismatch");
    return Hom(a.src, a.dst, a.m.add(b.m));
}

Hom hom_sub(const Hom& a, const Hom& b) {
    if (!(a.src == b.src && a.dst == b.dst)) throw internal_error("hom_sub: shape mismatch");
    return Hom(a.src, a.dst, a.m.sub(b.m));
}

Hom hom_scaled(const Hom& a, const Int& k) { return Hom(a.src, a.dst, a.m.scaled(k)); }

Hom hom_mul_n(const FgAb& g, const Int& n) {
    return Hom(g, g, IntMat::identity(g.ngens()).scaled(n));
}

Presented from_presentation(std::size_t gens, const IntMat& relations) {
    if (relations.rows != gens) throw input_error("from_presentation: relation rows != gens");
    SmithResult s = smith_normal_form(relations);
    const std::size_t nmin = std::min(relations.rows, relations.cols);

    std::vector<std::size_t> torsion_rows, free_rows;
    Presented out;
    for (std::size_t i = 0; i < gens; ++i) {
        Int d = i < nmin ? s.d.at(i, i) : Int(0);
        if (d == 0)
            free_rows.push_back(i);
        else if (d != 1) {
            torsion_rows.push_back(i);
            out.group.torsion.push_back(d);
        }
    }
    out.group.free_rank = free_rows.size();

    std::vector<std::size_t> kept = torsion_rows;
    kept.insert(kept.end(), free_rows.begin(), free_rows.end());
    out.proj = IntMat(kept.size(), gens);
    for (std::size_t k = 0; k < kept.size(); ++k)
        for (std::size_t j = 0; j < gens; ++j) out.proj.at(k, j) = s.u.at(kept[k], j);
    out.proj = reduce_matrix(out.group, out.proj);
    out.section = cols_subset(s.uinv, kept);
    return out;
}

SubgroupResult subgroup_from_lattice(const FgAb& g, const IntMat& gens) {
    if (gens.rows != g.ngens()) throw internal_error("subgroup_from_lattice: row mismatch");
    // Relations among the given generators inside g.
    IntMat aug = hstack(gens, g.relations());
    auto hr = hermite_cols(aug);
    std::vector<std::size_t> free_cols;
    std::vector<bool> pivot(aug.cols, false);
    for (auto [r, c] : hr.pivots) pivot[c] = true;
    for (std::size_t j = 0; j < aug.cols; ++j)
        if (!pivot[j]) free_cols.push_back(j);
    IntMat ker = cols_subset(hr.u, free_cols);
    IntMat rel(gens.cols, ker.cols);
    for (std::size_t i = 0; i < gens.cols; ++i)
        for (std::size_t j = 0; j < ker.cols; ++j) rel.at(i, j) = ker.at(i, j);
    Presented p = from_presentation(gens.cols, lattice_basis(rel));
    SubgroupResult out;
    out.group = p.group;
    out.incl = Hom(p.group, g, gens.mul(p.section));
    return out;
}

IntMat kernel_lattice(const Hom& h) {
    auto sol = solve_mod_subgroup(h.m, std::vector<Int>(h.dst.ngens()), h.dst.relations());
    if (!sol) throw internal_error("kernel_lattice: homogeneous solve failed");
    return lattice_basis(hstack(sol->kernel, h.src.relations()));
}

IntMat image_lattice(const Hom& h) { return lattice_basis(hstack(h.m, h.dst.relations())); }

bool element_in_lattice(const IntMat& lat, const std::vector<Int>& coords) {
    return lattice_contains(lat, coords);
}

SubgroupResult kernel(const Hom& h) { return subgroup_from_lattice(h.src, kernel_lattice(h)); }

SubgroupResult image(const Hom& h) { return subgroup_from_lattice(h.dst, h.m); }

QuotientResult cokernel(const Hom& h) {
    Presented p = from_presentation(h.dst.ngens(), hstack(h.dst.relations(), h.m));
    QuotientResult out;
    out.group = p.group;
    out.proj = Hom(h.dst, p.group, p.proj);
    out.section = p.section;
    return out;
}

bool is_isomorphism(const Hom& h) {
    return kernel(h).group.is_trivial() && cokernel(h).group.is_trivial();
}

Hom inverse(const Hom& h) {
    if (!(h.src.torsion == h.dst.torsion && h.src.free_rank == h.dst.free_rank))
        throw internal_error("inverse: groups differ");
    IntMat inv(h.src.ngens(), h.dst.ngens());
    for (std::size_t j = 0; j < h.dst.ngens(); ++j) {
        std::vector<Int> ej(h.dst.ngens());
        ej[j] = 1;
        auto sol = solve_mod_subgroup(h.m, ej, h.dst.relations());
        if (!sol) throw internal_error("inverse: hom is not invertible");
        inv.set_col(j, sol->x);
    }
    Hom g(h.dst, h.src, inv);
    if (!(compose(g, h) == Hom::identity(h.src)) || !(compose(h, g) == Hom::identity(h.dst)))
        throw internal_error("inverse: verification failed");
    return g;
}

DirectSum direct_sum(const std::vector<FgAb>& parts) {
    std::size_t total = 0;
    for (const FgAb& p : parts) total += p.ngens();
    IntMat rel(total, 0);
    {
        std::size_t off = 0;
        for (const FgAb& p : parts) {
            IntMat r(total, p.torsion.size());
            for (std::size_t j = 0; j < p.torsion.size(); ++j) r.at(off + j, j) = p.torsion[j];
            rel = hstack(rel, r);
            off += p.ngens();
        }
    }
    Presented pr = from_presentation(total, rel);
    DirectSum out;
    out.group = pr.group;
    std::size_t off = 0;
    for (const FgAb& p : parts) {
        IntMat inj(pr.group.ngens(), p.ngens());
        for (std::size_t j = 0; j < p.ngens(); ++j)
            for (std::size_t i = 0; i < pr.group.ngens(); ++i) inj.at(i, j) = pr.proj.at(i, off + j);
        out.inj.emplace_back(p, pr.group, inj);
        IntMat prj(p.ngens(), pr.group.ngens());
        for (std::size_t i = 0; i < p.ngens(); ++i)
            for (std::size_t j = 0; j < pr.group.ngens(); ++j)
                prj.at(i, j) = pr.section.at(off + i, j);
        out.proj.emplace_back(pr.group, p, prj);
        off += p.ngens();
    }
    return out;
}

namespace {
FgAb canonical_from_cyclic_orders(const std::vector<Int>& orders) {
    IntMat rel(orders.size(), 0);
    std::size_t k = 0;
    for (const Int& o : orders) {
        if (o != 0) {
            IntMat c(orders.size(), 1);
            c.at(k, 0) = o;
            rel = hstack(rel, c);
        }
        ++k;
    }
    return from_presentation(orders.size(), rel).group;
}
}  // namespace

HomGroup hom_group(const FgAb& a, const FgAb& b) {
    HomGroup hg;
    hg.src = a;
    hg.dst = b;
    std::vector<Int> orders;
    for (std::size_t i = 0; i < a.ngens(); ++i) {
        Int di = a.gen_order(i);
        for (std::size_t j = 0; j < b.ngens(); ++j) {
            Int ej = b.gen_order(j);
            Int mult, ord;
            if (di == 0) {
                mult = 1;
                ord = ej;  // 0 when both free
            } else if (ej == 0) {
                continue;  // torsion into free is zero
            } else {
                Int g = gcd(di, ej);
                if (g == 1) continue;
                mult = ej / g;
                ord = g;
            }
            IntMat m(b.ngens(), a.ngens());
            m.at(j, i) = mult;
            hg.cyclic_gens.emplace_back(a, b, m);
            hg.gen_pos.emplace_back(j, i);
            hg.gen_mult.push_back(mult);
            orders.push_back(ord);
        }
    }
    IntMat rel(orders.size(), 0);
    for (std::size_t t = 0; t < orders.size(); ++t) {
        if (orders[t] == 0) continue;
        IntMat c(orders.size(), 1);
        c.at(t, 0) = orders[t];
        rel = hstack(rel, c);
    }
    Presented p = from_presentation(orders.size(), rel);
    hg.group = p.group;
    hg.proj = p.proj;
    hg.section = p.section;
    for (std::size_t k = 0; k < p.group.ngens(); ++k) {
        Hom h = Hom::zero(a, b);
        for (std::size_t t = 0; t < hg.cyclic_gens.size(); ++t)
            if (p.section.at(t, k) != 0)
                h = hom_add(h, hom_scaled(hg.cyclic_gens[t], p.section.at(t, k)));
        hg.basis.push_back(h);
    }
    return hg;
}

Hom HomGroup::from_element(const std::vector<Int>& coords) const {
    std::vector<Int> u = section.apply(coords);
    Hom h = Hom::zero(src, dst);
    for (std::size_t t = 0; t < cyclic_gens.size(); ++t)
        if (u[t] != 0) h = hom_add(h, hom_scaled(cyclic_gens[t], u[t]));
    return h;
}

std::vector<Int> HomGroup::to_element(const Hom& h) const {
    std::vector<Int> u(cyclic_gens.size());
    for (std::size_t t = 0; t < cyclic_gens.size(); ++t) {
        const Int& entry = h.m.at(gen_pos[t].first, gen_pos[t].second);
        if (entry % gen_mult[t] != 0) throw internal_error("HomGroup::to_element: bad entry");
        u[t] = entry / gen_mult[t];
    }
    return reduce_coords(group, proj.apply(u));
}

FgAb ext_group(const FgAb& a, const FgAb& b) {
    std::vector<Int> orders;
    for (const Int& d : a.torsion) {
        for (const Int& e : b.torsion) orders.push_back(gcd(d, e));
        for (std::size_t k = 0; k < b.free_rank; ++k) orders.push_back(d);
    }
    return canonical_from_cyclic_orders(orders);
}

QuotientResult tensor_zn(const FgAb& a, const Int& n) {
    if (n < 2) throw input_error("tensor_zn: n must be >= 2");
    return cokernel(hom_mul_n(a, n));
}

SubgroupResult torsion_n(const FgAb& a, const Int& n) {
    if (n < 2) throw input_error("torsion_n: n must be >= 2");
    return kernel(hom_mul_n(a, n));
}

std::vector<std::vector<Int>> all_elements(const FgAb& g) {
    if (!g.is_finite()) throw input_error("all_elements: group is infinite");
    std::vector<std::vector<Int>> out;
    std::vector<Int> cur(g.ngens());
    for (;;) {
        out.push_back(cur);
        std::size_t j = 0;
        for (; j < g.torsion.size(); ++j) {
            cur[j] += 1;
            if (cur[j] < g.torsion[j]) break;
            cur[j] = 0;
        }
        if (j == g.torsion.size()) break;
    }
    return out;
}

namespace {
// Elements y of b with d*y = 0 (d > 0), or all of b when d = 0.
std::vector<std::vector<Int>> images_of_order(const FgAb& b, const Int& d) {
    if (d == 0) return all_elements(b);
    std::vector<std::vector<Int>> lists;  // per-generator choices
    std::vector<std::vector<Int>> out;
    std::vector<Int> strides;
    std::vector<Int> counts;
    for (std::size_t j = 0; j < b.ngens(); ++j) {
        Int ej = b.gen_order(j);
        if (ej == 0) {
            strides.push_back(0);
            counts.push_back(1);
        } else {
            Int g = gcd(d, ej);
            strides.push_back(ej / g);
            counts.push_back(g);
        }
    }
    std::vector<Int> idx(b.ngens());
    for (;;) {
        std::vector<Int> y(b.ngens());
        for (std::size_t j = 0; j < b.ngens(); ++j) y[j] = idx[j] * strides[j];
        out.push_back(y);
        std::size_t j = 0;
        for (; j < b.ngens(); ++j) {
            idx[j] += 1;
            if (idx[j] < counts[j]) break;
            idx[j] = 0;
        }
        if (j == b.ngens()) break;
    }
    return out;
}
}  // namespace

std::vector<Hom> enumerate_homs(const FgAb& a, const FgAb& b) {
    if (a.free_rank > 0 && !b.is_finite())
        throw input_error("enumerate_homs: hom set is infinite");
    std::vector<std::vector<std::vector<Int>>> choices;
    for (std::size_t i = 0; i < a.ngens(); ++i)
        choices.push_back(images_of_order(b, a.gen_order(i)));
    std::vector<Hom> out;
    std::vector<std::size_t> idx(a.ngens());
    for (;;) {
        IntMat m(b.ngens(), a.ngens());
        for (std::size_t i = 0; i < a.ngens(); ++i) m.set_col(i, choices[i][idx[i]]);
        out.emplace_back(a, b, m);
        std::size_t i = 0;
        for (; i < a.ngens(); ++i) {
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
        }
        if (i == a.ngens()) break;
    }
    return out;
}

}  // namespace kex
