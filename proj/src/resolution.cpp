#include "kex/resolution.hpp"

#include <algorithm>
#include <map>

#include "kex/blocksys.hpp"

namespace kex {

std::vector<Int> PrimaryDecomposition::prime_power_orders() const {
    std::vector<Int> out;
    for (const PrimaryPart& p : parts)
        for (std::size_t j = 0; j < p.exponents.size(); ++j) {
            Int q;
            mpz_pow_ui(q.get_mpz_t(), p.prime.get_mpz_t(), p.exponents[j].get_ui());
            for (std::size_t m = 0; m < p.mults[j]; ++m) out.push_back(q);
        }
    return out;
}

PrimaryDecomposition primary_decompose(const FgAb& g) {
    // Factor every invariant factor; collect (prime, exponent) -> multiplicity
    // and the provenance of each primary generator.
    struct PrimGen {
        Int prime, power;
        std::size_t factor_idx;
    };
    std::map<Int, std::map<Int, std::size_t>> table;  // prime -> exponent -> mult
    std::vector<PrimGen> gens;
    for (std::size_t j = 0; j < g.torsion.size(); ++j) {
        Int d = g.torsion[j];
        for (Int p = 2; p * p <= d; p += (p == 2 ? 1 : 2)) {
            if (d % p != 0) continue;
            Int q = 1;
            std::size_t e = 0;
            while (d % p == 0) {
                d /= p;
                q *= p;
                ++e;
            }
            table[p][Int(e)] += 1;
            gens.push_back({p, q, j});
        }
        if (d > 1) {
            table[d][Int(1)] += 1;
            gens.push_back({d, d, j});
        }
    }
    PrimaryDecomposition out;
    for (auto& [p, em] : table) {
        PrimaryPart part;
        part.prime = p;
        for (auto& [e, m] : em) {
            part.exponents.push_back(e);
            part.mults.push_back(m);
        }
        out.parts.push_back(std::move(part));
    }
    out.free_rank = g.free_rank;

    // Primary generator order: primes ascending, exponents ascending, then by
    // originating invariant factor.
    std::sort(gens.begin(), gens.end(), [](const PrimGen& a, const PrimGen& b) {
        if (a.prime != b.prime) return a.prime < b.prime;
        if (a.power != b.power) return a.power < b.power;
        return a.factor_idx < b.factor_idx;
    });
    FgAb prim;
    for (const PrimGen& pg : gens) prim.torsion.push_back(pg.power);
    prim.free_rank = g.free_rank;
    // The primary orders need not form a divisibility chain; the group is
    // carried with its own coordinate maps instead.
    out.primary_group = prim;

    IntMat to(g.ngens(), prim.ngens());
    IntMat from(prim.ngens(), g.ngens());
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const PrimGen& pg = gens[k];
        const Int& d = g.torsion[pg.factor_idx];
        Int rest = d / pg.power;
        // CRT coefficient: 1 mod power, 0 mod rest.
        Int c, u, v;
        mpz_gcdext(c.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), pg.power.get_mpz_t(),
                   rest.get_mpz_t());
        if (c != 1) throw internal_error("primary_decompose: CRT failed");
        Int coeff = v * rest;  // = 1 - u*power
        mpz_fdiv_r(coeff.get_mpz_t(), coeff.get_mpz_t(), d.get_mpz_t());
        to.at(pg.factor_idx, k) = coeff;
        from.at(k, pg.factor_idx) = 1;
    }
    for (std::size_t r = 0; r < g.free_rank; ++r) {
        to.at(g.torsion.size() + r, gens.size() + r) = 1;
        from.at(gens.size() + r, g.torsion.size() + r) = 1;
    }
    out.to_group = Hom(prim, g, to);
    out.from_group = Hom(g, prim, from);
    if (!out.to_group.well_defined() || !out.from_group.well_defined() ||
        !(compose(out.from_group, out.to_group) == Hom::identity(prim)) ||
        !(compose(out.to_group, out.from_group) == Hom::identity(g)))
        throw internal_error("primary_decompose: coordinate change failed");
    return out;
}

namespace {

void assert_surjective(const Hom& h, const std::string& what) {
    if (!cokernel(h).group.is_trivial())
        throw internal_error("build_resolution: " + what + " is not surjective");
}

}  // namespace

Resolution build_resolution(const SixTerm& g) {
    ClassFlags fl = class_flags(g);
    if (!fl.ideal_k1_zero || !fl.quotient_k1_free)
        throw input_error(
            "build_resolution: requires trivial g[3] and free g[5] (main-theorem class)");
    if (!is_exact(g)) throw input_error("build_resolution: input sequence is not exact");
    if (!g.g[4].is_free())
        throw internal_error("build_resolution: g[4] must be free under the preconditions");

    Resolution res;
    res.base = g;
    res.dec = primary_decompose(g.g[2]);

    FgAb f2hat = FgAb::free_group(res.dec.primary_group.ngens());
    Hom eta2(f2hat, g.g[2], res.dec.to_group.m);
    assert_surjective(eta2, "index-2 cover");

    // Generator lifts through the (surjective, since g[3] = 0) map at index 1.
    IntMat zeta_m(g.g[1].ngens(), f2hat.ngens());
    for (std::size_t k = 0; k < f2hat.ngens(); ++k) {
        auto sol = solve_mod_subgroup(g.f[1].m, eta2.m.col(k), g.g[2].relations());
        if (!sol) throw internal_error("build_resolution: generator lift failed");
        zeta_m.set_col(k, sol->x);
    }
    res.lift = Hom(f2hat, g.g[1], zeta_m);

    res.free_cover0 = FgAb::free_group(g.g[0].ngens());
    Hom eta0_tilde(res.free_cover0, g.g[0], IntMat::identity(g.g[0].ngens()));

    DirectSum ds5 = direct_sum({g.g[4], g.g[5]});
    DirectSum ds0 = direct_sum({g.g[5], res.free_cover0});
    DirectSum ds1 = direct_sum({res.free_cover0, f2hat});

    SixTerm cover;
    cover.g = {ds0.group, ds1.group, f2hat, FgAb::zero(), g.g[4], ds5.group};
    cover.f[3] = Hom::zero(cover.g[3], cover.g[4]);
    cover.f[4] = ds5.inj[0];
    cover.f[5] = compose(ds0.inj[0], ds5.proj[1]);
    cover.f[0] = compose(ds1.inj[0], ds0.proj[1]);
    cover.f[1] = ds1.proj[1];
    cover.f[2] = Hom::zero(cover.g[2], cover.g[3]);

    std::array<Hom, 6> eta;
    eta[3] = Hom::zero(cover.g[3], g.g[3]);
    eta[4] = Hom::identity(g.g[4]);
    eta[5] = hom_add(compose(g.f[4], ds5.proj[0]), ds5.proj[1]);
    eta[0] = hom_add(compose(g.f[5], ds0.proj[0]), compose(eta0_tilde, ds0.proj[1]));
    eta[1] = hom_add(compose(compose(g.f[0], eta0_tilde), ds1.proj[0]),
                     compose(res.lift, ds1.proj[1]));
    eta[2] = eta2;

    ExactReport cover_exact = check_exact(cover);
    if (!cover_exact.pass) throw internal_error("build_resolution: cover row is not exact");
    for (std::size_t i = 0; i < 6; ++i)
        if (!(i == 3)) assert_surjective(eta[i], "eta at index " + std::to_string(i));

    res.proj = SixTermHom{cover, g, eta};
    if (validate_sixterm_hom(res.proj))
        throw internal_error("build_resolution: projection is not a chain map");

    SixTerm sub;
    std::array<Hom, 6> lambda;
    for (std::size_t i = 0; i < 6; ++i) {
        SubgroupResult k = kernel(eta[i]);
        sub.g[i] = k.group;
        lambda[i] = k.incl;
        if (!sub.g[i].is_free())
            throw internal_error("build_resolution: kernel row is not free");
    }
    for (std::size_t i = 0; i < 6; ++i) {
        // Restrict the cover map to the kernels.
        IntMat m(sub.g[(i + 1) % 6].ngens(), sub.g[i].ngens());
        IntMat img = cover.f[i].m.mul(lambda[i].m);
        for (std::size_t k = 0; k < sub.g[i].ngens(); ++k) {
            auto sol = solve_mod_subgroup(lambda[(i + 1) % 6].m, img.col(k),
                                          cover.g[(i + 1) % 6].relations());
            if (!sol) throw internal_error("build_resolution: kernel row is not invariant");
            m.set_col(k, sol->x);
        }
        sub.f[i] = Hom(sub.g[i], sub.g[(i + 1) % 6], m);
    }
    ExactReport sub_exact = check_exact(sub);
    if (!sub_exact.pass) throw internal_error("build_resolution: kernel row is not exact");

    res.cover = cover;
    res.sub = sub;
    res.incl = SixTermHom{sub, cover, lambda};
    if (validate_sixterm_hom(res.incl))
        throw internal_error("build_resolution: inclusion is not a chain map");

    // Per-index short exactness: incl injective with image = ker(proj).
    for (std::size_t i = 0; i < 6; ++i) {
        if (!kernel(lambda[i]).group.is_trivial())
            throw internal_error("build_resolution: inclusion not injective");
        IntMat im = image_lattice(lambda[i]);
        IntMat ker = kernel_lattice(eta[i]);
        if (!(lattice_basis(im) == lattice_basis(ker)))
            throw internal_error("build_resolution: rows are not levelwise exact");
    }

    // The index-2 kernel inclusion is diagonal on the primary generators.
    for (std::size_t c = 0; c < lambda[2].m.cols; ++c) {
        Int diag;
        std::size_t hits = 0;
        for (std::size_t r = 0; r < lambda[2].m.rows; ++r)
            if (lambda[2].m.at(r, c) != 0) {
                ++hits;
                diag = lambda[2].m.at(r, c);
            }
        if (hits != 1)
            throw internal_error("build_resolution: index-2 inclusion is not diagonal");
        res.prime_power_diagonal.push_back(diag);
    }
    return res;
}

HKernelResult kernel_on_H(const Resolution& res, const Int& n) {
    // n must be one of the prime powers of the decomposition.
    const PrimaryPart* part = nullptr;
    std::size_t jpos = 0;
    Int power;
    for (const PrimaryPart& p : res.dec.parts)
        for (std::size_t j = 0; j < p.exponents.size(); ++j) {
            mpz_pow_ui(power.get_mpz_t(), p.prime.get_mpz_t(), p.exponents[j].get_ui());
            if (power == n) {
                part = &p;
                jpos = j;
            }
        }
    if (!part) throw input_error("kernel_on_H: n is not a prime power of the decomposition");

    // Degree-1 mod-n H-groups of both rows collapse to cokernels: the K1 side
    // of each row is free and injects under multiplication by n.
    QuotientResult sub_h = cokernel(hom_scaled(res.sub.f[1], n));
    QuotientResult cover_h = cokernel(hom_scaled(res.cover.f[1], n));
    Hom induced(sub_h.group, cover_h.group,
                cover_h.proj.m.mul(res.incl.phi[2].m).mul(sub_h.section));
    if (!induced.well_defined()) throw internal_error("kernel_on_H: induced map ill-defined");

    HKernelResult out;
    SubgroupResult k = kernel(induced);
    out.kernel_group = k.group;
    out.inclusion = k.incl;

    std::vector<Int> orders;
    for (std::size_t j = 0; j < part->exponents.size(); ++j) {
        Int e = part->exponents[j] < part->exponents[jpos] ? part->exponents[j]
                                                           : part->exponents[jpos];
        Int q;
        mpz_pow_ui(q.get_mpz_t(), part->prime.get_mpz_t(), e.get_ui());
        for (std::size_t m = 0; m < part->mults[j]; ++m) orders.push_back(q);
    }
    IntMat rel(orders.size(), orders.size());
    for (std::size_t t = 0; t < orders.size(); ++t) rel.at(t, t) = orders[t];
    out.formula_group = from_presentation(orders.size(), rel).group;
    if (!(out.formula_group == out.kernel_group))
        throw internal_error("kernel_on_H: computed kernel differs from the p-power formula");
    return out;
}

namespace {

// The connecting family of the short exact row pair, built from the two
// snake corners and solved against the full catalog.
CoeffHom solve_connecting_family(const Resolution& res, const CoeffInvariant& isg,
                                 const CoeffInvariant& ih, const CoeffHom& psi_hat,
                                 const CoeffInvariant& icover) {
    SixTerm sg = suspend(res.base);
    std::vector<SlotId> slots = all_slots(isg);

    // Snake corners per level.
    struct SnakeData {
        std::array<IntMat, 6> fcorner;  // S^{SG}_i -> T^{IH}_i
        IntMat hcorner;                 // KR^{SG} -> CK^{IH}
        LevelSplit sp_sg, sp_h;
    };
    std::vector<SnakeData> snakes;
    for (const Int& n : isg.support) {
        SnakeData sd;
        sd.sp_sg = compute_level_split(sg, n);
        sd.sp_h = compute_level_split(res.sub, n);
        for (std::size_t i = 0; i < 6; ++i) {
            const SubgroupResult& s_src = sd.sp_sg.sg[i];  // (SG_{i+3})[n] = base[i][n]
            IntMat corner(sd.sp_h.tq[i].group.ngens(), s_src.group.ngens());
            for (std::size_t k = 0; k < s_src.group.ngens(); ++k) {
                std::vector<Int> x = s_src.incl.m.col(k);  // coords in base.g[i]
                auto y = solve_mod_subgroup(res.proj.phi[i].m, x, res.base.g[i].relations());
                if (!y) throw internal_error("connecting family: cover lift failed");
                std::vector<Int> ny = y->x;
                for (Int& v : ny) v *= n;
                auto h = solve_linear(res.incl.phi[i].m, ny);
                if (!h) throw internal_error("connecting family: kernel lift failed");
                corner.set_col(k, sd.sp_h.tq[i].proj.apply(h->x));
            }
            sd.fcorner[i] = corner;
        }
        {
            const SubgroupResult& kr = sd.sp_sg.kr;  // ker(n f4) in base.g[4]
            IntMat corner(sd.sp_h.ck.group.ngens(), kr.group.ngens());
            for (std::size_t k = 0; k < kr.group.ngens(); ++k) {
                std::vector<Int> x = kr.incl.m.col(k);
                std::vector<Int> w = res.cover.f[4].m.apply(x);  // eta4 = id lift
                for (Int& v : w) v *= n;
                auto h = solve_linear(res.incl.phi[5].m, w);
                if (!h) throw internal_error("connecting family: H5 lift failed");
                corner.set_col(k, sd.sp_h.ck.proj.apply(h->x));
            }
            sd.hcorner = corner;
        }
        snakes.push_back(std::move(sd));
    }

    for (int s1 : {1, -1})
        for (int s2 : {1, -1}) {
            BlockSystem sys;
            std::vector<std::size_t> uk;
            for (const SlotId& id : slots)
                uk.push_back(sys.add_unknown(slot_group(isg, id), slot_group(ih, id)));
            auto slot_index = [&](const SlotId& id) -> std::size_t {
                for (std::size_t k = 0; k < slots.size(); ++k)
                    if (slots[k].kind == id.kind && slots[k].n == id.n &&
                        slots[k].i == id.i)
                        return uk[k];
                throw internal_error("connecting family: slot not found");
            };
            for (std::size_t k = 0; k < slots.size(); ++k) {
                const SlotId& id = slots[k];
                if (id.kind != SlotId::Base) continue;
                BlockSystem::Expr e(slot_group(isg, id).ngens(), slot_group(ih, id));
                e.add_term(uk[k], IntMat::identity(slot_group(ih, id).ngens()),
                           IntMat::identity(slot_group(isg, id).ngens()));
                sys.require_zero(std::move(e), "base zero");
            }
            for (std::size_t li = 0; li < isg.support.size(); ++li) {
                const Int& n = isg.support[li];
                const SnakeData& sd = snakes[li];
                for (std::size_t i = 0; i < 6; ++i) {
                    std::size_t k = slot_index({SlotId::Level, n, i});
                    BlockSystem::Expr e(sd.sp_sg.sg[i].group.ngens(), sd.sp_h.tq[i].group);
                    e.add_term(k, sd.sp_h.fsum[i].proj[0].m, sd.sp_sg.fsum[i].inj[1].m);
                    e.add_const(sd.fcorner[i], -s1);
                    sys.require_zero(std::move(e), "snake corner pin");
                }
                std::size_t k = slot_index({SlotId::LevelH, n, 0});
                BlockSystem::Expr e(sd.sp_sg.kr.group.ngens(), sd.sp_h.ck.group);
                e.add_term(k, sd.sp_h.hsum.proj[0].m, sd.sp_sg.hsum.inj[1].m);
                e.add_const(sd.hcorner, -s2);
                sys.require_zero(std::move(e), "snake H corner pin");
            }
            for (const NatRelation& r : natural_relations(isg, ih)) {
                BlockSystem::Expr e(r.map_a.src.ngens(), r.map_b.dst);
                e.add_term(slot_index(r.dst_slot), IntMat::identity(r.map_b.dst.ngens()),
                           r.map_a.m);
                e.add_term(slot_index(r.src_slot), r.map_b.m,
                           IntMat::identity(r.map_a.src.ngens()), -1);
                sys.require_zero(std::move(e), r.name);
            }
            // The composite with the covering family vanishes.
            for (std::size_t k = 0; k < slots.size(); ++k) {
                const Hom& psi_slot = slot_of(psi_hat, slots[k]);
                BlockSystem::Expr e(slot_group(isg, slots[k]).ngens(),
                                    slot_group(icover, slots[k]));
                e.add_term(uk[k], psi_slot.m,
                           IntMat::identity(slot_group(isg, slots[k]).ngens()));
                sys.require_zero(std::move(e), "composite with covering family");
            }
            auto sol = sys.solve();
            if (!sol) continue;
            CoeffHom out;
            std::vector<Int> entries;
            for (std::size_t k = 0; k < slots.size(); ++k)
                for (const Int& v : sol->matrices[k].e) entries.push_back(v);
            // reuse the slot unpacking of HomLambdaGroup layout conventions
            for (std::size_t k = 0; k < slots.size(); ++k) {
                Hom hom(slot_group(isg, slots[k]), slot_group(ih, slots[k]),
                        sol->matrices[k]);
                const SlotId& id = slots[k];
                if (id.kind == SlotId::Base) {
                    out.alpha1[id.i] = std::move(hom);
                } else {
                    if (out.levels.empty() || !(out.levels.back().n == id.n)) {
                        CoeffHom::Level lv;
                        lv.n = id.n;
                        out.levels.push_back(std::move(lv));
                    }
                    if (id.kind == SlotId::Level)
                        out.levels.back().alpha[id.i] = std::move(hom);
                    else
                        out.levels.back().alphaH = std::move(hom);
                }
            }
            if (!validate_coeff_hom(out, isg, ih)) return out;
        }
    throw construction_error("hom_sequence_report: no connecting family found");
}

}  // namespace

HomSequenceReport hom_sequence_report(const Resolution& res, const CoeffInvariant& target) {
    ClassFlags fl = class_flags(target.base);
    if (!fl.zero_exponential || !fl.quotient_k1_free || !fl.ideal_k1_zero)
        throw input_error(
            "hom_sequence_report: target must have zero exponential map, trivial g[3] and "
            "free g[5]");

    std::vector<Int> spt = support_join({res.base, target.base});
    SixTerm sg = suspend(res.base);
    CoeffInvariant isg = build_invariant(sg, spt);
    CoeffInvariant ih = build_invariant(res.sub, spt);
    CoeffInvariant icover = build_invariant(res.cover, spt);
    CoeffInvariant iscover = build_invariant(suspend(res.cover), spt);
    CoeffInvariant istarget = build_invariant(suspend(target.base), spt);

    CoeffHom psi_hat = induce_hom(res.incl, ih, icover).hom;
    SixTermHom eta_shift;
    eta_shift.src = suspend(res.cover);
    eta_shift.dst = sg;
    for (std::size_t i = 0; i < 6; ++i) eta_shift.phi[i] = res.proj.phi[(i + 3) % 6];
    CoeffHom bdry_hat = induce_hom(eta_shift, iscover, isg).hom;
    CoeffHom phi_hat = solve_connecting_family(res, isg, ih, psi_hat, icover);

    HomLambdaGroup A = hom_lambda_red(icover, istarget);
    HomLambdaGroup B = hom_lambda_red(ih, istarget);
    HomLambdaGroup C = hom_lambda_red(isg, istarget);
    HomLambdaGroup D = hom_lambda_red(iscover, istarget);

    auto precompose_map = [](const HomLambdaGroup& from, const HomLambdaGroup& to,
                             const CoeffHom& by) {
        IntMat m(to.group.ngens(), from.group.ngens());
        for (std::size_t k = 0; k < from.group.ngens(); ++k)
            m.set_col(k, to.to_element(compose_coeff_hom(from.basis[k], by)));
        return Hom(from.group, to.group, m);
    };
    Hom psi_star = precompose_map(A, B, psi_hat);
    Hom phi_star = precompose_map(B, C, phi_hat);
    Hom delta_star = precompose_map(C, D, bdry_hat);

    HomSequenceReport rep;
    rep.hom_cover = A.group;
    rep.hom_sub = B.group;
    rep.hom_susp_base = C.group;

    auto exact_at = [](const Hom& in, const Hom& out, bool& pass, std::vector<Int>& witness) {
        IntMat im = image_lattice(in);
        IntMat ker = kernel_lattice(out);
        pass = true;
        for (std::size_t j = 0; j < ker.cols && pass; ++j)
            if (!lattice_contains(im, ker.col(j))) {
                pass = false;
                witness = reduce_coords(out.src, ker.col(j));
            }
        for (std::size_t j = 0; j < im.cols && pass; ++j)
            if (!lattice_contains(ker, im.col(j))) {
                pass = false;
                witness = reduce_coords(out.src, im.col(j));
            }
    };
    exact_at(psi_star, phi_star, rep.middle_exact, rep.middle_witness);
    exact_at(phi_star, delta_star, rep.continuation_exact, rep.continuation_witness);
    return rep;
}

}  // namespace kex
