#include "kex/coeffs.hpp"

#include <algorithm>
#include <set>

#include "kex/blocksys.hpp"

namespace kex {

int mod_cycle_sign(std::size_t i) { return (i % 6 == 0 || i % 6 == 3) ? -1 : 1; }

const CoeffLevel& CoeffInvariant::level(const Int& n) const {
    for (const CoeffLevel& l : levels)
        if (l.n == n) return l;
    throw input_error("no level for n in support");
}

const CoeffPair& CoeffInvariant::pair(const Int& small, const Int& big) const {
    for (const CoeffPair& p : pairs)
        if (p.small == small && p.big == big) return p;
    throw input_error("no comparison maps for the requested pair");
}

const CoeffHom::Level& CoeffHom::level(const Int& n) const {
    for (const Level& l : levels)
        if (l.n == n) return l;
    throw input_error("no family component for n");
}

std::vector<Int> default_support(const SixTerm& s) { return support_join({s}); }

std::vector<Int> support_join(const std::vector<SixTerm>& list) {
    std::set<Int> out;
    for (const SixTerm& s : list)
        for (const FgAb& g : s.g) {
            Int e = g.exponent();
            for (Int p = 2; p * p <= e; p += (p == 2 ? 1 : 2)) {
                Int q = 1;
                while (e % p == 0) {
                    e /= p;
                    q *= p;
                    out.insert(q);
                }
            }
            if (e > 1) out.insert(e);  // leftover factor is prime
        }
    return {out.begin(), out.end()};
}

namespace {

// Corestriction: factor h through the subgroup given by incl, i.e. the x
// with incl∘x = h. Fails when the image is not inside the subgroup.
Hom corestrict(const Hom& h, const Hom& incl) {
    IntMat m(incl.src.ngens(), h.src.ngens());
    for (std::size_t j = 0; j < h.src.ngens(); ++j) {
        auto sol = solve_mod_subgroup(incl.m, h.m.col(j), h.dst.relations());
        if (!sol) throw internal_error("corestrict: image leaves the subgroup");
        m.set_col(j, sol->x);
    }
    Hom out(h.src, incl.src, m);
    if (!out.well_defined()) throw internal_error("corestrict: result not well-defined");
    return out;
}

// Map induced on quotients: given g : src -> dst, q_src with section, and
// q_dst, the map q_dst ∘ g ∘ section.
Hom induced_on_quotient(const Hom& g, const QuotientResult& qsrc, const QuotientResult& qdst) {
    Hom out(qsrc.group, qdst.group, qdst.proj.m.mul(g.m).mul(qsrc.section));
    if (!out.well_defined()) throw internal_error("induced quotient map not well-defined");
    return out;
}

}  // namespace

LevelSplit compute_level_split(const SixTerm& base, const Int& n) {
    LevelSplit sp;
    sp.n = n;
    for (std::size_t i = 0; i < 6; ++i) {
        sp.tq[i] = tensor_zn(base.g[i], n);
        sp.sg[i] = torsion_n(base.g[(i + 3) % 6], n);
        sp.fsum[i] = direct_sum({sp.tq[i].group, sp.sg[i].group});
    }
    for (std::size_t i = 0; i < 6; ++i) {
        sp.fbar[i] = induced_on_quotient(base.f[i], sp.tq[i], sp.tq[(i + 1) % 6]);
        sp.grestrict[i] =
            corestrict(compose(base.f[(i + 3) % 6], sp.sg[i].incl), sp.sg[(i + 1) % 6].incl);
    }
    sp.ck = cokernel(hom_scaled(base.f[4], n));
    sp.kr = kernel(hom_scaled(base.f[1], n));
    sp.hsum = direct_sum({sp.ck.group, sp.kr.group});
    sp.ind_f4 = Hom(sp.tq[4].group, sp.ck.group,
                    sp.ck.proj.m.mul(base.f[4].m).mul(sp.tq[4].section));
    sp.ind_f5 = Hom(sp.ck.group, base.g[0], base.f[5].m.mul(sp.ck.section));
    sp.s4_in_kr = corestrict(sp.sg[4].incl, sp.kr.incl);
    sp.f0_into_kr = corestrict(base.f[0], sp.kr.incl);
    sp.f1_into_s5 = corestrict(compose(base.f[1], sp.kr.incl), sp.sg[5].incl);
    sp.ck_factor = Hom(sp.ck.group, sp.tq[5].group, sp.tq[5].proj.m.mul(sp.ck.section));
    if (!sp.ind_f4.well_defined() || !sp.ind_f5.well_defined() || !sp.ck_factor.well_defined())
        throw internal_error("level split: induced block not well-defined");
    return sp;
}

namespace {

struct LevelUnknowns {
    std::array<std::size_t, 6> b;  // S_i -> T_{i+1}
    std::size_t a12, v, a, q;      // corner blocks of the four h-maps
    std::array<std::size_t, 6> u;  // normalization slack, Z_i -> T_i
    std::array<SubgroupResult, 6> z;
    std::array<IntMat, 6> snake;
};

// Connecting candidates: for each generator of Z_i = ker(g_i), lift through
// the base maps and reduce mod n.
IntMat snake_matrix(const SixTerm& base, const LevelSplit& sp, std::size_t i,
                    const SubgroupResult& z) {
    const Int& n = sp.n;
    IntMat out(sp.tq[(i + 1) % 6].group.ngens(), z.group.ngens());
    const Hom& f_lift1 = base.f[(i + 2) % 6];  // G_{i+2} -> G_{i+3}
    const Hom& f_lift2 = base.f[(i + 1) % 6];  // G_{i+1} -> G_{i+2}
    for (std::size_t k = 0; k < z.group.ngens(); ++k) {
        std::vector<Int> s_coords = sp.sg[i].incl.m.mul(z.incl.m).col(k);
        auto y = solve_mod_subgroup(f_lift1.m, s_coords, base.g[(i + 3) % 6].relations());
        if (!y) throw internal_error("snake: base sequence not exact (first lift)");
        std::vector<Int> ny = y->x;
        for (Int& v : ny) v *= n;
        auto w = solve_mod_subgroup(f_lift2.m, ny, base.g[(i + 2) % 6].relations());
        if (!w) throw internal_error("snake: base sequence not exact (second lift)");
        out.set_col(k, sp.tq[(i + 1) % 6].proj.apply(w->x));
    }
    return out;
}

Hom make_hom_from_blocks(const DirectSum& dst_sum, const DirectSum& src_sum,
                         const std::vector<std::vector<std::optional<Hom>>>& blocks) {
    // blocks[r][c] : src part c -> dst part r
    Hom out = Hom::zero(src_sum.group, dst_sum.group);
    for (std::size_t r = 0; r < dst_sum.inj.size(); ++r)
        for (std::size_t c = 0; c < src_sum.proj.size(); ++c)
            if (blocks[r][c])
                out = hom_add(out, compose(dst_sum.inj[r],
                                           compose(*blocks[r][c], src_sum.proj[c])));
    return out;
}

}  // namespace

CoeffInvariant build_invariant(const SixTerm& s, std::vector<Int> support) {
    if (!is_exact(s)) throw input_error("build_invariant: base sequence is not exact");
    std::sort(support.begin(), support.end());
    for (const Int& n : support)
        if (n < 2) throw input_error("build_invariant: support entries must be >= 2");

    std::vector<LevelSplit> splits;
    for (const Int& n : support) splits.push_back(compute_level_split(s, n));

    std::vector<std::pair<std::size_t, std::size_t>> pair_idx;
    for (std::size_t si = 0; si < support.size(); ++si)
        for (std::size_t ti = si + 1; ti < support.size(); ++ti)
            if (support[ti] % support[si] == 0) pair_idx.emplace_back(si, ti);

    // Which normalization slots are nontrivial decides the sign search space.
    std::vector<std::array<SubgroupResult, 6>> zkers(support.size());
    std::vector<std::array<IntMat, 6>> snakes(support.size());
    std::array<bool, 6> eps_matters{};
    for (std::size_t li = 0; li < support.size(); ++li)
        for (std::size_t i = 0; i < 6; ++i) {
            zkers[li][i] = kernel(splits[li].grestrict[i]);
            snakes[li][i] = snake_matrix(s, splits[li], i, zkers[li][i]);
            if (!zkers[li][i].group.is_trivial()) eps_matters[i] = true;
        }
    std::vector<std::size_t> eps_bits;
    for (std::size_t i = 0; i < 6; ++i)
        if (eps_matters[i]) eps_bits.push_back(i);

    std::string last_failure = "empty system";
    for (std::size_t mask = 0; mask < (std::size_t(1) << eps_bits.size()); ++mask) {
        std::array<int, 6> eps;
        eps.fill(1);
        for (std::size_t bi = 0; bi < eps_bits.size(); ++bi)
            if (mask & (std::size_t(1) << bi)) eps[eps_bits[bi]] = -1;

        BlockSystem sys;
        std::vector<LevelUnknowns> lus(support.size());
        for (std::size_t li = 0; li < support.size(); ++li) {
            const LevelSplit& sp = splits[li];
            LevelUnknowns& lu = lus[li];
            for (std::size_t i = 0; i < 6; ++i)
                lu.b[i] = sys.add_unknown(sp.sg[i].group, sp.tq[(i + 1) % 6].group);
            lu.a12 = sys.add_unknown(sp.sg[4].group, sp.ck.group);
            lu.v = sys.add_unknown(sp.kr.group, s.g[0]);
            lu.a = sys.add_unknown(s.g[0], sp.ck.group);
            lu.q = sys.add_unknown(sp.kr.group, sp.tq[5].group);
            for (std::size_t i = 0; i < 6; ++i) {
                lu.z[i] = zkers[li][i];
                lu.u[i] = sys.add_unknown(FgAb::free_group(lu.z[i].group.ngens()),
                                          sp.tq[i].group, false);
                lu.snake[i] = snakes[li][i];
            }
        }

        for (std::size_t li = 0; li < support.size(); ++li) {
            const LevelSplit& sp = splits[li];
            const LevelUnknowns& lu = lus[li];
            const std::string tag = " (n=" + support[li].get_str() + ")";
            for (std::size_t i = 0; i < 6; ++i) {
                std::size_t i1 = (i + 1) % 6, i2 = (i + 2) % 6;
                BlockSystem::Expr e(sp.sg[i].group.ngens(), sp.tq[i2].group);
                e.add_term(lu.b[i], sp.fbar[i1].m, IntMat::identity(sp.sg[i].group.ngens()),
                           mod_cycle_sign(i1));
                e.add_term(lu.b[i1], IntMat::identity(sp.tq[i2].group.ngens()),
                           sp.grestrict[i].m, -1);
                sys.require_zero(std::move(e), "mod-n cycle complex" + tag + " i=" +
                                                   std::to_string(i));
            }
            for (std::size_t i = 0; i < 6; ++i) {
                std::size_t i1 = (i + 1) % 6;
                BlockSystem::Expr e(lu.z[i].group.ngens(), sp.tq[i1].group);
                e.add_term(lu.b[i], IntMat::identity(sp.tq[i1].group.ngens()), lu.z[i].incl.m);
                e.add_term(lu.u[i], sp.fbar[i].m,
                           IntMat::identity(lu.z[i].group.ngens()), -1);
                e.add_const(lu.snake[i], -eps[i]);
                sys.require_zero(std::move(e),
                                 "mod-n cycle exactness" + tag + " i=" + std::to_string(i));
            }
            const std::size_t krg = sp.kr.group.ngens(), g0g = s.g[0].ngens(),
                              g5g = s.g[5].ngens();
            {
                BlockSystem::Expr e(krg, s.g[1]);  // (1d)
                e.add_term(lu.v, s.f[0].m, IntMat::identity(krg));
                e.add_const(sp.kr.incl.m, sp.n);
                sys.require_zero(std::move(e), "diagram (1d)" + tag);
            }
            {
                BlockSystem::Expr e(g5g, sp.ck.group);  // (2a)
                e.add_term(lu.a, IntMat::identity(sp.ck.group.ngens()), s.f[5].m);
                e.add_const(sp.ck.proj.m, -sp.n);
                sys.require_zero(std::move(e), "diagram (2a)" + tag);
            }
            {
                BlockSystem::Expr e(g0g, s.g[0]);  // (3c)
                e.add_term(lu.a, sp.ind_f5.m, IntMat::identity(g0g));
                e.add_term(lu.v, IntMat::identity(g0g), sp.f0_into_kr.m, -1);
                e.add_const(IntMat::identity(g0g), -sp.n);
                sys.require_zero(std::move(e), "diagram (3c)" + tag);
            }
            {
                BlockSystem::Expr e(sp.sg[3].group.ngens(), sp.ck.group);  // (3a)
                e.add_term(lu.b[3], sp.ind_f4.m, IntMat::identity(sp.sg[3].group.ngens()), -1);
                e.add_term(lu.a12, IntMat::identity(sp.ck.group.ngens()), sp.grestrict[3].m);
                e.add_term(lu.a, IntMat::identity(sp.ck.group.ngens()), sp.sg[3].incl.m);
                sys.require_zero(std::move(e), "diagram (3a)" + tag);
            }
            {
                BlockSystem::Expr e(sp.sg[4].group.ngens(), sp.tq[5].group);  // (3b)
                e.add_term(lu.a12, sp.ck_factor.m, IntMat::identity(sp.sg[4].group.ngens()));
                e.add_term(lu.q, IntMat::identity(sp.tq[5].group.ngens()), sp.s4_in_kr.m);
                e.add_term(lu.b[4], IntMat::identity(sp.tq[5].group.ngens()),
                           IntMat::identity(sp.sg[4].group.ngens()), -1);
                sys.require_zero(std::move(e), "diagram (3b)" + tag);
            }
            {
                BlockSystem::Expr e(krg, sp.tq[0].group);  // (3d)
                e.add_term(lu.q, sp.fbar[5].m, IntMat::identity(krg));
                e.add_term(lu.b[5], IntMat::identity(sp.tq[0].group.ngens()),
                           sp.f1_into_s5.m, -1);
                e.add_term(lu.v, sp.tq[0].proj.m, IntMat::identity(krg), -1);
                sys.require_zero(std::move(e), "diagram (3d)" + tag);
            }
            {
                BlockSystem::Expr e(sp.sg[4].group.ngens(), s.g[0]);  // hn1 row complex
                e.add_term(lu.a12, sp.ind_f5.m, IntMat::identity(sp.sg[4].group.ngens()));
                e.add_term(lu.v, IntMat::identity(g0g), sp.s4_in_kr.m);
                sys.require_zero(std::move(e), "h-window complex (n,1)" + tag);
            }
            {
                BlockSystem::Expr e(g0g, sp.tq[5].group);  // h1n row complex
                e.add_term(lu.a, sp.ck_factor.m, IntMat::identity(g0g));
                e.add_term(lu.q, IntMat::identity(sp.tq[5].group.ngens()), sp.f0_into_kr.m, -1);
                sys.require_zero(std::move(e), "h-window complex (1,n)" + tag);
            }
        }

        // Comparison-map corners for divisibility pairs.
        struct PairUnknowns {
            std::array<std::size_t, 6> k12, x12;
            std::size_t w, x;
            std::array<Hom, 6> red_t, mult_t, mult_s, incl_s;
            Hom red_ck, mult_ck, mult_kr, incl_kr;
        };
        std::vector<PairUnknowns> pus(pair_idx.size());
        for (std::size_t pi = 0; pi < pair_idx.size(); ++pi) {
            auto [si, ti] = pair_idx[pi];
            const LevelSplit& spa = splits[si];
            const LevelSplit& spb = splits[ti];
            Int c = support[ti] / support[si];
            PairUnknowns& pu = pus[pi];
            for (std::size_t i = 0; i < 6; ++i) {
                pu.k12[i] = sys.add_unknown(spb.sg[i].group, spa.tq[i].group);
                pu.x12[i] = sys.add_unknown(spa.sg[i].group, spb.tq[i].group);
                pu.red_t[i] = induced_on_quotient(Hom::identity(s.g[i]), spb.tq[i], spa.tq[i]);
                pu.mult_t[i] = Hom(spa.tq[i].group, spb.tq[i].group,
                                   spb.tq[i].proj.m.mul(spa.tq[i].section).scaled(c));
                pu.mult_s[i] = corestrict(hom_scaled(spb.sg[i].incl, c), spa.sg[i].incl);
                pu.incl_s[i] = corestrict(spa.sg[i].incl, spb.sg[i].incl);
            }
            pu.w = sys.add_unknown(spb.kr.group, spa.ck.group);
            pu.x = sys.add_unknown(spa.kr.group, spb.ck.group);
            pu.red_ck = Hom(spb.ck.group, spa.ck.group, spa.ck.proj.m.mul(spb.ck.section));
            pu.mult_ck =
                Hom(spa.ck.group, spb.ck.group, spb.ck.proj.m.mul(spa.ck.section).scaled(c));
            pu.mult_kr = corestrict(hom_scaled(spb.kr.incl, c), spa.kr.incl);
            pu.incl_kr = corestrict(spa.kr.incl, spb.kr.incl);

            const std::string tag =
                " (" + support[si].get_str() + "," + support[ti].get_str() + ")";
            const LevelUnknowns& la = lus[si];
            const LevelUnknowns& lb = lus[ti];
            for (std::size_t i = 0; i < 6; ++i) {
                std::size_t i1 = (i + 1) % 6;
                {
                    BlockSystem::Expr e(spb.sg[i].group.ngens(), spa.tq[i1].group);
                    e.add_term(pu.k12[i], spa.fbar[i].m,
                               IntMat::identity(spb.sg[i].group.ngens()), mod_cycle_sign(i));
                    e.add_term(la.b[i], IntMat::identity(spa.tq[i1].group.ngens()),
                               pu.mult_s[i].m);
                    e.add_term(lb.b[i], pu.red_t[i1].m,
                               IntMat::identity(spb.sg[i].group.ngens()), -1);
                    e.add_term(pu.k12[i1], IntMat::identity(spa.tq[i1].group.ngens()),
                               spb.grestrict[i].m);
                    sys.require_zero(std::move(e),
                                     "kappa-f square" + tag + " i=" + std::to_string(i));
                }
                {
                    BlockSystem::Expr e(spa.sg[i].group.ngens(), spb.tq[i1].group);
                    e.add_term(pu.x12[i], spb.fbar[i].m,
                               IntMat::identity(spa.sg[i].group.ngens()), mod_cycle_sign(i));
                    e.add_term(lb.b[i], IntMat::identity(spb.tq[i1].group.ngens()),
                               pu.incl_s[i].m);
                    e.add_term(la.b[i], pu.mult_t[i1].m,
                               IntMat::identity(spa.sg[i].group.ngens()), -1);
                    e.add_term(pu.x12[i1], IntMat::identity(spb.tq[i1].group.ngens()),
                               spa.grestrict[i].m);
                    sys.require_zero(std::move(e),
                                     "varkappa-f square" + tag + " i=" + std::to_string(i));
                }
            }
            const std::size_t g0g = s.g[0].ngens();
            {
                BlockSystem::Expr e(g0g, spa.ck.group);
                e.add_term(lb.a, pu.red_ck.m, IntMat::identity(g0g));
                e.add_term(pu.w, IntMat::identity(spa.ck.group.ngens()), spb.f0_into_kr.m, -1);
                e.add_term(la.a, IntMat::identity(spa.ck.group.ngens()),
                           IntMat::identity(g0g), -c);
                sys.require_zero(std::move(e), "omega-h1n-in square" + tag);
            }
            {
                BlockSystem::Expr e(spb.kr.group.ngens(), spa.tq[5].group);
                e.add_term(pu.w, spa.ck_factor.m, IntMat::identity(spb.kr.group.ngens()));
                e.add_term(la.q, IntMat::identity(spa.tq[5].group.ngens()), pu.mult_kr.m);
                e.add_term(lb.q, pu.red_t[5].m, IntMat::identity(spb.kr.group.ngens()), -1);
                e.add_term(pu.k12[5], IntMat::identity(spa.tq[5].group.ngens()),
                           spb.f1_into_s5.m);
                sys.require_zero(std::move(e), "omega-h1n-out square" + tag);
            }
            {
                BlockSystem::Expr e(g0g, spb.ck.group);
                e.add_term(la.a, pu.mult_ck.m, IntMat::identity(g0g));
                e.add_term(pu.x, IntMat::identity(spb.ck.group.ngens()), spa.f0_into_kr.m, -1);
                e.add_term(lb.a, IntMat::identity(spb.ck.group.ngens()),
                           IntMat::identity(g0g), -1);
                sys.require_zero(std::move(e), "chi-h1n-in square" + tag);
            }
            {
                BlockSystem::Expr e(spa.kr.group.ngens(), spb.tq[5].group);
                e.add_term(pu.x, spb.ck_factor.m, IntMat::identity(spa.kr.group.ngens()));
                e.add_term(lb.q, IntMat::identity(spb.tq[5].group.ngens()), pu.incl_kr.m);
                e.add_term(la.q, pu.mult_t[5].m, IntMat::identity(spa.kr.group.ngens()), -1);
                e.add_term(pu.x12[5], IntMat::identity(spb.tq[5].group.ngens()),
                           spa.f1_into_s5.m);
                sys.require_zero(std::move(e), "chi-h1n-out square" + tag);
            }
            {
                BlockSystem::Expr e(spb.sg[4].group.ngens(), spa.ck.group);
                e.add_term(pu.k12[4], spa.ind_f4.m,
                           IntMat::identity(spb.sg[4].group.ngens()));
                e.add_term(la.a12, IntMat::identity(spa.ck.group.ngens()), pu.mult_s[4].m);
                e.add_term(lb.a12, pu.red_ck.m, IntMat::identity(spb.sg[4].group.ngens()), -1);
                e.add_term(pu.w, IntMat::identity(spa.ck.group.ngens()), spb.s4_in_kr.m, -1);
                sys.require_zero(std::move(e), "omega-hn1-in square" + tag);
            }
            {
                BlockSystem::Expr e(spa.sg[4].group.ngens(), spb.ck.group);
                e.add_term(pu.x12[4], spb.ind_f4.m,
                           IntMat::identity(spa.sg[4].group.ngens()));
                e.add_term(lb.a12, IntMat::identity(spb.ck.group.ngens()), pu.incl_s[4].m);
                e.add_term(la.a12, pu.mult_ck.m, IntMat::identity(spa.sg[4].group.ngens()), -1);
                e.add_term(pu.x, IntMat::identity(spb.ck.group.ngens()), spa.s4_in_kr.m, -1);
                sys.require_zero(std::move(e), "chi-hn1-in square" + tag);
            }
            {
                BlockSystem::Expr e(spb.kr.group.ngens(), s.g[0]);
                e.add_term(pu.w, spa.ind_f5.m, IntMat::identity(spb.kr.group.ngens()));
                e.add_term(la.v, IntMat::identity(g0g), pu.mult_kr.m);
                e.add_term(lb.v, IntMat::identity(g0g),
                           IntMat::identity(spb.kr.group.ngens()), -1);
                sys.require_zero(std::move(e), "omega-hn1-out square" + tag);
            }
            {
                BlockSystem::Expr e(spa.kr.group.ngens(), s.g[0]);
                e.add_term(pu.x, spb.ind_f5.m, IntMat::identity(spa.kr.group.ngens()));
                e.add_term(lb.v, IntMat::identity(g0g), pu.incl_kr.m);
                e.add_term(la.v, IntMat::identity(g0g),
                           IntMat::identity(spa.kr.group.ngens()), -c);
                sys.require_zero(std::move(e), "chi-hn1-out square" + tag);
            }
        }

        auto sol = sys.solve();
        if (!sol) {
            last_failure = sys.first_infeasible();
            continue;
        }

        // Materialize the invariant from the solved corners.
        CoeffInvariant inv;
        inv.base = s;
        inv.support = support;
        for (std::size_t li = 0; li < support.size(); ++li) {
            const LevelSplit& sp = splits[li];
            const LevelUnknowns& lu = lus[li];
            CoeffLevel lev;
            lev.n = support[li];
            for (std::size_t i = 0; i < 6; ++i) {
                lev.F[i] = sp.fsum[i].group;
                lev.rho[i] = compose(sp.fsum[i].inj[0], sp.tq[i].proj);
                lev.beta[i] = compose(sp.sg[i].incl, sp.fsum[i].proj[1]);
            }
            for (std::size_t i = 0; i < 6; ++i) {
                std::size_t i1 = (i + 1) % 6;
                Hom bi(sp.sg[i].group, sp.tq[i1].group, sol->matrices[lu.b[i]]);
                lev.f[i] = make_hom_from_blocks(
                    sp.fsum[i1], sp.fsum[i],
                    {{hom_scaled(sp.fbar[i], mod_cycle_sign(i)), bi},
                     {std::nullopt, hom_scaled(sp.grestrict[i], -1)}});
            }
            lev.H = sp.hsum.group;
            Hom a12(sp.sg[4].group, sp.ck.group, sol->matrices[lu.a12]);
            Hom v(sp.kr.group, s.g[0], sol->matrices[lu.v]);
            Hom aa(s.g[0], sp.ck.group, sol->matrices[lu.a]);
            Hom q(sp.kr.group, sp.tq[5].group, sol->matrices[lu.q]);
            lev.h11_in = compose(sp.hsum.inj[0], sp.ck.proj);
            lev.h11_out = compose(sp.kr.incl, sp.hsum.proj[1]);
            lev.hn1_in = make_hom_from_blocks(sp.hsum, sp.fsum[4],
                                              {{sp.ind_f4, a12}, {std::nullopt, sp.s4_in_kr}});
            lev.hn1_out =
                hom_add(compose(sp.ind_f5, sp.hsum.proj[0]), compose(v, sp.hsum.proj[1]));
            lev.h1n_in = hom_add(compose(sp.hsum.inj[0], aa),
                                 compose(sp.hsum.inj[1], hom_scaled(sp.f0_into_kr, -1)));
            lev.h1n_out = make_hom_from_blocks(
                sp.fsum[5], sp.hsum,
                {{sp.ck_factor, q}, {std::nullopt, hom_scaled(sp.f1_into_s5, -1)}});
            inv.levels.push_back(std::move(lev));
        }
        for (std::size_t pi = 0; pi < pair_idx.size(); ++pi) {
            auto [si, ti] = pair_idx[pi];
            const LevelSplit& spa = splits[si];
            const LevelSplit& spb = splits[ti];
            const PairUnknowns& pu = pus[pi];
            CoeffPair cp;
            cp.small = support[si];
            cp.big = support[ti];
            for (std::size_t i = 0; i < 6; ++i) {
                Hom k12(spb.sg[i].group, spa.tq[i].group, sol->matrices[pu.k12[i]]);
                Hom x12(spa.sg[i].group, spb.tq[i].group, sol->matrices[pu.x12[i]]);
                cp.kappa[i] = make_hom_from_blocks(
                    spa.fsum[i], spb.fsum[i],
                    {{pu.red_t[i], k12}, {std::nullopt, pu.mult_s[i]}});
                cp.varkappa[i] = make_hom_from_blocks(
                    spb.fsum[i], spa.fsum[i],
                    {{pu.mult_t[i], x12}, {std::nullopt, pu.incl_s[i]}});
            }
            Hom w(spb.kr.group, spa.ck.group, sol->matrices[pu.w]);
            Hom x(spa.kr.group, spb.ck.group, sol->matrices[pu.x]);
            cp.omega = make_hom_from_blocks(spa.hsum, spb.hsum,
                                            {{pu.red_ck, w}, {std::nullopt, pu.mult_kr}});
            cp.chi = make_hom_from_blocks(spb.hsum, spa.hsum,
                                          {{pu.mult_ck, x}, {std::nullopt, pu.incl_kr}});
            inv.pairs.push_back(std::move(cp));
        }

        VerifyReport rep = verify_invariant(inv);
        if (rep.pass) return inv;
        last_failure = rep.first_failure() ? rep.first_failure()->name : "unknown";
    }
    throw construction_error("build_invariant: no correction satisfies '" + last_failure + "'");
}

// ---------------------------------------------------------------------------
// Verification

namespace {

void check_hom_equal(VerifyReport& rep, const std::string& name, const Hom& a, const Hom& b) {
    RelationCheck c;
    c.name = name;
    if (!(a == b)) {
        c.pass = false;
        for (std::size_t k = 0; k < a.src.ngens(); ++k)
            if (!(a.m.col(k) == b.m.col(k))) {
                c.witness.assign(a.src.ngens(), 0);
                c.witness[k] = 1;
                break;
            }
        rep.pass = false;
    }
    rep.checks.push_back(std::move(c));
}

void check_exact_at(VerifyReport& rep, const std::string& name, const Hom& in, const Hom& out) {
    RelationCheck c;
    c.name = name;
    IntMat im = image_lattice(in);
    IntMat ker = kernel_lattice(out);
    for (std::size_t j = 0; j < ker.cols && c.pass; ++j)
        if (!lattice_contains(im, ker.col(j))) {
            c.pass = false;
            c.witness = reduce_coords(out.src, ker.col(j));
        }
    for (std::size_t j = 0; j < im.cols && c.pass; ++j)
        if (!lattice_contains(ker, im.col(j))) {
            c.pass = false;
            c.witness = reduce_coords(out.src, im.col(j));
        }
    if (!c.pass) rep.pass = false;
    rep.checks.push_back(std::move(c));
}

void check_shapes(const CoeffInvariant& inv) {
    auto expect = [](bool ok, const std::string& what) {
        if (!ok) throw input_error("invariant is malformed: " + what);
    };
    for (std::size_t i = 0; i < 6; ++i) {
        expect(inv.base.f[i].src == inv.base.g[i] && inv.base.f[i].dst == inv.base.g[(i + 1) % 6],
               "base chain");
        expect(inv.base.f[i].well_defined(), "base map well-definedness");
    }
    for (const CoeffLevel& l : inv.levels) {
        for (std::size_t i = 0; i < 6; ++i) {
            expect(l.f[i].src == l.F[i] && l.f[i].dst == l.F[(i + 1) % 6], "mod-n chain");
            expect(l.rho[i].src == inv.base.g[i] && l.rho[i].dst == l.F[i], "rho shape");
            expect(l.beta[i].src == l.F[i] && l.beta[i].dst == inv.base.g[(i + 3) % 6],
                   "beta shape");
            expect(l.f[i].well_defined() && l.rho[i].well_defined() && l.beta[i].well_defined(),
                   "mod-n map well-definedness");
        }
        expect(l.h11_in.src == inv.base.g[5] && l.h11_in.dst == l.H, "h11_in shape");
        expect(l.h11_out.src == l.H && l.h11_out.dst == inv.base.g[1], "h11_out shape");
        expect(l.hn1_in.src == l.F[4] && l.hn1_in.dst == l.H, "hn1_in shape");
        expect(l.hn1_out.src == l.H && l.hn1_out.dst == inv.base.g[0], "hn1_out shape");
        expect(l.h1n_in.src == inv.base.g[0] && l.h1n_in.dst == l.H, "h1n_in shape");
        expect(l.h1n_out.src == l.H && l.h1n_out.dst == l.F[5], "h1n_out shape");
        expect(l.h11_in.well_defined() && l.h11_out.well_defined() && l.hn1_in.well_defined() &&
                   l.hn1_out.well_defined() && l.h1n_in.well_defined() &&
                   l.h1n_out.well_defined(),
               "h-map well-definedness");
    }
    for (const CoeffPair& p : inv.pairs) {
        const CoeffLevel& a = inv.level(p.small);
        const CoeffLevel& b = inv.level(p.big);
        for (std::size_t i = 0; i < 6; ++i) {
            expect(p.kappa[i].src == b.F[i] && p.kappa[i].dst == a.F[i], "kappa shape");
            expect(p.varkappa[i].src == a.F[i] && p.varkappa[i].dst == b.F[i],
                   "varkappa shape");
            expect(p.kappa[i].well_defined() && p.varkappa[i].well_defined(),
                   "comparison map well-definedness");
        }
        expect(p.omega.src == b.H && p.omega.dst == a.H, "omega shape");
        expect(p.chi.src == a.H && p.chi.dst == b.H, "chi shape");
        expect(p.omega.well_defined() && p.chi.well_defined(),
               "comparison map well-definedness");
    }
}

}  // namespace

const RelationCheck* VerifyReport::first_failure() const {
    for (const RelationCheck& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

VerifyReport verify_invariant(const CoeffInvariant& inv) {
    check_shapes(inv);
    VerifyReport rep;
    const SixTerm& s = inv.base;

    for (const CoeffLevel& l : inv.levels) {
        const std::string tag = " (n=" + l.n.get_str() + ")";
        for (std::size_t i = 0; i < 6; ++i)
            check_exact_at(rep, "mod-n cycle exact" + tag + " node " + std::to_string(i),
                           l.f[(i + 5) % 6], l.f[i]);
        for (std::size_t i = 0; i < 6; ++i) {
            const std::string si = " i=" + std::to_string(i);
            Hom muln_i = hom_mul_n(s.g[i], l.n);
            Hom muln_i3 = hom_mul_n(s.g[(i + 3) % 6], l.n);
            check_exact_at(rep, "rho-beta exact" + tag + si + " at ker(rho)", muln_i, l.rho[i]);
            check_exact_at(rep, "rho-beta exact" + tag + si + " at ker(beta)", l.rho[i],
                           l.beta[i]);
            check_exact_at(rep, "rho-beta exact" + tag + si + " at ker(xn)", l.beta[i],
                           muln_i3);
        }
        // h-window exactness of the three H-sequences around index 4.
        check_exact_at(rep, "h11 window" + tag + " at F(1,5)", hom_scaled(s.f[4], l.n),
                       l.h11_in);
        check_exact_at(rep, "h11 window" + tag + " at H", l.h11_in, l.h11_out);
        check_exact_at(rep, "h11 window" + tag + " at F(1,1)", l.h11_out,
                       hom_scaled(s.f[1], l.n));
        check_exact_at(rep, "hn1 window" + tag + " at F(n,4)", compose(l.f[3], l.rho[3]),
                       l.hn1_in);
        check_exact_at(rep, "hn1 window" + tag + " at H", l.hn1_in, l.hn1_out);
        check_exact_at(rep, "hn1 window" + tag + " at F(1,0)", l.hn1_out,
                       compose(l.f[0], l.rho[0]));
        check_exact_at(rep, "h1n window" + tag + " at F(1,0)", compose(l.beta[3], l.f[2]),
                       l.h1n_in);
        check_exact_at(rep, "h1n window" + tag + " at H", l.h1n_in, l.h1n_out);
        check_exact_at(rep, "h1n window" + tag + " at F(n,5)", l.h1n_out,
                       compose(l.beta[0], l.f[5]));
        // Diagrams (1), (2), (3) at index 4 (f~ carries the sign twist).
        check_hom_equal(rep, "diagram (1a)" + tag, compose(l.hn1_in, l.rho[4]),
                        compose(l.h11_in, s.f[4]));
        check_hom_equal(rep, "diagram (1b)" + tag, compose(l.hn1_out, l.h11_in), s.f[5]);
        check_hom_equal(rep, "diagram (1c)" + tag, compose(l.h11_out, l.hn1_in), l.beta[4]);
        check_hom_equal(rep, "diagram (1d)" + tag,
                        compose(hom_scaled(s.f[0], -1), l.hn1_out),
                        compose(hom_mul_n(s.g[1], l.n), l.h11_out));
        check_hom_equal(rep, "diagram (2a)" + tag, compose(l.h1n_in, s.f[5]),
                        compose(l.h11_in, hom_mul_n(s.g[5], l.n)));
        check_hom_equal(rep, "diagram (2b)" + tag, compose(l.h1n_out, l.h11_in), l.rho[5]);
        check_hom_equal(rep, "diagram (2c)" + tag, compose(l.h11_out, l.h1n_in),
                        hom_scaled(s.f[0], -1));
        check_hom_equal(rep, "diagram (2d)" + tag,
                        compose(hom_scaled(l.beta[5], -1), l.h1n_out),
                        compose(s.f[1], l.h11_out));
        check_hom_equal(rep, "diagram (3a)" + tag, compose(l.hn1_in, l.f[3]),
                        compose(l.h1n_in, l.beta[3]));
        check_hom_equal(rep, "diagram (3b)" + tag, compose(l.h1n_out, l.hn1_in), l.f[4]);
        check_hom_equal(rep, "diagram (3c)" + tag, compose(l.hn1_out, l.h1n_in),
                        hom_mul_n(s.g[0], l.n));
        check_hom_equal(rep, "diagram (3d)" + tag, compose(l.f[5], l.h1n_out),
                        compose(l.rho[0], l.hn1_out));
    }

    for (const CoeffPair& p : inv.pairs) {
        const CoeffLevel& a = inv.level(p.small);
        const CoeffLevel& b = inv.level(p.big);
        Int c = p.big / p.small;
        const std::string tag = " (" + p.small.get_str() + "," + p.big.get_str() + ")";
        for (std::size_t i = 0; i < 6; ++i) {
            const std::string si = " i=" + std::to_string(i);
            check_hom_equal(rep, "kappa-rho" + tag + si, compose(p.kappa[i], b.rho[i]),
                            a.rho[i]);
            check_hom_equal(rep, "varkappa-rho" + tag + si, compose(p.varkappa[i], a.rho[i]),
                            hom_scaled(b.rho[i], c));
            check_hom_equal(rep, "beta-kappa" + tag + si, compose(a.beta[i], p.kappa[i]),
                            hom_scaled(b.beta[i], c));
            check_hom_equal(rep, "beta-varkappa" + tag + si, compose(b.beta[i], p.varkappa[i]),
                            a.beta[i]);
        }
        check_hom_equal(rep, "omega-h1n-in square" + tag, compose(p.omega, b.h1n_in),
                        compose(a.h1n_in, hom_mul_n(s.g[0], c)));
        check_hom_equal(rep, "omega-h1n-out square" + tag, compose(a.h1n_out, p.omega),
                        compose(p.kappa[5], b.h1n_out));
        check_hom_equal(rep, "chi-h1n-in square" + tag, compose(p.chi, a.h1n_in), b.h1n_in);
        check_hom_equal(rep, "chi-h1n-out square" + tag, compose(b.h1n_out, p.chi),
                        compose(p.varkappa[5], a.h1n_out));
        check_hom_equal(rep, "omega-h11-in square" + tag, compose(p.omega, b.h11_in),
                        a.h11_in);
        check_hom_equal(rep, "omega-h11-out square" + tag, compose(a.h11_out, p.omega),
                        compose(hom_mul_n(s.g[1], c), b.h11_out));
        check_hom_equal(rep, "chi-h11-in square" + tag, compose(p.chi, a.h11_in),
                        compose(b.h11_in, hom_mul_n(s.g[5], c)));
        check_hom_equal(rep, "chi-h11-out square" + tag, compose(b.h11_out, p.chi), a.h11_out);
        check_hom_equal(rep, "omega-hn1-in square" + tag, compose(p.omega, b.hn1_in),
                        compose(a.hn1_in, p.kappa[4]));
        check_hom_equal(rep, "chi-hn1-in square" + tag, compose(p.chi, a.hn1_in),
                        compose(b.hn1_in, p.varkappa[4]));
        check_hom_equal(rep, "omega-hn1-out square" + tag, compose(a.hn1_out, p.omega),
                        b.hn1_out);
        check_hom_equal(rep, "chi-hn1-out square" + tag, compose(b.hn1_out, p.chi),
                        hom_scaled(a.hn1_out, c));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Families

std::vector<SlotId> all_slots(const CoeffInvariant& inv) {
    std::vector<SlotId> out;
    for (std::size_t i = 0; i < 6; ++i) out.push_back({SlotId::Base, 0, i});
    for (const Int& n : inv.support) {
        for (std::size_t i = 0; i < 6; ++i) out.push_back({SlotId::Level, n, i});
        out.push_back({SlotId::LevelH, n, 0});
    }
    return out;
}

FgAb slot_group(const CoeffInvariant& inv, const SlotId& id) {
    switch (id.kind) {
        case SlotId::Base:
            return inv.base.g[id.i];
        case SlotId::Level:
            return inv.level(id.n).F[id.i];
        case SlotId::LevelH:
            return inv.level(id.n).H;
    }
    throw internal_error("slot_group: bad slot");
}

const Hom& slot_of(const CoeffHom& h, const SlotId& id) {
    switch (id.kind) {
        case SlotId::Base:
            return h.alpha1[id.i];
        case SlotId::Level:
            return h.level(id.n).alpha[id.i];
        case SlotId::LevelH:
            return h.level(id.n).alphaH;
    }
    throw internal_error("slot_of: bad slot");
}

std::vector<NatRelation> natural_relations(const CoeffInvariant& a, const CoeffInvariant& b) {
    if (a.support != b.support)
        throw input_error("natural_relations: supports differ (unify them first)");
    std::vector<NatRelation> out;
    auto add = [&](std::string name, SlotId sa, SlotId sb, const Hom& ma, const Hom& mb) {
        out.push_back({std::move(name), sa, sb, ma, mb});
    };
    for (std::size_t i = 0; i < 6; ++i) {
        std::size_t i1 = (i + 1) % 6;
        add("base f i=" + std::to_string(i), {SlotId::Base, 0, i}, {SlotId::Base, 0, i1},
            a.base.f[i], b.base.f[i]);
    }
    for (const Int& n : a.support) {
        const CoeffLevel& la = a.level(n);
        const CoeffLevel& lb = b.level(n);
        const std::string tag = " (n=" + n.get_str() + ")";
        for (std::size_t i = 0; i < 6; ++i) {
            std::size_t i1 = (i + 1) % 6, i3 = (i + 3) % 6;
            add("rho" + tag + " i=" + std::to_string(i), {SlotId::Base, 0, i},
                {SlotId::Level, n, i}, la.rho[i], lb.rho[i]);
            add("beta" + tag + " i=" + std::to_string(i), {SlotId::Level, n, i},
                {SlotId::Base, 0, i3}, la.beta[i], lb.beta[i]);
            add("mod-n f" + tag + " i=" + std::to_string(i), {SlotId::Level, n, i},
                {SlotId::Level, n, i1}, la.f[i], lb.f[i]);
        }
        add("h11-in" + tag, {SlotId::Base, 0, 5}, {SlotId::LevelH, n, 0}, la.h11_in,
            lb.h11_in);
        add("h11-out" + tag, {SlotId::LevelH, n, 0}, {SlotId::Base, 0, 1}, la.h11_out,
            lb.h11_out);
        add("hn1-in" + tag, {SlotId::Level, n, 4}, {SlotId::LevelH, n, 0}, la.hn1_in,
            lb.hn1_in);
        add("hn1-out" + tag, {SlotId::LevelH, n, 0}, {SlotId::Base, 0, 0}, la.hn1_out,
            lb.hn1_out);
        add("h1n-in" + tag, {SlotId::Base, 0, 0}, {SlotId::LevelH, n, 0}, la.h1n_in,
            lb.h1n_in);
        add("h1n-out" + tag, {SlotId::LevelH, n, 0}, {SlotId::Level, n, 5}, la.h1n_out,
            lb.h1n_out);
    }
    for (const CoeffPair& pa : a.pairs) {
        const CoeffPair& pb = b.pair(pa.small, pa.big);
        const std::string tag = " (" + pa.small.get_str() + "," + pa.big.get_str() + ")";
        for (std::size_t i = 0; i < 6; ++i) {
            add("kappa" + tag + " i=" + std::to_string(i), {SlotId::Level, pa.big, i},
                {SlotId::Level, pa.small, i}, pa.kappa[i], pb.kappa[i]);
            add("varkappa" + tag + " i=" + std::to_string(i), {SlotId::Level, pa.small, i},
                {SlotId::Level, pa.big, i}, pa.varkappa[i], pb.varkappa[i]);
        }
        add("omega" + tag, {SlotId::LevelH, pa.big, 0}, {SlotId::LevelH, pa.small, 0},
            pa.omega, pb.omega);
        add("chi" + tag, {SlotId::LevelH, pa.small, 0}, {SlotId::LevelH, pa.big, 0}, pa.chi,
            pb.chi);
    }
    return out;
}

std::optional<std::string> validate_coeff_hom(const CoeffHom& h, const CoeffInvariant& a,
                                              const CoeffInvariant& b) {
    for (const NatRelation& r : natural_relations(a, b)) {
        const Hom& asrc = slot_of(h, r.src_slot);
        const Hom& adst = slot_of(h, r.dst_slot);
        if (!(compose(adst, r.map_a) == compose(r.map_b, asrc))) return r.name;
    }
    return std::nullopt;
}

CoeffHom identity_coeff_hom(const CoeffInvariant& inv) {
    CoeffHom h;
    for (std::size_t i = 0; i < 6; ++i) h.alpha1[i] = Hom::identity(inv.base.g[i]);
    for (const CoeffLevel& l : inv.levels) {
        CoeffHom::Level lv;
        lv.n = l.n;
        for (std::size_t i = 0; i < 6; ++i) lv.alpha[i] = Hom::identity(l.F[i]);
        lv.alphaH = Hom::identity(l.H);
        h.levels.push_back(std::move(lv));
    }
    return h;
}

CoeffHom zero_coeff_hom(const CoeffInvariant& a, const CoeffInvariant& b) {
    CoeffHom h;
    for (std::size_t i = 0; i < 6; ++i) h.alpha1[i] = Hom::zero(a.base.g[i], b.base.g[i]);
    for (const Int& n : a.support) {
        const CoeffLevel& la = a.level(n);
        const CoeffLevel& lb = b.level(n);
        CoeffHom::Level lv;
        lv.n = n;
        for (std::size_t i = 0; i < 6; ++i) lv.alpha[i] = Hom::zero(la.F[i], lb.F[i]);
        lv.alphaH = Hom::zero(la.H, lb.H);
        h.levels.push_back(std::move(lv));
    }
    return h;
}

namespace {
CoeffHom coeff_hom_zip(const CoeffHom& a, const CoeffHom& b, Hom (*op)(const Hom&, const Hom&)) {
    CoeffHom out;
    for (std::size_t i = 0; i < 6; ++i) out.alpha1[i] = op(a.alpha1[i], b.alpha1[i]);
    for (std::size_t l = 0; l < a.levels.size(); ++l) {
        CoeffHom::Level lv;
        lv.n = a.levels[l].n;
        for (std::size_t i = 0; i < 6; ++i)
            lv.alpha[i] = op(a.levels[l].alpha[i], b.levels[l].alpha[i]);
        lv.alphaH = op(a.levels[l].alphaH, b.levels[l].alphaH);
        out.levels.push_back(std::move(lv));
    }
    return out;
}
}  // namespace

CoeffHom compose_coeff_hom(const CoeffHom& g, const CoeffHom& h) {
    return coeff_hom_zip(g, h, [](const Hom& x, const Hom& y) { return compose(x, y); });
}
CoeffHom coeff_hom_add(const CoeffHom& a, const CoeffHom& b) { return coeff_hom_zip(a, b, hom_add); }
CoeffHom coeff_hom_sub(const CoeffHom& a, const CoeffHom& b) { return coeff_hom_zip(a, b, hom_sub); }

bool coeff_hom_equal(const CoeffHom& a, const CoeffHom& b) {
    if (!(a.alpha1 == b.alpha1) || a.levels.size() != b.levels.size()) return false;
    for (std::size_t l = 0; l < a.levels.size(); ++l)
        if (!(a.levels[l].n == b.levels[l].n && a.levels[l].alpha == b.levels[l].alpha &&
              a.levels[l].alphaH == b.levels[l].alphaH))
            return false;
    return true;
}

bool coeff_hom_is_invertible(const CoeffHom& h) {
    for (std::size_t i = 0; i < 6; ++i)
        if (!is_isomorphism(h.alpha1[i])) return false;
    for (const CoeffHom::Level& l : h.levels) {
        for (std::size_t i = 0; i < 6; ++i)
            if (!is_isomorphism(l.alpha[i])) return false;
        if (!is_isomorphism(l.alphaH)) return false;
    }
    return true;
}

CoeffHom coeff_hom_inverse(const CoeffHom& h) {
    CoeffHom out;
    for (std::size_t i = 0; i < 6; ++i) out.alpha1[i] = inverse(h.alpha1[i]);
    for (const CoeffHom::Level& l : h.levels) {
        CoeffHom::Level lv;
        lv.n = l.n;
        for (std::size_t i = 0; i < 6; ++i) lv.alpha[i] = inverse(l.alpha[i]);
        lv.alphaH = inverse(l.alphaH);
        out.levels.push_back(std::move(lv));
    }
    return out;
}

InducedHom induce_hom(const SixTermHom& phi, const CoeffInvariant& a, const CoeffInvariant& b) {
    if (a.support != b.support) throw input_error("induce_hom: supports differ");
    for (std::size_t i = 0; i < 6; ++i)
        if (!(phi.phi[i].src == a.base.g[i]) || !(phi.phi[i].dst == b.base.g[i]))
            throw input_error("induce_hom: base map shape mismatch");
    if (validate_sixterm_hom(phi)) throw input_error("induce_hom: base map is not a chain map");

    BlockSystem sys;
    std::vector<SlotId> slots = all_slots(a);
    std::vector<std::size_t> uk;
    for (const SlotId& id : slots) uk.push_back(sys.add_unknown(slot_group(a, id), slot_group(b, id)));
    auto slot_index = [&](const SlotId& id) -> std::size_t {
        for (std::size_t k = 0; k < slots.size(); ++k)
            if (slots[k].kind == id.kind && slots[k].n == id.n && slots[k].i == id.i) return uk[k];
        throw internal_error("induce_hom: slot not found");
    };
    // Pin the base components to phi.
    for (std::size_t i = 0; i < 6; ++i) {
        BlockSystem::Expr e(a.base.g[i].ngens(), b.base.g[i]);
        e.add_term(slot_index({SlotId::Base, 0, i}), IntMat::identity(b.base.g[i].ngens()),
                   IntMat::identity(a.base.g[i].ngens()));
        e.add_const(phi.phi[i].m, -1);
        sys.require_zero(std::move(e), "base pin i=" + std::to_string(i));
    }
    for (const NatRelation& r : natural_relations(a, b)) {
        BlockSystem::Expr e(r.map_a.src.ngens(), r.map_b.dst);
        e.add_term(slot_index(r.dst_slot), IntMat::identity(r.map_b.dst.ngens()), r.map_a.m);
        e.add_term(slot_index(r.src_slot), r.map_b.m,
                   IntMat::identity(r.map_a.src.ngens()), -1);
        sys.require_zero(std::move(e), r.name);
    }
    auto sol = sys.solve();
    if (!sol)
        throw construction_error("induce_hom: no induced family satisfies '" +
                                 sys.first_infeasible() + "'");
    InducedHom out;
    out.lattice_dim = sol->entry_lattice.cols;
    CoeffHom h;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        Hom hom(slot_group(a, slots[k]), slot_group(b, slots[k]), sol->matrices[uk[k]]);
        if (slots[k].kind == SlotId::Base) {
            h.alpha1[slots[k].i] = hom;
        } else {
            if (h.levels.empty() || !(h.levels.back().n == slots[k].n)) {
                CoeffHom::Level lv;
                lv.n = slots[k].n;
                h.levels.push_back(std::move(lv));
            }
            if (slots[k].kind == SlotId::Level)
                h.levels.back().alpha[slots[k].i] = hom;
            else
                h.levels.back().alphaH = hom;
        }
    }
    out.hom = std::move(h);
    if (auto bad = validate_coeff_hom(out.hom, a, b))
        throw internal_error("induce_hom: solved family violates '" + *bad + "'");
    return out;
}

}  // namespace kex
