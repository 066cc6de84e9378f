#include "kex/json_io.hpp"

#include <sstream>

namespace kex::jio {

json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return json(static_cast<long long>(v.get_si()));
    return json(v.get_str());
}

Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return Int(j.get<std::string>());
    throw input_error("expected an integer (number or decimal string)");
}

json matrix_to_json(const IntMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols; ++k) row.push_back(int_to_json(m.at(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

IntMat matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
    if (!j.is_array()) throw input_error("matrix must be an array of rows");
    if (j.size() != rows) throw input_error("matrix has the wrong number of rows");
    IntMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw input_error("matrix row has the wrong length");
        for (std::size_t k = 0; k < cols; ++k) m.at(i, k) = int_from_json(j[i][k]);
    }
    return m;
}

namespace {
IntMat square_matrix_from_json(const json& j) {
    if (!j.is_array()) throw input_error("matrix must be an array of rows");
    std::size_t n = j.size();
    return matrix_from_json(j, n, n == 0 ? 0 : j[0].size());
}
}  // namespace

json group_to_json(const FgAb& g) {
    json t = json::array();
    for (const Int& d : g.torsion) t.push_back(int_to_json(d));
    return json{{"torsion", t}, {"free_rank", g.free_rank}};
}

FgAb group_from_json(const json& j) {
    if (!j.is_object() || !j.contains("torsion") || !j.contains("free_rank"))
        throw input_error("group literal needs torsion and free_rank");
    FgAb g;
    for (const json& d : j["torsion"]) g.torsion.push_back(int_from_json(d));
    g.free_rank = j["free_rank"].get<std::size_t>();
    for (std::size_t i = 0; i < g.torsion.size(); ++i) {
        if (g.torsion[i] < 2) throw input_error("invariant factors must be >= 2");
        if (i > 0 && g.torsion[i] % g.torsion[i - 1] != 0)
            throw input_error("invariant factors must form a divisibility chain");
    }
    return g;
}

json hom_to_json(const Hom& h) {
    return json{{"source", group_to_json(h.src)},
                {"target", group_to_json(h.dst)},
                {"matrix", matrix_to_json(h.m)}};
}

Hom hom_from_json(const json& j) {
    if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
        !j.contains("matrix"))
        throw input_error("hom literal needs source, target, matrix");
    FgAb src = group_from_json(j["source"]);
    FgAb dst = group_from_json(j["target"]);
    Hom h(src, dst, matrix_from_json(j["matrix"], dst.ngens(), src.ngens()));
    if (!h.well_defined()) throw input_error("hom matrix is not well-defined on torsion");
    return h;
}

json sixterm_to_json(const SixTerm& s) {
    json groups = json::array();
    json maps = json::array();
    for (std::size_t i = 0; i < 6; ++i) groups.push_back(group_to_json(s.g[i]));
    for (std::size_t i = 0; i < 6; ++i) maps.push_back(matrix_to_json(s.f[i].m));
    return json{{"groups", groups}, {"maps", maps}};
}

SixTerm sixterm_from_json(const json& j) {
    if (!j.is_object() || !j.contains("groups") || !j.contains("maps"))
        throw input_error("six-term literal needs groups and maps");
    if (j["groups"].size() != 6 || j["maps"].size() != 6)
        throw input_error("six-term literal needs exactly six groups and six maps");
    SixTerm s;
    for (std::size_t i = 0; i < 6; ++i) s.g[i] = group_from_json(j["groups"][i]);
    for (std::size_t i = 0; i < 6; ++i) {
        const FgAb& src = s.g[i];
        const FgAb& dst = s.g[(i + 1) % 6];
        s.f[i] = Hom(src, dst, matrix_from_json(j["maps"][i], dst.ngens(), src.ngens()));
        if (!s.f[i].well_defined())
            throw input_error("six-term map " + std::to_string(i) + " is not well-defined");
    }
    return s;
}

json ck_to_json(const CKInput& ck) {
    return json{{"adjacency", matrix_to_json(ck.adjacency)}, {"ideal_block", ck.ideal_block}};
}

CKInput ck_from_json(const json& j) {
    if (!j.is_object() || !j.contains("adjacency"))
        throw input_error("adjacency input needs an adjacency matrix");
    CKInput ck;
    ck.adjacency = square_matrix_from_json(j["adjacency"]);
    if (ck.adjacency.rows != ck.adjacency.cols)
        throw input_error("adjacency matrix must be square");
    if (j.contains("ideal_block"))
        for (const json& v : j["ideal_block"]) ck.ideal_block.push_back(v.get<std::size_t>());
    return ck;
}

json invariant_to_json(const CoeffInvariant& inv) {
    json levels = json::array();
    for (const CoeffLevel& l : inv.levels) {
        json F = json::array(), f = json::array(), rho = json::array(), beta = json::array();
        for (std::size_t i = 0; i < 6; ++i) {
            F.push_back(group_to_json(l.F[i]));
            f.push_back(matrix_to_json(l.f[i].m));
            rho.push_back(matrix_to_json(l.rho[i].m));
            beta.push_back(matrix_to_json(l.beta[i].m));
        }
        levels.push_back(json{{"n", int_to_json(l.n)},
                              {"F", F},
                              {"f", f},
                              {"rho", rho},
                              {"beta", beta},
                              {"H", group_to_json(l.H)},
                              {"h11_in", matrix_to_json(l.h11_in.m)},
                              {"h11_out", matrix_to_json(l.h11_out.m)},
                              {"hn1_in", matrix_to_json(l.hn1_in.m)},
                              {"hn1_out", matrix_to_json(l.hn1_out.m)},
                              {"h1n_in", matrix_to_json(l.h1n_in.m)},
                              {"h1n_out", matrix_to_json(l.h1n_out.m)}});
    }
    json pairs = json::array();
    for (const CoeffPair& p : inv.pairs) {
        json kappa = json::array(), varkappa = json::array();
        for (std::size_t i = 0; i < 6; ++i) {
            kappa.push_back(matrix_to_json(p.kappa[i].m));
            varkappa.push_back(matrix_to_json(p.varkappa[i].m));
        }
        pairs.push_back(json{{"small", int_to_json(p.small)},
                             {"big", int_to_json(p.big)},
                             {"kappa", kappa},
                             {"varkappa", varkappa},
                             {"omega", matrix_to_json(p.omega.m)},
                             {"chi", matrix_to_json(p.chi.m)}});
    }
    json support = json::array();
    for (const Int& n : inv.support) support.push_back(int_to_json(n));
    return json{{"base", sixterm_to_json(inv.base)},
                {"support", support},
                {"levels", levels},
                {"pairs", pairs}};
}

CoeffInvariant invariant_from_json(const json& j) {
    if (!j.is_object() || !j.contains("base") || !j.contains("support") ||
        !j.contains("levels"))
        throw input_error("invariant literal needs base, support, levels");
    CoeffInvariant inv;
    inv.base = sixterm_from_json(j["base"]);
    for (const json& n : j["support"]) inv.support.push_back(int_from_json(n));
    auto hom_of = [&](const json& m, const FgAb& src, const FgAb& dst) {
        return Hom(src, dst, matrix_from_json(m, dst.ngens(), src.ngens()));
    };
    for (const json& lj : j["levels"]) {
        CoeffLevel l;
        l.n = int_from_json(lj.at("n"));
        for (std::size_t i = 0; i < 6; ++i) l.F[i] = group_from_json(lj.at("F")[i]);
        l.H = group_from_json(lj.at("H"));
        for (std::size_t i = 0; i < 6; ++i) {
            l.f[i] = hom_of(lj.at("f")[i], l.F[i], l.F[(i + 1) % 6]);
            l.rho[i] = hom_of(lj.at("rho")[i], inv.base.g[i], l.F[i]);
            l.beta[i] = hom_of(lj.at("beta")[i], l.F[i], inv.base.g[(i + 3) % 6]);
        }
        l.h11_in = hom_of(lj.at("h11_in"), inv.base.g[5], l.H);
        l.h11_out = hom_of(lj.at("h11_out"), l.H, inv.base.g[1]);
        l.hn1_in = hom_of(lj.at("hn1_in"), l.F[4], l.H);
        l.hn1_out = hom_of(lj.at("hn1_out"), l.H, inv.base.g[0]);
        l.h1n_in = hom_of(lj.at("h1n_in"), inv.base.g[0], l.H);
        l.h1n_out = hom_of(lj.at("h1n_out"), l.H, l.F[5]);
        inv.levels.push_back(std::move(l));
    }
    if (j.contains("pairs"))
        for (const json& pj : j["pairs"]) {
            CoeffPair p;
            p.small = int_from_json(pj.at("small"));
            p.big = int_from_json(pj.at("big"));
            const CoeffLevel& a = inv.level(p.small);
            const CoeffLevel& b = inv.level(p.big);
            for (std::size_t i = 0; i < 6; ++i) {
                p.kappa[i] = hom_of(pj.at("kappa")[i], b.F[i], a.F[i]);
                p.varkappa[i] = hom_of(pj.at("varkappa")[i], a.F[i], b.F[i]);
            }
            p.omega = hom_of(pj.at("omega"), b.H, a.H);
            p.chi = hom_of(pj.at("chi"), a.H, b.H);
            inv.pairs.push_back(std::move(p));
        }
    return inv;
}

json coeff_hom_to_json(const CoeffHom& h) {
    json alpha1 = json::array();
    for (std::size_t i = 0; i < 6; ++i) alpha1.push_back(matrix_to_json(h.alpha1[i].m));
    json levels = json::array();
    for (const CoeffHom::Level& l : h.levels) {
        json alpha = json::array();
        for (std::size_t i = 0; i < 6; ++i) alpha.push_back(matrix_to_json(l.alpha[i].m));
        levels.push_back(json{{"n", int_to_json(l.n)},
                              {"alpha", alpha},
                              {"alphaH", matrix_to_json(l.alphaH.m)}});
    }
    return json{{"alpha1", alpha1}, {"levels", levels}};
}

namespace {
json witness_to_json(const std::vector<Int>& w) {
    json out = json::array();
    for (const Int& v : w) out.push_back(int_to_json(v));
    return out;
}
}  // namespace

json exact_report_to_json(const ExactReport& r) {
    json fails = json::array();
    for (const ExactnessFailure& f : r.failures)
        fails.push_back(json{
            {"node", f.node}, {"reason", f.reason}, {"witness", witness_to_json(f.witness)}});
    return json{{"pass", r.pass}, {"failures", fails}};
}

json verify_report_to_json(const VerifyReport& r) {
    json checks = json::array();
    for (const RelationCheck& c : r.checks) {
        json e{{"name", c.name}, {"pass", c.pass}};
        if (!c.pass) e["witness"] = witness_to_json(c.witness);
        checks.push_back(std::move(e));
    }
    return json{{"pass", r.pass}, {"checks", checks}};
}

json class_flags_to_json(const ClassFlags& f) {
    return json{{"zero_exponential", f.zero_exponential},
                {"quotient_K1_free", f.quotient_k1_free},
                {"ideal_K1_zero", f.ideal_k1_zero},
                {"all_finitely_generated", f.all_finitely_generated}};
}

json hom_group_to_json(const HomLambdaGroup& g) {
    json basis = json::array();
    for (const CoeffHom& b : g.basis) basis.push_back(coeff_hom_to_json(b));
    return json{{"hom_group", group_to_json(g.group)}, {"basis", basis}};
}

json aut_report_to_json(const AutReport& r) {
    json gens = json::array();
    for (const CoeffHom& g : r.generators) gens.push_back(coeff_hom_to_json(g));
    json invs = json::array();
    for (const CoeffHom& g : r.generator_inverses) invs.push_back(coeff_hom_to_json(g));
    json aut;
    aut["end_group"] = group_to_json(r.end_group);
    aut["end_finite"] = r.end_finite;
    aut["known"] = r.aut_known;
    if (r.aut_known) aut["order"] = int_to_json(r.aut_order);
    aut["generators"] = gens;
    aut["generator_inverses"] = invs;
    if (!r.note.empty()) aut["note"] = r.note;
    return json{{"aut", aut}};
}

json resolution_to_json(const Resolution& r) {
    json diag = json::array();
    for (const Int& d : r.prime_power_diagonal) diag.push_back(int_to_json(d));
    return json{{"base", sixterm_to_json(r.base)},
                {"cover", sixterm_to_json(r.cover)},
                {"kernel_row", sixterm_to_json(r.sub)},
                {"prime_power_diagonal", diag},
                {"levelwise_exact", true}};
}

json hkernel_to_json(const HKernelResult& r) {
    return json{{"kernel", group_to_json(r.kernel_group)},
                {"formula", group_to_json(r.formula_group)},
                {"inclusion", matrix_to_json(r.inclusion.m)}};
}

json homseq_report_to_json(const HomSequenceReport& r) {
    json out;
    out["hom_cover"] = group_to_json(r.hom_cover);
    out["hom_kernel_row"] = group_to_json(r.hom_sub);
    out["hom_suspended_base"] = group_to_json(r.hom_susp_base);
    out["middle_exact"] = r.middle_exact;
    if (!r.middle_exact) out["middle_witness"] = witness_to_json(r.middle_witness);
    out["continuation_exact"] = r.continuation_exact;
    if (!r.continuation_exact)
        out["continuation_witness"] = witness_to_json(r.continuation_witness);
    return out;
}

namespace {
void render(const json& j, std::ostream& os, int depth) {
    std::string pad(2 * depth, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            os << pad << it.key() << ":";
            if (it.value().is_object() || it.value().is_array()) {
                os << "\n";
                render(it.value(), os, depth + 1);
            } else {
                os << " " << it.value().dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        std::size_t idx = 0;
        for (const json& v : j) {
            if (v.is_object() || v.is_array()) {
                os << pad << "- [" << idx << "]\n";
                render(v, os, depth + 1);
            } else {
                os << pad << "- " << v.dump() << "\n";
            }
            ++idx;
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}
}  // namespace

std::string render_text(const json& j) {
    std::ostringstream os;
    render(j, os, 0);
    return os.str();
}

}  // namespace kex::jio
