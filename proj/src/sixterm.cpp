#include "kex/sixterm.hpp"

#include <algorithm>

namespace kex {

SixTerm SixTerm::all_zero() {
    SixTerm s;
    for (std::size_t i = 0; i < 6; ++i) s.g[i] = FgAb::zero();
    for (std::size_t i = 0; i < 6; ++i) s.f[i] = Hom::zero(s.g[i], s.g[(i + 1) % 6]);
    return s;
}

namespace {
void check_chain(const SixTerm& s) {
    for (std::size_t i = 0; i < 6; ++i)
        if (!(s.f[i].src == s.g[i]) || !(s.f[i].dst == s.g[(i + 1) % 6]))
            throw input_error("six-term chain is malformed at map " + std::to_string(i));
}

// A column of `a` outside the span of `b`, if any.
std::optional<std::vector<Int>> column_outside(const IntMat& a, const IntMat& b) {
    for (std::size_t j = 0; j < a.cols; ++j) {
        auto c = a.col(j);
        if (!lattice_contains(b, c)) return c;
    }
    return std::nullopt;
}
}  // namespace

ExactReport check_exact(const SixTerm& s) {
    check_chain(s);
    ExactReport rep;
    for (std::size_t i = 0; i < 6; ++i) {
        const Hom& in = s.f[(i + 5) % 6];
        const Hom& out = s.f[i];
        IntMat im = image_lattice(in);
        IntMat ker = kernel_lattice(out);
        if (auto w = column_outside(ker, im)) {
            rep.pass = false;
            rep.failures.push_back(
                {i, "kernel element not in the incoming image", reduce_coords(s.g[i], *w)});
        }
        if (auto w = column_outside(im, ker)) {
            rep.pass = false;
            rep.failures.push_back(
                {i, "image element not killed by the outgoing map", reduce_coords(s.g[i], *w)});
        }
    }
    return rep;
}

bool is_exact(const SixTerm& s) { return check_exact(s).pass; }

SixTerm suspend(const SixTerm& s) {
    SixTerm out;
    for (std::size_t i = 0; i < 6; ++i) {
        out.g[i] = s.g[(i + 3) % 6];
        out.f[i] = s.f[(i + 3) % 6];
    }
    return out;
}

ClassFlags class_flags(const SixTerm& s) {
    ClassFlags fl;
    fl.zero_exponential = s.f[2].is_zero();
    fl.quotient_k1_free = s.g[5].is_free();
    fl.ideal_k1_zero = s.g[3].is_trivial();
    fl.all_finitely_generated = true;
    return fl;
}

std::optional<SquareFailure> validate_sixterm_hom(const SixTermHom& h) {
    for (std::size_t i = 0; i < 6; ++i) {
        Hom a = compose(h.phi[(i + 1) % 6], h.src.f[i]);
        Hom b = compose(h.dst.f[i], h.phi[i]);
        if (!(a == b)) {
            for (std::size_t k = 0; k < h.src.g[i].ngens(); ++k)
                if (!(a.m.col(k) == b.m.col(k))) return SquareFailure{i, k};
            return SquareFailure{i, 0};
        }
    }
    return std::nullopt;
}

SixTermHom identity_sixterm_hom(const SixTerm& s) {
    SixTermHom h;
    h.src = s;
    h.dst = s;
    for (std::size_t i = 0; i < 6; ++i) h.phi[i] = Hom::identity(s.g[i]);
    return h;
}

SixTerm ck_ktheory(const CKInput& input) {
    const IntMat& a = input.adjacency;
    if (!a.is_square()) throw input_error("ck_ktheory: adjacency matrix must be square");
    for (const Int& x : a.e)
        if (x < 0) throw input_error("ck_ktheory: adjacency entries must be nonnegative");
    const std::size_t n = a.rows;
    std::vector<bool> in_ideal(n, false);
    for (std::size_t v : input.ideal_block) {
        if (v >= n) throw input_error("ck_ktheory: ideal_block vertex out of range");
        if (in_ideal[v]) throw input_error("ck_ktheory: duplicate vertex in ideal_block");
        in_ideal[v] = true;
    }
    std::vector<std::size_t> ideal, quot;
    for (std::size_t v = 0; v < n; ++v) (in_ideal[v] ? ideal : quot).push_back(v);
    for (std::size_t i : ideal)
        for (std::size_t q : quot)
            if (a.at(i, q) != 0)
                throw input_error("ck_ktheory: ideal block is not hereditary (edge " +
                                  std::to_string(i) + " -> " + std::to_string(q) + ")");

    // Permuted order: ideal vertices first. b = A^T - I is block upper
    // triangular; the ideal-block columns span a b-invariant sublattice.
    std::vector<std::size_t> order = ideal;
    order.insert(order.end(), quot.begin(), quot.end());
    const std::size_t ni = ideal.size(), nq = quot.size();
    IntMat b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b.at(i, j) = a.at(order[j], order[i]);
    for (std::size_t i = 0; i < n; ++i) b.at(i, i) -= 1;

    IntMat b11(ni, ni), b22(nq, nq), coupling(ni, nq);
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < ni; ++j) b11.at(i, j) = b.at(i, j);
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < nq; ++j) b22.at(i, j) = b.at(ni + i, ni + j);
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < nq; ++j) coupling.at(i, j) = b.at(i, ni + j);

    Presented p0 = from_presentation(ni, b11);
    Presented p1 = from_presentation(n, b);
    Presented p2 = from_presentation(nq, b22);
    IntMat k11 = lattice_basis(solve_linear(b11, std::vector<Int>(ni))->kernel);
    IntMat kf = lattice_basis(solve_linear(b, std::vector<Int>(n))->kernel);
    IntMat k22 = lattice_basis(solve_linear(b22, std::vector<Int>(nq))->kernel);

    SixTerm s;
    s.g[0] = p0.group;
    s.g[1] = p1.group;
    s.g[2] = p2.group;
    s.g[3] = FgAb::free_group(k11.cols);
    s.g[4] = FgAb::free_group(kf.cols);
    s.g[5] = FgAb::free_group(k22.cols);

    IntMat embed_i(n, ni);
    for (std::size_t i = 0; i < ni; ++i) embed_i.at(i, i) = 1;
    IntMat restrict_q(nq, n);
    for (std::size_t i = 0; i < nq; ++i) restrict_q.at(i, ni + i) = 1;

    s.f[0] = Hom(s.g[0], s.g[1], p1.proj.mul(embed_i).mul(p0.section));
    s.f[1] = Hom(s.g[1], s.g[2], p2.proj.mul(restrict_q).mul(p1.section));
    s.f[2] = Hom::zero(s.g[2], s.g[3]);
    {
        IntMat m(kf.cols, k11.cols);
        for (std::size_t j = 0; j < k11.cols; ++j) {
            std::vector<Int> v(n);
            for (std::size_t i = 0; i < ni; ++i) v[i] = k11.at(i, j);
            auto sol = solve_linear(kf, v);
            if (!sol) throw internal_error("ck_ktheory: ideal kernel does not embed");
            m.set_col(j, sol->x);
        }
        s.f[3] = Hom(s.g[3], s.g[4], m);
    }
    {
        IntMat m(k22.cols, kf.cols);
        for (std::size_t j = 0; j < kf.cols; ++j) {
            std::vector<Int> v(nq);
            for (std::size_t i = 0; i < nq; ++i) v[i] = kf.at(ni + i, j);
            auto sol = solve_linear(k22, v);
            if (!sol) throw internal_error("ck_ktheory: kernel projection failed");
            m.set_col(j, sol->x);
        }
        s.f[4] = Hom(s.g[4], s.g[5], m);
    }
    // Index map: lift a quotient kernel vector, push through the coupling
    // block, land in the ideal cokernel.
    s.f[5] = Hom(s.g[5], s.g[0], p0.proj.mul(coupling).mul(k22));

    ExactReport rep = check_exact(s);
    if (!rep.pass)
        throw internal_error("ck_ktheory: assembled sequence is not exact at node " +
                             std::to_string(rep.failures.front().node));
    return s;
}

}  // namespace kex
