#include "kex/intmat.hpp"

#include <algorithm>

namespace kex {

IntMat::IntMat(std::size_t r, std::size_t c, std::vector<Int> entries)
    : rows(r), cols(c), e(std::move(entries)) {
    if (e.size() != rows * cols) throw internal_error("IntMat: entry count mismatch");
}

IntMat IntMat::identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool IntMat::is_zero() const {
    return std::all_of(e.begin(), e.end(), [](const Int& x) { return x == 0; });
}

IntMat IntMat::transpose() const {
    IntMat t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

IntMat IntMat::mul(const IntMat& o) const {
    if (cols != o.rows) throw internal_error("IntMat::mul: dimension mismatch");
    IntMat r(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols; ++j) r.at(i, j) += a * o.at(k, j);
        }
    return r;
}

IntMat IntMat::add(const IntMat& o) const {
    if (rows != o.rows || cols != o.cols) throw internal_error("IntMat::add: dimension mismatch");
    IntMat r(rows, cols);
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] + o.e[i];
    return r;
}

IntMat IntMat::sub(const IntMat& o) const {
    if (rows != o.rows || cols != o.cols) throw internal_error("IntMat::sub: dimension mismatch");
    IntMat r(rows, cols);
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] - o.e[i];
    return r;
}

IntMat IntMat::neg() const {
    IntMat r(rows, cols);
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] = -e[i];
    return r;
}

IntMat IntMat::scaled(const Int& k) const {
    IntMat r(rows, cols);
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] = k * e[i];
    return r;
}

std::vector<Int> IntMat::apply(const std::vector<Int>& x) const {
    if (x.size() != cols) throw internal_error("IntMat::apply: dimension mismatch");
    std::vector<Int> y(rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (at(i, j) != 0) y[i] += at(i, j) * x[j];
    return y;
}

std::vector<Int> IntMat::col(std::size_t j) const {
    std::vector<Int> v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
}

void IntMat::set_col(std::size_t j, const std::vector<Int>& v) {
    for (std::size_t i = 0; i < rows; ++i) at(i, j) = v[i];
}

IntMat hstack(const IntMat& a, const IntMat& b) {
    if (a.rows != b.rows) throw internal_error("hstack: row mismatch");
    IntMat r(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols; ++j) r.at(i, a.cols + j) = b.at(i, j);
    }
    return r;
}

IntMat vstack(const IntMat& a, const IntMat& b) {
    if (a.cols != b.cols) throw internal_error("vstack: col mismatch");
    IntMat r(a.rows + b.rows, a.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) r.at(a.rows + i, j) = b.at(i, j);
    return r;
}

IntMat cols_subset(const IntMat& m, const std::vector<std::size_t>& idx) {
    IntMat r(m.rows, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t i = 0; i < m.rows; ++i) r.at(i, k) = m.at(i, idx[k]);
    return r;
}

Int det(const IntMat& m) {
    if (!m.is_square()) throw internal_error("det: not square");
    const std::size_t n = m.rows;
    if (n == 0) return 1;
    IntMat a = m;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a.at(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

namespace {

void swap_rows(IntMat& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(a, j), m.at(b, j));
}
void swap_cols(IntMat& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, a), m.at(i, b));
}
// row a += k * row b
void add_row(IntMat& m, std::size_t a, std::size_t b, const Int& k) {
    for (std::size_t j = 0; j < m.cols; ++j) m.at(a, j) += k * m.at(b, j);
}
// col a += k * col b
void add_col(IntMat& m, std::size_t a, std::size_t b, const Int& k) {
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, a) += k * m.at(i, b);
}
void negate_row(IntMat& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols; ++j) m.at(a, j) = -m.at(a, j);
}
void negate_col(IntMat& m, std::size_t a) {
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, a) = -m.at(i, a);
}

// Smallest nonzero |entry| in d[t.., t..]; ties broken lexicographically.
bool find_pivot(const IntMat& d, std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < d.rows; ++i)
        for (std::size_t j = t; j < d.cols; ++j) {
            if (d.at(i, j) == 0) continue;
            Int a = abs(d.at(i, j));
            if (!found || a < best) {
                found = true;
                best = a;
                pi = i;
                pj = j;
            }
        }
    return found;
}

bool pivot_isolated(const IntMat& d, std::size_t t) {
    for (std::size_t i = t + 1; i < d.rows; ++i)
        if (d.at(i, t) != 0) return false;
    for (std::size_t j = t + 1; j < d.cols; ++j)
        if (d.at(t, j) != 0) return false;
    return true;
}

}  // namespace

SmithResult smith_normal_form(const IntMat& m) {
    SmithResult r;
    r.d = m;
    r.u = IntMat::identity(m.rows);
    r.uinv = IntMat::identity(m.rows);
    r.v = IntMat::identity(m.cols);
    r.vinv = IntMat::identity(m.cols);
    IntMat& d = r.d;

    const std::size_t nmin = std::min(m.rows, m.cols);
    for (std::size_t t = 0; t < nmin; ++t) {
        std::size_t pi = t, pj = t;
        if (!find_pivot(d, t, pi, pj)) break;
        for (;;) {
            // Move the smallest pivot candidate to (t, t).
            if (pi != t) {
                swap_rows(d, t, pi);
                swap_rows(r.u, t, pi);
                swap_cols(r.uinv, t, pi);
            }
            if (pj != t) {
                swap_cols(d, t, pj);
                swap_cols(r.v, t, pj);
                swap_rows(r.vinv, t, pj);
            }
            // Clear column t below and row t to the right.
            for (std::size_t i = t + 1; i < d.rows; ++i) {
                if (d.at(i, t) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
                add_row(d, i, t, -q);
                add_row(r.u, i, t, -q);
                add_col(r.uinv, t, i, q);
            }
            for (std::size_t j = t + 1; j < d.cols; ++j) {
                if (d.at(t, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
                add_col(d, j, t, -q);
                add_col(r.v, j, t, -q);
                add_row(r.vinv, t, j, q);
            }
            if (!pivot_isolated(d, t)) {
                if (!find_pivot(d, t, pi, pj)) throw internal_error("snf: lost pivot");
                continue;
            }
            if (d.at(t, t) < 0) {
                negate_row(d, t);
                negate_row(r.u, t);
                negate_col(r.uinv, t);
            }
            // Divisibility fix: fold a non-multiple into the working corner.
            bool fixed = true;
            for (std::size_t i = t + 1; i < d.rows && fixed; ++i)
                for (std::size_t j = t + 1; j < d.cols && fixed; ++j)
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        add_row(d, t, i, 1);
                        add_row(r.u, t, i, 1);
                        add_col(r.uinv, i, t, -1);
                        fixed = false;
                    }
            if (fixed) break;
            if (!find_pivot(d, t, pi, pj)) throw internal_error("snf: lost pivot");
        }
        if (d.at(t, t) != 0) r.rank = t + 1;
    }
    return r;
}

HermiteResult hermite_cols(const IntMat& m) {
    HermiteResult r;
    r.h = m;
    r.u = IntMat::identity(m.cols);
    IntMat& h = r.h;
    std::size_t pc = 0;  // next pivot column
    for (std::size_t row = 0; row < m.rows && pc < m.cols; ++row) {
        for (;;) {
            // Smallest nonzero |h[row, j]| for j >= pc.
            std::size_t best = m.cols;
            Int besta;
            for (std::size_t j = pc; j < m.cols; ++j) {
                if (h.at(row, j) == 0) continue;
                Int a = abs(h.at(row, j));
                if (best == m.cols || a < besta) {
                    best = j;
                    besta = a;
                }
            }
            if (best == m.cols) break;  // row has no pivot
            if (best != pc) {
                swap_cols(h, pc, best);
                swap_cols(r.u, pc, best);
            }
            bool clean = true;
            for (std::size_t j = pc + 1; j < m.cols; ++j) {
                if (h.at(row, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), h.at(row, j).get_mpz_t(), h.at(row, pc).get_mpz_t());
                add_col(h, j, pc, -q);
                add_col(r.u, j, pc, -q);
                if (h.at(row, j) != 0) clean = false;
            }
            if (clean) break;
        }
        if (pc < m.cols && h.at(row, pc) != 0) {
            if (h.at(row, pc) < 0) {
                negate_col(h, pc);
                negate_col(r.u, pc);
            }
            // Reduce earlier pivot columns at this row into [0, pivot).
            for (std::size_t j = 0; j < pc; ++j) {
                if (h.at(row, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), h.at(row, j).get_mpz_t(), h.at(row, pc).get_mpz_t());
                add_col(h, j, pc, -q);
                add_col(r.u, j, pc, -q);
            }
            r.pivots.emplace_back(row, pc);
            ++pc;
        }
    }
    return r;
}

std::optional<LinearSolution> solve_linear(const IntMat& m, const std::vector<Int>& b) {
    if (b.size() != m.rows) throw internal_error("solve_linear: rhs size mismatch");
    HermiteResult hr = hermite_cols(m);
    std::vector<Int> z(m.cols);
    std::vector<Int> residual = b;
    for (auto [row, col] : hr.pivots) {
        const Int& p = hr.h.at(row, col);
        Int q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), residual[row].get_mpz_t(), p.get_mpz_t());
        if (rem != 0) return std::nullopt;
        z[col] = q;
        if (q != 0)
            for (std::size_t i = 0; i < m.rows; ++i) residual[i] -= q * hr.h.at(i, col);
    }
    for (const Int& v : residual)
        if (v != 0) return std::nullopt;

    LinearSolution s;
    s.x = hr.u.apply(z);
    std::vector<std::size_t> free_cols;
    std::vector<bool> is_pivot(m.cols, false);
    for (auto [row, col] : hr.pivots) is_pivot[col] = true;
    for (std::size_t j = 0; j < m.cols; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    s.kernel = cols_subset(hr.u, free_cols);
    return s;
}

std::optional<LinearSolution> solve_mod_subgroup(const IntMat& m, const std::vector<Int>& b,
                                                 const IntMat& r) {
    if (r.rows != m.rows) throw internal_error("solve_mod_subgroup: row mismatch");
    IntMat aug = hstack(m, r.neg());
    auto sol = solve_linear(aug, b);
    if (!sol) return std::nullopt;
    LinearSolution out;
    out.x.assign(sol->x.begin(), sol->x.begin() + m.cols);
    IntMat proj(m.cols, sol->kernel.cols);
    for (std::size_t i = 0; i < m.cols; ++i)
        for (std::size_t j = 0; j < sol->kernel.cols; ++j) proj.at(i, j) = sol->kernel.at(i, j);
    out.kernel = lattice_basis(proj);
    return out;
}

IntMat lattice_basis(const IntMat& gens) {
    HermiteResult hr = hermite_cols(gens);
    std::vector<std::size_t> keep;
    for (auto [row, col] : hr.pivots) keep.push_back(col);
    std::sort(keep.begin(), keep.end());
    return cols_subset(hr.h, keep);
}

bool lattice_contains(const IntMat& gens, const std::vector<Int>& v) {
    return solve_linear(gens, v).has_value();
}

std::vector<Int> reduce_mod_lattice(std::vector<Int> v, const IntMat& lat) {
    IntMat basis = lattice_basis(lat);
    HermiteResult hr = hermite_cols(basis);  // already HNF; recover pivots
    for (auto [row, col] : hr.pivots) {
        const Int& p = hr.h.at(row, col);
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), v[row].get_mpz_t(), p.get_mpz_t());
        if (q != 0)
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= q * hr.h.at(i, col);
    }
    return v;
}

}  // namespace kex
