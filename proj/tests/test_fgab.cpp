#include <doctest.h>

#include <random>

#include "kex/fgab.hpp"

using namespace kex;

namespace {
FgAb grp(std::vector<long> torsion, std::size_t free_rank = 0) {
    FgAb g;
    for (long d : torsion) g.torsion.emplace_back(d);
    g.free_rank = free_rank;
    return g;
}
IntMat mat(std::size_t r, std::size_t c, std::vector<long> v) {
    IntMat m(r, c);
    for (std::size_t i = 0; i < v.size(); ++i) m.e[i] = v[i];
    return m;
}
}  // namespace

TEST_CASE("from_presentation canonicalizes") {
    Presented p1 = from_presentation(1, mat(1, 1, {0}));
    CHECK(p1.group == FgAb::free_group(1));

    Presented p2 = from_presentation(2, mat(2, 2, {2, 0, 0, 3}));
    CHECK(p2.group == grp({6}));

    Presented p3 = from_presentation(2, mat(2, 2, {2, 4, 6, 8}));
    CHECK(p3.group == grp({2, 4}));

    Presented p0 = from_presentation(0, IntMat(0, 0));
    CHECK(p0.group.is_trivial());
}

TEST_CASE("projection and section are inverse on the quotient") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> dim(0, 4), entry(-9, 9);
    for (int t = 0; t < 60; ++t) {
        std::size_t gens = dim(rng);
        IntMat rel(gens, dim(rng));
        for (Int& v : rel.e) v = entry(rng);
        Presented p = from_presentation(gens, rel);
        // proj . section = identity
        Hom ps(p.group, p.group, p.proj.mul(p.section));
        CHECK(ps == Hom::identity(p.group));
        // every relation dies under proj
        Hom pr(FgAb::free_group(gens), p.group, p.proj);
        for (std::size_t j = 0; j < rel.cols; ++j) {
            auto img = pr.apply(rel.col(j));
            CHECK(img == std::vector<Int>(p.group.ngens()));
        }
    }
}

TEST_CASE("hom_group matches the enumeration") {
    HomGroup h1 = hom_group(FgAb::free_group(1), grp({4}));
    CHECK(h1.group == grp({4}));  // Hom(Z, B) = B

    HomGroup h2 = hom_group(grp({2}), FgAb::free_group(1));
    CHECK(h2.group.is_trivial());  // torsion into free

    HomGroup h3 = hom_group(grp({4}), grp({6}));
    CHECK(h3.group == grp({2}));
    CHECK(enumerate_homs(grp({4}), grp({6})).size() == 2);

    CHECK(enumerate_homs(grp({2}), grp({2})).size() == 2);
    CHECK(enumerate_homs(grp({2, 2}), grp({2})).size() == 4);
}

TEST_CASE("hom element decoding is a bijection") {
    FgAb a = grp({2, 4});
    FgAb b = grp({2, 8});
    HomGroup hg = hom_group(a, b);
    auto homs = enumerate_homs(a, b);
    CHECK(Int(homs.size()) == hg.group.order());
    for (const Hom& h : homs) {
        auto coords = hg.to_element(h);
        CHECK(hg.from_element(coords) == h);
    }
}

TEST_CASE("ext group closed formulas") {
    CHECK(ext_group(FgAb::free_group(1), grp({4})).is_trivial());
    CHECK(ext_group(grp({2}), FgAb::free_group(1)) == grp({2}));
    CHECK(ext_group(grp({4}), grp({6})) == grp({2}));
}

TEST_CASE("tensor and torsion functors") {
    auto t1 = tensor_zn(FgAb::free_group(1), 2);
    CHECK(t1.group == grp({2}));

    auto t2 = tensor_zn(grp({3}), 2);
    CHECK(t2.group.is_trivial());

    auto t3 = tensor_zn(grp({4}, 1), 2);
    CHECK(t3.group == grp({2, 2}));

    auto s1 = torsion_n(FgAb::free_group(1), 5);
    CHECK(s1.group.is_trivial());

    auto s2 = torsion_n(grp({4}), 2);
    CHECK(s2.group == grp({2}));
    CHECK(s2.incl.m.at(0, 0) == 2);  // included as {0, 2}

    auto s3 = torsion_n(grp({2, 6}), 3);
    CHECK(s3.group == grp({3}));
}

TEST_CASE("kernel image cokernel") {
    Hom dbl = hom_mul_n(FgAb::free_group(1), 2);
    CHECK(kernel(dbl).group.is_trivial());
    CHECK(cokernel(dbl).group == grp({2}));

    Hom h(grp({4}), grp({4}), mat(1, 1, {2}));
    auto k = kernel(h);
    CHECK(k.group == grp({2}));
    CHECK(compose(h, k.incl).is_zero());
    auto im = image(h);
    CHECK(im.group == grp({2}));
    auto ck = cokernel(h);
    CHECK(ck.group == grp({2}));
}

TEST_CASE("compose, isomorphism checks, direct sums") {
    Hom h(grp({4}), grp({4}), mat(1, 1, {3}));
    CHECK(compose(Hom::identity(grp({4})), h) == h);
    CHECK(is_isomorphism(hom_scaled(Hom::identity(FgAb::free_group(1)), -1)));
    CHECK(is_isomorphism(h));  // x3 is a unit mod 4
    CHECK(!is_isomorphism(Hom(grp({4}), grp({4}), mat(1, 1, {2}))));
    Hom hinv = inverse(h);
    CHECK(compose(hinv, h) == Hom::identity(grp({4})));

    DirectSum ds = direct_sum({grp({2}), grp({3}), FgAb::free_group(1)});
    CHECK(ds.group == grp({6}, 1));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(compose(ds.proj[k], ds.inj[k]) == Hom::identity(ds.inj[k].src));
    }
    Hom sum = Hom::zero(ds.group, ds.group);
    for (std::size_t k = 0; k < 3; ++k) sum = hom_add(sum, compose(ds.inj[k], ds.proj[k]));
    CHECK(sum == Hom::identity(ds.group));
}

TEST_CASE("order counting: |image| * |kernel| = |source|") {
    std::mt19937_64 rng(99);
    std::vector<FgAb> groups = {grp({2}), grp({4}), grp({2, 2}), grp({6}), grp({8}),
                                grp({3}), grp({2, 4}), grp({9})};
    std::uniform_int_distribution<std::size_t> pick(0, groups.size() - 1);
    for (int t = 0; t < 40; ++t) {
        FgAb a = groups[pick(rng)], b = groups[pick(rng)];
        auto homs = enumerate_homs(a, b);
        std::uniform_int_distribution<std::size_t> hp(0, homs.size() - 1);
        const Hom& h = homs[hp(rng)];
        CHECK(image(h).group.order() * kernel(h).group.order() == a.order());
    }
}

TEST_CASE("tensor/torsion natural exact sequence") {
    // 0 -> A[n] -> A -> A -> A/nA -> 0 with x n in the middle
    std::vector<FgAb> groups = {grp({4}), grp({2, 6}), grp({3}, 1), grp({8}, 2)};
    for (const FgAb& a : groups)
        for (long n : {2, 3, 4}) {
            auto tor = torsion_n(a, n);
            auto ten = tensor_zn(a, n);
            Hom muln = hom_mul_n(a, n);
            CHECK(compose(muln, tor.incl).is_zero());
            CHECK(compose(ten.proj, muln).is_zero());
            // im(incl) = ker(x n), im(x n) = ker(proj)
            CHECK(lattice_basis(image_lattice(tor.incl)) ==
                  lattice_basis(kernel_lattice(muln)));
            CHECK(lattice_basis(image_lattice(muln)) ==
                  lattice_basis(kernel_lattice(ten.proj)));
        }
}

TEST_CASE("ext additivity on random small instances") {
    std::vector<FgAb> gs = {grp({2}), grp({3}), grp({4}), grp({2, 2})};
    for (const FgAb& a1 : gs)
        for (const FgAb& a2 : gs)
            for (const FgAb& b : gs) {
                FgAb lhs = ext_group(direct_sum({a1, a2}).group, b);
                FgAb rhs = direct_sum({ext_group(a1, b), ext_group(a2, b)}).group;
                CHECK(lhs == rhs);
                FgAb lhs2 = ext_group(b, direct_sum({a1, a2}).group);
                FgAb rhs2 = direct_sum({ext_group(b, a1), ext_group(b, a2)}).group;
                CHECK(lhs2 == rhs2);
            }
}

TEST_CASE("enumerate_homs rejects infinite hom sets") {
    CHECK_THROWS_AS(enumerate_homs(FgAb::free_group(1), FgAb::free_group(1)), input_error);
}
