#include <doctest.h>

#include "ordersens/integrability.hpp"
#include "support/generators.hpp"

using namespace ordersens;
using namespace ordersens::testing;

namespace {

// All (base; u<v<w) with u,v,w pairwise incomparable and admissible at base,
// and room for all three inside the slice.
std::size_t cube_count_oracle(const LatticeSlice& l) {
    const Poset& p = l.poset();
    std::size_t n = 0;
    for (NodeId k = 0; k < l.node_count(); ++k) {
        if (l.node_depth(k) + 3 > l.horizon()) continue;
        const auto adm = admissible_additions(p, l.node(k)).elements();
        for (std::size_t a = 0; a < adm.size(); ++a)
            for (std::size_t b = a + 1; b < adm.size(); ++b)
                for (std::size_t c = b + 1; c < adm.size(); ++c)
                    if (!p.comparable(adm[a], adm[b]) && !p.comparable(adm[a], adm[c]) &&
                        !p.comparable(adm[b], adm[c]))
                        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("cube enumeration") {
    CHECK(enumerate_cubes(*build_lattice(antichain(2), Ideal{}, 2)).empty());
    const auto b3 = build_lattice(antichain(3), Ideal{}, 3);
    const auto cubes = enumerate_cubes(*b3);
    REQUIRE(cubes.size() == 1);
    CHECK(cubes[0] == ThreeCube{Ideal{}, 0, 1, 2});

    const auto b4 = build_lattice(antichain(4), Ideal{}, 4);
    CHECK(enumerate_cubes(*b4).size() == cube_count_oracle(*b4));
    CHECK(enumerate_cubes(*b4).size() == 8);

    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const Poset p = random_poset(rng, 3 + rng.index(4), 0.2);
        const auto l = build_lattice(p, Ideal{}, static_cast<int>(rng.index(p.size() + 1)));
        CHECK(enumerate_cubes(*l).size() == cube_count_oracle(*l));
    }
}

TEST_CASE("cube defect") {
    const auto b3 = build_lattice(antichain(3), Ideal{}, 3);
    const ThreeCube c = enumerate_cubes(*b3).at(0);

    Rng rng(9);
    CHECK(cube_defect(curvature_field(random_int_field(rng, b3)), c) == 0.0);

    DiamondField k(b3, 5.0);
    CHECK(cube_defect(k, c) == 0.0);

    // bumping any single face moves the defect by exactly ±1
    for (std::size_t x = 0; x < k.size(); ++x) {
        DiamondField bumped = curvature_field(random_int_field(rng, b3));
        bumped[x] += 1.0;
        const double d = cube_defect(bumped, c);
        CHECK((d == 1.0 || d == -1.0));
    }
}

TEST_CASE("cube consistency on random slices") {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const Poset p = random_poset(rng, 3 + rng.index(4), 0.15);
        const auto l = build_lattice(p, Ideal{}, static_cast<int>(p.size()));
        DiamondField k = curvature_field(random_int_field(rng, l));
        CHECK(is_cube_consistent(k).consistent);
        const auto cubes = enumerate_cubes(*l);
        if (cubes.empty()) continue;
        const ThreeCube& c = cubes[rng.index(cubes.size())];
        k[*k.find(c.base, c.u, c.v)] += 2.0;
        const auto verdict = is_cube_consistent(k);
        CHECK_FALSE(verdict.consistent);
        REQUIRE(verdict.witness.has_value());
        CHECK(std::abs(verdict.defect) == 2.0);
    }
}

TEST_CASE("reference tree") {
    const auto b2 = build_lattice(parse_poset("elem u\nelem v\n"), Ideal{}, 2);
    const Poset& p = b2->poset();
    const ReferenceTree t = reference_tree(b2);
    CHECK(t.parent[b2->index_of(p.parse_set("u+v"))] == b2->index_of(p.parse_set("u")));
    CHECK(t.parent[b2->index_of(p.parse_set("v"))] == 0);
    CHECK(t.parent[b2->index_of(p.parse_set("u"))] == 0);
    CHECK(t.top_element[b2->index_of(p.parse_set("u+v"))] == p.element("v"));

    const auto c = build_lattice(chain(3), Ideal{}, 3);
    const ReferenceTree tc = reference_tree(c);
    for (NodeId k = 1; k < c->node_count(); ++k) {
        CHECK(c->node(tc.parent[k]).size() + 1 == c->node(k).size());
        CHECK(c->edge(tc.tree_edge(k)).to == k);
    }

    const auto b3 = build_lattice(antichain(3), Ideal{}, 3);
    const ReferenceTree t3 = reference_tree(b3);
    for (NodeId k = 1; k < b3->node_count(); ++k)
        CHECK(b3->node(t3.parent[k]) == b3->node(k).without(*b3->node(k).max()));
}

TEST_CASE("zero-gauge reconstruction") {
    const auto b2 = build_lattice(parse_poset("elem u\nelem v\n"), Ideal{}, 2);
    const Poset& p = b2->poset();
    const Element u = p.element("u"), v = p.element("v");
    DiamondField k(b2);
    k[0] = 3.0;
    const EdgeField g0 = zero_gauge_reconstruct(k);
    CHECK(g0.at(Ideal{}, v) == 0.0);
    CHECK(g0.at(Ideal::single(u), v) == 0.0);
    CHECK(g0.at(Ideal{}, u) == 0.0);
    CHECK(g0.at(Ideal::single(v), u) == 3.0);

    const EdgeField z = zero_gauge_reconstruct(DiamondField(b2));
    for (EdgeId e = 0; e < b2->edge_count(); ++e) CHECK(z[e] == 0.0);

    Rng rng(33);
    const auto b3 = build_lattice(antichain(3), Ideal{}, 3);
    const DiamondField kr = curvature_field(random_int_field(rng, b3));
    const DiamondField back = curvature_field(zero_gauge_reconstruct(kr));
    for (std::size_t x = 0; x < kr.size(); ++x) CHECK(back[x] == kr[x]);

    DiamondField bad(b3);
    bad[0] = 1.0;
    CHECK_THROWS_AS(zero_gauge_reconstruct(bad), CubeInconsistency);
}

TEST_CASE("tree integration") {
    const auto c = build_lattice(chain(2), Ideal{}, 2);
    const ReferenceTree t = reference_tree(c);
    GaugeSystem alpha(c);
    alpha[1] = 2;
    alpha[2] = 4;
    const Potential psi = tree_integrate(alpha, t);
    CHECK(psi[0] == 0.0);
    CHECK(psi[1] == 2.0);
    CHECK(psi[2] == 6.0);

    const auto b2 = build_lattice(parse_poset("elem u\nelem v\n"), Ideal{}, 2);
    const Poset& p = b2->poset();
    GaugeSystem a2(b2);
    a2.set(p.parse_set("u"), 1);
    a2.set(p.parse_set("v"), 2);
    a2.set(p.parse_set("u+v"), 3);
    CHECK(tree_integrate(a2, reference_tree(b2)).at(p.parse_set("u+v")) == 4.0);

    const Potential zero = tree_integrate(GaugeSystem(b2), reference_tree(b2));
    for (NodeId k = 0; k < b2->node_count(); ++k) CHECK(zero[k] == 0.0);
}

TEST_CASE("gradient shift") {
    const auto b2 = build_lattice(parse_poset("elem u\nelem v\n"), Ideal{}, 2);
    const Poset& p = b2->poset();
    const Element u = p.element("u"), v = p.element("v");
    EdgeField g(b2);
    g.set(Ideal{}, u, 1);
    g.set(Ideal{}, v, 2);
    g.set(Ideal::single(u), v, 3);
    g.set(Ideal::single(v), u, 5);

    Potential psi(b2);
    psi.set(Ideal::single(u), 10);
    const EdgeField s = gradient_shift(g, psi);
    CHECK(s.at(Ideal{}, u) == 11.0);
    CHECK(s.at(Ideal{}, v) == 2.0);
    CHECK(s.at(Ideal::single(u), v) == -7.0);
    CHECK(s.at(Ideal::single(v), u) == 5.0);
    CHECK(curvature_field(s)[0] == 3.0);

    const EdgeField same = gradient_shift(g, Potential(b2));
    for (EdgeId e = 0; e < b2->edge_count(); ++e) CHECK(same[e] == g[e]);

    Potential card(b2);
    for (NodeId k = 0; k < b2->node_count(); ++k) card[k] = static_cast<double>(b2->node(k).size());
    const EdgeField ones = gradient_shift(EdgeField(b2), card);
    for (EdgeId e = 0; e < b2->edge_count(); ++e) CHECK(ones[e] == 1.0);
    CHECK(curvature_field(ones)[0] == 0.0);
}

TEST_CASE("reconstruction with gauge recovers the field") {
    const auto b2 = build_lattice(parse_poset("elem u\nelem v\n"), Ideal{}, 2);
    const Poset& p = b2->poset();
    DiamondField k(b2);
    k[0] = 3.0;
    GaugeSystem alpha(b2);
    alpha.set(p.parse_set("u"), 1);
    alpha.set(p.parse_set("v"), 2);
    alpha.set(p.parse_set("u+v"), 3);
    const EdgeField g = reconstruct_with_gauge(k, alpha);
    CHECK(g.at(Ideal{}, p.element("u")) == 1.0);
    CHECK(g.at(Ideal{}, p.element("v")) == 2.0);
    CHECK(g.at(p.parse_set("u"), p.element("v")) == 3.0);
    CHECK(g.at(p.parse_set("v"), p.element("u")) == 5.0);

    const EdgeField z = reconstruct_with_gauge(DiamondField(b2), GaugeSystem(b2));
    for (EdgeId e = 0; e < b2->edge_count(); ++e) CHECK(z[e] == 0.0);

    Rng rng(47);
    for (int trial = 0; trial < 40; ++trial) {
        const Poset q = random_poset(rng, 2 + rng.index(5), 0.2);
        const Ideal base = random_ideal(rng, q, 0.1);
        const auto l = build_lattice(q, base, static_cast<int>(rng.index(q.size() - base.size() + 1)));
        const EdgeField g0 = random_int_field(rng, l);
        const EdgeField back = reconstruct_with_gauge(curvature_field(g0), gauge_of(g0, reference_tree(l)));
        for (EdgeId e = 0; e < l->edge_count(); ++e) CHECK(back[e] == g0[e]);
    }
}
