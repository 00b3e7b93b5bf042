#include <doctest.h>

#include <cmath>

#include "ordersens/error.hpp"
#include "ordersens/valuation.hpp"
#include "support/generators.hpp"

using namespace ordersens;
using namespace ordersens::testing;

namespace {

struct B2 {
    SlicePtr slice = build_lattice(parse_poset("elem u\nelem v\n"), Ideal{}, 2);
    Element u = slice->poset().element("u");
    Element v = slice->poset().element("v");
    Ideal empty{};
    Ideal su = Ideal{}.with(u);
    Ideal sv = Ideal{}.with(v);
    Ideal uv = su.with(v);

    // g(∅,u)=1, g(∅,v)=2, g({u},v)=3, g({v},u)=5
    EdgeField field() const {
        EdgeField g(slice);
        g.set(empty, u, 1);
        g.set(empty, v, 2);
        g.set(su, v, 3);
        g.set(sv, u, 5);
        return g;
    }
    Path uv_path() const { return Path{empty, {u, v}}; }
    Path vu_path() const { return Path{empty, {v, u}}; }
};

SlicePtr chain_ab() { return build_lattice(chain(2), Ideal{}, 2); }

}  // namespace

TEST_CASE("path values on the two-element fixture") {
    const B2 b;
    const EdgeField g = b.field();
    CHECK(path_value(g, Path{b.empty, {}}) == 0.0);
    CHECK(path_value(g, b.uv_path()) == 4.0);
    CHECK(path_value(g, b.vu_path()) == 7.0);
    CHECK(path_value(g, Path{b.empty, {b.v}}) == 2.0);
    CHECK_THROWS_AS(path_value(g, Path{b.empty, {b.u, b.u}}), PreconditionError);
}

TEST_CASE("curvature of the two-element fixture") {
    const B2 b;
    EdgeField g = b.field();
    const Diamond d{b.empty, b.u, b.v};
    CHECK(curvature(g, d) == 3.0);
    CHECK(curvature(g, d) == path_value(g, b.vu_path()) - path_value(g, b.uv_path()));
    for (EdgeId e = 0; e < g.slice().edge_count(); ++e) g[e] = -g[e];
    CHECK(curvature(g, d) == -3.0);

    const DiamondField k = curvature_field(b.field());
    REQUIRE(k.size() == 1);
    CHECK(k.diamonds()[0] == d);
    CHECK(k.at(d) == 3.0);

    CHECK(curvature_field(EdgeField(build_lattice(chain(3), Ideal{}, 3))).size() == 0);
}

TEST_CASE("curvature field matches per-diamond recomputation") {
    Rng rng(5);
    const auto b3 = build_lattice(antichain(3), Ideal{}, 3);
    const EdgeField g = random_int_field(rng, b3);
    const DiamondField k = curvature_field(g);
    REQUIRE(k.size() == 6);
    for (std::size_t x = 0; x < k.size(); ++x) {
        const Diamond& d = k.diamonds()[x];
        const double by_hand = g.at(d.base, d.v) + g.at(d.base.with(d.v), d.u) - g.at(d.base, d.u) -
                               g.at(d.base.with(d.u), d.v);
        CHECK(k[x] == by_hand);
    }
}

TEST_CASE("path independence verdicts") {
    const B2 b;
    const auto pi = check_path_independence(b.field());
    CHECK_FALSE(pi.independent);
    REQUIRE(pi.witness.has_value());
    CHECK(*pi.witness == Diamond{b.empty, b.u, b.v});
    CHECK(pi.curvature == 3.0);

    CHECK(check_path_independence(EdgeField(b.slice)).independent);

    Rng rng(7);
    const auto b3 = build_lattice(antichain(3), Ideal{}, 3);
    CHECK(check_path_independence(gradient(random_int_potential(rng, b3))).independent);
}

TEST_CASE("path independence agrees with all-pairs comparison") {
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const Poset p = random_poset(rng, 2 + rng.index(4), 0.25);
        const auto l = build_lattice(p, Ideal{}, static_cast<int>(p.size()));
        // half the fields are gradients, half are arbitrary
        const EdgeField g = trial % 2 ? gradient(random_int_potential(rng, l)) : random_int_field(rng, l, -2, 2);
        bool brute = true;
        for (NodeId k = 0; k < l->node_count(); ++k) {
            const auto paths = enumerate_paths(*l, Ideal{}, l->node(k));
            for (const auto& q : paths)
                if (path_value(g, q) != path_value(g, paths.front())) brute = false;
        }
        CHECK(check_path_independence(g).independent == brute);
    }
}

TEST_CASE("endpoint potentials") {
    const B2 b;
    const Potential zero = endpoint_potential(EdgeField(b.slice));
    for (NodeId k = 0; k < b.slice->node_count(); ++k) CHECK(zero[k] == 0.0);
    CHECK_THROWS_AS(endpoint_potential(b.field()), PreconditionError);

    const auto l = chain_ab();
    const Poset& p = l->poset();
    EdgeField g(l);
    g.set(Ideal{}, p.element("a"), 2);
    g.set(Ideal{}.with(p.element("a")), p.element("b"), 4);
    const Potential phi = endpoint_potential(g);
    CHECK(phi.at(Ideal{}) == 0.0);
    CHECK(phi.at(p.parse_set("a")) == 2.0);
    CHECK(phi.at(p.parse_set("a+b")) == 6.0);
    CHECK(reference_score(g, Ideal{}, p.all()) == 6.0);

    Rng rng(17);
    const auto b3 = build_lattice(antichain(3), Ideal{}, 3);
    const Potential phi0 = random_int_potential(rng, b3);
    const Potential back = endpoint_potential(gradient(phi0));
    for (NodeId k = 0; k < b3->node_count(); ++k) CHECK(back[k] == phi0[k] - phi0[0]);
}

TEST_CASE("Mobius function by hand") {
    const B2 b;
    const MobiusTable mu = mobius_function(b.slice);
    const NodeId e = b.slice->index_of(b.empty);
    const NodeId u = b.slice->index_of(b.su);
    const NodeId uv = b.slice->index_of(b.uv);
    CHECK(mu(e, e) == 1.0);
    CHECK(mu(e, u) == -1.0);
    CHECK(mu(e, uv) == 1.0);
    CHECK(mu(u, e) == 0.0);

    const auto c = build_lattice(chain(2), Ideal{}, 2);
    const MobiusTable mc = mobius_function(c);
    CHECK(mc(0, c->index_of(c->poset().all())) == 0.0);
}

TEST_CASE("Mobius inversion on the two-element fixture") {
    const B2 b;
    Potential phi(b.slice);
    phi.set(b.su, 1);
    phi.set(b.sv, 2);
    phi.set(b.uv, 4);
    const ThetaSystem theta = mobius_invert(phi);
    CHECK(theta.at(b.empty) == 0.0);
    CHECK(theta.at(b.su) == 1.0);
    CHECK(theta.at(b.sv) == 2.0);
    CHECK(theta.at(b.uv) == 1.0);
    const Potential back = mobius_forward(theta);
    for (NodeId k = 0; k < b.slice->node_count(); ++k) CHECK(back[k] == phi[k]);

    const ThetaSystem z = mobius_invert(Potential(b.slice));
    for (NodeId k = 0; k < b.slice->node_count(); ++k) CHECK(z[k] == 0.0);

    const auto truncated = build_lattice(antichain(3), Ideal{}, 2);
    CHECK_THROWS_AS(mobius_invert(Potential(truncated)), PreconditionError);
}

TEST_CASE("Mobius table agrees with the defining recursion") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const Poset p = random_poset(rng, 1 + rng.index(5), 0.3);
        const auto l = build_lattice(p, Ideal{}, static_cast<int>(p.size()));
        const MobiusTable mu = mobius_function(l);
        for (NodeId k = 0; k < l->node_count(); ++k)
            for (NodeId i = 0; i < l->node_count(); ++i) CHECK(mu(k, i) == mobius_oracle(*l, k, i));
    }
}

TEST_CASE("theta expands edge values over sub-ideals containing the added element") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const Poset p = random_poset(rng, 2 + rng.index(4), 0.3);
        const auto l = build_lattice(p, Ideal{}, static_cast<int>(p.size()));
        const Potential phi = random_int_potential(rng, l);
        const ThetaSystem theta = mobius_invert(phi);
        const EdgeField g = gradient(phi);
        for (const auto& e : l->edges()) {
            const Ideal top = l->node(e.to);
            double s = 0.0;
            for (NodeId k = 0; k < l->node_count(); ++k)
                if (l->node(k).subset_of(top) && l->node(k).contains(e.add)) s += theta[k];
            CHECK(s == g.at(l->node(e.from), e.add));
        }
    }
}

TEST_CASE("reference score and decomposition on the fixture") {
    const B2 b;
    const EdgeField g = b.field();
    CHECK(reference_score(g, b.empty, b.empty) == 0.0);
    CHECK(reference_score(g, b.empty, b.uv) == 4.0);

    const Decomposition ref = decompose(g, b.uv_path());
    CHECK(ref.corrections.empty());
    CHECK(ref.total == 4.0);

    const Decomposition dv = decompose(g, b.vu_path());
    CHECK(dv.reference_score == 4.0);
    REQUIRE(dv.corrections.size() == 1);
    CHECK(dv.corrections[0].sign == 1);
    CHECK(dv.corrections[0].curvature == 3.0);
    CHECK(dv.total == 7.0);
}

TEST_CASE("decomposition is exact on integer fields") {
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const Poset p = random_poset(rng, 1 + rng.index(6), 0.2);
        const auto l = build_lattice(p, Ideal{}, static_cast<int>(p.size()));
        const EdgeField g = random_int_field(rng, l);
        const Ideal j = l->node(static_cast<NodeId>(rng.index(l->node_count())));
        for (const auto& q : enumerate_paths(*l, Ideal{}, j)) {
            const Decomposition dec = decompose(g, q);
            CHECK(dec.total == path_value(g, q));
            CHECK(dec.total == path_value_oracle(g, q.additions, q.start));
            double sum = dec.reference_score;
            for (const auto& c : dec.corrections) sum += c.sign * c.curvature;
            CHECK(sum == dec.total);
        }
    }
}

TEST_CASE("field containers reject foreign edges") {
    const B2 b;
    EdgeField g(b.slice);
    CHECK_THROWS_AS(g.at(b.uv, b.u), PreconditionError);
    CHECK_THROWS_AS(g.set(b.su, b.u, 1.0), PreconditionError);
    DiamondField k(b.slice);
    CHECK_THROWS_AS(k.at(b.su, b.u, b.v), PreconditionError);
    Potential phi(b.slice);
    CHECK_THROWS_AS(phi.at(Ideal{}.with(7)), PreconditionError);
}
