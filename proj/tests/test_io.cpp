#include <doctest.h>

#include "ordersens/causal/event_log.hpp"
#include "ordersens/csv.hpp"
#include "ordersens/error.hpp"
#include "ordersens/field_io.hpp"
#include "ordersens/integrability.hpp"
#include "support/generators.hpp"

using namespace ordersens;
using namespace ordersens::testing;
using namespace ordersens::causal;

TEST_CASE("csv parsing handles quotes and line endings") {
    const auto rows = csv::parse("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\n\nlast,\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == csv::Row{"a", "b"});
    CHECK(rows[1] == csv::Row{"x,1", "say \"hi\""});
    CHECK(rows[2] == csv::Row{"last", ""});
    CHECK_THROWS_AS(csv::parse("\"open\n"), InputError);

    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::join({"q\"", "z"}) == "\"q\"\"\",z");
}

TEST_CASE("numbers round trip through their shortest form") {
    CHECK(csv::format_number(3.0) == "3");
    CHECK(csv::format_number(-0.5) == "-0.5");
    CHECK(csv::format_number(0.1) == "0.1");
    Rng rng(2);
    for (int k = 0; k < 500; ++k) {
        const double x = (rng.uniform() - 0.5) * std::pow(10.0, uniform_int(rng, -8, 8));
        CHECK(csv::parse_number(csv::format_number(x)) == x);
    }
    CHECK_THROWS_AS(csv::parse_number("1.5x"), InputError);
    CHECK_THROWS_AS(csv::parse_number(""), InputError);
}

TEST_CASE("edge fields round trip exactly") {
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const Poset p = random_poset(rng, 1 + rng.index(6), 0.3);
        const auto l = build_lattice(p, Ideal{}, static_cast<int>(p.size()));
        EdgeField g(l);
        for (EdgeId e = 0; e < l->edge_count(); ++e) g[e] = (rng.uniform() - 0.5) * 1e3;
        const std::string text = write_edge_field(g);
        const EdgeField back = read_edge_field(l, text);
        for (EdgeId e = 0; e < l->edge_count(); ++e) CHECK(back[e] == g[e]);
        CHECK(write_edge_field(back) == text);
    }
}

TEST_CASE("edge field reader checks coverage") {
    const auto b2 = build_lattice(antichain(2), Ideal{}, 2);
    CHECK_NOTHROW(read_edge_field(b2, "ideal,add,value\n-,a,1\n-,b,2\na,b,3\nb,a,5\n"));
    CHECK_THROWS_AS(read_edge_field(b2, "ideal,add,value\n-,a,1\n-,b,2\na,b,3\n"), InputError);
    CHECK_THROWS_AS(read_edge_field(b2, "ideal,add,value\n-,a,1\n-,a,1\n-,b,2\na,b,3\nb,a,5\n"), InputError);
    CHECK_THROWS_AS(read_edge_field(b2, "ideal,add,value\n-,a,1\n-,b,2\na,b,3\nb,a,5\na+b,a,0\n"), InputError);
    CHECK_THROWS_AS(read_edge_field(b2, "x,y,z\n"), InputError);
    CHECK_THROWS_AS(read_edge_field(b2, "ideal,add,value\n-,a,one\n-,b,2\na,b,3\nb,a,5\n"), InputError);
}

TEST_CASE("diamond fields, potentials and gauges round trip") {
    Rng rng(6);
    const auto b3 = build_lattice(antichain(3), Ideal{}, 3);
    const EdgeField g = random_int_field(rng, b3);

    const DiamondField k = curvature_field(g);
    const std::string kt = write_diamond_field(k);
    CHECK(write_diamond_field(read_diamond_field(b3, kt)) == kt);

    const Potential phi = random_int_potential(rng, b3);
    const std::string pt = write_potential(phi);
    CHECK(write_potential(read_potential(b3, pt)) == pt);

    const GaugeSystem alpha = gauge_of(g, reference_tree(b3));
    const std::string at = write_gauge(alpha);
    CHECK(at.rfind("ideal,alpha\n", 0) == 0);
    CHECK(at.find("\n-,") == std::string::npos);
    CHECK(write_gauge(read_gauge(b3, at)) == at);
    CHECK_THROWS_AS(read_gauge(b3, at + "-,1\n"), InputError);
}

TEST_CASE("timestamps") {
    CHECK(parse_iso8601("1970-01-01") == 0.0);
    CHECK(parse_iso8601("1970-01-02T00:00:00Z") == kSecondsPerDay);
    CHECK(parse_iso8601("2024-01-01 12:00:00") == parse_iso8601("2024-01-01T12:00:00Z"));
    CHECK(parse_iso8601("2024-01-01T12:00:00+02:00") == parse_iso8601("2024-01-01T10:00:00Z"));
    CHECK(parse_iso8601("2024-01-01T00:00:00.250Z") == parse_iso8601("2024-01-01") + 0.25);
    CHECK(format_iso8601(parse_iso8601("2020-02-29T23:59:59.123Z")) == "2020-02-29T23:59:59.123Z");
    CHECK_THROWS_AS(parse_iso8601("2024-13-01"), InputError);
    CHECK_THROWS_AS(parse_iso8601("2024-02-30"), InputError);
    CHECK_THROWS_AS(parse_iso8601("yesterday"), InputError);
    CHECK_THROWS_AS(parse_iso8601("2024-01-01T25:00:00"), InputError);
}

TEST_CASE("event log ingestion") {
    CHECK(ingest_log("case_id,activity,timestamp,outcome\n").cases.empty());
    CHECK_THROWS_AS(ingest_log(""), InputError);
    CHECK_THROWS_AS(ingest_log("id,act,time\n"), InputError);

    const EventLog one = ingest_log(
        "case_id,activity,timestamp,outcome\n"
        "c1,b,2024-01-01T00:00:02Z,1\n"
        "c1,a,2024-01-01T00:00:01Z,1\n"
        "c1,c,2024-01-01T00:00:03Z,1\n");
    REQUIRE(one.cases.size() == 1);
    const auto& ev = one.cases[0].events;
    REQUIRE(ev.size() == 3);
    CHECK(ev[0].activity == "a");
    CHECK(ev[1].activity == "b");
    CHECK(ev[2].activity == "c");
    CHECK(one.cases[0].outcome == 1.0);
    CHECK_FALSE(one.outcome_missing);

    // equal timestamps keep file order
    const EventLog ties = ingest_log(
        "timestamp,activity,case_id\n2024-01-01,x,k\n2024-01-01,y,k\n2023-12-31,z,k\n");
    REQUIRE(ties.cases.at(0).events.size() == 3);
    CHECK(ties.cases[0].events[0].activity == "z");
    CHECK(ties.cases[0].events[1].activity == "x");
    CHECK(ties.outcome_missing);
    CHECK(ties.warnings.size() == 1);

    const EventLog acc = ingest_log("case_id,activity,timestamp\nk,accept,2024-01-01\nm,reject,2024-01-01\n",
                                    IngestOptions{"accept"});
    CHECK(acc.cases[0].outcome == 1.0);
    CHECK(acc.cases[1].outcome == 0.0);
    CHECK_FALSE(acc.outcome_missing);

    CHECK_THROWS_AS(ingest_log("case_id,activity,timestamp,outcome\nk,a,2024-01-01,maybe\n"), InputError);
    CHECK_THROWS_AS(ingest_log("case_id,activity,timestamp\nk,a,not-a-date\n"), InputError);
}

TEST_CASE("event log writer round trips") {
    const std::string text =
        "case_id,activity,timestamp,outcome\n"
        "c1,a,2024-01-01T00:00:01.000Z,1\n"
        "c1,\"b,x\",2024-01-01T00:00:02.500Z,1\n"
        "c2,a,2024-03-01T10:00:00.000Z,0\n";
    CHECK(write_log(ingest_log(text)) == text);
}
