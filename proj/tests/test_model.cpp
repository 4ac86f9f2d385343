#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qwalk/error.hpp"
#include "qwalk/io.hpp"
#include "qwalk/model.hpp"
#include "support.hpp"

using namespace qwalk;
using namespace testing;

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/8") == Rational(3, 8));
    CHECK(parse_rational("-6/8") == Rational(-3, 4));
    CHECK(parse_rational("0.125") == Rational(1, 8));
    CHECK(parse_rational("-1.5e-2") == Rational(-3, 200));
    CHECK(parse_rational("2") == Rational(2));
    CHECK(parse_rational("010/0030") == Rational(1, 3));
    CHECK(parse_rational("0.0625") == Rational(1, 16));
    CHECK(format_rational(Rational(2)) == "2/1");
    CHECK(format_rational(Rational(-3, 6)) == "-1/2");
    CHECK_THROWS_AS(parse_rational("1/0"), SchemaError);
    CHECK_THROWS_AS(parse_rational("abc"), SchemaError);
    CHECK_THROWS_AS(parse_rational(""), SchemaError);
}

TEST_CASE("increment law invariants") {
    CHECK_THROWS_AS(law({{1, 0, "1/2"}, {-1, 0, "1/3"}}), SchemaError);
    CHECK_THROWS_AS(law({{1, 0, "1/2"}, {1, 0, "1/2"}}), SchemaError);
    CHECK_THROWS_AS(law({{1, 0, "3/2"}, {-1, 0, "-1/2"}}), SchemaError);
    CHECK_THROWS_AS(IncrementLaw(std::vector<Atom>{}), SchemaError);
    auto l = law({{0, 1, "1/2"}, {-1, 0, "1/4"}, {1, 0, "1/4"}});
    REQUIRE(l.size() == 3);
    CHECK(l.atoms()[0].dx == -1);
    CHECK(l.atoms()[2].dx == 1);
    CHECK(l.prob({0, 1}) == Rational(1, 2));
    CHECK(l.prob({5, 5}) == 0);
}

TEST_CASE("interior mean") {
    CHECK(interior_mean(four_point()) == Vec2{0.0, 0.0});
    CHECK(interior_mean(law({{1, 0, "1/2"}, {-1, 0, "1/2"}})) == Vec2{0.0, 0.0});
    auto l = law({{2, 0, "1/3"}, {-1, 0, "2/3"}});
    CHECK(l.exact_mean().first == 0);
    CHECK(interior_mean(l) == Vec2{0.0, 0.0});
    CHECK(interior_mean(law({{1, 0, "11/20"}, {-1, 0, "9/20"}})).x == doctest::Approx(0.1));
}

TEST_CASE("second moment matrix") {
    auto s = covariance(four_point());
    CHECK(s == Mat2{0.5, 0.0, 0.0, 0.5});
    auto axis = covariance(law({{1, 0, "1/2"}, {-1, 0, "1/2"}}));
    CHECK(axis.a22 == 0.0);
    CHECK(axis.a12 == 0.0);
    CHECK(axis.det() == 0.0);
    auto diag = covariance(law({{1, 1, "1/2"}, {-1, -1, "1/2"}}));
    CHECK(diag == Mat2{1.0, 1.0, 1.0, 1.0});
    CHECK(diag.det() == 0.0);
}

TEST_CASE("walk spec structure") {
    auto h = std::vector<IncrementLaw>{four_point()};
    CHECK_THROWS_AS(WalkSpec(0, four_point(), {}, {}, {}), SchemaError);
    CHECK_THROWS_AS(WalkSpec(1, four_point(), h, {}, {four_point()}), SchemaError);
    CHECK_THROWS_AS(WalkSpec(1, four_point(), h, h, {}), SchemaError);
    CHECK_THROWS_AS(WalkSpec(1, IncrementLaw{}, h, h, h), SchemaError);
}

TEST_CASE("region dispatch") {
    auto spec = orthogonal_spec();
    CHECK(spec.region_of({1, 1}) == Region::Interior);
    CHECK(spec.region_of({5, 0}) == Region::Horizontal);
    CHECK(spec.region_of({0, 5}) == Region::Vertical);
    CHECK(spec.region_of({0, 0}) == Region::Corner);
    CHECK(&spec.law_at({3, 0}) == &spec.horizontal()[0]);
    CHECK(&spec.law_at({0, 3}) == &spec.vertical()[0]);
    CHECK(&spec.law_at({3, 3}) == &spec.interior());
}

TEST_CASE("default corner laws stay in the quadrant") {
    auto spec = orthogonal_spec();
    // Horizontal law clipped at (0,0): (-1,0) removed, the rest renormalized.
    CHECK(spec.corner(0, 0) == law({{1, 0, "1/2"}, {0, 1, "1/2"}}));
    auto pm = default_corner_laws(1, {law({{-1, 0, "1"}})}, {law({{0, -1, "1"}})});
    CHECK(pm[0] == IncrementLaw::point_mass({1, 1}));
}

TEST_CASE("validate reports each hypothesis") {
    SUBCASE("drifting interior") {
        auto spec = simple_spec(law({{1, 0, "11/40"}, {-1, 0, "9/40"}, {0, 1, "1/4"}, {0, -1, "1/4"}}),
                                orthogonal_spec().horizontal()[0], orthogonal_spec().vertical()[0]);
        auto rep = validate(spec);
        CHECK_FALSE(rep.zero_drift_D);
        CHECK(rep.interior_drift.x == doctest::Approx(0.05));
        CHECK(rep.interior_drift_exact == "(1/20,0/1)");
        CHECK_FALSE(rep.hard_pass());
    }
    SUBCASE("long jump with R = 1") {
        auto spec = simple_spec(law({{-2, 0, "1/4"}, {2, 0, "1/4"}, {0, 1, "1/4"}, {0, -1, "1/4"}}),
                                orthogonal_spec().horizontal()[0], orthogonal_spec().vertical()[0]);
        auto rep = validate(spec);
        CHECK_FALSE(rep.hypothesis_H);
        REQUIRE(rep.offending_atoms.size() == 1);
        CHECK(rep.offending_atoms[0] == "interior atom (-2,0)");
        CHECK_THROWS_AS(require_closed(spec), HypothesisError);
    }
    SUBCASE("degenerate covariance") {
        auto spec = simple_spec(law({{1, 0, "1/2"}, {-1, 0, "1/2"}}), orthogonal_spec().horizontal()[0],
                                orthogonal_spec().vertical()[0]);
        auto rep = validate(spec);
        CHECK_FALSE(rep.covariance_Sigma);
        CHECK(rep.det_sigma_exact == "0/1");
    }
    SUBCASE("well-posed orthogonal model") {
        auto rep = validate(orthogonal_spec());
        CHECK(rep.hard_pass());
        CHECK(rep.left_continuous);
        CHECK(rep.irreducibility == IrreducibilityStatus::VerifiedOnTruncation);
        CHECK(rep.truncation == 8);
        CHECK(std::isinf(rep.nu_interior));
    }
    SUBCASE("boundary row that can never leave the axis is not irreducible") {
        auto spec = simple_spec(four_point(), law({{1, 0, "1/2"}, {-1, 0, "1/2"}}), orthogonal_spec().vertical()[0]);
        auto rep = validate(spec);
        CHECK(rep.hard_pass());
        CHECK(rep.irreducibility == IrreducibilityStatus::NotVerified);
        CHECK_FALSE(rep.irreducibility_witness.empty());
    }
    SUBCASE("deterministic") { CHECK(validate(orthogonal_spec()) == validate(orthogonal_spec())); }
}

TEST_CASE("no escaping atoms over a state box") {
    auto spec = orthogonal_spec();
    for (std::int64_t x = 0; x < 20; ++x) {
        for (std::int64_t y = 0; y < 20; ++y) {
            for (const auto& a : spec.law_at({x, y}).atoms()) {
                CHECK(x + a.dx >= 0);
                CHECK(y + a.dy >= 0);
            }
        }
    }
}

TEST_CASE("json round trip") {
    auto spec = orthogonal_spec();
    auto j = spec_to_json(spec);
    CHECK(j["interior"][0][2] == "1/4");
    auto back = spec_from_json(json::parse(j.dump()));
    CHECK(back == spec);

    auto text = R"({"R":1,"interior":[[0,1,0.25],[0,-1,"1/4"],[1,0,"0.25"],[-1,0,"1/4"]],
                    "horizontal":[[[1,0,"1/3"],[-1,0,"1/3"],[0,1,"1/3"]]],
                    "vertical":[[[0,1,"1/3"],[0,-1,"1/3"],[1,0,"1/3"]]]})";
    CHECK(spec_from_json(json::parse(text)) == spec);

    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"R":2,"interior":[[0,0,"1"]],"horizontal":[],"vertical":[]})")),
                    SchemaError);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"interior":[]})")), SchemaError);
    CHECK(increment_from_json(json::parse(R"({"atoms":[[1,0,"1/2"],[-1,0,"1/2"]]})")).size() == 2);
}
