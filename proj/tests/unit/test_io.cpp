#include "doctest.h"
#include "zmtile/cyclotomic.hpp"
#include "zmtile/delsarte.hpp"
#include "zmtile/error.hpp"
#include "zmtile/io.hpp"
#include "zmtile/tiling.hpp"

using namespace zmtile;

TEST_CASE("rationals travel as strings") {
    CHECK(rational_to_json(Rational(3)) == "3/1");
    CHECK(rational_to_json(Rational(-2, 6)) == "-1/3");
    CHECK(rational_from_json(Json("5/10")) == Rational(1, 2));
    CHECK(rational_from_json(Json(7)) == Rational(7));
    const Rational huge = Rational::parse("1000000000000000000000/7");
    CHECK(rational_from_json(rational_to_json(huge)) == huge);
    CHECK_THROWS_AS(rational_from_json(Json(0.5)), InvalidInput);
}

TEST_CASE("step functions") {
    const auto [f, g] = counterexample_pair(2, 3);
    const auto j = step_to_json(f);
    CHECK(j["M"] == 144);
    // Only nonzero classes are written.
    for (const auto& [key, value] : j["coeffs"].items()) CHECK(value != "0/1");
    CHECK(step_from_json(j) == f);
    CHECK(step_from_json(parse_json(step_to_json(g).dump())) == g);
    const Json text = parse_json(R"({"M": 12, "coeffs": {"12": "1", "4": "1/2"}})");
    const auto h = step_from_json(text);
    CHECK(h.coeff(4) == Rational(1, 2));
    CHECK(h.coeff(1) == Rational(0));
    CHECK_THROWS_AS(step_from_json(parse_json(R"({"M": 12, "coeffs": {"5": "1"}})")), InvalidInput);
    CHECK_THROWS_AS(step_from_json(parse_json(R"({"M": 12, "coeffs": {"4x": "1"}})")), InvalidInput);
    CHECK_THROWS_AS(step_from_json(parse_json(R"({"coeffs": {}})")), InvalidInput);
    CHECK_THROWS_AS(step_from_json(parse_json(R"({"M": 12})")), InvalidInput);
}

TEST_CASE("sets") {
    const Modulus mod(36);
    const TileSet A(mod, {0, 4, 9, 13});
    CHECK(tileset_from_json(tileset_to_json(A)) == A);
    const auto H = ClassSet::parse(mod, "1,4,9,36");
    const auto j = classset_to_json(H);
    CHECK(j["hex"] == H.to_hex());
    CHECK(classset_from_json(j) == H);
    CHECK(classset_from_json(Json{{"M", 36}, {"hex", H.to_hex()}}) == H);
    CHECK_THROWS_AS(classset_from_json(Json{{"M", 36}}), InvalidInput);
    CHECK_THROWS_AS(tileset_from_json(Json{{"M", 36}, {"elements", {1, 2}}}), InvalidInput);
}

TEST_CASE("reports") {
    const Modulus mod(12);
    const auto r = screen(ClassSet::parse(mod, "3,6,12"), delta_screen(mod), true);
    const auto j = screen_to_json(r);
    CHECK(j["delta"] == "1/576");
    CHECK(j["d_plus_solved"] == true);
    const auto back = screen_from_json(parse_json(j.dump()));
    CHECK(back.k_H == r.k_H);
    CHECK(back.d_delta_plus == r.d_delta_plus);
    CHECK(back.d_minus == r.d_minus);
    CHECK(back.d_plus == r.d_plus);
    CHECK(back.passes == r.passes);
    CHECK_THROWS_AS(screen_from_json(Json{{"k_H", 1}}), InvalidInput);

    const auto [f, g] = counterexample_pair(2, 3);
    const auto cj = cyclo_to_json(t1t2_report(f));
    CHECK(cj["t2_witness"] == 6);
    CHECK(cj.contains("S_F"));
    const auto pj = pd_report_to_json(verify_functional_pd_tiling(f, g));
    CHECK(pj["valid"] == true);
    CHECK(pj["checks"]["convolution_one"] == true);
    CHECK(pj["t2_g"] == false);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_json("{"), InvalidInput);
    CHECK_THROWS_AS(parse_json(""), InvalidInput);
}
