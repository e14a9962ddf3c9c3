#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "bmsfield/config.hpp"
#include "bmsfield/errors.hpp"
#include "bmsfield/serialize.hpp"
#include "bmsfield/verify.hpp"

using namespace bms;

namespace {

std::string data(const std::string& name) { return std::string(BMSFIELD_TEST_DATA) + "/" + name; }

std::string schema_path(const std::string& text) {
    try {
        roundtrip_text(text);
    } catch (const SchemaError& e) {
        return e.path();
    }
    return "<none>";
}

std::string config_message(const std::string& text) {
    try {
        Config::from_json_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("config defaults and overrides") {
    const Config d;
    CHECK(d.L_max == 8);
    CHECK(d.k == 2.0);
    CHECK(d.N == 6);
    CHECK(d.seed == 20240917u);
    CHECK(d.st_directions.size() == 5);
    CHECK(d.directions().size() == 9);
    CHECK_NOTHROW(d.validate());

    const Config c = Config::from_json_text(R"({"N": 4, "k": 3.5, "signature": "-+++", "tolerances": {"cocycle": 1e-10}})");
    CHECK(c.N == 4);
    CHECK(c.k == 3.5);
    CHECK(c.L_max == 8);
    CHECK(c.signature(0) == -1.0);
    CHECK(c.tol("cocycle") == 1e-10);
    CHECK(c.tol("split") == d.tol("split"));

    const Config back = Config::from_json_text(c.to_json_text());
    CHECK(back.to_json_text() == c.to_json_text());
}

TEST_CASE("config errors name the violated constraint") {
    CHECK(config_message(R"({"k": 0.5})").find("k > 1") != std::string::npos);
    CHECK(config_message(R"({"k": 1.0})").find("k > 1") != std::string::npos);
    CHECK(config_message(R"({"N": 1})").find("N >= 2") != std::string::npos);
    CHECK(config_message(R"({"ST_directions": [[1, 0]]})").find("l > 1") != std::string::npos);
    CHECK(config_message(R"({"ST_directions": [[2, 0], [2, 0]]})").find("duplicate") != std::string::npos);
    CHECK(config_message(R"({"colour": 1})").find("unknown config key") != std::string::npos);
    CHECK(config_message(R"({"tolerances": {"nonsense": 1}})").find("unknown tolerance") != std::string::npos);
    CHECK(config_message(R"({"signature": "++++"})").find("signature") != std::string::npos);
    CHECK(config_message("[1, 2]").find("object") != std::string::npos);
    CHECK(config_message("{").find("not valid JSON") != std::string::npos);
    CHECK_THROWS_AS(Config().tol("nonsense"), ConfigError);
    CHECK_THROWS_AS(Config::load(data("missing.json")), ConfigError);
    CHECK_THROWS_AS(Config::load(data("bad_k.json")), ConfigError);
}

TEST_CASE("config path precedence") {
    ::unsetenv("BMSFIELD_CONFIG");
    CHECK_FALSE(resolve_config_path(std::nullopt).has_value());
    ::setenv("BMSFIELD_CONFIG", "/tmp/from_env.json", 1);
    CHECK(resolve_config_path(std::nullopt).value() == "/tmp/from_env.json");
    CHECK(resolve_config_path(std::string("given.json")).value() == "given.json");
    ::setenv("BMSFIELD_CONFIG", "", 1);
    CHECK_FALSE(resolve_config_path(std::nullopt).has_value());
    ::unsetenv("BMSFIELD_CONFIG");
}

TEST_CASE("fixture roundtrips") {
    const std::pair<const char*, DocumentKind> fixtures[] = {
        {"sphere.json", DocumentKind::sphere_function}, {"beta.json", DocumentKind::supermomentum},
        {"g_rotation.json", DocumentKind::bms_element},  {"psi_complex.json", DocumentKind::hermite_series},
        {"state.json", DocumentKind::field_state},       {"orbit.json", DocumentKind::orbit},
        {"phi.json", DocumentKind::induced_field},
    };
    for (const auto& [name, kind] : fixtures) {
        CAPTURE(name);
        CHECK(document_kind(parse_document(read_text_file(data(name)))) == kind);
        CHECK(roundtrip(data(name)));
    }
}

TEST_CASE("generated roundtrips keep every bit") {
    std::mt19937_64 rng(61);
    const SphereFunction f = random_sphere_function(5, rng);
    CHECK(roundtrip_text(to_json(f).dump()));
    CHECK(roundtrip_text(to_json(dual_of(f)).dump()));
    CHECK(roundtrip_text(to_json(BMSElement{SL2C::random(rng), f}).dump()));

    const DirectionSet dirs = DirectionSet::standard();
    HermiteSeries psi = random_series(dirs, 3, 3, rng);
    psi.coeffs()[1] = cplx(-0.0, 1e-310);
    CHECK(roundtrip_text(to_json(psi).dump()));
    const HermiteSeries back = hermite_series_from_json(parse_document(to_json(psi).dump()));
    CHECK(std::signbit(back.coeffs()[1].real()));
    CHECK(back.coeffs()[1].imag() == 1e-310);

    CHECK(roundtrip_text(to_json(random_state(dirs, 3, rng)).dump()));
    const OrbitQuadrature o = build_orbit(OrbitKind::massless, 2.0, 1.0, 3, 2);
    CHECK(roundtrip_text(to_json(o).dump()));
    OrbitField of{o, InducedField{std::vector<cplx>(o.size(), cplx(0.25, -1.0 / 3.0))}};
    CHECK(roundtrip_text(to_json(of).dump()));
}

TEST_CASE("malformed documents report a path") {
    CHECK_THROWS_AS(roundtrip(data("truncated.json")), SchemaError);
    CHECK(schema_path(read_text_file(data("truncated.json"))) == "$");
    CHECK_THROWS_AS(roundtrip(data("corrupt.json")), SchemaError);
    CHECK(schema_path(read_text_file(data("corrupt.json"))) == "$.coeffs[1][1]");

    CHECK(schema_path(R"({"L_max": 1, "coeffs": [[2, 0, 1.0]]})") == "$.coeffs[0]");
    CHECK(schema_path(R"({"L_max": 1, "coeffs": [[0, 0, 1.0], [0, 0, 2.0]]})") == "$.coeffs[1]");
    CHECK(schema_path(R"({"L_max": 1})").rfind("$", 0) == 0);
    CHECK(schema_path(R"({"N": 2, "k": 2.0, "directions": [[1, 0]], "coeffs": []})") == "$.directions");
    CHECK(schema_path(R"({"N": 1, "k": 2.0, "directions": [[0,0],[1,-1],[1,0],[1,1]], "coeffs": [[[2,0,0,0], 1, 0]]})") ==
          "$.coeffs[0][0]");
    CHECK(schema_path(R"({"orbit": {"kind": "massive", "param": 1.0, "chi_max": 1.0, "n_chi": 2, "n_sphere": 1}, "values": []})") ==
          "$.values");
    CHECK(schema_path(R"({"kind": "tachyonic", "param": 1.0, "chi_max": 1.0, "n_chi": 2, "n_sphere": 1})") == "$.kind");
    CHECK(schema_path("[]") == "$");
    CHECK(schema_path(R"({"unrelated": 1})") == "$");
}
