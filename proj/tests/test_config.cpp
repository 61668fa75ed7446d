#include <doctest.h>

#include "polycomb/config.hpp"
#include "polycomb/errors.hpp"
#include "test_util.hpp"

using namespace polycomb;
using nlohmann::json;

namespace {

LoadedConfig load(const json& j) {
    return load_config(j.dump());
}

template <class E>
std::string error_of(const json& j) {
    try {
        load(j);
    } catch (const E& e) {
        return e.what();
    }
    FAIL("expected an exception");
    return {};
}

} // namespace

TEST_CASE("example 1 fixture loads") {
    const auto loaded = load_config_file(fixture_path("example1.json"));
    const auto& cfg = loaded.config;
    CHECK(cfg.scale.m() == 4);
    CHECK(cfg.universe.size() == 4);
    CHECK(cfg.mode == Mode::weighted);
    CHECK(std::get<WeightedConfig>(cfg.params).r == 3.0);
    CHECK(cfg.confidentiality.lattice.is_chain());
    CHECK(cfg.confidentiality.lattice.level_count() == 4);
    CHECK(cfg.confidentiality.matrix.cell("s", "o") == AccessSet{"a", "r", "w"});
    CHECK_FALSE(cfg.integrity.has_value());
    CHECK(loaded.fingerprint.size() == 64);
    CHECK(loaded.fingerprint == fingerprint(read_fixture("example1.json")));
}

TEST_CASE("example 2 fixture carries its own discretionary scale") {
    const auto cfg = load_config_file(fixture_path("example2.json")).config;
    CHECK(cfg.scale.m() == 8);
    CHECK(cfg.confidentiality.mandatory_scale.m() == 8);
    CHECK(cfg.confidentiality.discretionary_scale.m() == 4);
    CHECK(cfg.confidentiality.lattice.level_count() == 8);
}

TEST_CASE("ahp fixtures load both blocks") {
    const auto cfg = load_config_file(fixture_path("ahp_fig1.json")).config;
    CHECK(cfg.mode == Mode::ahp_fig1);
    REQUIRE(cfg.integrity.has_value());
    CHECK(cfg.integrity->direction == Direction::inverted);
    CHECK(cfg.confidentiality.direction == Direction::standard);
    const auto& p = std::get<AhpConfigFig1>(cfg.params);
    CHECK(p.r == 3.0);
    CHECK(p.r1 == 2.0);
    CHECK(p.r2 == 0.5);
    CHECK(load_config_file(fixture_path("ahp_fig2.json")).config.mode == Mode::ahp_fig2);
}

TEST_CASE("fingerprint is stable and sensitive to any byte") {
    const auto bytes = read_fixture("example1.json");
    CHECK(fingerprint(bytes) == fingerprint(bytes));
    CHECK(fingerprint(bytes) != fingerprint(bytes + " "));
    CHECK(fingerprint("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("dangling subject label names the subject") {
    auto j = fixture_json("example1.json");
    j["confidentiality"]["subject_labels"]["s"] = "5";
    const auto msg = error_of<ValidationError>(j);
    CHECK(msg.find("'s'") != std::string::npos);
    CHECK(msg.find("'5'") != std::string::npos);
}

TEST_CASE("mode mismatches") {
    auto j = fixture_json("ahp_fig1.json");
    SUBCASE("ahp_fig1 with only r") {
        j["combiner"] = {{"ahp_fig1", {{"r", 3}}}};
        CHECK(error_of<ModeMismatchError>(j).find("r1") != std::string::npos);
    }
    SUBCASE("no entry for the active mode") {
        j["combiner"] = {{"weighted", {{"r", 3}}}};
        error_of<ModeMismatchError>(j);
    }
    SUBCASE("foreign parameter") {
        j["combiner"]["ahp_fig1"]["x"] = 2;
        error_of<ModeMismatchError>(j);
    }
    SUBCASE("ahp mode without integrity block") {
        j.erase("integrity");
        error_of<ModeMismatchError>(j);
    }
}

TEST_CASE("validation errors") {
    auto j = fixture_json("example1.json");
    SUBCASE("antichain lattice") {
        CHECK(error_of<ValidationError>(fixture_json("antichain.json")).find("least upper bound") !=
              std::string::npos);
    }
    SUBCASE("non-positive ratio") {
        j["combiner"]["weighted"]["r"] = 0;
        error_of<ValidationError>(j);
    }
    SUBCASE("non-integer m") {
        j["scale"]["m"] = 2.5;
        error_of<ValidationError>(j);
    }
    SUBCASE("m below one") {
        j["scale"]["m"] = 0;
        error_of<ValidationError>(j);
    }
    SUBCASE("unknown access type in matrix") {
        j["confidentiality"]["matrix"]["s:o"] = {"r", "x"};
        CHECK(error_of<ValidationError>(j).find("'x'") != std::string::npos);
    }
    SUBCASE("bad matrix key") {
        j["confidentiality"]["matrix"]["so"] = {"r"};
        error_of<ValidationError>(j);
    }
    SUBCASE("override out of range") {
        j["overrides"] = {{"s:o", 4.5}};
        error_of<ValidationError>(j);
    }
    SUBCASE("block scale above the global scale") {
        j["confidentiality"]["discretionary_scale"] = {{"m", 5}};
        error_of<ValidationError>(j);
    }
    SUBCASE("unknown key") {
        j["scael"] = 1;
        CHECK(error_of<ValidationError>(j).find("scael") != std::string::npos);
    }
    SUBCASE("unknown mode") {
        j["mode"] = "majority";
        error_of<ValidationError>(j);
    }
    SUBCASE("duplicate access types") {
        j["access_types"] = {"r", "r"};
        error_of<ValidationError>(j);
    }
    SUBCASE("cyclic order") {
        j["confidentiality"]["lattice"]["order"].push_back({"3", "0"});
        CHECK(error_of<ValidationError>(j).find("cyclic") != std::string::npos);
    }
    SUBCASE("invert_direction only on integrity") {
        j["confidentiality"]["invert_direction"] = true;
        error_of<ValidationError>(j);
    }
}

TEST_CASE("syntax errors carry line and column") {
    try {
        load_config("{\n  \"scale\": {\"m\": 4},\n  \"mode\": weighted\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() >= 11);
    }
    CHECK_THROWS_AS(load_config(""), ParseError);
    CHECK_THROWS_AS(load_config("[1, 2]"), ValidationError);
}

TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/polycomb.json"), IoError);
}

TEST_CASE("parameter access by name") {
    CombinerParams p = AhpConfigFig2{2.0, 3.0, 4.0};
    CHECK(get_parameter(p, "x1") == 3.0);
    p = with_parameter(p, "x2", 9.0);
    CHECK(std::get<AhpConfigFig2>(p).x2 == 9.0);
    CHECK_THROWS_AS(get_parameter(p, "r"), UnknownParameterError);
    CHECK_THROWS_AS(with_parameter(p, "x", -1.0), DomainError);
    CHECK(parameter_names(Mode::ahp_fig1) == std::vector<std::string>{"r", "r1", "r2"});
}
