#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sqgcert/config.hpp"

using namespace sqgcert;

namespace {

std::string write_file(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / ("sqgcert_config_" + name);
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST_CASE("empty config file keeps the defaults") {
    const RunConfig c = load_config(write_file("empty", ""));
    const RunConfig d;
    CHECK(c.n == 512);
    CHECK(c.abs_tol == 1e-5);
    CHECK(c.rel_tol == 1e-5);
    CHECK(c.budget == d.budget);
    CHECK(c.mesh.n2 == 8160);
    CHECK_FALSE(c.fast);
}

TEST_CASE("config values override the defaults") {
    const RunConfig c = load_config(write_file("override", "# comment\nabs_tol=1e-4\n  n = 128  # trailing\nmesh=4,16,4\nfast=true\n"));
    CHECK(c.abs_tol == 1e-4);
    CHECK(c.rel_tol == 1e-5);
    CHECK(c.n == 128);
    CHECK(c.mesh.n1 == 4);
    CHECK(c.mesh.n2 == 16);
    CHECK(c.fast);
}

TEST_CASE("flags applied after the file win") {
    RunConfig c = load_config(write_file("precedence", "abs_tol=1e-4\n"));
    apply_config_value(c, "abs_tol", "1e-6");
    CHECK(c.abs_tol == 1e-6);
}

TEST_CASE("unknown keys list the valid ones") {
    try {
        load_config(write_file("unknown", "tolerance=1\n"));
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("tolerance") != std::string::npos);
        for (const auto& k : config_keys()) CHECK_MESSAGE(msg.find(k) != std::string::npos, k);
    }
}

TEST_CASE("malformed values are rejected") {
    RunConfig c;
    CHECK_THROWS_AS(apply_config_value(c, "n", "12x"), ConfigError);
    CHECK_THROWS_AS(apply_config_value(c, "abs_tol", ""), ConfigError);
    CHECK_THROWS_AS(apply_config_value(c, "mesh", "1,2"), ConfigError);
    CHECK_THROWS_AS(apply_config_value(c, "fast", "maybe"), ConfigError);
    CHECK_THROWS_AS(load_config(write_file("noeq", "n 12\n")), ConfigError);
}

TEST_CASE("validation") {
    RunConfig c;
    CHECK_NOTHROW(validate(c));
    c.n = 7;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.n = 8;
    c.m = 4;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.m = 6;
    c.threads = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("commands and fast mode") {
    CHECK(parse_command("certify-all") == Command::certify_all);
    CHECK(parse_command("theta-a3") == Command::theta_a3);
    CHECK_THROWS_AS(parse_command("certify"), ConfigError);
    RunConfig c;
    c.fast = true;
    apply_fast_mode(c);
    CHECK(c.mesh.n1 + c.mesh.n2 + c.mesh.n3 < 200);
    CHECK(to_parameters(c).rule == Rule::order0);
    c.fast = false;
    CHECK(to_parameters(c).rule == Rule::gl2);
}
