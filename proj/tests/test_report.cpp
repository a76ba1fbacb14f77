#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wpdi/report.hpp"

using namespace wpdi;

TEST_CASE("report serializes with a fixed field order") {
    VerificationReport r;
    r.command = "identities";
    r.inputs["samples"] = "100";
    r.inputs["seed"] = "42";
    r.seed = 42;
    r.samples = 100;
    r.max_abs_residual = 1.5e-12;
    r.pass = true;
    r.wall_time_ms = 7;

    const std::string dump = to_json(r).dump();
    const char* keys[] = {"\"command\"", "\"inputs\"",   "\"seed\"", "\"samples\"",
                          "\"max_abs_residual\"", "\"failures\"", "\"pass\"", "\"wall_time_ms\""};
    std::size_t pos = 0;
    for (const char* k : keys) {
        const std::size_t found = dump.find(k, pos);
        REQUIRE(found != std::string::npos);
        pos = found;
    }
    // Top-level keys, so the nested inputs object must not satisfy the scan
    // by itself.
    CHECK(dump.rfind("\"wall_time_ms\"") > dump.rfind("\"pass\""));
}

TEST_CASE("identical reports dump identically") {
    VerificationReport a, b;
    a.command = b.command = "kato";
    a.inputs["alpha"] = b.inputs["alpha"] = "0.16";
    a.seed = b.seed = 1;
    a.max_abs_residual = b.max_abs_residual = 0.0042669999999999997;
    a.pass = b.pass = false;
    a.wall_time_ms = b.wall_time_ms = 0;
    CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("failures are truncated to the first hundred") {
    VerificationReport r;
    r.command = "sweep";
    for (int i = 0; i < 250; ++i) {
        FailureRecord f;
        f.point = "point " + std::to_string(i);
        f.values["v"] = i;
        r.failures.push_back(std::move(f));
    }
    const auto j = to_json(r);
    CHECK(j["failures"].size() == 100);
    CHECK(j["failures"][0]["point"] == "point 0");
}

TEST_CASE("emit_report writes a file and validates the path") {
    VerificationReport r;
    r.command = "abel";
    r.pass = true;
    const std::string path = "wpdi_test_report.json";
    emit_report(r, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("\"command\": \"abel\"") != std::string::npos);
    in.close();
    std::remove(path.c_str());

    CHECK_THROWS_AS(emit_report(r, "/nonexistent-dir/x.json"), IoError);
}
