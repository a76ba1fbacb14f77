#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wpdi/errors.hpp"

namespace wpdi {

struct FailureRecord {
    std::string point;
    nlohmann::ordered_json values;
};

/// Seeded-run record with pass/fail verdict. Serialized field order is
/// fixed so identical runs produce byte-identical files (modulo the wall
/// time).
struct VerificationReport {
    std::string command;
    std::map<std::string, std::string> inputs;
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
    double max_abs_residual = 0.0;
    std::vector<FailureRecord> failures;
    bool pass = false;
    std::int64_t wall_time_ms = 0;
};

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = v;
    j["inputs"] = inputs;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["max_abs_residual"] = r.max_abs_residual;
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    const std::size_t limit = std::min<std::size_t>(r.failures.size(), 100);
    for (std::size_t i = 0; i < limit; ++i) {
        nlohmann::ordered_json f;
        f["point"] = r.failures[i].point;
        f["values"] = r.failures[i].values;
        failures.push_back(std::move(f));
    }
    j["failures"] = failures;
    j["pass"] = r.pass;
    j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

inline void emit_report(const VerificationReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open report path: " + path);
    out << to_json(r).dump(2) << "\n";
    if (!out) throw IoError("failed writing report: " + path);
}

}  // namespace wpdi
