#pragma once

// Structured experiment record shared by every lab module and the CLI.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace chainlab {

inline constexpr int kReportVersion = 1;

struct Assertion {
    std::string name;
    std::string relation;  // "<=", ">=", "<", ">", "in", "true"
    double observed = 0.0;
    double bound = 0.0;
    double bound_hi = 0.0;  // upper end for relation "in"
    bool passed = false;
};

struct ExperimentReport {
    std::string experiment;
    nlohmann::json config = nlohmann::json::object();
    std::map<std::string, double> metrics;
    std::vector<Assertion> assertions;
    std::vector<std::string> artifact_paths;

    bool passed() const;

    const Assertion& check_le(std::string name, double observed, double bound);
    const Assertion& check_ge(std::string name, double observed, double bound);
    const Assertion& check_lt(std::string name, double observed, double bound);
    const Assertion& check_gt(std::string name, double observed, double bound);
    const Assertion& check_in(std::string name, double observed, double lo, double hi);
    /// Boolean contract; `observed` is recorded alongside for diagnostics.
    const Assertion& check_true(std::string name, bool ok, double observed = 0.0);

    /// Appends another report's metrics and assertions under `prefix.`.
    void absorb(const ExperimentReport& other, const std::string& prefix);

    nlohmann::json to_json() const;
};

/// Non-finite doubles serialize as null.
nlohmann::json json_number(double v);

}  // namespace chainlab
