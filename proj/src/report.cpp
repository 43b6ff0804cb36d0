#include "chainlab/report.hpp"

#include <algorithm>
#include <cmath>

namespace chainlab {

namespace {

const Assertion& push(ExperimentReport& r, std::string name, std::string relation,
                      double observed, double bound, double bound_hi, bool ok) {
    r.assertions.push_back({std::move(name), std::move(relation), observed, bound, bound_hi,
                            ok && !std::isnan(observed)});
    return r.assertions.back();
}

}  // namespace

bool ExperimentReport::passed() const {
    return std::all_of(assertions.begin(), assertions.end(),
                       [](const Assertion& a) { return a.passed; });
}

const Assertion& ExperimentReport::check_le(std::string name, double observed, double bound) {
    return push(*this, std::move(name), "<=", observed, bound, bound, observed <= bound);
}

const Assertion& ExperimentReport::check_ge(std::string name, double observed, double bound) {
    return push(*this, std::move(name), ">=", observed, bound, bound, observed >= bound);
}

const Assertion& ExperimentReport::check_lt(std::string name, double observed, double bound) {
    return push(*this, std::move(name), "<", observed, bound, bound, observed < bound);
}

const Assertion& ExperimentReport::check_gt(std::string name, double observed, double bound) {
    return push(*this, std::move(name), ">", observed, bound, bound, observed > bound);
}

const Assertion& ExperimentReport::check_in(std::string name, double observed, double lo,
                                            double hi) {
    return push(*this, std::move(name), "in", observed, lo, hi, observed >= lo && observed <= hi);
}

const Assertion& ExperimentReport::check_true(std::string name, bool ok, double observed) {
    return push(*this, std::move(name), "true", observed, 1.0, 1.0, ok);
}

void ExperimentReport::absorb(const ExperimentReport& other, const std::string& prefix) {
    for (const auto& [k, v] : other.metrics) metrics[prefix + "." + k] = v;
    for (Assertion a : other.assertions) {
        a.name = prefix + "." + a.name;
        assertions.push_back(std::move(a));
    }
    for (const auto& p : other.artifact_paths) artifact_paths.push_back(p);
}

nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["report_version"] = kReportVersion;
    j["experiment"] = experiment;
    j["config"] = config;
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [k, v] : metrics) m[k] = json_number(v);
    j["metrics"] = std::move(m);
    nlohmann::json as = nlohmann::json::array();
    for (const auto& a : assertions) {
        nlohmann::json e;
        e["name"] = a.name;
        e["relation"] = a.relation;
        e["observed"] = json_number(a.observed);
        if (a.relation == "in") {
            e["bound"] = {json_number(a.bound), json_number(a.bound_hi)};
        } else if (a.relation != "true") {
            e["bound"] = json_number(a.bound);
        }
        e["passed"] = a.passed;
        as.push_back(std::move(e));
    }
    j["assertions"] = std::move(as);
    j["artifact_paths"] = artifact_paths;
    j["passed"] = passed();
    return j;
}

}  // namespace chainlab
