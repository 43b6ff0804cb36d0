// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <map>
#include <string>

#include "chainlab/suite.hpp"

using namespace chainlab;

namespace {

// Wall-clock ceilings in seconds; criteria not listed have none.
const std::map<std::string, double> kRuntimeLimit{
    {"c01_bessel_accuracy", 10.0},
    {"c03_oracle_crosscheck", 60.0},
    {"c06_cos_norm_growth", 120.0},
};

std::string summary(const ExperimentReport& r) {
    std::string s;
    for (const auto& a : r.assertions) {
        if (a.passed) continue;
        if (!s.empty()) s += "; ";
        char buf[64];
        std::snprintf(buf, sizeof buf, " observed %.6g", a.observed);
        s += a.name + buf;
    }
    return s;
}

std::string serialize(const suite::Outcome& o) {
    std::string s = o.report.to_json().dump(2);
    for (const auto& [stem, tab] : o.tables) s += "\n--" + stem + "\n" + tab.to_string();
    return s;
}

}  // namespace

int main() {
    const suite::SuiteConfig cfg;
    int failures = 0;
    int index = 0;
    for (const auto& c : suite::criteria()) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        const auto outcome = c.run(cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = outcome.report.passed();
        std::string why = summary(outcome.report);
        if (const auto it = kRuntimeLimit.find(c.id); it != kRuntimeLimit.end() && secs >= it->second) {
            ok = false;
            why += (why.empty() ? "" : "; ") + std::string("runtime over limit");
        }
        failures += ok ? 0 : 1;
        std::printf("[%s] C%02d %-24s %-52s %7.2fs%s%s\n", ok ? "PASS" : "FAIL", index, c.id.c_str(),
                    c.title.c_str(), secs, why.empty() ? "" : "  ", why.c_str());
        std::fflush(stdout);
    }

    const auto start = std::chrono::steady_clock::now();
    const std::string first = serialize(suite::run_suite(cfg));
    const std::string second = serialize(suite::run_suite(cfg));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool same = first == second;
    failures += same ? 0 : 1;
    std::printf("[%s] C12 %-24s %-52s %7.2fs  %zu bytes compared\n", same ? "PASS" : "FAIL", "c12_reproducibility",
                "Full suite byte-identical across two runs", secs, first.size());

    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
