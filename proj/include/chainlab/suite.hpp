#pragma once

// The acceptance battery: one experiment per criterion, each returning a
// report plus the CSV tables it produces. Reports carry no timings, so
// reruns with the same config serialize identically.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/report.hpp"
#include "chainlab/table.hpp"

namespace chainlab::suite {

struct SuiteConfig {
    std::uint64_t seed = 20200217;
    /// Velocity-Verlet step for the oracle cross-check, in units of 1/omega1.
    double verlet_dt = 2.5e-4;
    /// Criterion ids to run; empty means all.
    std::vector<std::string> only;
};

struct Outcome {
    ExperimentReport report;
    std::vector<std::pair<std::string, table::CsvTable>> tables;  // (file stem, table)
};

struct Criterion {
    std::string id;     // e.g. "c01_bessel_accuracy"
    std::string title;  // one-line description
    std::function<Outcome(const SuiteConfig&)> run;
};

/// Criteria 1-11 in order.
const std::vector<Criterion>& criteria();

Outcome bessel_accuracy(const SuiteConfig& cfg);
Outcome identity_suite(const SuiteConfig& cfg);
Outcome oracle_crosscheck(const SuiteConfig& cfg);
Outcome l2_bound(const SuiteConfig& cfg);
Outcome upper_envelope(const SuiteConfig& cfg);
Outcome cos_norm_growth(const SuiteConfig& cfg);
Outcome adversarial_growth(const SuiteConfig& cfg);
Outcome covariance_identity(const SuiteConfig& cfg);
Outcome normality(const SuiteConfig& cfg);
Outcome gaussian_sup(const SuiteConfig& cfg);
Outcome sup_growth(const SuiteConfig& cfg);

nlohmann::json config_json(const SuiteConfig& cfg);

/// Runs the selected criteria and merges them into one "suite" report;
/// tables are prefixed with their criterion id.
Outcome run_suite(const SuiteConfig& cfg);

}  // namespace chainlab::suite
