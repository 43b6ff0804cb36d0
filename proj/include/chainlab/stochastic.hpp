#pragma once

// i.i.d. random initial data with p(0) = 0. Everything here runs on the
// rescaled clock tau = 2 omega1 t, where the central site is
//     q_0(tau) = sum_n q_n(0) J_{2n}(tau),
// and converts chain times at the interface.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chainlab/lattice.hpp"
#include "chainlab/report.hpp"

namespace chainlab::stochastic {

enum class Distribution { rademacher, uniform_pm1, gaussian };

std::string to_string(Distribution d);
/// Accepts "rademacher", "uniform_pm1", "gaussian"; DomainError otherwise.
Distribution parse_distribution(const std::string& name);

struct EnsembleSpec {
    Distribution distribution = Distribution::rademacher;
    double sigma2 = 1.0;
    std::int64_t n_samples = 10000;
    std::uint64_t seed = 1;
    /// Stored sites [-W, W]. 0 means "the light-cone requirement of the run".
    std::int64_t window_half_width = 0;
};

/// Throws DomainError on sigma2 <= 0, n_samples < 1 or a negative window.
void validate(const EnsembleSpec& spec);

/// Certified half-width for evaluating q_0 up to rescaled time tau.
std::int64_t required_half_width(double tau, double eps = 1e-8);

/// Value of q_n(0) for one sample: a pure function of (seed, sample, n).
double draw_site(const EnsembleSpec& spec, std::uint64_t sample_index, std::int64_t n);

/// Sample `sample_index` on [-W, W], zero outside. W must be positive here.
LatticeWindow sample_initial(const EnsembleSpec& spec, std::int64_t sample_index);

/// cov(q_0(t + s), q_0(t)) = (sigma2 / 2) (J_0(2t + s) + J_0(s)), rescaled clock.
double exact_covariance(double t, double s, double sigma2);
/// (sigma2 / 2) J_0(s).
double limit_covariance(double s, double sigma2);

/// Exact sum_n J_{2n}(t1) J_{2n}(t2) over n in Z, by direct summation.
double even_product_sum(double t1, double t2);

struct CovariancePair {
    double t = 0.0;  // chain time
    double s = 0.0;  // chain-time lag
    double empirical = 0.0;
    double standard_error = 0.0;
    double exact = 0.0;
    double limit = 0.0;
};

struct CovarianceReport {
    std::vector<CovariancePair> pairs;
    ExperimentReport report;
};

/// Monte Carlo cov(q_0(t + s), q_0(t)) for each s, against the exact and
/// limiting forms. Needs n_samples >= 2.
CovarianceReport empirical_covariance(const EnsembleSpec& spec, double omega1, double t,
                                      std::span<const double> s_grid, double eps = 1e-8);

/// Kolmogorov-Smirnov distance of q_0(t) / sqrt(Var q_0(t)) from N(0, 1);
/// passes when the distance is at most 1.63 / sqrt(n_samples).
ExperimentReport normality_check(const EnsembleSpec& spec, double omega1, double t,
                                 double eps = 1e-8);

struct SupGrowthRow {
    double threshold = 0.0;
    double horizon = 0.0;
    double fraction = 0.0;  // share of paths with max_{t <= H} q_0 >= a
    double se = 0.0;
    double inf_fraction = 0.0;  // share with min_{t <= H} q_0 <= -a
    double inf_se = 0.0;
};

struct SupGrowthResult {
    std::vector<SupGrowthRow> rows;  // threshold-major, horizons ascending
    ExperimentReport report;

    const SupGrowthRow& row(std::size_t threshold_index, std::size_t horizon_index) const;
    std::size_t horizon_count = 0;
};

/// Running max/min of q_0 on the chain-time grid t_j = j dt up to each
/// horizon. Horizons must be positive and strictly increasing.
SupGrowthResult sup_growth_mc(const EnsembleSpec& spec, double omega1,
                              std::span<const double> thresholds,
                              std::span<const double> horizons, double dt = 0.5,
                              double eps = 1e-8);

}  // namespace chainlab::stochastic
