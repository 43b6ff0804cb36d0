#pragma once

// Growth envelopes for bounded initial data: the root gamma of
// (1/gamma) e^{1/gamma} = 1/e, the sqrt(t) upper envelope and the
// cos(t sqrt(V)) norm scan.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "chainlab/lattice.hpp"
#include "chainlab/report.hpp"

namespace chainlab::bounds {

struct GammaRoot {
    double gamma = 0.0;
    double residual = 0.0;  // (1/gamma) e^{1/gamma} - e^{-1}
};

/// Bisection on [1, 10]. Computed once; every caller sees the same value.
const GammaRoot& solve_gamma();

/// (sqrt(2 gamma omega1 t) + 2) * q0_inf_norm.
double upper_envelope(double omega1, double t, double q0_inf_norm);

enum class UnitSampler { rademacher, uniform_pm1, zero };

struct UpperBoundOptions {
    UnitSampler sampler = UnitSampler::rademacher;
    double eps = 1e-8;
    /// Sites |n| <= eval_half_width are evaluated; the stored window adds a
    /// light-cone margin for the largest grid time on each side.
    std::int64_t eval_half_width = 8;
};

/// Draws unit-sup random windows, evolves them and checks
/// |q(t)|_inf <= upper_envelope + eps on every grid time.
ExperimentReport verify_upper_bound(int n_samples, double omega1, std::span<const double> t_grid,
                                    std::uint64_t seed, const UpperBoundOptions& options = {});

/// max_{n in eval} |q_n(t)| / upper_envelope(omega1, t, |q0|_inf) for zero-filled q0.
double envelope_ratio(const LatticeWindow& q0, double omega1, double t, IndexRange eval,
                      double eps = 1e-8);

struct CosNormScan {
    ExperimentReport report;
    std::vector<std::pair<double, double>> table;  // (t, cos_norm)
};

/// cos_norm on each grid time; OLS slope of log(N(t) - 1) against log t and
/// the empirical constants a_hat = min (N-1)/sqrt(t), b_hat = max (N-1)/sqrt(t).
CosNormScan cos_norm_scan(double omega1, std::span<const double> t_grid, double eps = 1e-8);

/// Ordinary least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace chainlab::bounds
