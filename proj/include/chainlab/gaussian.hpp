#pragma once

// The limiting stationary Gaussian process
//     X(s) = sum_n xi_n J_n(s),  xi_n i.i.d. N(0, 1),
// with covariance J_0(t - s), and the finite-grid supremum bound
//     P{max_k X(s_k) >= a} >= 1 - p^N,
//     p = sqrt((1 + delta) / (1 - delta)) Phi(a sqrt(1 + delta)),
// valid when the grid is decorrelated to |J_0(s_i - s_j)| <= eps' with N eps' <= delta.

#include <cstdint>
#include <span>
#include <vector>

#include "chainlab/report.hpp"

namespace chainlab::gaussian {

/// Standard normal CDF, 0.5 erfc(-x / sqrt 2).
double normal_cdf(double x);

/// p(delta, a); requires 0 <= delta < 1/2.
double sup_bound_p(double delta, double a);
/// 1 - p^N.
double sup_bound(double delta, double a, int n);

/// J_0 for any real argument: Miller recurrence up to |x| = 1e4, the
/// Hankel expansion beyond (absolute error below 1e-16 there).
double j0(double x);

/// Draw slot of xi_n: n = 0, +1, -1, +2, -2, ... -> 0, 1, 2, 3, 4, ...
constexpr std::uint64_t draw_slot(std::int64_t n) {
    return n > 0 ? 2 * static_cast<std::uint64_t>(n) - 1 : 2 * static_cast<std::uint64_t>(-n);
}

struct XPath {
    std::vector<double> values;
    /// max over the grid of 1 - sum_{|n| <= n_trunc} J_n(s)^2.
    double tail_mass = 0.0;
};

/// Truncated series sampler with the Bessel rows of a fixed grid cached.
class XSampler {
public:
    /// Requires n_trunc >= max |s| + 40 (PreconditionError otherwise).
    XSampler(std::span<const double> s_grid, int n_trunc);

    /// Path `sample_index` of the stream keyed by `seed`.
    XPath draw(std::uint64_t seed, std::uint64_t sample_index) const;

    std::size_t size() const { return grid_.size(); }
    double tail_mass() const { return tail_mass_; }

private:
    std::vector<double> grid_;
    int n_trunc_;
    std::vector<std::vector<double>> rows_;  // J_0..J_{n_trunc} at each grid point
    double tail_mass_ = 0.0;
};

/// One path of X on `s_grid` (sample 0 of the stream keyed by `seed`).
XPath sample_X(std::span<const double> s_grid, int n_trunc, std::uint64_t seed);

struct GaussianGridSpec {
    double a = 1.0;
    double delta = 0.1;
    int n = 20;
    double eps_prime = 0.005;
    double grid_spacing = 8e6;

    /// Throws DomainError unless N eps' <= delta < 1/2, N >= 2 and
    /// grid_spacing >= eps'^{-3}.
    void validate() const;
    /// s_k = k * grid_spacing, k = 1..N.
    std::vector<double> points() const;
};

/// eps' = delta / N and the smallest admissible spacing eps'^{-3}.
GaussianGridSpec make_grid_spec(double a, double delta, int n);

/// max_{i != j} |J_0(s_i - s_j)| at the grid points of a GaussianGridSpec.
double grid_max_offdiag(const GaussianGridSpec& spec);

/// Empirical P{max_k X(s_k) >= a} against 1 - p^N - 3 SE. The grid is far
/// beyond the reach of the truncated series, so paths are drawn exactly
/// from the grid covariance J_0(s_i - s_j) by Cholesky factorization.
ExperimentReport sup_probability_mc(const GaussianGridSpec& spec, std::int64_t n_samples,
                                    std::uint64_t seed);

struct CovarianceRow {
    double lag = 0.0;
    double empirical = 0.0;  // cov(X(s_0), X(s_0 + lag))
    double se = 0.0;
    double j0 = 0.0;
    double variance = 0.0;  // empirical Var X(s_0 + lag)
};

struct CovarianceStudy {
    std::vector<CovarianceRow> rows;
    ExperimentReport report;
};

/// Series-sampled covariance of X(base) with X(base + lag) for each lag,
/// checked against J_0(lag) within 4 SE.
CovarianceStudy covariance_study(std::span<const double> lags, double base, int n_trunc,
                                 std::int64_t n_samples, std::uint64_t seed);

}  // namespace chainlab::gaussian
