#pragma once

// Constructive lower bound: bounded initial data whose central site reaches
// order sqrt(T) at a prescribed time.
//
// Conventions. With chain time T the Bessel argument is t = 2 omega1 T and
// q_0(T) = sum_k J_{2k}(t) q_k(0). A bump lives on k in [A t, B t], so that
// nu = 2k/t ranges over [2A, 2B] inside (0, 1). The stationary-phase main
// term of J_{2k}(t) is
//     f_k(t) = sqrt(2 / (pi t sqrt(1 - nu^2))) cos(x_k - pi/4),
//     x_k = t g(nu),   g(mu) = sqrt(1 - mu^2) - mu arccos(mu),
// and the bump's support I is the set of k with x_k mod 2 pi in (0, pi/2),
// where every main term is positive.

#include <cstdint>
#include <vector>

#include "chainlab/lattice.hpp"
#include "chainlab/report.hpp"

namespace chainlab::adversarial {

inline constexpr double kDefaultA = 0.1;
inline constexpr double kDefaultB = 0.2;

/// g(mu) = sqrt(1 - mu^2) - mu arccos(mu) on [-1, 1].
double g_fn(double mu);
/// g'(mu) = -arccos(mu).
double g_prime(double mu);

struct PhasePoint {
    std::int64_t k = 0;
    double nu = 0.0;  // 2k / t
    double x = 0.0;   // t g(nu)
    double f = 0.0;   // main term f_k(t)
};

/// Main term f_k(t); requires k >= 0 and 2k/t <= 1 - 1e-6.
double f_main_term(std::int64_t k, double t);
PhasePoint phase_point(std::int64_t k, double t);

struct PlanOptions {
    double a = kDefaultA;
    double b = kDefaultB;
    /// Smallest accepted T, as a multiple of 1/omega1.
    double t_min_scaled = 50.0;
    /// +1 or -1; the bump is sign * indicator(I).
    int sign = 1;
};

struct AdversarialPlan {
    double target_T = 0.0;
    double omega1 = 0.0;
    double t = 0.0;  // Bessel argument 2 omega1 T
    double a = kDefaultA;
    double b = kDefaultB;
    int sign = 1;
    std::int64_t k_lo = 0;  // ceil(a t)
    std::int64_t k_hi = 0;  // floor(b t)
    std::vector<std::int64_t> support;  // I, sorted
    double main_term = 0.0;             // sum_{k in I} f_k(t)
    double predicted_lower = 0.0;       // main_term / 2
    double phase_eps = 0.0;             // 0.9 min_window |2 g'(nu)|

    /// sign * indicator(I) as a zero-filled window over [min I, max I].
    LatticeWindow initial_condition() const;
};

/// Enumerates k in [a t, b t] and keeps those with phase in (0, pi/2) mod 2 pi.
/// Throws ConstructionError when I comes out empty.
AdversarialPlan build_support_set(double T, double omega1, const PlanOptions& options = {});

/// Phase increments x_{k+1} - x_k over the plan's window (length k_hi - k_lo).
std::vector<double> phase_increments(const AdversarialPlan& plan);

/// Exact q_0(T) = sign * sum_{k in I} J_{2k}(t).
double central_value(const AdversarialPlan& plan);

/// Evaluates q_0(T) exactly and compares it with sqrt(T) and the main term.
ExperimentReport measure_growth(const AdversarialPlan& plan, double eps = 1e-8);

struct MultiscaleOptions {
    double safety = 1.2;
    double grid_factor = 1.1;
    double a = kDefaultA;
    double b = kDefaultB;
    double t_min_scaled = 50.0;
    /// Candidate times beyond this are treated as grid exhaustion.
    double T_max = 1e9;
};

struct MultiscaleResult {
    std::vector<double> times;                // T_1 < T_2 < ...
    std::vector<AdversarialPlan> bumps;       // bump k carries sign (-1)^(k+1)
    std::vector<double> central_values;       // full-data q_0(T_k)
    double c = 0.0;                           // q_0(T_1) / sqrt(T_1) of the first bump alone
    ExperimentReport report;

    /// Sum of the disjoint bumps as one zero-filled window.
    LatticeWindow initial_condition() const;
};

/// Greedy multi-scale construction. Each T_{k+1} is `safety` times the
/// smallest grid value T_k * grid_factor^j satisfying
///   support disjointness  b t_k < a t_{k+1},
///   far-tail control      e^{alpha+1} alpha < 1, alpha = omega1 T_k / ceil(a t_{k+1}),
///   accumulation control  sum_{i<=k} sqrt((b - a) t_i + 1) + 1 < (c/2) sqrt(T_{k+1}).
MultiscaleResult build_multiscale(double T1, int count, double omega1,
                                  const MultiscaleOptions& options = {});

}  // namespace chainlab::adversarial
