#pragma once

// Exact evolution of the infinite harmonic chain
//     q''_k = omega1^2 (q_{k+1} - 2 q_k + q_{k-1})
// through its convolution kernels
//     q_n(t) = sum_k a_k(t) q_{n-k}(0) + sum_k b_k(t) p_{n-k}(0),
// with a_k(t) = J_{2k}(2 omega1 t) and b_k the sine-kernel Fourier
// coefficient. Rows are truncated at a light-cone half-width whose tail
// mass is certified by (e^{alpha+1} alpha)^{2M}, alpha = omega1 t / M.
//
// All experiments in this project start from p(0) = 0; the velocity kernel
// b is supported for completeness.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "chainlab/lattice.hpp"
#include "chainlab/report.hpp"

namespace chainlab::propagator {

inline constexpr double kDefaultEps = 1e-8;
inline constexpr std::int64_t kMinHalfWidth = 8;

struct KernelRow {
    double omega1 = 1.0;
    double time = 0.0;
    std::int64_t half_width = 0;
    std::vector<double> a;  // a_{-M} .. a_M
    std::vector<double> b;  // b_{-M} .. b_M
    double tail_bound = 0.0;

    double a_at(std::int64_t k) const { return a[static_cast<std::size_t>(k + half_width)]; }
    double b_at(std::int64_t k) const { return b[static_cast<std::size_t>(k + half_width)]; }
};

/// (e^{alpha+1} alpha)^{2M}, alpha = omega1 t / M: bound on |q_0(t)| from unit
/// data vanishing on |n| < M. Evaluated in log space; 0 at t = 0.
double light_cone_bound(double omega1, double t, std::int64_t m);

/// Least M >= max(ceil(2 gamma omega1 t), 8) with light_cone_bound(M) <= eps.
std::int64_t light_cone_window(double omega1, double t, double eps = kDefaultEps);

/// Full kernel row (a from Bessel values, b by trapezoidal quadrature).
KernelRow kernel_row(double omega1, double t, double eps = kDefaultEps);

/// One-sided position kernel a_0..a_M = J_0, J_2, ..., J_{2M} at 2 omega1 t.
std::vector<double> position_kernel(double omega1, double t, std::int64_t half_width);

/// One-sided sine kernel b_0..b_M by trapezoidal quadrature of
/// (1/pi) int_0^pi sin(2 omega1 t sin phi) / (2 omega1 sin phi) cos(2 k phi) dphi.
std::vector<double> sine_kernel(double omega1, double t, std::int64_t half_width);

/// One-sided time derivative of a: a'_k = omega1 (J_{2k-1} - J_{2k+1})(2 omega1 t).
std::vector<double> velocity_kernel(double omega1, double t, std::int64_t half_width);

/// q(t) for p(0) = 0. `out` defaults to the input window. When q0 has
/// unknown fill, every requested site must see a full light cone inside
/// the stored window; otherwise PreconditionError names the first bad site.
LatticeWindow evolve(const LatticeWindow& q0, double omega1, double t, double eps = kDefaultEps,
                     std::optional<IndexRange> out = std::nullopt);

/// q(t) for general (q(0), p(0)).
LatticeWindow evolve(const LatticeWindow& q0, const LatticeWindow& p0, double omega1, double t,
                     double eps = kDefaultEps, std::optional<IndexRange> out = std::nullopt);

struct ChainState {
    LatticeWindow q;
    LatticeWindow p;
};

/// Position and velocity at time t (velocity via a' and b' = a).
ChainState evolve_state(const LatticeWindow& q0, const LatticeWindow& p0, double omega1, double t,
                        double eps = kDefaultEps, std::optional<IndexRange> out = std::nullopt);

/// ||cos(t sqrt(V))||_{inf -> inf} = sum_k |a_k(t)| over the certified window.
double cos_norm(double omega1, double t, double eps = kDefaultEps);

/// Checks |q(t)|_inf <= |q(0)|_2 + eps on every grid time for zero-filled q0.
ExperimentReport l2_uniform_bound_check(const LatticeWindow& q0, double omega1,
                                        std::span<const double> t_grid,
                                        double eps = kDefaultEps);

/// Thread-safe memo of kernel rows keyed by (omega1, t, eps).
class KernelCache {
public:
    explicit KernelCache(std::size_t capacity = 64) : capacity_(capacity) {}

    std::shared_ptr<const KernelRow> get(double omega1, double t, double eps = kDefaultEps);
    std::size_t size() const;
    void clear();

private:
    using Key = std::tuple<double, double, double>;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const KernelRow>> rows_;
};

}  // namespace chainlab::propagator
