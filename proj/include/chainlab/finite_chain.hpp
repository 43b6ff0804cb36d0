#pragma once

// Direct time integration of a finite truncation of the chain, used as an
// independent check on the kernel propagator.

#include <cstdint>
#include <vector>

#include "chainlab/lattice.hpp"

namespace chainlab::finite {

enum class Boundary { fixed_zero, periodic };

struct FiniteChain {
    double omega1 = 1.0;
    Boundary boundary = Boundary::fixed_zero;
    std::vector<double> q;
    std::vector<double> p;

    std::size_t size() const { return q.size(); }
};

/// Validated constructor: size >= 3, finite entries, omega1 > 0.
FiniteChain make_chain(std::vector<double> q, std::vector<double> p, double omega1,
                       Boundary boundary = Boundary::fixed_zero);

/// Chain of `size` sites with the window's sites copied in, site 0 of the
/// lattice mapped to index size / 2.
FiniteChain embed(const LatticeWindow& q0, const LatticeWindow& p0, std::size_t size,
                  double omega1, Boundary boundary = Boundary::fixed_zero);

/// Lattice site carried by chain index i under `embed`.
inline std::int64_t site_of(const FiniteChain& c, std::size_t i) {
    return static_cast<std::int64_t>(i) - static_cast<std::int64_t>(c.size() / 2);
}

/// Lattice sites [lo, hi] of the chain's positions.
LatticeWindow extract(const FiniteChain& chain, IndexRange range);

/// 1/2 sum p^2 + omega1^2/2 sum (q_{k+1} - q_k)^2, with the boundary's bonds.
double energy(const FiniteChain& chain);

/// The quadratic invariant velocity Verlet conserves exactly for this
/// linear system: 1/2 p.p + 1/2 q.(K - dt^2/4 K^2) q, with K = -omega1^2 Delta.
double modified_energy(const FiniteChain& chain, double dt);

/// Largest |dt| accepted by default (stability margin 0.5 / omega1).
double max_step(double omega1);

/// One velocity-Verlet step. dt may be negative (backward step);
/// |dt| must lie in (0, 0.5 / omega1].
FiniteChain step_verlet(FiniteChain chain, double dt);
void step_verlet_inplace(FiniteChain& chain, double dt);

struct IntegrationResult {
    FiniteChain chain;
    std::int64_t steps = 0;
    double energy_initial = 0.0;
    double energy_final = 0.0;
    double max_relative_energy_deviation = 0.0;
};

/// Steps to t_end, shortening the last step so the final time is exact.
IntegrationResult integrate(FiniteChain chain, double dt, double t_end);

}  // namespace chainlab::finite
