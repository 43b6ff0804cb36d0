#include "chainlab/finite_chain.hpp"

#include <cmath>
#include <string>

#include "chainlab/errors.hpp"

namespace chainlab::finite {

namespace {

// (Delta q)_i with the chain's boundary convention.
void laplacian(const std::vector<double>& q, Boundary boundary, std::vector<double>& out) {
    const std::size_t n = q.size();
    out.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = q[i + 1] - 2.0 * q[i] + q[i - 1];
    if (boundary == Boundary::periodic) {
        out[0] = q[1] - 2.0 * q[0] + q[n - 1];
        out[n - 1] = q[0] - 2.0 * q[n - 1] + q[n - 2];
    } else {
        out[0] = q[1] - 2.0 * q[0];
        out[n - 1] = -2.0 * q[n - 1] + q[n - 2];
    }
}

void validate_step(const FiniteChain& chain, double dt) {
    if (!std::isfinite(dt) || dt == 0.0 || std::abs(dt) > max_step(chain.omega1)) {
        throw DomainError("step_verlet: |dt| must lie in (0, " +
                          std::to_string(max_step(chain.omega1)) + "]");
    }
}

}  // namespace

FiniteChain make_chain(std::vector<double> q, std::vector<double> p, double omega1,
                       Boundary boundary) {
    if (q.size() < 3) throw DomainError("FiniteChain: size must be >= 3");
    if (p.size() != q.size()) throw DomainError("FiniteChain: q and p sizes differ");
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) throw DomainError("FiniteChain: bad omega1");
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q[i]) || !std::isfinite(p[i])) {
            throw DomainError("FiniteChain: entries must be finite");
        }
    }
    return {omega1, boundary, std::move(q), std::move(p)};
}

FiniteChain embed(const LatticeWindow& q0, const LatticeWindow& p0, std::size_t size,
                  double omega1, Boundary boundary) {
    FiniteChain c = make_chain(std::vector<double>(size, 0.0), std::vector<double>(size, 0.0),
                               omega1, boundary);
    const auto centre = static_cast<std::int64_t>(size / 2);
    auto place = [&](const LatticeWindow& w, std::vector<double>& dst, const char* what) {
        for (std::int64_t n = w.first(); n <= w.last(); ++n) {
            const std::int64_t i = n + centre;
            if (i < 0 || i >= static_cast<std::int64_t>(size)) {
                throw PreconditionError(std::string("embed: ") + what + " site " +
                                        std::to_string(n) + " does not fit in the chain");
            }
            dst[static_cast<std::size_t>(i)] = w[n];
        }
    };
    place(q0, c.q, "q0");
    place(p0, c.p, "p0");
    return c;
}

LatticeWindow extract(const FiniteChain& chain, IndexRange range) {
    const auto centre = static_cast<std::int64_t>(chain.size() / 2);
    if (range.lo + centre < 0 || range.hi + centre >= static_cast<std::int64_t>(chain.size())) {
        throw PreconditionError("extract: range exceeds the chain");
    }
    std::vector<double> v(static_cast<std::size_t>(range.size()));
    for (std::int64_t n = range.lo; n <= range.hi; ++n) {
        v[static_cast<std::size_t>(n - range.lo)] = chain.q[static_cast<std::size_t>(n + centre)];
    }
    return {range.lo, std::move(v), Fill::none};
}

double energy(const FiniteChain& chain) {
    const auto& q = chain.q;
    const std::size_t n = q.size();
    double kinetic = 0.0;
    for (double v : chain.p) kinetic += v * v;
    double bonds = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) bonds += (q[i + 1] - q[i]) * (q[i + 1] - q[i]);
    if (chain.boundary == Boundary::periodic) {
        bonds += (q[0] - q[n - 1]) * (q[0] - q[n - 1]);
    } else {
        // Fixed walls at both ends.
        bonds += q[0] * q[0] + q[n - 1] * q[n - 1];
    }
    return 0.5 * kinetic + 0.5 * chain.omega1 * chain.omega1 * bonds;
}

double modified_energy(const FiniteChain& chain, double dt) {
    const double w2 = chain.omega1 * chain.omega1;
    std::vector<double> kq;
    laplacian(chain.q, chain.boundary, kq);
    for (double& v : kq) v *= -w2;  // K q
    double kinetic = 0.0, qkq = 0.0, kq2 = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        kinetic += chain.p[i] * chain.p[i];
        qkq += chain.q[i] * kq[i];
        kq2 += kq[i] * kq[i];  // q.K^2 q, K symmetric
    }
    return 0.5 * kinetic + 0.5 * (qkq - 0.25 * dt * dt * kq2);
}

double max_step(double omega1) { return 0.5 / omega1; }

void step_verlet_inplace(FiniteChain& chain, double dt) {
    validate_step(chain, dt);
    const double w2 = chain.omega1 * chain.omega1;
    thread_local std::vector<double> force;
    laplacian(chain.q, chain.boundary, force);
    const std::size_t n = chain.size();
    for (std::size_t i = 0; i < n; ++i) {
        chain.p[i] += 0.5 * dt * w2 * force[i];
        chain.q[i] += dt * chain.p[i];
    }
    laplacian(chain.q, chain.boundary, force);
    for (std::size_t i = 0; i < n; ++i) chain.p[i] += 0.5 * dt * w2 * force[i];
}

FiniteChain step_verlet(FiniteChain chain, double dt) {
    step_verlet_inplace(chain, dt);
    return chain;
}

IntegrationResult integrate(FiniteChain chain, double dt, double t_end) {
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("integrate: bad t_end");
    if (!(dt > 0.0)) throw DomainError("integrate: dt must be positive");
    validate_step(chain, dt);

    IntegrationResult res;
    res.energy_initial = energy(chain);
    const auto full_steps = static_cast<std::int64_t>(std::floor(t_end / dt));
    double remainder = t_end - static_cast<double>(full_steps) * dt;
    auto track = [&] {
        const double e = energy(chain);
        if (res.energy_initial > 0.0) {
            res.max_relative_energy_deviation =
                std::max(res.max_relative_energy_deviation,
                         std::abs(e - res.energy_initial) / res.energy_initial);
        }
    };
    for (std::int64_t s = 0; s < full_steps; ++s) {
        step_verlet_inplace(chain, dt);
        ++res.steps;
        if ((s & 63) == 63) track();
    }
    if (remainder > 1e-12 * dt) {
        step_verlet_inplace(chain, remainder);
        ++res.steps;
    }
    track();
    res.energy_final = energy(chain);
    res.chain = std::move(chain);
    return res;
}

}  // namespace chainlab::finite
