#include <doctest.h>

#include <cmath>
#include <random>

#include "chainlab/bessel.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/finite_chain.hpp"
#include "chainlab/propagator.hpp"

using namespace chainlab;
using namespace chainlab::finite;

namespace {

FiniteChain random_chain(std::size_t n, double omega1, Boundary b, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> q(n), p(n);
    for (auto& x : q) x = u(gen);
    for (auto& x : p) x = u(gen);
    return make_chain(q, p, omega1, b);
}

}  // namespace

TEST_SUITE("finite_chain") {

TEST_CASE("zero state stays zero") {
    auto c = make_chain(std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), 1.0);
    c = step_verlet(c, 0.1);
    for (double x : c.q) CHECK(x == 0.0);
    for (double x : c.p) CHECK(x == 0.0);
}

TEST_CASE("one step from a delta") {
    for (double omega1 : {0.5, 1.0, 3.0}) {
        const double dt = 0.01;
        const auto c0 = embed(LatticeWindow::delta(0), LatticeWindow::zeros({0, 0}), 33, omega1);
        const auto c1 = step_verlet(c0, dt);
        const auto q = extract(c1, {0, 0});
        CHECK(q[0] == doctest::Approx(1.0 - omega1 * omega1 * dt * dt).epsilon(1e-14));
    }
}

TEST_CASE("step size limits") {
    auto c = random_chain(8, 2.0, Boundary::periodic, 1);
    CHECK(max_step(2.0) == 0.25);
    CHECK_THROWS_AS(step_verlet(c, 0.3), DomainError);
    CHECK_THROWS_AS(step_verlet(c, 0.0), DomainError);
    CHECK_NOTHROW(step_verlet(c, -0.2));
    CHECK_THROWS_AS(make_chain({1.0, 2.0}, {0.0, 0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(make_chain({1.0, 2.0, NAN}, {0.0, 0.0, 0.0}, 1.0), DomainError);
}

TEST_CASE("energy over 1e4 steps") {
    auto c = random_chain(256, 1.0, Boundary::periodic, 2);
    const double dt = 1e-3;
    const double e0 = energy(c), m0 = modified_energy(c, dt);
    double worst_phys = 0, worst_mod = 0;
    for (int i = 0; i < 10000; ++i) {
        step_verlet_inplace(c, dt);
        worst_phys = std::max(worst_phys, std::abs(energy(c) - e0) / e0);
        worst_mod = std::max(worst_mod, std::abs(modified_energy(c, dt) - m0) / m0);
    }
    // the shadow energy is conserved to rounding; the physical one only to O(dt^2)
    CHECK(worst_mod <= 1e-8);
    CHECK(worst_phys <= 1e-5);
}

TEST_CASE("reversibility over 1000 steps") {
    const auto c0 = random_chain(128, 1.0, Boundary::fixed_zero, 3);
    auto c = c0;
    for (int i = 0; i < 1000; ++i) step_verlet_inplace(c, 1e-2);
    for (int i = 0; i < 1000; ++i) step_verlet_inplace(c, -1e-2);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(std::abs(c.q[i] - c0.q[i]) <= 1e-12);
        CHECK(std::abs(c.p[i] - c0.p[i]) <= 1e-12);
    }
}

TEST_CASE("integrate to zero is the identity") {
    const auto c0 = random_chain(16, 1.0, Boundary::periodic, 4);
    const auto r = integrate(c0, 1e-3, 0.0);
    CHECK(r.steps == 0);
    CHECK(r.chain.q == c0.q);
    CHECK(r.chain.p == c0.p);
}

TEST_CASE("partial last step lands on t_end") {
    const auto c0 = embed(LatticeWindow::delta(0), LatticeWindow::zeros({0, 0}), 512, 1.0);
    const auto r = integrate(c0, 0.3, 1.0);
    CHECK(r.steps == 4);
    const auto fine = integrate(c0, 1e-4, 1.0);
    CHECK(std::abs(extract(r.chain, {0, 0})[0] - extract(fine.chain, {0, 0})[0]) < 0.05);
}

TEST_CASE("delta data follows J0 at the centre") {
    const auto c0 = embed(LatticeWindow::delta(0), LatticeWindow::zeros({0, 0}), 4096, 0.5);
    const auto r = integrate(c0, 1e-3 / 0.5, 20.0);
    CHECK(std::abs(extract(r.chain, {0, 0})[0] - bessel::bessel_j(0, 20.0)) <= 1e-6);
}

TEST_CASE("boundary independence inside the light cone") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(41);
    for (auto& x : v) x = u(gen);
    const LatticeWindow q0(-20, v);
    const auto p0 = LatticeWindow::zeros(q0.range());
    const auto a = integrate(embed(q0, p0, 512, 1.0, Boundary::fixed_zero), 1e-2, 20.0);
    const auto b = integrate(embed(q0, p0, 512, 1.0, Boundary::periodic), 1e-2, 20.0);
    const auto qa = extract(a.chain, {-100, 100}), qb = extract(b.chain, {-100, 100});
    for (std::int64_t n = -100; n <= 100; ++n) CHECK(std::abs(qa[n] - qb[n]) <= 1e-9);
}

TEST_CASE("agrees with the propagator on random data") {
    std::mt19937_64 gen(10);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(101);
    for (auto& x : v) x = u(gen);
    const LatticeWindow q0(-50, v);
    const auto r = integrate(embed(q0, LatticeWindow::zeros(q0.range()), 1024, 1.0), 2.5e-4, 5.0);
    const auto exact = propagator::evolve(q0, 1.0, 5.0, 1e-10, IndexRange{-60, 60});
    const auto approx = extract(r.chain, {-60, 60});
    for (std::int64_t n = -60; n <= 60; ++n) CHECK(std::abs(exact[n] - approx[n]) <= 1e-6);
}

TEST_CASE("embedding needs room") {
    CHECK_THROWS_AS(embed(LatticeWindow(-10, std::vector<double>(21, 1.0)), LatticeWindow::zeros({0, 0}), 8, 1.0),
                    PreconditionError);
}

}
