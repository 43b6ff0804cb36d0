#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chainlab/adversarial.hpp"
#include "chainlab/bessel.hpp"
#include "chainlab/errors.hpp"

using namespace chainlab;
using namespace chainlab::adversarial;

TEST_SUITE("adversarial") {

TEST_CASE("phase function") {
    CHECK(g_fn(0.0) == 1.0);
    CHECK(std::abs(g_fn(1.0)) <= 1e-16);
    const double h = 1e-5;
    CHECK(std::abs((g_fn(0.5 + h) - g_fn(0.5 - h)) / (2 * h) + std::acos(0.5)) <= 1e-6);
    CHECK(g_prime(0.5) == doctest::Approx(-std::acos(0.5)));
    CHECK_THROWS_AS(g_fn(1.0001), DomainError);
    double prev = g_fn(0.0);
    for (double mu = 0.01; mu <= 1.0; mu += 0.01) {
        CHECK(g_fn(mu) <= prev);
        prev = g_fn(mu);
    }
}

TEST_CASE("main term approximates J_2k") {
    double dev_prev = 1;
    for (double t : {1e3, 1e4}) {
        const auto k = static_cast<std::int64_t>(std::llround(0.2 * t));
        const double exact = bessel::bessel_j(static_cast<int>(2 * k), t);
        const double f = f_main_term(k, t);
        const double dev = std::abs(exact - f) / std::sqrt(2 / (std::numbers::pi * t));
        CHECK(dev < dev_prev);
        dev_prev = dev;
        CHECK(dev * t < 5.0);
    }
    CHECK_THROWS_AS(f_main_term(600, 1000.0), DomainError);
}

TEST_CASE("phase point consistency") {
    const double t = 2000.0;
    for (std::int64_t k = 200; k < 400; k += 13) {
        const auto p = phase_point(k, t);
        CHECK(p.nu == doctest::Approx(2.0 * k / t));
        CHECK(p.x == doctest::Approx(t * g_fn(p.nu)));
        const double c = std::cos(p.x - std::numbers::pi / 4);
        CHECK(((p.f > 0) == (c > 0)));
        CHECK(std::abs(p.f - std::sqrt(2 / (std::numbers::pi * t * std::sqrt(1 - p.nu * p.nu))) * c) <= 1e-12);
    }
    CHECK(std::abs(f_main_term(0, 100.0) - std::sqrt(2 / (std::numbers::pi * 100.0)) * std::cos(100.0 - std::numbers::pi / 4)) <= 1e-14);
}

TEST_CASE("support set") {
    for (double T : {1e3, 1e4}) {
        const auto plan = build_support_set(T, 0.5);
        const double t = 2 * 0.5 * T;
        CHECK(plan.t == t);
        REQUIRE(!plan.support.empty());
        CHECK(plan.support.front() >= std::ceil(0.1 * t));
        CHECK(plan.support.back() <= std::floor(0.2 * t));
        for (auto k : plan.support) {
            const auto p = phase_point(k, t);
            CHECK(p.f > 0);
            double r = std::fmod(p.x, 2 * std::numbers::pi);
            if (r < 0) r += 2 * std::numbers::pi;
            CHECK(r > 0);
            CHECK(r < std::numbers::pi / 2);
        }
        for (double d : phase_increments(plan)) {
            CHECK(d < -plan.phase_eps);
            CHECK(d > -2 * plan.phase_eps);
        }
        const double frac = static_cast<double>(plan.support.size()) / t;
        CHECK(frac > 0.015);
        CHECK(frac < 0.04);
        const auto w = plan.initial_condition();
        CHECK(w.inf_norm() == 1.0);
        CHECK(plan.predicted_lower == doctest::Approx(plan.main_term / 2));
    }
    CHECK_THROWS_AS(build_support_set(10.0, 0.5), DomainError);
}

TEST_CASE("growth measurement") {
    const auto plan = build_support_set(1e4, 0.5);
    const auto rep = measure_growth(plan);
    CHECK(std::abs(rep.metrics.at("ratio_main_term") - 1.0) <= 5e-4);
    CHECK(rep.metrics.at("ratio_sqrt_T") > 0.0);
    PlanOptions neg;
    neg.sign = -1;
    const auto rneg = measure_growth(build_support_set(1e4, 0.5, neg));
    CHECK(rneg.metrics.at("ratio_sqrt_T") == doctest::Approx(-rep.metrics.at("ratio_sqrt_T")));
    CHECK(central_value(plan) == doctest::Approx(rep.metrics.at("q0_T")));
}

TEST_CASE("two-scale build") {
    const auto ms = build_multiscale(100.0, 2, 0.5);
    REQUIRE(ms.times.size() == 2);
    CHECK(ms.times[1] > ms.times[0]);
    CHECK(ms.bumps[0].support.back() < ms.bumps[1].support.front());
    CHECK(ms.central_values[0] > 0);
    CHECK(ms.central_values[1] < 0);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(std::abs(ms.central_values[k]) >= ms.c / 2 * std::sqrt(ms.times[k]));
    }
    CHECK(ms.report.passed());
    CHECK_THROWS_AS(build_multiscale(100.0, 1, 0.5), DomainError);
    MultiscaleOptions tight;
    tight.T_max = 1000.0;
    CHECK_THROWS_AS(build_multiscale(100.0, 3, 0.5, tight), ConstructionError);
}

}
