#include <doctest.h>

#include <cmath>

#include "chainlab/bounds.hpp"
#include "chainlab/errors.hpp"

using namespace chainlab;

TEST_SUITE("bounds") {

TEST_CASE("gamma root") {
    const auto& g = bounds::solve_gamma();
    CHECK(std::abs(g.gamma - 3.591121476668622136649) <= 1e-14);
    CHECK(std::abs(g.residual) <= 1e-12);
    CHECK(std::abs((1 / g.gamma) * std::exp(1 / g.gamma) - std::exp(-1.0)) <= 1e-12);
    CHECK(std::abs(std::exp(1 / g.gamma) * (1 / g.gamma) * std::exp(1.0) - 1.0) <= 1e-12);
    CHECK(std::abs(g.gamma - std::exp(1 + 1 / g.gamma)) <= 1e-10);
    CHECK(&bounds::solve_gamma() == &g);
}

TEST_CASE("upper envelope") {
    CHECK(bounds::upper_envelope(0.7, 0.0, 1.0) == 2.0);
    CHECK(bounds::upper_envelope(1.0, 42.0, 0.0) == 0.0);
    CHECK(std::abs(bounds::upper_envelope(1.0, 100.0, 1.0) - 28.79970700089320803636) <= 1e-12);
    CHECK(bounds::upper_envelope(1.0, 100.0, 3.0) == doctest::Approx(3 * bounds::upper_envelope(1.0, 100.0, 1.0)));
    double prev = 0;
    for (double t = 0; t < 50; t += 0.5) {
        const double e = bounds::upper_envelope(0.5, t, 1.0);
        CHECK(e >= prev);
        prev = e;
    }
    CHECK_THROWS_AS(bounds::upper_envelope(1.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bounds::upper_envelope(1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("verify_upper_bound") {
    const std::vector<double> grid{1, 10, 100};
    CHECK_THROWS_AS(bounds::verify_upper_bound(0, 0.5, grid, 1), DomainError);
    bounds::UpperBoundOptions zero;
    zero.sampler = bounds::UnitSampler::zero;
    const auto z = bounds::verify_upper_bound(1, 0.5, grid, 1, zero);
    CHECK(z.passed());
    CHECK(z.metrics.at("worst_ratio") == 0.0);

    const auto r = bounds::verify_upper_bound(20, 0.5, grid, 3);
    CHECK(r.passed());
    CHECK(r.metrics.at("worst_ratio") > 0.0);
    CHECK(r.metrics.at("worst_ratio") <= 1.0);
    bounds::UpperBoundOptions uni;
    uni.sampler = bounds::UnitSampler::uniform_pm1;
    CHECK(bounds::verify_upper_bound(20, 0.5, grid, 3, uni).passed());
    CHECK(r.to_json() == bounds::verify_upper_bound(20, 0.5, grid, 3).to_json());
}

TEST_CASE("cos norm scan") {
    CHECK_THROWS_AS(bounds::cos_norm_scan(0.5, std::vector<double>{0.0}), DomainError);
    CHECK_THROWS_AS(bounds::cos_norm_scan(0.5, std::vector<double>{10.0, 100.0}), DomainError);
    CHECK_THROWS_AS(bounds::cos_norm_scan(0.5, std::vector<double>{100.0, 10.0, 1000.0}), DomainError);
    const auto scan = bounds::cos_norm_scan(0.5, std::vector<double>{10.0, 100.0, 1000.0});
    const double a = scan.report.metrics.at("a_hat"), b = scan.report.metrics.at("b_hat");
    CHECK(a > 0);
    CHECK(a <= b);
    CHECK(scan.table.size() == 3);
}

TEST_CASE("ols slope") {
    const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    CHECK(bounds::ols_slope(x, y) == doctest::Approx(2.0).epsilon(1e-15));
}

}
