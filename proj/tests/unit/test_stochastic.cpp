#include <doctest.h>

#include <cmath>
#include <random>

#include "chainlab/bessel.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/stochastic.hpp"

using namespace chainlab;
using namespace chainlab::stochastic;
using bessel::bessel_j;

TEST_SUITE("stochastic") {

TEST_CASE("exact covariance") {
    CHECK(exact_covariance(0, 0, 2.5) == doctest::Approx(2.5));
    CHECK(exact_covariance(30, 0, 1) == doctest::Approx(0.5 * (1 + bessel_j(0, 60))));
    for (double s : {0.0, 1.0, 5.0}) {
        const double t = 400;
        CHECK(std::abs(exact_covariance(t, s, 1) - limit_covariance(s, 1)) <= 0.5 * std::pow(2 * t, -1.0 / 3));
    }
}

TEST_CASE("even-order product sums") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0, 300);
    for (int i = 0; i < 50; ++i) {
        const double t1 = u(gen), t2 = u(gen);
        CHECK(std::abs(even_product_sum(t1, t2) - 0.5 * (bessel_j(0, t1 + t2) + bessel_j(0, t1 - t2))) <= 1e-9);
    }
}

TEST_CASE("initial data") {
    EnsembleSpec spec;
    spec.window_half_width = 30;
    const auto a = sample_initial(spec, 17), b = sample_initial(spec, 17);
    CHECK(a.values() == b.values());
    CHECK(a.range().lo == -30);
    CHECK(a.range().hi == 30);
    for (double v : a.values()) CHECK(std::abs(v) == 1.0);
    CHECK(sample_initial(spec, 18).values() != a.values());
    CHECK_THROWS_AS(sample_initial(spec, spec.n_samples), DomainError);

    spec.distribution = Distribution::uniform_pm1;
    spec.sigma2 = 3.0;
    const auto u = sample_initial(spec, 0);
    for (double v : u.values()) CHECK(std::abs(v) <= 3.0);

    spec.distribution = Distribution::rademacher;
    spec.sigma2 = 1.0;
    double mean = 0;
    for (std::int64_t i = 0; i < 10000; ++i) mean += draw_site(spec, static_cast<std::uint64_t>(i), 3);
    CHECK(std::abs(mean / 1e4) <= 4 / std::sqrt(1e4));
}

TEST_CASE("spec validation") {
    EnsembleSpec spec;
    spec.n_samples = 1;
    CHECK_THROWS(empirical_covariance(spec, 0.5, 10.0, std::vector<double>{0.0}));
    spec.n_samples = 100;
    spec.window_half_width = 5;
    CHECK_THROWS_AS(empirical_covariance(spec, 0.5, 10.0, std::vector<double>{0.0}), PreconditionError);
    spec.sigma2 = -1;
    CHECK_THROWS_AS(validate(spec), DomainError);
    CHECK(parse_distribution("gaussian") == Distribution::gaussian);
    CHECK(to_string(Distribution::uniform_pm1) == "uniform_pm1");
    CHECK_THROWS_AS(parse_distribution("cauchy"), DomainError);
}

TEST_CASE("covariance contract at t = 10") {
    EnsembleSpec spec;
    spec.n_samples = 4000;
    const auto cov = empirical_covariance(spec, 0.5, 10.0, std::vector<double>{0.0, 1.0, 2.0});
    CHECK(cov.report.passed());
    REQUIRE(cov.pairs.size() == 3);
    for (const auto& p : cov.pairs) {
        CHECK(std::abs(p.empirical - p.exact) <= 4 * p.standard_error);
        CHECK(p.exact == doctest::Approx(exact_covariance(10.0, p.s, 1.0)));
    }
}

TEST_CASE("reproducibility and window sufficiency") {
    EnsembleSpec spec;
    spec.n_samples = 500;
    const std::vector<double> s{0.0, 2.0};
    const auto a = empirical_covariance(spec, 0.5, 30.0, s);
    const auto b = empirical_covariance(spec, 0.5, 30.0, s);
    CHECK(a.report.to_json() == b.report.to_json());
    auto wide = spec;
    wide.window_half_width = 2 * required_half_width(32.0);
    const auto c = empirical_covariance(wide, 0.5, 30.0, s);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(a.pairs[i].empirical - c.pairs[i].empirical) <= 1e-8);
}

TEST_CASE("normality") {
    EnsembleSpec gauss;
    gauss.distribution = Distribution::gaussian;
    gauss.n_samples = 4000;
    CHECK(normality_check(gauss, 0.5, 3.0).passed());
    EnsembleSpec rad;
    rad.n_samples = 4000;
    const auto control = normality_check(rad, 0.5, 0.0);
    CHECK_FALSE(control.passed());
    CHECK(control.metrics.at("ks_distance") > 0.3);
}

TEST_CASE("sup growth") {
    EnsembleSpec spec;
    spec.n_samples = 400;
    const std::vector<double> thresholds{0.0, 2.0}, horizons{10.0, 20.0, 100.0};
    const auto res = sup_growth_mc(spec, 0.5, thresholds, horizons);
    // a = 0 sits near 0.98 at H = 10 and saturates by H = 20
    CHECK(res.row(0, 0).fraction >= 0.95);
    CHECK(res.row(0, 1).fraction >= 0.99);
    CHECK(res.row(0, 2).fraction >= 0.99);
    CHECK(res.row(1, 2).fraction >= res.row(1, 0).fraction);
    CHECK(res.report.passed());
    CHECK_THROWS_AS(sup_growth_mc(spec, 0.5, thresholds, std::vector<double>{100.0, 10.0}), DomainError);
}

}
