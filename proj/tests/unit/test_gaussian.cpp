#include <doctest.h>

#include <cmath>

#include "chainlab/bessel.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/gaussian.hpp"

using namespace chainlab;
using namespace chainlab::gaussian;

TEST_SUITE("gaussian") {

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::abs(normal_cdf(1.0) - 0.8413447460685429485852) <= 1e-15);
    CHECK(std::abs(normal_cdf(-3.0) - 0.001349898031630094526652) <= 1e-15);
}

TEST_CASE("sup bound p") {
    for (double a : {-1.0, 0.0, 0.7, 2.0}) CHECK(sup_bound_p(0.0, a) == normal_cdf(a));
    CHECK(std::abs(sup_bound_p(0.1, 1.0) - 0.9428798873686086544688806897720246514745) <= 1e-14);
    CHECK(std::abs(sup_bound(0.1, 1.0, 20) - 0.6915907199966464928754198918490296791283) <= 1e-13);
    for (double d = 0.0; d < 0.45; d += 0.05) {
        CHECK(sup_bound_p(d + 0.05, 1.0) > sup_bound_p(d, 1.0));
        CHECK(sup_bound_p(d, 1.1) > sup_bound_p(d, 1.0));
    }
    for (int n = 2; n < 40; ++n) CHECK(sup_bound(0.1, 1.0, n + 1) > sup_bound(0.1, 1.0, n));
    CHECK_THROWS_AS(sup_bound_p(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(sup_bound_p(-0.1, 1.0), DomainError);
}

TEST_CASE("j0 agrees with the recurrence below and beyond the switch") {
    for (double x : {0.0, 0.3, 17.0, 999.0, 5000.0, 9999.0, 10001.0, 20000.0}) {
        CHECK(std::abs(gaussian::j0(x) - bessel::bessel_j(0, x)) <= 1e-13);
    }
    CHECK(gaussian::j0(-4.0) == gaussian::j0(4.0));
    // the asymptotic branch is accurate well below where it is used
    CHECK(std::abs(gaussian::j0(2e4) - bessel::bessel_j(0, 2e4)) <= 1e-15);
}

TEST_CASE("draw order interleaves signs") {
    CHECK(draw_slot(0) == 0);
    CHECK(draw_slot(1) == 1);
    CHECK(draw_slot(-1) == 2);
    CHECK(draw_slot(2) == 3);
    CHECK(draw_slot(-2) == 4);
}

TEST_CASE("sample_X basics") {
    const std::vector<double> origin{0.0};
    const auto x = sample_X(origin, 40, 9);
    const auto y = sample_X(origin, 80, 9);
    CHECK(x.values == y.values);
    CHECK(x.tail_mass == 0.0);
    CHECK_THROWS_AS(sample_X(std::vector<double>{50.0}, 60, 1), PreconditionError);

    const std::vector<double> grid{0.0, 3.0, 10.0, 25.0};
    const auto a = sample_X(grid, 70, 4);
    const auto b = sample_X(grid, 140, 4);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-6);
    CHECK(a.tail_mass <= 1e-12);
}

TEST_CASE("covariance study") {
    const std::vector<double> lags{0.0, 1.0, 4.0};
    const auto st = covariance_study(lags, 2.0, 60, 6000, 3);
    CHECK(st.report.passed());
    for (const auto& r : st.rows) {
        CHECK(std::abs(r.empirical - gaussian::j0(r.lag)) <= 4 * r.se);
        CHECK(std::abs(r.variance - 1.0) <= 4 / std::sqrt(2.0 * 6000) * 2);
    }
    // stationarity: same lag from a different base
    const auto shifted = covariance_study(lags, 7.0, 60, 6000, 3);
    for (std::size_t i = 0; i < lags.size(); ++i) {
        CHECK(std::abs(st.rows[i].empirical - shifted.rows[i].empirical) <= 4 * std::hypot(st.rows[i].se, shifted.rows[i].se));
    }
}

TEST_CASE("grid spec") {
    const auto spec = make_grid_spec(1.0, 0.1, 20);
    CHECK(spec.eps_prime == doctest::Approx(0.005));
    CHECK(spec.grid_spacing >= std::pow(spec.eps_prime, -3) * (1 - 1e-12));
    const auto pts = spec.points();
    REQUIRE(pts.size() == 20);
    CHECK(pts.front() == spec.grid_spacing);
    CHECK(grid_max_offdiag(spec) <= spec.eps_prime);

    GaussianGridSpec bad = spec;
    bad.n = 1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = spec;
    bad.grid_spacing = 10.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = spec;
    bad.eps_prime = 0.01;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("sup probability") {
    const auto rep = sup_probability_mc(make_grid_spec(1.0, 0.1, 20), 2000, 5);
    CHECK(rep.passed());
    CHECK(rep.metrics.at("empirical_p") >= rep.metrics.at("bound") - 3 * rep.metrics.at("se"));
    // vacuous regime
    const auto vac = sup_probability_mc(make_grid_spec(6.0, 0.1, 2), 500, 5);
    CHECK(vac.passed());
    CHECK(vac.metrics.at("bound") < 0.01);
}

}
