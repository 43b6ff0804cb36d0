#include "chainlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chainlab/errors.hpp"
#include "chainlab/propagator.hpp"
#include "chainlab/random.hpp"

namespace chainlab::bounds {

namespace {

double gamma_equation(double g) { return std::exp(1.0 / g) / g - std::exp(-1.0); }

GammaRoot bisect_gamma() {
    double lo = 1.0;
    double hi = 10.0;
    // The left side of the equation decreases in gamma.
    if (!(gamma_equation(lo) > 0.0 && gamma_equation(hi) < 0.0)) {
        throw InternalError("solve_gamma: bracket [1, 10] does not straddle the root");
    }
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (gamma_equation(mid) > 0.0 ? lo : hi) = mid;
    }
    const double g = std::abs(gamma_equation(lo)) <= std::abs(gamma_equation(hi)) ? lo : hi;
    return {g, gamma_equation(g)};
}

double draw(UnitSampler sampler, std::uint64_t seed, std::uint64_t sample, std::int64_t site) {
    const auto idx = rng::site_index(site);
    switch (sampler) {
        case UnitSampler::rademacher:
            return rng::rademacher(seed, sample, idx);
        case UnitSampler::uniform_pm1:
            return 2.0 * rng::uniform01(seed, sample, idx) - 1.0;
        case UnitSampler::zero:
            return 0.0;
    }
    return 0.0;
}

const char* sampler_name(UnitSampler s) {
    switch (s) {
        case UnitSampler::rademacher:
            return "rademacher";
        case UnitSampler::uniform_pm1:
            return "uniform_pm1";
        case UnitSampler::zero:
            return "zero";
    }
    return "?";
}

}  // namespace

const GammaRoot& solve_gamma() {
    static const GammaRoot root = bisect_gamma();
    return root;
}

double upper_envelope(double omega1, double t, double q0_inf_norm) {
    if (!(omega1 > 0.0)) throw DomainError("upper_envelope: omega1 must be positive");
    if (!(t >= 0.0)) throw DomainError("upper_envelope: t must be nonnegative");
    if (!(q0_inf_norm >= 0.0)) throw DomainError("upper_envelope: norm must be nonnegative");
    return (std::sqrt(2.0 * solve_gamma().gamma * omega1 * t) + 2.0) * q0_inf_norm;
}

double envelope_ratio(const LatticeWindow& q0, double omega1, double t, IndexRange eval,
                      double eps) {
    if (q0.fill() != Fill::zero) {
        throw PreconditionError("envelope_ratio: q0 must be zero outside its window");
    }
    const double env = upper_envelope(omega1, t, q0.inf_norm());
    if (env == 0.0) return 0.0;
    return propagator::evolve(q0, omega1, t, eps, eval).inf_norm() / env;
}

ExperimentReport verify_upper_bound(int n_samples, double omega1, std::span<const double> t_grid,
                                    std::uint64_t seed, const UpperBoundOptions& options) {
    if (n_samples < 1) throw DomainError("verify_upper_bound: n_samples must be >= 1");
    if (t_grid.empty()) throw DomainError("verify_upper_bound: empty time grid");
    if (options.eval_half_width < 0) throw DomainError("verify_upper_bound: bad eval_half_width");

    ExperimentReport report;
    report.experiment = "upper_envelope";
    report.config = {{"n_samples", n_samples},
                     {"omega1", omega1},
                     {"t_grid", std::vector<double>(t_grid.begin(), t_grid.end())},
                     {"seed", seed},
                     {"sampler", sampler_name(options.sampler)},
                     {"eps", options.eps},
                     {"eval_half_width", options.eval_half_width}};

    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    const std::int64_t margin = propagator::light_cone_window(omega1, t_max, options.eps);
    const std::int64_t half = margin + options.eval_half_width;
    const IndexRange eval{-options.eval_half_width, options.eval_half_width};

    std::vector<double> worst_excess(t_grid.size(), -std::numeric_limits<double>::infinity());
    std::vector<double> worst_ratio(t_grid.size(), 0.0);
    for (int s = 0; s < n_samples; ++s) {
        std::vector<double> values(static_cast<std::size_t>(2 * half + 1));
        for (std::int64_t n = -half; n <= half; ++n) {
            values[static_cast<std::size_t>(n + half)] =
                draw(options.sampler, seed, static_cast<std::uint64_t>(s), n);
        }
        const LatticeWindow q0(-half, std::move(values));
        const double q_inf = q0.inf_norm();
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double env = upper_envelope(omega1, t_grid[i], q_inf);
            const double sup = propagator::evolve(q0, omega1, t_grid[i], options.eps, eval).inf_norm();
            worst_excess[i] = std::max(worst_excess[i], sup - env);
            if (env > 0.0) worst_ratio[i] = std::max(worst_ratio[i], sup / env);
        }
    }

    double overall = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        std::ostringstream key;
        key << "t=" << t_grid[i];
        report.metrics["worst_ratio." + key.str()] = worst_ratio[i];
        report.check_le("sup_minus_envelope_le_eps." + key.str(), worst_excess[i], options.eps);
        overall = std::max(overall, worst_ratio[i]);
    }
    report.metrics["worst_ratio"] = overall;
    report.metrics["gamma"] = solve_gamma().gamma;
    report.check_le("worst_ratio_le_1", overall, 1.0);
    return report;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("ols_slope: need >= 2 pairs");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw DomainError("ols_slope: degenerate abscissae");
    return sxy / sxx;
}

CosNormScan cos_norm_scan(double omega1, std::span<const double> t_grid, double eps) {
    if (t_grid.size() < 3) throw DomainError("cos_norm_scan: at least 3 grid points required");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw DomainError("cos_norm_scan: grid times must be positive");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
            throw DomainError("cos_norm_scan: grid must be strictly increasing");
        }
    }

    CosNormScan scan;
    auto& report = scan.report;
    report.experiment = "cos_norm_scan";
    report.config = {{"omega1", omega1},
                     {"t_grid", std::vector<double>(t_grid.begin(), t_grid.end())},
                     {"eps", eps}};

    std::vector<double> log_t, log_excess;
    double a_hat = std::numeric_limits<double>::infinity();
    double b_hat = 0.0;
    for (double t : t_grid) {
        const double norm = propagator::cos_norm(omega1, t, eps);
        scan.table.emplace_back(t, norm);
        const double excess = norm - 1.0;
        if (!(excess > 0.0)) {
            throw DomainError("cos_norm_scan: N(t) - 1 must be positive for the log fit");
        }
        log_t.push_back(std::log(t));
        log_excess.push_back(std::log(excess));
        a_hat = std::min(a_hat, excess / std::sqrt(t));
        b_hat = std::max(b_hat, excess / std::sqrt(t));
    }
    const double slope = ols_slope(log_t, log_excess);
    report.metrics["slope"] = slope;
    report.metrics["a_hat"] = a_hat;
    report.metrics["b_hat"] = b_hat;
    report.check_gt("a_hat_positive", a_hat, 0.0);
    report.check_le("a_hat_le_b_hat", a_hat, b_hat);
    return scan;
}

}  // namespace chainlab::bounds
