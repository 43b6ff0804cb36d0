#include "chainlab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "chainlab/bessel.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/parallel.hpp"
#include "chainlab/random.hpp"

namespace chainlab::gaussian {

namespace {

constexpr double kAsymptoticFrom = 1e4;

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

double parity(std::int64_t n) { return (n & 1) ? -1.0 : 1.0; }

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double sup_bound_p(double delta, double a) {
    if (!(delta >= 0.0 && delta < 0.5)) throw DomainError("sup_bound_p: delta must lie in [0, 1/2)");
    if (!std::isfinite(a)) throw DomainError("sup_bound_p: a must be finite");
    return std::sqrt((1.0 + delta) / (1.0 - delta)) * normal_cdf(a * std::sqrt(1.0 + delta));
}

double sup_bound(double delta, double a, int n) {
    if (n < 1) throw DomainError("sup_bound: N must be >= 1");
    return 1.0 - std::pow(sup_bound_p(delta, a), n);
}

double j0(double x) {
    if (!std::isfinite(x)) throw DomainError("j0: argument must be finite");
    x = std::abs(x);
    if (x <= kAsymptoticFrom) return bessel::bessel_j(0, x);
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double p = 1.0 - r2 * (9.0 / 128.0 - r2 * (3675.0 / 32768.0));
    const double q = -r * (1.0 / 8.0 - r2 * (75.0 / 1024.0));
    // cos(x - pi/4) and sin(x - pi/4) without subtracting from a large x.
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double cos_chi = (c + s) / std::numbers::sqrt2;
    const double sin_chi = (s - c) / std::numbers::sqrt2;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

XSampler::XSampler(std::span<const double> s_grid, int n_trunc)
    : grid_(s_grid.begin(), s_grid.end()), n_trunc_(n_trunc) {
    if (grid_.empty()) throw DomainError("XSampler: empty grid");
    double reach = 0.0;
    for (double s : grid_) {
        if (!std::isfinite(s)) throw DomainError("XSampler: grid points must be finite");
        reach = std::max(reach, std::abs(s));
    }
    if (static_cast<double>(n_trunc) < reach + 40.0) {
        std::ostringstream msg;
        msg << "XSampler: n_trunc = " << n_trunc << " is below max|s| + 40 = " << reach + 40.0;
        throw PreconditionError(msg.str());
    }
    for (double s : grid_) {
        auto row = bessel::bessel_row(n_trunc, s).values;
        double mass = row[0] * row[0];
        for (int n = 1; n <= n_trunc; ++n) mass += 2.0 * row[static_cast<std::size_t>(n)] * row[static_cast<std::size_t>(n)];
        tail_mass_ = std::max(tail_mass_, std::abs(1.0 - mass));
        rows_.push_back(std::move(row));
    }
}

XPath XSampler::draw(std::uint64_t seed, std::uint64_t sample_index) const {
    // xi in draw order; slot 2n-1 holds xi_n, slot 2n holds xi_{-n}.
    std::vector<double> xi(2 * static_cast<std::size_t>(n_trunc_) + 1);
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] = rng::standard_normal(seed, sample_index, k);

    XPath path;
    path.tail_mass = tail_mass_;
    path.values.reserve(grid_.size());
    for (const auto& row : rows_) {
        double x = row[0] * xi[0];
        for (std::int64_t n = 1; n <= n_trunc_; ++n) {
            // J_{-n} = (-1)^n J_n.
            const double jn = row[static_cast<std::size_t>(n)];
            x += jn * (xi[draw_slot(n)] + parity(n) * xi[draw_slot(-n)]);
        }
        path.values.push_back(x);
    }
    return path;
}

XPath sample_X(std::span<const double> s_grid, int n_trunc, std::uint64_t seed) {
    return XSampler(s_grid, n_trunc).draw(seed, 0);
}

void GaussianGridSpec::validate() const {
    if (n < 2) throw DomainError("GaussianGridSpec: N must be >= 2");
    if (!(delta > 0.0 && delta < 0.5)) throw DomainError("GaussianGridSpec: delta must lie in (0, 1/2)");
    if (!(eps_prime > 0.0)) throw DomainError("GaussianGridSpec: eps' must be positive");
    if (!std::isfinite(a)) throw DomainError("GaussianGridSpec: a must be finite");
    if (static_cast<double>(n) * eps_prime > delta * (1.0 + 1e-12)) {
        throw DomainError("GaussianGridSpec: need N eps' <= delta");
    }
    if (!(grid_spacing >= std::pow(eps_prime, -3.0) * (1.0 - 1e-12))) {
        throw DomainError("GaussianGridSpec: grid_spacing must be >= eps'^-3");
    }
}

std::vector<double> GaussianGridSpec::points() const {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = (k + 1) * grid_spacing;
    return s;
}

GaussianGridSpec make_grid_spec(double a, double delta, int n) {
    GaussianGridSpec spec;
    spec.a = a;
    spec.delta = delta;
    spec.n = n;
    if (n < 2) throw DomainError("make_grid_spec: N must be >= 2");
    spec.eps_prime = delta / n;
    spec.grid_spacing = std::pow(spec.eps_prime, -3.0);
    spec.validate();
    return spec;
}

double grid_max_offdiag(const GaussianGridSpec& spec) {
    spec.validate();
    // The covariance depends on i - j only.
    double worst = 0.0;
    for (int lag = 1; lag < spec.n; ++lag) worst = std::max(worst, std::abs(j0(lag * spec.grid_spacing)));
    return worst;
}

ExperimentReport sup_probability_mc(const GaussianGridSpec& spec, std::int64_t n_samples,
                                    std::uint64_t seed) {
    spec.validate();
    if (n_samples < 2) throw DomainError("sup_probability_mc: n_samples must be >= 2");

    const int n = spec.n;
    Eigen::MatrixXd cov(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) cov(i, j) = j0((i - j) * spec.grid_spacing);
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw InternalError("sup_probability_mc: grid covariance is not positive definite");
    }
    const Eigen::MatrixXd l = llt.matrixL();

    const auto count = static_cast<std::size_t>(n_samples);
    std::vector<char> hit(count);
    parallel_for(count, [&](std::size_t i) {
        Eigen::VectorXd xi(n);
        for (int k = 0; k < n; ++k) xi(k) = rng::standard_normal(seed, i, static_cast<std::uint64_t>(k));
        const Eigen::VectorXd x = l * xi;
        hit[i] = x.maxCoeff() >= spec.a ? 1 : 0;
    });
    std::size_t hits = 0;
    for (char h : hit) hits += static_cast<std::size_t>(h);

    const double nd = static_cast<double>(count);
    const double p_hat = static_cast<double>(hits) / nd;
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / nd);
    const double p = sup_bound_p(spec.delta, spec.a);
    const double bound = 1.0 - std::pow(p, n);
    const double offdiag = grid_max_offdiag(spec);

    ExperimentReport report;
    report.experiment = "gaussian_sup_probability";
    report.config = {{"a", spec.a},           {"delta", spec.delta},
                     {"N", spec.n},           {"eps_prime", spec.eps_prime},
                     {"grid_spacing", spec.grid_spacing}, {"n_samples", n_samples},
                     {"seed", seed}};
    report.metrics["empirical_p"] = p_hat;
    report.metrics["se"] = se;
    report.metrics["p"] = p;
    report.metrics["bound"] = bound;
    report.metrics["max_offdiag_cov"] = offdiag;
    report.check_le("grid_premise_offdiag_le_eps_prime", offdiag, spec.eps_prime);
    report.check_ge("empirical_ge_bound_minus_3se", p_hat, bound - 3.0 * se);
    return report;
}

CovarianceStudy covariance_study(std::span<const double> lags, double base, int n_trunc,
                                 std::int64_t n_samples, std::uint64_t seed) {
    if (lags.empty()) throw DomainError("covariance_study: empty lag list");
    if (n_samples < 2) throw DomainError("covariance_study: n_samples must be >= 2");
    std::vector<double> grid{base};
    for (double lag : lags) grid.push_back(base + lag);
    const XSampler sampler(grid, n_trunc);

    const auto count = static_cast<std::size_t>(n_samples);
    const std::size_t m = grid.size();
    std::vector<double> x(count * m);
    parallel_for(count, [&](std::size_t i) {
        const auto path = sampler.draw(seed, i);
        std::copy(path.values.begin(), path.values.end(), x.begin() + static_cast<std::ptrdiff_t>(i * m));
    });

    CovarianceStudy study;
    auto& report = study.report;
    report.experiment = "gaussian_covariance";
    report.config = {{"lags", std::vector<double>(lags.begin(), lags.end())},
                     {"base", base},
                     {"n_trunc", n_trunc},
                     {"n_samples", n_samples},
                     {"seed", seed}};
    report.metrics["tail_mass"] = sampler.tail_mass();

    // X is centred by construction, so second moments are taken about 0.
    const double nd = static_cast<double>(count);
    for (std::size_t j = 1; j < m; ++j) {
        double sum = 0.0, sum_sq = 0.0, var = 0.0, var_sq = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double z = x[i * m] * x[i * m + j];
            sum += z;
            sum_sq += z * z;
            const double v = x[i * m + j] * x[i * m + j];
            var += v;
            var_sq += v * v;
        }
        CovarianceRow row;
        row.lag = lags[j - 1];
        row.empirical = sum / nd;
        row.se = std::sqrt(std::max(0.0, sum_sq / nd - row.empirical * row.empirical) / nd);
        row.j0 = j0(row.lag);
        row.variance = var / nd;
        const double var_se = std::sqrt(std::max(0.0, var_sq / nd - row.variance * row.variance) / nd);
        study.rows.push_back(row);

        const std::string key = "lag=" + fmt(row.lag);
        report.metrics["empirical." + key] = row.empirical;
        report.metrics["se." + key] = row.se;
        report.metrics["j0." + key] = row.j0;
        report.metrics["variance." + key] = row.variance;
        report.check_le("cov_within_4se." + key, std::abs(row.empirical - row.j0), 4.0 * row.se);
        report.check_le("variance_within_4se." + key, std::abs(row.variance - 1.0), 4.0 * var_se);
    }
    return study;
}

}  // namespace chainlab::gaussian
