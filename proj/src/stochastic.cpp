#include "chainlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chainlab/bessel.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/parallel.hpp"
#include "chainlab/propagator.hpp"
#include "chainlab/random.hpp"

namespace chainlab::stochastic {

namespace {

// Coefficients below this are dropped; beyond the turning point the row
// decays faster than geometrically, so the discarded tail is of the same size.
constexpr double kTrim = 1e-18;

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// J_{2n}(tau) for n = 0..L, trimmed of its negligible tail.
std::vector<double> even_row(double tau, std::int64_t half_width) {
    const auto row = bessel::bessel_row(static_cast<int>(2 * half_width), tau);
    std::vector<double> j(static_cast<std::size_t>(half_width) + 1);
    for (std::int64_t n = 0; n <= half_width; ++n) j[static_cast<std::size_t>(n)] = row[2 * n];
    while (j.size() > 1 && std::abs(j.back()) < kTrim) j.pop_back();
    return j;
}

// u_0 = q_0, u_n = q_n + q_{-n}: q_0(tau) = sum_n u_n J_{2n}(tau).
std::vector<double> folded_sample(const EnsembleSpec& spec, std::uint64_t sample, std::size_t len) {
    std::vector<double> u(len);
    u[0] = draw_site(spec, sample, 0);
    for (std::size_t n = 1; n < len; ++n) {
        const auto k = static_cast<std::int64_t>(n);
        u[n] = draw_site(spec, sample, k) + draw_site(spec, sample, -k);
    }
    return u;
}

double dot(const std::vector<double>& row, const std::vector<double>& u) {
    double acc = 0.0;
    const std::size_t n = std::min(row.size(), u.size());
    for (std::size_t i = 0; i < n; ++i) acc += row[i] * u[i];
    return acc;
}

std::int64_t resolve_window(const EnsembleSpec& spec, double tau_max, double eps, const char* op) {
    const std::int64_t need = required_half_width(tau_max, eps);
    if (spec.window_half_width == 0) return need;
    if (spec.window_half_width < need) {
        std::ostringstream msg;
        msg << op << ": window_half_width " << spec.window_half_width << " is below the "
            << "light-cone requirement " << need << " for tau = " << tau_max;
        throw PreconditionError(msg.str());
    }
    return spec.window_half_width;
}

nlohmann::json spec_json(const EnsembleSpec& spec) {
    return {{"distribution", to_string(spec.distribution)},
            {"sigma2", spec.sigma2},
            {"n_samples", spec.n_samples},
            {"seed", spec.seed},
            {"window_half_width", spec.window_half_width}};
}

void validate_clock(double omega1, double t, const char* op) {
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) {
        throw DomainError(std::string(op) + ": omega1 must be positive");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(std::string(op) + ": t must be >= 0");
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

}  // namespace

std::string to_string(Distribution d) {
    switch (d) {
        case Distribution::rademacher:
            return "rademacher";
        case Distribution::uniform_pm1:
            return "uniform_pm1";
        case Distribution::gaussian:
            return "gaussian";
    }
    return "?";
}

Distribution parse_distribution(const std::string& name) {
    if (name == "rademacher") return Distribution::rademacher;
    if (name == "uniform_pm1") return Distribution::uniform_pm1;
    if (name == "gaussian") return Distribution::gaussian;
    throw DomainError("unknown distribution '" + name + "'");
}

void validate(const EnsembleSpec& spec) {
    if (!(spec.sigma2 > 0.0) || !std::isfinite(spec.sigma2)) {
        throw DomainError("EnsembleSpec: sigma2 must be positive");
    }
    if (spec.n_samples < 1) throw DomainError("EnsembleSpec: n_samples must be >= 1");
    if (spec.window_half_width < 0) throw DomainError("EnsembleSpec: window_half_width must be >= 0");
}

std::int64_t required_half_width(double tau, double eps) {
    // tau = 2 omega1 t is chain time at omega1 = 1/2.
    return propagator::light_cone_window(0.5, tau, eps);
}

double draw_site(const EnsembleSpec& spec, std::uint64_t sample_index, std::int64_t n) {
    const auto idx = rng::site_index(n);
    const double sd = std::sqrt(spec.sigma2);
    switch (spec.distribution) {
        case Distribution::rademacher:
            return sd * rng::rademacher(spec.seed, sample_index, idx);
        case Distribution::uniform_pm1:
            return std::sqrt(3.0) * sd * (2.0 * rng::uniform01(spec.seed, sample_index, idx) - 1.0);
        case Distribution::gaussian:
            return sd * rng::standard_normal(spec.seed, sample_index, idx);
    }
    return 0.0;
}

LatticeWindow sample_initial(const EnsembleSpec& spec, std::int64_t sample_index) {
    validate(spec);
    if (sample_index < 0 || sample_index >= spec.n_samples) {
        throw DomainError("sample_initial: sample_index out of range");
    }
    const std::int64_t w = spec.window_half_width;
    if (w < 1) throw DomainError("sample_initial: window_half_width must be >= 1");
    std::vector<double> values(static_cast<std::size_t>(2 * w + 1));
    for (std::int64_t n = -w; n <= w; ++n) {
        values[static_cast<std::size_t>(n + w)] =
            draw_site(spec, static_cast<std::uint64_t>(sample_index), n);
    }
    return {-w, std::move(values), Fill::zero};
}

double exact_covariance(double t, double s, double sigma2) {
    if (!(t >= 0.0 && s >= 0.0)) throw DomainError("exact_covariance: t and s must be >= 0");
    return 0.5 * sigma2 * (bessel::bessel_j(0, 2.0 * t + s) + bessel::bessel_j(0, s));
}

double limit_covariance(double s, double sigma2) { return 0.5 * sigma2 * bessel::bessel_j(0, s); }

double even_product_sum(double t1, double t2) {
    const double reach = std::max(std::abs(t1), std::abs(t2));
    const auto half = static_cast<std::int64_t>(std::ceil(0.5 * reach + 10.0 * std::cbrt(reach) + 30.0));
    const auto r1 = bessel::bessel_row(static_cast<int>(2 * half), t1);
    const auto r2 = bessel::bessel_row(static_cast<int>(2 * half), t2);
    double acc = r1[0] * r2[0];
    for (std::int64_t n = 1; n <= half; ++n) acc += 2.0 * r1[2 * n] * r2[2 * n];
    return acc;
}

CovarianceReport empirical_covariance(const EnsembleSpec& spec, double omega1, double t,
                                      std::span<const double> s_grid, double eps) {
    validate(spec);
    validate_clock(omega1, t, "empirical_covariance");
    if (spec.n_samples < 2) {
        throw DomainError("empirical_covariance: n_samples must be >= 2 for a standard error");
    }
    if (s_grid.empty()) throw DomainError("empirical_covariance: empty lag grid");
    for (double s : s_grid) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("empirical_covariance: lags must be >= 0");
    }

    const double scale = 2.0 * omega1;
    const double tau = scale * t;
    const double tau_max = scale * (t + *std::max_element(s_grid.begin(), s_grid.end()));
    const std::int64_t w = resolve_window(spec, tau_max, eps, "empirical_covariance");

    std::vector<std::vector<double>> rows{even_row(tau, w)};
    for (double s : s_grid) rows.push_back(even_row(scale * (t + s), w));
    std::size_t len = 0;
    for (const auto& r : rows) len = std::max(len, r.size());

    const auto n = static_cast<std::size_t>(spec.n_samples);
    const std::size_t m = rows.size();
    std::vector<double> q(n * m);
    parallel_for(n, [&](std::size_t i) {
        const auto u = folded_sample(spec, i, len);
        for (std::size_t j = 0; j < m; ++j) q[i * m + j] = dot(rows[j], u);
    });

    CovarianceReport out;
    auto& report = out.report;
    report.experiment = "empirical_covariance";
    report.config = {{"spec", spec_json(spec)},
                     {"omega1", omega1},
                     {"t", t},
                     {"s_grid", std::vector<double>(s_grid.begin(), s_grid.end())},
                     {"eps", eps},
                     {"window_half_width_used", w}};

    const double nd = static_cast<double>(n);
    std::vector<double> mean(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) mean[j] += q[i * m + j];
    }
    for (auto& v : mean) v /= nd;

    for (std::size_t j = 1; j < m; ++j) {
        const double s = s_grid[j - 1];
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (q[i * m] - mean[0]) * (q[i * m + j] - mean[j]);
            sum += z;
            sum_sq += z * z;
        }
        const double zbar = sum / nd;
        const double var_z = std::max(0.0, (sum_sq - nd * zbar * zbar) / (nd - 1.0));

        CovariancePair p;
        p.t = t;
        p.s = s;
        p.empirical = sum / (nd - 1.0);
        p.standard_error = std::sqrt(var_z / nd);
        p.exact = exact_covariance(tau, scale * s, spec.sigma2);
        p.limit = limit_covariance(scale * s, spec.sigma2);
        out.pairs.push_back(p);

        const std::string key = "s=" + fmt(s);
        report.metrics["empirical." + key] = p.empirical;
        report.metrics["se." + key] = p.standard_error;
        report.metrics["exact." + key] = p.exact;
        report.metrics["limit." + key] = p.limit;
        report.check_le("exact_within_4se." + key, std::abs(p.empirical - p.exact),
                        4.0 * p.standard_error);
        // |J_0(2 tau + s)| <= (2 tau)^{-1/3} bounds the gap to the limit form.
        const double bias = tau > 0.0 ? 0.5 * spec.sigma2 * std::cbrt(1.0 / (2.0 * tau))
                                      : std::numeric_limits<double>::infinity();
        report.check_le("limit_within_4se_plus_bias." + key, std::abs(p.empirical - p.limit),
                        4.0 * p.standard_error + bias);
    }
    return out;
}

ExperimentReport normality_check(const EnsembleSpec& spec, double omega1, double t, double eps) {
    validate(spec);
    validate_clock(omega1, t, "normality_check");
    const double tau = 2.0 * omega1 * t;
    const std::int64_t w = resolve_window(spec, tau, eps, "normality_check");
    const auto row = even_row(tau, w);

    const auto n = static_cast<std::size_t>(spec.n_samples);
    const double sd = std::sqrt(exact_covariance(tau, 0.0, spec.sigma2));
    std::vector<double> z(n);
    parallel_for(n, [&](std::size_t i) { z[i] = dot(row, folded_sample(spec, i, row.size())) / sd; });
    std::sort(z.begin(), z.end());

    double distance = 0.0;
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = std_normal_cdf(z[i]);
        distance = std::max({distance, static_cast<double>(i + 1) / nd - f,
                             f - static_cast<double>(i) / nd});
    }

    ExperimentReport report;
    report.experiment = "normality_check";
    report.config = {{"spec", spec_json(spec)}, {"omega1", omega1}, {"t", t}, {"eps", eps},
                     {"window_half_width_used", w}};
    const double threshold = 1.63 / std::sqrt(nd);
    report.metrics["ks_distance"] = distance;
    report.metrics["threshold"] = threshold;
    report.metrics["exact_sd"] = sd;
    report.check_le("ks_distance_le_threshold", distance, threshold);
    return report;
}

const SupGrowthRow& SupGrowthResult::row(std::size_t threshold_index,
                                         std::size_t horizon_index) const {
    return rows.at(threshold_index * horizon_count + horizon_index);
}

SupGrowthResult sup_growth_mc(const EnsembleSpec& spec, double omega1,
                              std::span<const double> thresholds,
                              std::span<const double> horizons, double dt, double eps) {
    validate(spec);
    validate_clock(omega1, 0.0, "sup_growth_mc");
    if (thresholds.empty() || horizons.empty()) {
        throw DomainError("sup_growth_mc: thresholds and horizons must be non-empty");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("sup_growth_mc: dt must be positive");
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        if (!(horizons[k] > 0.0) || !std::isfinite(horizons[k]) ||
            (k > 0 && !(horizons[k] > horizons[k - 1]))) {
            throw DomainError("sup_growth_mc: horizons must be positive and strictly increasing");
        }
    }

    const double scale = 2.0 * omega1;
    const double h_max = horizons.back();
    const auto steps = static_cast<std::size_t>(std::floor(h_max / dt + 1e-9)) + 1;
    const std::int64_t w = resolve_window(spec, scale * h_max, eps, "sup_growth_mc");

    std::vector<std::vector<double>> rows(steps);
    for (std::size_t j = 0; j < steps; ++j) rows[j] = even_row(scale * dt * static_cast<double>(j), w);
    std::size_t len = 0;
    for (const auto& r : rows) len = std::max(len, r.size());

    // Last grid index inside each horizon.
    std::vector<std::size_t> cut(horizons.size());
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        cut[k] = static_cast<std::size_t>(std::floor(horizons[k] / dt + 1e-9));
    }

    const auto n = static_cast<std::size_t>(spec.n_samples);
    const std::size_t hk = horizons.size();
    std::vector<double> maxes(n * hk), mins(n * hk);
    parallel_for(n, [&](std::size_t i) {
        const auto u = folded_sample(spec, i, len);
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        std::size_t k = 0;
        for (std::size_t j = 0; j < steps; ++j) {
            const double q = dot(rows[j], u);
            hi = std::max(hi, q);
            lo = std::min(lo, q);
            while (k < hk && cut[k] == j) {
                maxes[i * hk + k] = hi;
                mins[i * hk + k] = lo;
                ++k;
            }
        }
    });

    SupGrowthResult out;
    out.horizon_count = hk;
    auto& report = out.report;
    report.experiment = "sup_growth_mc";
    report.config = {{"spec", spec_json(spec)},
                     {"omega1", omega1},
                     {"thresholds", std::vector<double>(thresholds.begin(), thresholds.end())},
                     {"horizons", std::vector<double>(horizons.begin(), horizons.end())},
                     {"dt", dt},
                     {"eps", eps},
                     {"window_half_width_used", w}};

    const double nd = static_cast<double>(n);
    for (double a : thresholds) {
        double prev = -1.0;
        for (std::size_t k = 0; k < hk; ++k) {
            std::size_t hits = 0, low_hits = 0;
            for (std::size_t i = 0; i < n; ++i) {
                hits += maxes[i * hk + k] >= a ? 1 : 0;
                low_hits += mins[i * hk + k] <= -a ? 1 : 0;
            }
            SupGrowthRow row;
            row.threshold = a;
            row.horizon = horizons[k];
            row.fraction = static_cast<double>(hits) / nd;
            row.se = std::sqrt(row.fraction * (1.0 - row.fraction) / nd);
            row.inf_fraction = static_cast<double>(low_hits) / nd;
            row.inf_se = std::sqrt(row.inf_fraction * (1.0 - row.inf_fraction) / nd);
            out.rows.push_back(row);

            const std::string key = "a=" + fmt(a) + ".H=" + fmt(horizons[k]);
            report.metrics["fraction." + key] = row.fraction;
            report.metrics["se." + key] = row.se;
            report.metrics["inf_fraction." + key] = row.inf_fraction;
            if (k > 0) report.check_ge("nondecreasing_in_H." + key, row.fraction, prev);
            report.check_le("sup_inf_symmetry." + key, std::abs(row.fraction - row.inf_fraction),
                            4.0 * std::hypot(row.se, row.inf_se) + 1.0 / nd);
            prev = row.fraction;
        }
    }
    return out;
}

}  // namespace chainlab::stochastic
