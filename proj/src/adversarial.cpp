#include "chainlab/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "chainlab/bessel.hpp"
#include "chainlab/errors.hpp"

namespace chainlab::adversarial {

namespace {

constexpr double kNuCeiling = 1.0 - 1e-6;

void validate_window(double a, double b) {
    if (!(a > 0.0 && a < b && b < 0.5 * kNuCeiling)) {
        throw DomainError("adversarial: need 0 < a < b < 1/2");
    }
}

// x mod 2 pi with 2 pi split into a double and its rounding residue; exact
// enough for phases up to ~1e9 and far cheaper than fmod.
double phase_mod_2pi(double x) {
    constexpr double kTwoPiHi = 2.0 * std::numbers::pi;
    constexpr double kTwoPiLo = 2.4492935982947064e-16;
    const double n = std::floor(x / kTwoPiHi);
    double r = std::fma(-n, kTwoPiHi, x) - n * kTwoPiLo;
    if (r < 0.0) r += kTwoPiHi;
    if (r >= kTwoPiHi) r -= kTwoPiHi;
    return r;
}

std::string scale_key(std::size_t level) { return "level" + std::to_string(level + 1); }

}  // namespace

double g_fn(double mu) {
    if (!(mu >= -1.0 && mu <= 1.0)) throw DomainError("g_fn: mu must lie in [-1, 1]");
    return std::sqrt(1.0 - mu * mu) - mu * std::acos(mu);
}

double g_prime(double mu) {
    if (!(mu >= -1.0 && mu <= 1.0)) throw DomainError("g_prime: mu must lie in [-1, 1]");
    return -std::acos(mu);
}

PhasePoint phase_point(std::int64_t k, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("phase_point: t must be positive");
    if (k < 0) throw DomainError("phase_point: k must be >= 0");
    const double nu = 2.0 * static_cast<double>(k) / t;
    if (nu > kNuCeiling) throw DomainError("phase_point: 2k/t must stay below 1 - 1e-6");
    PhasePoint p;
    p.k = k;
    p.nu = nu;
    p.x = t * g_fn(nu);
    const double amp = std::sqrt(2.0 / (std::numbers::pi * t * std::sqrt(1.0 - nu * nu)));
    p.f = amp * std::cos(p.x - 0.25 * std::numbers::pi);
    return p;
}

double f_main_term(std::int64_t k, double t) { return phase_point(k, t).f; }

LatticeWindow AdversarialPlan::initial_condition() const {
    if (support.empty()) throw ConstructionError("AdversarialPlan: empty support");
    LatticeWindow w = LatticeWindow::zeros({support.front(), support.back()});
    for (std::int64_t k : support) w[k] = static_cast<double>(sign);
    return w;
}

AdversarialPlan build_support_set(double T, double omega1, const PlanOptions& options) {
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) {
        throw DomainError("build_support_set: omega1 must be positive");
    }
    validate_window(options.a, options.b);
    if (!std::isfinite(T) || T < options.t_min_scaled / omega1) {
        std::ostringstream msg;
        msg << "build_support_set: T = " << T << " is below T_min = "
            << options.t_min_scaled / omega1;
        throw DomainError(msg.str());
    }
    if (options.sign != 1 && options.sign != -1) throw DomainError("build_support_set: sign must be +-1");

    AdversarialPlan plan;
    plan.target_T = T;
    plan.omega1 = omega1;
    plan.t = 2.0 * omega1 * T;
    plan.a = options.a;
    plan.b = options.b;
    plan.sign = options.sign;
    plan.k_lo = static_cast<std::int64_t>(std::ceil(options.a * plan.t));
    plan.k_hi = static_cast<std::int64_t>(std::floor(options.b * plan.t));

    for (std::int64_t k = plan.k_lo; k <= plan.k_hi; ++k) {
        const double nu = 2.0 * static_cast<double>(k) / plan.t;
        const double r = phase_mod_2pi(plan.t * g_fn(nu));
        if (r > 0.0 && r < 0.5 * std::numbers::pi) {
            plan.support.push_back(k);
            plan.main_term += phase_point(k, plan.t).f;
        }
    }
    if (plan.support.empty()) {
        std::ostringstream msg;
        msg << "build_support_set: no index in [" << plan.k_lo << ", " << plan.k_hi
            << "] has phase in (0, pi/2) at T = " << T << "; increase T";
        throw ConstructionError(msg.str());
    }
    plan.main_term *= options.sign;
    plan.predicted_lower = 0.5 * plan.main_term;
    const double nu_max = 2.0 * static_cast<double>(plan.k_hi) / plan.t;
    plan.phase_eps = 0.9 * 2.0 * std::acos(nu_max);
    return plan;
}

std::vector<double> phase_increments(const AdversarialPlan& plan) {
    std::vector<double> out;
    double prev = phase_point(plan.k_lo, plan.t).x;
    for (std::int64_t k = plan.k_lo + 1; k <= plan.k_hi; ++k) {
        const double x = phase_point(k, plan.t).x;
        out.push_back(x - prev);
        prev = x;
    }
    return out;
}

double central_value(const AdversarialPlan& plan) {
    std::vector<std::int64_t> orders;
    orders.reserve(plan.support.size());
    for (std::int64_t k : plan.support) orders.push_back(2 * k);
    const auto j = bessel::bessel_select(orders, plan.t);
    double sum = 0.0;
    for (double v : j) sum += v;
    return plan.sign * sum;
}

ExperimentReport measure_growth(const AdversarialPlan& plan, double eps) {
    if (plan.support.empty()) throw ConstructionError("measure_growth: plan has empty support");
    ExperimentReport report;
    report.experiment = "adversarial_growth";
    report.config = {{"T", plan.target_T}, {"omega1", plan.omega1}, {"a", plan.a},
                     {"b", plan.b},        {"sign", plan.sign},     {"eps", eps}};

    const double q0 = central_value(plan);
    const double sqrt_T = std::sqrt(plan.target_T);
    report.metrics["q0_T"] = q0;
    report.metrics["ratio_sqrt_T"] = q0 / sqrt_T;
    report.metrics["main_term"] = plan.main_term;
    report.metrics["predicted_lower"] = plan.predicted_lower;
    report.metrics["ratio_main_term"] = q0 / plan.main_term;
    report.metrics["ratio_predicted_lower"] = q0 / plan.predicted_lower;
    report.metrics["support_size"] = static_cast<double>(plan.support.size());
    report.metrics["support_fraction"] = static_cast<double>(plan.support.size()) / plan.t;
    report.metrics["t"] = plan.t;

    report.check_gt("signed_q0_positive", plan.sign * q0, 0.0);
    report.check_ge("signed_q0_ge_predicted_lower", plan.sign * q0,
                    plan.sign * plan.predicted_lower - eps);
    return report;
}

LatticeWindow MultiscaleResult::initial_condition() const {
    if (bumps.empty()) throw ConstructionError("MultiscaleResult: no bumps");
    LatticeWindow w = LatticeWindow::zeros({bumps.front().support.front(), bumps.back().support.back()});
    for (const auto& bump : bumps) {
        for (std::int64_t k : bump.support) w[k] = static_cast<double>(bump.sign);
    }
    return w;
}

MultiscaleResult build_multiscale(double T1, int count, double omega1,
                                  const MultiscaleOptions& options) {
    if (count < 2) throw DomainError("build_multiscale: count must be >= 2");
    if (!(options.safety >= 1.0)) throw DomainError("build_multiscale: safety must be >= 1");
    if (!(options.grid_factor > 1.0)) throw DomainError("build_multiscale: grid_factor must exceed 1");

    MultiscaleResult res;
    PlanOptions plan_opts{options.a, options.b, options.t_min_scaled, 1};
    res.bumps.push_back(build_support_set(T1, omega1, plan_opts));
    res.times.push_back(T1);
    res.c = central_value(res.bumps.front()) / std::sqrt(T1);
    if (!(res.c > 0.0)) {
        throw ConstructionError("build_multiscale: first bump does not produce positive growth");
    }

    const double spread = options.b - options.a;
    for (int level = 1; level < count; ++level) {
        const double T_k = res.times.back();
        const std::int64_t last_index = res.bumps.back().support.back();
        double accumulated = 1.0;
        for (const auto& bump : res.bumps) accumulated += std::sqrt(spread * bump.t + 1.0);

        double candidate = T_k;
        while (true) {
            candidate *= options.grid_factor;
            if (candidate > options.T_max) {
                std::ostringstream msg;
                msg << "build_multiscale: grid exhausted at T_max = " << options.T_max
                    << " while placing scale " << level + 1;
                throw ConstructionError(msg.str());
            }
            const double t_c = 2.0 * omega1 * candidate;
            const auto first_next = static_cast<std::int64_t>(std::ceil(options.a * t_c));
            const bool disjoint = last_index < first_next;
            const double alpha = omega1 * T_k / static_cast<double>(first_next);
            const bool far_tail = std::exp(alpha + 1.0) * alpha < 1.0;
            const bool accumulation = accumulated < 0.5 * res.c * std::sqrt(candidate);
            if (disjoint && far_tail && accumulation) break;
        }
        plan_opts.sign = (level % 2 == 0) ? 1 : -1;
        const double T_next = options.safety * candidate;
        res.bumps.push_back(build_support_set(T_next, omega1, plan_opts));
        res.times.push_back(T_next);
    }

    // q_0(T_j) of the summed data: every bump's indices at every scale's argument.
    std::vector<std::int64_t> orders;
    std::vector<int> signs;
    for (const auto& bump : res.bumps) {
        for (std::int64_t k : bump.support) {
            orders.push_back(2 * k);
            signs.push_back(bump.sign);
        }
    }

    auto& report = res.report;
    report.experiment = "adversarial_multiscale";
    report.config = {{"T1", T1},
                     {"count", count},
                     {"omega1", omega1},
                     {"safety", options.safety},
                     {"grid_factor", options.grid_factor},
                     {"a", options.a},
                     {"b", options.b},
                     {"T_max", options.T_max}};
    report.metrics["c"] = res.c;

    for (std::size_t j = 0; j < res.bumps.size(); ++j) {
        const auto values = bessel::bessel_select(orders, res.bumps[j].t);
        double q = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) q += signs[i] * values[i];
        res.central_values.push_back(q);

        const std::string key = scale_key(j);
        const double sqrt_T = std::sqrt(res.times[j]);
        report.metrics[key + ".T"] = res.times[j];
        report.metrics[key + ".q0"] = q;
        report.metrics[key + ".ratio_sqrt_T"] = q / sqrt_T;
        report.metrics[key + ".support_size"] = static_cast<double>(res.bumps[j].support.size());
        const double expected_sign = res.bumps[j].sign;
        report.check_gt(key + ".sign_matches", expected_sign * q, 0.0);
        report.check_ge(key + ".abs_q0_ge_half_c_sqrt_T", std::abs(q), 0.5 * res.c * sqrt_T);
        if (j + 1 < res.bumps.size()) {
            report.check_lt(key + ".support_disjoint_from_next",
                            static_cast<double>(res.bumps[j].support.back()),
                            static_cast<double>(res.bumps[j + 1].support.front()));
        }
    }
    return res;
}

}  // namespace chainlab::adversarial
