#include "chainlab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "chainlab/bessel.hpp"
#include "chainlab/bounds.hpp"
#include "chainlab/errors.hpp"

namespace chainlab::propagator {

namespace {

void validate(double omega1, double t, double eps, const char* op) {
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) {
        throw DomainError(std::string(op) + ": omega1 must be positive and finite");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError(std::string(op) + ": t must be nonnegative and finite");
    }
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError(std::string(op) + ": eps must lie in (0, 1)");
}

// dst[n - out.lo] += sum_{|k| <= M} kernel[|k|] * src(n - k), with src zero
// outside its stored sites.
void convolve_into(const LatticeWindow& src, const std::vector<double>& kernel, IndexRange out,
                   std::vector<double>& dst) {
    const auto m = static_cast<std::int64_t>(kernel.size()) - 1;
    const auto& v = src.values();
    for (std::int64_t n = out.lo; n <= out.hi; ++n) {
        const std::int64_t k_lo = std::max(-m, n - src.last());
        const std::int64_t k_hi = std::min(m, n - src.first());
        double acc = 0.0;
        for (std::int64_t k = k_lo; k <= k_hi; ++k) {
            acc += kernel[static_cast<std::size_t>(k < 0 ? -k : k)] *
                   v[static_cast<std::size_t>(n - k - src.first())];
        }
        dst[static_cast<std::size_t>(n - out.lo)] += acc;
    }
}

void require_margin(const LatticeWindow& w, IndexRange out, std::int64_t m, const char* which) {
    if (w.fill() == Fill::zero) return;
    for (std::int64_t n = out.lo; n <= out.hi; ++n) {
        if (n - m < w.first() || n + m > w.last()) {
            std::ostringstream msg;
            msg << "evolve: output site " << n << " needs " << which << " sites [" << n - m << ", "
                << n + m << "] but only [" << w.first() << ", " << w.last() << "] are stored";
            throw PreconditionError(msg.str());
        }
    }
}

std::vector<double> fold(const std::vector<double>& one_sided) {
    const std::size_t m = one_sided.size() - 1;
    std::vector<double> full(2 * m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        full[m + k] = one_sided[k];
        full[m - k] = one_sided[k];
    }
    return full;
}

}  // namespace

double light_cone_bound(double omega1, double t, std::int64_t m) {
    if (m < 1) throw DomainError("light_cone_bound: M must be >= 1");
    if (t == 0.0) return 0.0;
    const double alpha = omega1 * t / static_cast<double>(m);
    const double log_bound = 2.0 * static_cast<double>(m) * (alpha + 1.0 + std::log(alpha));
    return std::exp(log_bound);
}

std::int64_t light_cone_window(double omega1, double t, double eps) {
    validate(omega1, t, eps, "light_cone_window");
    const double gamma = bounds::solve_gamma().gamma;
    std::int64_t m = std::max(kMinHalfWidth,
                              static_cast<std::int64_t>(std::ceil(2.0 * gamma * omega1 * t)));
    while (light_cone_bound(omega1, t, m) > eps) ++m;
    return m;
}

std::vector<double> position_kernel(double omega1, double t, std::int64_t half_width) {
    if (half_width < 0) throw DomainError("position_kernel: half_width must be >= 0");
    const auto row = bessel::bessel_row(static_cast<int>(2 * half_width), 2.0 * omega1 * t);
    std::vector<double> a(static_cast<std::size_t>(half_width) + 1);
    for (std::int64_t k = 0; k <= half_width; ++k) a[static_cast<std::size_t>(k)] = row[2 * k];
    return a;
}

std::vector<double> sine_kernel(double omega1, double t, std::int64_t half_width) {
    if (half_width < 0) throw DomainError("sine_kernel: half_width must be >= 0");
    const double x = 2.0 * omega1 * t;
    const int panels = bessel::default_oracle_panels(static_cast<int>(2 * half_width), x);
    const auto p = static_cast<std::int64_t>(panels);

    // h(phi) = sin(x sin phi) / (2 omega1 sin phi) is pi-periodic and smooth,
    // with h(0) = t.
    std::vector<double> h(static_cast<std::size_t>(p));
    std::vector<double> cos_table(static_cast<std::size_t>(p));
    for (std::int64_t j = 0; j < p; ++j) {
        const double phi = std::numbers::pi * static_cast<double>(j) / static_cast<double>(p);
        const double s = std::sin(phi);
        h[static_cast<std::size_t>(j)] = j == 0 ? t : std::sin(x * s) / (2.0 * omega1 * s);
        cos_table[static_cast<std::size_t>(j)] =
            std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(p));
    }

    std::vector<double> b(static_cast<std::size_t>(half_width) + 1);
    for (std::int64_t k = 0; k <= half_width; ++k) {
        double acc = 0.0;
        // cos(2 k phi_j) = cos(2 pi (k j mod P) / P)
        const std::int64_t step = k % p;
        std::int64_t idx = 0;
        for (std::int64_t j = 0; j < p; ++j) {
            acc += h[static_cast<std::size_t>(j)] * cos_table[static_cast<std::size_t>(idx)];
            idx += step;
            if (idx >= p) idx -= p;
        }
        b[static_cast<std::size_t>(k)] = acc / static_cast<double>(p);
    }
    return b;
}

std::vector<double> velocity_kernel(double omega1, double t, std::int64_t half_width) {
    if (half_width < 0) throw DomainError("velocity_kernel: half_width must be >= 0");
    const auto row = bessel::bessel_row(static_cast<int>(2 * half_width + 1), 2.0 * omega1 * t);
    std::vector<double> da(static_cast<std::size_t>(half_width) + 1);
    da[0] = -2.0 * omega1 * row[1];
    for (std::int64_t k = 1; k <= half_width; ++k) {
        da[static_cast<std::size_t>(k)] = omega1 * (row[2 * k - 1] - row[2 * k + 1]);
    }
    return da;
}

KernelRow kernel_row(double omega1, double t, double eps) {
    validate(omega1, t, eps, "kernel_row");
    KernelRow row;
    row.omega1 = omega1;
    row.time = t;
    row.half_width = light_cone_window(omega1, t, eps);
    row.a = fold(position_kernel(omega1, t, row.half_width));
    row.b = fold(sine_kernel(omega1, t, row.half_width));
    // Sum over |k| > M is bounded by the light-cone estimate at M + 1.
    row.tail_bound = light_cone_bound(omega1, t, row.half_width + 1);
    if (row.tail_bound > eps) {
        throw InternalError("kernel_row: certified tail exceeds eps");
    }
    return row;
}

LatticeWindow evolve(const LatticeWindow& q0, double omega1, double t, double eps,
                     std::optional<IndexRange> out) {
    validate(omega1, t, eps, "evolve");
    const IndexRange range = out.value_or(q0.range());
    if (range.size() < 1) throw DomainError("evolve: empty output window");
    const std::int64_t m = light_cone_window(omega1, t, eps);
    require_margin(q0, range, m, "q0");

    std::vector<double> q(static_cast<std::size_t>(range.size()), 0.0);
    convolve_into(q0, position_kernel(omega1, t, m), range, q);
    return {range.lo, std::move(q), Fill::none};
}

LatticeWindow evolve(const LatticeWindow& q0, const LatticeWindow& p0, double omega1, double t,
                     double eps, std::optional<IndexRange> out) {
    validate(omega1, t, eps, "evolve");
    const IndexRange range = out.value_or(q0.range());
    if (range.size() < 1) throw DomainError("evolve: empty output window");
    const std::int64_t m = light_cone_window(omega1, t, eps);
    require_margin(q0, range, m, "q0");
    require_margin(p0, range, m, "p0");

    std::vector<double> q(static_cast<std::size_t>(range.size()), 0.0);
    convolve_into(q0, position_kernel(omega1, t, m), range, q);
    if (!p0.is_zero()) convolve_into(p0, sine_kernel(omega1, t, m), range, q);
    return {range.lo, std::move(q), Fill::none};
}

ChainState evolve_state(const LatticeWindow& q0, const LatticeWindow& p0, double omega1, double t,
                        double eps, std::optional<IndexRange> out) {
    validate(omega1, t, eps, "evolve_state");
    const IndexRange range = out.value_or(q0.range());
    if (range.size() < 1) throw DomainError("evolve_state: empty output window");
    const std::int64_t m = light_cone_window(omega1, t, eps);
    require_margin(q0, range, m, "q0");
    require_margin(p0, range, m, "p0");

    const auto a = position_kernel(omega1, t, m);
    std::vector<double> q(static_cast<std::size_t>(range.size()), 0.0);
    std::vector<double> p(static_cast<std::size_t>(range.size()), 0.0);
    convolve_into(q0, a, range, q);
    convolve_into(q0, velocity_kernel(omega1, t, m), range, p);
    if (!p0.is_zero()) {
        convolve_into(p0, sine_kernel(omega1, t, m), range, q);
        convolve_into(p0, a, range, p);
    }
    return {LatticeWindow(range.lo, std::move(q), Fill::none),
            LatticeWindow(range.lo, std::move(p), Fill::none)};
}

double cos_norm(double omega1, double t, double eps) {
    validate(omega1, t, eps, "cos_norm");
    const auto a = position_kernel(omega1, t, light_cone_window(omega1, t, eps));
    double tail = 0.0;
    for (std::size_t k = a.size() - 1; k >= 1; --k) tail += std::abs(a[k]);
    return std::abs(a[0]) + 2.0 * tail;
}

ExperimentReport l2_uniform_bound_check(const LatticeWindow& q0, double omega1,
                                        std::span<const double> t_grid, double eps) {
    if (q0.fill() != Fill::zero) {
        throw PreconditionError("l2_uniform_bound_check: q0 must be zero outside its window");
    }
    ExperimentReport report;
    report.experiment = "l2_uniform_bound";
    report.config = {{"omega1", omega1},
                     {"t_grid", std::vector<double>(t_grid.begin(), t_grid.end())},
                     {"eps", eps},
                     {"q0_offset", q0.offset()},
                     {"q0_size", q0.size()}};

    const double l2 = q0.l2_norm();
    double max_ratio = 0.0;
    for (double t : t_grid) {
        const std::int64_t m = light_cone_window(omega1, t, eps);
        const auto qt = evolve(q0, omega1, t, eps, IndexRange{q0.first() - m, q0.last() + m});
        const double sup = qt.inf_norm();
        if (l2 > 0.0) max_ratio = std::max(max_ratio, sup / l2);
        std::ostringstream name;
        name << "sup_q_le_l2_at_t=" << t;
        report.check_le(name.str(), sup, l2 + eps);
    }
    report.metrics["l2_norm"] = l2;
    report.metrics["max_ratio"] = max_ratio;
    return report;
}

std::shared_ptr<const KernelRow> KernelCache::get(double omega1, double t, double eps) {
    const Key key{omega1, t, eps};
    std::lock_guard lock(mutex_);
    if (auto it = rows_.find(key); it != rows_.end()) return it->second;
    auto row = std::make_shared<const KernelRow>(kernel_row(omega1, t, eps));
    if (rows_.size() >= capacity_ && !rows_.empty()) rows_.erase(rows_.begin());
    rows_.emplace(key, row);
    return row;
}

std::size_t KernelCache::size() const {
    std::lock_guard lock(mutex_);
    return rows_.size();
}

void KernelCache::clear() {
    std::lock_guard lock(mutex_);
    rows_.clear();
}

}  // namespace chainlab::propagator
