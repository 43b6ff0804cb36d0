#include "chainlab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "chainlab/errors.hpp"

namespace chainlab::bessel {

namespace {

constexpr double kRescaleThreshold = 1e250;
constexpr double kRescaleFactor = 1e-250;
constexpr double kSeed = 1e-280;

void require_finite(double t, const char* what) {
    if (!std::isfinite(t)) {
        throw DomainError(std::string(what) + ": argument must be finite");
    }
}

// Undo the rescalings applied after a value was recorded.
double unscale(double stored, int epochs_behind) {
    if (epochs_behind == 0) return stored;
    if (epochs_behind == 1) return stored * kRescaleFactor;
    return 0.0;
}

std::int64_t start_order(std::int64_t top, double t) {
    const double reach = std::max(static_cast<double>(top), std::ceil(t));
    return static_cast<std::int64_t>(reach) +
           static_cast<std::int64_t>(std::ceil(10.0 + 1.5 * std::sqrt(reach) + t));
}

// Neumaier-compensated accumulator; the recurrence normalization sums
// O(t) oscillating terms.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double s = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - s) + x;
        } else {
            carry += (x - s) + sum;
        }
        sum = s;
    }
    void scale(double f) {
        sum *= f;
        carry *= f;
    }
    double value() const { return sum + carry; }
};

struct MillerResult {
    double norm;
    int epoch;
};

// Backward recurrence f_{n-1} = (2n/t) f_n - f_{n+1} for t > 0, from
// start_order(top, t) down to order 0. `sink(n, f_n, epoch)` receives every
// order n <= top. Returns the normalization J0 + 2 sum J2k in the final
// scaling epoch.
template <class Sink>
MillerResult miller_backward(std::int64_t top, double t, Sink&& sink) {
    const std::int64_t start = start_order(top, t);
    const double two_over_t = 2.0 / t;
    double f_above = 0.0;
    double f = kSeed;
    int epoch = 0;
    CompensatedSum norm;

    double nd = static_cast<double>(start);
    for (std::int64_t n = start; n >= 1; --n, nd -= 1.0) {
        if (n <= top) sink(n, f, epoch);
        if ((n & 1) == 0) norm.add(2.0 * f);
        const double f_below = (nd * two_over_t) * f - f_above;
        f_above = f;
        f = f_below;
        if (std::abs(f) > kRescaleThreshold) [[unlikely]] {
            f *= kRescaleFactor;
            f_above *= kRescaleFactor;
            norm.scale(kRescaleFactor);
            ++epoch;
        }
    }
    sink(0, f, epoch);
    norm.add(f);

    const double s = norm.value();
    if (!std::isfinite(s) || s == 0.0) {
        throw InternalError("bessel: recurrence normalization broke down at t = " +
                            std::to_string(t));
    }
    return {s, epoch};
}

// True when |J_n(x)| <= (x/2)^n / n! underflows double, so J_n(x) == 0.0 exactly.
bool underflows(std::int64_t n, double x) {
    if (n < 64) return false;
    const double nd = static_cast<double>(n);
    return nd * std::log(0.5 * x) - std::lgamma(nd + 1.0) < -760.0;
}

double parity_sign(std::int64_t n) { return (n & 1) ? -1.0 : 1.0; }

}  // namespace

BesselRow bessel_row(int order_max, double t) {
    if (order_max < 0) throw DomainError("bessel_row: order_max must be >= 0");
    require_finite(t, "bessel_row");

    BesselRow row;
    row.order_max = order_max;
    row.argument = t;
    row.values.assign(static_cast<std::size_t>(order_max) + 1, 0.0);
    if (t == 0.0) {
        row.values[0] = 1.0;
        return row;
    }

    const double x = std::abs(t);
    std::vector<int> epochs(row.values.size(), 0);
    const auto res = miller_backward(order_max, x, [&](std::int64_t n, double f, int epoch) {
        row.values[static_cast<std::size_t>(n)] = f;
        epochs[static_cast<std::size_t>(n)] = epoch;
    });
    for (std::size_t n = 0; n < row.values.size(); ++n) {
        row.values[n] = unscale(row.values[n], res.epoch - epochs[n]) / res.norm;
        if (t < 0.0) row.values[n] *= parity_sign(static_cast<std::int64_t>(n));
    }
    return row;
}

std::vector<double> bessel_select(std::span<const std::int64_t> orders, double t) {
    require_finite(t, "bessel_select");
    std::vector<double> out(orders.size(), 0.0);
    if (orders.empty()) return out;

    if (t == 0.0) {
        for (std::size_t i = 0; i < orders.size(); ++i) out[i] = orders[i] == 0 ? 1.0 : 0.0;
        return out;
    }

    // Visit requested |orders| from the top down.
    std::vector<std::size_t> idx(orders.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto mag = [&](std::size_t i) { return orders[i] < 0 ? -orders[i] : orders[i]; };
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return mag(a) > mag(b); });

    const double x = std::abs(t);
    std::vector<int> epochs(orders.size(), 0);
    std::size_t cursor = 0;
    while (cursor + 1 < idx.size() && underflows(mag(idx[cursor]), x)) ++cursor;
    const bool all_zero = underflows(mag(idx[cursor]), x);
    if (all_zero) return out;
    const auto res = miller_backward(mag(idx[cursor]), x, [&](std::int64_t n, double f, int epoch) {
        while (cursor < idx.size() && mag(idx[cursor]) == n) {
            out[idx[cursor]] = f;
            epochs[idx[cursor]] = epoch;
            ++cursor;
        }
    });

    for (std::size_t i = 0; i < out.size(); ++i) {
        double v = unscale(out[i], res.epoch - epochs[i]) / res.norm;
        const std::int64_t n = orders[i];
        // J_{-n}(t) = (-1)^n J_n(t) and J_n(-t) = (-1)^n J_n(t).
        if (n < 0) v *= parity_sign(n);
        if (t < 0.0) v *= parity_sign(n);
        out[i] = v;
    }
    return out;
}

double bessel_j(int n, double t) {
    require_finite(t, "bessel_j");
    const std::int64_t order = n;
    return bessel_select(std::span<const std::int64_t>(&order, 1), t).front();
}

int default_oracle_panels(int n, double t) {
    const double want = std::ceil(8.0 * (std::abs(t) + std::abs(static_cast<double>(n))));
    return std::max(64, static_cast<int>(want));
}

double bessel_j_oracle(int n, double t, int panels) {
    if (panels <= 0) throw DomainError("bessel_j_oracle: panels must be >= 1");
    require_finite(t, "bessel_j_oracle");

    // The integrand is even about 0 and pi with period 2 pi, so the
    // trapezoidal rule on [0, pi] converges spectrally.
    const double h = std::numbers::pi / panels;
    const double nd = static_cast<double>(n);
    double sum = 0.5 * (1.0 + parity_sign(n));
    for (int j = 1; j < panels; ++j) {
        const double phi = j * h;
        sum += std::cos(t * std::sin(phi) - nd * phi);
    }
    return sum / panels;
}

double bessel_j_oracle(int n, double t) {
    return bessel_j_oracle(n, t, default_oracle_panels(n, t));
}

double neumann_identity_residual(double t1, double t2, double phi, int n_trunc) {
    if (n_trunc < 1) throw DomainError("neumann_identity_residual: n_trunc must be >= 1");
    require_finite(t1, "neumann_identity_residual");
    require_finite(t2, "neumann_identity_residual");
    require_finite(phi, "neumann_identity_residual");

    const BesselRow r1 = bessel_row(n_trunc, t1);
    const BesselRow r2 = bessel_row(n_trunc, t2);
    // J_{-n}(t1) J_{-n}(t2) = J_n(t1) J_n(t2).
    CompensatedSum acc;
    acc.add(r1[0] * r2[0]);
    for (int n = 1; n <= n_trunc; ++n) {
        acc.add(2.0 * r1[n] * r2[n] * std::cos(n * phi));
    }
    const double tbar2 = t1 * t1 + t2 * t2 - 2.0 * t1 * t2 * std::cos(phi);
    const double tbar = std::sqrt(std::max(0.0, tbar2));
    return std::abs(acc.value() - bessel_j(0, tbar));
}

}  // namespace chainlab::bessel
