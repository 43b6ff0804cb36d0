#pragma once

// Integer-order Bessel functions of the first kind.
//
// Evaluation is by Miller's backward recurrence normalized with
// J0 + 2*sum_k J2k = 1. A trapezoidal quadrature of the Bessel integral
// serves as an independent oracle.

#include <cstdint>
#include <span>
#include <vector>

namespace chainlab::bessel {

/// J0(t) ... J_order_max(t).
struct BesselRow {
    int order_max = 0;
    double argument = 0.0;
    std::vector<double> values;

    double operator[](int n) const { return values[static_cast<std::size_t>(n)]; }
};

/// J_n(t) for any integer n and finite t.
/// Accurate to 1e-12 absolute for |n| <= 500, |t| <= 1e4.
double bessel_j(int n, double t);

/// All orders 0..order_max at argument t in O(order_max + |t|).
BesselRow bessel_row(int order_max, double t);

/// J_n(t) for an arbitrary set of nonnegative orders, streaming the
/// recurrence so that memory stays O(orders.size()) even when |t| is huge.
/// Output is aligned with `orders`; orders need not be sorted.
std::vector<double> bessel_select(std::span<const std::int64_t> orders, double t);

/// Default panel count for the quadrature oracle: max(64, ceil(8(|t| + |n|))).
int default_oracle_panels(int n, double t);

/// Trapezoidal evaluation of (1/pi) * int_0^pi cos(t sin(phi) - n phi) dphi.
double bessel_j_oracle(int n, double t, int panels);
double bessel_j_oracle(int n, double t);

/// |sum_{|n|<=n_trunc} J_n(t1) J_n(t2) cos(n phi) - J0(tbar)|,
/// tbar = sqrt(t1^2 + t2^2 - 2 t1 t2 cos(phi)).
double neumann_identity_residual(double t1, double t2, double phi, int n_trunc);

}  // namespace chainlab::bessel
