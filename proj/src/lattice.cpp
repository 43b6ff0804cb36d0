#include "chainlab/lattice.hpp"

#include <cmath>
#include <string>

#include "chainlab/errors.hpp"

namespace chainlab {

LatticeWindow::LatticeWindow(std::int64_t offset, std::vector<double> values, Fill fill)
    : offset_(offset), values_(std::move(values)), fill_(fill) {
    if (values_.empty()) throw DomainError("LatticeWindow: values must be non-empty");
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("LatticeWindow: values must be finite");
    }
}

LatticeWindow LatticeWindow::zeros(IndexRange range) {
    if (range.size() < 1) throw DomainError("LatticeWindow::zeros: empty range");
    return {range.lo, std::vector<double>(static_cast<std::size_t>(range.size()), 0.0)};
}

LatticeWindow LatticeWindow::delta(std::int64_t site) {
    return {site, std::vector<double>{1.0}};
}

double LatticeWindow::at(std::int64_t n) const {
    if (stores(n)) return (*this)[n];
    if (fill_ == Fill::zero) return 0.0;
    throw PreconditionError("LatticeWindow: site " + std::to_string(n) +
                            " is outside a window with unknown fill");
}

double LatticeWindow::inf_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double LatticeWindow::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

bool LatticeWindow::is_zero() const {
    for (double v : values_) {
        if (v != 0.0) return false;
    }
    return true;
}

LatticeWindow LatticeWindow::restrict_to(IndexRange range) const {
    LatticeWindow out = zeros(range);
    for (std::int64_t n = range.lo; n <= range.hi; ++n) out[n] = at(n);
    out.fill_ = fill_;
    return out;
}

}  // namespace chainlab
