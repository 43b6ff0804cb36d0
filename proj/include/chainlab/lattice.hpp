#pragma once

#include <cstdint>
#include <vector>

namespace chainlab {

/// What a LatticeWindow represents outside its stored range.
enum class Fill {
    zero,  ///< the doubly-infinite sequence vanishes outside the window
    none,  ///< values outside the window are unknown
};

/// Inclusive index range [lo, hi].
struct IndexRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    std::int64_t size() const { return hi - lo + 1; }
    bool contains(std::int64_t n) const { return n >= lo && n <= hi; }
};

/// Finite window of a doubly-infinite real sequence indexed by Z.
class LatticeWindow {
public:
    LatticeWindow() = default;
    LatticeWindow(std::int64_t offset, std::vector<double> values, Fill fill = Fill::zero);

    /// Zero window over [lo, hi].
    static LatticeWindow zeros(IndexRange range);
    /// Unit impulse at `site`, zero elsewhere.
    static LatticeWindow delta(std::int64_t site = 0);

    std::int64_t offset() const { return offset_; }
    std::int64_t first() const { return offset_; }
    std::int64_t last() const { return offset_ + static_cast<std::int64_t>(values_.size()) - 1; }
    IndexRange range() const { return {first(), last()}; }
    std::size_t size() const { return values_.size(); }
    Fill fill() const { return fill_; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool stores(std::int64_t n) const { return n >= first() && n <= last(); }
    /// Value at site n; 0 outside the window when fill == zero, throws
    /// PreconditionError when fill == none.
    double at(std::int64_t n) const;
    double& operator[](std::int64_t n) { return values_[static_cast<std::size_t>(n - offset_)]; }
    double operator[](std::int64_t n) const { return values_[static_cast<std::size_t>(n - offset_)]; }

    double inf_norm() const;
    double l2_norm() const;
    bool is_zero() const;

    /// Copy of the sites in `range` (zero-padded where not stored and fill == zero).
    LatticeWindow restrict_to(IndexRange range) const;

private:
    std::int64_t offset_ = 0;
    std::vector<double> values_{0.0};
    Fill fill_ = Fill::zero;
};

}  // namespace chainlab
