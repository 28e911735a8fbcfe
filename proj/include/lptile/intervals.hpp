#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace lptile {

/// Half-open integer frequency arc [lo, hi).
struct FreqInterval {
    long lo = 0;
    long hi = 0;

    long width() const { return hi - lo; }
    double center() const { return 0.5 * static_cast<double>(lo + hi); }
    bool contains(long k) const { return lo <= k && k < hi; }
    bool empty() const { return hi <= lo; }
    bool in_range(std::size_t n) const {
        const long half = static_cast<long>(n / 2);
        return -half <= lo && lo < hi && hi <= half;
    }
    friend bool operator==(const FreqInterval&, const FreqInterval&) = default;
};

/// Finite family Omega of frequency arcs; disjointness is the invariant the
/// square functions rely on.
struct IntervalCollection {
    std::vector<FreqInterval> intervals;

    bool pairwise_disjoint() const;
    bool in_range(std::size_t n) const;
    /// True when the arcs exactly tile [-n/2, n/2).
    bool partitions_full_range(std::size_t n) const;
};

/// Dyadic interval [offset*2^-level, (offset+1)*2^-level) of the unit torus.
struct DyadicInterval {
    int level = 0;     // >= 0
    long offset = 0;   // in [0, 2^level)

    double length() const { return 1.0 / static_cast<double>(1ll << level); }
    double lo() const { return static_cast<double>(offset) * length(); }
    double hi() const { return static_cast<double>(offset + 1) * length(); }
    double center() const { return (static_cast<double>(offset) + 0.5) * length(); }

    bool valid() const { return level >= 0 && 0 <= offset && offset < (1ll << level); }
    /// At least one sample per interval on a grid of n points.
    bool representable(std::size_t n) const {
        return valid() && (std::size_t{1} << level) <= n;
    }
    bool contains(const DyadicInterval& other) const {
        return other.level >= level && (other.offset >> (other.level - level)) == offset;
    }
    /// Samples covered on a grid of n points: [j0, j1).
    std::pair<std::size_t, std::size_t> sample_range(std::size_t n) const {
        const std::size_t len = n >> level;
        return {static_cast<std::size_t>(offset) * len,
                (static_cast<std::size_t>(offset) + 1) * len};
    }
    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

/// CSV rows "lo,hi".
void write_intervals_csv(const IntervalCollection& c, std::ostream& os);
IntervalCollection read_intervals_csv(std::istream& is);

}  // namespace lptile
