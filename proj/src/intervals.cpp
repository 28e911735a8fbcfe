#include "lptile/intervals.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace lptile {

bool IntervalCollection::pairwise_disjoint() const {
    std::vector<FreqInterval> s = intervals;
    std::sort(s.begin(), s.end(),
              [](const FreqInterval& a, const FreqInterval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i].hi > s[i + 1].lo) return false;
    return true;
}

bool IntervalCollection::in_range(std::size_t n) const {
    for (const auto& w : intervals)
        if (!w.in_range(n)) return false;
    return true;
}

bool IntervalCollection::partitions_full_range(std::size_t n) const {
    if (!in_range(n) || !pairwise_disjoint()) return false;
    long covered = 0;
    for (const auto& w : intervals) covered += w.width();
    return covered == static_cast<long>(n);
}

void write_intervals_csv(const IntervalCollection& c, std::ostream& os) {
    os << "lo,hi\n";
    for (const auto& w : c.intervals) os << w.lo << "," << w.hi << "\n";
}

IntervalCollection read_intervals_csv(std::istream& is) {
    IntervalCollection c;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("lo", 0) == 0) continue;
        }
        long lo, hi;
        if (std::sscanf(line.c_str(), "%ld,%ld", &lo, &hi) != 2)
            throw std::invalid_argument("bad interval CSV row: " + line);
        c.intervals.push_back({lo, hi});
    }
    return c;
}

}  // namespace lptile
