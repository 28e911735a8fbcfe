#include "lptile/well_distributed.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace lptile {

namespace {

// B_k = 1/2 - (4/9)(4/5)^k: right-half breakpoints of the model decomposition
// Well([-1/2,1/2]) = {[-1/18,1/18]} u {±[1/2-(4/9)(4/5)^k, 1/2-(4/9)(4/5)^(k+1)]}.
std::vector<double> model_breakpoints(int kmax) {
    std::vector<double> b;
    double geo = 4.0 / 9.0;
    for (int k = 0; k <= kmax; ++k) {
        b.push_back(0.5 - geo);
        geo *= 0.8;
    }
    return b;
}

bool doubling_inside(FreqInterval piece, FreqInterval omega) {
    // 2*piece as a real concentric interval must fit in [omega.lo, omega.hi].
    const double len = static_cast<double>(piece.width());
    return static_cast<double>(piece.lo) - 0.5 * len >= static_cast<double>(omega.lo) &&
           static_cast<double>(piece.hi) + 0.5 * len <= static_cast<double>(omega.hi);
}

}  // namespace

IntervalCollection WellRefinement::collection() const {
    IntervalCollection c;
    c.intervals.reserve(pieces.size());
    for (const auto& p : pieces) c.intervals.push_back(p.arc);
    return c;
}

std::vector<WellPiece> well_refine_interval(FreqInterval omega) {
    if (omega.empty()) throw std::invalid_argument("well_refine_interval: empty arc");
    const double w = static_cast<double>(omega.width());
    const double c = omega.center();

    // real cuts c ± B_k*w; stop once consecutive cuts collide after rounding
    const std::vector<double> bs = model_breakpoints(64);
    std::vector<long> right_cuts;
    long prev = std::lround(c + bs[0] * w);
    right_cuts.push_back(prev);
    for (std::size_t k = 1; k < bs.size(); ++k) {
        const long cut = std::lround(c + bs[k] * w);
        if (cut - prev < 1) break;
        right_cuts.push_back(cut);
        prev = cut;
    }

    std::set<long> cuts{omega.lo, omega.hi};
    for (long r : right_cuts) {
        if (omega.lo < r && r < omega.hi) cuts.insert(r);
        const long l = std::lround(2.0 * c) - r;  // mirror about the center
        if (omega.lo < l && l < omega.hi) cuts.insert(l);
    }

    std::vector<WellPiece> pieces;
    for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
        FreqInterval arc{*it, *std::next(it)};
        pieces.push_back({arc, !doubling_inside(arc, omega)});
    }
    if (pieces.size() < 3) return {{omega, true}};  // too narrow: passthrough
    return pieces;
}

WellRefinement well_refine(const IntervalCollection& omega) {
    if (!omega.pairwise_disjoint())
        throw std::invalid_argument("well_refine: collection must be disjoint");
    WellRefinement out;
    for (const auto& w : omega.intervals) {
        auto pieces = well_refine_interval(w);
        if (pieces.size() == 1 && pieces[0].arc == w) ++out.passthrough_count;
        out.pieces.insert(out.pieces.end(), pieces.begin(), pieces.end());
    }
    return out;
}

long overlap_bound(const IntervalCollection& omega, std::size_t n) {
    const long half = static_cast<long>(n / 2);
    std::vector<long> diff(n + 1, 0);
    for (const auto& w : omega.intervals) {
        const double c = w.center();
        const double r = 1.5 * static_cast<double>(w.width());
        long lo = static_cast<long>(std::floor(c - r));
        long hi = static_cast<long>(std::ceil(c + r));
        lo = std::max(lo, -half);
        hi = std::min(hi, half);
        if (hi <= lo) continue;
        diff[static_cast<std::size_t>(lo + half)] += 1;
        diff[static_cast<std::size_t>(hi + half)] -= 1;
    }
    long best = 0, run = 0;
    for (std::size_t i = 0; i < n; ++i) {
        run += diff[i];
        best = std::max(best, run);
    }
    return best;
}

bool is_well_distributed(const IntervalCollection& omega, std::size_t n) {
    return overlap_bound(omega, n) <= 100;
}

}  // namespace lptile
