#pragma once

#include "lptile/intervals.hpp"

namespace lptile {

/// One arc of a Well(omega) refinement, flagged when grid truncation broke
/// the 2*omega' inside omega property (edge lumps, or a passthrough arc).
struct WellPiece {
    FreqInterval arc;
    bool lumped = false;
};

struct WellRefinement {
    std::vector<WellPiece> pieces;          // all arcs, grouped per source omega
    IntervalCollection collection() const;  // arcs only
    std::size_t passthrough_count = 0;      // arcs too narrow to refine
};

/// Refinement of a single arc by the model decomposition of [-1/2,1/2]:
/// central ninth plus geometric (4/5)-pieces whose distance to the boundary is
/// four times their length, transported affinely and cut to integers.  The
/// sub-resolution geometric tail is lumped into the outermost pieces (flagged).
/// Arcs too narrow to generate at least three integer pieces pass through
/// unchanged, flagged as lumped.
std::vector<WellPiece> well_refine_interval(FreqInterval omega);

/// Union of well_refine_interval over a disjoint collection.
WellRefinement well_refine(const IntervalCollection& omega);

/// ||sum_omega 1_{3 omega}||_inf over integer frequencies in [-n/2, n/2);
/// triplings are concentric, rounded outward to integers, clipped to range.
long overlap_bound(const IntervalCollection& omega, std::size_t n);

/// The paper's criterion: overlap bound at most 100.
bool is_well_distributed(const IntervalCollection& omega, std::size_t n);

}  // namespace lptile
