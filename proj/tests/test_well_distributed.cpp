#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lptile/projections.hpp"
#include "lptile/rng.hpp"
#include "lptile/well_distributed.hpp"

using namespace lptile;

namespace {
IntervalCollection random_disjoint(std::size_t n, std::size_t count, Rng& rng) {
    const long half = static_cast<long>(n / 2);
    std::vector<long> cuts;
    while (cuts.size() < 2 * count) {
        const long c = static_cast<long>(rng.below(n)) - half;
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    IntervalCollection om;
    for (std::size_t i = 0; i + 1 < cuts.size(); i += 2)
        if (cuts[i] < cuts[i + 1]) om.intervals.push_back({cuts[i], cuts[i + 1]});
    return om;
}
}  // namespace

TEST_CASE("model decomposition: first geometric piece and the 1/9 central arc") {
    // on [-1/2,1/2] scaled to [-512,512): k=0 right piece should sit at
    // [1/18, 13/90] of the width, i.e. [0.0556, 0.1444] in model coordinates
    const auto pieces = well_refine_interval({-512, 512});
    REQUIRE(pieces.size() > 10);
    // central arc spans [-1/18, 1/18]*1024 = [-56.9, 56.9]
    bool found_central = false;
    for (const auto& p : pieces)
        if (p.arc.lo == -57 && p.arc.hi == 57) found_central = true;
    CHECK(found_central);
    // the k=0 piece [0.0556, 0.1444] of the width, transported: [57, 148]
    bool found_k0 = false;
    for (const auto& p : pieces)
        if (p.arc.lo == 57 && p.arc.hi == 148) found_k0 = true;
    CHECK(found_k0);
}

TEST_CASE("model family: lengths sum to the whole and distances are four lengths") {
    // arithmetic identities of the continuum model, checked for k = 0,1,2
    double total = 1.0 / 9.0;
    for (int k = 0; k < 200; ++k)
        total += 2.0 * (4.0 / 45.0) * std::pow(0.8, k);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    for (int k = 0; k <= 2; ++k) {
        const double lo = 0.5 - (4.0 / 9.0) * std::pow(0.8, k);
        const double hi = 0.5 - (4.0 / 9.0) * std::pow(0.8, k + 1);
        const double len = hi - lo;
        const double dist = 0.5 - hi;
        CHECK(dist == doctest::Approx(4.0 * len).epsilon(1e-12));
    }
}

TEST_CASE("refinement partitions each arc exactly and keeps doubling inside") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const IntervalCollection om = random_disjoint(4096, 8, rng);
        const WellRefinement ref = well_refine(om);
        std::size_t idx = 0;
        for (const auto& w : om.intervals) {
            long covered = w.lo;
            while (idx < ref.pieces.size() && ref.pieces[idx].arc.lo == covered &&
                   ref.pieces[idx].arc.hi <= w.hi) {
                const auto& piece = ref.pieces[idx];
                CHECK(piece.arc.lo < piece.arc.hi);
                if (!piece.lumped) {
                    const double len = static_cast<double>(piece.arc.width());
                    CHECK(static_cast<double>(piece.arc.lo) - 0.5 * len >=
                          static_cast<double>(w.lo) - 1e-9);
                    CHECK(static_cast<double>(piece.arc.hi) + 0.5 * len <=
                          static_cast<double>(w.hi) + 1e-9);
                }
                covered = piece.arc.hi;
                ++idx;
                if (covered == w.hi) break;
            }
            CHECK(covered == w.hi);  // exact integer partition
        }
        CHECK(ref.collection().pairwise_disjoint());
    }
}

TEST_CASE("narrow arcs pass through unchanged and are flagged") {
    const auto pieces = well_refine_interval({5, 7});
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].arc == FreqInterval{5, 7});
    CHECK(pieces[0].lumped);

    // width four still generates a small valid decomposition
    const auto four = well_refine_interval({5, 9});
    CHECK(four.size() == 4);
    long covered = 5;
    for (const auto& piece : four) {
        CHECK(piece.arc.lo == covered);
        covered = piece.arc.hi;
    }
    CHECK(covered == 9);
}

TEST_CASE("overlap bound: unit arcs give exactly three") {
    IntervalCollection om;
    for (long k = -20; k < 20; ++k) om.intervals.push_back({k, k + 1});
    CHECK(overlap_bound(om, 256) == 3);
}

TEST_CASE("overlap bound: full lacunary family counts every scale at the origin") {
    // the tripling of [2^k, 2^(k+1)) is [0, 3*2^k), so every positive scale
    // covers frequency zero; the exhaustive count equals the number of scales
    IntervalCollection om;
    long scales = 0;
    for (long lo = 1; 2 * lo <= 2048; lo *= 2) {
        om.intervals.push_back({lo, 2 * lo});
        ++scales;
    }
    const long measured = overlap_bound(om, 4096);
    CHECK(measured == scales);
    // brute-force recount straight from the definition
    long brute = 0;
    for (long xi = -2048; xi < 2048; ++xi) {
        long c = 0;
        for (const auto& w : om.intervals) {
            const double center = w.center();
            const double r = 1.5 * static_cast<double>(w.width());
            const long lo = static_cast<long>(std::floor(center - r));
            const long hi = static_cast<long>(std::ceil(center + r));
            if (lo <= xi && xi < hi) ++c;
        }
        brute = std::max(brute, c);
    }
    CHECK(measured == brute);
}

TEST_CASE("refined collections stay under the well-distributed bound") {
    Rng rng(42);
    for (int trial = 0; trial < 8; ++trial) {
        const IntervalCollection om = random_disjoint(4096, 10, rng);
        const WellRefinement ref = well_refine(om);
        CHECK(overlap_bound(ref.collection(), 4096) <= 100);
        CHECK(is_well_distributed(ref.collection(), 4096));
    }
}

TEST_CASE("refinement preserves the L2 square function exactly") {
    const std::size_t n = 1024;
    Rng rng(43);
    const IntervalCollection om = random_disjoint(n, 6, rng);
    const WellRefinement ref = well_refine(om);
    for (int t = 0; t < 20; ++t) {
        TorusSignal f(n);
        for (std::size_t j = 0; j < n; ++j) f[j] = rng.complex_gaussian();
        const double a = lp_norm(square_sharp(f, om), 2.0);
        const double b = lp_norm(square_sharp(f, ref.collection()), 2.0);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("refinement keeps Lp norms within a reported bracket") {
    const std::size_t n = 512;
    Rng rng(44);
    const IntervalCollection om = random_disjoint(n, 5, rng);
    const WellRefinement ref = well_refine(om);
    double bracket = 1.0;
    for (int t = 0; t < 60; ++t) {
        TorusSignal f(n);
        for (std::size_t j = 0; j < n; ++j) f[j] = rng.complex_gaussian();
        for (double p : {3.0, 4.0}) {
            const double a = lp_norm(square_sharp(f, om), p);
            const double b = lp_norm(square_sharp(f, ref.collection()), p);
            bracket = std::max({bracket, a / b, b / a});
        }
    }
    CHECK(bracket < 4.0);  // empirical equivalence constant stays small
}

TEST_CASE("well_refine requires disjointness") {
    IntervalCollection bad;
    bad.intervals = {{0, 100}, {50, 200}};
    CHECK_THROWS_AS(well_refine(bad), std::invalid_argument);
}
