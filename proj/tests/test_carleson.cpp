#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include <bit>

#include "lptile/carleson.hpp"
#include "lptile/projections.hpp"
#include "lptile/rng.hpp"

using namespace lptile;

namespace {
CarlesonSeq random_seq(int depth, Rng& rng) {
    CarlesonSeq a(depth);
    for (int k = 0; k <= depth; ++k) {
        const long count = 1ll << k;
        for (long j = 0; j < count; ++j)
            if (rng.uniform01() < 0.5) a.at(k, j) = rng.uniform01() / static_cast<double>(count);
    }
    return a;
}
}  // namespace

TEST_CASE("cm_norm: canonical examples") {
    {
        CarlesonSeq a(4);
        a.at(2, 1) = 0.25;  // alpha(I0) = |I0|
        CHECK(cm_norm(a) == doctest::Approx(1.0));
    }
    {
        const int D = 5;
        CarlesonSeq a(D);
        for (int k = 0; k <= D; ++k) {
            const long count = 1ll << k;
            for (long j = 0; j < count; ++j) a.at(k, j) = 1.0 / static_cast<double>(count);
        }
        CHECK(cm_norm(a) == doctest::Approx(static_cast<double>(D + 1)));
    }
    CHECK(cm_norm(CarlesonSeq(6)) == 0.0);
}

TEST_CASE("cm_norm: tree pass equals the independent descendant scan") {
    Rng rng(71);
    for (int t = 0; t < 100; ++t) {
        const CarlesonSeq a = random_seq(8, rng);
        CHECK(cm_norm(a) == doctest::Approx(cm_norm_scan(a)).epsilon(1e-12));
    }
    // and at the deepest battery depth once
    const CarlesonSeq deep = random_seq(14, rng);
    CHECK(cm_norm(deep) == doctest::Approx(cm_norm_scan(deep)).epsilon(1e-12));
}

TEST_CASE("cm_norm is subadditive") {
    Rng rng(72);
    for (int t = 0; t < 50; ++t) {
        CarlesonSeq a = random_seq(7, rng);
        const CarlesonSeq b = random_seq(7, rng);
        const double na = cm_norm(a), nb = cm_norm(b);
        a += b;
        CHECK(cm_norm(a) <= na + nb + 1e-12);
    }
}

TEST_CASE("dyadic BMO: constants, half indicator, exhaustive oracle") {
    TorusSignal c(64);
    for (std::size_t j = 0; j < 64; ++j) c[j] = cplx{5.0, -1.0};
    CHECK(dyadic_bmo(c) < 1e-14);

    TorusSignal half(64);
    for (std::size_t j = 0; j < 32; ++j) half[j] = 1.0;
    CHECK(dyadic_bmo(half) == doctest::Approx(0.5));

    Rng rng(73);
    TorusSignal g(64);
    for (std::size_t j = 0; j < 64; ++j) g[j] = rng.complex_gaussian();
    // oracle: direct two-loop scan over all dyadic intervals
    double best = 0.0;
    for (int k = 0; k <= 6; ++k) {
        const std::size_t len = 64u >> k;
        for (std::size_t j0 = 0; j0 < 64; j0 += len) {
            cplx mean = 0.0;
            for (std::size_t j = j0; j < j0 + len; ++j) mean += g[j];
            mean /= static_cast<double>(len);
            double osc = 0.0;
            for (std::size_t j = j0; j < j0 + len; ++j) osc += std::abs(g[j] - mean);
            best = std::max(best, osc / static_cast<double>(len));
        }
    }
    CHECK(dyadic_bmo(g) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("dyadic BMO is unchanged by adding constants") {
    Rng rng(74);
    TorusSignal g(128);
    for (std::size_t j = 0; j < 128; ++j) g[j] = rng.complex_gaussian();
    TorusSignal shifted(128);
    for (std::size_t j = 0; j < 128; ++j) shifted[j] = g[j] + cplx{3.25, -1.5};
    CHECK(dyadic_bmo(g) == doctest::Approx(dyadic_bmo(shifted)).epsilon(1e-12));
}

TEST_CASE("sharp function: constants vanish, half indicator, maximal domination") {
    TorusSignal c(64);
    for (std::size_t j = 0; j < 64; ++j) c[j] = 2.0;
    CHECK(lp_norm(sharp_function(c), std::numeric_limits<double>::infinity()) < 1e-13);

    TorusSignal half(64);
    for (std::size_t j = 0; j < 32; ++j) half[j] = 1.0;
    const TorusSignal sh = sharp_function(half);
    for (std::size_t j = 0; j < 64; ++j)
        CHECK(sh[j].real() == doctest::Approx(0.5));  // attained at the root only

    Rng rng(75);
    TorusSignal g(128);
    for (std::size_t j = 0; j < 128; ++j) g[j] = rng.complex_gaussian();
    const TorusSignal shg = sharp_function(g);
    TorusSignal g2(128);
    for (std::size_t j = 0; j < 128; ++j) g2[j] = std::norm(g[j]);
    const TorusSignal mg2 = maximal(g2);
    for (std::size_t j = 0; j < 128; ++j)
        CHECK(shg[j].real() <= 2.0 * std::sqrt(mg2[j].real()) + 1e-12);
}

TEST_CASE("sharp function norms are comparable to the function norms") {
    Rng rng(76);
    for (double p : {2.0, 4.0}) {
        double lo = 1e9, hi = 0.0;
        for (int t = 0; t < 20; ++t) {
            TorusSignal g(256);
            for (std::size_t j = 0; j < 256; ++j) g[j] = rng.complex_gaussian();
            // mean-zero
            cplx mean = 0.0;
            for (std::size_t j = 0; j < 256; ++j) mean += g[j];
            mean /= 256.0;
            for (std::size_t j = 0; j < 256; ++j) g[j] -= mean;
            const double r = lp_norm(sharp_function(g), p) / lp_norm(g, p);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(lo > 0.2);
        CHECK(hi < 5.0);
    }
}

TEST_CASE("jn_check: exact value for a single-interval weight and p=1 bound") {
    CarlesonSeq a(6);
    const DyadicInterval J{2, 1};
    a.at(2, 1) = 0.25;  // alpha(J) = |J|
    // F = 1 on J, so ||F||_p = |J|^{1/p} and cm = 1
    for (double p : {1.5, 2.0, 3.0})
        CHECK(jn_check(a, p, J) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(jn_check(a, 1.0, J), std::invalid_argument);

    // at p = 1 the ratio is at most 1 by definition of the Carleson norm;
    // assert through the norm identity instead of the p > 1 guard
    Rng rng(77);
    for (int t = 0; t < 25; ++t) {
        const CarlesonSeq b = random_seq(7, rng);
        if (cm_norm(b) == 0.0) continue;
        const TorusSignal f = jn_function(b, DyadicInterval{0, 0});
        CHECK(lp_norm(f, 1.0) <= cm_norm(b) + 1e-12);
    }
}

TEST_CASE("jn_check ratios drift slowly with depth") {
    Rng rng(78);
    for (double p : {2.0, 3.0}) {
        double m8 = 0.0, m12 = 0.0;
        for (int t = 0; t < 200; ++t) {
            Rng ra = Rng::stream(1000, static_cast<std::uint64_t>(t));
            m8 = std::max(m8, jn_check(random_seq(8, ra), p, DyadicInterval{0, 0}));
            Rng rb = Rng::stream(1000, static_cast<std::uint64_t>(t));
            m12 = std::max(m12, jn_check(random_seq(12, rb), p, DyadicInterval{0, 0}));
        }
        CHECK(m12 < 2.0 * m8);
        CHECK(m8 < 2.0 * m12);
    }
    (void)rng;
}

TEST_CASE("product CM: single rectangle gives one in all modes") {
    ProductCarlesonSeq a(3, 3);
    a.at(1, 0, 2, 3) = 1.0 / (2.0 * 4.0);  // alpha(R0) = |R0|
    for (auto mode : {ProductCmMode::RectOnly, ProductCmMode::Exhaustive,
                      ProductCmMode::Heuristic})
        CHECK(product_cm_norm(a, mode) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(product_cm_norm(ProductCarlesonSeq(3, 3), ProductCmMode::Exhaustive) == 0.0);
}

TEST_CASE("product CM: crossed strips separate exhaustive from rect-only") {
    // a row strip and a column strip, each of weight equal to its own area:
    // every dyadic rectangle sees density at most one, while their union has
    // measure 7/16 and mass 1/2, so the true norm is 8/7
    ProductCarlesonSeq a(2, 2);
    a.at(2, 0, 0, 0) = 0.25;  // [0,1/4] x [0,1]
    a.at(0, 0, 2, 0) = 0.25;  // [0,1] x [0,1/4]
    const double rect = product_cm_norm(a, ProductCmMode::RectOnly);
    const double exact = product_cm_norm(a, ProductCmMode::Exhaustive);
    const double heur = product_cm_norm(a, ProductCmMode::Heuristic);
    CHECK(rect == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact == doctest::Approx(8.0 / 7.0).epsilon(1e-12));
    CHECK(rect < exact - 0.1);  // strictly smaller, the hand-built gap
    CHECK(heur <= exact + 1e-12);
    CHECK(heur == doctest::Approx(8.0 / 7.0).epsilon(1e-12));  // greedy finds the cross
}

TEST_CASE("product CM: exhaustive subset enumeration matches full cell enumeration") {
    // independent oracle on 4x4 grids: enumerate all 2^16 cell unions directly
    Rng rng(79);
    for (int t = 0; t < 10; ++t) {
        ProductCarlesonSeq a(2, 2);
        int placed = 0;
        while (placed < 6) {
            const int k1 = static_cast<int>(rng.below(3));
            const int k2 = static_cast<int>(rng.below(3));
            const long j1 = static_cast<long>(rng.below(1ull << k1));
            const long j2 = static_cast<long>(rng.below(1ull << k2));
            if (a.at(k1, j1, k2, j2) == 0.0) {
                a.at(k1, j1, k2, j2) =
                    rng.uniform01() / static_cast<double>((1ll << k1) * (1ll << k2));
                ++placed;
            }
        }
        // oracle over every union of finest cells
        double oracle = 0.0;
        for (std::uint32_t mask = 1; mask < (1u << 16); ++mask) {
            double num = 0.0;
            for (int k1 = 0; k1 <= 2; ++k1)
                for (int k2 = 0; k2 <= 2; ++k2)
                    for (long j1 = 0; j1 < (1l << k1); ++j1)
                        for (long j2 = 0; j2 < (1l << k2); ++j2) {
                            const double v = a.at(k1, j1, k2, j2);
                            if (v == 0.0) continue;
                            bool inside = true;
                            for (long c1 = j1 << (2 - k1);
                                 inside && c1 < (j1 + 1) << (2 - k1); ++c1)
                                for (long c2 = j2 << (2 - k2);
                                     inside && c2 < (j2 + 1) << (2 - k2); ++c2)
                                    if (!(mask & (1u << (c1 * 4 + c2)))) inside = false;
                            if (inside) num += v;
                        }
            const double cells = static_cast<double>(std::popcount(mask));
            oracle = std::max(oracle, num * 16.0 / cells);
        }
        CHECK(product_cm_norm(a, ProductCmMode::Exhaustive) ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("product JN step: zero weight and single-rectangle termination") {
    ProductCarlesonSeq zero(3, 3);
    CellMask U(64, true);
    const ProductJnStep s0 = product_jn_step(zero, U, 2.0);
    CHECK(s0.norm_FU == 0.0);
    CHECK(s0.halved);

    ProductCarlesonSeq one(3, 3);
    one.at(3, 2, 3, 5) = 1.0 / 64.0;
    const ProductJnStep s1 = product_jn_step(one, U, 2.0);
    CHECK(s1.halved);
    CHECK(s1.measure_V < 0.5 * s1.measure_U);
    // recursion ends immediately: either V is empty or it misses the cell
    if (s1.measure_V > 0.0) {
        const ProductJnStep s2 = product_jn_step(one, s1.V, 2.0);
        CHECK(s2.halved);
    }
    CHECK_THROWS_AS(product_jn_step(one, U, 0.5), std::invalid_argument);
}

TEST_CASE("product JN recursion bound stays within factor four of the oracle") {
    // unrolling ||F_U||_p <= C (|U|^{1/p} + ||F_V||_p) down a halving chain
    // bounds the oracle ratio ||F_U||_p / (cm * |U|^{1/p}) within the factor
    // sum_i |U_i|^{1/p} / |U|^{1/p} <= 1/(1 - 2^{-1/p}) < 4 at p = 2
    Rng rng(81);
    const double p = 2.0;
    for (int t = 0; t < 20; ++t) {
        ProductCarlesonSeq alpha(3, 3);
        int placed = 0;
        while (placed < 8) {
            const int k1 = static_cast<int>(rng.below(4));
            const int k2 = static_cast<int>(rng.below(4));
            const long j1 = static_cast<long>(rng.below(1ull << k1));
            const long j2 = static_cast<long>(rng.below(1ull << k2));
            if (alpha.at(k1, j1, k2, j2) == 0.0) {
                alpha.at(k1, j1, k2, j2) =
                    rng.uniform01() / static_cast<double>((1ll << k1) * (1ll << k2));
                ++placed;
            }
        }
        if (t % 2 == 1)
            for (int k = 2; k <= 3; ++k)
                alpha.at(k, 0, k, 0) += 8.0 / static_cast<double>((1ll << k) * (1ll << k));

        const double cm = product_cm_norm(alpha, ProductCmMode::Exhaustive);
        if (cm == 0.0) continue;
        CellMask U(64, true);
        const double norm0 = lp_norm2(product_jn_function(alpha, U), p);
        const double r_oracle = norm0 / cm;  // |U| = 1

        double cmax = 0.0, sum_meas = 0.0;
        int steps = 0;
        bool terminated = false;
        while (true) {
            const ProductJnStep st = product_jn_step(alpha, U, p);
            REQUIRE(st.halved);
            cmax = std::max(cmax, st.constant);
            sum_meas += std::pow(st.measure_U, 1.0 / p);
            ++steps;
            if (st.norm_FV == 0.0 || st.measure_V == 0.0) {
                terminated = true;
                break;
            }
            if (steps > 8) break;
            U = st.V;
        }
        REQUIRE(terminated);
        const double bound = cmax * sum_meas / cm;
        CHECK(bound >= r_oracle - 1e-10);
        CHECK(bound <= 4.0 * r_oracle + 1e-10);
    }
}

TEST_CASE("carleson CSV round trips") {
    Rng rng(80);
    const CarlesonSeq a = random_seq(6, rng);
    std::stringstream ss;
    write_carleson_csv(a, ss);
    const CarlesonSeq b = read_carleson_csv(ss);
    REQUIRE(b.depth == a.depth);
    for (int k = 0; k <= a.depth; ++k)
        for (long j = 0; j < (1l << k); ++j)
            CHECK(b.at(k, j) == a.at(k, j));

    ProductCarlesonSeq pa(2, 3);
    pa.at(1, 1, 2, 2) = 0.125;
    pa.at(0, 0, 3, 7) = 0.5;
    std::stringstream ps;
    write_product_carleson_csv(pa, ps);
    const ProductCarlesonSeq pb = read_product_carleson_csv(ps);
    CHECK(pb.at(1, 1, 2, 2) == 0.125);
    CHECK(pb.at(0, 0, 3, 7) == 0.5);
}
