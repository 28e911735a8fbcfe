#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lptile/multiplier.hpp"
#include "lptile/projections.hpp"
#include "lptile/rng.hpp"

using namespace lptile;

namespace {
TorusSignal random_signal(std::size_t n, Rng& rng) {
    TorusSignal f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = rng.complex_gaussian();
    return f;
}

double max_abs_diff(const TorusSignal& a, const TorusSignal& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.n(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}
}  // namespace

TEST_CASE("apply_multiplier: identity, projection, Hilbert comparison") {
    const std::size_t n = 64;
    Rng rng(101);
    const TorusSignal f = random_signal(n, rng);

    std::vector<cplx> ones(n, 1.0);
    CHECK(max_abs_diff(apply_multiplier(f, ones), f) < 1e-12);

    std::vector<cplx> ind(n, 0.0);
    for (long k = 3; k < 17; ++k) ind[static_cast<std::size_t>(k + 32)] = 1.0;
    CHECK(max_abs_diff(apply_multiplier(f, ind), project(f, {3, 17})) < 1e-12);

    // sign multiplier: A_sign = i * H away from the zeroed frequencies
    std::vector<cplx> sign(n, 0.0);
    for (long k = -31; k < 32; ++k)
        if (k != 0) sign[static_cast<std::size_t>(k + 32)] = k > 0 ? 1.0 : -1.0;
    const TorusSignal a = apply_multiplier(f, sign);
    const TorusSignal h = hilbert(f);
    TorusSignal ih(n);
    for (std::size_t j = 0; j < n; ++j) ih[j] = cplx{0.0, 1.0} * h[j];
    CHECK(max_abs_diff(a, ih) < 1e-12);
}

TEST_CASE("apply_multiplier is linear and commutes with translation") {
    const std::size_t n = 64;
    Rng rng(102);
    const TorusSignal f = random_signal(n, rng);
    const TorusSignal g = random_signal(n, rng);
    std::vector<cplx> m(n);
    for (auto& z : m) z = rng.complex_gaussian();

    TorusSignal fg(n);
    for (std::size_t j = 0; j < n; ++j) fg[j] = 2.0 * f[j] - cplx{0.0, 1.0} * g[j];
    TorusSignal lin(n);
    const TorusSignal af = apply_multiplier(f, m);
    const TorusSignal ag = apply_multiplier(g, m);
    for (std::size_t j = 0; j < n; ++j) lin[j] = 2.0 * af[j] - cplx{0.0, 1.0} * ag[j];
    CHECK(max_abs_diff(apply_multiplier(fg, m), lin) < 1e-12);

    CHECK(max_abs_diff(apply_multiplier(translate(f, 9), m),
                       translate(apply_multiplier(f, m), 9)) < 1e-12);
}

TEST_CASE("op_norm_p: exact at p = 2, constants at every p") {
    const std::size_t n = 128;
    Rng rng(103);
    std::vector<cplx> m(n);
    for (auto& z : m) z = rng.complex_gaussian();
    double sup = 0.0;
    for (const auto& z : m) sup = std::max(sup, std::abs(z));
    const OpNormEstimate e2 = op_norm_p(m, 2.0, 1);
    CHECK(e2.value == doctest::Approx(sup).epsilon(1e-14));

    std::vector<cplx> c(n, cplx{0.0, -1.5});
    OpNormOptions light{4, 40};
    for (double p : {1.5, 3.0, 4.0})
        CHECK(op_norm_p(c, p, 2, light).value == doctest::Approx(1.5).epsilon(1e-8));
    CHECK_THROWS_AS(op_norm_p(m, 1.0, 3), std::invalid_argument);
}

TEST_CASE("op_norm_p: witness achieves the reported ratio exactly") {
    const std::size_t n = 256;
    Rng rng(104);
    std::vector<cplx> m(n);
    for (auto& z : m) z = rng.complex_gaussian();
    OpNormOptions light{5, 60};
    const OpNormEstimate est = op_norm_p(m, 3.0, 11, light);
    REQUIRE(est.witness.n() == n);
    const double re_eval = lp_norm(apply_multiplier(est.witness, m), 3.0) /
                           lp_norm(est.witness, 3.0);
    CHECK(re_eval == doctest::Approx(est.value).epsilon(1e-12));
}

TEST_CASE("op_norm_p: dual exponents agree within Monte Carlo tolerance") {
    const std::size_t n = 256;
    std::vector<cplx> m(n, 0.0);
    for (long k = -128; k < 128; ++k)
        m[static_cast<std::size_t>(k + 128)] = (k >= 0) ? 1.0 : 0.2;
    OpNormOptions opts{10, 120};
    const double at_p = op_norm_p(m, 4.0, 5, opts).value;
    const double at_pp = op_norm_p(m, 4.0 / 3.0, 5, opts).value;
    CHECK(std::abs(at_p - at_pp) / std::max(at_p, at_pp) < 0.15);
}

TEST_CASE("op_norm_p: sign multiplier at p = 4 against Monte Carlo and the classical norm") {
    const std::size_t n = 1024;
    std::vector<cplx> m(n, 0.0);
    for (long k = -512; k < 512; ++k)
        if (k != 0) m[static_cast<std::size_t>(k + 512)] = k > 0 ? 1.0 : -1.0;
    OpNormOptions opts{8, 100};
    const double est = op_norm_p(m, 4.0, 21, opts).value;

    // Monte Carlo cross-check.  Raw Gaussian sampling undershoots the sup by
    // a measured ~45% at this size, so the frozen bracket is est in
    // [best, 1.6*best]; re-running the fixed point from the best Monte Carlo
    // witness recovers the estimate to within 10%.
    Rng rng(105);
    double best = 0.0;
    TorusSignal argbest(n);
    for (int t = 0; t < 10000; ++t) {
        const TorusSignal f = random_signal(n, rng);
        const double r = lp_norm(apply_multiplier(f, m), 4.0) / lp_norm(f, 4.0);
        if (r > best) {
            best = r;
            argbest = f;
        }
    }
    CHECK(est >= best * 0.999);
    CHECK(est <= 2.0 * best);

    TorusSignal f = argbest;
    double ratio = 0.0;
    for (int it = 0; it < 60; ++it) {
        const TorusSignal g = apply_multiplier(f, m);
        ratio = lp_norm(g, 4.0) / lp_norm(f, 4.0);
        TorusSignal u(n), next(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::abs(g[j]);
            u[j] = a > 0 ? std::pow(a, 3.0) * (g[j] / a) : cplx{0.0, 0.0};
        }
        const TorusSignal h = apply_multiplier(u, m);  // real multiplier: self-adjoint
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::abs(h[j]);
            next[j] = a > 0 ? std::pow(a, 4.0 / 3.0 - 1.0) * (h[j] / a) : cplx{0.0, 0.0};
        }
        const double nn = lp_norm(next, 4.0);
        REQUIRE(nn > 0.0);
        for (std::size_t j = 0; j < n; ++j) next[j] /= nn;
        f = next;
    }
    CHECK(std::abs(ratio - est) / est < 0.10);

    // frozen regression value: every start converges to 1.8956 at this size
    // (1.90 with 4x50, 1.895555 from 16x300 on), below the classical real
    // conjugation constant cot(pi/8) = 2.414
    CHECK(est == doctest::Approx(1.8956).epsilon(5e-3));
    CHECK(est <= 1.0 / std::tan(M_PI / 8.0));
}

TEST_CASE("lacunary blocks partition the frequency range") {
    for (std::size_t n : {16u, 64u, 4096u}) {
        const auto blocks = lacunary_blocks(n);
        std::vector<int> cover(n, 0);
        for (const auto& b : blocks)
            for (long k = b.lo; k < b.hi; ++k)
                ++cover[static_cast<std::size_t>(k + static_cast<long>(n / 2))];
        for (int c : cover) CHECK(c == 1);
    }
}

TEST_CASE("crs_check: constants give ratio one; jump multipliers have rhs two") {
    const std::size_t n = 512;
    std::vector<cplx> ones(n, 1.0);
    OpNormOptions light{4, 50};
    const CrsReport r1 = crs_check(ones, 3.0, 2.0, 7, light);
    CHECK(r1.rhs == doctest::Approx(1.0));
    CHECK(r1.lhs == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r1.ratio == doctest::Approx(1.0).epsilon(1e-6));

    // one unit jump inside every lacunary block: sup 1 plus variation 1
    std::vector<cplx> m(n, 0.0);
    for (const auto& b : lacunary_blocks(n)) {
        const long mid = b.lo + b.width() / 2;
        for (long k = mid; k < b.hi; ++k) m[static_cast<std::size_t>(k + 256)] = 1.0;
    }
    const CrsReport r2 = crs_check(m, 3.0, 2.0, 8, light);
    CHECK(r2.rhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r2.lhs > 0.0);
    CHECK_THROWS_AS(crs_check(m, 4.0, 8.0, 9, light), std::invalid_argument);
}

TEST_CASE("crs rhs is invariant under modulation of block positions") {
    // re-centering the values inside each block leaves V_q per block unchanged
    const std::size_t n = 256;
    Rng rng(106);
    std::vector<cplx> m(n, 0.0);
    const auto blocks = lacunary_blocks(n);
    for (const auto& b : blocks) {
        const cplx a = rng.complex_gaussian();
        for (long k = b.lo; k < b.hi; ++k) m[static_cast<std::size_t>(k + 128)] = a;
    }
    double rhs1 = 0.0, rhs2 = 0.0;
    for (const auto& b : blocks) {
        std::vector<cplx> vals, shuffled;
        for (long k = b.lo; k < b.hi; ++k) vals.push_back(m[static_cast<std::size_t>(k + 128)]);
        shuffled.assign(vals.rbegin(), vals.rend());
        rhs1 = std::max(rhs1, vq_norm(std::span<const cplx>(vals), 2.0));
        rhs2 = std::max(rhs2, vq_norm(std::span<const cplx>(shuffled), 2.0));
    }
    CHECK(rhs1 == doctest::Approx(rhs2).epsilon(1e-13));
}

TEST_CASE("decouple_check: flat coefficients at p = 2 stay exactly flat") {
    // at p = 2 the operator norm is ||m||_inf = 1 for every refinement
    const std::size_t n = 512;
    OpNormOptions light{3, 30};
    const DecoupleReport rep = decouple_check(n, 2.0, 8.0, 13, light);
    for (const auto& row : rep.rows) CHECK(row.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.fitted_slope) < 0.01);
}

TEST_CASE("counterexample_rubio: ratios, pointwise witness, exponents") {
    const std::size_t n = 4096;
    const std::vector<long> Ns{64, 128, 256, 512};
    const RubioCounterexampleReport rep = counterexample_rubio(n, Ns, 4.0 / 3.0);
    REQUIRE(rep.rows.size() == 4);
    for (const auto& row : rep.rows) {
        CHECK(row.witness_value == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(row.ratio > 0.0);
    }
    CHECK(rep.fitted_exponent > 0.15);
    CHECK(rep.fitted_exponent < 0.30);
    CHECK_THROWS_AS(counterexample_rubio(n, Ns, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(counterexample_rubio(256, std::vector<long>{100}, 1.5),
                    std::invalid_argument);
}

TEST_CASE("counterexample_rubio: the square function really is sqrt(N) pointwise") {
    const std::size_t n = 1024;
    const long N = 64;
    Spectrum s(n);
    for (long k = 0; k < N; ++k) s.at(k) = 1.0;
    const TorusSignal f = idft(s);
    IntervalCollection om;
    for (long k = 0; k < N; ++k) om.intervals.push_back({k, k + 1});
    const TorusSignal sq = square_sharp(f, om);
    for (std::size_t j = 0; j < n; ++j)
        CHECK(sq[j].real() == doctest::Approx(std::sqrt(static_cast<double>(N))).epsilon(1e-12));
}

TEST_CASE("counterexample_multiplier: all-plus signs at p = 2 give the bump height") {
    const std::size_t n = 2048;
    // trials = 1 with any seed gives one draw; check the p = 2 norm of that
    // multiplier directly instead
    Rng rng(107);
    std::vector<cplx> m(n, 0.0);
    const long spacing = 8, radius = 3;
    for (long k = 1; k <= 16; ++k)
        for (long d = -radius; d <= radius; ++d) {
            const double u = static_cast<double>(d) / static_cast<double>(radius);
            m[static_cast<std::size_t>(k * spacing + d + 1024)] += window_profile(u, 0.25, 1.0);
        }
    const OpNormEstimate e = op_norm_p(m, 2.0, 1);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("counterexample_multiplier: Khintchine scaling and witness exponent") {
    const std::size_t n = 4096;
    const std::vector<long> Ns{16, 32, 64, 128};
    const MultiplierCounterexampleReport rep =
        counterexample_multiplier(n, Ns, 4.0, 8, 313, 8, 2.0);
    REQUIRE(rep.rows.size() == 4);
    double lo = 1e18, hi = 0.0;
    for (const auto& row : rep.rows) {
        lo = std::min(lo, row.mean_norm_over_sqrtN);
        hi = std::max(hi, row.mean_norm_over_sqrtN);
        CHECK(row.varq > 0.0);
    }
    CHECK(hi < 2.0 * lo);  // E||A_m f||_p / sqrt(N) stable across N
    CHECK(rep.fitted_exponent >= 0.25 - 0.05);
    CHECK(rep.varq_fitted_exponent == doctest::Approx(0.5).epsilon(0.2));
    CHECK_THROWS_AS(counterexample_multiplier(n, Ns, 2.0, 2, 1, 8, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(counterexample_multiplier(256, std::vector<long>{100}, 4.0, 2, 1, 8, 2.0),
                    std::invalid_argument);
}
