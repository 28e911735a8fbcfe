#include "lptile/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lptile/rng.hpp"
#include "lptile/window.hpp"

namespace lptile {

namespace {
double fit_loglog_slope(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    const double d = static_cast<double>(cnt) * sxx - sx * sx;
    return (static_cast<double>(cnt) * sxy - sx * sy) / d;
}
}  // namespace

TorusSignal apply_multiplier(const TorusSignal& f, std::span<const cplx> m) {
    if (m.size() != f.n())
        throw std::invalid_argument("apply_multiplier: multiplier/domain mismatch");
    Spectrum s = dft(f);
    for (std::size_t i = 0; i < f.n(); ++i) s.data()[i] *= m[i];
    return idft(s);
}

TorusSignal apply_multiplier(const TorusSignal& f, const StepMultiplier& m) {
    const long half = static_cast<long>(f.n() / 2);
    if (m.domain_lo > -half || m.domain_hi < half)
        throw std::invalid_argument("apply_multiplier: multiplier domain too small");
    return apply_multiplier(f, m.sample(f.n()));
}

OpNormEstimate op_norm_p(std::span<const cplx> m, double p, std::uint64_t seed,
                         const OpNormOptions& opt) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("op_norm_p: requires p in (1, infinity)");
    const std::size_t n = m.size();

    OpNormEstimate est;
    if (p == 2.0) {
        double sup = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(m[i]) > sup) {
                sup = std::abs(m[i]);
                arg = i;
            }
        est.value = sup;
        Spectrum s(n);
        s.data()[arg] = 1.0;
        est.witness = idft(s);
        est.converged = true;
        return est;
    }

    const double pprime = p / (p - 1.0);
    std::vector<cplx> mconj(n);
    for (std::size_t i = 0; i < n; ++i) mconj[i] = std::conj(m[i]);

    auto dualize = [&](const TorusSignal& g, double expo) {
        // |g|^(expo-1) sign(g), then used under the conjugate norm
        TorusSignal out(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::abs(g[j]);
            out[j] = a > 0.0 ? std::pow(a, expo - 1.0) * (g[j] / a) : cplx{0.0, 0.0};
        }
        return out;
    };

    for (int r = 0; r < opt.restarts; ++r) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
        TorusSignal f(n);
        for (std::size_t j = 0; j < n; ++j) f[j] = rng.complex_gaussian();
        double fn = lp_norm(f, p);
        if (fn == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) f[j] /= fn;

        double last = 0.0;
        for (int it = 0; it < opt.iters; ++it) {
            const TorusSignal g = apply_multiplier(f, m);
            const double ratio = lp_norm(g, p);  // ||f||_p == 1
            if (ratio > est.value) {
                est.value = ratio;
                est.witness = f;
            }
            if (ratio <= 0.0) break;
            if (it > 0 && std::abs(ratio - last) <= opt.tol * ratio) {
                est.converged = true;
                est.iterations_used = std::max(est.iterations_used, it + 1);
                break;
            }
            last = ratio;
            // dual ascent: u = |g|^{p-1} sign g;  f <- dual_{p'}(A_m^* u)
            const TorusSignal u = dualize(g, p);
            const TorusSignal h = apply_multiplier(u, mconj);
            TorusSignal next = dualize(h, pprime);
            const double nn = lp_norm(next, p);
            if (nn == 0.0) break;
            for (std::size_t j = 0; j < n; ++j) next[j] /= nn;
            f = std::move(next);
            est.iterations_used = std::max(est.iterations_used, it + 1);
        }
    }
    return est;
}

std::vector<FreqInterval> lacunary_blocks(std::size_t n) {
    const long half = static_cast<long>(n / 2);
    std::vector<FreqInterval> blocks;
    // zero frequency and the two k=0 singletons form one extra block
    blocks.push_back({-1, 2});
    // positive blocks [2^k, 2^(k+1)), k >= 1
    for (long lo = 2; lo < half; lo *= 2) blocks.push_back({lo, std::min(2 * lo, half)});
    // mirrored negative blocks; the most negative one absorbs -n/2
    for (long lo = 2; lo < half; lo *= 2) {
        const long hi = std::min(2 * lo, half);
        if (hi == half)
            blocks.push_back({-half, -lo + 1});
        else
            blocks.push_back({-hi + 1, -lo + 1});
    }
    return blocks;
}

CrsReport crs_check(std::span<const cplx> m, double p, double q, std::uint64_t seed,
                    const OpNormOptions& opt) {
    if (!(std::abs(0.5 - 1.0 / p) < 1.0 / q))
        throw std::invalid_argument("crs_check: requires |1/2 - 1/p| < 1/q");
    const std::size_t n = m.size();
    CrsReport rep;
    for (const auto& block : lacunary_blocks(n)) {
        std::vector<cplx> vals;
        const long half = static_cast<long>(n / 2);
        for (long k = block.lo; k < block.hi; ++k)
            vals.push_back(m[static_cast<std::size_t>(k + half)]);
        rep.rhs = std::max(rep.rhs, vq_norm(std::span<const cplx>(vals), q));
    }
    rep.lhs = op_norm_p(m, p, seed, opt).value;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

DecoupleReport decouple_check(std::size_t n, double p, double q, std::uint64_t seed,
                              const OpNormOptions& opt) {
    const long half = static_cast<long>(n / 2);
    const auto blocks = lacunary_blocks(n);
    DecoupleReport rep;

    auto make_multiplier = [&](int n_sub, Rng& rng) {
        std::vector<cplx> m(n, 0.0);
        for (const auto& block : blocks) {
            const long w = block.width();
            const long cells = std::min<long>(n_sub, w);
            for (long c = 0; c < cells; ++c) {
                const long lo = block.lo + c * w / cells;
                const long hi = block.lo + (c + 1) * w / cells;
                const double a = rng.sign();
                for (long k = lo; k < hi; ++k) m[static_cast<std::size_t>(k + half)] = a;
            }
        }
        return m;
    };

    {
        Rng rng = Rng::stream(seed, 0);
        const auto m = make_multiplier(1, rng);
        rep.lacunary_lhs = op_norm_p(m, p, seed + 17, opt).value;
    }

    std::vector<double> xs, ys;
    for (int n_sub : {2, 4, 8, 16}) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(n_sub));
        const auto m = make_multiplier(n_sub, rng);
        DecoupleRow row;
        row.n_sub = n_sub;
        row.lhs = op_norm_p(m, p, seed + static_cast<std::uint64_t>(n_sub), opt).value;
        row.bound = std::pow(static_cast<double>(n_sub), 1.0 / q);
        row.constant = row.lhs / row.bound;
        rep.max_constant = std::max(rep.max_constant, row.constant);
        xs.push_back(static_cast<double>(n_sub));
        ys.push_back(row.lhs);
        rep.rows.push_back(row);
    }
    rep.fitted_slope = fit_loglog_slope(xs, ys);
    return rep;
}

RubioCounterexampleReport counterexample_rubio(std::size_t n, std::span<const long> Ns,
                                               double p) {
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("counterexample_rubio: requires p in (1,2)");
    RubioCounterexampleReport rep;
    rep.p = p;
    std::vector<double> xs, ys, fx;
    for (long N : Ns) {
        if (N < 1 || N > static_cast<long>(n / 4))
            throw std::invalid_argument("counterexample_rubio: need 1 <= N <= n/4");
        Spectrum s(n);
        for (long k = 0; k < N; ++k) s.at(k) = 1.0;
        const TorusSignal f = idft(s);
        const double fnorm = lp_norm(f, p);

        // For unit arcs each |S_omega f| is a constant |fhat(k)|, so
        // S^Omega f(0)^2 = sum_k |fhat(k)|^2; evaluate from the round-tripped
        // spectrum of the synthesized signal rather than the design values.
        const Spectrum rt = dft(f);
        double witness_sq = 0.0;
        for (long k = 0; k < N; ++k) witness_sq += std::norm(rt.at(k));
        RubioCounterexampleRow row;
        row.N = N;
        row.fnorm = fnorm;
        row.witness_value = std::sqrt(witness_sq) / std::sqrt(static_cast<double>(N));
        row.ratio = std::sqrt(static_cast<double>(N)) / fnorm;
        rep.rows.push_back(row);
        xs.push_back(static_cast<double>(N));
        ys.push_back(row.ratio);
        fx.push_back(fnorm);
    }
    rep.fitted_exponent = fit_loglog_slope(xs, ys);
    rep.fnorm_fitted_exponent = fit_loglog_slope(xs, fx);
    return rep;
}

MultiplierCounterexampleReport counterexample_multiplier(std::size_t n,
                                                         std::span<const long> Ns, double p,
                                                         int trials, std::uint64_t seed,
                                                         long spacing, double q) {
    if (p == 2.0) throw std::invalid_argument("counterexample_multiplier: requires p != 2");
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("counterexample_multiplier: p in (1,inf), p != 2");
    if (trials < 1) throw std::invalid_argument("counterexample_multiplier: trials >= 1");
    const long half = static_cast<long>(n / 2);
    const long bump_radius = spacing / 2 - 1;  // supports must not overlap
    if (bump_radius < 1)
        throw std::invalid_argument("counterexample_multiplier: spacing too small for bumps");
    const double pprime = p / (p - 1.0);

    MultiplierCounterexampleReport rep;
    rep.p = p;
    rep.q = q;
    rep.spacing = spacing;

    std::vector<double> xs, ys, vq;
    for (long N : Ns) {
        if (N * spacing + bump_radius + 2 > half)
            throw std::invalid_argument("counterexample_multiplier: N*spacing exceeds grid");
        Spectrum s(n);
        for (long k = 0; k < N * spacing; ++k) s.at(k) = 1.0;
        const TorusSignal f = idft(s);
        const double fp = lp_norm(f, p);
        const double fpp = lp_norm(f, pprime);

        MultiplierCounterexampleRow row;
        row.N = N;
        double acc_ratio = 0.0, acc_norm = 0.0;
        double best_wit = 0.0;
        std::vector<cplx> m(n, 0.0);
        for (int t = 0; t < trials; ++t) {
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t) * 1000 +
                                            static_cast<std::uint64_t>(N));
            std::fill(m.begin(), m.end(), cplx{0.0, 0.0});
            for (long k = 1; k <= N; ++k) {
                const double eps = rng.sign();
                const long c = k * spacing;
                for (long d = -bump_radius; d <= bump_radius; ++d) {
                    const double u = static_cast<double>(d) / static_cast<double>(bump_radius);
                    m[static_cast<std::size_t>(c + d + half)] +=
                        eps * window_profile(u, 0.25, 1.0);
                }
            }
            const TorusSignal g = apply_multiplier(f, m);
            const double gp = lp_norm(g, p);
            acc_ratio += gp / fp;
            acc_norm += gp / std::sqrt(static_cast<double>(N));
            // real multiplier: ||A_m||_p = ||A_m||_p', so both witness ratios
            // are valid lower bounds for the same operator norm
            const double wit = std::max(gp / fp, lp_norm(g, pprime) / fpp);
            best_wit = std::max(best_wit, wit);
        }
        row.mean_ratio = acc_ratio / trials;
        row.mean_norm_over_sqrtN = acc_norm / trials;
        row.witness_lower = best_wit;
        // Var_q over the multiplier's support range plus a zero margin
        {
            const long lo = spacing - bump_radius - 1 + half;
            const long hi = N * spacing + bump_radius + 1 + half;
            std::vector<cplx> restricted(m.begin() + lo, m.begin() + hi + 1);
            row.varq = var_q(std::span<const cplx>(restricted), q);
        }
        rep.rows.push_back(row);
        xs.push_back(static_cast<double>(N));
        ys.push_back(row.witness_lower);
        vq.push_back(row.varq);
    }
    rep.fitted_exponent = fit_loglog_slope(xs, ys);
    rep.varq_fitted_exponent = fit_loglog_slope(xs, vq);
    return rep;
}

}  // namespace lptile
