#include "lptile/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lptile/rng.hpp"
#include "lptile/well_distributed.hpp"

namespace lptile {

TorusSignal project(const TorusSignal& f, FreqInterval omega) {
    if (!omega.in_range(f.n()))
        throw std::invalid_argument("project: arc out of frequency range");
    Spectrum s = dft(f);
    for (long k = s.kmin(); k < s.kmax(); ++k)
        if (!omega.contains(k)) s.at(k) = 0.0;
    return idft(s);
}

TorusSignal hilbert(const TorusSignal& f) {
    Spectrum s = dft(f);
    for (long k = s.kmin(); k < s.kmax(); ++k) {
        if (k == 0 || k == s.kmin()) {
            s.at(k) = 0.0;
        } else {
            const double sgn = k > 0 ? 1.0 : -1.0;
            s.at(k) *= cplx(0.0, -sgn);
        }
    }
    return idft(s);
}

TorusSignal maximal(const TorusSignal& f) {
    const std::size_t n = f.n();
    // prefix sums of |f| over three periods so centered cyclic windows of any
    // radius up to n/2 stay in range
    std::vector<double> pre(3 * n + 1, 0.0);
    for (std::size_t j = 0; j < 3 * n; ++j) pre[j + 1] = pre[j] + std::abs(f[j % n]);
    TorusSignal out(n);
    const std::size_t tmax = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        double best = 0.0;
        const std::size_t c = j + n;  // sample j in the middle period
        for (std::size_t t = 0; t <= tmax; ++t) {
            const double mean = (pre[c + t + 1] - pre[c - t]) / static_cast<double>(2 * t + 1);
            best = std::max(best, mean);
        }
        out[j] = best;
    }
    return out;
}

TorusSignal square_sharp(const TorusSignal& f, const IntervalCollection& omega) {
    if (!omega.pairwise_disjoint())
        throw std::invalid_argument("square_sharp: arcs must be pairwise disjoint");
    if (!omega.in_range(f.n()))
        throw std::invalid_argument("square_sharp: arc out of frequency range");
    const std::size_t n = f.n();
    const Spectrum s = dft(f);
    std::vector<double> acc(n, 0.0);
    for (const auto& w : omega.intervals) {
        Spectrum part(n);
        for (long k = w.lo; k < w.hi; ++k) part.at(k) = s.at(k);
        const TorusSignal g = idft(part);
        for (std::size_t j = 0; j < n; ++j) acc[j] += std::norm(g[j]);
    }
    TorusSignal out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = std::sqrt(acc[j]);
    return out;
}

SmoothSquareResult square_smooth(const TorusSignal& f, const IntervalCollection& omega,
                                 bool allow_not_well_distributed) {
    const std::size_t n = f.n();
    if (!omega.in_range(n))
        throw std::invalid_argument("square_smooth: arc out of frequency range");

    SmoothSquareResult res;
    res.tripling_overlap = overlap_bound(omega, n);
    res.well_distributed = res.tripling_overlap <= 100;
    res.overridden = !res.well_distributed;
    if (!res.well_distributed && !allow_not_well_distributed)
        throw std::invalid_argument("square_smooth: collection is not well distributed");

    const Spectrum s = dft(f);
    std::vector<double> acc(n, 0.0), overlap(n, 0.0);
    for (const auto& w : omega.intervals) {
        const std::vector<double> hat = band_window_hat(n, w);
        Spectrum part(n);
        for (std::size_t i = 0; i < n; ++i) {
            part.data()[i] = s.data()[i] * hat[i];
            overlap[i] += hat[i] * hat[i];
        }
        const TorusSignal g = idft(part);
        for (std::size_t j = 0; j < n; ++j) acc[j] += std::norm(g[j]);
    }
    res.overlap_constant = *std::max_element(overlap.begin(), overlap.end());
    res.g = TorusSignal(n);
    for (std::size_t j = 0; j < n; ++j) res.g[j] = std::sqrt(acc[j]);
    return res;
}

std::vector<std::vector<double>> dyadic_band_windows(std::size_t n) {
    // psi_{j,+}: plateau [2^j, 2^(j+1)], support [2^(j-1), 5*2^(j-1)];
    // psi_{j,-} mirrored.  Keep scales whose support fits below n/2.
    std::vector<std::vector<double>> bands;
    const long half = static_cast<long>(n / 2);
    for (long scale = 1; 5 * scale / 2 < half; scale *= 2) {
        const double plo = static_cast<double>(scale);
        const double phi = static_cast<double>(2 * scale);
        const double slo = 0.5 * static_cast<double>(scale);
        const double shi = 2.5 * static_cast<double>(scale);
        for (int sgn : {+1, -1}) {
            std::vector<double> hat(n, 0.0);
            for (long k = -half; k < half; ++k) {
                const double u = sgn > 0 ? static_cast<double>(k) : -static_cast<double>(k);
                double v = 0.0;
                if (u >= plo && u <= phi) {
                    v = 1.0;
                } else if (u > slo && u < plo) {
                    v = smooth_transition((u - slo) / (plo - slo));
                } else if (u > phi && u < shi) {
                    v = smooth_transition((shi - u) / (shi - phi));
                }
                hat[static_cast<std::size_t>(k + half)] = v;
            }
            bands.push_back(std::move(hat));
        }
    }
    return bands;
}

KhintchineReport khintchine_gfunction(const TorusSignal& f, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("khintchine_gfunction: trials >= 1");
    const std::size_t n = f.n();
    const auto bands = dyadic_band_windows(n);
    const Spectrum s = dft(f);

    KhintchineReport rep;
    rep.ps = {2.0, 3.0, 4.0};
    rep.scales = static_cast<int>(bands.size() / 2);
    rep.trials = trials;
    rep.max_kernel_ratio.assign(rep.ps.size(), 0.0);
    rep.min_kernel_ratio.assign(rep.ps.size(), std::numeric_limits<double>::infinity());

    std::vector<double> fnorm(rep.ps.size());
    for (std::size_t i = 0; i < rep.ps.size(); ++i) fnorm[i] = lp_norm(f, rep.ps[i]);

    // dyadic G-function (sign-free part)
    std::vector<double> gacc(n, 0.0);
    for (const auto& hat : bands) {
        Spectrum part(n);
        for (std::size_t i = 0; i < n; ++i) part.data()[i] = s.data()[i] * hat[i];
        const TorusSignal g = idft(part);
        for (std::size_t j = 0; j < n; ++j) gacc[j] += std::norm(g[j]);
    }
    TorusSignal gfun(n);
    for (std::size_t j = 0; j < n; ++j) gfun[j] = std::sqrt(gacc[j]);
    rep.gfunction_ratio.resize(rep.ps.size());
    for (std::size_t i = 0; i < rep.ps.size(); ++i)
        rep.gfunction_ratio[i] = fnorm[i] > 0 ? lp_norm(gfun, rep.ps[i]) / fnorm[i] : 0.0;

    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        std::vector<double> khat(n, 0.0);
        for (const auto& hat : bands) {
            const double eps = static_cast<double>(rng.sign());
            for (std::size_t i = 0; i < n; ++i) khat[i] += eps * hat[i];
        }
        double msup = 0.0;
        Spectrum conv(n);
        for (std::size_t i = 0; i < n; ++i) {
            conv.data()[i] = s.data()[i] * khat[i];
            msup = std::max(msup, std::abs(khat[i]));
        }
        rep.kernel_multiplier_sup = msup;
        const TorusSignal kf = idft(conv);
        for (std::size_t i = 0; i < rep.ps.size(); ++i) {
            const double r = fnorm[i] > 0 ? lp_norm(kf, rep.ps[i]) / fnorm[i] : 0.0;
            rep.max_kernel_ratio[i] = std::max(rep.max_kernel_ratio[i], r);
            rep.min_kernel_ratio[i] = std::min(rep.min_kernel_ratio[i], r);
        }
    }
    return rep;
}

}  // namespace lptile
