#include "lptile/tiles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "lptile/projections.hpp"
#include "lptile/rng.hpp"

#include "json.hpp"

namespace lptile {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Envelope {
    long k0 = 0;
    std::vector<double> values;  // sqrt(|I|) * P(|I|(k-c)) over the support
};

Envelope make_envelope(std::size_t n, FreqInterval omega, int level, double prad, double srad) {
    const double ilen = 1.0 / static_cast<double>(1ll << level);
    const double c = omega.center();
    const long half = static_cast<long>(n / 2);
    // support: |I|(k-c)| < srad  ->  |k-c| < srad/|I|
    const double radius = srad / ilen;
    long lo = std::max(-half, static_cast<long>(std::floor(c - radius)));
    long hi = std::min(half, static_cast<long>(std::ceil(c + radius)) + 1);
    Envelope e;
    e.k0 = lo;
    e.values.resize(static_cast<std::size_t>(hi - lo));
    const double amp = std::sqrt(ilen);
    for (long k = lo; k < hi; ++k)
        e.values[static_cast<std::size_t>(k - lo)] =
            amp * window_profile(ilen * (static_cast<double>(k) - c), prad, srad);
    return e;
}

double fit_slope(std::span<const double> logx, std::span<const double> logy) {
    const std::size_t m = logx.size();
    if (m < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += logx[i];
        sy += logy[i];
        sxx += logx[i] * logx[i];
        sxy += logx[i] * logy[i];
    }
    const double d = static_cast<double>(m) * sxx - sx * sx;
    return (static_cast<double>(m) * sxy - sx * sy) / d;
}
}  // namespace

double TileSet::packet_norm(std::size_t b) const {
    double acc = 0.0;
    for (double v : bands[b].envelope) acc += v * v;
    return std::sqrt(acc);
}

int dual_level(std::size_t n, FreqInterval omega) {
    const long w = omega.width();
    if (w < 1) throw std::invalid_argument("dual_level: empty arc");
    int level = 0;
    while ((2ll << level) <= w) ++level;  // smallest level with 2^(level+1) > w
    // now 2^level <= w < 2^(level+1), so |I| = 2^-level gives 1 <= |I| w < 2
    if ((std::size_t{1} << level) > n)
        throw std::invalid_argument("dual_level: arc too wide for the grid");
    return level;
}

TileSet build_tiles(std::size_t n, const IntervalCollection& omega, double prad, double srad) {
    if (!omega.pairwise_disjoint())
        throw std::invalid_argument("build_tiles: arcs must be pairwise disjoint");
    if (!omega.in_range(n)) throw std::invalid_argument("build_tiles: arc out of range");
    TileSet T;
    T.n = n;
    T.source = omega;
    for (const auto& w : omega.intervals) {
        const int level = dual_level(n, w);
        Envelope e = make_envelope(n, w, level, prad, srad);
        TileBand band;
        band.freq = w;
        band.level = level;
        band.k0 = e.k0;
        band.envelope = std::move(e.values);
        const long count = 1ll << level;
        for (long off = 0; off < count; ++off) {
            band.tile_index.push_back(T.tiles.size());
            T.tiles.push_back({DyadicInterval{level, off}, w});
        }
        T.bands.push_back(std::move(band));
    }
    return T;
}

TileSet build_tiles(std::size_t n, const IntervalCollection& omega, const Window& w) {
    const double ratio = static_cast<double>(w.plateau.width()) /
                         static_cast<double>(w.support.width());
    return build_tiles(n, omega, 2.0 * ratio, 2.0);
}

std::vector<cplx> tile_coefficients(const Spectrum& fhat, const TileSet& T) {
    std::vector<cplx> coefs(T.tiles.size());
    for (const auto& band : T.bands) {
        const double c = band.freq.center();
        for (std::size_t t = 0; t < band.tile_index.size(); ++t) {
            const std::size_t idx = band.tile_index[t];
            const double xc = T.tiles[idx].spatial.center();
            // <f, phi_s> = sum_k fhat(k) E(k) exp(+2 pi i c(I_s)(k - c))
            cplx acc = 0.0;
            for (std::size_t i = 0; i < band.envelope.size(); ++i) {
                const long k = band.k0 + static_cast<long>(i);
                const double ang = kTwoPi * xc * (static_cast<double>(k) - c);
                acc += fhat.at(k) * band.envelope[i] * std::polar(1.0, ang);
            }
            coefs[idx] = acc;
        }
    }
    return coefs;
}

TileOpResult tile_operator(const TorusSignal& f, const TileSet& T) {
    const std::size_t n = f.n();
    if (n != T.n) throw std::invalid_argument("tile_operator: grid size mismatch");
    TileOpResult r;
    r.coefs = tile_coefficients(dft(f), T);
    std::vector<double> acc(n, 0.0);
    for (std::size_t s = 0; s < T.tiles.size(); ++s) {
        const auto& tile = T.tiles[s];
        const double w = std::norm(r.coefs[s]) / tile.spatial.length();
        const auto [j0, j1] = tile.spatial.sample_range(n);
        for (std::size_t j = j0; j < j1; ++j) acc[j] += w;
    }
    r.out = TorusSignal(n);
    for (std::size_t j = 0; j < n; ++j) r.out[j] = std::sqrt(acc[j]);
    return r;
}

namespace {
// Gram matrix of the packets over one arc; Toeplitz in the spatial offset.
Eigen::MatrixXcd gram_matrix(std::size_t n, FreqInterval omega, double prad, double srad) {
    const int level = dual_level(n, omega);
    const Envelope e = make_envelope(n, omega, level, prad, srad);
    const long count = 1ll << level;
    const double ilen = 1.0 / static_cast<double>(count);
    const double c = omega.center();

    // <phi_s, phi_s'> = sum_k E(k)^2 exp(-2 pi i (c_s - c_s')(k - c))
    std::vector<cplx> row(static_cast<std::size_t>(count));
    for (long d = 0; d < count; ++d) {
        cplx acc = 0.0;
        const double dx = static_cast<double>(d) * ilen;
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            const long k = e.k0 + static_cast<long>(i);
            acc += e.values[i] * e.values[i] *
                   std::polar(1.0, -kTwoPi * dx * (static_cast<double>(k) - c));
        }
        row[static_cast<std::size_t>(d)] = acc;
    }
    Eigen::MatrixXcd G(count, count);
    for (long a = 0; a < count; ++a)
        for (long b = 0; b < count; ++b) {
            const long d = a - b;
            G(a, b) = d >= 0 ? row[static_cast<std::size_t>(d)]
                             : std::conj(row[static_cast<std::size_t>(-d)]);
        }
    return G;
}
}  // namespace

double bessel_constant(std::size_t n, FreqInterval omega, double prad, double srad) {
    const Eigen::MatrixXcd G = gram_matrix(n, omega, prad, srad);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(G, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
}

namespace {
// eigenvalue count of a symmetric tridiagonal below x, by Sturm sequence
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
    int count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double b2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
        d = diag[i] - x - (d == 0.0 ? b2 / 1e-300 : b2 / d);
        if (d < 0.0) ++count;
    }
    return count;
}

double tridiag_max_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off) {
    // Gershgorin bracket, then bisect for the largest eigenvalue
    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                         (i + 1 < diag.size() ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    const int m = static_cast<int>(diag.size());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(diag, off, mid) >= m)
            hi = mid;  // all eigenvalues below mid
        else
            lo = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}
}  // namespace

double bessel_constant_krylov(std::size_t n, FreqInterval omega, double prad, double srad,
                              int max_dim, std::uint64_t seed) {
    const Eigen::MatrixXcd G = gram_matrix(n, omega, prad, srad);
    const long m = G.rows();
    const int kmax = std::min<long>(max_dim, m);

    Rng rng(seed);
    std::vector<Eigen::VectorXcd> basis;
    Eigen::VectorXcd v(m);
    for (long i = 0; i < m; ++i) v(i) = rng.complex_gaussian();
    v.normalize();

    std::vector<double> diag, off;
    Eigen::VectorXcd prev = Eigen::VectorXcd::Zero(m);
    double beta = 0.0;
    for (int k = 0; k < kmax; ++k) {
        basis.push_back(v);
        Eigen::VectorXcd w = G * v - beta * prev;
        const double alpha = std::real(v.dot(w));
        w -= alpha * v;
        for (const auto& b : basis) w -= b.dot(w) * b;  // full reorthogonalization
        diag.push_back(alpha);
        beta = w.norm();
        if (k + 1 < kmax) {
            if (beta < 1e-14) break;  // invariant subspace reached
            off.push_back(beta);
            prev = v;
            v = w / beta;
        }
    }
    off.resize(diag.size() > 0 ? diag.size() - 1 : 0);
    return tridiag_max_eigenvalue(diag, off);
}

TailProbeReport tail_decay_probe(std::size_t n, FreqInterval omega, DyadicInterval I,
                                 std::span<const double> ts, std::uint64_t seed,
                                 const TailProbeOptions& opt) {
    const double rho = I.length() * static_cast<double>(omega.width());
    if (!(rho > 1.0)) throw std::invalid_argument("tail_decay_probe: requires |I||omega| > 1");
    if (!I.representable(n)) throw std::invalid_argument("tail_decay_probe: I too fine");

    TileSet sub = build_tiles(n, IntervalCollection{{omega}});
    // keep only tiles with I_s inside I
    std::vector<std::size_t> inside;
    for (std::size_t s = 0; s < sub.tiles.size(); ++s)
        if (I.contains(sub.tiles[s].spatial)) inside.push_back(s);

    const std::vector<double> tri = tripled_window_hat(n, omega);
    const double icenter = I.center();

    TailProbeReport rep;
    rep.rho = rho;

    for (double t : ts) {
        // support mask: torus distance from I's center exceeds t|I|/2
        std::vector<bool> mask(n);
        std::size_t free_count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double d = std::abs(static_cast<double>(j) / static_cast<double>(n) - icenter);
            d = std::min(d, 1.0 - d);
            mask[j] = d > 0.5 * t * I.length();
            if (mask[j]) ++free_count;
        }
        double best = 0.0;
        if (free_count > 0) {
            for (int start = 0; start < opt.starts; ++start) {
                Rng rng = Rng::stream(seed, 1000 * static_cast<std::uint64_t>(start) +
                                                static_cast<std::uint64_t>(t * 16.0));
                TorusSignal f(n);
                for (std::size_t j = 0; j < n; ++j)
                    f[j] = mask[j] ? rng.complex_gaussian() : 0.0;
                double ratio = 0.0;
                for (int it = 0; it < opt.iters; ++it) {
                    const Spectrum fh = dft(f);
                    std::vector<cplx> coefs = tile_coefficients(fh, sub);
                    double num = 0.0;
                    for (std::size_t s : inside) num += std::norm(coefs[s]);
                    double den = 0.0;
                    Spectrum grad(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        den += std::norm(tri[i] * fh.data()[i]);
                        grad.data()[i] = 0.0;
                    }
                    if (den <= 0.0) break;
                    ratio = num / den;
                    // gradient of the ratio: (H_in f - ratio * tri^2 f) / den
                    const auto& band = sub.bands[0];
                    for (std::size_t s : inside) {
                        const double xc = sub.tiles[s].spatial.center();
                        for (std::size_t i = 0; i < band.envelope.size(); ++i) {
                            const long k = band.k0 + static_cast<long>(i);
                            const double ang =
                                kTwoPi * xc * (static_cast<double>(k) - omega.center());
                            grad.at(k) += coefs[s] * band.envelope[i] * std::polar(1.0, -ang);
                        }
                    }
                    for (std::size_t i = 0; i < n; ++i)
                        grad.data()[i] -= ratio * tri[i] * tri[i] * fh.data()[i];
                    TorusSignal g = idft(grad);
                    double gn = 0.0, fn = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        if (!mask[j]) g[j] = 0.0;
                        gn += std::norm(g[j]);
                        fn += std::norm(f[j]);
                    }
                    if (gn <= 0.0) break;
                    const double eta = opt.step * std::sqrt(fn / gn);
                    for (std::size_t j = 0; j < n; ++j) f[j] += eta * g[j];
                    double nn = 0.0;
                    for (std::size_t j = 0; j < n; ++j) nn += std::norm(f[j]);
                    const double inv = 1.0 / std::sqrt(nn);
                    for (std::size_t j = 0; j < n; ++j) f[j] *= inv;
                }
                best = std::max(best, ratio);
            }
        }
        rep.points.push_back({t, t * rho, best});
    }

    std::vector<double> lx, ly;
    for (const auto& pt : rep.points) {
        if (pt.ratio > opt.fit_floor) {
            lx.push_back(std::log(pt.t_rho));
            ly.push_back(std::log(pt.ratio));
        }
    }
    rep.fitted_slope = fit_slope(lx, ly);
    return rep;
}

double translation_average_check(std::size_t n, FreqInterval omega, const TorusSignal& f,
                                 double prad, double srad) {
    const int level = dual_level(n, omega);
    const Envelope e = make_envelope(n, omega, level, prad, srad);
    const long count = 1ll << level;
    const double ilen = 1.0 / static_cast<double>(count);
    const double c = omega.center();
    const std::size_t w = e.values.size();

    const Spectrum fh = dft(f);

    // average over all n cyclic shifts, computed shift by shift in frequency:
    // (Tr_{-y} H Tr_y f)^(k) = sum_s phihat_s(k) * <Tr_y f, phi_s> * e^{2 pi i k y}
    std::vector<cplx> avg(w, 0.0);
    std::vector<cplx> shifted(w);
    for (long m = 0; m < static_cast<long>(n); ++m) {
        const double y = static_cast<double>(m) / static_cast<double>(n);
        for (std::size_t i = 0; i < w; ++i) {
            const long k = e.k0 + static_cast<long>(i);
            shifted[i] = fh.at(k) * std::polar(1.0, -kTwoPi * y * static_cast<double>(k));
        }
        for (long off = 0; off < count; ++off) {
            const double xc = (static_cast<double>(off) + 0.5) * ilen;
            cplx coef = 0.0;
            for (std::size_t i = 0; i < w; ++i) {
                const long k = e.k0 + static_cast<long>(i);
                coef += shifted[i] * e.values[i] *
                        std::polar(1.0, kTwoPi * xc * (static_cast<double>(k) - c));
            }
            for (std::size_t i = 0; i < w; ++i) {
                const long k = e.k0 + static_cast<long>(i);
                const cplx packet = e.values[i] *
                                    std::polar(1.0, -kTwoPi * xc * (static_cast<double>(k) - c));
                avg[i] += coef * packet *
                          std::polar(1.0, kTwoPi * y * static_cast<double>(k));
            }
        }
    }
    const double invn = 1.0 / static_cast<double>(n);

    // convolution route: multiplier is the squared profile, amplitude one
    double disc = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
        const long k = e.k0 + static_cast<long>(i);
        const double mult = e.values[i] * e.values[i] / ilen;  // = P(|I|(k-c))^2
        const cplx rhs = fh.at(k) * mult;
        disc = std::max(disc, std::abs(avg[i] * invn - rhs));
    }
    // frequencies outside the envelope support: both sides vanish exactly
    return disc;
}

PointwiseMaxReport pointwise_max_check(const TorusSignal& f, const TileSet& T) {
    const std::size_t n = f.n();
    const auto coefs = tile_coefficients(dft(f), T);
    std::vector<double> lhs(n, 0.0);
    for (std::size_t s = 0; s < T.tiles.size(); ++s) {
        const auto& tile = T.tiles[s];
        const double v = std::abs(coefs[s]) / std::sqrt(tile.spatial.length());
        const auto [j0, j1] = tile.spatial.sample_range(n);
        for (std::size_t j = j0; j < j1; ++j) lhs[j] = std::max(lhs[j], v);
    }
    const TorusSignal mf = maximal(f);
    PointwiseMaxReport rep;
    for (std::size_t j = 0; j < n; ++j) {
        const double m = mf[j].real();
        if (m > 0.0) rep.best_constant = std::max(rep.best_constant, lhs[j] / m);
    }
    return rep;
}

namespace {
// per-interval coefficient mass alpha(J) = sum_{I_s = J} |<1_F, phi_s>|^2 of
// the stock, then subtree sums over the dyadic tree of depth max_level
struct DyadicMass {
    int depth;
    std::vector<std::vector<double>> node;  // node[k][j], k = 0..depth

    explicit DyadicMass(int d) : depth(d), node(static_cast<std::size_t>(d) + 1) {
        for (int k = 0; k <= d; ++k) node[static_cast<std::size_t>(k)].assign(1ull << k, 0.0);
    }
};
}  // namespace

GreedySplitResult greedy_bmo_split(const TileSet& T, const std::vector<bool>& F, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("greedy_bmo_split: beta must be positive");
    const std::size_t n = T.n;
    if (F.size() != n) throw std::invalid_argument("greedy_bmo_split: mask size mismatch");
    if (std::none_of(F.begin(), F.end(), [](bool b) { return b; }))
        throw std::invalid_argument("greedy_bmo_split: F must be nonempty");

    TorusSignal ind(n);
    for (std::size_t j = 0; j < n; ++j) ind[j] = F[j] ? 1.0 : 0.0;
    const auto coefs = tile_coefficients(dft(ind), T);

    int max_level = 0;
    for (const auto& tile : T.tiles) max_level = std::max(max_level, tile.spatial.level);

    std::vector<bool> in_stock(T.tiles.size(), true);
    GreedySplitResult res;

    auto stock_mass = [&]() {
        DyadicMass m(max_level);
        for (std::size_t s = 0; s < T.tiles.size(); ++s) {
            if (!in_stock[s]) continue;
            const auto& d = T.tiles[s].spatial;
            m.node[static_cast<std::size_t>(d.level)][static_cast<std::size_t>(d.offset)] +=
                std::norm(coefs[s]);
        }
        // bottom-up subtree sums
        for (int k = max_level; k >= 1; --k)
            for (std::size_t j = 0; j < m.node[static_cast<std::size_t>(k)].size(); ++j)
                m.node[static_cast<std::size_t>(k - 1)][j >> 1] +=
                    m.node[static_cast<std::size_t>(k)][j];
        return m;
    };

    {
        const DyadicMass m0 = stock_mass();
        double cm = 0.0;
        for (int k = 0; k <= max_level; ++k) {
            const double scale = static_cast<double>(1ll << k);
            for (double v : m0.node[static_cast<std::size_t>(k)])
                cm = std::max(cm, v * scale);
        }
        res.cm_initial = cm;
    }

    const double threshold = beta / 4.0;
    while (true) {
        const DyadicMass m = stock_mass();
        // maximal J over threshold: scan coarse to fine, smallest offset first
        bool found = false;
        DyadicInterval J;
        for (int k = 0; k <= max_level && !found; ++k) {
            const double len = 1.0 / static_cast<double>(1ll << k);
            for (std::size_t j = 0; j < m.node[static_cast<std::size_t>(k)].size(); ++j) {
                if (m.node[static_cast<std::size_t>(k)][j] >= threshold * len) {
                    J = DyadicInterval{k, static_cast<long>(j)};
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            double cm = 0.0;
            for (int k = 0; k <= max_level; ++k) {
                const double scale = static_cast<double>(1ll << k);
                for (double v : m.node[static_cast<std::size_t>(k)])
                    cm = std::max(cm, v * scale);
            }
            res.cm_small = cm;
            break;
        }
        res.extracted.push_back(J);
        res.sum_extracted += J.length();
        for (std::size_t s = 0; s < T.tiles.size(); ++s)
            if (in_stock[s] && J.contains(T.tiles[s].spatial)) {
                in_stock[s] = false;
                res.big.push_back(s);
                res.mass_big += std::norm(coefs[s]);
            }
    }
    for (const auto& c : coefs) res.mass_total += std::norm(c);

    std::vector<bool> shadow(n, false);
    for (std::size_t s : res.big) {
        const auto [j0, j1] = T.tiles[s].spatial.sample_range(n);
        for (std::size_t j = j0; j < j1; ++j) shadow[j] = true;
    }
    res.shadow_big =
        static_cast<double>(std::count(shadow.begin(), shadow.end(), true)) /
        static_cast<double>(n);
    for (std::size_t s = 0; s < T.tiles.size(); ++s)
        if (in_stock[s]) res.small.push_back(s);
    return res;
}

double restricted_type_check(const TileSet& T, const std::vector<bool>& F, double p) {
    if (!(p > 2.0)) throw std::invalid_argument("restricted_type_check: requires p > 2");
    const std::size_t n = T.n;
    TorusSignal ind(n);
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
        ind[j] = F[j] ? 1.0 : 0.0;
        if (F[j]) ++count;
    }
    if (count == 0) return 0.0;
    const double measure = static_cast<double>(count) / static_cast<double>(n);
    const auto r = tile_operator(ind, T);
    return lp_norm(r.out, p) / std::pow(measure, 1.0 / p);
}

// --- product tiles ---------------------------------------------------------

TileSet2 build_tiles2(std::size_t n1, std::size_t n2, const std::vector<FreqRect>& omega,
                      double prad, double srad) {
    TileSet2 T;
    T.n1 = n1;
    T.n2 = n2;
    T.source = omega;
    for (const auto& w : omega) {
        if (!w.f1.in_range(n1) || !w.f2.in_range(n2))
            throw std::invalid_argument("build_tiles2: rectangle out of range");
        TileBand2 band;
        band.freq = w;
        band.level1 = dual_level(n1, w.f1);
        band.level2 = dual_level(n2, w.f2);
        Envelope e1 = make_envelope(n1, w.f1, band.level1, prad, srad);
        Envelope e2 = make_envelope(n2, w.f2, band.level2, prad, srad);
        band.k0_1 = e1.k0;
        band.k0_2 = e2.k0;
        band.env1 = std::move(e1.values);
        band.env2 = std::move(e2.values);
        const long c1 = 1ll << band.level1;
        const long c2 = 1ll << band.level2;
        for (long o1 = 0; o1 < c1; ++o1)
            for (long o2 = 0; o2 < c2; ++o2) {
                band.tile_index.push_back(T.tiles.size());
                T.tiles.push_back({DyadicInterval{band.level1, o1},
                                   DyadicInterval{band.level2, o2}, w});
            }
        T.bands.push_back(std::move(band));
    }
    return T;
}

std::vector<cplx> tile_coefficients2(const Spectrum2& fhat, const TileSet2& T) {
    std::vector<cplx> coefs(T.tiles.size());
    for (const auto& band : T.bands) {
        const double c1 = band.freq.f1.center();
        const double c2 = band.freq.f2.center();
        const std::size_t w1 = band.env1.size();
        const std::size_t w2 = band.env2.size();
        // restrict fhat to the envelope support once per band
        std::vector<cplx> block(w1 * w2);
        for (std::size_t i = 0; i < w1; ++i)
            for (std::size_t j = 0; j < w2; ++j)
                block[i * w2 + j] = fhat.at(band.k0_1 + static_cast<long>(i),
                                            band.k0_2 + static_cast<long>(j)) *
                                    band.env1[i] * band.env2[j];
        for (std::size_t t = 0; t < band.tile_index.size(); ++t) {
            const std::size_t idx = band.tile_index[t];
            const auto& tile = T.tiles[idx];
            const double x1 = tile.s1.center();
            const double x2 = tile.s2.center();
            // separable phases
            std::vector<cplx> ph2(w2);
            for (std::size_t j = 0; j < w2; ++j) {
                const long k2 = band.k0_2 + static_cast<long>(j);
                ph2[j] = std::polar(1.0, kTwoPi * x2 * (static_cast<double>(k2) - c2));
            }
            cplx acc = 0.0;
            for (std::size_t i = 0; i < w1; ++i) {
                const long k1 = band.k0_1 + static_cast<long>(i);
                cplx inner = 0.0;
                for (std::size_t j = 0; j < w2; ++j) inner += block[i * w2 + j] * ph2[j];
                acc += inner * std::polar(1.0, kTwoPi * x1 * (static_cast<double>(k1) - c1));
            }
            coefs[idx] = acc;
        }
    }
    return coefs;
}

TileOp2Result product_tile_operator(const TorusSignal2& f, const TileSet2& T) {
    if (f.n1() != T.n1 || f.n2() != T.n2)
        throw std::invalid_argument("product_tile_operator: grid mismatch");
    TileOp2Result r;
    r.coefs = tile_coefficients2(dft2(f), T);
    const std::size_t n1 = T.n1, n2 = T.n2;
    std::vector<double> acc(n1 * n2, 0.0);
    for (std::size_t s = 0; s < T.tiles.size(); ++s) {
        const auto& tile = T.tiles[s];
        const double w = std::norm(r.coefs[s]) / tile.area();
        const auto [a0, a1] = tile.s1.sample_range(n1);
        const auto [b0, b1] = tile.s2.sample_range(n2);
        for (std::size_t i = a0; i < a1; ++i)
            for (std::size_t j = b0; j < b1; ++j) acc[i * n2 + j] += w;
    }
    r.out = TorusSignal2(n1, n2);
    for (std::size_t i = 0; i < n1 * n2; ++i) r.out.data()[i] = std::sqrt(acc[i]);
    return r;
}

double bessel_constant2(std::size_t n1, std::size_t n2, const FreqRect& omega, double prad,
                        double srad) {
    return bessel_constant(n1, omega.f1, prad, srad) *
           bessel_constant(n2, omega.f2, prad, srad);
}

// --- serialization ---------------------------------------------------------

void write_coefficients_csv(const TileSet& T, std::span<const cplx> coefs, std::ostream& os) {
    os << "omega_lo,omega_hi,level,offset,re,im\n";
    char buf[160];
    for (std::size_t s = 0; s < T.tiles.size(); ++s) {
        const auto& t = T.tiles[s];
        std::snprintf(buf, sizeof buf, "%ld,%ld,%d,%ld,%.17g,%.17g\n", t.freq.lo, t.freq.hi,
                      t.spatial.level, t.spatial.offset, coefs[s].real(), coefs[s].imag());
        os << buf;
    }
}

void write_split_json(const TileSet& T, const GreedySplitResult& r, std::ostream& os) {
    nlohmann::ordered_json j;
    auto tile_json = [&](std::size_t s) {
        const auto& t = T.tiles[s];
        return nlohmann::ordered_json{{"omega", {t.freq.lo, t.freq.hi}},
                                      {"level", t.spatial.level},
                                      {"offset", t.spatial.offset}};
    };
    j["big"] = nlohmann::ordered_json::array();
    for (std::size_t s : r.big) j["big"].push_back(tile_json(s));
    j["small"] = nlohmann::ordered_json::array();
    for (std::size_t s : r.small) j["small"].push_back(tile_json(s));
    j["J"] = nlohmann::ordered_json::array();
    for (const auto& d : r.extracted)
        j["J"].push_back(nlohmann::ordered_json{{"level", d.level}, {"offset", d.offset}});
    os << j.dump(2) << "\n";
}

}  // namespace lptile
