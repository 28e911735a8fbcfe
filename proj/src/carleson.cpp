#include "lptile/carleson.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace lptile {

CarlesonSeq::CarlesonSeq(int depth_) : depth(depth_) {
    if (depth < 0) throw std::invalid_argument("CarlesonSeq: negative depth");
    a.resize(static_cast<std::size_t>(depth) + 1);
    for (int k = 0; k <= depth; ++k) a[static_cast<std::size_t>(k)].assign(1ull << k, 0.0);
}

CarlesonSeq& CarlesonSeq::operator+=(const CarlesonSeq& other) {
    if (other.depth > depth) throw std::invalid_argument("CarlesonSeq: depth mismatch");
    for (int k = 0; k <= other.depth; ++k)
        for (std::size_t j = 0; j < other.a[static_cast<std::size_t>(k)].size(); ++j)
            a[static_cast<std::size_t>(k)][j] += other.a[static_cast<std::size_t>(k)][j];
    return *this;
}

double cm_norm(const CarlesonSeq& alpha) {
    std::vector<std::vector<double>> sums = alpha.a;
    for (int k = alpha.depth; k >= 1; --k)
        for (std::size_t j = 0; j < sums[static_cast<std::size_t>(k)].size(); ++j)
            sums[static_cast<std::size_t>(k - 1)][j >> 1] += sums[static_cast<std::size_t>(k)][j];
    double best = 0.0;
    for (int k = 0; k <= alpha.depth; ++k) {
        const double scale = static_cast<double>(1ll << k);  // 1/|J|
        for (double v : sums[static_cast<std::size_t>(k)]) best = std::max(best, v * scale);
    }
    return best;
}

double cm_norm_scan(const CarlesonSeq& alpha) {
    double best = 0.0;
    for (int k = 0; k <= alpha.depth; ++k) {
        const long count = 1ll << k;
        for (long j = 0; j < count; ++j) {
            double sum = 0.0;
            for (int kk = k; kk <= alpha.depth; ++kk) {
                const long lo = j << (kk - k);
                const long hi = (j + 1) << (kk - k);
                for (long jj = lo; jj < hi; ++jj) sum += alpha.at(kk, jj);
            }
            best = std::max(best, sum * static_cast<double>(count));
        }
    }
    return best;
}

namespace {
int log2n(std::size_t n) {
    int l = 0;
    while ((std::size_t{1} << l) < n) ++l;
    return l;
}
}  // namespace

double dyadic_bmo(const TorusSignal& g) {
    const std::size_t n = g.n();
    const int depth = log2n(n);
    std::vector<cplx> pre(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) pre[j + 1] = pre[j] + g[j];
    double best = 0.0;
    for (int k = 0; k <= depth; ++k) {
        const std::size_t len = n >> k;
        for (std::size_t j0 = 0; j0 < n; j0 += len) {
            const cplx mean = (pre[j0 + len] - pre[j0]) / static_cast<double>(len);
            double osc = 0.0;
            for (std::size_t j = j0; j < j0 + len; ++j) osc += std::abs(g[j] - mean);
            best = std::max(best, osc / static_cast<double>(len));
        }
    }
    return best;
}

TorusSignal sharp_function(const TorusSignal& g) {
    const std::size_t n = g.n();
    const int depth = log2n(n);
    std::vector<cplx> pre(n + 1, 0.0);
    std::vector<double> pre2(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        pre[j + 1] = pre[j] + g[j];
        pre2[j + 1] = pre2[j] + std::norm(g[j]);
    }
    TorusSignal out(n);
    for (int k = 0; k <= depth; ++k) {
        const std::size_t len = n >> k;
        for (std::size_t j0 = 0; j0 < n; j0 += len) {
            const double inv = 1.0 / static_cast<double>(len);
            const cplx mean = (pre[j0 + len] - pre[j0]) * inv;
            // mean_I |g - mean|^2 = mean_I |g|^2 - |mean|^2; clamp tiny negatives
            const double osc2 =
                std::max(0.0, (pre2[j0 + len] - pre2[j0]) * inv - std::norm(mean));
            const double osc = std::sqrt(osc2);
            for (std::size_t j = j0; j < j0 + len; ++j)
                out[j] = std::max(out[j].real(), osc);
        }
    }
    return out;
}

TorusSignal jn_function(const CarlesonSeq& alpha, DyadicInterval J) {
    if (alpha.depth < 3) throw std::invalid_argument("jn_function: depth must be >= 3");
    if (J.level > alpha.depth || !J.valid())
        throw std::invalid_argument("jn_function: J not representable at this depth");
    const std::size_t n = std::size_t{1} << alpha.depth;
    std::vector<double> diff(n + 1, 0.0);
    for (int k = J.level; k <= alpha.depth; ++k) {
        const std::size_t len = n >> k;
        const long j_lo = J.offset << (k - J.level);
        const long j_hi = (J.offset + 1) << (k - J.level);
        for (long j = j_lo; j < j_hi; ++j) {
            const double v = alpha.at(k, j);
            if (v == 0.0) continue;
            const double height = v * static_cast<double>(1ll << k);  // alpha/|I|
            diff[static_cast<std::size_t>(j) * len] += height;
            diff[static_cast<std::size_t>(j + 1) * len] -= height;
        }
    }
    TorusSignal out(n);
    double run = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        run += diff[j];
        out[j] = run;
    }
    return out;
}

double jn_check(const CarlesonSeq& alpha, double p, DyadicInterval J) {
    if (!(p > 1.0)) throw std::invalid_argument("jn_check: requires p > 1");
    const double cm = cm_norm(alpha);
    if (cm == 0.0) return 0.0;
    const TorusSignal f = jn_function(alpha, J);
    return lp_norm(f, p) / (cm * std::pow(J.length(), 1.0 / p));
}

// --- product ---------------------------------------------------------------

ProductCarlesonSeq::ProductCarlesonSeq(int d1, int d2) : depth1(d1), depth2(d2) {
    if (d1 < 0 || d2 < 0) throw std::invalid_argument("ProductCarlesonSeq: negative depth");
    a.resize(static_cast<std::size_t>(d1) + 1);
    for (int k1 = 0; k1 <= d1; ++k1) {
        a[static_cast<std::size_t>(k1)].resize(static_cast<std::size_t>(d2) + 1);
        for (int k2 = 0; k2 <= d2; ++k2)
            a[static_cast<std::size_t>(k1)][static_cast<std::size_t>(k2)].assign(
                (std::size_t{1} << k1) * (std::size_t{1} << k2), 0.0);
    }
}

double& ProductCarlesonSeq::at(int k1, long j1, int k2, long j2) {
    return a[static_cast<std::size_t>(k1)][static_cast<std::size_t>(k2)]
            [static_cast<std::size_t>(j1) * (std::size_t{1} << k2) +
             static_cast<std::size_t>(j2)];
}

double ProductCarlesonSeq::at(int k1, long j1, int k2, long j2) const {
    return a[static_cast<std::size_t>(k1)][static_cast<std::size_t>(k2)]
            [static_cast<std::size_t>(j1) * (std::size_t{1} << k2) +
             static_cast<std::size_t>(j2)];
}

namespace {
struct SupportedRect {
    int k1;
    long j1;
    int k2;
    long j2;
    double value;
    std::uint64_t cellmask;  // finest cells covered (row-major)
};

std::vector<SupportedRect> support_of(const ProductCarlesonSeq& alpha) {
    std::vector<SupportedRect> rects;
    const std::size_t c1 = alpha.cells1(), c2 = alpha.cells2();
    for (int k1 = 0; k1 <= alpha.depth1; ++k1)
        for (int k2 = 0; k2 <= alpha.depth2; ++k2) {
            const std::size_t n1 = std::size_t{1} << k1, n2 = std::size_t{1} << k2;
            for (long j1 = 0; j1 < static_cast<long>(n1); ++j1)
                for (long j2 = 0; j2 < static_cast<long>(n2); ++j2) {
                    const double v = alpha.at(k1, j1, k2, j2);
                    if (v <= 0.0) continue;
                    std::uint64_t mask = 0;
                    const std::size_t a0 = static_cast<std::size_t>(j1) * (c1 >> k1);
                    const std::size_t a1 = a0 + (c1 >> k1);
                    const std::size_t b0 = static_cast<std::size_t>(j2) * (c2 >> k2);
                    const std::size_t b1 = b0 + (c2 >> k2);
                    for (std::size_t i = a0; i < a1; ++i)
                        for (std::size_t j = b0; j < b1; ++j)
                            mask |= std::uint64_t{1} << (i * c2 + j);
                    rects.push_back({k1, j1, k2, j2, v, mask});
                }
        }
    return rects;
}

double cell_area(const ProductCarlesonSeq& alpha) {
    return 1.0 / (static_cast<double>(alpha.cells1()) * static_cast<double>(alpha.cells2()));
}

double density(const std::vector<SupportedRect>& rects, std::uint64_t umask, double area) {
    if (umask == 0) return 0.0;
    double num = 0.0;
    for (const auto& r : rects)
        if ((r.cellmask & ~umask) == 0) num += r.value;
    return num / (static_cast<double>(std::popcount(umask)) * area);
}
}  // namespace

double product_cm_norm(const ProductCarlesonSeq& alpha, ProductCmMode mode) {
    const std::size_t totcells = alpha.cells1() * alpha.cells2();
    const double area = cell_area(alpha);
    const auto rects = support_of(alpha);
    if (rects.empty()) return 0.0;

    if (mode == ProductCmMode::RectOnly) {
        double best = 0.0;
        for (int k1 = 0; k1 <= alpha.depth1; ++k1)
            for (int k2 = 0; k2 <= alpha.depth2; ++k2) {
                const long n1 = 1ll << k1, n2 = 1ll << k2;
                for (long j1 = 0; j1 < n1; ++j1)
                    for (long j2 = 0; j2 < n2; ++j2) {
                        double num = 0.0;
                        for (const auto& r : rects) {
                            // R subset J componentwise
                            const bool in1 = r.k1 >= k1 && (r.j1 >> (r.k1 - k1)) == j1;
                            const bool in2 = r.k2 >= k2 && (r.j2 >> (r.k2 - k2)) == j2;
                            if (in1 && in2) num += r.value;
                        }
                        const double measure =
                            1.0 / (static_cast<double>(n1) * static_cast<double>(n2));
                        best = std::max(best, num / measure);
                    }
            }
        return best;
    }

    if (mode == ProductCmMode::Exhaustive) {
        if (totcells > 64)
            throw std::invalid_argument("product_cm_norm: exhaustive needs <= 8x8 cells");
        if (rects.size() > 24)
            throw std::invalid_argument("product_cm_norm: exhaustive needs support <= 24");
        // The optimal U may be replaced by the union of the supported
        // rectangles it contains, so enumerating those unions is exact.
        double best = 0.0;
        const std::size_t m = rects.size();
        for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << m); ++bits) {
            std::uint64_t umask = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (bits & (std::uint64_t{1} << i)) umask |= rects[i].cellmask;
            best = std::max(best, density(rects, umask, area));
        }
        return best;
    }

    // Heuristic: greedy local search adding one supported rectangle at a time.
    double best = 0.0;
    for (std::size_t seed = 0; seed < rects.size(); ++seed) {
        std::uint64_t umask = rects[seed].cellmask;
        double cur = density(rects, umask, area);
        bool improved = true;
        while (improved) {
            improved = false;
            std::uint64_t pick = 0;
            double pickd = cur;
            for (const auto& r : rects) {
                if ((r.cellmask & ~umask) == 0) continue;  // already inside
                const double d = density(rects, umask | r.cellmask, area);
                if (d > pickd + 1e-15) {
                    pickd = d;
                    pick = r.cellmask;
                }
            }
            if (pick) {
                umask |= pick;
                cur = pickd;
                improved = true;
            }
        }
        best = std::max(best, cur);
    }
    return best;
}

TorusSignal2 product_jn_function(const ProductCarlesonSeq& alpha, const CellMask& U) {
    const std::size_t c1 = alpha.cells1(), c2 = alpha.cells2();
    if (U.size() != c1 * c2) throw std::invalid_argument("product_jn_function: mask size");
    TorusSignal2 out(c1, c2);
    const auto rects = support_of(alpha);
    for (const auto& r : rects) {
        const std::size_t a0 = static_cast<std::size_t>(r.j1) * (c1 >> r.k1);
        const std::size_t a1 = a0 + (c1 >> r.k1);
        const std::size_t b0 = static_cast<std::size_t>(r.j2) * (c2 >> r.k2);
        const std::size_t b1 = b0 + (c2 >> r.k2);
        bool inside = true;
        for (std::size_t i = a0; i < a1 && inside; ++i)
            for (std::size_t j = b0; j < b1 && inside; ++j)
                if (!U[i * c2 + j]) inside = false;
        if (!inside) continue;
        const double harea = static_cast<double>(1ll << r.k1) * static_cast<double>(1ll << r.k2);
        for (std::size_t i = a0; i < a1; ++i)
            for (std::size_t j = b0; j < b1; ++j) out.at(i, j) += r.value * harea;
    }
    return out;
}

ProductJnStep product_jn_step(const ProductCarlesonSeq& alpha, const CellMask& U, double p,
                              double K0) {
    if (!(p > 1.0)) throw std::invalid_argument("product_jn_step: requires p > 1");
    if (!(K0 > 0.0)) throw std::invalid_argument("product_jn_step: requires K > 0");
    const std::size_t c1 = alpha.cells1(), c2 = alpha.cells2();
    const double pprime = p / (p - 1.0);

    ProductJnStep step;
    std::size_t ucount = 0;
    for (bool b : U)
        if (b) ++ucount;
    step.measure_U = static_cast<double>(ucount) / static_cast<double>(c1 * c2);
    step.V.assign(c1 * c2, false);

    const TorusSignal2 FU = product_jn_function(alpha, U);
    step.norm_FU = lp_norm2(FU, p);
    if (step.norm_FU == 0.0 || ucount == 0) {
        step.halved = true;
        step.K = K0;
        step.constant = 0.0;
        return step;
    }

    // dual witness g = (F_U / ||F_U||_p)^(p-1): <F_U, g> = ||F_U||_p, ||g||_p' = 1
    TorusSignal2 g(c1, c2);
    for (std::size_t i = 0; i < c1 * c2; ++i) {
        const double v = FU.data()[i].real() / step.norm_FU;
        g.data()[i] = std::pow(v, p - 1.0);
    }
    const TorusSignal2 mg = strong_maximal(g);

    double K = K0;
    const double ubound = std::pow(step.measure_U, -1.0 / pprime);
    while (true) {
        std::size_t vcount = 0;
        for (std::size_t i = 0; i < c1 * c2; ++i) {
            const bool in = mg.data()[i].real() > K * ubound;
            step.V[i] = in;
            if (in) ++vcount;
        }
        step.measure_V = static_cast<double>(vcount) / static_cast<double>(c1 * c2);
        if (2 * vcount < ucount) {
            step.halved = true;
            break;
        }
        K *= 2.0;
        if (K > 1e12) break;  // numerical guard; flagged by halved = false
    }
    step.K = K;

    const TorusSignal2 FV = product_jn_function(alpha, step.V);
    step.norm_FV = lp_norm2(FV, p);
    step.constant =
        step.norm_FU / (std::pow(step.measure_U, 1.0 / p) + step.norm_FV);
    return step;
}

// --- serialization ---------------------------------------------------------

void write_carleson_csv(const CarlesonSeq& alpha, std::ostream& os) {
    os << "level,offset,value\n";
    char buf[96];
    for (int k = 0; k <= alpha.depth; ++k)
        for (std::size_t j = 0; j < alpha.a[static_cast<std::size_t>(k)].size(); ++j) {
            const double v = alpha.a[static_cast<std::size_t>(k)][j];
            if (v == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%d,%zu,%.17g\n", k, j, v);
            os << buf;
        }
}

CarlesonSeq read_carleson_csv(std::istream& is) {
    std::string line;
    struct Row {
        int k;
        long j;
        double v;
    };
    std::vector<Row> rows;
    int depth = 0;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("level", 0) == 0) continue;
        }
        Row r;
        if (std::sscanf(line.c_str(), "%d,%ld,%lf", &r.k, &r.j, &r.v) != 3)
            throw std::invalid_argument("bad carleson CSV row: " + line);
        depth = std::max(depth, r.k);
        rows.push_back(r);
    }
    CarlesonSeq alpha(depth);
    for (const auto& r : rows) alpha.at(r.k, r.j) += r.v;
    return alpha;
}

void write_product_carleson_csv(const ProductCarlesonSeq& alpha, std::ostream& os) {
    os << "lev1,off1,lev2,off2,value\n";
    char buf[128];
    for (int k1 = 0; k1 <= alpha.depth1; ++k1)
        for (int k2 = 0; k2 <= alpha.depth2; ++k2) {
            const long n1 = 1ll << k1, n2 = 1ll << k2;
            for (long j1 = 0; j1 < n1; ++j1)
                for (long j2 = 0; j2 < n2; ++j2) {
                    const double v = alpha.at(k1, j1, k2, j2);
                    if (v == 0.0) continue;
                    std::snprintf(buf, sizeof buf, "%d,%ld,%d,%ld,%.17g\n", k1, j1, k2, j2, v);
                    os << buf;
                }
        }
}

ProductCarlesonSeq read_product_carleson_csv(std::istream& is) {
    std::string line;
    struct Row {
        int k1;
        long j1;
        int k2;
        long j2;
        double v;
    };
    std::vector<Row> rows;
    int d1 = 0, d2 = 0;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("lev1", 0) == 0) continue;
        }
        Row r;
        if (std::sscanf(line.c_str(), "%d,%ld,%d,%ld,%lf", &r.k1, &r.j1, &r.k2, &r.j2, &r.v) != 5)
            throw std::invalid_argument("bad product carleson CSV row: " + line);
        d1 = std::max(d1, r.k1);
        d2 = std::max(d2, r.k2);
        rows.push_back(r);
    }
    ProductCarlesonSeq alpha(d1, d2);
    for (const auto& r : rows) alpha.at(r.k1, r.j1, r.k2, r.j2) += r.v;
    return alpha;
}

}  // namespace lptile
