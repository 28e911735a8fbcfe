#include "lptile/torus2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lptile {

namespace {
void require_valid(std::size_t n) {
    if (n < 8 || !is_power_of_two(n))
        throw std::invalid_argument("2D sample counts must be powers of two >= 8");
}
}  // namespace

TorusSignal2::TorusSignal2(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2), v_(n1 * n2) {
    require_valid(n1);
    require_valid(n2);
}

Spectrum2::Spectrum2(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2), v_(n1 * n2) {
    require_valid(n1);
    require_valid(n2);
}

Spectrum2 dft2(const TorusSignal2& f) {
    const std::size_t n1 = f.n1(), n2 = f.n2();
    std::vector<cplx> work = f.data();

    std::vector<cplx> row(n2);
    for (std::size_t i = 0; i < n1; ++i) {
        std::copy_n(work.begin() + i * n2, n2, row.begin());
        fft_inplace(row, false);
        std::copy_n(row.begin(), n2, work.begin() + i * n2);
    }
    std::vector<cplx> col(n1);
    for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t i = 0; i < n1; ++i) col[i] = work[i * n2 + j];
        fft_inplace(col, false);
        for (std::size_t i = 0; i < n1; ++i) work[i * n2 + j] = col[i];
    }

    const double scale = 1.0 / (static_cast<double>(n1) * static_cast<double>(n2));
    Spectrum2 s(n1, n2);
    for (std::size_t i = 0; i < n1; ++i) {
        const std::size_t si = (i + n1 / 2) % n1;
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t sj = (j + n2 / 2) % n2;
            s.data()[i * n2 + j] = work[si * n2 + sj] * scale;
        }
    }
    return s;
}

TorusSignal2 idft2(const Spectrum2& s) {
    const std::size_t n1 = s.n1(), n2 = s.n2();
    std::vector<cplx> work(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        const std::size_t si = (i + n1 / 2) % n1;
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t sj = (j + n2 / 2) % n2;
            work[si * n2 + sj] = s.data()[i * n2 + j];
        }
    }
    std::vector<cplx> row(n2);
    for (std::size_t i = 0; i < n1; ++i) {
        std::copy_n(work.begin() + i * n2, n2, row.begin());
        fft_inplace(row, true);
        std::copy_n(row.begin(), n2, work.begin() + i * n2);
    }
    std::vector<cplx> col(n1);
    for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t i = 0; i < n1; ++i) col[i] = work[i * n2 + j];
        fft_inplace(col, true);
        for (std::size_t i = 0; i < n1; ++i) work[i * n2 + j] = col[i];
    }
    TorusSignal2 out(n1, n2);
    out.data() = std::move(work);
    return out;
}

double lp_norm2(const TorusSignal2& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm2 requires p >= 1");
    const double inv = 1.0 / static_cast<double>(f.data().size());
    if (std::isinf(p)) {
        double m = 0.0;
        for (const cplx& z : f.data()) m = std::max(m, std::abs(z));
        return m;
    }
    double acc = 0.0;
    for (const cplx& z : f.data()) acc += std::pow(std::abs(z), p);
    return std::pow(acc * inv, 1.0 / p);
}

bool pairwise_disjoint(const std::vector<FreqRect>& rects) {
    for (std::size_t i = 0; i < rects.size(); ++i)
        for (std::size_t j = i + 1; j < rects.size(); ++j) {
            const bool sep1 = rects[i].f1.hi <= rects[j].f1.lo || rects[j].f1.hi <= rects[i].f1.lo;
            const bool sep2 = rects[i].f2.hi <= rects[j].f2.lo || rects[j].f2.hi <= rects[i].f2.lo;
            if (!sep1 && !sep2) return false;
        }
    return true;
}

TorusSignal2 square_sharp2(const TorusSignal2& f, const std::vector<FreqRect>& omega) {
    if (!pairwise_disjoint(omega))
        throw std::invalid_argument("square_sharp2: rectangles must be pairwise disjoint");
    const std::size_t n1 = f.n1(), n2 = f.n2();
    const Spectrum2 s = dft2(f);
    std::vector<double> acc(n1 * n2, 0.0);
    for (const auto& w : omega) {
        if (!w.f1.in_range(n1) || !w.f2.in_range(n2))
            throw std::invalid_argument("square_sharp2: rectangle out of range");
        Spectrum2 part(n1, n2);
        for (long k1 = w.f1.lo; k1 < w.f1.hi; ++k1)
            for (long k2 = w.f2.lo; k2 < w.f2.hi; ++k2) part.at(k1, k2) = s.at(k1, k2);
        const TorusSignal2 g = idft2(part);
        for (std::size_t i = 0; i < n1 * n2; ++i) acc[i] += std::norm(g.data()[i]);
    }
    TorusSignal2 out(n1, n2);
    for (std::size_t i = 0; i < n1 * n2; ++i) out.data()[i] = std::sqrt(acc[i]);
    return out;
}

TorusSignal2 strong_maximal(const TorusSignal2& f) {
    const std::size_t n1 = f.n1(), n2 = f.n2();

    // cyclic prefix sums of |f| along axis 2, doubled for wraparound
    std::vector<double> absf(n1 * n2);
    for (std::size_t i = 0; i < n1 * n2; ++i) absf[i] = std::abs(f.data()[i]);

    TorusSignal2 out(n1, n2);
    std::vector<double> best(n1 * n2, 0.0);

    // rowmean[t2]: mean of |f| over the axis-2 window of radius t2 at each site
    std::vector<double> rowwin(n1 * n2);
    std::vector<double> pre2(3 * n2 + 1);
    std::vector<double> pre1(3 * n1 + 1);
    std::vector<double> colsrc(n1);

    for (std::size_t t2 = 0; t2 <= n2 / 2; ++t2) {
        for (std::size_t i = 0; i < n1; ++i) {
            pre2[0] = 0.0;
            for (std::size_t j = 0; j < 3 * n2; ++j)
                pre2[j + 1] = pre2[j] + absf[i * n2 + (j % n2)];
            for (std::size_t j = 0; j < n2; ++j) {
                const std::size_t c = j + n2;  // sample j in the middle period
                rowwin[i * n2 + j] =
                    (pre2[c + t2 + 1] - pre2[c - t2]) / static_cast<double>(2 * t2 + 1);
            }
        }
        for (std::size_t j = 0; j < n2; ++j) {
            for (std::size_t i = 0; i < n1; ++i) colsrc[i] = rowwin[i * n2 + j];
            pre1[0] = 0.0;
            for (std::size_t i = 0; i < 3 * n1; ++i) pre1[i + 1] = pre1[i] + colsrc[i % n1];
            for (std::size_t t1 = 0; t1 <= n1 / 2; ++t1) {
                for (std::size_t i = 0; i < n1; ++i) {
                    const std::size_t c = i + n1;
                    const double mean =
                        (pre1[c + t1 + 1] - pre1[c - t1]) / static_cast<double>(2 * t1 + 1);
                    double& b = best[i * n2 + j];
                    b = std::max(b, mean);
                }
            }
        }
    }
    for (std::size_t i = 0; i < n1 * n2; ++i) out.data()[i] = best[i];
    return out;
}

}  // namespace lptile
