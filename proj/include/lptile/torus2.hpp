#pragma once

#include "lptile/intervals.hpp"
#include "lptile/torus.hpp"

namespace lptile {

/// Frequency rectangle omega = omega1 x omega2.
struct FreqRect {
    FreqInterval f1, f2;
    double area() const {
        return static_cast<double>(f1.width()) * static_cast<double>(f2.width());
    }
};

/// Complex samples on the two-torus, n1 x n2 grid, row-major (axis 1 major).
class TorusSignal2 {
public:
    TorusSignal2() = default;
    TorusSignal2(std::size_t n1, std::size_t n2);

    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    cplx& at(std::size_t i1, std::size_t i2) { return v_[i1 * n2_ + i2]; }
    const cplx& at(std::size_t i1, std::size_t i2) const { return v_[i1 * n2_ + i2]; }
    std::vector<cplx>& data() { return v_; }
    const std::vector<cplx>& data() const { return v_; }

private:
    std::size_t n1_ = 0, n2_ = 0;
    std::vector<cplx> v_;
};

/// 2D spectrum with frequencies (k1,k2) in [-n1/2,n1/2) x [-n2/2,n2/2),
/// math order along both axes.
class Spectrum2 {
public:
    Spectrum2() = default;
    Spectrum2(std::size_t n1, std::size_t n2);

    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    cplx& at(long k1, long k2) {
        return v_[static_cast<std::size_t>(k1 + static_cast<long>(n1_ / 2)) * n2_ +
                  static_cast<std::size_t>(k2 + static_cast<long>(n2_ / 2))];
    }
    const cplx& at(long k1, long k2) const {
        return v_[static_cast<std::size_t>(k1 + static_cast<long>(n1_ / 2)) * n2_ +
                  static_cast<std::size_t>(k2 + static_cast<long>(n2_ / 2))];
    }
    std::vector<cplx>& data() { return v_; }
    const std::vector<cplx>& data() const { return v_; }

private:
    std::size_t n1_ = 0, n2_ = 0;
    std::vector<cplx> v_;
};

/// Separable transforms with the 1D normalization applied per axis, so the
/// 2D Plancherel identity is exact.
Spectrum2 dft2(const TorusSignal2& f);
TorusSignal2 idft2(const Spectrum2& s);

double lp_norm2(const TorusSignal2& f, double p);

/// Strong maximal function: sup over centered axis-parallel windows of the
/// mean of |f|; window radii range over 0..n/2 per axis.
TorusSignal2 strong_maximal(const TorusSignal2& f);

bool pairwise_disjoint(const std::vector<FreqRect>& rects);

/// Rough square function over disjoint frequency rectangles:
/// (sum_omega |S_omega f|^2)^(1/2), spectral restriction per rectangle.
TorusSignal2 square_sharp2(const TorusSignal2& f, const std::vector<FreqRect>& omega);

}  // namespace lptile
