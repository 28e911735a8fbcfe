#pragma once

#include <cstdint>

#include "lptile/intervals.hpp"
#include "lptile/torus.hpp"
#include "lptile/window.hpp"

namespace lptile {

/// Sharp Fourier projection S_omega: restricts the spectrum to omega.
/// Implemented spectrally (multiply by the indicator), never by kernel
/// truncation, so idempotence and Plancherel identities are exact.
TorusSignal project(const TorusSignal& f, FreqInterval omega);

/// Hilbert transform: spectral multiplier -i*sign(k), zero at k = 0 and at the
/// unpaired frequency k = -n/2.
TorusSignal hilbert(const TorusSignal& f);

/// Centered discrete Hardy-Littlewood maximal function over symmetric windows
/// of radius 0..n/2; radius zero makes Mf >= |f| pointwise.  Real output.
TorusSignal maximal(const TorusSignal& f);

/// Rough square function S^Omega f = (sum_omega |S_omega f|^2)^(1/2).
/// Requires a pairwise disjoint collection.
TorusSignal square_sharp(const TorusSignal& f, const IntervalCollection& omega);

struct SmoothSquareResult {
    TorusSignal g;               // G^Omega f, nonnegative real
    double overlap_constant;     // sup_k sum_omega |phihat^omega(k)|^2
    long tripling_overlap;       // overlap_bound(Omega)
    bool well_distributed;
    bool overridden;             // caller forced evaluation on a bad family
};

/// Smooth square function G^Omega f = (sum |phi^omega * f|^2)^(1/2) with
/// amplitude-one windows of plateau omega and support 2*omega.  The L2 bound
/// constant sup_k sum |phihat|^2 is measured and reported, not assumed.
SmoothSquareResult square_smooth(const TorusSignal& f, const IntervalCollection& omega,
                                 bool allow_not_well_distributed = false);

struct KhintchineReport {
    std::vector<double> ps;                 // norms evaluated at these p
    std::vector<double> max_kernel_ratio;   // per p: max over trials ||K*f||_p/||f||_p
    std::vector<double> min_kernel_ratio;   // per p: min over trials
    std::vector<double> gfunction_ratio;    // per p: ||(sum |psi*f|^2)^(1/2)||_p/||f||_p
    double kernel_multiplier_sup = 0.0;     // sup_k |Khat(k)| of the last kernel
    int scales = 0;                         // dyadic scales representable
    int trials = 0;
};

/// Random-sign convolution kernels over the representable dyadic scales
/// (plateau [2^j,2^(j+1)], support [2^(j-1), 5*2^(j-1)], both signs), applied
/// spectrally, plus the associated dyadic G-function.
KhintchineReport khintchine_gfunction(const TorusSignal& f, int trials, std::uint64_t seed);

/// The dyadic band profiles used by khintchine_gfunction, exposed for tests.
std::vector<std::vector<double>> dyadic_band_windows(std::size_t n);

}  // namespace lptile
