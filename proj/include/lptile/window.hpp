#pragma once

#include "lptile/intervals.hpp"
#include "lptile/torus.hpp"

namespace lptile {

/// Infinitely flat monotone step: h(0)=0, h(1)=1, h(t)+h(1-t)=1,
/// built from g(t)=exp(-1/t).
double smooth_transition(double t);

/// Even profile in the scale-free variable u: 1 for |u| <= plateau_radius,
/// 0 for |u| >= support_radius, smooth_transition in between.
double window_profile(double u, double plateau_radius, double support_radius);

/// Frequency window on the grid: real hat values phat(k) for k in [-n/2,n/2)
/// (math order, aligned with Spectrum), with the sandwich
/// 1_plateau(k) <= phat(k) <= 1_support(k) holding exactly at every integer k.
struct Window {
    std::size_t n = 0;
    std::vector<double> hat;
    FreqInterval plateau;
    FreqInterval support;

    double at(long k) const { return hat[static_cast<std::size_t>(k + static_cast<long>(n / 2))]; }
};

/// Builds the window with h-profile transitions on [support.lo, plateau.lo)
/// and [plateau.hi, support.hi).  plateau must lie strictly inside support.
Window make_window(std::size_t n, FreqInterval plateau, FreqInterval support);

/// Amplitude-one window with plateau omega and support 2*omega (concentric),
/// the grid realization of the smooth projection onto omega.
std::vector<double> band_window_hat(std::size_t n, FreqInterval omega);

/// Same, for the tripled interval: plateau 3*omega, support 6*omega.
std::vector<double> tripled_window_hat(std::size_t n, FreqInterval omega);

/// Spatial realization of a real frequency window (inverse transform).
TorusSignal window_time_side(std::size_t n, const std::vector<double>& hat);

/// Multiplier application of a real window: out_hat = hat .* f_hat.
TorusSignal convolve_window(const TorusSignal& f, const std::vector<double>& hat);

}  // namespace lptile
