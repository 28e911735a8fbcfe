#include "lptile/window.hpp"

#include <cmath>
#include <stdexcept>

namespace lptile {

namespace {
double bump_g(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}

double smooth_transition(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = bump_g(t);
    const double b = bump_g(1.0 - t);
    return a / (a + b);
}

double window_profile(double u, double plateau_radius, double support_radius) {
    const double a = std::abs(u);
    if (a <= plateau_radius) return 1.0;
    if (a >= support_radius) return 0.0;
    return smooth_transition((support_radius - a) / (support_radius - plateau_radius));
}

Window make_window(std::size_t n, FreqInterval plateau, FreqInterval support) {
    if (!support.in_range(n) || plateau.empty())
        throw std::invalid_argument("make_window: support out of range or empty plateau");
    if (!(support.lo < plateau.lo && plateau.hi < support.hi))
        throw std::invalid_argument("make_window: plateau must lie strictly inside support");

    Window w;
    w.n = n;
    w.plateau = plateau;
    w.support = support;
    w.hat.assign(n, 0.0);
    const long half = static_cast<long>(n / 2);
    for (long k = -half; k < half; ++k) {
        double v = 0.0;
        if (plateau.contains(k)) {
            v = 1.0;
        } else if (k >= support.lo && k < plateau.lo) {
            v = smooth_transition(static_cast<double>(k - support.lo) /
                                  static_cast<double>(plateau.lo - support.lo));
        } else if (k >= plateau.hi && k < support.hi) {
            v = smooth_transition(static_cast<double>(support.hi - k) /
                                  static_cast<double>(support.hi - plateau.hi));
        }
        w.hat[static_cast<std::size_t>(k + half)] = v;
    }
    return w;
}

namespace {
std::vector<double> profile_window(std::size_t n, double center, double prad, double srad) {
    std::vector<double> hat(n, 0.0);
    const long half = static_cast<long>(n / 2);
    for (long k = -half; k < half; ++k)
        hat[static_cast<std::size_t>(k + half)] =
            window_profile(static_cast<double>(k) - center, prad, srad);
    return hat;
}
}  // namespace

std::vector<double> band_window_hat(std::size_t n, FreqInterval omega) {
    const double w = static_cast<double>(omega.width());
    return profile_window(n, omega.center(), 0.5 * w, w);
}

std::vector<double> tripled_window_hat(std::size_t n, FreqInterval omega) {
    const double w = static_cast<double>(omega.width());
    return profile_window(n, omega.center(), 1.5 * w, 3.0 * w);
}

TorusSignal window_time_side(std::size_t n, const std::vector<double>& hat) {
    Spectrum s(n);
    for (std::size_t i = 0; i < n; ++i) s.data()[i] = hat[i];
    return idft(s);
}

TorusSignal convolve_window(const TorusSignal& f, const std::vector<double>& hat) {
    Spectrum s = dft(f);
    for (std::size_t i = 0; i < f.n(); ++i) s.data()[i] *= hat[i];
    return idft(s);
}

}  // namespace lptile
