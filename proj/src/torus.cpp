#include "lptile/torus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lptile {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_valid_length(std::size_t n) {
    if (n < 8 || !is_power_of_two(n))
        throw std::invalid_argument("sample count must be a power of two >= 8");
}
}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

TorusSignal::TorusSignal(std::size_t n) : v_(n) { require_valid_length(n); }

TorusSignal::TorusSignal(std::vector<cplx> samples) : v_(std::move(samples)) {
    require_valid_length(v_.size());
}

bool TorusSignal::all_finite() const {
    for (const cplx& z : v_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

Spectrum::Spectrum(std::size_t n) : c_(n) { require_valid_length(n); }

Spectrum::Spectrum(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    require_valid_length(c_.size());
}

void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    require_valid_length(n);

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // one twiddle table for the full size, strided per stage
    static thread_local std::vector<cplx> tw;
    static thread_local std::size_t tw_n = 0;
    static thread_local bool tw_inv = false;
    if (tw_n != n || tw_inv != inverse) {
        tw.resize(n / 2);
        const double sgn = inverse ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n / 2; ++j)
            tw[j] = std::polar(1.0, sgn * kTwoPi * static_cast<double>(j) / static_cast<double>(n));
        tw_n = n;
        tw_inv = inverse;
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx w = tw[j * step];
                const cplx u = a[i + j];
                const cplx t = a[i + j + len / 2] * w;
                a[i + j] = u + t;
                a[i + j + len / 2] = u - t;
            }
        }
    }
}

Spectrum dft(const TorusSignal& f) {
    const std::size_t n = f.n();
    std::vector<cplx> a = f.data();
    fft_inplace(a, false);
    const double scale = 1.0 / static_cast<double>(n);
    // standard order (bin b = frequency b mod n) -> math order (-n/2 first)
    std::vector<cplx> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = a[(i + n / 2) % n] * scale;
    return Spectrum(std::move(c));
}

TorusSignal idft(const Spectrum& spec) {
    const std::size_t n = spec.n();
    std::vector<cplx> a(n);
    for (std::size_t i = 0; i < n; ++i) a[(i + n / 2) % n] = spec.data()[i];
    fft_inplace(a, true);
    return TorusSignal(std::move(a));
}

double lp_norm(const TorusSignal& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
    const std::size_t n = f.n();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(f[j]));
        return m;
    }
    double acc = 0.0;  // fixed index order
    for (std::size_t j = 0; j < n; ++j) acc += std::pow(std::abs(f[j]), p);
    return std::pow(acc / static_cast<double>(n), 1.0 / p);
}

double spectral_energy(const Spectrum& s) {
    double acc = 0.0;
    for (const cplx& z : s.data()) acc += std::norm(z);
    return acc;
}

TorusSignal modulate(const TorusSignal& f, long xi) {
    const std::size_t n = f.n();
    TorusSignal out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = kTwoPi * static_cast<double>(xi) * static_cast<double>(j) /
                           static_cast<double>(n);
        out[j] = f[j] * std::polar(1.0, ang);
    }
    return out;
}

TorusSignal translate(const TorusSignal& f, long j) {
    const long n = static_cast<long>(f.n());
    TorusSignal out(f.n());
    const long s = ((j % n) + n) % n;
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(((i - s) % n + n) % n)];
    return out;
}

TorusSignal dilate(const TorusSignal& f, int log2_lambda, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("dilate requires p >= 1");
    const std::size_t n = f.n();
    if (log2_lambda < 0 || (1ull << log2_lambda) > n / 8)
        throw std::invalid_argument("dilate: incompatible lambda for this grid");
    const std::size_t lambda = std::size_t{1} << log2_lambda;
    const double scale = std::isinf(p) ? 1.0
                                       : std::pow(static_cast<double>(lambda), -1.0 / p);
    TorusSignal out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = scale * f[j / lambda];
    return out;
}

// --- serialization -------------------------------------------------------

void write_signal_csv(const TorusSignal& f, std::ostream& os) {
    os << "index,re,im\n";
    char buf[96];
    for (std::size_t j = 0; j < f.n(); ++j) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", j, f[j].real(), f[j].imag());
        os << buf;
    }
}

TorusSignal read_signal_csv(std::istream& is) {
    std::string line;
    std::vector<cplx> v;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("index", 0) == 0) continue;
        }
        std::size_t idx;
        double re, im;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf", &idx, &re, &im) != 3)
            throw std::invalid_argument("bad signal CSV row: " + line);
        if (idx != v.size()) throw std::invalid_argument("signal CSV rows out of order");
        v.emplace_back(re, im);
    }
    return TorusSignal(std::move(v));
}

namespace {
void put_u32_le(std::ostream& os, std::uint32_t x) {
    char b[4] = {static_cast<char>(x & 0xff), static_cast<char>((x >> 8) & 0xff),
                 static_cast<char>((x >> 16) & 0xff), static_cast<char>((x >> 24) & 0xff)};
    os.write(b, 4);
}

std::uint32_t get_u32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::invalid_argument("LPT1: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64_le(std::ostream& os, double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, 8);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
    os.write(b, 8);
}

double get_f64_le(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::invalid_argument("LPT1: truncated payload");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double x;
    std::memcpy(&x, &u, 8);
    return x;
}
}  // namespace

void write_signal_lpt1(const TorusSignal& f, std::ostream& os) {
    os.write("LPT1", 4);
    put_u32_le(os, static_cast<std::uint32_t>(f.n()));
    for (std::size_t j = 0; j < f.n(); ++j) {
        put_f64_le(os, f[j].real());
        put_f64_le(os, f[j].imag());
    }
}

TorusSignal read_signal_lpt1(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LPT1", 4) != 0)
        throw std::invalid_argument("LPT1: bad magic");
    const std::uint32_t n = get_u32_le(is);
    std::vector<cplx> v(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        const double re = get_f64_le(is);
        const double im = get_f64_le(is);
        v[j] = {re, im};
    }
    return TorusSignal(std::move(v));
}

}  // namespace lptile
