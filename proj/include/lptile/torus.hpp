#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace lptile {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n);

/// Complex samples on the discrete torus Z_N, N a power of two >= 8.
/// Sample j lives at x_j = j/N; the torus carries total measure one, so every
/// sample has weight 1/N.
class TorusSignal {
public:
    TorusSignal() = default;
    explicit TorusSignal(std::size_t n);
    explicit TorusSignal(std::vector<cplx> samples);

    std::size_t n() const { return v_.size(); }
    cplx& operator[](std::size_t j) { return v_[j]; }
    const cplx& operator[](std::size_t j) const { return v_[j]; }
    std::span<const cplx> samples() const { return v_; }
    std::vector<cplx>& data() { return v_; }
    const std::vector<cplx>& data() const { return v_; }

    bool all_finite() const;

private:
    std::vector<cplx> v_;
};

/// Fourier coefficients indexed by integer frequencies k in [-n/2, n/2),
/// stored in that order (index i holds frequency i - n/2).  Frequency side
/// carries counting measure, so Plancherel reads ||f||_2^2 = sum_k |fhat(k)|^2.
class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(std::size_t n);
    explicit Spectrum(std::vector<cplx> coeffs);

    std::size_t n() const { return c_.size(); }
    long kmin() const { return -static_cast<long>(n() / 2); }
    long kmax() const { return static_cast<long>(n() / 2); }  // exclusive

    cplx& at(long k) { return c_[static_cast<std::size_t>(k - kmin())]; }
    const cplx& at(long k) const { return c_[static_cast<std::size_t>(k - kmin())]; }
    std::vector<cplx>& data() { return c_; }
    const std::vector<cplx>& data() const { return c_; }

private:
    std::vector<cplx> c_;
};

/// In-place radix-2 FFT, unscaled: a[b] <- sum_j a[j] exp(-+2*pi*i*j*b/n).
/// Fixed butterfly order for reproducibility.
void fft_inplace(std::vector<cplx>& a, bool inverse);

/// fhat(k) = (1/n) sum_j f(x_j) exp(-2*pi*i*k*x_j).
Spectrum dft(const TorusSignal& f);

/// f(x_j) = sum_k fhat(k) exp(2*pi*i*k*x_j).  Exact inverse of dft.
TorusSignal idft(const Spectrum& spec);

/// ((1/n) sum |f|^p)^(1/p); p = infinity gives the sup norm.  Requires p >= 1.
double lp_norm(const TorusSignal& f, double p);

/// sum_k |fhat(k)|^2, the spectral side of Plancherel.
double spectral_energy(const Spectrum& s);

/// Mod_xi f(x) = exp(2*pi*i*xi*x) f(x); shifts the spectrum by xi cyclically.
TorusSignal modulate(const TorusSignal& f, long xi);

/// Tr_j f(x) = f(x - j/n), cyclic shift by j samples.
TorusSignal translate(const TorusSignal& f, long j);

/// Dil^p_lambda with lambda = 2^log2_lambda >= 1: stretches the support by
/// lambda (each sample repeated lambda times) and scales by lambda^(-1/p).
/// Exact L^p isometry for signals supported on [0, 1/lambda).
TorusSignal dilate(const TorusSignal& f, int log2_lambda, double p);

// --- serialization -------------------------------------------------------

/// CSV rows "index,re,im".
void write_signal_csv(const TorusSignal& f, std::ostream& os);
TorusSignal read_signal_csv(std::istream& is);

/// Compact binary: magic "LPT1", u32 n, interleaved f64 (re,im), little-endian.
void write_signal_lpt1(const TorusSignal& f, std::ostream& os);
TorusSignal read_signal_lpt1(std::istream& is);

}  // namespace lptile
