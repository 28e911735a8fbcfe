#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>

#include "lptile/intervals.hpp"
#include "lptile/torus.hpp"
#include "lptile/torus2.hpp"
#include "lptile/window.hpp"

namespace lptile {

/// Time-frequency tile: dyadic spatial interval paired with a dual frequency
/// arc, area |I_s|*|omega_s| in [1,2).
struct Tile {
    DyadicInterval spatial;
    FreqInterval freq;
    double area() const { return spatial.length() * static_cast<double>(freq.width()); }
};

/// Wave-packet envelope shared by all tiles over one arc: the tile function is
/// phihat_s(k) = sqrt(|I_s|) * P(|I_s|(k - c(omega))) * exp(-2 pi i c(I_s)(k - c)),
/// with P the h-profile of the given radii (paper scaling: plateau 1, support 2).
struct TileBand {
    FreqInterval freq;
    int level = 0;                 // |I_s| = 2^-level
    long k0 = 0;                   // envelope support start (inclusive)
    std::vector<double> envelope;  // E(k) for k in [k0, k0 + envelope.size())
    std::vector<std::size_t> tile_index;  // indices into TileSet::tiles, by offset
};

struct TileSet {
    std::size_t n = 0;
    IntervalCollection source;
    std::vector<Tile> tiles;
    std::vector<TileBand> bands;

    /// L2 norm of the wave packet of band b (equal for all its tiles).
    double packet_norm(std::size_t b) const;
};

/// The unique dyadic spatial level with 1 <= |I| * |omega| < 2.
int dual_level(std::size_t n, FreqInterval omega);

/// All tiles over the arcs of omega; per arc the spatial intervals exactly
/// partition the torus at the dual level.
TileSet build_tiles(std::size_t n, const IntervalCollection& omega,
                    double plateau_radius = 1.0, double support_radius = 2.0);

/// Overload mapping a Window's plateau:support ratio onto the tile envelope.
TileSet build_tiles(std::size_t n, const IntervalCollection& omega, const Window& w);

/// Coefficients <f, phi_s> for every tile, aligned with TileSet::tiles.
std::vector<cplx> tile_coefficients(const Spectrum& fhat, const TileSet& T);

struct TileOpResult {
    TorusSignal out;           // T^Omega f = (sum_s |<f,phi_s>|^2/|I_s| 1_{I_s})^(1/2)
    std::vector<cplx> coefs;   // reusable coefficient table
};

TileOpResult tile_operator(const TorusSignal& f, const TileSet& T);

/// Largest eigenvalue of the Gram matrix of the wave packets over one arc:
/// the sharp constant in sum_s |<f,phi_s>|^2 <= C ||f||_2^2.
double bessel_constant(std::size_t n, FreqInterval omega, double plateau_radius = 1.0,
                       double support_radius = 2.0);

/// Same constant by an independent route: Lanczos iteration (reorthogonalized)
/// with the top Ritz value extracted from the tridiagonal matrix by Sturm
/// bisection.  Plain power iteration cannot separate the near-degenerate top
/// cluster of these Gram matrices; the Krylov form of the same
/// Rayleigh-quotient maximization does.
double bessel_constant_krylov(std::size_t n, FreqInterval omega, double plateau_radius = 1.0,
                              double support_radius = 2.0, int max_dim = 160,
                              std::uint64_t seed = 1);

struct TailProbePoint {
    double t;        // support exclusion factor: f lives off tI
    double t_rho;
    double ratio;    // sum_{I_s in I} |<f,phi_s>|^2 / ||phi^{3omega} * f||_2^2
};

struct TailProbeOptions {
    int starts = 20;
    int iters = 200;
    double step = 0.5;
    double fit_floor = 1e-13;  // points below this are left out of the slope fit
};

struct TailProbeReport {
    double rho = 0.0;
    std::vector<TailProbePoint> points;
    double fitted_slope = 0.0;  // log ratio vs log(t*rho), over points above floor
};

/// Worst-case coefficient leakage of tiles inside I from mass supported off
/// tI, maximized by projected gradient ascent on the Rayleigh ratio.
TailProbeReport tail_decay_probe(std::size_t n, FreqInterval omega, DyadicInterval I,
                                 std::span<const double> ts, std::uint64_t seed,
                                 const TailProbeOptions& opt = {});

/// Max-abs discrepancy between the average of Tr_{-y} H_omega Tr_y f over all
/// n shifts (computed shift by shift) and the convolution with the window of
/// squared profile; the two are equal on the finite torus.
double translation_average_check(std::size_t n, FreqInterval omega, const TorusSignal& f,
                                 double plateau_radius = 1.0, double support_radius = 2.0);

struct PointwiseMaxReport {
    double best_constant = 0.0;  // max_x sup_s 1_{I_s}|<f,phi_s>|/sqrt(|I_s|) / Mf(x)
};

/// Checks sup_s 1_{I_s} |<f,phi_s>| / sqrt(|I_s|) <= C * Mf pointwise.
PointwiseMaxReport pointwise_max_check(const TorusSignal& f, const TileSet& T);

struct GreedySplitResult {
    std::vector<std::size_t> big;    // tile indices
    std::vector<std::size_t> small;
    std::vector<DyadicInterval> extracted;  // the J list, in extraction order
    double shadow_big = 0.0;         // |sh(T_big)|
    double cm_small = 0.0;           // CM norm of the remaining stock (< beta/4)
    double cm_initial = 0.0;
    double mass_big = 0.0;           // sum over T_big of |<1_F, phi_s>|^2
    double mass_total = 0.0;         // same over all tiles
    double sum_extracted = 0.0;      // sum of |J| over the extraction list
};

/// The recursive While loop: while the Carleson norm of the squared
/// coefficients of 1_F on the remaining stock is >= beta/4, extract a maximal
/// dyadic J over threshold (coarsest level first, then smallest offset) and
/// move every tile with I_s inside J into T_big.
GreedySplitResult greedy_bmo_split(const TileSet& T, const std::vector<bool>& F, double beta);

/// ||T^Omega 1_F||_p / |F|^(1/p) for an indicator input; p > 2.
double restricted_type_check(const TileSet& T, const std::vector<bool>& F, double p);

// --- product (two-parameter) tiles ---------------------------------------

struct Tile2 {
    DyadicInterval s1, s2;  // spatial rectangle R_s
    FreqRect freq;
    double area() const { return s1.length() * s2.length(); }
};

struct TileBand2 {
    FreqRect freq;
    int level1 = 0, level2 = 0;
    long k0_1 = 0, k0_2 = 0;
    std::vector<double> env1, env2;  // separable envelope
    std::vector<std::size_t> tile_index;  // offset-major: o1 * (#o2) + o2
};

struct TileSet2 {
    std::size_t n1 = 0, n2 = 0;
    std::vector<FreqRect> source;
    std::vector<Tile2> tiles;
    std::vector<TileBand2> bands;
};

TileSet2 build_tiles2(std::size_t n1, std::size_t n2, const std::vector<FreqRect>& omega,
                      double plateau_radius = 1.0, double support_radius = 2.0);

std::vector<cplx> tile_coefficients2(const Spectrum2& fhat, const TileSet2& T);

struct TileOp2Result {
    TorusSignal2 out;
    std::vector<cplx> coefs;
};

TileOp2Result product_tile_operator(const TorusSignal2& f, const TileSet2& T);

/// Product of the per-coordinate Gram bounds for one frequency rectangle.
double bessel_constant2(std::size_t n1, std::size_t n2, const FreqRect& omega,
                        double plateau_radius = 1.0, double support_radius = 2.0);

// --- serialization --------------------------------------------------------

/// CSV rows "omega_lo,omega_hi,level,offset,re,im".
void write_coefficients_csv(const TileSet& T, std::span<const cplx> coefs, std::ostream& os);

/// JSON {"big": [...], "small": [...], "J": [...]} with tiles as
/// {omega:[lo,hi], level, offset} and J entries as {level, offset}.
void write_split_json(const TileSet& T, const GreedySplitResult& r, std::ostream& os);

}  // namespace lptile
