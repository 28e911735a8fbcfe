#pragma once

#include <cstdint>
#include <iosfwd>

#include "lptile/intervals.hpp"
#include "lptile/torus.hpp"
#include "lptile/torus2.hpp"

namespace lptile {

/// Nonnegative weights on the dyadic intervals of [0,1) down to a fixed depth,
/// stored densely per level: a[k][j] = alpha([j 2^-k, (j+1) 2^-k)).
struct CarlesonSeq {
    int depth = 0;
    std::vector<std::vector<double>> a;

    explicit CarlesonSeq(int depth_ = 0);
    double& at(int level, long offset) {
        return a[static_cast<std::size_t>(level)][static_cast<std::size_t>(offset)];
    }
    double at(int level, long offset) const {
        return a[static_cast<std::size_t>(level)][static_cast<std::size_t>(offset)];
    }
    CarlesonSeq& operator+=(const CarlesonSeq& other);
};

/// sup over dyadic J of |J|^-1 sum_{I subset J} alpha(I), one bottom-up tree
/// pass over subtree sums; exact.
double cm_norm(const CarlesonSeq& alpha);

/// Reference route: recomputes the same sup by summing the descendants of
/// every J independently, with no shared accumulation.
double cm_norm_scan(const CarlesonSeq& alpha);

/// Dyadic BMO: sup over representable dyadic I of the mean oscillation
/// (1/|I|) integral_I |g - mean_I g|.
double dyadic_bmo(const TorusSignal& g);

/// Dyadic sharp function with L2 oscillation:
/// g#(x) = sup_{I dyadic, x in I} ( mean_I |g - mean_I g|^2 )^(1/2).
TorusSignal sharp_function(const TorusSignal& g);

/// The John-Nirenberg functional: F = sum_{I subset J} (alpha(I)/|I|) 1_I on
/// the grid of 2^depth samples.
TorusSignal jn_function(const CarlesonSeq& alpha, DyadicInterval J);

/// ||F||_p / (cm_norm(alpha) * |J|^(1/p)); p > 1.
double jn_check(const CarlesonSeq& alpha, double p, DyadicInterval J);

/// Weights on dyadic rectangles of the unit square, dense per level pair:
/// a[k1][k2] is a (2^k1 x 2^k2) grid.
struct ProductCarlesonSeq {
    int depth1 = 0, depth2 = 0;
    std::vector<std::vector<std::vector<double>>> a;  // [k1][k2][j1*2^k2+j2]

    ProductCarlesonSeq(int d1, int d2);
    double& at(int k1, long j1, int k2, long j2);
    double at(int k1, long j1, int k2, long j2) const;
    std::size_t cells1() const { return std::size_t{1} << depth1; }
    std::size_t cells2() const { return std::size_t{1} << depth2; }
};

enum class ProductCmMode { RectOnly, Exhaustive, Heuristic };

/// Product Carleson norm sup_U |U|^-1 sum_{R subset U} alpha(R).
///  - RectOnly: U ranges over dyadic rectangles only (not an adequate
///    definition of the norm; reported for comparison).
///  - Exhaustive: exact sup over arbitrary unions of finest-level cells.
///    Works by enumerating unions of supported rectangles, which attains the
///    same sup; exponential in the support size (grids <= 8x8, support <= 24).
///  - Heuristic: greedy rectangle-addition local search; a lower bound.
double product_cm_norm(const ProductCarlesonSeq& alpha, ProductCmMode mode);

/// Cell mask over the finest grid (cells1() x cells2(), row-major).
using CellMask = std::vector<bool>;

/// F_U = sum_{R subset U} (alpha(R)/|R|) 1_R sampled on the finest grid.
TorusSignal2 product_jn_function(const ProductCarlesonSeq& alpha, const CellMask& U);

struct ProductJnStep {
    CellMask V;
    double measure_U = 0.0, measure_V = 0.0;
    double K = 0.0;             // final threshold multiplier (doubled until |V| < |U|/2)
    double norm_FU = 0.0, norm_FV = 0.0;
    double constant = 0.0;      // ||F_U||_p / (|U|^(1/p) + ||F_V||_p)
    bool halved = false;        // |V| < |U|/2 reached
};

/// One step of the Chang-Fefferman duality recursion: the dual witness
/// g = (F_U/||F_U||_p)^(p-1), the exceptional set V = {Mg > K |U|^(-1/p')}
/// under the strong maximal function, K starting at 4 and doubling until
/// |V| < |U|/2, and the split estimate constant.
ProductJnStep product_jn_step(const ProductCarlesonSeq& alpha, const CellMask& U, double p,
                              double K0 = 4.0);

// --- serialization ---------------------------------------------------------

/// CSV rows "level,offset,value" (nonzero entries).
void write_carleson_csv(const CarlesonSeq& alpha, std::ostream& os);
CarlesonSeq read_carleson_csv(std::istream& is);

/// CSV rows "lev1,off1,lev2,off2,value" (nonzero entries).
void write_product_carleson_csv(const ProductCarlesonSeq& alpha, std::ostream& os);
ProductCarlesonSeq read_product_carleson_csv(std::istream& is);

}  // namespace lptile
