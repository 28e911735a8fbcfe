#pragma once

#include <cstdint>
#include <span>

#include "lptile/intervals.hpp"
#include "lptile/torus.hpp"
#include "lptile/variation.hpp"

namespace lptile {

/// A_m f: pointwise spectral multiplication.  m is indexed by frequency in
/// math order ([-n/2, n/2)); diagonal in frequency, so ||A_m||_2 = ||m||_inf.
TorusSignal apply_multiplier(const TorusSignal& f, std::span<const cplx> m);
TorusSignal apply_multiplier(const TorusSignal& f, const StepMultiplier& m);

struct OpNormOptions {
    int restarts = 20;
    int iters = 200;
    double tol = 1e-10;  // relative stall tolerance per restart
};

struct OpNormEstimate {
    double value = 0.0;       // best achieved ratio: a guaranteed lower bound
    TorusSignal witness;      // achieves the ratio (||witness||_p = 1)
    int iterations_used = 0;
    bool converged = false;
};

/// Lower-bound estimate of ||A_m||_p.  Exact ||m||_inf at p = 2; otherwise a
/// dual-exponent fixed-point iteration f <- A_m^*( |A_m f|^(p-1) sign ) with
/// p-normalization, from seeded random starts; the returned witness achieves
/// the returned ratio.  Requires p in (1, infinity).
OpNormEstimate op_norm_p(std::span<const cplx> m, double p, std::uint64_t seed,
                         const OpNormOptions& opt = {});

/// The lacunary grid blocks: [0,2), {-1}, and +-[2^k, 2^(k+1)) for k >= 1,
/// with the unpaired -n/2 absorbed into the most negative block.  Partitions
/// [-n/2, n/2).
std::vector<FreqInterval> lacunary_blocks(std::size_t n);

struct CrsReport {
    double lhs = 0.0;    // op_norm_p estimate
    double rhs = 0.0;    // sup over lacunary blocks of the V_q norm of m there
    double ratio = 0.0;  // lhs / rhs
};

/// Coifman-Rubio de Francia-Semmes bound check; requires |1/2 - 1/p| < 1/q.
CrsReport crs_check(std::span<const cplx> m, double p, double q, std::uint64_t seed,
                    const OpNormOptions& opt = {});

struct DecoupleRow {
    int n_sub = 0;
    double lhs = 0.0;       // op norm estimate of the refined step multiplier
    double bound = 0.0;     // n_sub^(1/q) * ||a||_inf
    double constant = 0.0;  // lhs / bound
};

struct DecoupleReport {
    double lacunary_lhs = 0.0;  // n_sub = 1 case (pure lacunary steps)
    std::vector<DecoupleRow> rows;
    double fitted_slope = 0.0;  // log lhs vs log n_sub
    double max_constant = 0.0;
};

/// Refines each lacunary block into n_sub equal cells with seeded +-1
/// coefficients and sweeps n_sub in {2,4,8,16}; the fitted growth exponent is
/// compared against 1/q.
DecoupleReport decouple_check(std::size_t n, double p, double q, std::uint64_t seed,
                              const OpNormOptions& opt = {});

struct RubioCounterexampleRow {
    long N = 0;
    double ratio = 0.0;         // ||S^Omega f||_p / ||f||_p
    double witness_value = 0.0; // S^Omega f(0) / sqrt(N)
    double fnorm = 0.0;
};

struct RubioCounterexampleReport {
    double p = 0.0;
    std::vector<RubioCounterexampleRow> rows;
    double fitted_exponent = 0.0;        // of the ratio vs N
    double fnorm_fitted_exponent = 0.0;  // of ||f||_p vs N
};

/// fhat = 1_[0,N), Omega = unit arcs: the square function is identically
/// sqrt(N), so the ratio grows like N^(1/p - 1/2) for p < 2.
RubioCounterexampleReport counterexample_rubio(std::size_t n, std::span<const long> Ns,
                                               double p);

struct MultiplierCounterexampleRow {
    long N = 0;
    double mean_ratio = 0.0;      // E ||A_m f||_p / ||f||_p over sign draws
    double mean_norm_over_sqrtN = 0.0;  // E ||A_m f||_p / sqrt(N)
    double witness_lower = 0.0;   // max over {p, p'} of the witness ratio
    double varq = 0.0;            // Var_q(m) for the last draw
};

struct MultiplierCounterexampleReport {
    double p = 0.0;
    double q = 2.0;
    long spacing = 0;
    std::vector<MultiplierCounterexampleRow> rows;
    double fitted_exponent = 0.0;       // witness_lower vs N
    double varq_fitted_exponent = 0.0;  // varq vs N
};

/// m = sum_{k<=N} eps_k Tr_{k Delta} psihat with disjoint bumps; applied to
/// fhat = 1_[0, N Delta).  The witness lower bound uses both p and its
/// conjugate exponent (the multiplier is real, so the two norms agree).
MultiplierCounterexampleReport counterexample_multiplier(std::size_t n,
                                                         std::span<const long> Ns, double p,
                                                         int trials, std::uint64_t seed,
                                                         long spacing = 8, double q = 2.0);

}  // namespace lptile
