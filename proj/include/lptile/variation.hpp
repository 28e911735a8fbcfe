#pragma once

#include <iosfwd>
#include <span>

#include "lptile/torus.hpp"

namespace lptile {

/// q-variation of a sampled sequence: exact sup over subsequences of
/// (sum |m(xi_{k+1}) - m(xi_k)|^q)^(1/q), by the O(n^2) dynamic program
/// V[j] = max_{i<j} (V[i] + |m_j - m_i|^q).  Valid for all q > 0.
double var_q(std::span<const cplx> m, double q);
double var_q(std::span<const double> m, double q);

/// Exhaustive reference route: enumerates every subsequence through both
/// endpoints (2^(n-2) of them); n <= 20.  Independent of the dynamic program.
double var_q_exhaustive(std::span<const cplx> m, double q);

/// V_q norm: sup norm plus q-variation.
double vq_norm(std::span<const cplx> m, double q);
double vq_norm(std::span<const double> m, double q);

/// mu(i) = Var_q(m over samples 0..i)^q, the prefix variation profile;
/// monotone nondecreasing with mu(0) = 0.
std::vector<double> variation_profile(std::span<const cplx> m, double q);

struct MartingaleLevel {
    std::vector<std::pair<std::size_t, std::size_t>> cells;  // index ranges [a,b)
    std::vector<cplx> piece;                                 // m_j on the sample grid
    double sup_norm = 0.0;
};

struct MartingaleDecomposition {
    double vq = 0.0;        // V_q norm of the input (pieces are for m/vq)
    double mu_total = 0.0;  // Var_q(m/vq)^q
    std::vector<MartingaleLevel> levels;  // j = 1..j_max
};

/// Lemma-style martingale decomposition: partitions Pi_j are the preimages of
/// the 2^j equal cells of [0, mu_total] under the variation profile, and the
/// partial sums sum_{k<=j} m_k are the Pi_j cell averages of m/vq.  Oscillation
/// on a level-j cell obeys ||m_j||_inf <= C 2^(-j/q); requires q >= 1.
MartingaleDecomposition martingale_decompose(std::span<const cplx> m, double q, int j_max);

enum class Var2Mode { GridDp, Brute };

/// Tensor-grid q-variation in two dimensions over rectangle mixed differences
/// Diff_R(m) = m(b1,b2) - m(a1,b2) - m(b1,a2) + m(a1,a2):
///  - GridDp: alternating row/column dynamic programs to a local optimum of
///    the tensor-partition sup;
///  - Brute: exact enumeration of all tensor partitions (grids <= 5x5).
double var_q_2d(const std::vector<std::vector<cplx>>& m, double q,
                Var2Mode mode = Var2Mode::GridDp);

/// Step function on an integer frequency domain [domain_lo, domain_hi):
/// value[i] on [breakpoints[i], breakpoints[i+1]), with
/// breakpoints[0] == domain_lo and an implicit end at domain_hi.
struct StepMultiplier {
    std::vector<long> breakpoints;  // strictly increasing, first == domain_lo
    std::vector<cplx> values;       // one per cell
    long domain_lo = 0;
    long domain_hi = 0;

    void validate() const;
    std::size_t cells() const { return values.size(); }
    cplx value_at(long k) const;
    /// Samples on [-n/2, n/2), zero outside the domain.
    std::vector<cplx> sample(std::size_t n) const;
};

/// Block norm <<m>>_q = (sum_j |b_j|^q)^(1/q) over the cells of m's own
/// partition; refining the partition never decreases it.
double block_step_norm(const StepMultiplier& m, double q);

/// One nested level: coordinatewise block norm of a step function whose
/// values are themselves step functions (the scalar 2D E(R) norm).
double block_step_norm_nested(const std::vector<StepMultiplier>& rows, double q);

/// CSV rows "breakpoint,re,im" (one per cell), preceded by a
/// "domain,<lo>,<hi>" row.
void write_step_multiplier_csv(const StepMultiplier& m, std::ostream& os);
StepMultiplier read_step_multiplier_csv(std::istream& is);

}  // namespace lptile
