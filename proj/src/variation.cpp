#include "lptile/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace lptile {

namespace {
double varq_impl(std::span<const cplx> m, double q, std::vector<double>* profile) {
    if (!(q > 0.0)) throw std::invalid_argument("var_q: requires q > 0");
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("var_q: empty sequence");
    std::vector<double> V(n, 0.0);
    double best = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        double vj = 0.0;
        for (std::size_t i = 0; i < j; ++i)
            vj = std::max(vj, V[i] + std::pow(std::abs(m[j] - m[i]), q));
        V[j] = vj;
        best = std::max(best, vj);
    }
    if (profile) *profile = std::move(V);
    return std::pow(best, 1.0 / q);
}
}  // namespace

double var_q(std::span<const cplx> m, double q) { return varq_impl(m, q, nullptr); }

double var_q(std::span<const double> m, double q) {
    std::vector<cplx> c(m.begin(), m.end());
    return var_q(std::span<const cplx>(c), q);
}

double var_q_exhaustive(std::span<const cplx> m, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("var_q_exhaustive: requires q > 0");
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("var_q_exhaustive: empty sequence");
    if (n > 20) throw std::invalid_argument("var_q_exhaustive: n <= 20");
    if (n == 1) return 0.0;
    // both endpoints anchored: dropping an endpoint never raises the sum
    const std::size_t interior = n - 2;
    double best = 0.0;
    for (std::uint32_t bits = 0; bits < (1u << interior); ++bits) {
        double acc = 0.0;
        std::size_t prev = 0;
        for (std::size_t i = 0; i < interior; ++i) {
            if (bits & (1u << i)) {
                acc += std::pow(std::abs(m[i + 1] - m[prev]), q);
                prev = i + 1;
            }
        }
        acc += std::pow(std::abs(m[n - 1] - m[prev]), q);
        best = std::max(best, acc);
    }
    return std::pow(best, 1.0 / q);
}

double vq_norm(std::span<const cplx> m, double q) {
    double sup = 0.0;
    for (const cplx& z : m) sup = std::max(sup, std::abs(z));
    return sup + var_q(m, q);
}

double vq_norm(std::span<const double> m, double q) {
    std::vector<cplx> c(m.begin(), m.end());
    return vq_norm(std::span<const cplx>(c), q);
}

std::vector<double> variation_profile(std::span<const cplx> m, double q) {
    // Prefix-anchored variant: V[j] over paths starting at 0 and ending at j.
    // Since V >= 0 and appending an endpoint never decreases a path sum, this
    // equals the free DP and is monotone nondecreasing.
    if (!(q > 0.0)) throw std::invalid_argument("variation_profile: requires q > 0");
    const std::size_t n = m.size();
    std::vector<double> V(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        double vj = 0.0;
        for (std::size_t i = 0; i < j; ++i)
            vj = std::max(vj, V[i] + std::pow(std::abs(m[j] - m[i]), q));
        V[j] = std::max(vj, V[j - 1]);
    }
    return V;
}

MartingaleDecomposition martingale_decompose(std::span<const cplx> m, double q, int j_max) {
    if (!(q >= 1.0)) throw std::invalid_argument("martingale_decompose: requires q >= 1");
    if (j_max < 1) throw std::invalid_argument("martingale_decompose: j_max >= 1");
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("martingale_decompose: empty sequence");

    MartingaleDecomposition dec;
    dec.vq = vq_norm(m, q);
    std::vector<cplx> mm(m.begin(), m.end());
    if (dec.vq > 0.0)
        for (cplx& z : mm) z /= dec.vq;

    const std::vector<double> mu = variation_profile(mm, q);
    dec.mu_total = mu.back();

    std::vector<cplx> prev_avg(n, 0.0);
    for (int j = 1; j <= j_max; ++j) {
        const long cells = 1ll << j;
        // cell of index i: floor(mu_i / mu_total * 2^j), clamped into [0, 2^j)
        std::vector<long> cell(n, 0);
        if (dec.mu_total > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                long c = static_cast<long>(mu[i] / dec.mu_total * static_cast<double>(cells));
                cell[i] = std::min(c, cells - 1);
            }
        }
        MartingaleLevel level;
        std::vector<cplx> avg(n, 0.0);
        std::size_t a = 0;
        while (a < n) {
            std::size_t b = a;
            while (b < n && cell[b] == cell[a]) ++b;
            cplx s = 0.0;
            for (std::size_t i = a; i < b; ++i) s += mm[i];
            s /= static_cast<double>(b - a);
            for (std::size_t i = a; i < b; ++i) avg[i] = s;
            level.cells.emplace_back(a, b);
            a = b;
        }
        level.piece.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            level.piece[i] = avg[i] - prev_avg[i];
            level.sup_norm = std::max(level.sup_norm, std::abs(level.piece[i]));
        }
        prev_avg = std::move(avg);
        dec.levels.push_back(std::move(level));
    }
    return dec;
}

namespace {
using Grid = std::vector<std::vector<cplx>>;

cplx rect_diff(const Grid& m, std::size_t a1, std::size_t b1, std::size_t a2, std::size_t b2) {
    return m[b1][b2] - m[a1][b2] - m[b1][a2] + m[a1][a2];
}

double tensor_partition_value(const Grid& m, const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols, double q) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        for (std::size_t j = 0; j + 1 < cols.size(); ++j)
            acc += std::pow(std::abs(rect_diff(m, rows[i], rows[i + 1], cols[j], cols[j + 1])), q);
    return acc;
}

// best anchored row breakpoints for fixed columns, by 1D DP over row cells
std::vector<std::size_t> best_rows(const Grid& m, const std::vector<std::size_t>& cols,
                                   double q) {
    const std::size_t R = m.size();
    // cost(a,b) = sum over column cells of |Diff|^q for the row cell [a,b]
    std::vector<double> V(R, -1.0);
    std::vector<std::size_t> from(R, 0);
    V[0] = 0.0;
    for (std::size_t b = 1; b < R; ++b) {
        for (std::size_t a = 0; a < b; ++a) {
            if (V[a] < 0.0) continue;
            double c = 0.0;
            for (std::size_t j = 0; j + 1 < cols.size(); ++j)
                c += std::pow(std::abs(rect_diff(m, a, b, cols[j], cols[j + 1])), q);
            if (V[a] + c > V[b]) {
                V[b] = V[a] + c;
                from[b] = a;
            }
        }
    }
    std::vector<std::size_t> rows{R - 1};
    while (rows.back() != 0) rows.push_back(from[rows.back()]);
    std::reverse(rows.begin(), rows.end());
    return rows;
}
}  // namespace

double var_q_2d(const Grid& m, double q, Var2Mode mode) {
    if (!(q > 0.0)) throw std::invalid_argument("var_q_2d: requires q > 0");
    const std::size_t R = m.size();
    if (R < 2 || m[0].size() < 2) throw std::invalid_argument("var_q_2d: grid too small");
    const std::size_t C = m[0].size();
    for (const auto& row : m)
        if (row.size() != C) throw std::invalid_argument("var_q_2d: ragged grid");

    if (mode == Var2Mode::Brute) {
        if (R > 5 || C > 5) throw std::invalid_argument("var_q_2d: brute needs <= 5x5");
        double best = 0.0;
        const std::size_t ri = R - 2, ci = C - 2;  // interior candidates
        for (std::uint32_t rb = 0; rb < (1u << ri); ++rb)
            for (std::uint32_t cb = 0; cb < (1u << ci); ++cb) {
                std::vector<std::size_t> rows{0}, cols{0};
                for (std::size_t i = 0; i < ri; ++i)
                    if (rb & (1u << i)) rows.push_back(i + 1);
                rows.push_back(R - 1);
                for (std::size_t j = 0; j < ci; ++j)
                    if (cb & (1u << j)) cols.push_back(j + 1);
                cols.push_back(C - 1);
                best = std::max(best, tensor_partition_value(m, rows, cols, q));
            }
        return std::pow(best, 1.0 / q);
    }

    // alternating coordinate ascent; three deterministic starts (coarsest
    // columns, finest columns, finest rows), best kept
    Grid mt(C, std::vector<cplx>(R));
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) mt[j][i] = m[i][j];
    double best = 0.0;
    for (int start = 0; start < 3; ++start) {
        std::vector<std::size_t> cols;
        if (start == 0) {
            cols = {0, C - 1};
        } else if (start == 1) {
            cols.resize(C);
            for (std::size_t j = 0; j < C; ++j) cols[j] = j;
        } else {
            std::vector<std::size_t> allrows(R);
            for (std::size_t i = 0; i < R; ++i) allrows[i] = i;
            cols = best_rows(mt, allrows, q);
        }
        std::vector<std::size_t> rows{0, R - 1};
        double cur = tensor_partition_value(m, rows, cols, q);
        for (int round = 0; round < 64; ++round) {
            rows = best_rows(m, cols, q);
            cols = best_rows(mt, rows, q);
            const double next = tensor_partition_value(m, rows, cols, q);
            if (next <= cur + 1e-15 * (1.0 + cur)) {
                cur = std::max(cur, next);
                break;
            }
            cur = next;
        }
        best = std::max(best, cur);
    }
    return std::pow(best, 1.0 / q);
}

void StepMultiplier::validate() const {
    if (breakpoints.empty() || breakpoints.size() != values.size())
        throw std::invalid_argument("StepMultiplier: breakpoints/values mismatch");
    if (domain_lo >= domain_hi || breakpoints.front() != domain_lo)
        throw std::invalid_argument("StepMultiplier: bad domain");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (breakpoints[i] >= breakpoints[i + 1])
            throw std::invalid_argument("StepMultiplier: breakpoints must increase");
    if (breakpoints.back() >= domain_hi)
        throw std::invalid_argument("StepMultiplier: last cell empty");
    for (const cplx& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("StepMultiplier: non-finite value");
}

cplx StepMultiplier::value_at(long k) const {
    if (k < domain_lo || k >= domain_hi) return 0.0;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), k);
    return values[static_cast<std::size_t>(std::distance(breakpoints.begin(), it)) - 1];
}

std::vector<cplx> StepMultiplier::sample(std::size_t n) const {
    validate();
    const long half = static_cast<long>(n / 2);
    std::vector<cplx> out(n, 0.0);
    for (long k = -half; k < half; ++k)
        out[static_cast<std::size_t>(k + half)] = value_at(k);
    return out;
}

double block_step_norm(const StepMultiplier& m, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("block_step_norm: requires q > 0");
    m.validate();
    double acc = 0.0;
    for (const cplx& b : m.values) acc += std::pow(std::abs(b), q);
    return std::pow(acc, 1.0 / q);
}

double block_step_norm_nested(const std::vector<StepMultiplier>& rows, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("block_step_norm_nested: requires q > 0");
    double acc = 0.0;
    for (const auto& row : rows) acc += std::pow(block_step_norm(row, q), q);
    return std::pow(acc, 1.0 / q);
}

void write_step_multiplier_csv(const StepMultiplier& m, std::ostream& os) {
    os << "domain," << m.domain_lo << "," << m.domain_hi << "\n";
    os << "breakpoint,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < m.cells(); ++i) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", m.breakpoints[i],
                      m.values[i].real(), m.values[i].imag());
        os << buf;
    }
}

StepMultiplier read_step_multiplier_csv(std::istream& is) {
    StepMultiplier m;
    std::string line;
    bool have_domain = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("domain,", 0) == 0) {
            if (std::sscanf(line.c_str(), "domain,%ld,%ld", &m.domain_lo, &m.domain_hi) != 2)
                throw std::invalid_argument("bad step multiplier domain row");
            have_domain = true;
            continue;
        }
        if (line.rfind("breakpoint", 0) == 0) continue;
        long bp;
        double re, im;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf", &bp, &re, &im) != 3)
            throw std::invalid_argument("bad step multiplier row: " + line);
        m.breakpoints.push_back(bp);
        m.values.emplace_back(re, im);
    }
    if (!have_domain) throw std::invalid_argument("step multiplier CSV missing domain row");
    m.validate();
    return m;
}

}  // namespace lptile
