#include "lptile/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "lptile/carleson.hpp"
#include "lptile/multiplier.hpp"
#include "lptile/projections.hpp"
#include "lptile/rng.hpp"
#include "lptile/tiles.hpp"
#include "lptile/torus.hpp"
#include "lptile/torus2.hpp"
#include "lptile/variation.hpp"
#include "lptile/well_distributed.hpp"

#include "json.hpp"

namespace lptile {

namespace {

using json = nlohmann::ordered_json;
constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class Csv {
public:
    explicit Csv(std::initializer_list<const char*> cols) {
        bool first = true;
        for (const char* c : cols) {
            if (!first) out_ += ',';
            out_ += c;
            first = false;
        }
        out_ += '\n';
    }
    void row(std::initializer_list<double> vals) {
        char buf[48];
        bool first = true;
        for (double v : vals) {
            if (!first) out_ += ',';
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out_ += buf;
            first = false;
        }
        out_ += '\n';
    }
    void tagged_row(const std::string& tag, std::initializer_list<double> vals) {
        out_ += tag;
        char buf[48];
        for (double v : vals) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out_ += buf;
        }
        out_ += '\n';
    }
    const std::string& str() const { return out_; }

private:
    std::string out_;
};

TorusSignal random_signal(std::size_t n, Rng& rng) {
    TorusSignal f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = rng.complex_gaussian();
    return f;
}

TorusSignal2 random_signal2(std::size_t n1, std::size_t n2, Rng& rng) {
    TorusSignal2 f(n1, n2);
    for (auto& z : f.data()) z = rng.complex_gaussian();
    return f;
}

IntervalCollection random_disjoint(std::size_t n, std::size_t count, Rng& rng) {
    const long half = static_cast<long>(n / 2);
    std::vector<long> cuts;
    while (cuts.size() < 2 * count) {
        const long c = static_cast<long>(rng.below(n)) - half;
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    IntervalCollection om;
    for (std::size_t i = 0; i + 1 < cuts.size(); i += 2)
        if (cuts[i] < cuts[i + 1]) om.intervals.push_back({cuts[i], cuts[i + 1]});
    return om;
}

IntervalCollection unit_arcs(long lo, long hi) {
    IntervalCollection om;
    for (long k = lo; k < hi; ++k) om.intervals.push_back({k, k + 1});
    return om;
}

struct Body {
    Csv csv;
    json results = json::object();
    std::vector<std::string> flags{};
    bool ok = true;
};

// ---------------------------------------------------------------------------
// square-sweep: Rubio boundedness growth check, 1D and 2D
// ---------------------------------------------------------------------------
Body exp_square_sweep(const Config& cfg, std::uint64_t seed, std::optional<std::size_t> nmax) {
    Body b{Csv{"dim", "p", "n", "max_ratio"}};
    const auto ps = cfg.get_list("square-sweep", "p", {2.0, 3.0, 4.0});
    std::vector<std::size_t> ns;
    for (double v : cfg.get_list("square-sweep", "n_list", {512, 1024, 2048, 4096}))
        if (!nmax || static_cast<std::size_t>(v) <= *nmax) ns.push_back(static_cast<std::size_t>(v));
    const int families = static_cast<int>(cfg.get_long("square-sweep", "families", 4));
    const int trials = static_cast<int>(cfg.get_long("square-sweep", "trials", 8));

    json slopes = json::object();
    for (double p : ps) {
        std::vector<double> xs, ys;
        for (std::size_t n : ns) {
            double maxr = 0.0;
            for (int fam = 0; fam < families; ++fam) {
                Rng rng = Rng::stream(seed, 10'000 + n + static_cast<std::uint64_t>(fam));
                const IntervalCollection om = random_disjoint(n, 12, rng);
                for (int t = 0; t < trials; ++t) {
                    const TorusSignal f = random_signal(n, rng);
                    const double r = lp_norm(square_sharp(f, om), p) / lp_norm(f, p);
                    maxr = std::max(maxr, r);
                }
            }
            b.csv.row({1, p, static_cast<double>(n), maxr});
            xs.push_back(std::log(static_cast<double>(n)));
            ys.push_back(std::log(maxr));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double m = static_cast<double>(xs.size());
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        slopes[std::to_string(p)] = slope;
        b.ok = b.ok && std::isfinite(slope);
    }
    b.results["slope_1d"] = slopes;

    // 2D analogue on square grids
    std::vector<std::size_t> ns2;
    for (double v : cfg.get_list("square-sweep", "n2_list", {32, 64, 128})) {
        const auto s = static_cast<std::size_t>(v);
        if (s <= 256) ns2.push_back(s);
    }
    json slopes2 = json::object();
    for (double p : ps) {
        std::vector<double> xs, ys;
        for (std::size_t n : ns2) {
            double maxr = 0.0;
            for (int fam = 0; fam < 2; ++fam) {
                Rng rng = Rng::stream(seed, 20'000 + n + static_cast<std::uint64_t>(fam));
                std::vector<FreqRect> om;
                const IntervalCollection o1 = random_disjoint(n, 3, rng);
                const IntervalCollection o2 = random_disjoint(n, 3, rng);
                for (const auto& a : o1.intervals)
                    for (const auto& c : o2.intervals) om.push_back({a, c});
                for (int t = 0; t < 3; ++t) {
                    const TorusSignal2 f = random_signal2(n, n, rng);
                    const double r = lp_norm2(square_sharp2(f, om), p) / lp_norm2(f, p);
                    maxr = std::max(maxr, r);
                }
            }
            b.csv.row({2, p, static_cast<double>(n), maxr});
            xs.push_back(std::log(static_cast<double>(n)));
            ys.push_back(std::log(maxr));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double m = static_cast<double>(xs.size());
        slopes2[std::to_string(p)] = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    b.results["slope_2d"] = slopes2;
    return b;
}

// ---------------------------------------------------------------------------
// well-distributed: refinement invariants and norm equivalence brackets
// ---------------------------------------------------------------------------
Body exp_well_distributed(const Config& cfg, std::uint64_t seed,
                          std::optional<std::size_t> nmax) {
    const std::size_t n = nmax.value_or(
        static_cast<std::size_t>(cfg.get_long("well-distributed", "n", 1024)));
    const int trials = static_cast<int>(cfg.get_long("well-distributed", "trials", 200));
    Body b{Csv{"family", "overlap_before", "overlap_after", "pieces", "lumped",
               "partition_exact", "doubling_ok"}};

    struct Family {
        std::string name;
        IntervalCollection om;
    };
    const long half = static_cast<long>(n / 2);
    std::vector<Family> families;
    families.push_back({"unit_arcs", unit_arcs(-32, 32)});
    {
        IntervalCollection lac;
        for (const auto& blk : lacunary_blocks(n)) lac.intervals.push_back(blk);
        families.push_back({"lacunary", lac});
    }
    families.push_back({"wide_arc", IntervalCollection{{FreqInterval{-half / 2, half / 2}}}});
    for (int i = 0; i < 3; ++i) {
        Rng rng = Rng::stream(seed, 300 + static_cast<std::uint64_t>(i));
        families.push_back({"random_" + std::to_string(i), random_disjoint(n, 10, rng)});
    }

    double bracket[3] = {1.0, 1.0, 1.0};  // p = 2,3,4
    const double ps[3] = {2.0, 3.0, 4.0};
    for (const auto& fam : families) {
        const long before = overlap_bound(fam.om, n);
        const WellRefinement ref = well_refine(fam.om);
        const IntervalCollection refined = ref.collection();
        const long after = overlap_bound(refined, n);
        b.ok = b.ok && after <= 100;

        // exact partition per source arc and doubling property of kept pieces
        bool partition_exact = true;
        bool doubling_ok = true;
        std::size_t idx = 0;
        for (const auto& w : fam.om.intervals) {
            long covered = w.lo;
            while (idx < ref.pieces.size() && ref.pieces[idx].arc.lo == covered &&
                   ref.pieces[idx].arc.hi <= w.hi) {
                const auto& piece = ref.pieces[idx];
                if (!piece.lumped) {
                    const double len = static_cast<double>(piece.arc.width());
                    doubling_ok = doubling_ok &&
                                  static_cast<double>(piece.arc.lo) - 0.5 * len >=
                                      static_cast<double>(w.lo) &&
                                  static_cast<double>(piece.arc.hi) + 0.5 * len <=
                                      static_cast<double>(w.hi);
                }
                covered = piece.arc.hi;
                ++idx;
                if (covered == w.hi) break;
            }
            partition_exact = partition_exact && covered == w.hi;
        }
        std::size_t lumped = 0;
        for (const auto& piece : ref.pieces)
            if (piece.lumped) ++lumped;

        b.csv.tagged_row(fam.name, {static_cast<double>(before), static_cast<double>(after),
                                    static_cast<double>(ref.pieces.size()),
                                    static_cast<double>(lumped), partition_exact ? 1.0 : 0.0,
                                    doubling_ok ? 1.0 : 0.0});
        b.ok = b.ok && partition_exact && doubling_ok;

        // norm-equivalence bracket over random f, skipping the huge unit-arc family
        if (fam.om.intervals.size() <= 24) {
            Rng rng = Rng::stream(seed, 400);
            for (int t = 0; t < trials; ++t) {
                const TorusSignal f = random_signal(n, rng);
                const TorusSignal s0 = square_sharp(f, fam.om);
                const TorusSignal s1 = square_sharp(f, refined);
                for (int pi = 0; pi < 3; ++pi) {
                    const double r = lp_norm(s1, ps[pi]) / lp_norm(s0, ps[pi]);
                    bracket[pi] = std::max({bracket[pi], r, 1.0 / r});
                }
            }
        }
    }
    json br = json::object();
    for (int pi = 0; pi < 3; ++pi) br[std::to_string(ps[pi])] = bracket[pi];
    b.results["norm_equivalence_bracket"] = br;
    b.results["trials"] = trials;
    return b;
}

// ---------------------------------------------------------------------------
// tiles-bessel: Gram bound two ways, Bessel slack battery, tile operator L2
// ---------------------------------------------------------------------------
Body exp_tiles_bessel(const Config& cfg, std::uint64_t seed, std::optional<std::size_t> nmax) {
    Body b{Csv{"n", "omega_width", "bessel_eigen", "bessel_krylov", "rel_gap", "min_slack",
               "tileop_l2_ratio"}};
    const int nf = static_cast<int>(cfg.get_long("tiles-bessel", "random_f", 500));
    std::vector<std::size_t> ns{256, 1024};
    if (nmax) {
        ns.clear();
        ns.push_back(std::min<std::size_t>(256, *nmax));
        if (*nmax > 256) ns.push_back(*nmax);
    }
    double worst_gap = 0.0, worst_slack = 0.0;
    for (std::size_t n : ns) {
        for (long w : {5L, 8L, 16L, 32L}) {
            const FreqInterval omega{-w / 2, w - w / 2};
            const double ce = bessel_constant(n, omega);
            const double cp = bessel_constant_krylov(n, omega, 1.0, 2.0, 160, seed + 7);
            const double gap = std::abs(ce - cp) / ce;
            worst_gap = std::max(worst_gap, gap);

            const TileSet T = build_tiles(n, IntervalCollection{{omega}});
            Rng rng = Rng::stream(seed, 500 + n + static_cast<std::uint64_t>(w));
            double min_slack = std::numeric_limits<double>::infinity();
            double max_ratio = 0.0;
            for (int t = 0; t < nf; ++t) {
                const TorusSignal f = random_signal(n, rng);
                const auto coefs = tile_coefficients(dft(f), T);
                double mass = 0.0;
                for (const auto& c : coefs) mass += std::norm(c);
                const double l2 = lp_norm(f, 2.0);
                min_slack = std::min(min_slack, (ce * l2 * l2 - mass) / (ce * l2 * l2));
                if (t < 50) {
                    const auto op = tile_operator(f, T);
                    max_ratio = std::max(max_ratio, lp_norm(op.out, 2.0) / l2);
                }
            }
            worst_slack = std::min(worst_slack, min_slack);
            b.csv.row({static_cast<double>(n), static_cast<double>(w), ce, cp, gap, min_slack,
                       max_ratio});
            b.ok = b.ok && gap < 1e-8 && min_slack >= -1e-12;
        }
    }
    b.results["max_rel_gap"] = worst_gap;
    b.results["min_normalized_slack"] = worst_slack;
    b.results["random_f"] = nf;
    return b;
}

// ---------------------------------------------------------------------------
// tail-probe
// ---------------------------------------------------------------------------
Body exp_tail_probe(const Config& cfg, std::uint64_t seed, std::optional<std::size_t> nmax) {
    const std::size_t n = nmax.value_or(
        static_cast<std::size_t>(cfg.get_long("tail-probe", "n", 4096)));
    const long w = cfg.get_long("tail-probe", "omega_width", 64);
    const int level = static_cast<int>(cfg.get_long("tail-probe", "interval_level", 4));
    TailProbeOptions opt;
    opt.starts = static_cast<int>(cfg.get_long("tail-probe", "starts", 20));
    opt.iters = static_cast<int>(cfg.get_long("tail-probe", "iters", 200));
    const auto ts = cfg.get_list("tail-probe", "t", {1.5, 2, 3, 4, 6, 8});

    const FreqInterval omega{-w / 2, w - w / 2};
    const DyadicInterval I{level, (1l << level) / 2};
    const TailProbeReport rep = tail_decay_probe(n, omega, I, ts, seed, opt);

    Body b{Csv{"t", "t_rho", "ratio"}};
    bool monotone = true;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        const auto& pt = rep.points[i];
        b.csv.row({pt.t, pt.t_rho, pt.ratio});
        if (i > 0 && pt.ratio > rep.points[i - 1].ratio * 1.05) monotone = false;
    }
    b.results["monotone_nonincreasing"] = monotone;
    b.results["rho"] = rep.rho;
    b.results["fitted_slope"] = rep.fitted_slope;
    b.results["largest_t_ratio"] = rep.points.back().ratio;
    b.ok = std::isfinite(rep.fitted_slope);
    return b;
}

// ---------------------------------------------------------------------------
// greedy-split
// ---------------------------------------------------------------------------
Body exp_greedy_split(const Config& cfg, std::uint64_t seed, std::optional<std::size_t> nmax) {
    const std::size_t n = nmax.value_or(
        static_cast<std::size_t>(cfg.get_long("greedy-split", "n", 512)));
    Body b{Csv{"beta", "cm_initial", "cm_small", "exit_ok", "big_tiles", "shadow",
               "shadow_beta_over_F", "chain_ok"}};

    IntervalCollection om;
    om.intervals = {{-48, -16}, {-8, -4}, {0, 8}, {12, 20}, {32, 64}};
    const TileSet T = build_tiles(n, om);
    std::vector<bool> F(n, false);
    for (std::size_t j = 0; j < n / 8; ++j) F[j] = true;  // F = [0, 1/8)
    const double fmeasure = 1.0 / 8.0;

    double prod_max = 0.0, mass_over_F = 0.0;
    bool all_exit_ok = true, all_chain_ok = true;
    for (int e = -6; e <= 2; ++e) {
        const double beta = std::pow(2.0, e);
        const GreedySplitResult r = greedy_bmo_split(T, F, beta);
        const bool exit_ok = r.cm_small < beta / 4.0;
        // every extracted J carried mass >= (beta/4)|J|, so
        // beta * |sh(T_big)| <= beta * sum|J| <= 4 * mass_big
        const bool chain_ok = beta * r.shadow_big <= 4.0 * r.mass_big + 1e-12 &&
                              beta * r.sum_extracted <= 4.0 * r.mass_big + 1e-12;
        all_exit_ok = all_exit_ok && exit_ok;
        all_chain_ok = all_chain_ok && chain_ok;
        const double prod = r.shadow_big * beta / fmeasure;
        prod_max = std::max(prod_max, prod);
        mass_over_F = r.mass_total / fmeasure;
        b.csv.row({beta, r.cm_initial, r.cm_small, exit_ok ? 1.0 : 0.0,
                   static_cast<double>(r.big.size()), r.shadow_big, prod,
                   chain_ok ? 1.0 : 0.0});
    }
    b.results["all_exit_ok"] = all_exit_ok;
    b.results["all_chain_ok"] = all_chain_ok;
    b.results["shadow_product_max"] = prod_max;
    b.results["mass_total_over_F"] = mass_over_F;
    // mass_total <= C |F| with C the per-arc Bessel constants summed
    double bessel_sum = 0.0;
    for (const auto& w : om.intervals) bessel_sum += bessel_constant(n, w);
    b.results["bessel_sum"] = bessel_sum;
    b.results["product_within_4x_of_mass"] = prod_max <= 4.0 * mass_over_F + 1e-12;
    b.ok = all_exit_ok && all_chain_ok;
    (void)seed;
    return b;
}

// ---------------------------------------------------------------------------
// carleson-jn
// ---------------------------------------------------------------------------
CarlesonSeq random_carleson(int depth, Rng& rng, bool spike) {
    CarlesonSeq alpha(depth);
    if (spike) {
        long j = 0;
        for (int k = 0; k <= depth; ++k) {
            alpha.at(k, j) = 1.0 / static_cast<double>(1ll << k);
            j = 2 * j + static_cast<long>(rng.below(2));
        }
    } else {
        for (int k = 0; k <= depth; ++k) {
            const long count = 1ll << k;
            for (long j = 0; j < count; ++j)
                if (rng.uniform01() < 0.5)
                    alpha.at(k, j) = rng.uniform01() / static_cast<double>(count);
        }
    }
    return alpha;
}

Body exp_carleson_jn(const Config& cfg, std::uint64_t seed, std::optional<std::size_t>) {
    const int trials = static_cast<int>(cfg.get_long("carleson-jn", "trials", 1000));
    const auto ps = cfg.get_list("carleson-jn", "p", {2.0, 3.0, 4.0});
    const int d_lo = static_cast<int>(cfg.get_long("carleson-jn", "depth_lo", 8));
    const int d_hi = static_cast<int>(cfg.get_long("carleson-jn", "depth_hi", 14));

    Body b{Csv{"p", "depth", "max_ratio"}};
    json drift = json::object();
    for (double p : ps) {
        double max_lo = 0.0, max_hi = 0.0;
        for (int which = 0; which < 2; ++which) {
            const int depth = which == 0 ? d_lo : d_hi;
            double maxr = 0.0;
            for (int t = 0; t < trials; ++t) {
                Rng rng = Rng::stream(seed, 700 + static_cast<std::uint64_t>(t) +
                                                (which ? 1'000'000 : 0));
                const CarlesonSeq alpha = random_carleson(depth, rng, t % 2 == 1);
                maxr = std::max(maxr, jn_check(alpha, p, DyadicInterval{0, 0}));
            }
            b.csv.row({p, static_cast<double>(depth), maxr});
            (which == 0 ? max_lo : max_hi) = maxr;
        }
        drift[std::to_string(p)] = max_hi / max_lo;
        b.ok = b.ok && max_hi / max_lo < 2.0 && max_lo / max_hi < 2.0;
    }
    b.results["drift"] = drift;
    b.results["trials"] = trials;
    return b;
}

// ---------------------------------------------------------------------------
// product-jn
// ---------------------------------------------------------------------------
Body exp_product_jn(const Config& cfg, std::uint64_t seed, std::optional<std::size_t>) {
    const int trials = static_cast<int>(cfg.get_long("product-jn", "trials", 40));
    const double p = cfg.get_double("product-jn", "p", 2.0);
    const int depth = 3;  // 8x8 cells

    Body b{Csv{"trial", "steps", "all_halved", "max_step_constant", "exhaustive_cm",
               "rect_cm", "heuristic_cm"}};
    bool all_ok = true;
    int max_steps = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, 900 + static_cast<std::uint64_t>(t));
        ProductCarlesonSeq alpha(depth, depth);
        int placed = 0;
        while (placed < 10) {
            const int k1 = static_cast<int>(rng.below(depth + 1));
            const int k2 = static_cast<int>(rng.below(depth + 1));
            const long j1 = static_cast<long>(rng.below(1ull << k1));
            const long j2 = static_cast<long>(rng.below(1ull << k2));
            if (alpha.at(k1, j1, k2, j2) == 0.0) {
                const double area = 1.0 / static_cast<double>((1ll << k1) * (1ll << k2));
                alpha.at(k1, j1, k2, j2) = rng.uniform01() * area;
                ++placed;
            }
        }
        if (t % 2 == 1) {
            // pile extra mass on a fine-level corner chain (coarse levels would
            // flatten the peak) so the recursion has to peel an exceptional set
            for (int k = 2; k <= depth; ++k) {
                const double area = 1.0 / static_cast<double>((1ll << k) * (1ll << k));
                alpha.at(k, 0, k, 0) += 8.0 * area;
            }
        }
        const double cm_ex = product_cm_norm(alpha, ProductCmMode::Exhaustive);
        const double cm_rect = product_cm_norm(alpha, ProductCmMode::RectOnly);
        const double cm_heur = product_cm_norm(alpha, ProductCmMode::Heuristic);
        all_ok = all_ok && cm_heur <= cm_ex + 1e-12 && cm_rect <= cm_ex + 1e-12;

        CellMask U(64, true);
        bool halved = true;
        double maxc = 0.0;
        int steps = 0;
        while (true) {
            const ProductJnStep st = product_jn_step(alpha, U, p);
            halved = halved && st.halved;
            maxc = std::max(maxc, st.constant);
            ++steps;
            if (st.norm_FV == 0.0 || st.measure_V == 0.0 || steps > 12) break;
            U = st.V;
        }
        max_steps = std::max(max_steps, steps);
        all_ok = all_ok && halved && steps <= 12;
        b.csv.row({static_cast<double>(t), static_cast<double>(steps), halved ? 1.0 : 0.0,
                   maxc, cm_ex, cm_rect, cm_heur});
    }
    b.results["all_halved_and_ordered"] = all_ok;
    b.results["max_steps"] = max_steps;
    b.ok = all_ok;
    return b;
}

// ---------------------------------------------------------------------------
// varq
// ---------------------------------------------------------------------------
Body exp_varq(const Config& cfg, std::uint64_t seed, std::optional<std::size_t>) {
    const int trials = static_cast<int>(cfg.get_long("varq", "trials", 200));
    const long nsamp = cfg.get_long("varq", "n", 12);
    Body b{Csv{"check", "instances", "max_error", "pass"}};

    double max_err = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, 1100 + static_cast<std::uint64_t>(t));
        std::vector<cplx> m(static_cast<std::size_t>(nsamp));
        for (auto& z : m) z = rng.complex_gaussian();
        const double qs[4] = {1.0, 1.5, 2.0, 3.0};
        const double q = qs[t % 4];
        const double dp = var_q(std::span<const cplx>(m), q);
        const double br = var_q_exhaustive(std::span<const cplx>(m), q);
        max_err = std::max(max_err, std::abs(dp - br));
    }
    b.csv.tagged_row("dp_vs_exhaustive",
                     {static_cast<double>(trials), max_err, max_err < 1e-12 ? 1.0 : 0.0});
    b.ok = b.ok && max_err < 1e-12;

    // monotonicity in q and re-indexing invariance
    double mono_viol = 0.0;
    for (int t = 0; t < 50; ++t) {
        Rng rng = Rng::stream(seed, 1200 + static_cast<std::uint64_t>(t));
        std::vector<cplx> m(24);
        for (auto& z : m) z = rng.complex_gaussian();
        double prev = std::numeric_limits<double>::infinity();
        for (double q : {1.0, 1.5, 2.0, 3.0, 6.0}) {
            const double v = var_q(std::span<const cplx>(m), q);
            mono_viol = std::max(mono_viol, v - prev);
            prev = v;
        }
    }
    b.csv.tagged_row("q_monotonicity", {50, mono_viol, mono_viol <= 1e-12 ? 1.0 : 0.0});
    b.ok = b.ok && mono_viol <= 1e-12;

    // 2D: grid DP vs brute on 4x4 grids
    int gaps = 0;
    double max_gap = 0.0;
    for (int t = 0; t < 50; ++t) {
        Rng rng = Rng::stream(seed, 1300 + static_cast<std::uint64_t>(t));
        std::vector<std::vector<cplx>> m(4, std::vector<cplx>(4));
        for (auto& row : m)
            for (auto& z : row) z = rng.complex_gaussian();
        const double dp = var_q_2d(m, 2.0, Var2Mode::GridDp);
        const double br = var_q_2d(m, 2.0, Var2Mode::Brute);
        const double gap = br - dp;
        if (gap > 1e-12) ++gaps;
        max_gap = std::max(max_gap, gap);
    }
    b.csv.tagged_row("grid_dp_vs_brute_2d", {50, max_gap, gaps == 0 ? 1.0 : 0.0});
    b.results["dp_vs_exhaustive_max_error"] = max_err;
    b.results["grid_dp_gap_count"] = gaps;
    b.results["grid_dp_max_gap"] = max_gap;
    return b;
}

// ---------------------------------------------------------------------------
// martingale
// ---------------------------------------------------------------------------
Body exp_martingale(const Config& cfg, std::uint64_t seed, std::optional<std::size_t>) {
    const int jmax = static_cast<int>(cfg.get_long("martingale", "j_max", 8));
    Body b{Csv{"case", "n", "q", "max_scaled_piece", "cells_ok", "telescoping_err"}};

    double overall = 0.0;
    bool cells_all_ok = true;
    for (std::size_t n : {static_cast<std::size_t>(256), static_cast<std::size_t>(1024)}) {
        for (double q : {1.0, 1.5, 2.0}) {
            for (int which = 0; which < 3; ++which) {
                std::vector<cplx> m(n);
                std::string name;
                if (which == 0) {
                    name = "ramp";
                    for (std::size_t i = 0; i < n; ++i)
                        m[i] = static_cast<double>(i) / static_cast<double>(n - 1);
                } else if (which == 1) {
                    name = "jump";
                    for (std::size_t i = 0; i < n; ++i) m[i] = i >= n / 2 ? 1.0 : 0.0;
                } else {
                    name = "ramp_jump";
                    for (std::size_t i = 0; i < n; ++i)
                        m[i] = 0.5 * static_cast<double>(i) / static_cast<double>(n - 1) +
                               (i >= n / 3 ? 0.5 : 0.0);
                }
                const MartingaleDecomposition dec =
                    martingale_decompose(std::span<const cplx>(m), q, jmax);
                double maxsc = 0.0;
                bool cells_ok = true;
                for (int j = 1; j <= jmax; ++j) {
                    const auto& lev = dec.levels[static_cast<std::size_t>(j - 1)];
                    maxsc = std::max(maxsc, std::pow(2.0, j / q) * lev.sup_norm);
                    cells_ok = cells_ok && lev.cells.size() <= (std::size_t{1} << j);
                }
                // partial sums at j_max reproduce the finest cell averages
                double tel = 0.0;
                {
                    std::vector<cplx> sum(n, 0.0);
                    for (const auto& lev : dec.levels)
                        for (std::size_t i = 0; i < n; ++i) sum[i] += lev.piece[i];
                    const auto& fin = dec.levels.back();
                    for (const auto& [a, bnd] : fin.cells) {
                        cplx avg = 0.0;
                        for (std::size_t i = a; i < bnd; ++i)
                            avg += m[i] / (dec.vq > 0 ? dec.vq : 1.0);
                        avg /= static_cast<double>(bnd - a);
                        for (std::size_t i = a; i < bnd; ++i)
                            tel = std::max(tel, std::abs(sum[i] - avg));
                    }
                }
                overall = std::max(overall, maxsc);
                cells_all_ok = cells_all_ok && cells_ok;
                b.csv.tagged_row(name, {static_cast<double>(n), q, maxsc,
                                        cells_ok ? 1.0 : 0.0, tel});
                b.ok = b.ok && cells_ok && tel < 1e-12;
            }
        }
    }
    b.results["max_scaled_piece"] = overall;
    b.results["cells_ok"] = cells_all_ok;
    (void)seed;
    return b;
}

// ---------------------------------------------------------------------------
// crs (plus the decoupling sweep)
// ---------------------------------------------------------------------------
Body exp_crs(const Config& cfg, std::uint64_t seed, std::optional<std::size_t> nmax) {
    OpNormOptions opt;
    opt.restarts = static_cast<int>(cfg.get_long("crs", "restarts", 6));
    opt.iters = static_cast<int>(cfg.get_long("crs", "iters", 80));
    std::vector<std::size_t> ns{512, 2048};
    if (nmax && *nmax < 2048) ns = {*nmax / 2, *nmax};

    Body b{Csv{"family", "p", "q", "n", "lhs", "rhs", "ratio"}};
    json caps = json::object();
    for (auto [p, q] : std::vector<std::pair<double, double>>{{3.0, 2.0}, {4.0, 2.0}}) {
        json percap = json::object();
        for (std::size_t n : ns) {
            const long half = static_cast<long>(n / 2);
            double cap = 0.0;
            const auto blocks = lacunary_blocks(n);
            // family A: random steps constant per lacunary block
            for (int t = 0; t < 6; ++t) {
                Rng rng = Rng::stream(seed, 1500 + static_cast<std::uint64_t>(t) + n);
                std::vector<cplx> m(n, 0.0);
                for (const auto& blk : blocks) {
                    const double a = rng.uniform(-1.0, 1.0);
                    for (long k = blk.lo; k < blk.hi; ++k)
                        m[static_cast<std::size_t>(k + half)] = a;
                }
                const CrsReport r = crs_check(m, p, q, seed + 31, opt);
                cap = std::max(cap, r.ratio);
                b.csv.tagged_row("block_steps", {p, q, static_cast<double>(n), r.lhs, r.rhs,
                                                 r.ratio});
            }
            // family B: one unit jump inside every block
            {
                std::vector<cplx> m(n, 0.0);
                for (const auto& blk : blocks) {
                    const long mid = blk.lo + blk.width() / 2;
                    for (long k = mid; k < blk.hi; ++k)
                        m[static_cast<std::size_t>(k + half)] = 1.0;
                }
                const CrsReport r = crs_check(m, p, q, seed + 32, opt);
                cap = std::max(cap, r.ratio);
                b.csv.tagged_row("block_jump", {p, q, static_cast<double>(n), r.lhs, r.rhs,
                                                r.ratio});
            }
            percap[std::to_string(n)] = cap;
        }
        caps[std::to_string(static_cast<int>(p)) + "_" + std::to_string(static_cast<int>(q))] =
            percap;
    }
    b.results["caps"] = caps;

    // decoupling sweep
    const std::size_t nd = nmax.value_or(1024) >= 1024 ? 1024 : nmax.value_or(1024);
    const DecoupleReport d42 = decouple_check(nd, 4.0, 2.0, seed + 77, opt);
    json dj = json::object();
    dj["p"] = 4.0;
    dj["q"] = 2.0;
    dj["fitted_slope"] = d42.fitted_slope;
    dj["lacunary_lhs"] = d42.lacunary_lhs;
    dj["max_constant"] = d42.max_constant;
    for (const auto& row : d42.rows)
        b.csv.tagged_row("decouple", {4.0, 2.0, static_cast<double>(nd),
                                      static_cast<double>(row.n_sub), row.lhs, row.constant});
    b.results["decouple"] = dj;
    b.ok = b.ok && std::isfinite(d42.fitted_slope);
    return b;
}

// ---------------------------------------------------------------------------
// counterexample-rubio
// ---------------------------------------------------------------------------
Body exp_counterexample_rubio(const Config& cfg, std::uint64_t seed,
                              std::optional<std::size_t> nmax) {
    const std::size_t n = nmax.value_or(
        static_cast<std::size_t>(cfg.get_long("counterexample-rubio", "n", 1 << 14)));
    std::vector<long> Ns;
    for (double v : cfg.get_list("counterexample-rubio", "N_list",
                                 {64, 128, 256, 512, 1024, 2048}))
        if (static_cast<long>(v) <= static_cast<long>(n / 4)) Ns.push_back(static_cast<long>(v));

    Body b{Csv{"p", "N", "ratio", "witness_c", "f_norm"}};
    json fits = json::object();
    for (double p : {4.0 / 3.0, 1.9}) {
        const RubioCounterexampleReport rep = counterexample_rubio(n, Ns, p);
        for (const auto& row : rep.rows)
            b.csv.row({p, static_cast<double>(row.N), row.ratio, row.witness_value, row.fnorm});
        json f = json::object();
        f["ratio_exponent"] = rep.fitted_exponent;
        f["fnorm_exponent"] = rep.fnorm_fitted_exponent;
        f["expected_ratio_exponent"] = 1.0 / p - 0.5;
        fits[std::to_string(p)] = f;
        b.ok = b.ok && std::isfinite(rep.fitted_exponent);
    }
    b.results["fits"] = fits;
    b.results["n"] = n;
    (void)seed;
    return b;
}

// ---------------------------------------------------------------------------
// counterexample-multiplier
// ---------------------------------------------------------------------------
Body exp_counterexample_multiplier(const Config& cfg, std::uint64_t seed,
                                   std::optional<std::size_t> nmax) {
    const std::size_t n = nmax.value_or(
        static_cast<std::size_t>(cfg.get_long("counterexample-multiplier", "n", 8192)));
    const double p = cfg.get_double("counterexample-multiplier", "p", 4.0);
    const int trials = static_cast<int>(cfg.get_long("counterexample-multiplier", "trials", 12));
    const long spacing = cfg.get_long("counterexample-multiplier", "spacing", 8);
    std::vector<long> Ns;
    for (double v : cfg.get_list("counterexample-multiplier", "N_list", {16, 32, 64, 128, 256}))
        if (static_cast<long>(v) * spacing + spacing / 2 + 2 <= static_cast<long>(n / 2))
            Ns.push_back(static_cast<long>(v));

    const MultiplierCounterexampleReport rep =
        counterexample_multiplier(n, Ns, p, trials, seed, spacing);
    Body b{Csv{"N", "mean_ratio", "mean_norm_over_sqrtN", "witness_lower", "varq"}};
    double kh_min = std::numeric_limits<double>::infinity(), kh_max = 0.0;
    for (const auto& row : rep.rows) {
        b.csv.row({static_cast<double>(row.N), row.mean_ratio, row.mean_norm_over_sqrtN,
                   row.witness_lower, row.varq});
        kh_min = std::min(kh_min, row.mean_norm_over_sqrtN);
        kh_max = std::max(kh_max, row.mean_norm_over_sqrtN);
    }
    b.results["p"] = p;
    b.results["fitted_exponent"] = rep.fitted_exponent;
    b.results["expected_exponent"] = std::abs(0.5 - 1.0 / p);
    b.results["varq_fitted_exponent"] = rep.varq_fitted_exponent;
    b.results["khintchine_spread"] = kh_max / kh_min;
    b.ok = std::isfinite(rep.fitted_exponent);
    return b;
}

using Runner = std::function<Body(const Config&, std::uint64_t, std::optional<std::size_t>)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
    static const std::vector<std::pair<std::string, Runner>> reg = {
        {"square-sweep", exp_square_sweep},
        {"well-distributed", exp_well_distributed},
        {"tiles-bessel", exp_tiles_bessel},
        {"tail-probe", exp_tail_probe},
        {"greedy-split", exp_greedy_split},
        {"carleson-jn", exp_carleson_jn},
        {"product-jn", exp_product_jn},
        {"varq", exp_varq},
        {"martingale", exp_martingale},
        {"crs", exp_crs},
        {"counterexample-rubio", exp_counterexample_rubio},
        {"counterexample-multiplier", exp_counterexample_multiplier},
    };
    return reg;
}

}  // namespace

// --- Config ----------------------------------------------------------------

Config Config::parse(std::istream& is) {
    Config cfg;
    std::string line, section;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value, got: " + line);
        cfg.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::invalid_argument("config: cannot open " + file.string());
    return parse(is);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
    if (auto s = sections_.find(section); s != sections_.end())
        if (auto k = s->second.find(key); k != s->second.end()) return k->second;
    if (auto s = sections_.find(""); s != sections_.end())
        if (auto k = s->second.find(key); k != s->second.end()) return k->second;
    return std::nullopt;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    try {
        return std::stod(*v);
    } catch (...) {
        throw std::invalid_argument("config: bad number for " + key + ": " + *v);
    }
}

long Config::get_long(const std::string& section, const std::string& key, long fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    try {
        return std::stol(*v);
    } catch (...) {
        throw std::invalid_argument("config: bad integer for " + key + ": " + *v);
    }
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw std::invalid_argument("config: bad list entry for " + key + ": " + item);
        }
    }
    if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
    return out;
}

std::vector<std::pair<std::string, std::string>> Config::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [sec, kv] : sections_)
        for (const auto& [k, v] : kv)
            out.emplace_back(sec.empty() ? k : sec + "." + k, v);
    return out;
}

// --- runner ------------------------------------------------------------------

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : registry()) v.push_back(name);
        return v;
    }();
    return names;
}

ExperimentResult run_experiment(const std::string& name, const Config& cfg, std::uint64_t seed,
                                std::optional<std::size_t> n_override) {
    const auto& reg = registry();
    const auto it = std::find_if(reg.begin(), reg.end(),
                                 [&](const auto& e) { return e.first == name; });
    if (it == reg.end()) throw std::invalid_argument("unknown experiment: " + name);
    if (n_override && (!is_power_of_two(*n_override) || *n_override < 8))
        throw std::invalid_argument("--n must be a power of two >= 8");

    const auto t0 = std::chrono::steady_clock::now();
    Body body = it->second(cfg, seed, n_override);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    json rep;
    rep["experiment"] = name;
    rep["seed"] = seed;
    json cj = json::object();
    for (const auto& [k, v] : cfg.echo()) cj[k] = v;
    if (n_override) cj["n"] = *n_override;
    rep["config"] = cj;
    rep["versions"] = {{"lp_tile_lab", kVersion}, {"report_format", 1}};
    rep["status"] = body.ok ? "ok" : "numerical-failure";
    rep["results"] = body.results;
    rep["flags"] = body.flags;
    rep["wall_time_ms"] = ms;

    ExperimentResult out;
    out.csv = body.csv.str();
    out.json = rep.dump(2) + "\n";
    out.numerical_ok = body.ok;
    return out;
}

int emit_report(const std::string& name, const ExperimentResult& result,
                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream os(out_dir / (name + ".csv"), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (out_dir / (name + ".csv")).string());
        os << result.csv;
    }
    {
        std::ofstream os(out_dir / (name + ".json"), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (out_dir / (name + ".json")).string());
        os << result.json;
    }
    return result.numerical_ok ? 0 : 3;
}

}  // namespace lptile
