// Python bindings for the main operations: signals travel as 1D (or 2D)
// complex numpy arrays, interval collections as lists of (lo, hi) pairs.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lptile/carleson.hpp"
#include "lptile/multiplier.hpp"
#include "lptile/projections.hpp"
#include "lptile/tiles.hpp"
#include "lptile/torus.hpp"
#include "lptile/torus2.hpp"
#include "lptile/variation.hpp"
#include "lptile/well_distributed.hpp"

namespace py = pybind11;
using namespace lptile;

namespace {

using carray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using darray = py::array_t<double, py::array::c_style | py::array::forcecast>;

TorusSignal to_signal(const carray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1D complex array");
    std::vector<cplx> v(a.data(), a.data() + a.shape(0));
    return TorusSignal(std::move(v));
}

carray from_signal(const TorusSignal& f) {
    carray out({static_cast<py::ssize_t>(f.n())});
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
}

Spectrum to_spectrum(const carray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1D complex array");
    std::vector<cplx> v(a.data(), a.data() + a.shape(0));
    return Spectrum(std::move(v));
}

carray from_spectrum(const Spectrum& s) {
    carray out({static_cast<py::ssize_t>(s.n())});
    std::copy(s.data().begin(), s.data().end(), out.mutable_data());
    return out;
}

TorusSignal2 to_signal2(const carray& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2D complex array");
    TorusSignal2 f(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), f.data().begin());
    return f;
}

carray from_signal2(const TorusSignal2& f) {
    carray out({static_cast<py::ssize_t>(f.n1()), static_cast<py::ssize_t>(f.n2())});
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
}

IntervalCollection to_intervals(const std::vector<std::pair<long, long>>& arcs) {
    IntervalCollection om;
    for (const auto& [lo, hi] : arcs) om.intervals.push_back({lo, hi});
    return om;
}

std::vector<cplx> to_vector(const carray& a) {
    return std::vector<cplx>(a.data(), a.data() + a.size());
}

CarlesonSeq to_carleson(const std::vector<std::tuple<int, long, double>>& entries) {
    int depth = 0;
    for (const auto& [k, j, v] : entries) depth = std::max(depth, k);
    CarlesonSeq alpha(depth);
    for (const auto& [k, j, v] : entries) alpha.at(k, j) += v;
    return alpha;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Littlewood-Paley tile laboratory on the discrete torus";

    // grid core -------------------------------------------------------------
    m.def("dft", [](const carray& f) { return from_spectrum(dft(to_signal(f))); },
          "Unitary-compatible transform: coefficients indexed -n/2..n/2-1");
    m.def("idft", [](const carray& s) { return from_signal(idft(to_spectrum(s))); });
    m.def("lp_norm", [](const carray& f, double p) { return lp_norm(to_signal(f), p); },
          py::arg("f"), py::arg("p"));
    m.def("modulate", [](const carray& f, long xi) { return from_signal(modulate(to_signal(f), xi)); });
    m.def("translate", [](const carray& f, long j) { return from_signal(translate(to_signal(f), j)); });
    m.def("dilate", [](const carray& f, int log2_lambda, double p) {
        return from_signal(dilate(to_signal(f), log2_lambda, p));
    });

    // projections -----------------------------------------------------------
    m.def("project", [](const carray& f, long lo, long hi) {
        return from_signal(project(to_signal(f), {lo, hi}));
    });
    m.def("hilbert", [](const carray& f) { return from_signal(hilbert(to_signal(f))); });
    m.def("maximal", [](const carray& f) { return from_signal(maximal(to_signal(f))); });
    m.def("square_sharp", [](const carray& f, const std::vector<std::pair<long, long>>& om) {
        return from_signal(square_sharp(to_signal(f), to_intervals(om)));
    });
    m.def("square_smooth",
          [](const carray& f, const std::vector<std::pair<long, long>>& om, bool override_wd) {
              const SmoothSquareResult r = square_smooth(to_signal(f), to_intervals(om), override_wd);
              py::dict d;
              d["g"] = from_signal(r.g);
              d["overlap_constant"] = r.overlap_constant;
              d["tripling_overlap"] = r.tripling_overlap;
              d["well_distributed"] = r.well_distributed;
              d["overridden"] = r.overridden;
              return d;
          },
          py::arg("f"), py::arg("omega"), py::arg("override_well_distributed") = false);
    m.def("make_window", [](std::size_t n, std::pair<long, long> plateau,
                            std::pair<long, long> support) {
        const Window w = make_window(n, {plateau.first, plateau.second},
                                     {support.first, support.second});
        darray out({static_cast<py::ssize_t>(n)});
        std::copy(w.hat.begin(), w.hat.end(), out.mutable_data());
        return out;
    });
    m.def("khintchine_gfunction", [](const carray& f, int trials, std::uint64_t seed) {
        const KhintchineReport r = khintchine_gfunction(to_signal(f), trials, seed);
        py::dict d;
        d["ps"] = r.ps;
        d["max_kernel_ratio"] = r.max_kernel_ratio;
        d["min_kernel_ratio"] = r.min_kernel_ratio;
        d["gfunction_ratio"] = r.gfunction_ratio;
        d["scales"] = r.scales;
        return d;
    });

    // well distributed --------------------------------------------------------
    m.def("well_refine", [](const std::vector<std::pair<long, long>>& om) {
        const WellRefinement r = well_refine(to_intervals(om));
        std::vector<std::tuple<long, long, bool>> out;
        for (const auto& p : r.pieces) out.emplace_back(p.arc.lo, p.arc.hi, p.lumped);
        return out;
    });
    m.def("overlap_bound", [](const std::vector<std::pair<long, long>>& om, std::size_t n) {
        return overlap_bound(to_intervals(om), n);
    });
    m.def("is_well_distributed", [](const std::vector<std::pair<long, long>>& om, std::size_t n) {
        return is_well_distributed(to_intervals(om), n);
    });

    // tiles -------------------------------------------------------------------
    m.def("tile_operator", [](const carray& f, const std::vector<std::pair<long, long>>& om) {
        const TorusSignal sig = to_signal(f);
        const TileSet T = build_tiles(sig.n(), to_intervals(om));
        const TileOpResult r = tile_operator(sig, T);
        std::vector<std::tuple<long, long, int, long, std::complex<double>>> coefs;
        for (std::size_t s = 0; s < T.tiles.size(); ++s)
            coefs.emplace_back(T.tiles[s].freq.lo, T.tiles[s].freq.hi,
                               T.tiles[s].spatial.level, T.tiles[s].spatial.offset, r.coefs[s]);
        return py::make_tuple(from_signal(r.out), coefs);
    });
    m.def("bessel_constant", [](std::size_t n, long lo, long hi) {
        return bessel_constant(n, {lo, hi});
    });
    m.def("bessel_constant_krylov", [](std::size_t n, long lo, long hi) {
        return bessel_constant_krylov(n, {lo, hi});
    });
    m.def("translation_average_check", [](std::size_t n, long lo, long hi, const carray& f) {
        return translation_average_check(n, {lo, hi}, to_signal(f));
    });
    m.def("greedy_bmo_split",
          [](const std::vector<std::pair<long, long>>& om, const std::vector<bool>& F,
             double beta) {
              const TileSet T = build_tiles(F.size(), to_intervals(om));
              const GreedySplitResult r = greedy_bmo_split(T, F, beta);
              py::dict d;
              d["big"] = r.big;
              d["small"] = r.small;
              std::vector<std::pair<int, long>> js;
              for (const auto& J : r.extracted) js.emplace_back(J.level, J.offset);
              d["J"] = js;
              d["shadow_big"] = r.shadow_big;
              d["cm_small"] = r.cm_small;
              d["mass_big"] = r.mass_big;
              return d;
          });
    m.def("restricted_type_check",
          [](const std::vector<std::pair<long, long>>& om, const std::vector<bool>& F, double p) {
              const TileSet T = build_tiles(F.size(), to_intervals(om));
              return restricted_type_check(T, F, p);
          });

    // carleson ------------------------------------------------------------------
    m.def("dyadic_bmo", [](const carray& g) { return dyadic_bmo(to_signal(g)); });
    m.def("sharp_function", [](const carray& g) { return from_signal(sharp_function(to_signal(g))); });
    m.def("cm_norm", [](const std::vector<std::tuple<int, long, double>>& entries) {
        return cm_norm(to_carleson(entries));
    });
    m.def("jn_check", [](const std::vector<std::tuple<int, long, double>>& entries, double p,
                         int level, long offset) {
        return jn_check(to_carleson(entries), p, DyadicInterval{level, offset});
    });
    m.def("strong_maximal", [](const carray& f) { return from_signal2(strong_maximal(to_signal2(f))); });
    m.def("square_sharp2",
          [](const carray& f,
             const std::vector<std::tuple<long, long, long, long>>& rects) {
              std::vector<FreqRect> om;
              for (const auto& [a, b, c, d] : rects) om.push_back({{a, b}, {c, d}});
              return from_signal2(square_sharp2(to_signal2(f), om));
          });

    // variation ------------------------------------------------------------------
    m.def("var_q", [](const carray& v, double q) {
        const auto m_ = to_vector(v);
        return var_q(std::span<const cplx>(m_), q);
    });
    m.def("var_q_exhaustive", [](const carray& v, double q) {
        const auto m_ = to_vector(v);
        return var_q_exhaustive(std::span<const cplx>(m_), q);
    });
    m.def("vq_norm", [](const carray& v, double q) {
        const auto m_ = to_vector(v);
        return vq_norm(std::span<const cplx>(m_), q);
    });
    m.def("variation_profile", [](const carray& v, double q) {
        const auto m_ = to_vector(v);
        return variation_profile(std::span<const cplx>(m_), q);
    });
    m.def("martingale_decompose", [](const carray& v, double q, int j_max) {
        const auto m_ = to_vector(v);
        const MartingaleDecomposition dec =
            martingale_decompose(std::span<const cplx>(m_), q, j_max);
        py::list levels;
        for (const auto& lev : dec.levels) {
            py::dict d;
            d["cells"] = lev.cells;
            carray piece({static_cast<py::ssize_t>(lev.piece.size())});
            std::copy(lev.piece.begin(), lev.piece.end(), piece.mutable_data());
            d["piece"] = piece;
            d["sup_norm"] = lev.sup_norm;
            levels.append(d);
        }
        py::dict out;
        out["vq"] = dec.vq;
        out["mu_total"] = dec.mu_total;
        out["levels"] = levels;
        return out;
    });
    m.def("var_q_2d", [](const carray& grid, double q, const std::string& mode) {
        if (grid.ndim() != 2) throw std::invalid_argument("expected a 2D array");
        std::vector<std::vector<cplx>> g(static_cast<std::size_t>(grid.shape(0)),
                                         std::vector<cplx>(static_cast<std::size_t>(grid.shape(1))));
        for (py::ssize_t i = 0; i < grid.shape(0); ++i)
            for (py::ssize_t j = 0; j < grid.shape(1); ++j)
                g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    grid.data()[i * grid.shape(1) + j];
        return var_q_2d(g, q, mode == "brute" ? Var2Mode::Brute : Var2Mode::GridDp);
    }, py::arg("grid"), py::arg("q"), py::arg("mode") = "grid-dp");

    // multipliers -------------------------------------------------------------------
    m.def("apply_multiplier", [](const carray& f, const carray& mult) {
        const auto m_ = to_vector(mult);
        return from_signal(apply_multiplier(to_signal(f), m_));
    });
    m.def("op_norm_p", [](const carray& mult, double p, std::uint64_t seed, int restarts,
                          int iters) {
        const auto m_ = to_vector(mult);
        const OpNormEstimate est = op_norm_p(m_, p, seed, OpNormOptions{restarts, iters});
        return py::make_tuple(est.value, from_signal(est.witness));
    }, py::arg("m"), py::arg("p"), py::arg("seed") = 1, py::arg("restarts") = 20,
       py::arg("iters") = 200);
    m.def("crs_check", [](const carray& mult, double p, double q, std::uint64_t seed) {
        const auto m_ = to_vector(mult);
        const CrsReport r = crs_check(m_, p, q, seed);
        py::dict d;
        d["lhs"] = r.lhs;
        d["rhs"] = r.rhs;
        d["ratio"] = r.ratio;
        return d;
    }, py::arg("m"), py::arg("p"), py::arg("q"), py::arg("seed") = 1);
    m.def("lacunary_blocks", [](std::size_t n) {
        std::vector<std::pair<long, long>> out;
        for (const auto& b : lacunary_blocks(n)) out.emplace_back(b.lo, b.hi);
        return out;
    });

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
