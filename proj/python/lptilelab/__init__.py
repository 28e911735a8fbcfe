"""Numerical laboratory for Littlewood-Paley square functions, time-frequency
tiles, Carleson measures, and q-variation multipliers on the discrete torus."""

from lptilelab._core import (  # noqa: F401
    __version__,
    apply_multiplier,
    bessel_constant,
    bessel_constant_krylov,
    cm_norm,
    crs_check,
    dft,
    dilate,
    dyadic_bmo,
    greedy_bmo_split,
    hilbert,
    idft,
    is_well_distributed,
    jn_check,
    khintchine_gfunction,
    lacunary_blocks,
    lp_norm,
    make_window,
    martingale_decompose,
    maximal,
    modulate,
    op_norm_p,
    overlap_bound,
    project,
    restricted_type_check,
    sharp_function,
    square_sharp,
    square_sharp2,
    square_smooth,
    strong_maximal,
    tile_operator,
    translate,
    translation_average_check,
    var_q,
    var_q_2d,
    var_q_exhaustive,
    variation_profile,
    vq_norm,
    well_refine,
)
