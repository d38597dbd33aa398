"""Semiclassical bookkeeping: mode reduction, zeta products, formal determinants."""

from .formaldet import (
    Det,
    FormalDet,
    Trace,
    Vol,
    ZscResult,
    assemble_Zsc,
    det_rescale,
    normalize,
    parse_det_expr,
)
from .modes import (
    BackgroundSplit,
    Factor,
    PiPoly,
    SymbolicAction,
    background_split,
    fourier_reduce,
    resubstitute,
    sector_residual,
)
from .zeta import PowerProduct, ZetaProduct, ZetaValue, parse_zeta_product, zeta_product_eval

__all__ = [
    "BackgroundSplit", "Det", "Factor", "FormalDet", "PiPoly", "PowerProduct", "SymbolicAction", "Trace",
    "Vol", "ZetaProduct", "ZetaValue", "ZscResult", "assemble_Zsc", "background_split", "det_rescale",
    "fourier_reduce", "normalize", "parse_det_expr", "parse_zeta_product", "resubstitute",
    "sector_residual", "zeta_product_eval",
]
