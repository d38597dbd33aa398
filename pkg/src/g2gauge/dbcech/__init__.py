"""Cech and Deligne-Beilinson machinery on covers with polyhedral decompositions."""

from .action import (
    ActionValue,
    CupDegree,
    LadderPattern,
    action_terms,
    action_total,
    brute_force_terms,
    cup_chain,
    cup_degree,
    extra_terms,
    gauge_variation,
    ladder_pieces,
)
from .cochains import (
    BackgroundCocycle,
    CechCochain,
    CocycleReport,
    DBClass,
    GaugeData,
    LocalForm,
    apply_gauge,
    background_check,
    cech_cup,
    cech_delta,
    db_cocycle_check,
    make_background,
    random_db_class,
    winding_cochain,
    zero_db_class,
)
from .complex import ChartSupport, Cover, PolyDecomp, RefComplex, TorusComplex, boundary
from .io import (
    Geometry,
    Instance,
    cocycles_from_json,
    cocycles_to_json,
    complex_from_json,
    complex_to_json,
    gauge_from_json,
    gauge_to_json,
    geometry_of,
    random_gauge,
    standard_theta,
    torus_instance,
)
