"""Generalized earth mover's distance on d histograms, with exact expected values."""
from .core import (
    BinShape,
    CapacityError,
    Composition,
    CostArray,
    DataError,
    build_cost_array,
    cost,
    monge_check_full,
    monge_check_planes,
)
from .genfunc import continuous_expected, h_bivariate, unit_normalized_expected, w_poly
from .transport import (
    DistTuple,
    brute_force_emd,
    continuous_emd,
    discrete_emd,
    greedy_joint,
    rsk_joint,
    unit_normalized_emd,
)

__all__ = [
    "BinShape",
    "CapacityError",
    "Composition",
    "CostArray",
    "DataError",
    "DistTuple",
    "brute_force_emd",
    "build_cost_array",
    "continuous_emd",
    "continuous_expected",
    "cost",
    "discrete_emd",
    "greedy_joint",
    "h_bivariate",
    "monge_check_full",
    "monge_check_planes",
    "rsk_joint",
    "unit_normalized_emd",
    "unit_normalized_expected",
    "w_poly",
]
