"""Exact image-set, differential and Walsh analysis of maps on finite fields."""

from .finite_field import FieldSpec, build_field
from .map_repr import BivariateMap, MapTable, PolyRepr, from_expression, interpolate
from .spectra import differential_profile, preimage_profile
from .theorems import TheoremReport, run_all
from .walsh import full_profile

__all__ = [
    "BivariateMap",
    "FieldSpec",
    "MapTable",
    "PolyRepr",
    "TheoremReport",
    "build_field",
    "differential_profile",
    "from_expression",
    "full_profile",
    "interpolate",
    "preimage_profile",
    "run_all",
]
