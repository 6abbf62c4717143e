"""Unit time-phase signal sets from Gauss sums, with correlation measures and bounds."""

__version__ = "0.1.0"

from .finite_field import FieldSpec, make_field
from .signals import (
    CorrelationProfile,
    Signal,
    SignalSet,
    bridge_full,
    bridge_phase,
    profile,
    set_from_json,
    set_to_json,
)
from .constructions import construct_cyclotomic, construct_gauss, verify_construction
from .bounds import BoundQuery, evaluate_bounds, judge

__all__ = [
    "BoundQuery",
    "CorrelationProfile",
    "FieldSpec",
    "Signal",
    "SignalSet",
    "bridge_full",
    "bridge_phase",
    "construct_cyclotomic",
    "construct_gauss",
    "evaluate_bounds",
    "judge",
    "make_field",
    "profile",
    "set_from_json",
    "set_to_json",
    "verify_construction",
]
