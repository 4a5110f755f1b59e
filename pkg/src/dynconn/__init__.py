"""Deterministic worst-case fully dynamic connectivity."""

from .engine import Connectivity, OpCounters
from .params import DENSE, PACKED, ParamError

__all__ = ["Connectivity", "OpCounters", "DENSE", "PACKED", "ParamError"]
