"""LTL model checking over automatic presentations of infinite-state systems."""
from __future__ import annotations

from .closures import Pds, PdsProvider, provider_finite, provider_generic, provider_pds
from .engines import HOLDS, UNKNOWN, VIOLATED, CheckResult, check
from .presentations import AutomaticPresentation, validate_presentation
from .recurrence import RecurrenceConfig, reach_inf

__all__ = ["AutomaticPresentation", "CheckResult", "HOLDS", "Pds", "PdsProvider", "RecurrenceConfig",
           "UNKNOWN", "VIOLATED", "check", "provider_finite", "provider_generic", "provider_pds",
           "reach_inf", "validate_presentation"]
__version__ = "0.1.0"
