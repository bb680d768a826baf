# zakframe/errors.py
from __future__ import annotations

from typing import Optional

# Exit codes shared by every CLI command.
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ASSUMPTION = 2
EXIT_NUMERICAL = 3


class ZakFrameError(Exception):
    """Base class; `exit_code` is what the CLI returns when this escapes a command."""

    exit_code: int = EXIT_USAGE


# ------------------------------------------------------------------------------
# Usage / validation (exit 1)
# ------------------------------------------------------------------------------
class SpecValidationError(ZakFrameError, ValueError):
    exit_code = EXIT_USAGE


class GrammarError(SpecValidationError):
    pass


class ConfigError(ZakFrameError, ValueError):
    exit_code = EXIT_USAGE


class ShapeError(ZakFrameError, ValueError):
    exit_code = EXIT_USAGE


class DegenerateRangeError(ZakFrameError, ZeroDivisionError):
    exit_code = EXIT_USAGE


# ------------------------------------------------------------------------------
# Assumption / hypothesis violations (exit 2)
# ------------------------------------------------------------------------------
class UncertifiableError(ZakFrameError):
    """No usable decay envelope on the requested side."""

    exit_code = EXIT_ASSUMPTION


class AssumptionViolation(ZakFrameError):
    """One of the three window assumptions (summability, q > 0, Lipschitz Zak) fails."""

    exit_code = EXIT_ASSUMPTION

    def __init__(self, assumption: int, detail: str):
        self.assumption = assumption
        self.detail = detail
        super().__init__(f"assumption-{assumption} violation: {detail}")


class HypothesisViolation(ZakFrameError, ValueError):
    exit_code = EXIT_ASSUMPTION


# ------------------------------------------------------------------------------
# Numerical infeasibility (exit 3)
# ------------------------------------------------------------------------------
class AccuracyError(ZakFrameError, ArithmeticError):
    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, bound: Optional[float] = None):
        self.bound = bound
        super().__init__(message if bound is None else f"{message} (estimated error {bound:.3e})")


class ResolutionInfeasibleError(ZakFrameError):
    exit_code = EXIT_NUMERICAL


class ReconstructionRefused(ZakFrameError):
    exit_code = EXIT_NUMERICAL
